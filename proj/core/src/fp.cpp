#include "ptower/fp.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

#include "ptower/errors.hpp"

namespace ptower::tree {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  FpPresentation run() {
    expect('<');
    std::vector<std::string> gens;
    skip();
    if (peek() != '|' && peek() != '>') {
      gens.push_back(ident());
      while (accept(',')) gens.push_back(ident());
    }
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (index_.count(gens[i])) throw ParseError("duplicate generator '" + gens[i] + "'", pos_);
      index_[gens[i]] = static_cast<int>(i);
    }
    std::vector<Word> rels;
    if (accept('|')) {
      skip();
      if (peek() != '>') {
        rels.push_back(relation());
        while (accept(',')) rels.push_back(relation());
      }
    }
    expect('>');
    skip();
    if (pos_ != s_.size()) throw ParseError("trailing characters", pos_);
    return FpPresentation(std::move(gens), std::move(rels));
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected generator name", pos_);
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  long integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
    }
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ParseError("expected integer exponent", pos_);
    const long v = std::stol(std::string(s_.substr(start, pos_ - start)));
    return neg ? -v : v;
  }

  static bool starts_term(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '(' || c == '[' || c == '1'; }

  // lhs [= rhs] -> lhs * rhs^-1
  Word relation() {
    Word lhs = product();
    if (!accept('=')) return lhs;
    Word rhs = product();
    rhs.exponent = -rhs.exponent;
    Word w;
    w.kind = Word::Kind::kProduct;
    w.children.push_back(std::move(lhs));
    w.children.push_back(std::move(rhs));
    return w;
  }

  Word product() {
    Word w;
    w.kind = Word::Kind::kProduct;
    while (true) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        continue;
      }
      if (!starts_term(c)) break;
      w.children.push_back(term());
    }
    if (w.children.empty()) throw ParseError("expected a word", pos_);
    if (w.children.size() == 1) return std::move(w.children.front());
    return w;
  }

  Word term() {
    Word base;
    const char c = peek();
    if (c == '1') {
      ++pos_;
      base.kind = Word::Kind::kProduct;
    } else if (c == '(' || c == '[') {
      const char close = c == '(' ? ')' : ']';
      ++pos_;
      std::vector<Word> parts{product()};
      while (accept(',')) parts.push_back(product());
      expect(close);
      if (parts.size() == 1) {
        base = std::move(parts.front());
        if (base.kind != Word::Kind::kProduct || base.exponent != 1) {
          Word wrap;
          wrap.kind = Word::Kind::kProduct;
          wrap.children.push_back(std::move(base));
          base = std::move(wrap);
        }
      } else {
        base.kind = Word::Kind::kCommutator;
        base.children = std::move(parts);
      }
    } else {
      const std::size_t at = pos_;
      const std::string name = ident();
      auto it = index_.find(name);
      if (it != index_.end()) {
        base.kind = Word::Kind::kGenerator;
        base.generator = it->second;
      } else {
        // Juxtaposed one-letter generators: "ab^2" is a * b^2.
        Word prefix;
        prefix.kind = Word::Kind::kProduct;
        for (std::size_t k = 0; k < name.size(); ++k) {
          auto one = index_.find(name.substr(k, 1));
          if (one == index_.end()) throw ParseError("unknown generator '" + name + "'", at);
          Word g;
          g.kind = Word::Kind::kGenerator;
          g.generator = one->second;
          if (k + 1 < name.size())
            prefix.children.push_back(std::move(g));
          else
            base = std::move(g);
        }
        while (accept('^')) base.exponent *= integer();
        if (prefix.children.empty()) return base;
        prefix.children.push_back(std::move(base));
        return prefix;
      }
    }
    while (accept('^')) base.exponent *= integer();
    return base;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::map<std::string, int> index_;
};

void sums(const Word& w, long mult, std::vector<long>& out) {
  switch (w.kind) {
    case Word::Kind::kGenerator:
      out[w.generator] += mult * w.exponent;
      break;
    case Word::Kind::kProduct:
      for (const auto& c : w.children) sums(c, mult * w.exponent, out);
      break;
    case Word::Kind::kCommutator:
      break;
  }
}

}  // namespace

FpPresentation::FpPresentation(std::vector<std::string> generators, std::vector<Word> relators)
    : generators_(std::move(generators)), relators_(std::move(relators)) {
  std::function<void(const Word&)> check = [&](const Word& w) {
    if (w.kind == Word::Kind::kGenerator && (w.generator < 0 || w.generator >= ngens()))
      throw InvalidArgument("relator references an undeclared generator");
    if (w.kind == Word::Kind::kCommutator && w.children.size() < 2)
      throw InvalidArgument("commutator needs at least two entries");
    for (const auto& c : w.children) check(c);
  };
  for (const auto& r : relators_) check(r);
}

FpPresentation FpPresentation::parse(std::string_view text) { return Parser(text).run(); }

std::vector<long> FpPresentation::exponent_sums(const Word& w) const {
  std::vector<long> out(static_cast<std::size_t>(ngens()), 0);
  sums(w, 1, out);
  return out;
}

std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
  std::string body;
  bool atomic = true;
  switch (w.kind) {
    case Word::Kind::kGenerator:
      body = names.at(w.generator);
      break;
    case Word::Kind::kProduct:
      if (w.children.empty()) {
        body = "1";
      } else {
        for (const auto& c : w.children) body += word_to_string(c, names);
        atomic = w.children.size() == 1 && w.children.front().exponent == 1;
      }
      break;
    case Word::Kind::kCommutator:
      body = "(";
      for (std::size_t i = 0; i < w.children.size(); ++i) body += (i ? "," : "") + word_to_string(w.children[i], names);
      body += ")";
      break;
  }
  if (w.exponent == 1) return body;
  if (!atomic) body = "(" + body + ")";
  return body + "^" + std::to_string(w.exponent);
}

std::string FpPresentation::to_string() const {
  std::ostringstream os;
  os << '<';
  for (int i = 0; i < ngens(); ++i) os << (i ? "," : "") << generators_[i];
  os << " | ";
  for (std::size_t i = 0; i < relators_.size(); ++i) os << (i ? ", " : "") << word_to_string(relators_[i], generators_);
  os << '>';
  return os.str();
}

pc::Element evaluate(const Word& w, const pc::PcPresentation& g, const std::vector<pc::Element>& images) {
  pc::Element v = g.identity();
  switch (w.kind) {
    case Word::Kind::kGenerator:
      v = images.at(w.generator);
      break;
    case Word::Kind::kProduct:
      for (const auto& c : w.children) g.multiply_in_place(v, evaluate(c, g, images));
      break;
    case Word::Kind::kCommutator:
      v = evaluate(w.children.front(), g, images);
      for (std::size_t i = 1; i < w.children.size(); ++i) v = g.commutator(v, evaluate(w.children[i], g, images));
      break;
  }
  return w.exponent == 1 ? v : g.power(v, w.exponent);
}

namespace {

const std::map<std::string, std::string, std::less<>>& builtins() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"koch-q2", "<a,b,c,d | a^-2(d,c), b^-2(d,a)((d,b),b), c^-2(b,a)((d,b),b), d^-2(c,a)(d,a)(d,b), (b,c)>"},
      {"conj72-1",
       "<a,b,c,d | a^-2(d,c), b^-2(d,a)((d,b),b), c^-2(b,a)((d,b),b), "
       "d^-2(c,a)(d,a)(d,b)(b,a,a)(c,a,a)(d,a,a), (b,c)>"},
      {"conj72-2",
       "<a,b,c,d | a^-2(d,c), b^-2(d,a)((d,b),b), c^-2(b,a)(b,a,d)(c,a,a)((d,b),b), "
       "d^-2(c,a)(d,a)(d,b)(b,a,a)(b,a,d), (b,c)>"},
      {"ex93",
       "<a,b,c,d | a^-2(d,c), b^-2(d,a)(d,b,b)(b,a,a,c), c^-2(b,a)(d,b,b)(b,a,a,c), d^-2(c,a)(d,a)(d,b), (b,c)>"},
  };
  return table;
}

}  // namespace

FpPresentation builtin_presentation(std::string_view name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) throw InvalidArgument("unknown built-in presentation '" + std::string(name) + "'");
  return FpPresentation::parse(it->second);
}

std::vector<std::string> builtin_presentation_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtins()) out.push_back(k);
  return out;
}

}  // namespace ptower::tree
