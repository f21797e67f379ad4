#include "ptower/serialize.hpp"

#include <sstream>

#include "ptower/errors.hpp"

namespace ptower::pc {

namespace {

void write_rhs(std::ostringstream& os, const Element& e) {
  os << " :";
  for (std::size_t k = 0; k < e.size(); ++k)
    if (e[k]) os << ' ' << (k + 1) << '^' << static_cast<int>(e[k]);
}

std::string def_token(const Definition& d) {
  switch (d.kind) {
    case Definition::Kind::kNone:
      return "-";
    case Definition::Kind::kPower:
      return "p" + std::to_string(d.j + 1);
    case Definition::Kind::kCommutator:
      return "c" + std::to_string(d.j + 1) + "," + std::to_string(d.i + 1);
  }
  return "-";
}

Definition parse_def(const std::string& tok) {
  if (tok == "-") return Definition::none();
  if (tok.size() > 1 && tok[0] == 'p') return Definition::power(std::stoi(tok.substr(1)) - 1);
  if (tok.size() > 1 && tok[0] == 'c') {
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw ParseError("bad definition token '" + tok + "'", 0);
    return Definition::commutator(std::stoi(tok.substr(1, comma - 1)) - 1, std::stoi(tok.substr(comma + 1)) - 1);
  }
  throw ParseError("bad definition token '" + tok + "'", 0);
}

}  // namespace

std::string serialize(const PcPresentation& g) {
  std::ostringstream os;
  const int n = g.ngens();
  os << "pcp-v1\n";
  os << "p " << g.prime() << '\n';
  os << "ngens " << n << '\n';
  os << "weights";
  for (int w : g.weights()) os << ' ' << w;
  os << '\n';
  os << "definitions";
  for (int k = 0; k < n; ++k) os << ' ' << def_token(g.definition(k));
  os << '\n';
  for (int j = 0; j < n; ++j) {
    if (g.power_rhs(j).is_identity()) continue;
    os << "power " << (j + 1);
    write_rhs(os, g.power_rhs(j));
    os << '\n';
  }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      if (g.commutator_rhs(j, i).is_identity()) continue;
      os << "commutator " << (j + 1) << ' ' << (i + 1);
      write_rhs(os, g.commutator_rhs(j, i));
      os << '\n';
    }
  os << "end\n";
  return os.str();
}

PcPresentation deserialize(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  auto next = [&]() {
    if (!std::getline(is, line)) throw ParseError("unexpected end of pc presentation", 0);
    return std::istringstream(line);
  };
  {
    auto ls = next();
    std::string tag;
    ls >> tag;
    if (tag != "pcp-v1") throw ParseError("unsupported pc presentation version '" + tag + "'", 0);
  }
  PcData d;
  std::string key;
  int n = 0;
  {
    auto ls = next();
    ls >> key >> d.prime;
    if (key != "p" || !ls) throw ParseError("expected 'p'", 0);
  }
  {
    auto ls = next();
    ls >> key >> n;
    if (key != "ngens" || !ls || n < 0) throw ParseError("expected 'ngens'", 0);
  }
  {
    auto ls = next();
    ls >> key;
    if (key != "weights") throw ParseError("expected 'weights'", 0);
    d.weights.resize(n);
    for (int k = 0; k < n; ++k)
      if (!(ls >> d.weights[k])) throw ParseError("too few weights", 0);
  }
  {
    auto ls = next();
    ls >> key;
    if (key != "definitions") throw ParseError("expected 'definitions'", 0);
    for (int k = 0; k < n; ++k) {
      std::string tok;
      if (!(ls >> tok)) throw ParseError("too few definitions", 0);
      d.definitions.push_back(parse_def(tok));
    }
  }
  d.powers.assign(n, Element(static_cast<std::size_t>(n)));
  d.commutators.assign(static_cast<std::size_t>(n) * n, Element(static_cast<std::size_t>(n)));
  auto read_rhs = [&](std::istringstream& ls, Element& e) {
    std::string colon, tok;
    ls >> colon;
    if (colon != ":") throw ParseError("expected ':' in relation", 0);
    while (ls >> tok) {
      const auto caret = tok.find('^');
      if (caret == std::string::npos) throw ParseError("bad relation entry '" + tok + "'", 0);
      const int g = std::stoi(tok.substr(0, caret)) - 1;
      const int v = std::stoi(tok.substr(caret + 1));
      if (g < 0 || g >= n || v < 0 || v >= d.prime) throw ParseError("relation entry out of range '" + tok + "'", 0);
      e[g] = static_cast<std::uint8_t>(v);
    }
  };
  while (true) {
    auto ls = next();
    ls >> key;
    if (key == "end") break;
    int j = 0, i = 0;
    if (key == "power") {
      ls >> j;
      if (j < 1 || j > n) throw ParseError("power index out of range", 0);
      read_rhs(ls, d.powers[j - 1]);
    } else if (key == "commutator") {
      ls >> j >> i;
      if (j < 1 || j > n || i < 1 || i >= j) throw ParseError("commutator index out of range", 0);
      read_rhs(ls, d.commutators[(j - 1) * n + (i - 1)]);
    } else {
      throw ParseError("unexpected record '" + key + "'", 0);
    }
  }
  return PcPresentation(std::move(d));
}

}  // namespace ptower::pc
