#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ptower/pc.hpp"

namespace ptower::tree {

// Group word: a generator power, a product, or a left-normed commutator
// (x1, x2, ..., xk) = ((x1, x2), ..., xk), each raised to `exponent`.
struct Word {
  enum class Kind { kGenerator, kProduct, kCommutator };
  Kind kind = Kind::kProduct;
  int generator = -1;
  long exponent = 1;
  std::vector<Word> children;
};

class FpPresentation {
 public:
  FpPresentation() = default;
  FpPresentation(std::vector<std::string> generators, std::vector<Word> relators);

  // Parses "<a,b | a^2, (a,b)b^-1, x = y>" style text. Juxtaposition or '*'
  // multiplies, (x,y) and [x,y] are commutators x^-1 y^-1 x y.
  static FpPresentation parse(std::string_view text);

  int ngens() const { return static_cast<int>(generators_.size()); }
  const std::vector<std::string>& generators() const { return generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  std::string to_string() const;

  // Exponent sum of each generator in a relator.
  std::vector<long> exponent_sums(const Word& w) const;

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

std::string word_to_string(const Word& w, const std::vector<std::string>& names);

// Evaluates a word in a pc group, generator k mapping to images[k].
pc::Element evaluate(const Word& w, const pc::PcPresentation& g, const std::vector<pc::Element>& images);

// Presentations shipped with the library: "koch-q2", "conj72-1", "conj72-2", "ex93".
FpPresentation builtin_presentation(std::string_view name);
std::vector<std::string> builtin_presentation_names();

}  // namespace ptower::tree
