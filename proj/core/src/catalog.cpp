#include "ptower/catalog.hpp"

#include <fstream>
#include <sstream>

#include "ptower/errors.hpp"
#include "ptower/pquotient.hpp"
#include "ptower/serialize.hpp"

namespace ptower::tree {

pc::PcPresentation quaternion8() {
  return p_quotient(FpPresentation::parse("<a,b | a^4, a^2 b^-2, b^-1 a b a>"), 2, 2).group();
}

pc::PcPresentation dihedral8() { return p_quotient(FpPresentation::parse("<a,b | a^2, b^2, (ab)^4>"), 2, 2).group(); }

namespace {

bool is_builtin(const std::string& spec) {
  for (const auto& n : builtin_presentation_names())
    if (n == spec) return true;
  return false;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "' (not a file, built-in name, q8, d8 or elem:D)");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FpPresentation resolve_fp(const std::string& spec) {
  if (is_builtin(spec)) return builtin_presentation(spec);
  return FpPresentation::parse(read_file(spec));
}

pc::PcPresentation resolve_group(const std::string& spec, int prime, int fp_class) {
  if (spec == "q8") return quaternion8();
  if (spec == "d8") return dihedral8();
  if (spec.rfind("elem:", 0) == 0) {
    int d = 0;
    try {
      d = std::stoi(spec.substr(5));
    } catch (const std::exception&) {
      throw InvalidArgument("bad group spec '" + spec + "'");
    }
    if (d < 0) throw InvalidArgument("bad group spec '" + spec + "'");
    return pc::PcPresentation::elementary_abelian(prime, d);
  }
  if (is_builtin(spec)) return p_quotient(builtin_presentation(spec), prime, fp_class).group();
  const std::string text = read_file(spec);
  if (text.rfind("pcp-v1", 0) == 0) return pc::deserialize(text);
  return p_quotient(FpPresentation::parse(text), prime, fp_class).group();
}

}  // namespace ptower::tree
