#include "ptower/fixture.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ptower/errors.hpp"

namespace ptower::filters {

namespace detail {
extern const std::string_view kShippedFixture;
}

namespace {

using nlohmann::json;
constexpr const char* kFormat = "ptower-fixture-v1";

pc::AbelianInvariants read_ab(const json& j, int p) {
  if (!j.is_array()) throw FixtureError("abelian invariants must be an array");
  pc::AbelianInvariants out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned()) throw FixtureError("abelian invariant must be a positive integer");
    std::uint64_t x = v.get<std::uint64_t>();
    if (x < 2) throw FixtureError("abelian invariant must exceed 1");
    for (std::uint64_t y = x; y > 1; y /= static_cast<std::uint64_t>(p))
      if (y % static_cast<std::uint64_t>(p)) throw FixtureError("abelian invariant is not a power of the prime");
    out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Profile read_profile(const json& j, int p) {
  if (!j.is_array()) throw FixtureError("profile must be an array");
  Profile out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("ab") || !e.contains("count")) throw FixtureError("profile entry needs ab and count");
    const auto ab = read_ab(e.at("ab"), p);
    const auto& cnt = e.at("count");
    if (!cnt.is_number_unsigned() || cnt.get<std::uint64_t>() == 0) throw FixtureError("profile count must be positive");
    for (std::uint64_t i = 0; i < cnt.get<std::uint64_t>(); ++i) out.push_back(ab);
  }
  std::sort(out.begin(), out.end());
  return out;
}

json write_ab(const pc::AbelianInvariants& ab) {
  json out = json::array();
  for (auto x : ab) out.push_back(x);
  return out;
}

json write_profile(const Profile& prof) {
  json out = json::array();
  for (std::size_t i = 0; i < prof.size();) {
    std::size_t j = i;
    while (j < prof.size() && prof[j] == prof[i]) ++j;
    out.push_back({{"ab", write_ab(prof[i])}, {"count", j - i}});
    i = j;
  }
  return out;
}

}  // namespace

ArithmeticFixture parse_fixture(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FixtureError(std::string("fixture is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FixtureError("fixture must be a JSON object");
  if (j.value("format", std::string()) != kFormat) throw FixtureError("unsupported fixture format");
  ArithmeticFixture f;
  try {
    f.prime = j.value("prime", 2);
    if (f.prime < 2) throw FixtureError("bad prime");
    f.target_ab = read_ab(j.at("target_ab"), f.prime);
    f.index2 = read_profile(j.at("index2"), f.prime);
    f.index4 = read_profile(j.at("index4"), f.prime);
    if (j.contains("critical")) {
      for (const auto& c : j.at("critical")) {
        CriticalEntry e;
        e.ab = read_ab(c.at("ab"), f.prime);
        e.maximal_profile = read_profile(c.at("maximal_profile"), f.prime);
        if (std::count(f.index4.begin(), f.index4.end(), e.ab) != 1)
          throw FixtureError("critical entry " + pc::format_invariants(e.ab) + " is not unique in the index-4 profile");
        f.critical.push_back(std::move(e));
      }
    }
    if (j.contains("lattice")) {
      for (const auto& pr : j.at("lattice")) {
        const int a = pr.at(0).get<int>();
        const int b = pr.at(1).get<int>();
        if (a < 0 || b < 0 || a >= static_cast<int>(f.index2.size()) || b >= static_cast<int>(f.index4.size()))
          throw FixtureError("lattice pair out of range");
        f.lattice.emplace_back(a, b);
      }
    }
    if (j.contains("capitulation")) {
      for (const auto& c : j.at("capitulation")) {
        CapitulationEntry e;
        e.subgroup_key = c.at("subgroup_key").get<std::string>();
        e.kernel_invariants = read_ab(c.at("kernel_invariants"), f.prime);
        f.capitulation.push_back(std::move(e));
      }
    }
  } catch (const json::exception& e) {
    throw FixtureError(std::string("malformed fixture: ") + e.what());
  }
  return f;
}

ArithmeticFixture load_fixture(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureError("cannot open fixture " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_fixture(ss.str());
}

std::string_view shipped_fixture_text() { return detail::kShippedFixture; }

const ArithmeticFixture& shipped_fixture() {
  static const ArithmeticFixture f = parse_fixture(detail::kShippedFixture);
  return f;
}

std::string to_json(const ArithmeticFixture& f) {
  json j;
  j["format"] = kFormat;
  j["prime"] = f.prime;
  j["target_ab"] = write_ab(f.target_ab);
  j["index2"] = write_profile(f.index2);
  j["index4"] = write_profile(f.index4);
  json crit = json::array();
  for (const auto& c : f.critical) crit.push_back({{"ab", write_ab(c.ab)}, {"maximal_profile", write_profile(c.maximal_profile)}});
  j["critical"] = crit;
  json lat = json::array();
  for (const auto& [a, b] : f.lattice) lat.push_back({a, b});
  j["lattice"] = lat;
  json cap = json::array();
  for (const auto& c : f.capitulation)
    cap.push_back({{"subgroup_key", c.subgroup_key}, {"kernel_invariants", write_ab(c.kernel_invariants)}});
  j["capitulation"] = cap;
  return j.dump(2) + "\n";
}

std::string fixture_hash(const ArithmeticFixture& f) { return sha256_hex(to_json(f)); }

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr)) throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

bool operator==(const CriticalEntry& a, const CriticalEntry& b) {
  return a.ab == b.ab && a.maximal_profile == b.maximal_profile;
}
bool operator==(const CapitulationEntry& a, const CapitulationEntry& b) {
  return a.subgroup_key == b.subgroup_key && a.kernel_invariants == b.kernel_invariants;
}
bool operator==(const ArithmeticFixture& a, const ArithmeticFixture& b) {
  return a.prime == b.prime && a.target_ab == b.target_ab && a.index2 == b.index2 && a.index4 == b.index4 &&
         a.critical == b.critical && a.lattice == b.lattice && a.capitulation == b.capitulation;
}

}  // namespace ptower::filters
