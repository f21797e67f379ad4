#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptower/catalog.hpp"
#include "ptower/errors.hpp"
#include "ptower/explorer.hpp"
#include "ptower/pquotient.hpp"
#include "ptower/report.hpp"
#include "ptower/serialize.hpp"

using namespace ptower;
using explorer::NodeStatus;
using explorer::RunStatus;

namespace {

filters::ArithmeticFixture small_fixture() {
  // Fixture of a class-3 descendant of (Z/2)^2, so some branches survive.
  const auto fp = tree::FpPresentation::parse("<a,b | a^4, b^4, (a,b,a), (a,b,b)>");
  return filters::fixture_of(tree::p_quotient(fp, 2, 3).group());
}

explorer::SearchConfig small_config() {
  explorer::SearchConfig c;
  c.pipeline = {"rank", "ab", "profile2"};
  c.max_class = 4;
  c.rmax = 3;
  return c;
}

std::vector<std::string> fingerprint(const explorer::SearchResult& r) {
  std::vector<std::string> out;
  for (const auto& n : r.survivors) out.push_back(n.certificate() + " " + pc::serialize(n.group));
  out.push_back(explorer::stats_to_json(r.stats));
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ptower_test_" + name)).string();
}

}  // namespace

TEST(Explorer, TerminalRootHasNoChildren) {
  const auto r = explorer::search(tree::quaternion8(), small_config(), small_fixture());
  EXPECT_EQ(r.status, RunStatus::kComplete);
  EXPECT_EQ(r.root_status, NodeStatus::kTerminal);
  EXPECT_TRUE(r.survivors.empty());
  for (const auto& s : r.stats) EXPECT_EQ(s.enumerated, 0u);
}

TEST(Explorer, UnknownFilterIsRejected) {
  auto c = small_config();
  c.pipeline.push_back("nonsense");
  EXPECT_THROW(explorer::search(pc::PcPresentation::elementary_abelian(2, 2), c, small_fixture()), InvalidArgument);
}

TEST(Explorer, StatsAreConsistent) {
  const auto fx = small_fixture();
  const auto r = explorer::search(pc::PcPresentation::elementary_abelian(2, 2), small_config(), fx);
  ASSERT_EQ(r.status, RunStatus::kComplete);
  ASSERT_FALSE(r.stats.empty());
  EXPECT_FALSE(r.survivors.empty());
  for (const auto& s : r.stats) {
    ASSERT_EQ(s.after_filter.size(), 3u);
    std::uint64_t prev = s.enumerated;
    for (auto a : s.after_filter) {
      EXPECT_LE(a, prev);
      prev = a;
    }
    std::uint64_t pruned = 0;
    for (const auto& [name, n] : s.pruned_by) pruned += n;
    EXPECT_EQ(pruned + s.after_filter.back(), s.enumerated);
  }
  for (const auto& n : r.survivors) {
    EXPECT_EQ(n.p_class, r.stats.back().p_class);
    EXPECT_EQ(static_cast<int>(n.path.size()), n.p_class - 1);
    EXPECT_TRUE(explorer::evaluate(n.group, small_config(), fx).passed);
  }
}

TEST(Explorer, ThreadCountDoesNotChangeResults) {
  const auto fx = small_fixture();
  const auto root = pc::PcPresentation::elementary_abelian(2, 2);
  explorer::RunLimits many;
  many.threads = 4;
  const auto a = explorer::search(root, small_config(), fx);
  const auto b = explorer::search(root, small_config(), fx, many);
  EXPECT_EQ(fingerprint(a), fingerprint(b));
}

TEST(Explorer, InterruptAndResumeMatchesUninterruptedRun) {
  const auto fx = small_fixture();
  const auto root = pc::PcPresentation::elementary_abelian(2, 2);
  const auto full = explorer::search(root, small_config(), fx);
  const std::string path = temp_path("resume.ckpt");
  for (std::uint64_t budget : {1u, 7u, 70u}) {
    auto state = explorer::start_search(root, small_config(), fx);
    explorer::RunLimits first;
    first.budget = budget;
    first.checkpoint_path = path;
    auto r = explorer::run_search(state, fx, first);
    int rounds = 0;
    while (r.status == RunStatus::kBudgetExhausted) {
      auto loaded = explorer::load_checkpoint(path, fx);
      EXPECT_EQ(loaded.to_text(), state.to_text());
      r = explorer::run_search(loaded, fx, first);
      state = loaded;
      ASSERT_LT(++rounds, 100000);
    }
    EXPECT_GT(rounds, 0);
    EXPECT_EQ(fingerprint(r), fingerprint(full)) << "budget " << budget;
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, RoundTripIsByteExact) {
  const auto fx = small_fixture();
  auto state = explorer::start_search(pc::PcPresentation::elementary_abelian(2, 2), small_config(), fx);
  explorer::RunLimits limits;
  limits.budget = 5;
  explorer::run_search(state, fx, limits);
  const std::string text = state.to_text();
  EXPECT_EQ(explorer::Checkpoint::from_text(text).to_text(), text);
  const std::string path = temp_path("roundtrip.ckpt");
  explorer::save_checkpoint(path, state);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), text);
  std::filesystem::remove(path);
}

TEST(Checkpoint, MismatchesAndCorruptionAreRejected) {
  const auto fx = small_fixture();
  const auto state = explorer::start_search(pc::PcPresentation::elementary_abelian(2, 2), small_config(), fx);
  const std::string path = temp_path("bad.ckpt");
  explorer::save_checkpoint(path, state);
  EXPECT_THROW(explorer::load_checkpoint(path, filters::shipped_fixture()), CheckpointError);
  auto copy = state;
  EXPECT_THROW(explorer::run_search(copy, filters::shipped_fixture()), CheckpointError);

  std::string text = state.to_text();
  const auto at = text.find("\"max_class\":4");
  ASSERT_NE(at, std::string::npos);
  std::string corrupted = text;
  corrupted.replace(at, 13, "\"max_class\":5");
  EXPECT_THROW(explorer::Checkpoint::from_text(corrupted), CheckpointError);

  std::string version = text;
  const auto v = version.find("ptower-checkpoint-v1");
  ASSERT_NE(v, std::string::npos);
  version.replace(v, 20, "ptower-checkpoint-v0");
  EXPECT_THROW(explorer::Checkpoint::from_text(version), CheckpointError);
  EXPECT_THROW(explorer::Checkpoint::from_text("{}"), CheckpointError);
  EXPECT_THROW(explorer::Checkpoint::from_text("garbage"), CheckpointError);
  EXPECT_THROW(explorer::load_checkpoint(temp_path("missing.ckpt")), CheckpointError);
  std::filesystem::remove(path);
}

TEST(Report, QuaternionGroup) {
  explorer::ReportOptions opts;
  opts.moribund_depth = 1;
  const auto r = explorer::make_report(tree::quaternion8(), opts);
  EXPECT_EQ(r.order_log, 3);
  EXPECT_EQ(r.d, 2);
  EXPECT_EQ(r.p_class, 2);
  EXPECT_EQ(r.abelianization, (pc::AbelianInvariants{2, 2}));
  EXPECT_EQ(r.multiplicator_rank, 2);
  EXPECT_EQ(r.nuclear_rank, 0);
  EXPECT_TRUE(r.terminal);
  EXPECT_EQ(r.moribund, "moribund");
  ASSERT_GE(r.profiles.size(), 1u);
  EXPECT_EQ(r.profiles[0], filters::Profile(3, pc::AbelianInvariants{4}));
  ASSERT_EQ(r.powers.size(), 3u);
  EXPECT_EQ(r.powers[0].index_log, 2);
  EXPECT_EQ(r.powers[1].index_log, 3);
  EXPECT_FALSE(explorer::to_text(r).empty());
  EXPECT_NE(explorer::to_json(r).find("\"nuclear_rank\""), std::string::npos);
}
