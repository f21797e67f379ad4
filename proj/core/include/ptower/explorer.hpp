#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptower/filters.hpp"
#include "ptower/fp.hpp"
#include "ptower/pc.hpp"

namespace ptower::explorer {

enum class NodeStatus { kOpen, kPruned, kTerminal, kMoribund, kSurvivor };
std::string to_string(NodeStatus s);

struct SearchNode {
  pc::PcPresentation group;
  // Allowable-subspace certificates from the root.
  std::vector<std::string> path;
  int p_class = 0;
  std::vector<filters::FilterVerdict> verdicts;
  NodeStatus status = NodeStatus::kOpen;

  // Path joined by '/', "root" for the root itself.
  std::string certificate() const;
};

// Filter names: ab, rank, profile2, profile4, critical, capitulation.
const std::vector<std::string>& filter_names();

struct SearchConfig {
  std::vector<std::string> pipeline;
  int max_class = 2;
  // 0 selects d(G) + 1.
  int rmax = 0;
  filters::MatchMode profile_mode = filters::MatchMode::kQuotientCompatible;
  // Sampled mode draws `samples` allowable subspaces per node instead of
  // enumerating orbit representatives.
  bool sampled = false;
  int samples = 16;
  std::uint64_t seed = 1;
  // Survivors are tested for moribundity to this depth when positive.
  int moribund_depth = 0;
  std::uint64_t max_bitmap_bits = std::uint64_t{1} << 34;
};

struct ClassStats {
  int p_class = 0;
  std::uint64_t parents = 0;
  std::uint64_t enumerated = 0;
  // Children left after each pipeline stage, in pipeline order.
  std::vector<std::uint64_t> after_filter;
  std::map<std::string, std::uint64_t> pruned_by;
  std::uint64_t indeterminate = 0;
  std::uint64_t survivors = 0;
  std::uint64_t terminal = 0;
  std::uint64_t moribund = 0;
};

// Complete state of a search; serializes to the checkpoint format.
struct Checkpoint {
  static constexpr const char* kVersion = "ptower-checkpoint-v1";

  std::string fixture_sha256;
  SearchConfig config;
  pc::PcPresentation root;
  NodeStatus root_status = NodeStatus::kOpen;
  // Nodes of the class being expanded, and the survivors of the next class.
  std::vector<SearchNode> frontier;
  std::vector<SearchNode> next_frontier;
  std::size_t node = 0;
  // Allowable subspaces of frontier[node] still to be processed from `child`.
  std::optional<std::vector<std::string>> pending;
  std::size_t child = 0;
  std::vector<ClassStats> stats;
  std::string rng_state;
  bool complete = false;

  std::string to_text() const;
  static Checkpoint from_text(const std::string& text);
};

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);
// Loads and verifies the fixture hash.
Checkpoint load_checkpoint(const std::string& path, const filters::ArithmeticFixture& fixture);

struct RunLimits {
  // Children evaluated in this run before checkpointing and stopping (0: no limit).
  std::uint64_t budget = 0;
  int threads = 1;
  std::string checkpoint_path;
  // Also checkpoint after this many evaluated children (0: only when stopping).
  std::uint64_t checkpoint_every = 0;
  std::function<void(const std::string&)> progress;
};

enum class RunStatus { kComplete, kBudgetExhausted };

struct SearchResult {
  RunStatus status = RunStatus::kComplete;
  NodeStatus root_status = NodeStatus::kOpen;
  std::vector<ClassStats> stats;
  // Survivors of the last class reached.
  std::vector<SearchNode> survivors;
};

Checkpoint start_search(const pc::PcPresentation& root, const SearchConfig& config,
                        const filters::ArithmeticFixture& fixture);
SearchResult run_search(Checkpoint& state, const filters::ArithmeticFixture& fixture, const RunLimits& limits = {});

SearchResult search(const pc::PcPresentation& root, const SearchConfig& config,
                    const filters::ArithmeticFixture& fixture, const RunLimits& limits = {});
// Root Q_c of a finitely presented group.
SearchResult search(const tree::FpPresentation& root, int prime, int root_class, const SearchConfig& config,
                    const filters::ArithmeticFixture& fixture, const RunLimits& limits = {});

// Applies the pipeline to one group, stopping at the first failing filter.
struct Evaluation {
  std::vector<filters::FilterVerdict> verdicts;
  bool passed = true;
  std::optional<int> nuclear_rank;
};
Evaluation evaluate(const pc::PcPresentation& g, const SearchConfig& config, const filters::ArithmeticFixture& fixture);

std::string stats_to_json(const std::vector<ClassStats>& stats);
std::string stats_to_text(const std::vector<ClassStats>& stats, const std::vector<std::string>& pipeline);

}  // namespace ptower::explorer
