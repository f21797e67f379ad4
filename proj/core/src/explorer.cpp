#include "ptower/explorer.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ptower/descendants.hpp"
#include "ptower/errors.hpp"
#include "ptower/serialize.hpp"

namespace ptower::explorer {

using filters::FilterVerdict;
using filters::Outcome;
using nlohmann::json;

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::kOpen:
      return "open";
    case NodeStatus::kPruned:
      return "pruned";
    case NodeStatus::kTerminal:
      return "terminal";
    case NodeStatus::kMoribund:
      return "moribund";
    case NodeStatus::kSurvivor:
      return "survivor";
  }
  return "?";
}

std::string SearchNode::certificate() const {
  if (path.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) out += (i ? "/" : "") + path[i];
  return out;
}

const std::vector<std::string>& filter_names() {
  static const std::vector<std::string> names{"ab", "rank", "profile2", "profile4", "critical", "capitulation"};
  return names;
}

namespace {

NodeStatus status_from(const std::string& s) {
  for (auto st : {NodeStatus::kOpen, NodeStatus::kPruned, NodeStatus::kTerminal, NodeStatus::kMoribund,
                  NodeStatus::kSurvivor})
    if (to_string(st) == s) return st;
  throw CheckpointError("unknown node status " + s);
}

Outcome outcome_from(const std::string& s) {
  for (auto o : {Outcome::kPass, Outcome::kFail, Outcome::kIndeterminate})
    if (filters::to_string(o) == s) return o;
  throw CheckpointError("unknown filter outcome " + s);
}

json node_to_json(const SearchNode& n) {
  json verdicts = json::array();
  for (const auto& v : n.verdicts)
    verdicts.push_back({{"filter", v.filter}, {"outcome", filters::to_string(v.outcome)}, {"witness", v.witness}});
  return {{"group", pc::serialize(n.group)},
          {"path", n.path},
          {"class", n.p_class},
          {"status", to_string(n.status)},
          {"verdicts", verdicts}};
}

SearchNode node_from_json(const json& j) {
  SearchNode n;
  n.group = pc::deserialize(j.at("group").get<std::string>());
  n.path = j.at("path").get<std::vector<std::string>>();
  n.p_class = j.at("class").get<int>();
  n.status = status_from(j.at("status").get<std::string>());
  for (const auto& v : j.at("verdicts"))
    n.verdicts.push_back({v.at("filter").get<std::string>(), outcome_from(v.at("outcome").get<std::string>()),
                          v.at("witness").get<std::string>()});
  return n;
}

json config_to_json(const SearchConfig& c) {
  return {{"pipeline", c.pipeline},
          {"max_class", c.max_class},
          {"rmax", c.rmax},
          {"profile_mode", c.profile_mode == filters::MatchMode::kExact ? "exact" : "quotient-compatible"},
          {"sampled", c.sampled},
          {"samples", c.samples},
          {"seed", c.seed},
          {"moribund_depth", c.moribund_depth},
          {"max_bitmap_bits", c.max_bitmap_bits}};
}

SearchConfig config_from_json(const json& j) {
  SearchConfig c;
  c.pipeline = j.at("pipeline").get<std::vector<std::string>>();
  c.max_class = j.at("max_class").get<int>();
  c.rmax = j.at("rmax").get<int>();
  c.profile_mode =
      j.at("profile_mode").get<std::string>() == "exact" ? filters::MatchMode::kExact : filters::MatchMode::kQuotientCompatible;
  c.sampled = j.at("sampled").get<bool>();
  c.samples = j.at("samples").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.moribund_depth = j.at("moribund_depth").get<int>();
  c.max_bitmap_bits = j.at("max_bitmap_bits").get<std::uint64_t>();
  return c;
}

json stats_json(const std::vector<ClassStats>& stats) {
  json out = json::array();
  for (const auto& s : stats)
    out.push_back({{"class", s.p_class},
                   {"parents", s.parents},
                   {"enumerated", s.enumerated},
                   {"after_filter", s.after_filter},
                   {"pruned_by", s.pruned_by},
                   {"indeterminate", s.indeterminate},
                   {"survivors", s.survivors},
                   {"terminal", s.terminal},
                   {"moribund", s.moribund}});
  return out;
}

std::vector<ClassStats> stats_from_json(const json& j) {
  std::vector<ClassStats> out;
  for (const auto& s : j) {
    ClassStats c;
    c.p_class = s.at("class").get<int>();
    c.parents = s.at("parents").get<std::uint64_t>();
    c.enumerated = s.at("enumerated").get<std::uint64_t>();
    c.after_filter = s.at("after_filter").get<std::vector<std::uint64_t>>();
    c.pruned_by = s.at("pruned_by").get<std::map<std::string, std::uint64_t>>();
    c.indeterminate = s.at("indeterminate").get<std::uint64_t>();
    c.survivors = s.at("survivors").get<std::uint64_t>();
    c.terminal = s.at("terminal").get<std::uint64_t>();
    c.moribund = s.at("moribund").get<std::uint64_t>();
    out.push_back(std::move(c));
  }
  return out;
}

void validate(const SearchConfig& c) {
  for (const auto& f : c.pipeline)
    if (std::find(filter_names().begin(), filter_names().end(), f) == filter_names().end())
      throw InvalidArgument("unknown filter '" + f + "'");
  if (c.max_class < 1) throw InvalidArgument("max class must be positive");
  if (c.rmax < 0) throw InvalidArgument("rmax must be non-negative");
  if (c.sampled && c.samples < 1) throw InvalidArgument("sample count must be positive");
}

}  // namespace

std::string Checkpoint::to_text() const {
  json body;
  body["version"] = kVersion;
  body["fixture_sha256"] = fixture_sha256;
  body["config"] = config_to_json(config);
  body["root"] = pc::serialize(root);
  body["root_status"] = to_string(root_status);
  json fr = json::array();
  for (const auto& n : frontier) fr.push_back(node_to_json(n));
  body["frontier"] = fr;
  json nf = json::array();
  for (const auto& n : next_frontier) nf.push_back(node_to_json(n));
  body["next_frontier"] = nf;
  body["node"] = node;
  body["pending"] = pending ? json(*pending) : json(nullptr);
  body["child"] = child;
  body["stats"] = stats_json(stats);
  body["rng"] = rng_state;
  body["complete"] = complete;
  const std::string dumped = body.dump();
  json out{{"sha256", filters::sha256_hex(dumped)}, {"state", std::move(body)}};
  return out.dump() + "\n";
}

Checkpoint Checkpoint::from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("state") || !j.contains("sha256")) throw CheckpointError("not a checkpoint file");
  const json& body = j.at("state");
  if (!body.is_object() || body.value("version", std::string()) != kVersion)
    throw CheckpointError("checkpoint version mismatch");
  if (filters::sha256_hex(body.dump()) != j.at("sha256").get<std::string>())
    throw CheckpointError("checkpoint hash mismatch (file is corrupted)");
  Checkpoint cp;
  try {
    cp.fixture_sha256 = body.at("fixture_sha256").get<std::string>();
    cp.config = config_from_json(body.at("config"));
    cp.root = pc::deserialize(body.at("root").get<std::string>());
    cp.root_status = status_from(body.at("root_status").get<std::string>());
    for (const auto& n : body.at("frontier")) cp.frontier.push_back(node_from_json(n));
    for (const auto& n : body.at("next_frontier")) cp.next_frontier.push_back(node_from_json(n));
    cp.node = body.at("node").get<std::size_t>();
    if (!body.at("pending").is_null()) cp.pending = body.at("pending").get<std::vector<std::string>>();
    cp.child = body.at("child").get<std::size_t>();
    cp.stats = stats_from_json(body.at("stats"));
    cp.rng_state = body.at("rng").get<std::string>();
    cp.complete = body.at("complete").get<bool>();
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
  return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint " + tmp);
    out << cp.to_text();
    out.flush();
    if (!out) throw CheckpointError("failed writing checkpoint " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("cannot move checkpoint into place: " + ec.message());
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return Checkpoint::from_text(ss.str());
}

Checkpoint load_checkpoint(const std::string& path, const filters::ArithmeticFixture& fixture) {
  Checkpoint cp = load_checkpoint(path);
  if (cp.fixture_sha256 != filters::fixture_hash(fixture))
    throw CheckpointError("fixture hash mismatch: checkpoint was written against another fixture");
  return cp;
}

Evaluation evaluate(const pc::PcPresentation& g, const SearchConfig& config, const filters::ArithmeticFixture& fixture) {
  Evaluation ev;
  std::optional<tree::CoveringData> cov;
  std::optional<pc::SubgroupLattice> lattice;
  int lattice_level = 0;
  auto need_lattice = [&](int level) -> const pc::SubgroupLattice& {
    if (!lattice || lattice_level < level) {
      lattice = pc::low_index_subgroups(g, level);
      lattice_level = level;
    }
    return *lattice;
  };
  for (const auto& name : config.pipeline) {
    FilterVerdict v;
    if (name == "ab") {
      v = filters::abelianization_filter(g, fixture.target_ab);
    } else if (name == "rank") {
      if (!cov) cov = tree::p_covering_group(g);
      v = filters::relator_bound_filter(*cov, config.rmax > 0 ? config.rmax : filters::default_rmax(g));
    } else if (name == "profile2") {
      v = filters::profile_filter(need_lattice(1), fixture, 1, config.profile_mode);
    } else if (name == "profile4") {
      v = filters::profile_filter(need_lattice(2), fixture, 2, config.profile_mode);
    } else if (name == "critical") {
      v = filters::critical_filter(g, need_lattice(2), fixture, config.profile_mode);
    } else if (name == "capitulation") {
      v = filters::capitulation_filter(g, need_lattice(2), fixture);
    } else {
      throw InvalidArgument("unknown filter '" + name + "'");
    }
    const bool failed = v.failed();
    ev.verdicts.push_back(std::move(v));
    if (failed) {
      ev.passed = false;
      break;
    }
  }
  if (cov) ev.nuclear_rank = cov->nuclear_rank;
  return ev;
}

Checkpoint start_search(const pc::PcPresentation& root, const SearchConfig& config,
                        const filters::ArithmeticFixture& fixture) {
  validate(config);
  Checkpoint cp;
  cp.fixture_sha256 = filters::fixture_hash(fixture);
  cp.config = config;
  cp.root = tree::prepare(root);
  SearchNode node;
  node.group = cp.root;
  node.p_class = cp.root.p_class();
  node.status = tree::is_terminal(cp.root) ? NodeStatus::kTerminal : NodeStatus::kOpen;
  cp.root_status = node.status;
  cp.frontier.push_back(std::move(node));
  std::ostringstream rs;
  rs << std::mt19937_64(config.seed);
  cp.rng_state = rs.str();
  return cp;
}

namespace {

struct ChildResult {
  SearchNode node;
  bool passed = false;
};

ClassStats& stats_for(std::vector<ClassStats>& stats, int c, std::size_t stages) {
  for (auto& s : stats)
    if (s.p_class == c) return s;
  ClassStats s;
  s.p_class = c;
  s.after_filter.assign(stages, 0);
  stats.push_back(std::move(s));
  return stats.back();
}

bool expandable(const SearchNode& n) { return n.status == NodeStatus::kOpen || n.status == NodeStatus::kSurvivor; }

SearchResult result_of(const Checkpoint& cp, RunStatus status) {
  SearchResult r;
  r.status = status;
  r.root_status = cp.root_status;
  r.stats = cp.stats;
  if (cp.complete)
    for (const auto& n : cp.frontier)
      if (!n.path.empty()) r.survivors.push_back(n);
  return r;
}

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

SearchResult run_search(Checkpoint& cp, const filters::ArithmeticFixture& fixture, const RunLimits& limits) {
  if (cp.fixture_sha256 != filters::fixture_hash(fixture))
    throw CheckpointError("fixture hash mismatch: search state was built against another fixture");
  validate(cp.config);
  const SearchConfig& cfg = cp.config;
  const std::size_t stages = cfg.pipeline.size();
  std::mt19937_64 rng;
  {
    std::istringstream rs(cp.rng_state);
    rs >> rng;
  }
  auto save = [&] {
    std::ostringstream rs;
    rs << rng;
    cp.rng_state = rs.str();
    if (!limits.checkpoint_path.empty()) save_checkpoint(limits.checkpoint_path, cp);
  };
  auto say = [&](const std::string& msg) {
    if (limits.progress) limits.progress(msg);
  };
  std::uint64_t evaluated = 0;
  std::uint64_t since_save = 0;
  constexpr std::size_t kChunk = 64;

  while (!cp.complete) {
    const bool any_open = std::any_of(cp.frontier.begin(), cp.frontier.end(), expandable);
    if (!any_open || cp.frontier.front().p_class >= cfg.max_class) {
      cp.complete = true;
      break;
    }
    const int child_class = cp.frontier.front().p_class + 1;
    stats_for(cp.stats, child_class, stages);

    for (; cp.node < cp.frontier.size(); ++cp.node, cp.pending.reset(), cp.child = 0) {
      const SearchNode& parent = cp.frontier[cp.node];
      if (!expandable(parent)) continue;
      if (limits.budget && evaluated >= limits.budget) {
        save();
        return result_of(cp, RunStatus::kBudgetExhausted);
      }
      tree::DescendantOptions dopts;
      dopts.threads = limits.threads;
      dopts.orbit.max_bitmap_bits = cfg.max_bitmap_bits;
      std::optional<tree::DescendantContext> ctx;
      if (!cp.pending) {
        ctx.emplace(parent.group, !cfg.sampled, dopts);
        std::vector<std::string> certs;
        if (ctx->nuclear_rank() > 0) {
          if (cfg.sampled) {
            std::set<std::string> seen;
            for (const auto& u : tree::random_allowable(*ctx, cfg.samples, rng()))
              if (seen.insert(u.certificate()).second) certs.push_back(u.certificate());
          } else {
            for (const auto& u : ctx->orbits().representatives) certs.push_back(u.certificate());
          }
        }
        ClassStats& st = stats_for(cp.stats, child_class, stages);
        st.parents += 1;
        st.enumerated += certs.size();
        cp.pending = std::move(certs);
        cp.child = 0;
        say("class " + std::to_string(child_class) + ": node " + std::to_string(cp.node + 1) + "/" +
            std::to_string(cp.frontier.size()) + " has " + std::to_string(cp.pending->size()) + " children");
      } else {
        ctx.emplace(parent.group, false, dopts);
      }

      const auto& pending = *cp.pending;
      while (cp.child < pending.size()) {
        if (limits.budget && evaluated >= limits.budget) {
          save();
          return result_of(cp, RunStatus::kBudgetExhausted);
        }
        std::size_t n = std::min(kChunk, pending.size() - cp.child);
        if (limits.budget) n = std::min<std::size_t>(n, limits.budget - evaluated);
        std::vector<ChildResult> results(n);
        parallel_for(n, limits.threads, [&](std::size_t i) {
          const std::string& cert = pending[cp.child + i];
          ChildResult& r = results[i];
          r.node.group = tree::prepare(ctx->child(tree::AllowableIndex::parse(cert)));
          r.node.path = parent.path;
          r.node.path.push_back(cert);
          r.node.p_class = child_class;
          Evaluation ev = evaluate(r.node.group, cfg, fixture);
          r.node.verdicts = std::move(ev.verdicts);
          r.passed = ev.passed;
          if (!r.passed) {
            r.node.status = NodeStatus::kPruned;
            return;
          }
          const int nu = ev.nuclear_rank ? *ev.nuclear_rank : tree::p_covering_group(r.node.group).nuclear_rank;
          r.node.status = nu == 0 ? NodeStatus::kTerminal : NodeStatus::kSurvivor;
          if (r.node.status == NodeStatus::kSurvivor && cfg.moribund_depth > 0) {
            try {
              if (tree::is_moribund(r.node.group, cfg.moribund_depth).verdict == tree::MoribundVerdict::kMoribund)
                r.node.status = NodeStatus::kMoribund;
            } catch (const CapExceeded&) {
            }
          }
        });
        ClassStats& st = stats_for(cp.stats, child_class, stages);
        for (auto& r : results) {
          const auto& vs = r.node.verdicts;
          for (std::size_t k = 0; k < vs.size(); ++k) {
            if (vs[k].failed()) {
              st.pruned_by[vs[k].filter] += 1;
              break;
            }
            st.after_filter[k] += 1;
            if (vs[k].outcome == Outcome::kIndeterminate) st.indeterminate += 1;
          }
          if (!r.passed) continue;
          st.survivors += 1;
          if (r.node.status == NodeStatus::kTerminal) st.terminal += 1;
          if (r.node.status == NodeStatus::kMoribund) st.moribund += 1;
          cp.next_frontier.push_back(std::move(r.node));
        }
        cp.child += n;
        evaluated += n;
        since_save += n;
        if (limits.checkpoint_every && since_save >= limits.checkpoint_every) {
          since_save = 0;
          save();
        }
        if (cp.child % 1024 < n || cp.child == pending.size())
          say("class " + std::to_string(child_class) + ": " + std::to_string(cp.child) + "/" +
              std::to_string(pending.size()) + " children evaluated");
      }
    }
    cp.frontier = std::move(cp.next_frontier);
    cp.next_frontier.clear();
    cp.node = 0;
    cp.pending.reset();
    cp.child = 0;
    if (cp.frontier.empty()) cp.complete = true;
  }
  save();
  return result_of(cp, RunStatus::kComplete);
}

SearchResult search(const pc::PcPresentation& root, const SearchConfig& config,
                    const filters::ArithmeticFixture& fixture, const RunLimits& limits) {
  Checkpoint cp = start_search(root, config, fixture);
  return run_search(cp, fixture, limits);
}

SearchResult search(const tree::FpPresentation& root, int prime, int root_class, const SearchConfig& config,
                    const filters::ArithmeticFixture& fixture, const RunLimits& limits) {
  return search(tree::p_quotient(root, prime, root_class).group(), config, fixture, limits);
}

std::string stats_to_json(const std::vector<ClassStats>& stats) { return stats_json(stats).dump(2); }

std::string stats_to_text(const std::vector<ClassStats>& stats, const std::vector<std::string>& pipeline) {
  std::ostringstream os;
  for (const auto& s : stats) {
    os << "class " << s.p_class << ": parents " << s.parents << ", enumerated " << s.enumerated;
    for (std::size_t k = 0; k < s.after_filter.size() && k < pipeline.size(); ++k)
      os << ", after " << pipeline[k] << " " << s.after_filter[k];
    os << ", survivors " << s.survivors << " (terminal " << s.terminal << ", moribund " << s.moribund
       << ", indeterminate verdicts " << s.indeterminate << ")\n";
    for (const auto& [name, count] : s.pruned_by) os << "  pruned by " << name << ": " << count << "\n";
  }
  return os.str();
}

}  // namespace ptower::explorer
