#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ptower/catalog.hpp"
#include "ptower/descendants.hpp"
#include "ptower/errors.hpp"
#include "ptower/explorer.hpp"
#include "ptower/filters.hpp"
#include "ptower/report.hpp"
#include "ptower/serialize.hpp"

using namespace ptower;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;
constexpr int kBudget = 3;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct GroupArgs {
  std::string spec;
  int prime = 2;
  int fp_class = 2;

  void add(CLI::App* cmd) {
    cmd->add_option("group", spec, "pcp-v1 file, fp presentation file, built-in name, q8, d8 or elem:D")->required();
    cmd->add_option("-p,--prime", prime, "Prime for elem:D and fp presentations");
    cmd->add_option("-c,--class", fp_class, "Class at which fp presentations are taken");
  }
  pc::PcPresentation load() const { return tree::resolve_group(spec, prime, fp_class); }
};

int cmd_pquotient(const std::string& spec, int prime, int cls, const std::string& out, bool as_json) {
  const auto fp = tree::resolve_fp(spec);
  const auto res = tree::p_quotient(fp, prime, cls);
  const auto g = tree::prepare(res.group());
  explorer::ReportOptions ro;
  ro.profile_levels = 0;
  ro.powers.clear();
  const auto r = explorer::make_report(g, ro);
  if (as_json) {
    std::cout << explorer::to_json(r) << "\n";
  } else {
    std::cout << "quotient of class " << r.p_class << (res.stabilized ? " (lower exponent-p central series stabilized)" : "")
              << "\n";
    for (std::size_t k = 0; k < res.quotients.size(); ++k)
      std::cout << "  class " << (k + 1) << " order " << prime << "^" << res.quotients[k].ngens() << "\n";
    std::cout << explorer::to_text(r);
  }
  if (!out.empty()) write_text(out, pc::serialize(g));
  return kPass;
}

int cmd_children(const GroupArgs& ga, int threads, const std::string& out_dir, int sample, std::uint64_t seed,
                 bool quiet) {
  const auto g = tree::prepare(ga.load());
  tree::DescendantOptions opts;
  opts.threads = threads;
  std::vector<pc::PcPresentation> kids;
  std::vector<std::string> certs;
  if (sample > 0) {
    const tree::DescendantContext ctx(g, false, opts);
    if (ctx.nuclear_rank() == 0) throw InvalidArgument("terminal group has no children");
    for (const auto& u : tree::random_allowable(ctx, sample, seed)) {
      kids.push_back(ctx.child(u));
      certs.push_back(u.certificate());
    }
  } else {
    const tree::DescendantContext ctx(g, true, opts);
    if (ctx.nuclear_rank() > 0)
      for (const auto& u : ctx.orbits().representatives) {
        certs.push_back(u.certificate());
        if (!quiet || !out_dir.empty()) kids.push_back(ctx.child(u));
      }
  }
  std::cout << (sample > 0 ? "sampled children " : "children ") << certs.size() << "\n";
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!quiet)
      std::cout << certs[i] << " order " << g.prime() << "^" << kids[i].ngens() << " ab "
                << pc::format_invariants(pc::abelian_invariants(kids[i])) << "\n";
    if (!out_dir.empty()) {
      std::string name = certs[i];
      for (char& c : name)
        if (c == ':') c = '_';
      write_text(out_dir + "/child_" + std::to_string(i) + "_" + name + ".pcp", pc::serialize(kids[i]));
    }
  }
  return certs.empty() ? kFail : kPass;
}

int cmd_report(const GroupArgs& ga, int depth, int levels, bool as_json) {
  explorer::ReportOptions ro;
  ro.moribund_depth = depth;
  ro.profile_levels = levels;
  const auto r = explorer::make_report(ga.load(), ro);
  std::cout << (as_json ? explorer::to_json(r) + "\n" : explorer::to_text(r));
  return kPass;
}

int cmd_moribund(const GroupArgs& ga, int depth) {
  const auto m = tree::is_moribund(ga.load(), depth);
  std::cout << tree::to_string(m.verdict) << " (nuclear ranks";
  for (int v : m.nuclear_ranks) std::cout << ' ' << v;
  std::cout << ")\n";
  return m.verdict == tree::MoribundVerdict::kMoribund ? kPass : kFail;
}

int cmd_conj91(const GroupArgs& ga, std::uint64_t power, int bound) {
  const auto g = ga.load();
  const auto c = filters::power_subgroup_check(g, power, bound);
  std::cout << "G^" << c.power << " index " << g.prime() << "^" << c.index_log << (c.abelian ? ", abelian" : ", non-abelian");
  if (c.abelian) std::cout << " with invariants " << pc::format_invariants(c.invariants) << " (rank " << c.invariants.size() << ")";
  std::cout << "\nwithin bound " << g.prime() << "^" << bound << ": " << (c.within_bound ? "yes" : "no") << "\n";
  return c.within_bound && c.abelian ? kPass : kFail;
}

struct SearchArgs {
  GroupArgs root;
  int root_class = 1;
  std::string fixture_path;
  std::string filters = "ab,rank";
  int max_class = 2;
  std::uint64_t budget = 0;
  std::string checkpoint;
  bool resume = false;
  int threads = 1;
  int rmax = 0;
  std::string mode = "compatible";
  int sampled = 0;
  std::uint64_t seed = 1;
  int moribund_depth = 0;
  std::uint64_t checkpoint_every = 0;
  std::string survivors_out;
  bool as_json = false;
  bool verbose = false;
};

int cmd_search(const SearchArgs& a) {
  const filters::ArithmeticFixture fixture =
      a.fixture_path.empty() ? filters::shipped_fixture() : filters::load_fixture(a.fixture_path);
  explorer::RunLimits limits;
  limits.budget = a.budget;
  limits.threads = a.threads;
  limits.checkpoint_path = a.checkpoint;
  limits.checkpoint_every = a.checkpoint_every;
  if (a.verbose) limits.progress = [](const std::string& m) { std::cerr << m << "\n"; };

  explorer::Checkpoint state;
  if (a.resume) {
    if (a.checkpoint.empty()) throw InvalidArgument("--resume needs --checkpoint");
    state = explorer::load_checkpoint(a.checkpoint, fixture);
  } else {
    explorer::SearchConfig cfg;
    cfg.pipeline = split(a.filters, ',');
    cfg.max_class = a.max_class;
    cfg.rmax = a.rmax;
    cfg.profile_mode = a.mode == "exact" ? filters::MatchMode::kExact : filters::MatchMode::kQuotientCompatible;
    cfg.sampled = a.sampled > 0;
    if (cfg.sampled) cfg.samples = a.sampled;
    cfg.seed = a.seed;
    cfg.moribund_depth = a.moribund_depth;
    GroupArgs ga = a.root;
    ga.fp_class = a.root_class;
    state = explorer::start_search(ga.load(), cfg, fixture);
  }
  const auto res = explorer::run_search(state, fixture, limits);
  if (a.as_json) {
    std::cout << explorer::stats_to_json(res.stats) << "\n";
  } else {
    std::cout << "root " << explorer::to_string(res.root_status) << "\n";
    std::cout << explorer::stats_to_text(res.stats, state.config.pipeline);
  }
  if (res.status == explorer::RunStatus::kBudgetExhausted) {
    std::cout << "budget exhausted"
              << (a.checkpoint.empty() ? " (no checkpoint path given)" : "; checkpoint written to " + a.checkpoint) << "\n";
    return kBudget;
  }
  std::cout << "complete: " << res.survivors.size() << " survivors\n";
  if (!a.survivors_out.empty()) {
    std::string text;
    for (const auto& n : res.survivors)
      text += "# " + n.certificate() + " " + explorer::to_string(n.status) + "\n" + pc::serialize(n.group);
    write_text(a.survivors_out, text);
  }
  return res.survivors.empty() ? kFail : kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-group descendant search with arithmetic pruning"};
  app.require_subcommand(1);

  std::string pq_spec, pq_out;
  int pq_prime = 2, pq_class = 2;
  bool pq_json = false;
  auto* pq = app.add_subcommand("pquotient", "Class-c quotient of a finitely presented pro-p group");
  pq->add_option("presentation", pq_spec, "fp presentation file or built-in name")->required();
  pq->add_option("-p,--prime", pq_prime, "Prime");
  pq->add_option("-c,--class", pq_class, "Class")->required();
  pq->add_option("-o,--out", pq_out, "Write the quotient as a pcp-v1 file");
  pq->add_flag("--json", pq_json, "Machine-readable output");

  GroupArgs ch_group;
  int ch_threads = 1, ch_sample = 0;
  std::uint64_t ch_seed = 1;
  std::string ch_out;
  bool ch_quiet = false;
  auto* ch = app.add_subcommand("children", "Immediate descendants up to isomorphism");
  ch_group.add(ch);
  ch->add_option("-t,--threads", ch_threads, "Worker threads");
  ch->add_option("--out-dir", ch_out, "Write each child as a pcp-v1 file");
  ch->add_option("--sample", ch_sample, "Draw this many children uniformly over allowable subspaces instead");
  ch->add_option("--seed", ch_seed, "Seed for --sample");
  ch->add_flag("-q,--quiet", ch_quiet, "Print the count only");

  GroupArgs rp_group;
  int rp_depth = 0, rp_levels = 2;
  bool rp_json = false;
  auto* rp = app.add_subcommand("report", "Summary of a group");
  rp_group.add(rp);
  rp->add_option("--depth", rp_depth, "Moribund test depth");
  rp->add_option("--levels", rp_levels, "Profile levels (index p .. p^levels)");
  rp->add_flag("--json", rp_json, "Machine-readable output");

  SearchArgs sa;
  auto* se = app.add_subcommand("search", "Breadth-first descendant search with a filter pipeline");
  sa.root.add(se);
  se->add_option("--root-class", sa.root_class, "Class at which an fp root is taken");
  se->add_option("--fixture", sa.fixture_path, "Fixture file (default: the shipped q5460.fixture)");
  se->add_option("--filters", sa.filters, "Comma-separated: ab,rank,profile2,profile4,critical,capitulation");
  se->add_option("--max-class", sa.max_class, "Deepest class to enumerate");
  se->add_option("--budget", sa.budget, "Children to evaluate before checkpointing and exiting with status 3");
  se->add_option("--checkpoint", sa.checkpoint, "Checkpoint file");
  se->add_flag("--resume", sa.resume, "Continue from --checkpoint");
  se->add_option("--checkpoint-every", sa.checkpoint_every, "Also checkpoint after this many children");
  se->add_option("-t,--threads", sa.threads, "Worker threads");
  se->add_option("--rmax", sa.rmax, "Relation rank bound (default d+1)");
  se->add_option("--mode", sa.mode, "Profile matching: exact or compatible")->check(CLI::IsMember({"exact", "compatible"}));
  se->add_option("--sampled", sa.sampled, "Sample this many children per node instead of enumerating");
  se->add_option("--seed", sa.seed, "Seed for sampled mode");
  se->add_option("--moribund-depth", sa.moribund_depth, "Test survivors for moribundity to this depth");
  se->add_option("--survivors-out", sa.survivors_out, "Write survivors of the last class as pcp-v1 records");
  se->add_flag("--json", sa.as_json, "Machine-readable statistics");
  se->add_flag("-v,--verbose", sa.verbose, "Progress on stderr");

  GroupArgs mb_group;
  int mb_depth = 0;
  auto* mb = app.add_subcommand("moribund", "One-sided moribund test by iterated covering groups");
  mb_group.add(mb);
  mb->add_option("--depth", mb_depth, "Iteration depth")->required();

  GroupArgs cj_group;
  std::uint64_t cj_power = 8;
  int cj_bound = 40;
  auto* cj = app.add_subcommand("conj91", "Index and abelianness of the power subgroup G^n");
  cj_group.add(cj);
  cj->add_option("--power", cj_power, "n, a power of p");
  cj->add_option("--bound", cj_bound, "log_p of the index bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*pq) return cmd_pquotient(pq_spec, pq_prime, pq_class, pq_out, pq_json);
    if (*ch) return cmd_children(ch_group, ch_threads, ch_out, ch_sample, ch_seed, ch_quiet);
    if (*rp) return cmd_report(rp_group, rp_depth, rp_levels, rp_json);
    if (*se) return cmd_search(sa);
    if (*mb) return cmd_moribund(mb_group, mb_depth);
    if (*cj) return cmd_conj91(cj_group, cj_power, cj_bound);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
