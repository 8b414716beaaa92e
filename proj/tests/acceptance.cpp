// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. All comparisons are exact; time budgets are wall-clock.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>

#include "generator.hpp"
#include "llbc/alpha.hpp"
#include "llbc/chain.hpp"
#include "llbc/cli.hpp"
#include "llbc/core.hpp"
#include "llbc/parser.hpp"
#include "llbc/reducer.hpp"
#include "llbc/render.hpp"
#include "llbc/typecheck.hpp"

using namespace llbc;
using Clock = std::chrono::steady_clock;

namespace {

constexpr std::size_t kSpendMaxSteps = 100;
constexpr double kGoldenBudgetSec = 1.0;
constexpr std::size_t kTerminationPrograms = 1000;
constexpr std::size_t kMinServerPrograms = 100;
constexpr std::size_t kMaxProgramDepth = 6;
constexpr double kTerminationBudgetSec = 60.0;
constexpr std::size_t kCorpusSize = 200;
constexpr std::size_t kCorpusMaxPending = 8;
constexpr std::size_t kDualCases = 10000;
constexpr std::size_t kRoundTripCases = 10000;
constexpr std::size_t kComposeCases = 1000;

const char* kSpent =
    "(bddr1 * bddr2 * addr3){ txn(bddr1, satoshi); txn(bddr2, satoshi); "
    "txn(addr3, satoshi) }";

std::string data(const char* name) { return std::string(LLBC_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Cli {
  int code;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

bool conserved(const Program& initial, const NormalizeResult& r) {
  UnitCounts lhs = count_units(initial), rhs = count_units(r.program);
  add_counts(lhs, r.accounting.replicated);
  add_counts(rhs, r.accounting.burned);
  add_counts(rhs, r.accounting.discarded);
  for (auto& [u, n] : lhs)
    if (rhs[u] != n) return false;
  for (auto& [u, n] : rhs)
    if (lhs[u] != n) return false;
  return true;
}

struct Report {
  int failures = 0;
  void line(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

// Shared between criteria 1, 4 and 7.
struct ConservationTally {
  std::size_t runs = 0, violations = 0;
  void add(const Program& p, const NormalizeResult& r) {
    ++runs;
    if (!conserved(p, r)) ++violations;
  }
};

void criterion1(Report& rep, ConservationTally& tally) {
  auto t0 = Clock::now();
  std::string why;
  bool ok = true;
  Script s = load_script(data("genesis_spend.llbc"));
  check(s.program, *s.declared);
  NormalizeResult r = normalize(s.program, kSpendMaxSteps);
  tally.add(s.program, r);
  Program expected = parse_program(kSpent);
  if (!alpha_equivalent(r.program, expected)) ok = false, why += " normal-form";
  Cli ledger = cli({"ledger", data("genesis_spend.llbc"), "--run"});
  if (ledger.code != 0 || ledger.out != slurp(data("genesis_spend.ledger.json")))
    ok = false, why += " ledger-json";
  Cli run = cli({"run", data("genesis_spend.llbc")});
  if (run.code != 0 || !alpha_equivalent(parse_program(run.out), expected))
    ok = false, why += " run";
  // The genesis and burn fragments on their own.
  Script genesis = load_script(data("genesis.llbc"));
  check(genesis.program, *genesis.declared);
  if (!find_redexes(genesis.program).empty()) ok = false, why += " genesis";
  Script burn = load_script(data("server_burn.llbc"));
  check(burn.program, *burn.declared);
  NormalizeResult rb = normalize(burn.program, kSpendMaxSteps);
  tally.add(burn.program, rb);
  if (rb.accounting.burned["satoshi"] != 1) ok = false, why += " burn";
  double sec = seconds_since(t0);
  if (sec >= kGoldenBudgetSec) ok = false, why += " slow";
  std::ostringstream d;
  d << "spend steps=" << r.steps << "/" << kSpendMaxSteps << " time=" << sec
    << "s" << why;
  rep.line(1, ok, d.str());
}

void criterion2(Report& rep) {
  bool ok = true;
  std::string why;
  auto t0 = Clock::now();
  Cli v = cli({"compose", "--mode", "verify", data("safe1.json"), data("safe2.json")});
  double tv = seconds_since(t0);
  if (v.code != 0 || v.out != slurp(data("safe_composed.json"))) ok = false, why += " verify";
  t0 = Clock::now();
  Cli r = cli({"compose", "--mode", "rewire", data("cex1.json"), data("cex2.json")});
  double tr = seconds_since(t0);
  if (r.code != 0 || r.out != slurp(data("cex_rewired.json"))) ok = false, why += " rewire";
  if (tv >= kGoldenBudgetSec || tr >= kGoldenBudgetSec) ok = false, why += " slow";
  std::ostringstream d;
  d << "verify=" << tv << "s rewire=" << tr << "s" << why;
  rep.line(2, ok, d.str());
}

void criterion3(Report& rep) {
  using namespace chain;
  bool ok = true;
  std::string detail;
  Chain c1 = load_chain(data("cex1.json")), c2 = load_chain(data("cex2.json"));
  try {
    compose_verify(c1, c2);
    ok = false;
    detail = "composition accepted";
  } catch (const IsolationError& e) {
    AddressSet want{"1AliceAddr", "1AllanAddr", "1BobAddr", "1BettyAddr"};
    if (e.shared() != want) ok = false;
    detail = "shared=" + std::to_string(e.shared().size());
  }
  Cli bw = cli({"compose", "--check-blockwise", data("cex1.json"), data("cex2.json")});
  if (bw.code != 0 || bw.out != "{\"blockwise_isolated\":true,\"isolated\":false}\n")
    ok = false, detail += " blockwise-report";
  if (!blockwise_isolated(c1, c2) || isolated(c1, c2)) ok = false, detail += " predicates";
  Cli verify = cli({"compose", "--mode", "verify", data("cex1.json"), data("cex2.json")});
  if (verify.code != 1 || verify.err.rfind("ERROR kind=isolation ", 0) != 0)
    ok = false, detail += " cli";
  rep.line(3, ok, detail);
}

void criterion4(Report& rep, ConservationTally& tally) {
  auto t0 = Clock::now();
  testgen::Options opt;
  opt.max_depth = kMaxProgramDepth;
  testgen::Generator gen(20240101, opt);
  std::size_t fuel_out = 0, rejected = 0, servers = 0, deep = 0;
  std::set<TypeKind> connectives;
  std::function<void(const LinearType&)> kinds = [&](const LinearType& t) {
    connectives.insert(t.kind());
    if (t.kind() == TypeKind::Atom) return;
    if (t.kind() == TypeKind::OfCourse || t.kind() == TypeKind::WhyNot) {
      kinds(t.body());
    } else {
      kinds(t.left());
      kinds(t.right());
    }
  };
  for (std::size_t i = 0; i < kTerminationPrograms; ++i) {
    testgen::Generated g = gen.program();
    try {
      check(g.program, g.types);
    } catch (const TypeError&) {
      ++rejected;
      continue;
    }
    for (const auto& e : g.program.interface) deep += depth(e) > kMaxProgramDepth;
    for (const auto& t : g.program.pending)
      deep += std::max(depth(t.left), depth(t.right)) > kMaxProgramDepth;
    for (const auto& t : g.types) kinds(t);
    std::size_t n = node_count(g.program);
    try {
      NormalizeResult r = normalize(g.program, 4 * n * n);
      tally.add(g.program, r);
      auto f = [&](RuleKind k) { return r.fired[static_cast<int>(k)]; };
      if (f(RuleKind::Copy) + f(RuleKind::Read) + f(RuleKind::Dispose) > 0) ++servers;
    } catch (const FuelExhausted&) {
      ++fuel_out;
    }
  }
  double sec = seconds_since(t0);
  bool ok = fuel_out == 0 && rejected == 0 && deep == 0 &&
            servers >= kMinServerPrograms && connectives.size() == 7 &&
            sec < kTerminationBudgetSec;
  std::ostringstream d;
  d << "programs=" << kTerminationPrograms << " rejected=" << rejected
    << " fuel_exhausted=" << fuel_out << " server_rules=" << servers << "/"
    << kMinServerPrograms << " type_forms=" << connectives.size()
    << " too_deep=" << deep << " time=" << sec << "s";
  rep.line(4, ok, d.str());
}

std::vector<testgen::Generated> corpus() {
  testgen::Options opt;
  opt.max_pending = kCorpusMaxPending;
  testgen::Generator gen(777, opt);
  std::vector<testgen::Generated> out;
  while (out.size() < kCorpusSize) out.push_back(gen.program());
  return out;
}

void criterion5(Report& rep, const std::vector<testgen::Generated>& programs) {
  std::size_t divergent = 0, states = 0, max_forms = 0;
  for (const auto& g : programs) {
    std::unordered_map<std::string, bool> seen;
    std::vector<Program> forms;
    std::function<void(const Program&)> dfs = [&](const Program& p) {
      if (!seen.emplace(canonical_key(p), true).second) return;
      ++states;
      auto rs = find_redexes(p);
      if (rs.empty()) {
        forms.push_back(p);
        return;
      }
      for (const auto& r : rs) dfs(step(p, r));
    };
    dfs(g.program);
    max_forms = std::max(max_forms, forms.size());
    for (std::size_t i = 1; i < forms.size(); ++i)
      if (!alpha_equivalent(forms[0], forms[i])) {
        ++divergent;
        break;
      }
  }
  std::ostringstream d;
  d << "programs=" << programs.size() << " states=" << states
    << " divergent=" << divergent << " max_normal_forms_before_alpha=" << max_forms;
  rep.line(5, divergent == 0, d.str());
}

void criterion6(Report& rep, const std::vector<testgen::Generated>& programs) {
  std::size_t steps = 0, broken = 0;
  for (const auto& g : programs) {
    std::unordered_map<std::string, bool> seen;
    std::function<void(const Program&)> dfs = [&](const Program& p) {
      if (!seen.emplace(canonical_key(p), true).second) return;
      for (const auto& r : find_redexes(p)) {
        Program q = step(p, r);
        ++steps;
        try {
          TypedJudgment j = check(q, g.types);
          if (q.interface != g.program.interface || !verify_judgment(j)) ++broken;
        } catch (const TypeError&) {
          ++broken;
        }
        dfs(q);
      }
    };
    dfs(g.program);
  }
  std::ostringstream d;
  d << "steps_checked=" << steps << " failures=" << broken;
  rep.line(6, broken == 0 && steps > 0, d.str());
}

void criterion7(Report& rep, const ConservationTally& tally) {
  using namespace chain;
  std::size_t dual_bad = 0, trip_bad = 0, comm_bad = 0, assoc_bad = 0;
  testgen::Generator gen(4242);
  for (std::size_t i = 0; i < kDualCases; ++i) {
    LinearType t = gen.type(6);
    if (dual(dual(t)) != t) ++dual_bad;
  }
  ParseOptions fresh{true};
  std::size_t tripped = 0;
  while (tripped < kRoundTripCases) {
    Program p = gen.program().program;
    std::vector<Program> samples{p};
    auto rs = find_redexes(p);
    if (!rs.empty()) samples.push_back(step(p, rs.front()));
    for (const auto& q : samples) {
      if (tripped == kRoundTripCases) break;
      ++tripped;
      try {
        if (parse_program(render(q), UnitRegistry::defaults(), fresh) != q) ++trip_bad;
      } catch (const ParseError&) {
        ++trip_bad;
      }
    }
  }
  auto sorted = [](Chain c) {
    for (auto& b : c.blocks)
      std::sort(b.transfers.begin(), b.transfers.end(), [](const Transfer& x, const Transfer& y) {
        return std::tie(x.from, x.to, x.amount, x.unit) < std::tie(y.from, y.to, y.amount, y.unit);
      });
    return c;
  };
  std::mt19937_64 rng(99);
  for (std::size_t i = 0; i < kComposeCases; ++i) {
    std::size_t h = 1 + rng() % 5;
    Chain a = testgen::random_chain(rng, h, "a", 6);
    Chain b = testgen::random_chain(rng, h, "b", 6);
    Chain c = testgen::random_chain(rng, h, "c", 6);
    if (sorted(compose_verify(a, b)) != sorted(compose_verify(b, a))) ++comm_bad;
    if (compose_verify(compose_verify(a, b), c) != compose_verify(a, compose_verify(b, c)))
      ++assoc_bad;
  }
  bool ok = dual_bad + trip_bad + comm_bad + assoc_bad + tally.violations == 0 &&
            tally.runs > 0;
  std::ostringstream d;
  d << "dual=" << kDualCases - dual_bad << "/" << kDualCases
    << " round_trip=" << kRoundTripCases - trip_bad << "/" << kRoundTripCases
    << " commutative=" << kComposeCases - comm_bad << "/" << kComposeCases
    << " associative=" << kComposeCases - assoc_bad << "/" << kComposeCases
    << " conservation=" << tally.runs - tally.violations << "/" << tally.runs;
  rep.line(7, ok, d.str());
}

template <class F>
void guarded(Report& rep, int n, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    rep.line(n, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  Report rep;
  ConservationTally tally;
  guarded(rep, 1, [&] { criterion1(rep, tally); });
  guarded(rep, 2, [&] { criterion2(rep); });
  guarded(rep, 3, [&] { criterion3(rep); });
  guarded(rep, 4, [&] { criterion4(rep, tally); });
  std::vector<testgen::Generated> programs = corpus();
  guarded(rep, 5, [&] { criterion5(rep, programs); });
  guarded(rep, 6, [&] { criterion6(rep, programs); });
  guarded(rep, 7, [&] { criterion7(rep, tally); });
  std::printf("%s\n", rep.failures == 0 ? "ALL PASS" : "FAILURES PRESENT");
  return rep.failures == 0 ? 0 : 1;
}
