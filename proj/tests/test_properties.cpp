#include <random>

#include "doctest.h"
#include "generator.hpp"
#include "llbc/alpha.hpp"
#include "llbc/core.hpp"
#include "llbc/parser.hpp"
#include "llbc/reducer.hpp"
#include "llbc/render.hpp"
#include "llbc/typecheck.hpp"

using namespace llbc;

namespace {

const ParseOptions kFresh{true};

Program reparse(const Program& p) {
  return parse_program(render(p), UnitRegistry::defaults(), kFresh);
}

}  // namespace

TEST_CASE("generated programs are accepted and their derivations replay") {
  testgen::Generator gen(101);
  for (int i = 0; i < 200; ++i) {
    testgen::Generated g = gen.program();
    TypedJudgment j = check(g.program, g.types);
    std::string why;
    CHECK_MESSAGE(verify_judgment(j, &why), render(g.program) << ": " << why);
    for (const auto& [a, n] : scope_occurrences(g.program))
      CHECK_MESSAGE(n == 2, a.str());
  }
}

TEST_CASE("dual and dualize are involutions") {
  testgen::Generator gen(202);
  for (int i = 0; i < 1000; ++i) {
    LinearType t = gen.type(8);
    CHECK(dual(dual(t)) == t);
    CHECK(dual(t) != t);
    Expression e = gen.closed(gen.type(3));
    Expression d = e;
    try {
      d = dualize(dualize(e));
    } catch (const DualityError&) {
      continue;  // exponential terms have no dual
    }
    CHECK(d == e);
  }
}

TEST_CASE("rename is injective and shape preserving") {
  testgen::Generator gen(303);
  for (int i = 0; i < 100; ++i) {
    Program p = gen.program().program;
    for (Side s : {Side::Left, Side::Right}) {
      Program q = rename(p, s);
      CHECK(node_count(q) == node_count(p));
      std::set<Address> before, after;
      collect_all_addresses(p, before);
      collect_all_addresses(q, after);
      CHECK(before.size() == after.size());
      CHECK(reparse(q) == q);
    }
  }
}

TEST_CASE("parse and render round trip") {
  testgen::Generator gen(404);
  for (int i = 0; i < 300; ++i) {
    Program p = gen.program().program;
    CHECK(parse_program(render(p)) == p);
    NormalizeResult r = normalize(p, 4 * node_count(p) * node_count(p), true);
    for (const auto& e : r.trace) CHECK(reparse(e.result) == e.result);
  }
}

TEST_CASE("reduction properties") {
  testgen::Generator gen(505);
  for (int i = 0; i < 200; ++i) {
    testgen::Generated g = gen.program();
    std::size_t n = node_count(g.program);
    NormalizeResult r = normalize(g.program, 4 * n * n, true);
    CHECK(find_redexes(r.program).empty());

    // Determinism.
    CHECK(normalize(g.program, 4 * n * n).program == r.program);

    Program prev = g.program;
    for (const auto& e : r.trace) {
      CHECK(e.result.interface == g.program.interface);
      CHECK_NOTHROW(check(e.result, g.types));
      prev = e.result;
    }

    UnitCounts lhs = count_units(g.program), rhs = count_units(r.program);
    add_counts(lhs, r.accounting.replicated);
    add_counts(rhs, r.accounting.burned);
    add_counts(rhs, r.accounting.discarded);
    for (auto& [u, k] : lhs) CHECK(rhs[u] == k);
    for (auto& [u, k] : rhs) CHECK(lhs[u] == k);
  }
}

TEST_CASE("programs without boxes conserve units step by step") {
  Program p = parse_program(
      "(a, b, c, d){ txn(x * y, a # b); txn(x, satoshi); txn(y, 2 . btc); "
      "txn(c * d, u # v); txn(satoshi, u); txn(v, doge) }");
  UnitCounts start = count_units(p);
  NormalizeResult r = normalize(p, 100, true);
  for (const auto& e : r.trace) CHECK(count_units(e.result) == start);
}
