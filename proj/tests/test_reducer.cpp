#include <functional>
#include <set>
#include <string>

#include "doctest.h"
#include "llbc/alpha.hpp"
#include "llbc/core.hpp"
#include "llbc/parser.hpp"
#include "llbc/reducer.hpp"
#include "llbc/render.hpp"
#include "llbc/typecheck.hpp"

using namespace llbc;

namespace {

Program P(const char* s) { return parse_program(s); }

const char* kSpend =
    "(bddr1 * bddr2 * addr3){ txn(choose(spnd){"
    "(addr1 * addr2 * addr3){ txn(addr1, satoshi); txn(addr2, satoshi); "
    "txn(addr3, satoshi) }; "
    "(addr1 * addr2 * addr3){ txn(addr1, _); txn(addr2, _); txn(addr3, _) }}, "
    "inl(bddr1 * bddr2 -o addr3)) }";

const char* kSpent =
    "(bddr1 * bddr2 * addr3){ txn(bddr1, satoshi); txn(bddr2, satoshi); "
    "txn(addr3, satoshi) }";

std::string only_step(const char* src) {
  Program p = P(src);
  auto rs = find_redexes(p);
  REQUIRE(rs.size() == 1);
  return render(step(p, rs[0]));
}

// Counts units directly from a ledger-form program.
void fold(const Expression& e, UnitCounts& out) {
  if (e.kind() == ExprKind::Unit) ++out[e.unit_name()];
  if (e.kind() == ExprKind::Iso) {
    fold(e.left(), out);
    fold(e.right(), out);
  }
}

UnitCounts fold_units(const Program& p) {
  UnitCounts out;
  for (const auto& t : p.pending) {
    fold(t.left, out);
    fold(t.right, out);
  }
  return out;
}

bool balanced(const Program& initial, const NormalizeResult& r) {
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

}  // namespace

TEST_CASE("find_redexes") {
  auto rs = find_redexes(P("(e1, e2){ txn(e1, x); txn(x, e2) }"));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RuleKind::Transaction);
  CHECK(rs[0].position == 0);
  CHECK(rs[0].partner == 1);
  CHECK(rs[0].via == Address("x"));

  CHECK(find_redexes(P(kSpent)).empty());
  CHECK(find_redexes(P("(){}")).empty());

  rs = find_redexes(P("(a, b, c, d){ txn(a * b, c # d) }"));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].kind == RuleKind::Pair);
  CHECK(rs[0].position == 0);

  // Interface ports never mediate a fusion.
  CHECK(find_redexes(P("(x){ txn(x, satoshi) }")).empty());

  // Sorted by position.
  rs = find_redexes(P("(a, b, c, d, e1, e2){ txn(e1, x); txn(a * b, c # d); "
                      "txn(x, e2) }"));
  REQUIRE(rs.size() == 2);
  CHECK(rs[0].position == 0);
  CHECK(rs[1].position == 1);
}

TEST_CASE("each rule's residue") {
  CHECK(only_step("(e1, e2){ txn(e1, x); txn(x, e2) }") ==
        "(e1, e2){ txn(e1, e2) }");
  CHECK(only_step("(a, b, c, d){ txn(a * b, c # d) }") ==
        "(a, b, c, d){ txn(a, c); txn(b, d) }");
  // Opening a box renames clashing names with a fresh suffix.
  CHECK(only_step("(u, d){ txn(choose(p, d){(satoshi, d){txn(d, satoshi)}; "
                  "(satoshi, e){txn(e, satoshi)}}, inl(u)) }") ==
        "(u, d){ txn(satoshi, u); txn(d.l, satoshi); txn(d, d.l) }");
  CHECK(only_step("(u, d){ txn(choose(p, d){(satoshi, d){txn(d, satoshi)}; "
                  "(satoshi, e){txn(e, satoshi)}}, inr(u)) }") ==
        "(u, d){ txn(satoshi, u); txn(e, satoshi); txn(d, e) }");
  CHECK(only_step("(x, a){ txn(!(x){(satoshi, x){}}, ?a) }") ==
        "(x, a){ txn(satoshi, a); txn(x, x.l) }");
  CHECK(only_step("(x){ txn(!(x){(satoshi, x){}}, _) }") ==
        "(x){ txn(x, _) }");
  CHECK(only_step("(x, a, b){ txn(!(x){(satoshi, x){}}, ?a @ ?b) }") ==
        "(x, a, b){ txn(x, x.l @ x.r); txn(!(x.l){(satoshi, x.l){}}, ?a); "
        "txn(!(x.r){(satoshi, x.r){}}, ?b) }");
  // Orientation does not matter for matching.
  CHECK(only_step("(a, b, c, d){ txn(c # d, a * b) }") ==
        "(a, b, c, d){ txn(c, a); txn(d, b) }");
}

TEST_CASE("rule names") {
  const char* names[] = {"Transaction", "Pair", "Left", "Right",
                         "Read", "Dispose", "Copy"};
  for (int i = 0; i < 7; ++i)
    CHECK(std::string(to_string(static_cast<RuleKind>(i))) == names[i]);
}

TEST_CASE("spend normalizes to the expected ledger") {
  NormalizeResult r = normalize(P(kSpend), 100, true);
  CHECK(r.steps == 6);
  CHECK(alpha_equivalent(r.program, P(kSpent)));
  CHECK(r.program == P(kSpent));
  CHECK(r.trace.size() == 6);
  CHECK(r.fired[static_cast<int>(RuleKind::Left)] == 1);
  CHECK(r.fired[static_cast<int>(RuleKind::Pair)] == 2);
  CHECK(r.fired[static_cast<int>(RuleKind::Transaction)] == 3);
  CHECK(format_trace_line(1, r.trace[0]).rfind("1 Left @0 (bddr1", 0) == 0);
  CHECK(format_trace_line(6, r.trace[5]) == "6 Transaction @2 " + render(P(kSpent)));
  CHECK(balanced(P(kSpend), r));

  NormalizeResult again = normalize(r.program, 100);
  CHECK(again.steps == 0);
  CHECK(again.program == r.program);
  CHECK_FALSE(normalize(P(kSpend), 100, false).trace.size());
}

TEST_CASE("every reduction order of the spend reaches the same ledger") {
  std::set<std::string> normal_forms, seen;
  std::size_t paths = 0;
  std::function<void(const Program&)> dfs = [&](const Program& p) {
    auto rs = find_redexes(p);
    if (rs.empty()) {
      ++paths;
      normal_forms.insert(canonical_key(p));
      CHECK(alpha_equivalent(p, P(kSpent)));
      return;
    }
    for (const auto& r : rs) dfs(step(p, r));
  };
  dfs(P(kSpend));
  CHECK(paths > 1);
  CHECK(normal_forms.size() == 1);
}

TEST_CASE("reduction preserves types") {
  Program p = P(kSpend);
  auto types = parse_type_list("satoshi * satoshi * satoshi");
  NormalizeResult r = normalize(p, 100, true);
  for (const auto& e : r.trace) {
    TypedJudgment j = check(e.result, types);
    CHECK(verify_judgment(j));
  }
}

TEST_CASE("fuel") {
  try {
    normalize(P(kSpend), 2);
    FAIL("expected FuelExhausted");
  } catch (const FuelExhausted& e) {
    CHECK(e.steps() == 2);
    CHECK_FALSE(find_redexes(e.last()).empty());
  }
  CHECK_NOTHROW(normalize(P(kSpend), 6));
}

TEST_CASE("servers: burn and copy account for their units") {
  Program burn = P("(x){ txn(!(x){(satoshi, _){}}, _) }");
  NormalizeResult r = normalize(burn, 10);
  CHECK(r.accounting.burned["satoshi"] == 1);
  CHECK(balanced(burn, r));

  Program copy = P("(x, a, b){ txn(!(x){(satoshi, _){}}, ?a @ ?b) }");
  r = normalize(copy, 20);
  CHECK(r.accounting.replicated["satoshi"] == 1);
  CHECK(count_units(r.program)["satoshi"] == 2);
  CHECK(balanced(copy, r));

  Program menu = P("(u){ txn(choose(p){(satoshi){}; (btc){}}, inr(u)) }");
  r = normalize(menu, 10);
  CHECK(r.accounting.discarded["satoshi"] == 1);
  CHECK(balanced(menu, r));
}

TEST_CASE("ledger read-back") {
  Program genesis = P("(addr1 * addr2 * addr3){ txn(addr1, satoshi); "
                      "txn(addr2, satoshi); txn(addr3, satoshi) }");
  Ledger l = readback_ledger(genesis);
  REQUIRE(l.size() == 3);
  for (const char* a : {"addr1", "addr2", "addr3"})
    CHECK(l[Address(a)]["satoshi"] == 1);
  CHECK(ledger_totals(l) == fold_units(genesis));

  CHECK(readback_ledger(P("(){}")).empty());

  Ledger spent = readback_ledger(normalize(P(kSpend), 100).program);
  CHECK(spent.count(Address("bddr1")) == 1);
  CHECK(spent.count(Address("addr1")) == 0);
  CHECK(ledger_totals(spent)["satoshi"] == 3);

  Ledger mixed = readback_ledger(
      P("(a, b){ txn(2 . btc, a); txn(b, _) }"));
  CHECK(mixed[Address("a")]["btc"] == 2);
  CHECK(mixed[Address("b")].empty());

  try {
    readback_ledger(P(kSpend));
    FAIL("expected NotInLedgerForm");
  } catch (const NotInLedgerForm& e) {
    CHECK(e.index() == 0);
  }
  try {
    readback_ledger(P("(a, e1, e2){ txn(a, satoshi); txn(e1, e2) }"));
    FAIL("expected NotInLedgerForm");
  } catch (const NotInLedgerForm& e) {
    CHECK(e.index() == 1);
  }
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_equivalent(P("(a){ txn(a, satoshi) }"),
                         P("(b){ txn(satoshi, b) }")));
  CHECK_FALSE(alpha_equivalent(P("(a){ txn(a, satoshi) }"),
                               P("(b){ txn(b, btc) }")));
  CHECK(alpha_equivalent(P("(a, b){ txn(a, x); txn(x, b) }"),
                         P("(a, b){ txn(y, b); txn(a, y) }")));
  CHECK_FALSE(alpha_equivalent(P("(a, b){ txn(a, satoshi); txn(b, _) }"),
                               P("(a, b){ txn(a, _); txn(b, satoshi) }")));
  CHECK(alpha_equivalent(P("(x){ txn(!(x){(satoshi, x){}}, _) }"),
                         P("(y){ txn(!(y){(satoshi, y){}}, _) }")));
  CHECK(canonical_key(P("(a, b){ txn(a, x); txn(x, b) }")) ==
        canonical_key(P("(a, b){ txn(b, x); txn(x, a) }")));
}
