#include <algorithm>
#include <string>

#include "doctest.h"
#include "llbc/core.hpp"
#include "llbc/parser.hpp"
#include "llbc/render.hpp"

using namespace llbc;

namespace {

Expression addr(const char* n) { return Expression::addr(Address(n)); }
Expression sat() { return Expression::unit("satoshi"); }

bool expects(const ParseError& e, const std::string& token) {
  return std::find(e.expected().begin(), e.expected().end(), token) !=
         e.expected().end();
}

}  // namespace

TEST_CASE("genesis and burn programs") {
  Program g = parse_program(
      "(addr1 * addr2){ txn(addr1, satoshi); txn(addr2, satoshi) }");
  Program expected{{Expression::iso(addr("addr1"), addr("addr2"))},
                   {{addr("addr1"), sat(), {}}, {addr("addr2"), sat(), {}}},
                   {}};
  CHECK(g == expected);

  Program burn = parse_program("(addr1){ txn(addr1, _) }");
  CHECK(burn == Program{{addr("addr1")},
                        {{addr("addr1"), Expression::dispose(), {}}},
                        {}});

  Program empty = parse_program("(){}");
  CHECK(empty.interface.empty());
  CHECK(empty.pending.empty());
}

TEST_CASE("types") {
  CHECK(parse_type("satoshi * satoshi") ==
        LinearType::tensor(LinearType::atom("satoshi"),
                           LinearType::atom("satoshi")));
  CHECK(parse_type("satoshi -o btc") ==
        LinearType::par(LinearType::atom("satoshi", Polarity::Negative),
                        LinearType::atom("btc")));
  CHECK(parse_type("!(satoshi + btc)") ==
        LinearType::of_course(LinearType::plus(LinearType::atom("satoshi"),
                                               LinearType::atom("btc"))));
  // Precedence: * over # over & over +.
  CHECK(parse_type("satoshi * btc # doge & ampere + btc") ==
        parse_type("(((satoshi * btc) # doge) & ampere) + btc"));
  CHECK(parse_type("?satoshi * btc") == parse_type("(?satoshi) * btc"));
  CHECK(parse_type("(satoshi * btc)^") == parse_type("satoshi^ # btc^"));
  CHECK(parse_type_list("").empty());
  CHECK(parse_type_list("satoshi, !btc").size() == 2);
}

TEST_CASE("expression precedence and associativity") {
  CHECK(parse_expression("a * b # c") ==
        Expression::conn(Expression::iso(addr("a"), addr("b")), addr("c")));
  CHECK(parse_expression("a * b * c") ==
        Expression::iso(Expression::iso(addr("a"), addr("b")), addr("c")));
  CHECK(parse_expression("a # b @ c") ==
        Expression::contract(Expression::conn(addr("a"), addr("b")),
                             addr("c")));
  CHECK(parse_expression("?a * b") ==
        Expression::iso(Expression::store(addr("a")), addr("b")));
  // `-o` binds loosest: (a * b) -o c.
  CHECK(parse_expression("a * b -o c") == parse_expression("(a # b) # c"));
  CHECK(parse_expression("(a * b)^") == parse_expression("a # b"));
  CHECK(parse_expression("satoshi^").is_demand());
}

TEST_CASE("boxes") {
  Expression menu = parse_expression(
      "choose(spnd, d){(satoshi, d){}; (satoshi, _){}}");
  REQUIRE(menu.kind() == ExprKind::Choose);
  CHECK(menu.bound().size() == 2);
  CHECK(menu.left_branch().interface.size() == 2);
  Expression server = parse_expression("!(x){(satoshi, x){}}");
  REQUIRE(server.kind() == ExprKind::Bang);
  CHECK(server.body().interface.size() == 2);
  CHECK(parse_expression("!(){(satoshi){}}").bound().empty());
}

TEST_CASE("comments, trailing separators and unit sugar") {
  Program p = parse_program(
      "// leading comment\n"
      "(a){\n"
      "  txn(a, 2 . satoshi); // two coins\n"
      "}\n");
  REQUIRE(p.pending.size() == 1);
  CHECK(p.pending[0].right == repeat_unit("satoshi", 2));
}

TEST_CASE("spans") {
  Program p = parse_program("(a){\n  txn(a, satoshi)\n}");
  const SourceSpan& s = p.pending[0].span;
  CHECK(s.line == 2);
  CHECK(s.column == 3);
  CHECK(s.begin <= s.end);
  CHECK(p.pending[0].right.span().line == 2);
}

TEST_CASE("parse errors carry a span and the expected tokens") {
  try {
    parse_program("(a){ txn(a satoshi) }");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 12);
    CHECK(expects(e, "','"));
  }
  CHECK_THROWS_AS(parse_program("(a){ txn(a, ) }"), ParseError);
  CHECK_THROWS_AS(parse_program("(a"), ParseError);
  CHECK_THROWS_AS(parse_program("(a){} trailing"), ParseError);
  CHECK_THROWS_AS(parse_expression("choose(){(a){}; (b){}}"), ParseError);
  CHECK_THROWS_AS(parse_expression("!(x, x){(a, x, x){}}"), ParseError);
  CHECK_THROWS_AS(parse_expression("?a -o b"), ParseError);
  CHECK_THROWS_AS(parse_type("satoshi *"), ParseError);
}

TEST_CASE("freshness paths only when enabled") {
  CHECK_THROWS_AS(parse_expression("x.l"), ParseError);
  ParseOptions fresh{true};
  Expression e = parse_expression("x.l.r", UnitRegistry::defaults(), fresh);
  CHECK(e.address() == Address("x", {Side::Left, Side::Right}));
}

TEST_CASE("unit registry decides literals") {
  UnitRegistry units = UnitRegistry::defaults();
  CHECK(parse_expression("doge", units).kind() == ExprKind::Unit);
  CHECK(parse_expression("euro", units).kind() == ExprKind::Addr);
  units.add("euro");
  CHECK(parse_expression("euro", units).kind() == ExprKind::Unit);
}

TEST_CASE("script header declares interface types") {
  Script s = parse_script(
      "-- types: satoshi * satoshi, ?btc\n(a * b, c){ txn(a, satoshi); "
      "txn(b, satoshi); txn(c, _) }");
  REQUIRE(s.declared);
  CHECK(s.declared->size() == 2);
  CHECK(s.program.pending[0].span.line == 2);
  CHECK_FALSE(parse_script("(){}").declared);
  CHECK_THROWS_AS(parse_script("-- kinds: a\n(){}"), ParseError);
}

TEST_CASE("render uses minimal parentheses and round trips") {
  CHECK(render(parse_program("(x){txn(x, satoshi)}")) ==
        "(x){ txn(x, satoshi) }");
  CHECK(render(parse_program("(){}")) == "(){}");
  CHECK(render(LinearType::tensor(
            LinearType::atom("a"),
            LinearType::par(LinearType::atom("b"), LinearType::atom("c")))) ==
        "a * (b # c)");
  CHECK(render(parse_expression("a * (b * c)")) == "a * (b * c)");
  CHECK(render(parse_expression("(a * b) * c")) == "a * b * c");
  CHECK(render(parse_type("!(satoshi + btc^)")) == "!(satoshi + btc^)");

  const char* sources[] = {
      "(addr1 * addr2 * addr3){ txn(addr1, satoshi); txn(addr2, satoshi); "
      "txn(addr3, satoshi) }",
      "(bddr1 * bddr2 * addr3){ txn(choose(spnd){(addr1 * addr2 * addr3){ "
      "txn(addr1, satoshi) }; (a){}}, inl(bddr1 * bddr2 -o addr3)) }",
      "(x, a){ txn(!(x){(satoshi^, _ @ ?(a # b)){}}, ?a @ _) }",
  };
  for (const char* src : sources) {
    Program p = parse_program(src);
    CHECK(parse_program(render(p)) == p);
  }
}
