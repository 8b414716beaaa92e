#include "llbc/core.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

namespace llbc {

LinearType dual(const LinearType& type) {
  switch (type.kind()) {
    case TypeKind::Atom:
      return LinearType::atom(type.unit(), type.polarity() == Polarity::Positive
                                               ? Polarity::Negative
                                               : Polarity::Positive);
    case TypeKind::Tensor:
      return LinearType::par(dual(type.left()), dual(type.right()));
    case TypeKind::Par:
      return LinearType::tensor(dual(type.left()), dual(type.right()));
    case TypeKind::With:
      return LinearType::plus(dual(type.left()), dual(type.right()));
    case TypeKind::Plus:
      return LinearType::with(dual(type.left()), dual(type.right()));
    case TypeKind::OfCourse:
      return LinearType::why_not(dual(type.body()));
    case TypeKind::WhyNot:
      return LinearType::of_course(dual(type.body()));
  }
  return type;
}

namespace {

const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::Choose: return "choose";
    case ExprKind::Bang: return "!";
    case ExprKind::Store: return "?";
    case ExprKind::Dispose: return "_";
    case ExprKind::Contract: return "@";
    case ExprKind::Inl: return "inl";
    case ExprKind::Inr: return "inr";
    default: return "expression";
  }
}

Program map_program(const Program& p, Expression (*f)(const Expression&)) {
  Program out;
  out.span = p.span;
  for (const auto& e : p.interface) out.interface.push_back(f(e));
  for (const auto& t : p.pending)
    out.pending.push_back({f(t.left), f(t.right), t.span});
  return out;
}

}  // namespace

Expression dualize(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Addr:
      return e;
    case ExprKind::Unit:
      return Expression::dual(e, e.span());
    case ExprKind::Dual:
      if (e.operand().kind() == ExprKind::Unit) return e.operand();
      return eliminate_duals(e.operand());
    case ExprKind::Iso:
      return Expression::conn(dualize(e.left()), dualize(e.right()), e.span());
    case ExprKind::Conn:
      return Expression::iso(dualize(e.left()), dualize(e.right()), e.span());
    default:
      throw DualityError(
          std::string("no dual is defined for ") + kind_name(e.kind()) +
              " expressions",
          e.span());
  }
}

Expression eliminate_duals(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Addr:
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return e;
    case ExprKind::Dual:
      if (e.operand().kind() == ExprKind::Unit) return e;
      return dualize(e.operand());
    case ExprKind::Iso:
    case ExprKind::Conn:
    case ExprKind::Contract:
      return Expression::binary(e.kind(), eliminate_duals(e.left()),
                                eliminate_duals(e.right()), e.span());
    case ExprKind::Inl:
    case ExprKind::Inr:
    case ExprKind::Store:
      return Expression::unary(e.kind(), eliminate_duals(e.operand()),
                               e.span());
    case ExprKind::Choose:
      return Expression::choose(e.bound(),
                                map_program(e.left_branch(), eliminate_duals),
                                map_program(e.right_branch(), eliminate_duals),
                                e.span());
    case ExprKind::Bang:
      return Expression::bang(e.bound(), map_program(e.body(), eliminate_duals),
                              e.span());
  }
  return e;
}

Expression desugar_obligation(const Expression& e1, const Expression& e2) {
  SourceSpan span{e1.span().begin, e2.span().end, e1.span().line,
                  e1.span().column};
  return Expression::conn(dualize(e1), e2, span);
}

Expression repeat_unit(const std::string& unit, long count, SourceSpan span) {
  Expression out = Expression::unit(unit, span);
  for (long i = 1; i < count; ++i)
    out = Expression::iso(Expression::unit(unit, span), out, span);
  return out;
}

// ---------------------------------------------------------------------------
// Renaming

Address rename(const Address& a, const std::vector<Side>& suffix) {
  Address out = a;
  out.path.insert(out.path.end(), suffix.begin(), suffix.end());
  return out;
}

Expression rename(const Expression& e, const std::vector<Side>& suffix) {
  switch (e.kind()) {
    case ExprKind::Addr:
      return Expression::addr(rename(e.address(), suffix), e.span());
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return e;
    case ExprKind::Iso:
    case ExprKind::Conn:
    case ExprKind::Contract:
      return Expression::binary(e.kind(), rename(e.left(), suffix),
                                rename(e.right(), suffix), e.span());
    case ExprKind::Inl:
    case ExprKind::Inr:
    case ExprKind::Store:
    case ExprKind::Dual:
      return Expression::unary(e.kind(), rename(e.operand(), suffix),
                               e.span());
    case ExprKind::Choose:
    case ExprKind::Bang: {
      std::vector<Address> bound;
      for (const auto& a : e.bound()) bound.push_back(rename(a, suffix));
      if (e.kind() == ExprKind::Bang)
        return Expression::bang(std::move(bound), rename(e.body(), suffix),
                                e.span());
      return Expression::choose(std::move(bound),
                                rename(e.left_branch(), suffix),
                                rename(e.right_branch(), suffix), e.span());
    }
  }
  return e;
}

Transaction rename(const Transaction& t, const std::vector<Side>& suffix) {
  return {rename(t.left, suffix), rename(t.right, suffix), t.span};
}

Program rename(const Program& p, const std::vector<Side>& suffix) {
  Program out;
  out.span = p.span;
  for (const auto& e : p.interface) out.interface.push_back(rename(e, suffix));
  for (const auto& t : p.pending) out.pending.push_back(rename(t, suffix));
  return out;
}

// ---------------------------------------------------------------------------
// Address analysis

void count_occurrences(const Expression& e, std::map<Address, int>& counts) {
  switch (e.kind()) {
    case ExprKind::Addr:
      ++counts[e.address()];
      return;
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return;
    case ExprKind::Choose:
      for (std::size_t i = 1; i < e.bound().size(); ++i) ++counts[e.bound()[i]];
      return;
    case ExprKind::Bang:
      for (const auto& a : e.bound()) ++counts[a];
      return;
    default:
      break;
  }
  if (e.is_binary()) {
    count_occurrences(e.left(), counts);
    count_occurrences(e.right(), counts);
  } else {
    count_occurrences(e.operand(), counts);
  }
}

std::map<Address, int> scope_occurrences(const Program& p) {
  std::map<Address, int> counts;
  for (const auto& e : p.interface) count_occurrences(e, counts);
  for (const auto& t : p.pending) {
    count_occurrences(t.left, counts);
    count_occurrences(t.right, counts);
  }
  return counts;
}

std::set<Address> free_addresses(const Expression& e) {
  std::map<Address, int> counts;
  count_occurrences(e, counts);
  std::set<Address> out;
  for (const auto& [a, n] : counts) out.insert(a);
  return out;
}

std::set<Address> free_addresses(const Program& p) {
  std::set<Address> out;
  for (const auto& [a, n] : scope_occurrences(p)) out.insert(a);
  return out;
}

void collect_all_addresses(const Expression& e, std::set<Address>& out) {
  switch (e.kind()) {
    case ExprKind::Addr:
      out.insert(e.address());
      return;
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return;
    case ExprKind::Choose:
      out.insert(e.bound().begin(), e.bound().end());
      collect_all_addresses(e.left_branch(), out);
      collect_all_addresses(e.right_branch(), out);
      return;
    case ExprKind::Bang:
      out.insert(e.bound().begin(), e.bound().end());
      collect_all_addresses(e.body(), out);
      return;
    default:
      break;
  }
  if (e.is_binary()) {
    collect_all_addresses(e.left(), out);
    collect_all_addresses(e.right(), out);
  } else {
    collect_all_addresses(e.operand(), out);
  }
}

void collect_all_addresses(const Program& p, std::set<Address>& out) {
  for (const auto& e : p.interface) collect_all_addresses(e, out);
  for (const auto& t : p.pending) {
    collect_all_addresses(t.left, out);
    collect_all_addresses(t.right, out);
  }
}

std::size_t node_count(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Addr:
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return 1;
    case ExprKind::Choose:
      return 1 + e.bound().size() + node_count(e.left_branch()) +
             node_count(e.right_branch());
    case ExprKind::Bang:
      return 1 + e.bound().size() + node_count(e.body());
    default:
      break;
  }
  if (e.is_binary()) return 1 + node_count(e.left()) + node_count(e.right());
  return 1 + node_count(e.operand());
}

std::size_t node_count(const Program& p) {
  std::size_t n = 0;
  for (const auto& e : p.interface) n += node_count(e);
  for (const auto& t : p.pending)
    n += 1 + node_count(t.left) + node_count(t.right);
  return n;
}

namespace {

std::size_t program_depth(const Program& p) {
  std::size_t d = 0;
  for (const auto& e : p.interface) d = std::max(d, depth(e));
  for (const auto& t : p.pending)
    d = std::max({d, depth(t.left), depth(t.right)});
  return d;
}

}  // namespace

std::size_t depth(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Addr:
    case ExprKind::Unit:
    case ExprKind::Dispose:
      return 1;
    case ExprKind::Choose:
      return 1 + std::max(program_depth(e.left_branch()),
                          program_depth(e.right_branch()));
    case ExprKind::Bang:
      return 1 + program_depth(e.body());
    default:
      break;
  }
  if (e.is_binary()) return 1 + std::max(depth(e.left()), depth(e.right()));
  return 1 + depth(e.operand());
}

void count_units(const Expression& e, UnitCounts& out) {
  switch (e.kind()) {
    case ExprKind::Unit:
      ++out[e.unit_name()];
      return;
    case ExprKind::Addr:
    case ExprKind::Dispose:
      return;
    case ExprKind::Dual:
      if (e.is_demand()) return;
      count_units(e.operand(), out);
      return;
    case ExprKind::Choose:
      add_counts(out, count_units(e.left_branch()));
      add_counts(out, count_units(e.right_branch()));
      return;
    case ExprKind::Bang:
      add_counts(out, count_units(e.body()));
      return;
    default:
      break;
  }
  if (e.is_binary()) {
    count_units(e.left(), out);
    count_units(e.right(), out);
  } else {
    count_units(e.operand(), out);
  }
}

UnitCounts count_units(const Program& p) {
  UnitCounts out;
  for (const auto& e : p.interface) count_units(e, out);
  for (const auto& t : p.pending) {
    count_units(t.left, out);
    count_units(t.right, out);
  }
  return out;
}

void add_counts(UnitCounts& into, const UnitCounts& from, long sign) {
  for (const auto& [unit, n] : from) {
    into[unit] += sign * n;
    if (into[unit] == 0) into.erase(unit);
  }
}

// ---------------------------------------------------------------------------
// Units

UnitRegistry UnitRegistry::defaults() {
  return UnitRegistry({"satoshi", "btc", "ampere", "doge"});
}

UnitRegistry UnitRegistry::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open unit registry " + path);
  std::set<std::string> units;
  std::string line;
  while (std::getline(in, line)) {
    if (auto c = line.find("//"); c != std::string::npos) line.erase(c);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r");
    units.insert(line.substr(b, e - b + 1));
  }
  return UnitRegistry(std::move(units));
}

UnitRegistry UnitRegistry::from_environment() {
  if (const char* path = std::getenv("LLBC_UNITS"); path && *path)
    return from_file(path);
  return defaults();
}

}  // namespace llbc
