#include "llbc/model.hpp"

#include <algorithm>
#include <cassert>

namespace llbc {

Address Address::with(Side side) const {
  Address out = *this;
  out.path.push_back(side);
  return out;
}

std::string Address::str() const {
  std::string out = name;
  for (Side s : path) out += s == Side::Left ? ".l" : ".r";
  return out;
}

// ---------------------------------------------------------------------------
// LinearType

struct LinearType::Node {
  TypeKind kind;
  std::string unit;
  Polarity polarity = Polarity::Positive;
  std::vector<LinearType> children;
};

LinearType LinearType::atom(std::string unit, Polarity polarity) {
  return LinearType(std::make_shared<const Node>(
      Node{TypeKind::Atom, std::move(unit), polarity, {}}));
}

LinearType LinearType::binary(TypeKind kind, LinearType left,
                              LinearType right) {
  assert(kind == TypeKind::Tensor || kind == TypeKind::Par ||
         kind == TypeKind::With || kind == TypeKind::Plus);
  return LinearType(std::make_shared<const Node>(
      Node{kind, {}, Polarity::Positive, {std::move(left), std::move(right)}}));
}

LinearType LinearType::unary(TypeKind kind, LinearType body) {
  assert(kind == TypeKind::OfCourse || kind == TypeKind::WhyNot);
  return LinearType(std::make_shared<const Node>(
      Node{kind, {}, Polarity::Positive, {std::move(body)}}));
}

LinearType LinearType::tensor(LinearType l, LinearType r) {
  return binary(TypeKind::Tensor, std::move(l), std::move(r));
}
LinearType LinearType::par(LinearType l, LinearType r) {
  return binary(TypeKind::Par, std::move(l), std::move(r));
}
LinearType LinearType::with(LinearType l, LinearType r) {
  return binary(TypeKind::With, std::move(l), std::move(r));
}
LinearType LinearType::plus(LinearType l, LinearType r) {
  return binary(TypeKind::Plus, std::move(l), std::move(r));
}
LinearType LinearType::of_course(LinearType b) {
  return unary(TypeKind::OfCourse, std::move(b));
}
LinearType LinearType::why_not(LinearType b) {
  return unary(TypeKind::WhyNot, std::move(b));
}

TypeKind LinearType::kind() const { return node_->kind; }
bool LinearType::is_binary() const { return node_->children.size() == 2; }
const std::string& LinearType::unit() const { return node_->unit; }
Polarity LinearType::polarity() const { return node_->polarity; }
const LinearType& LinearType::left() const { return node_->children.at(0); }
const LinearType& LinearType::right() const { return node_->children.at(1); }
const LinearType& LinearType::body() const { return node_->children.at(0); }

std::size_t LinearType::depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return d + 1;
}

bool operator==(const LinearType& a, const LinearType& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.unit == y.unit && x.polarity == y.polarity &&
         x.children == y.children;
}

bool operator<(const LinearType& a, const LinearType& b) {
  if (a.node_ == b.node_) return false;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.unit != y.unit) return x.unit < y.unit;
  if (x.polarity != y.polarity) return x.polarity < y.polarity;
  return std::lexicographical_compare(x.children.begin(), x.children.end(),
                                      y.children.begin(), y.children.end());
}

// ---------------------------------------------------------------------------
// Expression

namespace {

Expression::Node make_node(ExprKind kind, SourceSpan span) {
  Expression::Node n;
  n.kind = kind;
  n.span = span;
  return n;
}

}  // namespace

Expression Expression::addr(Address address, SourceSpan span) {
  auto n = make_node(ExprKind::Addr, span);
  n.address = std::move(address);
  return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression Expression::unit(std::string name, SourceSpan span) {
  auto n = make_node(ExprKind::Unit, span);
  n.unit = std::move(name);
  return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression Expression::binary(ExprKind kind, Expression left, Expression right,
                              SourceSpan span) {
  assert(kind == ExprKind::Iso || kind == ExprKind::Conn ||
         kind == ExprKind::Contract);
  auto n = make_node(kind, span);
  n.children = {std::move(left), std::move(right)};
  return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression Expression::iso(Expression l, Expression r, SourceSpan span) {
  return binary(ExprKind::Iso, std::move(l), std::move(r), span);
}
Expression Expression::conn(Expression l, Expression r, SourceSpan span) {
  return binary(ExprKind::Conn, std::move(l), std::move(r), span);
}
Expression Expression::contract(Expression l, Expression r, SourceSpan span) {
  return binary(ExprKind::Contract, std::move(l), std::move(r), span);
}

Expression Expression::unary(ExprKind kind, Expression operand,
                             SourceSpan span) {
  assert(kind == ExprKind::Inl || kind == ExprKind::Inr ||
         kind == ExprKind::Store || kind == ExprKind::Dual);
  auto n = make_node(kind, span);
  n.children = {std::move(operand)};
  return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression Expression::inl(Expression e, SourceSpan span) {
  return unary(ExprKind::Inl, std::move(e), span);
}
Expression Expression::inr(Expression e, SourceSpan span) {
  return unary(ExprKind::Inr, std::move(e), span);
}
Expression Expression::store(Expression e, SourceSpan span) {
  return unary(ExprKind::Store, std::move(e), span);
}
Expression Expression::dual(Expression e, SourceSpan span) {
  return unary(ExprKind::Dual, std::move(e), span);
}

Expression Expression::dispose(SourceSpan span) {
  return Expression(
      std::make_shared<const Node>(make_node(ExprKind::Dispose, span)));
}

Expression Expression::choose(std::vector<Address> bound, Program left,
                              Program right, SourceSpan span) {
  auto n = make_node(ExprKind::Choose, span);
  n.bound = std::move(bound);
  n.programs = {std::move(left), std::move(right)};
  return Expression(std::make_shared<const Node>(std::move(n)));
}

Expression Expression::bang(std::vector<Address> bound, Program body,
                            SourceSpan span) {
  auto n = make_node(ExprKind::Bang, span);
  n.bound = std::move(bound);
  n.programs = {std::move(body)};
  return Expression(std::make_shared<const Node>(std::move(n)));
}

ExprKind Expression::kind() const { return node_->kind; }

bool Expression::is_binary() const {
  auto k = node_->kind;
  return k == ExprKind::Iso || k == ExprKind::Conn || k == ExprKind::Contract;
}

bool Expression::is_unary() const {
  auto k = node_->kind;
  return k == ExprKind::Inl || k == ExprKind::Inr || k == ExprKind::Store ||
         k == ExprKind::Dual;
}

bool Expression::is_box() const {
  return node_->kind == ExprKind::Choose || node_->kind == ExprKind::Bang;
}

const SourceSpan& Expression::span() const { return node_->span; }
const Address& Expression::address() const { return node_->address; }
const std::string& Expression::unit_name() const { return node_->unit; }
const Expression& Expression::left() const { return node_->children.at(0); }
const Expression& Expression::right() const { return node_->children.at(1); }
const Expression& Expression::operand() const { return node_->children.at(0); }
const std::vector<Address>& Expression::bound() const { return node_->bound; }
const Program& Expression::left_branch() const { return node_->programs.at(0); }
const Program& Expression::right_branch() const {
  return node_->programs.at(1);
}
const Program& Expression::body() const { return node_->programs.at(0); }

bool Expression::is_demand() const {
  return node_->kind == ExprKind::Dual &&
         node_->children[0].kind() == ExprKind::Unit;
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.address == y.address && x.unit == y.unit &&
         x.bound == y.bound && x.children == y.children &&
         x.programs == y.programs;
}

}  // namespace llbc
