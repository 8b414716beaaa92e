#include "llbc/render.hpp"

#include <sstream>

namespace llbc {

namespace {

// Binding strength; higher binds tighter.
int type_level(const LinearType& t) {
  switch (t.kind()) {
    case TypeKind::Plus: return 1;
    case TypeKind::With: return 2;
    case TypeKind::Par: return 3;
    case TypeKind::Tensor: return 4;
    case TypeKind::OfCourse:
    case TypeKind::WhyNot: return 5;
    case TypeKind::Atom: return 6;
  }
  return 0;
}

const char* type_op(TypeKind k) {
  switch (k) {
    case TypeKind::Plus: return " + ";
    case TypeKind::With: return " & ";
    case TypeKind::Par: return " # ";
    case TypeKind::Tensor: return " * ";
    default: return "";
  }
}

void emit(std::ostream& out, const LinearType& t);

void emit_child(std::ostream& out, const LinearType& t, bool parens) {
  if (parens) out << '(';
  emit(out, t);
  if (parens) out << ')';
}

void emit(std::ostream& out, const LinearType& t) {
  int lvl = type_level(t);
  switch (t.kind()) {
    case TypeKind::Atom:
      out << t.unit();
      if (t.polarity() == Polarity::Negative) out << '^';
      return;
    case TypeKind::OfCourse:
    case TypeKind::WhyNot:
      out << (t.kind() == TypeKind::OfCourse ? '!' : '?');
      emit_child(out, t.body(), type_level(t.body()) < lvl);
      return;
    default:
      emit_child(out, t.left(), type_level(t.left()) < lvl);
      out << type_op(t.kind());
      emit_child(out, t.right(), type_level(t.right()) <= lvl);
  }
}

int expr_level(const Expression& e) {
  switch (e.kind()) {
    case ExprKind::Contract: return 1;
    case ExprKind::Conn: return 2;
    case ExprKind::Iso: return 3;
    case ExprKind::Store: return 4;
    default: return 5;
  }
}

void emit(std::ostream& out, const Program& p);

void emit(std::ostream& out, const Expression& e);

void emit_child(std::ostream& out, const Expression& e, bool parens) {
  if (parens) out << '(';
  emit(out, e);
  if (parens) out << ')';
}

void emit_bound(std::ostream& out, const std::vector<Address>& bound) {
  out << '(';
  for (std::size_t i = 0; i < bound.size(); ++i)
    out << (i ? ", " : "") << bound[i].str();
  out << ')';
}

void emit(std::ostream& out, const Expression& e) {
  int lvl = expr_level(e);
  switch (e.kind()) {
    case ExprKind::Addr:
      out << e.address().str();
      return;
    case ExprKind::Unit:
      out << e.unit_name();
      return;
    case ExprKind::Dispose:
      out << '_';
      return;
    case ExprKind::Dual:
      emit_child(out, e.operand(), expr_level(e.operand()) < 5);
      out << '^';
      return;
    case ExprKind::Inl:
    case ExprKind::Inr:
      out << (e.kind() == ExprKind::Inl ? "inl(" : "inr(");
      emit(out, e.operand());
      out << ')';
      return;
    case ExprKind::Store:
      out << '?';
      emit_child(out, e.operand(), expr_level(e.operand()) < lvl);
      return;
    case ExprKind::Choose:
      out << "choose";
      emit_bound(out, e.bound());
      out << '{';
      emit(out, e.left_branch());
      out << "; ";
      emit(out, e.right_branch());
      out << '}';
      return;
    case ExprKind::Bang:
      out << '!';
      emit_bound(out, e.bound());
      out << '{';
      emit(out, e.body());
      out << '}';
      return;
    case ExprKind::Iso:
    case ExprKind::Conn:
    case ExprKind::Contract: {
      const char* op = e.kind() == ExprKind::Iso    ? " * "
                       : e.kind() == ExprKind::Conn ? " # "
                                                    : " @ ";
      emit_child(out, e.left(), expr_level(e.left()) < lvl);
      out << op;
      emit_child(out, e.right(), expr_level(e.right()) <= lvl);
      return;
    }
  }
}

void emit(std::ostream& out, const Transaction& t) {
  out << "txn(";
  emit(out, t.left);
  out << ", ";
  emit(out, t.right);
  out << ')';
}

void emit(std::ostream& out, const Program& p) {
  out << '(';
  for (std::size_t i = 0; i < p.interface.size(); ++i) {
    if (i) out << ", ";
    emit(out, p.interface[i]);
  }
  out << "){";
  if (p.pending.empty()) {
    out << '}';
    return;
  }
  out << ' ';
  for (std::size_t i = 0; i < p.pending.size(); ++i) {
    if (i) out << "; ";
    emit(out, p.pending[i]);
  }
  out << " }";
}

template <class T>
std::string to_string(const T& v) {
  std::ostringstream out;
  emit(out, v);
  return out.str();
}

}  // namespace

std::string render(const LinearType& type) { return to_string(type); }
std::string render(const Expression& e) { return to_string(e); }
std::string render(const Transaction& t) { return to_string(t); }
std::string render(const Program& p) { return to_string(p); }

}  // namespace llbc
