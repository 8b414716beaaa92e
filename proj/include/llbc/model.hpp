#pragma once

// Abstract syntax shared by every stage: addresses, linear types, proof
// expressions, transactions and programs. All values are immutable after
// construction and share structure through reference-counted nodes.

#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace llbc {

struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;
};

enum class Side : unsigned char { Left, Right };

/// A ledger address. Parsed addresses always have an empty freshness path;
/// the reducer extends the path when it needs names distinct from existing
/// ones.
struct Address {
  std::string name;
  std::vector<Side> path;

  Address() = default;
  explicit Address(std::string name, std::vector<Side> path = {})
      : name(std::move(name)), path(std::move(path)) {}

  Address with(Side side) const;
  std::string str() const;

  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address& a, const Address& b) {
    if (auto c = a.name <=> b.name; c != 0) return c;
    return a.path <=> b.path;
  }
};

enum class Polarity : unsigned char { Positive, Negative };

enum class TypeKind : unsigned char {
  Atom,
  Tensor,
  Par,
  With,
  Plus,
  OfCourse,
  WhyNot,
};

/// Formula of classical linear logic, kept in negation-normal form: the only
/// negation is the polarity carried by atoms.
class LinearType {
 public:
  static LinearType atom(std::string unit,
                         Polarity polarity = Polarity::Positive);
  static LinearType tensor(LinearType left, LinearType right);
  static LinearType par(LinearType left, LinearType right);
  static LinearType with(LinearType left, LinearType right);
  static LinearType plus(LinearType left, LinearType right);
  static LinearType of_course(LinearType body);
  static LinearType why_not(LinearType body);
  static LinearType binary(TypeKind kind, LinearType left, LinearType right);
  static LinearType unary(TypeKind kind, LinearType body);

  TypeKind kind() const;
  bool is_binary() const;
  const std::string& unit() const;
  Polarity polarity() const;
  const LinearType& left() const;
  const LinearType& right() const;
  const LinearType& body() const;

  std::size_t depth() const;

  friend bool operator==(const LinearType& a, const LinearType& b);
  friend bool operator<(const LinearType& a, const LinearType& b);

  struct Node;

 private:
  explicit LinearType(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class ExprKind : unsigned char {
  Addr,      // x
  Unit,      // satoshi
  Iso,       // e * e
  Conn,      // e # e
  Choose,    // choose(x, ...){p; q}
  Inl,       // inl(e)
  Inr,       // inr(e)
  Store,     // ?e
  Dispose,   // _
  Contract,  // e @ e
  Bang,      // !(x, ...){p}
  Dual,      // e^
};

struct Program;

class Expression {
 public:
  static Expression addr(Address address, SourceSpan span = {});
  static Expression unit(std::string name, SourceSpan span = {});
  static Expression iso(Expression left, Expression right,
                        SourceSpan span = {});
  static Expression conn(Expression left, Expression right,
                         SourceSpan span = {});
  static Expression contract(Expression left, Expression right,
                             SourceSpan span = {});
  static Expression binary(ExprKind kind, Expression left, Expression right,
                           SourceSpan span = {});
  static Expression inl(Expression operand, SourceSpan span = {});
  static Expression inr(Expression operand, SourceSpan span = {});
  static Expression store(Expression operand, SourceSpan span = {});
  static Expression dual(Expression operand, SourceSpan span = {});
  static Expression unary(ExprKind kind, Expression operand,
                          SourceSpan span = {});
  static Expression dispose(SourceSpan span = {});
  static Expression choose(std::vector<Address> bound, Program left,
                           Program right, SourceSpan span = {});
  static Expression bang(std::vector<Address> bound, Program body,
                         SourceSpan span = {});

  ExprKind kind() const;
  bool is_binary() const;
  bool is_unary() const;
  bool is_box() const;
  const SourceSpan& span() const;

  const Address& address() const;            // Addr
  const std::string& unit_name() const;      // Unit
  const Expression& left() const;            // binary
  const Expression& right() const;           // binary
  const Expression& operand() const;         // unary
  const std::vector<Address>& bound() const; // Choose, Bang
  const Program& left_branch() const;        // Choose
  const Program& right_branch() const;       // Choose
  const Program& body() const;               // Bang

  /// True for a demand literal, i.e. Dual(Unit).
  bool is_demand() const;

  /// Structural equality; spans are ignored.
  friend bool operator==(const Expression& a, const Expression& b);

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Transaction {
  Expression left;
  Expression right;
  SourceSpan span{};

  friend bool operator==(const Transaction& a, const Transaction& b) {
    return a.left == b.left && a.right == b.right;
  }
};

/// A blockchain state: resources exposed at the interface plus transactions
/// still in flight.
struct Program {
  std::vector<Expression> interface;
  std::vector<Transaction> pending;
  SourceSpan span{};

  friend bool operator==(const Program& a, const Program& b) {
    return a.interface == b.interface && a.pending == b.pending;
  }
};

struct Expression::Node {
  ExprKind kind;
  SourceSpan span;
  Address address;
  std::string unit;
  std::vector<Expression> children;
  std::vector<Address> bound;
  std::vector<Program> programs;
};

}  // namespace llbc
