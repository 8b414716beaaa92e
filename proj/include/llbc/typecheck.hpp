#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "llbc/model.hpp"

namespace llbc {

enum class TypeErrorKind {
  NonLinearAddress,
  TypeMismatch,
  BranchContextMismatch,
  NonExponentialPromotionContext,
  /// The proof structure links a term back to itself, so no derivation can
  /// split it into independent parts.
  CyclicConnection,
};

const char* to_string(TypeErrorKind kind);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, const std::string& what, SourceSpan span)
      : std::runtime_error(what), kind_(kind), span_(span) {}
  TypeErrorKind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  TypeErrorKind kind_;
  SourceSpan span_;
};

struct Binding {
  Expression expr;
  LinearType type;
  bool consumed = false;
};

/// Γ, Δ: resources in scope, each to be used exactly once.
using TypeContext = std::vector<Binding>;

/// `⊢ (e1 : A1, ..., en : An){ txns }`
struct Sequent {
  std::vector<std::pair<Expression, LinearType>> foci;
  std::vector<Transaction> txns;
};

struct Derivation {
  std::string rule;
  Sequent conclusion;
  std::vector<Derivation> premises;

  std::size_t size() const;
};

struct TypedJudgment {
  Program program;
  std::vector<LinearType> interface_types;
  Derivation derivation;
};

/// Checks `p` against the declared interface types and returns a derivation
/// of `⊢ (e1 : A1, ...){ txns }`. Each pending transaction is typed by cut.
/// Throws TypeError.
TypedJudgment check(const Program& p, const std::vector<LinearType>& declared);

/// Types `e`, drawing the resources it mentions from `ctx`: a subexpression
/// equal to an unconsumed binding takes that binding's type, and an address
/// occurring twice inside `e` is linked internally. Returns the type and
/// the bindings left unconsumed.
std::pair<LinearType, TypeContext> check_expression(
    const Expression& e, TypeContext ctx,
    std::optional<LinearType> expected = std::nullopt);

/// Re-checks every rule application of a derivation. On failure returns
/// false and, when `why` is given, a description of the offending step.
bool verify_derivation(const Derivation& d, std::string* why = nullptr);

/// verify_derivation plus agreement of the root with the judgment.
bool verify_judgment(const TypedJudgment& j, std::string* why = nullptr);

std::string render(const Sequent& s);
std::string render(const Derivation& d, int indent = 0);

}  // namespace llbc
