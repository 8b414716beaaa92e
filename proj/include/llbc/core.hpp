#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "llbc/model.hpp"

namespace llbc {

/// De Morgan dual: flips atom polarity and swaps Tensor/Par, With/Plus,
/// OfCourse/WhyNot.
LinearType dual(const LinearType& type);

/// Raised when `^` is applied to an expression form that has no dual
/// (menus, servers, storage, disposal, contraction, selections).
class DualityError : public std::runtime_error {
 public:
  DualityError(const std::string& what, SourceSpan span)
      : std::runtime_error(what), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Pushes `^` through an expression. Identity on addresses, swaps `*` and
/// `#`, and toggles a currency literal between supply and demand. Any `Dual`
/// markers in the input are eliminated first.
Expression dualize(const Expression& e);

/// Removes every `Dual` marker that does not wrap a currency literal.
Expression eliminate_duals(const Expression& e);

/// `e1 -o e2` is sugar for `e1^ # e2`.
Expression desugar_obligation(const Expression& e1, const Expression& e2);

/// `M . unit`: an M-fold right-associated `*` chain of the literal.
Expression repeat_unit(const std::string& unit, long count,
                       SourceSpan span = {});

Address rename(const Address& a, const std::vector<Side>& suffix);
Expression rename(const Expression& e, const std::vector<Side>& suffix);
Transaction rename(const Transaction& t, const std::vector<Side>& suffix);
Program rename(const Program& p, const std::vector<Side>& suffix);

template <class T>
T rename(const T& value, Side side) {
  return rename(value, std::vector<Side>{side});
}

/// Addresses visible at the program's own scope: everything in the
/// interface and pending list, including the door addresses of boxes. The
/// contents of a box, and a menu's principal placeholder, are bound by it.
std::set<Address> free_addresses(const Program& p);
std::set<Address> free_addresses(const Expression& e);

/// Occurrence counts at the program's own scope (same notion of scope as
/// free_addresses).
std::map<Address, int> scope_occurrences(const Program& p);
void count_occurrences(const Expression& e, std::map<Address, int>& counts);

/// Every address anywhere in the value, including box contents.
void collect_all_addresses(const Expression& e, std::set<Address>& out);
void collect_all_addresses(const Program& p, std::set<Address>& out);

std::size_t node_count(const Expression& e);
std::size_t node_count(const Program& p);

std::size_t depth(const Expression& e);

/// Multiset of supply literals (demand literals excluded), everywhere in
/// the value including box contents.
using UnitCounts = std::map<std::string, long>;
void count_units(const Expression& e, UnitCounts& out);
UnitCounts count_units(const Program& p);
void add_counts(UnitCounts& into, const UnitCounts& from, long sign = 1);

/// The open registry of currency units recognised by the parser.
class UnitRegistry {
 public:
  UnitRegistry() = default;
  explicit UnitRegistry(std::set<std::string> units)
      : units_(std::move(units)) {}

  /// satoshi, btc, ampere, doge.
  static UnitRegistry defaults();
  /// One token per line; blank lines and `//` comments are skipped.
  static UnitRegistry from_file(const std::string& path);
  /// Reads LLBC_UNITS if set, defaults otherwise.
  static UnitRegistry from_environment();

  bool contains(const std::string& unit) const {
    return units_.count(unit) != 0;
  }
  void add(std::string unit) { units_.insert(std::move(unit)); }
  const std::set<std::string>& units() const { return units_; }

 private:
  std::set<std::string> units_;
};

}  // namespace llbc
