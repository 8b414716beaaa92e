#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "llbc/core.hpp"
#include "llbc/model.hpp"

namespace llbc {

enum class RuleKind { Transaction, Pair, Left, Right, Read, Dispose, Copy };

const char* to_string(RuleKind kind);

// Every rule matches a transaction in either orientation; the rewritten
// transactions keep the orientation of the one they replace. Transaction
// fusion yields txn(rest of the first, rest of the second).
struct Redex {
  RuleKind kind;
  std::size_t position;
  // Transaction only: the second transaction and the mediating address.
  std::size_t partner = 0;
  Address via{};

  friend bool operator==(const Redex&, const Redex&) = default;
};

/// Units that left the program during reduction (or entered it, for
/// replication). For any run:
///   units(initial) + replicated == units(final) + burned + discarded
struct Accounting {
  UnitCounts burned;      // contents of servers sent to `_`
  UnitCounts discarded;   // unselected menu branches
  UnitCounts replicated;  // extra copies made by Copy
};

/// Redexes sorted by position, then by rule order.
std::vector<Redex> find_redexes(const Program& p);

/// Applies `r`, which must come from find_redexes(p).
Program step(const Program& p, const Redex& r, Accounting* acc = nullptr);

struct TraceEntry {
  Redex redex;
  Program result;
};

struct NormalizeResult {
  Program program;
  std::size_t steps = 0;
  std::vector<TraceEntry> trace;
  Accounting accounting;
  // Steps taken per rule, indexed by RuleKind.
  std::array<std::size_t, 7> fired{};
};

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted(Program last, std::size_t steps)
      : std::runtime_error("fuel exhausted after " + std::to_string(steps) +
                           " steps"),
        last_(std::move(last)),
        steps_(steps) {}
  const Program& last() const { return last_; }
  std::size_t steps() const { return steps_; }

 private:
  Program last_;
  std::size_t steps_;
};

/// Leftmost strategy. Throws FuelExhausted when `fuel` steps are taken and
/// a redex remains.
NormalizeResult normalize(const Program& p, std::size_t fuel,
                          bool trace = false);

/// `<index> <Rule> @<position> <program>`, index counted from 1.
std::string format_trace_line(std::size_t index, const TraceEntry& entry);

// ---------------------------------------------------------------------------
// Ledger read-back

class NotInLedgerForm : public std::runtime_error {
 public:
  NotInLedgerForm(const std::string& what, std::size_t index, SourceSpan span)
      : std::runtime_error(what), index_(index), span_(span) {}
  std::size_t index() const { return index_; }
  const SourceSpan& span() const { return span_; }

 private:
  std::size_t index_;
  SourceSpan span_;
};

/// Address to units held. Disposal transactions give an empty entry.
using Ledger = std::map<Address, UnitCounts>;

Ledger readback_ledger(const Program& p);

/// Per-unit totals over all addresses.
UnitCounts ledger_totals(const Ledger& ledger);

}  // namespace llbc
