#include "llbc/reducer.hpp"

#include <sstream>

#include "llbc/render.hpp"

namespace llbc {

const char* to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Transaction: return "Transaction";
    case RuleKind::Pair: return "Pair";
    case RuleKind::Left: return "Left";
    case RuleKind::Right: return "Right";
    case RuleKind::Read: return "Read";
    case RuleKind::Dispose: return "Dispose";
    case RuleKind::Copy: return "Copy";
  }
  return "?";
}

namespace {

// Orientation helpers: `flip` means the principal side is on the right.
const Expression& principal(const Transaction& t, bool flip) {
  return flip ? t.right : t.left;
}
const Expression& partner_side(const Transaction& t, bool flip) {
  return flip ? t.left : t.right;
}
Transaction make(Expression a, Expression b, bool flip, SourceSpan span) {
  if (flip) return {std::move(b), std::move(a), span};
  return {std::move(a), std::move(b), span};
}

bool is_addr(const Expression& e, const Address& a) {
  return e.kind() == ExprKind::Addr && e.address() == a;
}

// Which side of `t` (if any) is the principal of a box rule with the given
// box kind and co-pattern.
std::optional<bool> box_orientation(const Transaction& t, ExprKind box,
                                    ExprKind other) {
  if (t.left.kind() == box && t.right.kind() == other) return false;
  if (t.right.kind() == box && t.left.kind() == other) return true;
  return std::nullopt;
}

bool menu_shape_ok(const Expression& menu, const Program& branch) {
  return branch.interface.size() == menu.bound().size();
}

bool server_shape_ok(const Expression& server) {
  return server.body().interface.size() == server.bound().size() + 1;
}

// 0 -> {}, 1 -> l, 2 -> r, 3 -> ll, 4 -> lr, ...
std::vector<Side> nth_suffix(std::size_t n) {
  std::size_t len = 0;
  while (n >= (std::size_t{2} << len) - 1) ++len;
  std::size_t k = n - ((std::size_t{1} << len) - 1);
  std::vector<Side> out(len);
  for (std::size_t i = 0; i < len; ++i)
    out[len - 1 - i] = (k >> i) & 1 ? Side::Right : Side::Left;
  return out;
}

template <class Ok>
std::vector<Side> smallest_suffix(Ok ok) {
  for (std::size_t n = 0;; ++n) {
    std::vector<Side> s = nth_suffix(n);
    if (ok(s)) return s;
  }
}

bool disjoint_after(const std::set<Address>& names,
                    const std::vector<Side>& suffix,
                    const std::set<Address>& taken) {
  for (const auto& a : names)
    if (taken.count(rename(a, suffix))) return false;
  return true;
}

// Renames a box body so that its own names cannot capture anything in the
// enclosing scope once it is opened.
Program open_fresh(const Program& body, const std::set<Address>& outer) {
  std::set<Address> inner = free_addresses(body);
  return rename(body, smallest_suffix([&](const std::vector<Side>& s) {
                  return disjoint_after(inner, s, outer);
                }));
}

void append_with(std::vector<Side> base, Side last, std::vector<Side>& out) {
  base.push_back(last);
  out = std::move(base);
}

}  // namespace

std::vector<Redex> find_redexes(const Program& p) {
  std::vector<Redex> out;
  std::map<Address, int> counts = scope_occurrences(p);
  const auto& txns = p.pending;
  for (std::size_t i = 0; i < txns.size(); ++i) {
    const Transaction& t = txns[i];
    for (const Expression* side : {&t.left, &t.right}) {
      if (side->kind() != ExprKind::Addr) continue;
      const Address& x = side->address();
      if (counts[x] != 2) continue;
      for (std::size_t j = i + 1; j < txns.size(); ++j) {
        if (is_addr(txns[j].left, x) || is_addr(txns[j].right, x)) {
          out.push_back({RuleKind::Transaction, i, j, x});
          break;
        }
      }
    }
    if (box_orientation(t, ExprKind::Iso, ExprKind::Conn))
      out.push_back({RuleKind::Pair, i});
    if (auto f = box_orientation(t, ExprKind::Choose, ExprKind::Inl);
        f && menu_shape_ok(principal(t, *f), principal(t, *f).left_branch()))
      out.push_back({RuleKind::Left, i});
    if (auto f = box_orientation(t, ExprKind::Choose, ExprKind::Inr);
        f && menu_shape_ok(principal(t, *f), principal(t, *f).right_branch()))
      out.push_back({RuleKind::Right, i});
    if (auto f = box_orientation(t, ExprKind::Bang, ExprKind::Store);
        f && server_shape_ok(principal(t, *f)))
      out.push_back({RuleKind::Read, i});
    if (box_orientation(t, ExprKind::Bang, ExprKind::Dispose))
      out.push_back({RuleKind::Dispose, i});
    if (box_orientation(t, ExprKind::Bang, ExprKind::Contract))
      out.push_back({RuleKind::Copy, i});
  }
  return out;
}

Program step(const Program& p, const Redex& r, Accounting* acc) {
  const Transaction& t = p.pending.at(r.position);
  std::vector<Transaction> residue;
  Program out;
  out.interface = p.interface;
  out.span = p.span;

  auto open = [&](const Expression& box, const Program& body,
                  std::size_t first_door, const Expression& co, bool flip) {
    Program fresh = open_fresh(body, free_addresses(p));
    residue.push_back(make(fresh.interface[0], co, flip, t.span));
    residue.insert(residue.end(), fresh.pending.begin(), fresh.pending.end());
    const auto& bound = box.bound();
    for (std::size_t i = first_door; i < bound.size(); ++i)
      residue.push_back(make(Expression::addr(bound[i]),
                             fresh.interface[i - first_door + 1], flip,
                             t.span));
  };

  switch (r.kind) {
    case RuleKind::Transaction: {
      const Transaction& u = p.pending.at(r.partner);
      const Expression& e1 = is_addr(t.left, r.via) ? t.right : t.left;
      const Expression& e2 = is_addr(u.left, r.via) ? u.right : u.left;
      residue.push_back({e1, e2, t.span});
      break;
    }
    case RuleKind::Pair: {
      bool flip = t.left.kind() == ExprKind::Conn;
      const Expression& iso = principal(t, flip);
      const Expression& conn = partner_side(t, flip);
      residue.push_back(make(iso.left(), conn.left(), flip, t.span));
      residue.push_back(make(iso.right(), conn.right(), flip, t.span));
      break;
    }
    case RuleKind::Left:
    case RuleKind::Right: {
      bool flip = t.right.kind() == ExprKind::Choose;
      const Expression& menu = principal(t, flip);
      const Expression& sel = partner_side(t, flip);
      bool left = r.kind == RuleKind::Left;
      const Program& taken = left ? menu.left_branch() : menu.right_branch();
      const Program& dropped = left ? menu.right_branch() : menu.left_branch();
      if (acc) add_counts(acc->discarded, count_units(dropped));
      open(menu, taken, 1, sel.operand(), flip);
      break;
    }
    case RuleKind::Read: {
      bool flip = t.right.kind() == ExprKind::Bang;
      const Expression& server = principal(t, flip);
      open(server, server.body(), 0, partner_side(t, flip).operand(), flip);
      break;
    }
    case RuleKind::Dispose: {
      bool flip = t.right.kind() == ExprKind::Bang;
      const Expression& server = principal(t, flip);
      if (acc) add_counts(acc->burned, count_units(server.body()));
      for (const auto& x : server.bound())
        residue.push_back(
            make(Expression::addr(x), Expression::dispose(), flip, t.span));
      break;
    }
    case RuleKind::Copy: {
      bool flip = t.right.kind() == ExprKind::Bang;
      const Expression& server = principal(t, flip);
      const Expression& contraction = partner_side(t, flip);
      std::set<Address> outer = free_addresses(p);
      std::set<Address> doors(server.bound().begin(), server.bound().end());
      std::vector<Side> sl, sr;
      smallest_suffix([&](const std::vector<Side>& s) {
        append_with(s, Side::Left, sl);
        append_with(s, Side::Right, sr);
        return disjoint_after(doors, sl, outer) &&
               disjoint_after(doors, sr, outer);
      });
      if (acc) add_counts(acc->replicated, count_units(server.body()));
      for (const auto& x : server.bound())
        residue.push_back(make(Expression::addr(x),
                               Expression::contract(
                                   Expression::addr(rename(x, sl)),
                                   Expression::addr(rename(x, sr))),
                               flip, t.span));
      residue.push_back(
          make(rename(server, sl), contraction.left(), flip, t.span));
      residue.push_back(
          make(rename(server, sr), contraction.right(), flip, t.span));
      break;
    }
  }

  for (std::size_t i = 0; i < p.pending.size(); ++i) {
    if (i == r.position) {
      out.pending.insert(out.pending.end(), residue.begin(), residue.end());
    } else if (!(r.kind == RuleKind::Transaction && i == r.partner)) {
      out.pending.push_back(p.pending[i]);
    }
  }
  return out;
}

NormalizeResult normalize(const Program& p, std::size_t fuel, bool trace) {
  NormalizeResult res;
  res.program = p;
  for (;;) {
    std::vector<Redex> redexes = find_redexes(res.program);
    if (redexes.empty()) return res;
    if (res.steps >= fuel) throw FuelExhausted(res.program, res.steps);
    res.program = step(res.program, redexes.front(), &res.accounting);
    ++res.steps;
    ++res.fired[static_cast<std::size_t>(redexes.front().kind)];
    if (trace) res.trace.push_back({redexes.front(), res.program});
  }
}

std::string format_trace_line(std::size_t index, const TraceEntry& entry) {
  std::ostringstream out;
  out << index << ' ' << to_string(entry.redex.kind) << " @"
      << entry.redex.position << ' ' << render(entry.result);
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

bool units_tree(const Expression& e, UnitCounts& out) {
  if (e.kind() == ExprKind::Unit) {
    ++out[e.unit_name()];
    return true;
  }
  if (e.kind() == ExprKind::Iso)
    return units_tree(e.left(), out) && units_tree(e.right(), out);
  return false;
}

bool ledger_entry(const Expression& a, const Expression& v, Ledger& ledger) {
  if (a.kind() != ExprKind::Addr) return false;
  UnitCounts held;
  if (v.kind() != ExprKind::Dispose && !units_tree(v, held)) return false;
  add_counts(ledger[a.address()], held);
  return true;
}

}  // namespace

Ledger readback_ledger(const Program& p) {
  Ledger ledger;
  for (std::size_t i = 0; i < p.pending.size(); ++i) {
    const Transaction& t = p.pending[i];
    if (ledger_entry(t.left, t.right, ledger) ||
        ledger_entry(t.right, t.left, ledger))
      continue;
    throw NotInLedgerForm("transaction " + std::to_string(i) + " " +
                              render(t) +
                              " does not assign units to an address",
                          i, t.span);
  }
  return ledger;
}

UnitCounts ledger_totals(const Ledger& ledger) {
  UnitCounts total;
  for (const auto& [addr, held] : ledger) add_counts(total, held);
  return total;
}

}  // namespace llbc
