#include "llbc/alpha.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "llbc/render.hpp"

namespace llbc {

namespace {

struct Bijection {
  std::map<Address, Address> fwd;
  std::map<Address, Address> bwd;

  bool relate(const Address& a, const Address& b) {
    auto f = fwd.find(a);
    if (f != fwd.end()) return f->second == b;
    if (bwd.count(b)) return false;
    fwd.emplace(a, b);
    bwd.emplace(b, a);
    return true;
  }
};

// Structure with addresses erased; a cheap filter before matching.
void shape(const Expression& e, std::string& out) {
  switch (e.kind()) {
    case ExprKind::Addr: out += 'a'; return;
    case ExprKind::Unit: out += e.unit_name(); return;
    case ExprKind::Dispose: out += '_'; return;
    case ExprKind::Choose:
    case ExprKind::Bang:
      out += e.kind() == ExprKind::Choose ? "C" : "B";
      out += std::to_string(e.bound().size());
      return;
    default: break;
  }
  out += static_cast<char>('0' + static_cast<int>(e.kind()));
  out += '(';
  if (e.is_binary()) {
    shape(e.left(), out);
    out += ',';
    shape(e.right(), out);
  } else {
    shape(e.operand(), out);
  }
  out += ')';
}

std::string shape(const Expression& e) {
  std::string s;
  shape(e, s);
  return s;
}

bool match_scope(const Program& a, const Program& b, Bijection& bij);

bool match(const Expression& a, const Expression& b, Bijection& bij) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Addr: return bij.relate(a.address(), b.address());
    case ExprKind::Unit: return a.unit_name() == b.unit_name();
    case ExprKind::Dispose: return true;
    case ExprKind::Choose:
    case ExprKind::Bang: {
      if (a.bound().size() != b.bound().size()) return false;
      std::size_t first = a.kind() == ExprKind::Choose ? 1 : 0;
      for (std::size_t i = first; i < a.bound().size(); ++i)
        if (!bij.relate(a.bound()[i], b.bound()[i])) return false;
      if (a.kind() == ExprKind::Bang) {
        Bijection inner;
        return match_scope(a.body(), b.body(), inner);
      }
      Bijection left, right;
      return match_scope(a.left_branch(), b.left_branch(), left) &&
             match_scope(a.right_branch(), b.right_branch(), right);
    }
    default: break;
  }
  if (a.is_binary())
    return match(a.left(), b.left(), bij) && match(a.right(), b.right(), bij);
  return match(a.operand(), b.operand(), bij);
}

struct Candidate {
  std::string left, right;
};

bool match_pending(const std::vector<Transaction>& as,
                   const std::vector<Transaction>& bs,
                   const std::vector<Candidate>& ashape,
                   const std::vector<Candidate>& bshape, std::size_t i,
                   std::vector<char>& used, Bijection& bij) {
  if (i == as.size()) return true;
  const Transaction& t = as[i];
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (used[j]) continue;
    for (bool flip : {false, true}) {
      const std::string& bl = flip ? bshape[j].right : bshape[j].left;
      const std::string& br = flip ? bshape[j].left : bshape[j].right;
      if (bl != ashape[i].left || br != ashape[i].right) continue;
      Bijection trial = bij;
      const Expression& l = flip ? bs[j].right : bs[j].left;
      const Expression& r = flip ? bs[j].left : bs[j].right;
      if (!match(t.left, l, trial) || !match(t.right, r, trial)) continue;
      used[j] = 1;
      if (match_pending(as, bs, ashape, bshape, i + 1, used, trial)) {
        bij = std::move(trial);
        return true;
      }
      used[j] = 0;
    }
  }
  return false;
}

bool match_scope(const Program& a, const Program& b, Bijection& bij) {
  if (a.interface.size() != b.interface.size() ||
      a.pending.size() != b.pending.size())
    return false;
  for (std::size_t i = 0; i < a.interface.size(); ++i)
    if (!match(a.interface[i], b.interface[i], bij)) return false;
  std::vector<Candidate> ashape, bshape;
  for (const auto& t : a.pending) ashape.push_back({shape(t.left), shape(t.right)});
  for (const auto& t : b.pending) bshape.push_back({shape(t.left), shape(t.right)});
  std::vector<char> used(b.pending.size(), 0);
  return match_pending(a.pending, b.pending, ashape, bshape, 0, used, bij);
}

}  // namespace

bool alpha_equivalent(const Program& a, const Program& b) {
  Bijection bij;
  return match_scope(a, b, bij);
}

std::string canonical_key(const Program& p) {
  std::string key = "(";
  for (const auto& e : p.interface) key += render(e) + ",";
  key += "){";
  std::vector<std::string> txns;
  for (const auto& t : p.pending) {
    std::string l = render(t.left), r = render(t.right);
    if (r < l) std::swap(l, r);
    txns.push_back(l + "|" + r);
  }
  std::sort(txns.begin(), txns.end());
  for (const auto& t : txns) key += t + ";";
  return key + "}";
}

}  // namespace llbc
