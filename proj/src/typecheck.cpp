#include "llbc/typecheck.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "llbc/core.hpp"
#include "llbc/render.hpp"

namespace llbc {

const char* to_string(TypeErrorKind kind) {
  switch (kind) {
    case TypeErrorKind::NonLinearAddress: return "NonLinearAddress";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::BranchContextMismatch: return "BranchContextMismatch";
    case TypeErrorKind::NonExponentialPromotionContext:
      return "NonExponentialPromotionContext";
    case TypeErrorKind::CyclicConnection: return "CyclicConnection";
  }
  return "TypeError";
}

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

namespace {

// Atom chosen for type variables nothing constrains, e.g. the payload of a
// disposal `_ : ?A`. Any instantiation yields a valid derivation.
constexpr const char* kDefaultAtom = "satoshi";

// ---------------------------------------------------------------------------
// First-order unification over linear types. Variables come in dual pairs
// so that `dual` of an unknown type is again a term; binding one variable
// binds its partner to the dual.

class Unifier {
 public:
  int fresh() {
    int v = static_cast<int>(terms_.size());
    terms_.push_back({TypeKind::Atom, true, true, {}, Polarity::Positive,
                      -1, -1, v + 1});
    terms_.push_back({TypeKind::Atom, true, false, {}, Polarity::Positive,
                      -1, -1, v});
    parent_.push_back(v);
    parent_.push_back(v + 1);
    return v;
  }

  int atom(const std::string& unit, Polarity pol) {
    return push({TypeKind::Atom, false, false, unit, pol, -1, -1, -1});
  }

  int node(TypeKind k, int a, int b = -1) {
    return push({k, false, false, {}, Polarity::Positive, a, b, -1});
  }

  int from_type(const LinearType& t) {
    switch (t.kind()) {
      case TypeKind::Atom:
        return atom(t.unit(), t.polarity());
      case TypeKind::OfCourse:
      case TypeKind::WhyNot:
        return node(t.kind(), from_type(t.body()));
      default: {
        int a = from_type(t.left());
        int b = from_type(t.right());
        return node(t.kind(), a, b);
      }
    }
  }

  int find(int t) {
    while (parent_[t] != t) {
      parent_[t] = parent_[parent_[t]];
      t = parent_[t];
    }
    return t;
  }

  int dual(int t) {
    t = find(t);
    Term x = terms_[t];
    if (x.var) return find(x.partner);
    switch (x.kind) {
      case TypeKind::Atom:
        return atom(x.unit, x.pol == Polarity::Positive ? Polarity::Negative
                                                        : Polarity::Positive);
      case TypeKind::Tensor: return binary_dual(TypeKind::Par, x);
      case TypeKind::Par: return binary_dual(TypeKind::Tensor, x);
      case TypeKind::With: return binary_dual(TypeKind::Plus, x);
      case TypeKind::Plus: return binary_dual(TypeKind::With, x);
      case TypeKind::OfCourse: return node(TypeKind::WhyNot, dual(x.a));
      case TypeKind::WhyNot: return node(TypeKind::OfCourse, dual(x.a));
    }
    return t;
  }

  bool unify(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return true;
    if (terms_[x].var) return bind(x, y);
    if (terms_[y].var) return bind(y, x);
    const Term a = terms_[x];
    const Term b = terms_[y];
    if (a.kind != b.kind) return false;
    if (a.kind == TypeKind::Atom) return a.unit == b.unit && a.pol == b.pol;
    if (!unify(a.a, b.a)) return false;
    return a.b < 0 || unify(a.b, b.b);
  }

  LinearType resolve(int t) {
    t = find(t);
    const Term x = terms_[t];
    if (x.var)
      return LinearType::atom(kDefaultAtom, x.primary ? Polarity::Positive
                                                      : Polarity::Negative);
    switch (x.kind) {
      case TypeKind::Atom:
        return LinearType::atom(x.unit, x.pol);
      case TypeKind::OfCourse:
      case TypeKind::WhyNot:
        return LinearType::unary(x.kind, resolve(x.a));
      default: {
        LinearType l = resolve(x.a);
        LinearType r = resolve(x.b);
        return LinearType::binary(x.kind, l, r);
      }
    }
  }

 private:
  struct Term {
    TypeKind kind;
    bool var;
    bool primary;
    std::string unit;
    Polarity pol;
    int a, b;
    int partner;
  };

  int push(Term t) {
    int id = static_cast<int>(terms_.size());
    terms_.push_back(std::move(t));
    parent_.push_back(id);
    return id;
  }

  int binary_dual(TypeKind k, const Term& x) {
    int a = dual(x.a);
    int b = dual(x.b);
    return node(k, a, b);
  }

  bool occurs(int v, int t) {
    t = find(t);
    if (t == v) return true;
    const Term x = terms_[t];
    if (x.var) return false;
    if (x.a >= 0 && occurs(v, x.a)) return true;
    return x.b >= 0 && occurs(v, x.b);
  }

  bool bind(int v, int t) {
    int pv = find(terms_[v].partner);
    if (occurs(v, t) || occurs(pv, t)) return false;
    int dt = dual(t);
    parent_[v] = t;
    parent_[pv] = dt;
    return true;
  }

  std::vector<Term> terms_;
  std::vector<int> parent_;
};

// ---------------------------------------------------------------------------
// Occurrence graph: one node per expression occurrence, transaction and box
// door, so that identical subterms at different positions stay distinct.

enum class OccKind { Expr, Txn, Door, Opaque };

struct Occ {
  Occ(OccKind kind, Expression expr, Transaction txn, int term)
      : kind(kind), expr(std::move(expr)), txn(std::move(txn)), term(term) {}

  OccKind kind;
  Expression expr;
  Transaction txn;
  int term = -1;
  int parent = -1;
  int partner = -1;
  std::vector<int> kids;
  std::vector<int> doors;
  std::vector<int> scopes;
};

struct Scope {
  std::vector<int> roots;
  std::vector<int> cuts;
  std::map<Address, std::vector<int>> addresses;
};

struct Constraint {
  int a, b;
  TypeErrorKind kind;
  SourceSpan span;
  std::string what;
};

class Builder {
 public:
  Unifier unifier;
  std::vector<Occ> occs;
  std::vector<Scope> scopes;
  std::vector<Constraint> constraints;
  TypeContext* ctx = nullptr;

  int build_scope(const Program& p) {
    int sid = static_cast<int>(scopes.size());
    scopes.emplace_back();
    for (const auto& e : p.interface) {
      int r = build_expr(e, sid);
      scopes[sid].roots.push_back(r);
    }
    for (const auto& t : p.pending) {
      int id = add(Occ(OccKind::Txn, t.left, t, -1));
      int l = build_expr(t.left, sid);
      int r = build_expr(t.right, sid);
      occs[l].parent = occs[r].parent = id;
      occs[id].kids = {l, r};
      constraints.push_back({occs[l].term, unifier.dual(occs[r].term),
                             TypeErrorKind::TypeMismatch, t.span,
                             "transaction joins non-dual types: " + render(t)});
      scopes[sid].cuts.push_back(id);
    }
    link_scope(sid);
    return sid;
  }

  int build_expr(const Expression& e, int sid) {
    if (ctx) {
      for (auto& b : *ctx) {
        if (!b.consumed && b.expr == e) {
          b.consumed = true;
          int id = add(Occ(OccKind::Opaque, e, {e, e, {}}, unifier.from_type(b.type)));
          return id;
        }
      }
    }
    int id = add(Occ(OccKind::Expr, e, {e, e, {}}, -1));
    switch (e.kind()) {
      case ExprKind::Addr:
        occs[id].term = unifier.fresh();
        scopes[sid].addresses[e.address()].push_back(id);
        break;
      case ExprKind::Unit:
        occs[id].term = unifier.atom(e.unit_name(), Polarity::Positive);
        break;
      case ExprKind::Dual:
        if (!e.is_demand())
          throw TypeError(TypeErrorKind::TypeMismatch,
                          "unexpected dual marker in " + render(e), e.span());
        occs[id].term =
            unifier.atom(e.operand().unit_name(), Polarity::Negative);
        break;
      case ExprKind::Dispose:
        occs[id].term = unifier.node(TypeKind::WhyNot, unifier.fresh());
        break;
      case ExprKind::Iso:
      case ExprKind::Conn: {
        int l = child(id, e.left(), sid);
        int r = child(id, e.right(), sid);
        occs[id].term = unifier.node(
            e.kind() == ExprKind::Iso ? TypeKind::Tensor : TypeKind::Par,
            occs[l].term, occs[r].term);
        break;
      }
      case ExprKind::Contract: {
        int l = child(id, e.left(), sid);
        int r = child(id, e.right(), sid);
        int w = unifier.node(TypeKind::WhyNot, unifier.fresh());
        constraints.push_back({occs[l].term, w, TypeErrorKind::TypeMismatch,
                               e.left().span(),
                               "contraction operand must have a ?-type"});
        constraints.push_back({occs[r].term, w, TypeErrorKind::TypeMismatch,
                               e.right().span(),
                               "contraction operand must have a ?-type"});
        occs[id].term = w;
        break;
      }
      case ExprKind::Inl:
      case ExprKind::Inr: {
        int c = child(id, e.operand(), sid);
        int other = unifier.fresh();
        occs[id].term =
            e.kind() == ExprKind::Inl
                ? unifier.node(TypeKind::Plus, occs[c].term, other)
                : unifier.node(TypeKind::Plus, other, occs[c].term);
        break;
      }
      case ExprKind::Store: {
        int c = child(id, e.operand(), sid);
        occs[id].term = unifier.node(TypeKind::WhyNot, occs[c].term);
        break;
      }
      case ExprKind::Choose:
        build_choose(id, e, sid);
        break;
      case ExprKind::Bang:
        build_bang(id, e, sid);
        break;
    }
    return id;
  }

  // Every address of a scope must occur exactly twice; the two occurrences
  // carry dual types.
  void link_scope(int sid) {
    for (auto& [addr, list] : scopes[sid].addresses) {
      if (list.size() == 2) {
        int a = list[0], b = list[1];
        occs[a].partner = b;
        occs[b].partner = a;
        constraints.push_back({occs[a].term, unifier.dual(occs[b].term),
                               TypeErrorKind::TypeMismatch,
                               occs[b].expr.span(),
                               "occurrences of '" + addr.str() +
                                   "' do not have dual types"});
        continue;
      }
      std::ostringstream msg;
      msg << "address '" << addr.str() << "' occurs " << list.size()
          << (list.size() == 1 ? " time" : " times")
          << " in its scope (expected exactly 2)";
      throw TypeError(TypeErrorKind::NonLinearAddress, msg.str(),
                      occs[list.front()].expr.span());
    }
  }

  void solve() {
    for (const auto& c : constraints)
      if (!unifier.unify(c.a, c.b)) throw TypeError(c.kind, c.what, c.span);
  }

 private:
  int add(Occ o) {
    occs.push_back(std::move(o));
    return static_cast<int>(occs.size()) - 1;
  }

  int child(int parent, const Expression& e, int sid) {
    int c = build_expr(e, sid);
    occs[c].parent = parent;
    occs[parent].kids.push_back(c);
    return c;
  }

  int add_door(int box, const Address& a, int term, int sid) {
    Expression door = Expression::addr(a, occs[box].expr.span());
    int d = add(Occ(OccKind::Door, door, {door, door, {}}, term));
    occs[d].parent = box;
    occs[box].doors.push_back(d);
    scopes[sid].addresses[a].push_back(d);
    return d;
  }

  void build_choose(int id, const Expression& e, int sid) {
    const auto& bound = e.bound();
    int sl = build_scope(e.left_branch());
    int sr = build_scope(e.right_branch());
    occs[id].scopes = {sl, sr};
    const auto& lr = scopes[sl].roots;
    const auto& rr = scopes[sr].roots;
    if (lr.size() != bound.size() || rr.size() != bound.size()) {
      std::ostringstream msg;
      msg << "menu binds " << bound.size()
          << " addresses but its branches expose " << lr.size() << " and "
          << rr.size() << " resources";
      throw TypeError(TypeErrorKind::BranchContextMismatch, msg.str(),
                      e.span());
    }
    for (std::size_t i = 1; i < bound.size(); ++i) {
      int g = occs[lr[i]].term;
      constraints.push_back({g, occs[rr[i]].term,
                             TypeErrorKind::BranchContextMismatch,
                             occs[rr[i]].expr.span(),
                             "menu branches disagree on the type of context "
                             "resource " + std::to_string(i)});
      add_door(id, bound[i], unifier.dual(g), sid);
    }
    occs[id].term =
        unifier.node(TypeKind::With, occs[lr[0]].term, occs[rr[0]].term);
  }

  void build_bang(int id, const Expression& e, int sid) {
    const auto& bound = e.bound();
    int s = build_scope(e.body());
    occs[id].scopes = {s};
    const auto& roots = scopes[s].roots;
    if (roots.size() != bound.size() + 1) {
      std::ostringstream msg;
      msg << "server with " << bound.size() << " doors must expose "
          << bound.size() + 1 << " resources, found " << roots.size();
      throw TypeError(TypeErrorKind::NonExponentialPromotionContext, msg.str(),
                      e.span());
    }
    for (std::size_t i = 0; i < bound.size(); ++i) {
      int g = occs[roots[i + 1]].term;
      constraints.push_back(
          {g, unifier.node(TypeKind::WhyNot, unifier.fresh()),
           TypeErrorKind::NonExponentialPromotionContext,
           occs[roots[i + 1]].expr.span(),
           "server context resource " + std::to_string(i + 1) +
               " is not ?-typed"});
      add_door(id, bound[i], unifier.dual(g), sid);
    }
    occs[id].term = unifier.node(TypeKind::OfCourse, occs[roots[0]].term);
  }
};

// ---------------------------------------------------------------------------
// Sequentialization: turns the occurrence graph into a sequent derivation.
// Par-like rules are applied eagerly; otherwise a tensor or cut whose two
// sides are disconnected once it is removed splits the sequent.

class Sequentializer {
 public:
  explicit Sequentializer(Builder& b)
      : b_(b), region_(b.occs.size(), 0), seen_(b.occs.size(), 0) {
    types_.resize(b.occs.size());
  }

  Derivation derive(std::vector<int> foci, std::vector<int> cuts) {
    Derivation d;
    d.conclusion = sequent(foci, cuts);
    if (foci.empty() && cuts.empty()) {
      d.rule = "Empty";
      return d;
    }
    // Rules that never need to split the context.
    for (std::size_t i = 0; i < foci.size(); ++i) {
      const Occ& o = b_.occs[foci[i]];
      if (o.kind != OccKind::Expr) continue;
      std::vector<int> rest = without(foci, i);
      auto unary = [&](const char* rule, std::vector<int> front) {
        d.rule = rule;
        front.insert(front.end(), rest.begin(), rest.end());
        d.premises.push_back(derive(std::move(front), cuts));
        return d;
      };
      switch (o.expr.kind()) {
        case ExprKind::Conn: return unary("Par", o.kids);
        case ExprKind::Contract: return unary("Contraction", o.kids);
        case ExprKind::Store: return unary("Storage", o.kids);
        case ExprKind::Inl: return unary("Left", o.kids);
        case ExprKind::Inr: return unary("Right", o.kids);
        case ExprKind::Dispose: return unary("Disposal", {});
        default: break;
      }
    }

    std::vector<int> roots = foci;
    roots.insert(roots.end(), cuts.begin(), cuts.end());
    mark_region(roots);

    // Disconnected parts are derived independently.
    std::vector<char> in_first = component_of(roots.front(), -1);
    std::vector<int> f1, f2, c1, c2;
    split_by(foci, in_first, f1, f2);
    split_by(cuts, in_first, c1, c2);
    if (!f2.empty() || !c2.empty()) {
      d.rule = "Mix";
      d.premises.push_back(derive(f1, c1));
      d.premises.push_back(derive(f2, c2));
      return d;
    }

    if (cuts.empty()) {
      if (auto leaf = try_leaf(foci, d)) return *leaf;
    }

    for (std::size_t i = 0; i < foci.size(); ++i) {
      const Occ& o = b_.occs[foci[i]];
      if (o.kind != OccKind::Expr || o.expr.kind() != ExprKind::Iso) continue;
      if (try_split(d, "Tensor", foci[i], o.kids[0], o.kids[1], without(foci, i),
                    cuts))
        return d;
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      const Occ& o = b_.occs[cuts[i]];
      if (try_split(d, "Cut", cuts[i], o.kids[0], o.kids[1], foci,
                    without(cuts, i)))
        return d;
    }

    const Occ& first = b_.occs[roots.front()];
    SourceSpan span =
        first.kind == OccKind::Txn ? first.txn.span : first.expr.span();
    throw TypeError(TypeErrorKind::CyclicConnection,
                    "no derivation splits " + render(d.conclusion) +
                        ": its resources are linked in a cycle",
                    span);
  }

  Sequent sequent(const std::vector<int>& foci, const std::vector<int>& cuts) {
    Sequent s;
    for (int f : foci) s.foci.emplace_back(b_.occs[f].expr, type_of(f));
    for (int c : cuts) s.txns.push_back(b_.occs[c].txn);
    return s;
  }

  const LinearType& type_of(int occ) {
    if (!types_[occ]) types_[occ] = b_.unifier.resolve(b_.occs[occ].term);
    return *types_[occ];
  }

 private:
  static std::vector<int> without(const std::vector<int>& v, std::size_t i) {
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
      if (k != i) out.push_back(v[k]);
    return out;
  }

  static void split_by(const std::vector<int>& v, const std::vector<char>& in,
                       std::vector<int>& yes, std::vector<int>& no) {
    for (int x : v) (in[x] ? yes : no).push_back(x);
  }

  void mark(int n) {
    if (region_[n] == stamp_) return;
    region_[n] = stamp_;
    const Occ& o = b_.occs[n];
    for (int k : o.kids) mark(k);
    for (int dr : o.doors) mark(dr);
  }

  void mark_region(const std::vector<int>& roots) {
    ++stamp_;
    for (int r : roots) mark(r);
  }

  template <class F>
  void neighbours(int n, F&& f) {
    const Occ& o = b_.occs[n];
    for (int k : o.kids) f(k);
    for (int dr : o.doors) f(dr);
    if (o.parent >= 0) f(o.parent);
    if (o.partner >= 0) f(o.partner);
  }

  // Nodes of the current region reachable from `start` without entering
  // `removed`.
  std::vector<char> component_of(int start, int removed) {
    std::vector<char> in(b_.occs.size(), 0);
    std::vector<int> stack{start};
    in[start] = 1;
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      neighbours(n, [&](int m) {
        if (m == removed || in[m] || region_[m] != stamp_) return;
        in[m] = 1;
        stack.push_back(m);
      });
    }
    return in;
  }

  bool try_split(Derivation& d, const char* rule, int node, int left,
                 int right, const std::vector<int>& foci,
                 const std::vector<int>& cuts) {
    std::vector<char> in_left = component_of(left, node);
    if (in_left[right]) return false;
    std::vector<int> f1{left}, f2{right}, c1, c2;
    split_by(foci, in_left, f1, f2);
    split_by(cuts, in_left, c1, c2);
    d.rule = rule;
    d.premises.push_back(derive(std::move(f1), std::move(c1)));
    d.premises.push_back(derive(std::move(f2), std::move(c2)));
    return true;
  }

  std::optional<Derivation> try_leaf(const std::vector<int>& foci,
                                     Derivation d) {
    if (foci.size() == 2 && b_.occs[foci[0]].partner == foci[1] &&
        b_.occs[foci[0]].kind == OccKind::Expr &&
        b_.occs[foci[1]].kind == OccKind::Expr) {
      d.rule = "Axiom";
      return d;
    }
    if (foci.size() == 1) {
      const Occ& o = b_.occs[foci[0]];
      if (o.kind == OccKind::Expr && o.expr.kind() == ExprKind::Unit) {
        d.rule = "Unit";
        return d;
      }
      if (o.kind == OccKind::Expr && o.expr.is_demand()) {
        d.rule = "Demand";
        return d;
      }
    }
    for (std::size_t i = 0; i < foci.size(); ++i) {
      const Occ& box = b_.occs[foci[i]];
      if (box.kind != OccKind::Expr || !box.expr.is_box()) continue;
      if (foci.size() != box.doors.size() + 1) return std::nullopt;
      for (std::size_t k = 0; k < foci.size(); ++k) {
        if (k == i) continue;
        const Occ& f = b_.occs[foci[k]];
        if (f.kind != OccKind::Expr || f.expr.kind() != ExprKind::Addr ||
            f.partner < 0 || b_.occs[f.partner].parent != foci[i])
          return std::nullopt;
      }
      d.rule = box.expr.kind() == ExprKind::Choose ? "With" : "Replication";
      for (int s : box.scopes)
        d.premises.push_back(derive(b_.scopes[s].roots, b_.scopes[s].cuts));
      return d;
    }
    return std::nullopt;
  }

  Builder& b_;
  std::vector<int> region_;
  std::vector<int> seen_;
  std::vector<std::optional<LinearType>> types_;
  int stamp_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

TypedJudgment check(const Program& input,
                    const std::vector<LinearType>& declared) {
  Program p;
  p.span = input.span;
  try {
    for (const auto& e : input.interface)
      p.interface.push_back(eliminate_duals(e));
    for (const auto& t : input.pending)
      p.pending.push_back(
          {eliminate_duals(t.left), eliminate_duals(t.right), t.span});
  } catch (const DualityError& err) {
    throw TypeError(TypeErrorKind::TypeMismatch, err.what(), err.span());
  }

  if (p.interface.size() != declared.size()) {
    std::ostringstream msg;
    msg << "interface has " << p.interface.size() << " resources but "
        << declared.size() << " types were declared";
    throw TypeError(TypeErrorKind::TypeMismatch, msg.str(), p.span);
  }

  Builder b;
  int top = b.build_scope(p);
  const std::vector<int>& roots = b.scopes[top].roots;
  // Declared types are the primary source of information; solve them first
  // so mismatches are reported against them.
  std::vector<Constraint> first;
  for (std::size_t i = 0; i < declared.size(); ++i) {
    int r = roots[i];
    first.push_back({b.occs[r].term, b.unifier.from_type(declared[i]),
                     TypeErrorKind::TypeMismatch, b.occs[r].expr.span(),
                     "interface resource " + render(b.occs[r].expr) +
                         " does not have declared type " +
                         render(declared[i])});
  }
  b.constraints.insert(b.constraints.begin(), first.begin(), first.end());
  b.solve();

  Sequentializer seq(b);
  TypedJudgment j;
  j.derivation = seq.derive(roots, b.scopes[top].cuts);
  j.interface_types = declared;
  j.program = std::move(p);
  return j;
}

std::pair<LinearType, TypeContext> check_expression(
    const Expression& e, TypeContext ctx, std::optional<LinearType> expected) {
  Builder b;
  b.ctx = &ctx;
  b.scopes.emplace_back();
  int root = b.build_expr(eliminate_duals(e), 0);
  if (expected)
    b.constraints.insert(
        b.constraints.begin(),
        {b.occs[root].term, b.unifier.from_type(*expected),
         TypeErrorKind::TypeMismatch, e.span(),
         render(e) + " does not have type " + render(*expected)});
  b.link_scope(0);
  b.solve();
  LinearType t = b.unifier.resolve(b.occs[root].term);
  TypeContext residual;
  for (auto& binding : ctx)
    if (!binding.consumed) residual.push_back(binding);
  return {t, residual};
}

// ---------------------------------------------------------------------------
// Derivation replay

namespace {

using Focus = std::pair<Expression, LinearType>;

template <class T>
bool remove_one(std::vector<T>& v, const T& x) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) return false;
  v.erase(it);
  return true;
}

template <class T>
bool same_multiset(std::vector<T> a, const std::vector<T>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : b)
    if (!remove_one(a, x)) return false;
  return true;
}

bool fail(std::string* why, const Derivation& d, const std::string& msg) {
  if (why) *why = d.rule + " at " + render(d.conclusion) + ": " + msg;
  return false;
}

// Finds a focus of the given kind whose removal from the conclusion and
// replacement by `expand(focus)` gives the single premise.
template <class Expand>
bool check_unary(const Derivation& d, ExprKind kind, Expand expand,
                 std::string* why) {
  if (d.premises.size() != 1) return fail(why, d, "expects one premise");
  const Sequent& c = d.conclusion;
  const Sequent& p = d.premises[0].conclusion;
  if (!same_multiset(c.txns, p.txns))
    return fail(why, d, "transactions differ from premise");
  for (std::size_t i = 0; i < c.foci.size(); ++i) {
    if (c.foci[i].first.kind() != kind) continue;
    std::vector<Focus> expected = c.foci;
    expected.erase(expected.begin() + static_cast<long>(i));
    std::vector<Focus> added;
    if (!expand(c.foci[i], added)) continue;
    expected.insert(expected.end(), added.begin(), added.end());
    if (same_multiset(expected, p.foci)) return true;
  }
  return fail(why, d, "no principal focus matches the premise");
}

bool check_binary_split(const Derivation& d, std::string* why) {
  if (d.premises.size() != 2) return fail(why, d, "expects two premises");
  const Sequent& c = d.conclusion;
  const Sequent& p1 = d.premises[0].conclusion;
  const Sequent& p2 = d.premises[1].conclusion;
  if (p1.foci.empty() || p2.foci.empty())
    return fail(why, d, "premise without principal focus");
  const Focus& t = p1.foci.front();
  const Focus& u = p2.foci.front();
  std::vector<Focus> rest(p1.foci.begin() + 1, p1.foci.end());
  rest.insert(rest.end(), p2.foci.begin() + 1, p2.foci.end());
  std::vector<Transaction> txns = p1.txns;
  txns.insert(txns.end(), p2.txns.begin(), p2.txns.end());
  if (d.rule == "Tensor") {
    rest.emplace_back(Expression::iso(t.first, u.first),
                      LinearType::tensor(t.second, u.second));
  } else {
    if (u.second != dual(t.second))
      return fail(why, d, "cut formulas are not dual");
    txns.push_back({t.first, u.first, {}});
  }
  if (!same_multiset(rest, c.foci))
    return fail(why, d, "foci are not the union of the premises");
  if (!same_multiset(txns, c.txns))
    return fail(why, d, "transactions are not the union of the premises");
  return true;
}

bool check_box(const Derivation& d, std::string* why) {
  const Sequent& c = d.conclusion;
  if (!c.txns.empty()) return fail(why, d, "box conclusion has transactions");
  auto box_it = std::find_if(c.foci.begin(), c.foci.end(), [](const Focus& f) {
    return f.first.is_box();
  });
  if (box_it == c.foci.end()) return fail(why, d, "no box focus");
  const Expression& box = box_it->first;
  const LinearType& type = box_it->second;
  bool menu = box.kind() == ExprKind::Choose;
  if ((menu && d.rule != "With") || (!menu && d.rule != "Replication"))
    return fail(why, d, "wrong box rule");
  std::vector<Address> doors = box.bound();
  if (menu) doors.erase(doors.begin());
  std::vector<Program> bodies =
      menu ? std::vector<Program>{box.left_branch(), box.right_branch()}
           : std::vector<Program>{box.body()};
  if (d.premises.size() != bodies.size())
    return fail(why, d, "wrong number of premises");
  if (c.foci.size() != doors.size() + 1)
    return fail(why, d, "conclusion must list exactly the box doors");

  std::vector<LinearType> context;
  for (std::size_t k = 0; k < bodies.size(); ++k) {
    const Sequent& p = d.premises[k].conclusion;
    const Program& body = bodies[k];
    if (p.foci.size() != body.interface.size() ||
        p.foci.size() != doors.size() + 1)
      return fail(why, d, "premise does not match box body");
    for (std::size_t i = 0; i < p.foci.size(); ++i)
      if (!(p.foci[i].first == body.interface[i]))
        return fail(why, d, "premise foci differ from box body");
    if (p.txns != body.pending)
      return fail(why, d, "premise transactions differ from box body");
    std::vector<LinearType> g;
    for (std::size_t i = 1; i < p.foci.size(); ++i) {
      const LinearType& gi = p.foci[i].second;
      if (!menu && gi.kind() != TypeKind::WhyNot)
        return fail(why, d, "server context is not ?-typed");
      g.push_back(gi);
    }
    if (k == 0) context = g;
    else if (g != context)
      return fail(why, d, "menu branches disagree on context types");
  }
  LinearType expected =
      menu ? LinearType::with(d.premises[0].conclusion.foci[0].second,
                              d.premises[1].conclusion.foci[0].second)
           : LinearType::of_course(d.premises[0].conclusion.foci[0].second);
  if (type != expected) return fail(why, d, "box type disagrees with body");
  std::vector<Focus> rest(c.foci.begin(), c.foci.end());
  rest.erase(rest.begin() + (box_it - c.foci.begin()));
  std::vector<Focus> want;
  for (std::size_t i = 0; i < doors.size(); ++i)
    want.emplace_back(Expression::addr(doors[i]), context[i]);
  if (!same_multiset(want, rest))
    return fail(why, d, "door foci do not carry the context types");
  return true;
}

}  // namespace

bool verify_derivation(const Derivation& d, std::string* why) {
  const Sequent& c = d.conclusion;
  bool ok = true;
  if (d.rule == "Empty") {
    ok = c.foci.empty() && c.txns.empty() && d.premises.empty();
    if (!ok) return fail(why, d, "empty rule with content");
  } else if (d.rule == "Axiom") {
    if (c.foci.size() != 2 || !c.txns.empty() || !d.premises.empty())
      return fail(why, d, "axiom needs exactly two foci");
    const auto& [x, a] = c.foci[0];
    const auto& [y, b] = c.foci[1];
    if (x.kind() != ExprKind::Addr || !(x == y))
      return fail(why, d, "axiom foci must be the same address");
    if (b != dual(a)) return fail(why, d, "axiom types are not dual");
  } else if (d.rule == "Unit" || d.rule == "Demand") {
    if (c.foci.size() != 1 || !c.txns.empty() || !d.premises.empty())
      return fail(why, d, "literal axiom needs exactly one focus");
    const auto& [e, t] = c.foci[0];
    bool demand = d.rule == "Demand";
    const Expression& lit = demand && e.is_demand() ? e.operand() : e;
    if (lit.kind() != ExprKind::Unit || (demand && !e.is_demand()))
      return fail(why, d, "focus is not a currency literal");
    if (t != LinearType::atom(lit.unit_name(), demand ? Polarity::Negative
                                                      : Polarity::Positive))
      return fail(why, d, "literal has the wrong type");
  } else if (d.rule == "Par" || d.rule == "Contraction") {
    ExprKind k = d.rule == "Par" ? ExprKind::Conn : ExprKind::Contract;
    ok = check_unary(
        d, k,
        [&](const Focus& f, std::vector<Focus>& out) {
          const LinearType& t = f.second;
          if (k == ExprKind::Conn) {
            if (t.kind() != TypeKind::Par) return false;
            out = {{f.first.left(), t.left()}, {f.first.right(), t.right()}};
          } else {
            if (t.kind() != TypeKind::WhyNot) return false;
            out = {{f.first.left(), t}, {f.first.right(), t}};
          }
          return true;
        },
        why);
  } else if (d.rule == "Storage" || d.rule == "Left" || d.rule == "Right") {
    ExprKind k = d.rule == "Storage" ? ExprKind::Store
                 : d.rule == "Left"  ? ExprKind::Inl
                                     : ExprKind::Inr;
    ok = check_unary(
        d, k,
        [&](const Focus& f, std::vector<Focus>& out) {
          const LinearType& t = f.second;
          if (k == ExprKind::Store) {
            if (t.kind() != TypeKind::WhyNot) return false;
            out = {{f.first.operand(), t.body()}};
          } else {
            if (t.kind() != TypeKind::Plus) return false;
            out = {{f.first.operand(),
                    k == ExprKind::Inl ? t.left() : t.right()}};
          }
          return true;
        },
        why);
  } else if (d.rule == "Disposal") {
    ok = check_unary(
        d, ExprKind::Dispose,
        [](const Focus& f, std::vector<Focus>&) {
          return f.second.kind() == TypeKind::WhyNot;
        },
        why);
  } else if (d.rule == "Tensor" || d.rule == "Cut") {
    ok = check_binary_split(d, why);
  } else if (d.rule == "Mix") {
    if (d.premises.size() != 2) return fail(why, d, "expects two premises");
    std::vector<Focus> foci = d.premises[0].conclusion.foci;
    const auto& f2 = d.premises[1].conclusion.foci;
    foci.insert(foci.end(), f2.begin(), f2.end());
    std::vector<Transaction> txns = d.premises[0].conclusion.txns;
    const auto& t2 = d.premises[1].conclusion.txns;
    txns.insert(txns.end(), t2.begin(), t2.end());
    if (!same_multiset(foci, c.foci) || !same_multiset(txns, c.txns))
      return fail(why, d, "conclusion is not the union of the premises");
  } else if (d.rule == "With" || d.rule == "Replication") {
    ok = check_box(d, why);
  } else {
    return fail(why, d, "unknown rule");
  }
  if (!ok) return false;
  for (const auto& p : d.premises)
    if (!verify_derivation(p, why)) return false;
  return true;
}

bool verify_judgment(const TypedJudgment& j, std::string* why) {
  const Sequent& root = j.derivation.conclusion;
  if (root.foci.size() != j.program.interface.size()) {
    if (why) *why = "root sequent does not match the program interface";
    return false;
  }
  for (std::size_t i = 0; i < root.foci.size(); ++i) {
    if (!(root.foci[i].first == j.program.interface[i]) ||
        root.foci[i].second != j.interface_types[i]) {
      if (why) *why = "root focus " + std::to_string(i) + " differs";
      return false;
    }
  }
  if (!same_multiset(root.txns, j.program.pending)) {
    if (why) *why = "root transactions differ from the program";
    return false;
  }
  return verify_derivation(j.derivation, why);
}

std::string render(const Sequent& s) {
  std::ostringstream out;
  out << "|- (";
  for (std::size_t i = 0; i < s.foci.size(); ++i)
    out << (i ? ", " : "") << render(s.foci[i].first) << " : "
        << render(s.foci[i].second);
  out << "){";
  for (std::size_t i = 0; i < s.txns.size(); ++i)
    out << (i ? "; " : " ") << render(s.txns[i]);
  out << (s.txns.empty() ? "}" : " }");
  return out.str();
}

std::string render(const Derivation& d, int indent) {
  std::string out(static_cast<std::size_t>(indent), ' ');
  out += d.rule + "  " + render(d.conclusion) + "\n";
  for (const auto& p : d.premises) out += render(p, indent + 2);
  return out;
}

}  // namespace llbc
