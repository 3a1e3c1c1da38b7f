#include "sforge/families.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>

namespace sforge {

GroundSet GroundSet::tree_nodes(std::shared_ptr<const FinTree> t) {
  if (!t) fail(ErrorKind::Domain, "tree ground needs a tree");
  return GroundSet{GroundKind::TreeNodes, std::move(t)};
}

bool GroundSet::less(const Point& a, const Point& b) const {
  if (kind == GroundKind::SeqQlex && a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool GroundSet::comparable(const Point& a, const Point& b) const {
  if (kind != GroundKind::TreeNodes) return true;
  // points carry preorder indices; translate to arena ids via the preorder walk
  NodeId x = 0, y = 0;
  for (NodeId v = 0; v < tree->size(); ++v) {
    if (tree->pre_index(v) == a[0]) x = v;
    if (tree->pre_index(v) == b[0]) y = v;
  }
  return tree->comparable(x, y);
}

bool GroundSet::is_chain(const PointSet& s) const {
  if (total_order()) return true;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!comparable(s[i], s[j])) return false;
  return true;
}

Point GroundSet::window_point(std::uint32_t n) const {
  switch (kind) {
    case GroundKind::Naturals:
      return Point{n};
    case GroundKind::TreeNodes:
      if (n >= tree->size()) fail(ErrorKind::Domain, "window point beyond the tree");
      return Point{n};
    default:
      fail(ErrorKind::Composition, "this ground has no canonical window enumeration");
  }
}

PointSet make_set(const GroundSet& g, std::vector<Point> pts) {
  std::size_t arity = 0;
  switch (g.kind) {
    case GroundKind::Naturals:
    case GroundKind::TreeNodes: arity = 1; break;
    case GroundKind::PairsLex: arity = 2; break;
    case GroundKind::SeqQlex: arity = 0; break;  // any length
  }
  for (const auto& p : pts) {
    if (arity && p.size() != arity) fail(ErrorKind::Domain, "point arity mismatch for ground");
    if (g.kind == GroundKind::TreeNodes && p[0] >= g.tree->size())
      fail(ErrorKind::Domain, "point outside the tree ground");
  }
  std::sort(pts.begin(), pts.end(), [&g](const Point& a, const Point& b) { return g.less(a, b); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

PointSet nat_set(std::initializer_list<std::uint32_t> xs) {
  std::vector<Point> pts;
  for (auto x : xs) pts.push_back(Point{x});
  return make_set(GroundSet::naturals(), std::move(pts));
}

PointSet nat_set(const std::vector<std::uint32_t>& xs) {
  std::vector<Point> pts;
  for (auto x : xs) pts.push_back(Point{x});
  return make_set(GroundSet::naturals(), std::move(pts));
}

const GroundSet& FamilyExpr::ground() const { return node_->ground; }

namespace {

std::atomic<std::uint64_t> g_node_counter{1};

FamilyExpr mk(GroundSet ground, fam::Variant v) {
  auto n = std::make_shared<FamilyNode>();
  n->id = g_node_counter.fetch_add(1);
  n->ground = std::move(ground);
  n->v = std::move(v);
  return FamilyExpr(std::move(n));
}

void need_same_ground(const FamilyExpr& f, const FamilyExpr& g, const char* op) {
  if (!f.ground().same_as(g.ground()))
    fail(ErrorKind::Composition, std::string(op) + " needs both families on the same ground");
}

void need_naturals(const FamilyExpr& f, const char* op) {
  if (f.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, std::string(op) + " is defined on the naturals ground");
}

}  // namespace

FamilyExpr make_empty(GroundSet g) { return mk(std::move(g), fam::Empty{}); }

FamilyExpr make_cube(std::uint32_t k, GroundSet g) { return mk(std::move(g), fam::Cube{k}); }

FamilyExpr make_schreier_base() { return mk(GroundSet::naturals(), fam::SchreierBase{}); }

FamilyExpr make_schreier(const Ordinal& alpha) {
  if (alpha.is_eps0()) fail(ErrorKind::Unsupported, "Schreier index must be below eps0");
  return mk(GroundSet::naturals(), fam::Schreier{alpha});
}

FamilyExpr make_canonical_uniform(const Ordinal& alpha) {
  if (alpha.is_eps0()) fail(ErrorKind::Unsupported, "uniform index must be below eps0");
  // (S_{a_0} (x) cube(n_0)) (+) ... , following the normal Cantor form
  FamilyExpr acc;
  for (std::size_t i = 0; i < alpha.term_count(); ++i) {
    const OrdTerm& t = alpha.term(i);
    FamilyExpr piece = make_tensor(make_schreier(t.exp),
                                   make_cube(static_cast<std::uint32_t>(t.coeff)));
    acc = acc.valid() ? make_plus_sum(acc, piece) : piece;
  }
  if (!acc.valid()) acc = make_empty();
  return mk(GroundSet::naturals(), fam::CanonicalUniform{alpha, std::move(acc)});
}

FamilyExpr make_union(FamilyExpr f, FamilyExpr g) {
  need_same_ground(f, g, "union");
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::Union{std::move(f), std::move(g)});
}

FamilyExpr make_square_union(FamilyExpr f, FamilyExpr g) {
  need_same_ground(f, g, "square union");
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::SquareUnion{std::move(f), std::move(g)});
}

FamilyExpr make_chain_square_union(FamilyExpr f, FamilyExpr g) {
  need_same_ground(f, g, "chain square union");
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::ChainSquareUnion{std::move(f), std::move(g)});
}

FamilyExpr make_plus_sum(FamilyExpr f, FamilyExpr g) {
  need_same_ground(f, g, "plus sum");
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::PlusSum{std::move(f), std::move(g)});
}

FamilyExpr make_tensor(FamilyExpr f, FamilyExpr g) {
  need_same_ground(f, g, "tensor");
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::Tensor{std::move(f), std::move(g)});
}

FamilyExpr make_box_times(FamilyExpr f, std::uint32_t n) {
  if (n < 1) fail(ErrorKind::Domain, "box power needs n >= 1");
  FamilyExpr expanded = f;
  for (std::uint32_t i = 1; i < n; ++i) expanded = make_square_union(expanded, f);
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::BoxTimes{std::move(f), n, std::move(expanded)});
}

FamilyExpr make_shift(FamilyExpr f, std::uint32_t n) {
  need_naturals(f, "shift");
  return mk(GroundSet::naturals(), fam::Shift{std::move(f), n});
}

FamilyExpr make_restrict(FamilyExpr f, PointPredicate pred, std::string name,
                         bool declared_infinite) {
  GroundSet gr = f.ground();
  return mk(std::move(gr),
            fam::Restrict{std::move(f), std::move(pred), std::move(name), declared_infinite});
}

FamilyExpr make_section(FamilyExpr f, PointSet t) {
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::Section{std::move(f), std::move(t)});
}

FamilyExpr make_preimage(PointMap map, std::string name, GroundSet domain, FamilyExpr g) {
  return mk(std::move(domain), fam::Preimage{std::move(map), std::move(name), std::move(g)});
}

FamilyExpr make_fubini(FamilyExpr f, FamilyExpr g) {
  need_naturals(f, "fubini");
  need_naturals(g, "fubini");
  return mk(GroundSet::pairs_lex(), fam::Fubini{std::move(f), std::move(g)});
}

FamilyExpr make_power(std::vector<FamilyExpr> slices, FamilyExpr g) {
  for (const auto& s : slices)
    if (s.ground().kind != GroundKind::SeqQlex)
      fail(ErrorKind::Composition, "power slices live on the sequence ground");
  need_naturals(g, "power length family");
  return mk(GroundSet::seq_qlex(), fam::Power{std::move(slices), std::move(g)});
}

FamilyExpr mult_omega(FamilyExpr f, FamilyExpr h) {
  need_naturals(h, "multiplication pattern family");
  if (std::holds_alternative<fam::Empty>(f.node().v)) return f;  // {0} x H = {0}
  Ordinal rf;
  try {
    rf = rank(f);
  } catch (const Error&) {
    fail(ErrorKind::Precondition, "mult_omega needs a rank-calculable left factor");
  }
  try {
    (void)rank(h);
  } catch (const Error&) {
    fail(ErrorKind::Precondition, "mult_omega needs a rank-calculable pattern family");
  }
  if (!is_spreading_class(h))
    fail(ErrorKind::Precondition, "mult_omega pattern family must be hereditary and spreading");
  FamilyExpr expanded = make_plus_sum(make_tensor(f, h), f);
  GroundSet gr = f.ground();
  return mk(std::move(gr), fam::MultOmega{std::move(f), std::move(h), std::move(expanded)});
}

// ---------------------------------------------------------------------------
// membership

std::size_t FamilyEval::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<std::uint64_t>{}(k.node);
  for (const auto& p : k.set) {
    h ^= p.size() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    for (auto x : p) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool FamilyEval::member(const FamilyExpr& e, const PointSet& s) { return eval(e.node(), s); }

FamilyExpr FamilyEval::schreier_level(const Ordinal& a) {
  auto it = schreier_cache_.find(a);
  if (it != schreier_cache_.end()) return it->second;
  FamilyExpr e = make_schreier(a);
  schreier_cache_.emplace(a, e);
  return e;
}

namespace {

// successive-block decomposition search shared by tensor and Schreier levels
template <typename BlockFn, typename MinsFn>
bool block_decomposition(const PointSet& s, BlockFn&& block_ok, MinsFn&& mins_ok) {
  const std::size_t n = s.size();
  if (n == 0) return mins_ok(PointSet{});
  if (n > 48) fail(ErrorKind::Resource, "block decomposition set too large");
  const std::uint64_t combos = 1ull << (n - 1);
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    // positions with bit set (plus position 0) start a new block
    PointSet mins;
    mins.push_back(s[0]);
    for (std::size_t i = 1; i < n; ++i)
      if (mask & (1ull << (i - 1))) mins.push_back(s[i]);
    if (!mins_ok(mins)) continue;
    bool ok = true;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n && ok; ++i) {
      if (i == n || (i < n && (mask & (1ull << (i - 1))))) {
        PointSet block(s.begin() + long(start), s.begin() + long(i));
        if (!block_ok(block)) ok = false;
        start = i;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

// Longest-prefix greedy decomposition. Complete when both factors are
// hereditary and the min-pattern family is spreading: any witness
// decomposition spreads onto the greedy one.
template <typename BlockFn, typename MinsFn>
bool greedy_decomposition(const PointSet& s, BlockFn&& block_ok, MinsFn&& mins_ok) {
  PointSet mins;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = 0;
    while (pos + len + 1 <= s.size()) {
      PointSet prefix(s.begin() + long(pos), s.begin() + long(pos + len + 1));
      if (!block_ok(prefix)) break;
      ++len;
    }
    if (len == 0) return false;
    mins.push_back(s[pos]);
    pos += len;
  }
  return mins_ok(mins);
}

bool FamilyEval::eval(const FamilyNode& n, const PointSet& s) {
  if (++work_ > budget_.work) fail(ErrorKind::Resource, "membership work budget exceeded");
  Key key{n.id, s};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  bool result = false;

  if (auto* e = std::get_if<fam::Empty>(&n.v)) {
    (void)e;
    result = s.empty();
  } else if (auto* c = std::get_if<fam::Cube>(&n.v)) {
    result = s.size() <= c->k;
  } else if (std::get_if<fam::SchreierBase>(&n.v)) {
    result = s.empty() || s.size() <= s[0][0];
  } else if (auto* sch = std::get_if<fam::Schreier>(&n.v)) {
    const Ordinal& a = sch->alpha;
    if (a.is_zero()) {
      result = s.size() <= 1;
    } else if (a.is_successor()) {
      FamilyExpr lower = schreier_level(pred(a));
      auto block_ok = [&](const PointSet& b) { return eval(lower.node(), b); };
      auto mins_ok = [&](const PointSet& m) {
        return m.empty() || m.size() <= m[0][0];
      };
      result = greedy_decomposition(s, block_ok, mins_ok);
    } else {
      if (s.empty()) {
        result = true;
      } else {
        std::uint32_t min_s = s[0][0];
        std::uint32_t cap = std::min(min_s, budget_.limit_rank_max);
        result = false;
        for (std::uint32_t i = 0; i <= cap && !result; ++i) {
          FamilyExpr level = schreier_level(fundamental_sequence(a, i));
          if (eval(level.node(), s)) result = true;
        }
      }
    }
  } else if (auto* cu = std::get_if<fam::CanonicalUniform>(&n.v)) {
    result = eval(cu->expanded.node(), s);
  } else if (auto* u = std::get_if<fam::Union>(&n.v)) {
    result = eval(u->f.node(), s) || eval(u->g.node(), s);
  } else if (auto* sq = std::get_if<fam::SquareUnion>(&n.v)) {
    const std::size_t k = s.size();
    if (k > 48) fail(ErrorKind::Resource, "square union set too large");
    for (std::uint64_t mask = 0; mask < (1ull << k) && !result; ++mask) {
      PointSet a, b;
      for (std::size_t i = 0; i < k; ++i) (mask & (1ull << i) ? a : b).push_back(s[i]);
      if (eval(sq->f.node(), a) && eval(sq->g.node(), b)) result = true;
    }
  } else if (auto* csq = std::get_if<fam::ChainSquareUnion>(&n.v)) {
    if (!n.ground.is_chain(s)) {
      result = false;
    } else {
      const std::size_t k = s.size();
      if (k > 48) fail(ErrorKind::Resource, "chain square union set too large");
      for (std::uint64_t mask = 0; mask < (1ull << k) && !result; ++mask) {
        PointSet a, b;
        for (std::size_t i = 0; i < k; ++i) (mask & (1ull << i) ? a : b).push_back(s[i]);
        if (eval(csq->f.node(), a) && eval(csq->g.node(), b)) result = true;
      }
    }
  } else if (auto* ps = std::get_if<fam::PlusSum>(&n.v)) {
    for (std::size_t cut = 0; cut <= s.size() && !result; ++cut) {
      PointSet low(s.begin(), s.begin() + long(cut));
      PointSet high(s.begin() + long(cut), s.end());
      if (eval(ps->g.node(), low) && eval(ps->f.node(), high)) result = true;
    }
  } else if (auto* tn = std::get_if<fam::Tensor>(&n.v)) {
    auto block_ok = [&](const PointSet& b) { return eval(tn->f.node(), b); };
    auto mins_ok = [&](const PointSet& m) { return eval(tn->g.node(), m); };
    result = block_decomposition(s, block_ok, mins_ok);
  } else if (auto* bx = std::get_if<fam::BoxTimes>(&n.v)) {
    result = eval(bx->expanded.node(), s);
  } else if (auto* sh = std::get_if<fam::Shift>(&n.v)) {
    result = (s.empty() || s[0][0] >= sh->n) && eval(sh->f.node(), s);
  } else if (auto* re = std::get_if<fam::Restrict>(&n.v)) {
    result = true;
    for (const auto& p : s)
      if (!re->pred(p)) {
        result = false;
        break;
      }
    if (result) result = eval(re->f.node(), s);
  } else if (auto* sec = std::get_if<fam::Section>(&n.v)) {
    result = true;
    if (!sec->t.empty() && !s.empty() && !n.ground.less(sec->t.back(), s.front()))
      result = false;
    if (result) {
      PointSet joined = sec->t;
      joined.insert(joined.end(), s.begin(), s.end());
      result = eval(sec->f.node(), joined);
    }
  } else if (auto* pre = std::get_if<fam::Preimage>(&n.v)) {
    if (!n.ground.is_chain(s)) {
      result = false;
    } else {
      std::vector<Point> image;
      for (const auto& p : s) image.push_back(pre->map(p));
      PointSet img = make_set(pre->g.ground(), std::move(image));
      result = eval(pre->g.node(), img);
    }
  } else if (auto* fu = std::get_if<fam::Fubini>(&n.v)) {
    std::vector<Point> proj;
    for (const auto& p : s) proj.push_back(Point{p[0]});
    PointSet pr = make_set(fu->f.ground(), std::move(proj));
    result = eval(fu->f.node(), pr);
    if (result) {
      for (const auto& i : pr) {
        std::vector<Point> sect;
        for (const auto& p : s)
          if (p[0] == i[0]) sect.push_back(Point{p[1]});
        PointSet sc = make_set(fu->g.ground(), std::move(sect));
        if (!eval(fu->g.node(), sc)) {
          result = false;
          break;
        }
      }
    }
  } else if (auto* pw = std::get_if<fam::Power>(&n.v)) {
    result = true;
    std::vector<Point> lens;
    for (const auto& p : s) {
      if (p.empty() || p.size() > pw->slices.size()) {
        result = false;  // lengths outside the declared slice range
        break;
      }
      lens.push_back(Point{std::uint32_t(p.size())});
    }
    if (result) {
      for (std::size_t len = 1; len <= pw->slices.size() && result; ++len) {
        std::vector<Point> slice;
        for (const auto& p : s)
          if (p.size() == len) slice.push_back(p);
        PointSet sl = make_set(GroundSet::seq_qlex(), std::move(slice));
        if (!eval(pw->slices[len - 1].node(), sl)) result = false;
      }
      if (result) {
        PointSet ls = make_set(GroundSet::naturals(), std::move(lens));
        result = eval(pw->g.node(), ls);
      }
    }
  } else if (auto* mo = std::get_if<fam::MultOmega>(&n.v)) {
    result = eval(mo->expanded.node(), s);
  } else {
    fail(ErrorKind::Internal, "unhandled family variant");
  }

  memo_.emplace(std::move(key), result);
  return result;
}

bool member(const FamilyExpr& e, const PointSet& s, const EvalBudget& budget) {
  FamilyEval ev(budget);
  PointSet canon = make_set(e.ground(), std::vector<Point>(s.begin(), s.end()));
  return ev.member(e, canon);
}

// ---------------------------------------------------------------------------
// rank calculus

Ordinal rank(const FamilyExpr& e) {
  const FamilyNode& n = e.node();
  if (std::get_if<fam::Empty>(&n.v)) return Ordinal::zero();
  if (auto* c = std::get_if<fam::Cube>(&n.v)) return Ordinal::from_nat(std::uint64_t(c->k));
  if (std::get_if<fam::SchreierBase>(&n.v)) return Ordinal::omega();
  if (auto* s = std::get_if<fam::Schreier>(&n.v)) return omega_pow(s->alpha);
  if (auto* cu = std::get_if<fam::CanonicalUniform>(&n.v)) return cu->alpha;
  if (auto* u = std::get_if<fam::Union>(&n.v)) {
    Ordinal a = rank(u->f), b = rank(u->g);
    return Ordinal::compare(a, b) == std::strong_ordering::less ? b : a;
  }
  if (auto* ps = std::get_if<fam::PlusSum>(&n.v)) return add(rank(ps->f), rank(ps->g));
  if (auto* sq = std::get_if<fam::SquareUnion>(&n.v))
    return natural_sum(rank(sq->f), rank(sq->g));
  if (auto* csq = std::get_if<fam::ChainSquareUnion>(&n.v)) {
    if (!n.ground.total_order())
      fail(ErrorKind::Precondition,
           "rank of a chain square union over a partial order is only bounded above");
    return natural_sum(rank(csq->f), rank(csq->g));
  }
  if (auto* t = std::get_if<fam::Tensor>(&n.v)) return mul(rank(t->f), rank(t->g));
  if (auto* bx = std::get_if<fam::BoxTimes>(&n.v)) return rank(bx->expanded);
  if (auto* sh = std::get_if<fam::Shift>(&n.v)) return rank(sh->f);
  if (auto* mo = std::get_if<fam::MultOmega>(&n.v))
    return mul(rank(mo->f), add(rank(mo->h), Ordinal::one()));
  if (std::get_if<fam::Restrict>(&n.v))
    fail(ErrorKind::Precondition, "rank is not stable under restriction by a predicate");
  if (std::get_if<fam::Section>(&n.v))
    fail(ErrorKind::Precondition, "section ranks vary with the base point");
  if (std::get_if<fam::Preimage>(&n.v))
    fail(ErrorKind::Precondition, "preimage rank is only bounded above");
  if (std::get_if<fam::Fubini>(&n.v))
    fail(ErrorKind::Precondition, "fubini product rank is only bounded above");
  if (std::get_if<fam::Power>(&n.v))
    fail(ErrorKind::Precondition, "power rank is only bounded above");
  fail(ErrorKind::Internal, "unhandled family variant in rank");
}

namespace {

template <typename Pred>
bool both(const FamilyExpr& a, const FamilyExpr& b, Pred&& p) {
  return p(a) && p(b);
}

}  // namespace

bool is_uniform_class(const FamilyExpr& e) {
  const FamilyNode& n = e.node();
  if (std::get_if<fam::Empty>(&n.v) || std::get_if<fam::Cube>(&n.v) ||
      std::get_if<fam::SchreierBase>(&n.v) || std::get_if<fam::Schreier>(&n.v) ||
      std::get_if<fam::CanonicalUniform>(&n.v))
    return true;
  if (auto* u = std::get_if<fam::Union>(&n.v)) return both(u->f, u->g, is_uniform_class);
  if (auto* p = std::get_if<fam::PlusSum>(&n.v)) return both(p->f, p->g, is_uniform_class);
  if (auto* t = std::get_if<fam::Tensor>(&n.v)) return both(t->f, t->g, is_uniform_class);
  if (auto* s = std::get_if<fam::SquareUnion>(&n.v)) return both(s->f, s->g, is_uniform_class);
  if (auto* c = std::get_if<fam::ChainSquareUnion>(&n.v))
    return n.ground.total_order() && both(c->f, c->g, is_uniform_class);
  if (auto* b = std::get_if<fam::BoxTimes>(&n.v)) return is_uniform_class(b->f);
  if (auto* sh = std::get_if<fam::Shift>(&n.v)) return is_uniform_class(sh->f);
  if (auto* m = std::get_if<fam::MultOmega>(&n.v)) return both(m->f, m->h, is_uniform_class);
  return false;
}

bool is_spreading_class(const FamilyExpr& e) {
  const FamilyNode& n = e.node();
  if (std::get_if<fam::Empty>(&n.v) || std::get_if<fam::Cube>(&n.v) ||
      std::get_if<fam::SchreierBase>(&n.v) || std::get_if<fam::Schreier>(&n.v) ||
      std::get_if<fam::CanonicalUniform>(&n.v))
    return true;
  if (auto* u = std::get_if<fam::Union>(&n.v)) return both(u->f, u->g, is_spreading_class);
  if (auto* p = std::get_if<fam::PlusSum>(&n.v)) return both(p->f, p->g, is_spreading_class);
  if (auto* t = std::get_if<fam::Tensor>(&n.v)) return both(t->f, t->g, is_spreading_class);
  if (auto* s = std::get_if<fam::SquareUnion>(&n.v)) return both(s->f, s->g, is_spreading_class);
  if (auto* c = std::get_if<fam::ChainSquareUnion>(&n.v))
    return n.ground.total_order() && both(c->f, c->g, is_spreading_class);
  if (auto* b = std::get_if<fam::BoxTimes>(&n.v)) return is_spreading_class(b->f);
  if (auto* sh = std::get_if<fam::Shift>(&n.v)) return is_spreading_class(sh->f);
  if (auto* m = std::get_if<fam::MultOmega>(&n.v)) return both(m->f, m->h, is_spreading_class);
  return false;  // predicate restrictions can break spreading anywhere
}

std::pair<Ordinal, Ordinal> srk_bounds(const FamilyExpr& e) {
  const FamilyNode& n = e.node();
  if (auto* re = std::get_if<fam::Restrict>(&n.v)) {
    // restriction of a uniform family to a declared-infinite set keeps the rank
    if (re->declared_infinite && is_uniform_class(re->f)) {
      Ordinal r = rank(re->f);
      return {r, r};
    }
  }
  Ordinal r = rank(e);
  if (is_uniform_class(e) || is_spreading_class(e)) return {r, r};
  return {Ordinal::zero(), r};
}

// ---------------------------------------------------------------------------
// windows

namespace {

bool set_lex_less(const PointSet& a, const PointSet& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::vector<Point> window_points(const FamilyExpr& e, std::uint32_t window,
                                 const EvalBudget& budget) {
  if (!e.ground().has_window())
    fail(ErrorKind::Composition, "window operations need an enumerable ground");
  if (window > budget.window_max) fail(ErrorKind::Resource, "window exceeds the budget");
  std::uint32_t n = window;
  if (e.ground().kind == GroundKind::TreeNodes)
    n = std::min<std::uint32_t>(n, std::uint32_t(e.ground().tree->size()));
  std::vector<Point> pts;
  for (std::uint32_t i = 0; i < n; ++i) pts.push_back(e.ground().window_point(i));
  return pts;
}

}  // namespace

std::vector<PointSet> enumerate_window(const FamilyExpr& e, std::uint32_t window,
                                       const EvalBudget& budget) {
  std::vector<Point> pts = window_points(e, window, budget);
  FamilyEval ev(budget);
  std::vector<PointSet> out;
  const std::uint64_t total = 1ull << pts.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    PointSet s;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (mask & (1ull << i)) s.push_back(pts[i]);
    if (ev.member(e, s)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), set_lex_less);
  return out;
}

AuditReport audit_window(const FamilyExpr& e, std::uint32_t window, const EvalBudget& budget) {
  if (e.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, "audits run on the naturals ground");
  std::vector<PointSet> members = enumerate_window(e, window, budget);
  std::set<PointSet> index(members.begin(), members.end());
  AuditReport rep;
  for (const auto& s : members) {
    // hereditary: drop one point at a time
    for (std::size_t i = 0; i < s.size(); ++i) {
      PointSet sub = s;
      sub.erase(sub.begin() + long(i));
      if (!index.count(sub)) {
        rep.hereditary = false;
        rep.hereditary_cex.emplace_back(s, sub);
      }
    }
    // spreading: unit right moves cover all spreads inside the window
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::uint32_t next = s[i][0] + 1;
      if (next >= window) continue;
      if (i + 1 < s.size() && next == s[i + 1][0]) continue;
      PointSet moved = s;
      moved[i][0] = next;
      if (!index.count(moved)) {
        rep.spreading = false;
        rep.spreading_cex.emplace_back(s, moved);
      }
    }
  }
  return rep;
}

bool derivative_member(const FamilyExpr& e, const PointSet& s, std::uint32_t k,
                       std::uint32_t horizon, const EvalBudget& budget) {
  if (e.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, "derivatives run on the naturals ground");
  std::uint32_t check_window = std::min<std::uint32_t>(horizon, 12);
  AuditReport audit = audit_window(e, check_window, budget);
  if (!audit.hereditary || !audit.spreading)
    fail(ErrorKind::Precondition,
         "derivative semantics need a hereditary spreading family on the window");
  FamilyEval ev(budget);
  std::map<std::pair<std::uint32_t, PointSet>, bool> memo;
  std::function<bool(const PointSet&, std::uint32_t)> dm = [&](const PointSet& x,
                                                               std::uint32_t depth) -> bool {
    if (depth == 0) return ev.member(e, x);
    auto key = std::make_pair(depth, x);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool res = false;
    std::uint32_t start = x.empty() ? 0 : x.back()[0] + 1;
    for (std::uint32_t n = start; n <= horizon && !res; ++n) {
      PointSet ext = x;
      ext.push_back(Point{n});
      if (dm(ext, depth - 1)) res = true;
    }
    memo.emplace(std::move(key), res);
    return res;
  };
  PointSet canon = make_set(e.ground(), std::vector<Point>(s.begin(), s.end()));
  return dm(canon, k);
}

std::optional<std::uint32_t> inclusion_scan(const FamilyExpr& a, const FamilyExpr& b,
                                            std::uint32_t window, std::uint32_t shift_max,
                                            const EvalBudget& budget) {
  if (a.ground().kind != GroundKind::Naturals || b.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, "inclusion scan runs on the naturals ground");
  std::vector<PointSet> members = enumerate_window(a, window, budget);
  FamilyEval ev(budget);
  std::uint32_t needed = 0;
  for (const auto& s : members) {
    if (ev.member(b, s)) continue;
    if (s.empty()) return std::nullopt;  // the empty set can never be shifted away
    needed = std::max(needed, s[0][0] + 1);
  }
  if (needed > shift_max) return std::nullopt;
  return needed;
}

// ---------------------------------------------------------------------------
// printing

std::string FamilyExpr::str() const {
  const FamilyNode& n = node();
  std::ostringstream os;
  auto bin = [&](const char* op, const FamilyExpr& f, const FamilyExpr& g) {
    os << "(" << f.str() << " " << op << " " << g.str() << ")";
  };
  if (std::get_if<fam::Empty>(&n.v)) {
    os << "empty";
  } else if (auto* c = std::get_if<fam::Cube>(&n.v)) {
    os << "cube(" << c->k << ")";
  } else if (std::get_if<fam::SchreierBase>(&n.v)) {
    os << "S";
  } else if (auto* s = std::get_if<fam::Schreier>(&n.v)) {
    os << "S[" << s->alpha.str() << "]";
  } else if (auto* cu = std::get_if<fam::CanonicalUniform>(&n.v)) {
    os << "U(" << cu->alpha.str() << ")";
  } else if (auto* u = std::get_if<fam::Union>(&n.v)) {
    bin("|", u->f, u->g);
  } else if (auto* sq = std::get_if<fam::SquareUnion>(&n.v)) {
    bin("&+", sq->f, sq->g);
  } else if (auto* csq = std::get_if<fam::ChainSquareUnion>(&n.v)) {
    bin("&+chain", csq->f, csq->g);
  } else if (auto* ps = std::get_if<fam::PlusSum>(&n.v)) {
    bin("(+)", ps->f, ps->g);
  } else if (auto* t = std::get_if<fam::Tensor>(&n.v)) {
    bin("(*)", t->f, t->g);
  } else if (auto* bx = std::get_if<fam::BoxTimes>(&n.v)) {
    os << "box(" << bx->f.str() << "," << bx->n << ")";
  } else if (auto* sh = std::get_if<fam::Shift>(&n.v)) {
    os << "shift(" << sh->f.str() << "," << sh->n << ")";
  } else if (auto* re = std::get_if<fam::Restrict>(&n.v)) {
    os << "restrict(" << re->f.str() << "," << re->name << ")";
  } else if (auto* sec = std::get_if<fam::Section>(&n.v)) {
    os << "sect(" << sec->f.str() << ",{";
    for (std::size_t i = 0; i < sec->t.size(); ++i) {
      if (i) os << ",";
      os << sec->t[i][0];
    }
    os << "})";
  } else if (auto* pre = std::get_if<fam::Preimage>(&n.v)) {
    os << "preimage(" << pre->name << "," << pre->g.str() << ")";
  } else if (auto* fu = std::get_if<fam::Fubini>(&n.v)) {
    os << "fubini(" << fu->f.str() << "," << fu->g.str() << ")";
  } else if (auto* pw = std::get_if<fam::Power>(&n.v)) {
    os << "power([";
    for (std::size_t i = 0; i < pw->slices.size(); ++i) {
      if (i) os << ",";
      os << pw->slices[i].str();
    }
    os << "]," << pw->g.str() << ")";
  } else if (auto* mo = std::get_if<fam::MultOmega>(&n.v)) {
    os << "mulw(" << mo->f.str() << "," << mo->h.str() << ")";
  }
  return os.str();
}

}  // namespace sforge
