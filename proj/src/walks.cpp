#include "sforge/walks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace sforge {

WalkSystem::WalkSystem(Ordinal theta) : theta_(std::move(theta)) {
  if (theta_.is_eps0()) fail(ErrorKind::Unsupported, "walk ground must stay below eps0");
}

void WalkSystem::check_in_ground(const Ordinal& a) const {
  if (Ordinal::compare(a, theta_) != std::strong_ordering::less)
    fail(ErrorKind::Domain, "ordinal outside the walk ground segment");
}

Ordinal WalkSystem::club_point(const Ordinal& lambda, std::uint64_t n) const {
  if (!lambda.is_limit()) fail(ErrorKind::Domain, "club points are enumerated for limits");
  if (n > 0) return fundamental_sequence(lambda, n - 1);
  // base point: decrement the trailing coefficient; a limit trailing exponent
  // descends into its own base
  std::vector<OrdTerm> terms;
  for (std::size_t i = 0; i < lambda.term_count(); ++i) terms.push_back(lambda.term(i));
  OrdTerm last = terms.back();
  terms.pop_back();
  if (last.coeff > 1) terms.push_back(OrdTerm{last.exp, last.coeff - 1});
  if (last.exp.is_successor()) {
    return Ordinal::from_terms(std::move(terms));
  }
  Ordinal sub = club_point(last.exp, 0);
  terms.push_back(OrdTerm{sub, 1});
  return Ordinal::from_terms(std::move(terms));
}

ClubSegment WalkSystem::club_below(const Ordinal& alpha, const Ordinal& beta) const {
  if (alpha.is_zero()) fail(ErrorKind::Domain, "C_0 is undefined");
  if (alpha.is_successor()) {
    Ordinal p = pred(alpha);
    if (Ordinal::compare(p, beta) == std::strong_ordering::less) return {p};
    return {};
  }
  if (Ordinal::compare(beta, alpha) != std::strong_ordering::less)
    fail(ErrorKind::Domain, "club intersection is finite only below the ordinal");
  ClubSegment out;
  for (std::uint64_t n = 0;; ++n) {
    Ordinal p = club_point(alpha, n);
    if (Ordinal::compare(p, beta) != std::strong_ordering::less) break;
    out.push_back(p);
  }
  return out;
}

Ordinal WalkSystem::min_club_at_least(const Ordinal& alpha, const Ordinal& x) const {
  if (alpha.is_successor()) return pred(alpha);  // x < alpha implies x <= pred
  for (std::uint64_t n = 0;; ++n) {
    Ordinal p = club_point(alpha, n);
    if (Ordinal::compare(p, x) != std::strong_ordering::less) return p;
  }
}

std::vector<Ordinal> WalkSystem::trace(const Ordinal& alpha, const Ordinal& beta) const {
  check_in_ground(beta);
  if (Ordinal::compare(alpha, beta) == std::strong_ordering::greater)
    fail(ErrorKind::Domain, "trace needs alpha <= beta");
  std::vector<Ordinal> out{beta};
  Ordinal cur = beta;
  while (cur != alpha) {
    cur = min_club_at_least(cur, alpha);
    out.push_back(cur);
  }
  return out;
}

std::uint32_t WalkSystem::rho2(const Ordinal& alpha, const Ordinal& beta) const {
  return std::uint32_t(trace(alpha, beta).size() - 1);
}

Rho0Value WalkSystem::rho0(const Ordinal& alpha, const Ordinal& beta) const {
  check_in_ground(beta);
  if (Ordinal::compare(alpha, beta) == std::strong_ordering::greater)
    fail(ErrorKind::Domain, "rho0 needs alpha <= beta");
  Rho0Value out;
  Ordinal cur = beta;
  while (cur != alpha) {
    out.push_back(club_below(cur, alpha));
    cur = min_club_at_least(cur, alpha);
  }
  return out;
}

namespace {

bool ord_vec_less(const std::vector<Ordinal>& a, const std::vector<Ordinal>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    auto c = Ordinal::compare(a[i], b[i]);
    if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
  }
  return a.size() < b.size();
}

bool rho0_value_less(const Rho0Value& a, const Rho0Value& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) return ord_vec_less(a[i], b[i]);
  }
  return a.size() < b.size();
}

struct NodeKey {
  Ordinal alpha;
  Rho0Value value;  // ignored at alpha == 0 (single root)
};

bool key_less(const NodeKey& x, const NodeKey& y) {
  auto c = Ordinal::compare(x.alpha, y.alpha);
  if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
  if (x.alpha.is_zero()) return false;
  if (x.value != y.value) return rho0_value_less(x.value, y.value);
  return false;
}

}  // namespace

bool segment_initial(const ClubSegment& a, const ClubSegment& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

bool rho0_lex_less(const Rho0Value& a, const Rho0Value& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] == b[i]) continue;
    return segment_initial(a[i], b[i]) && a[i].size() < b[i].size();
  }
  // a walk that continues past the other's target appends segments; the
  // proper extension counts as the smaller value
  return a.size() > b.size();
}

WalkSystem::TreeResult WalkSystem::build_tree(const std::vector<Ordinal>& points,
                                              std::size_t pair_budget) const {
  std::vector<Ordinal> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Ordinal& a, const Ordinal& b) {
    return Ordinal::compare(a, b) == std::strong_ordering::less;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const auto& p : pts) check_in_ground(p);
  std::size_t pairs = pts.size() * (pts.size() + 1) / 2;
  if (pairs > pair_budget) fail(ErrorKind::Resource, "walk pair budget exceeded");

  auto cmp = [](const NodeKey& a, const NodeKey& b) { return key_less(a, b); };
  std::map<NodeKey, NodeInfo, decltype(cmp)> nodes(cmp);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const Ordinal& alpha = pts[i];
      const Ordinal& beta = pts[j];
      Rho0Value v = rho0(alpha, beta);
      NodeKey key{alpha, alpha.is_zero() ? Rho0Value{} : v};
      auto it = nodes.find(key);
      if (it == nodes.end()) {
        nodes.emplace(std::move(key), NodeInfo{alpha, beta, std::move(v)});
      } else if (Ordinal::compare(beta, it->second.beta) == std::strong_ordering::less) {
        it->second.beta = beta;
      }
    }
  }
  // make sure the root exists even when 0 is not among the points
  {
    NodeKey rk{Ordinal::zero(), {}};
    if (!nodes.count(rk)) nodes.emplace(rk, NodeInfo{Ordinal::zero(), Ordinal::zero(), {}});
  }

  std::vector<NodeInfo> info;
  for (auto& [k, v] : nodes) info.push_back(v);
  const std::size_t n = info.size();

  // t < u iff alpha_t < alpha_u and rho0(alpha_t, beta_u) = value_t; the root
  // (alpha 0) is below everything
  auto below = [&](std::size_t t, std::size_t u) -> bool {
    if (Ordinal::compare(info[t].alpha, info[u].alpha) != std::strong_ordering::less)
      return false;
    if (info[t].alpha.is_zero()) return true;
    return rho0(info[t].alpha, info[u].beta) == info[t].value;
  };

  std::vector<long> parent(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    long best = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == u || !below(t, u)) continue;
      if (best < 0 ||
          Ordinal::compare(info[std::size_t(best)].alpha, info[t].alpha) ==
              std::strong_ordering::less)
        best = long(t);
    }
    parent[u] = best;
  }
  // node 0 must be the root: nodes are sorted with alpha==0 first already
  if (parent[0] != -1) fail(ErrorKind::Internal, "root misplaced in walk tree");

  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::ostringstream os;
    os << "t" << i;
    labels[i] = os.str();
  }
  std::vector<long> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = long(i);
  FinTree tree = FinTree::from_parents(parent, order, labels);
  return TreeResult{std::move(tree), std::move(info)};
}

WalkSystem::MonotoneReport WalkSystem::check_monotone(const std::vector<Ordinal>& points,
                                                      std::size_t pair_budget) const {
  MonotoneReport rep;
  // per-pair sanity: the rho0 length equals rho2 and entries sit inside clubs
  std::vector<Ordinal> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Ordinal& a, const Ordinal& b) {
    return Ordinal::compare(a, b) == std::strong_ordering::less;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      ++rep.walks_computed;
      if (rho0(pts[i], pts[j]).size() != rho2(pts[i], pts[j])) {
        rep.lengths_consistent = false;
        rep.violations.push_back("length(rho0) != rho2 at (" + pts[i].str() + "," +
                                 pts[j].str() + ")");
      }
    }

  TreeResult tr = build_tree(pts, pair_budget);
  rep.node_count = tr.info.size();
  const FinTree& T = tr.tree;
  for (NodeId u = 0; u < T.size(); ++u)
    for (NodeId t = 0; t < T.size(); ++t) {
      if (t == u || !T.lt(t, u)) continue;
      ++rep.pairs_checked;
      // evaluate the lower node through the upper node's representative;
      // for alpha_t >= 1 this equals the stored value by the order criterion
      Rho0Value left = rho0(tr.info[t].alpha, tr.info[u].beta);
      if (!rho0_lex_less(left, tr.info[u].value)) {
        rep.violations.push_back("rho0 not lex-increasing from node " + std::to_string(t) +
                                 " to node " + std::to_string(u));
      }
    }
  return rep;
}

std::vector<Ordinal> walk_grid(const std::vector<Ordinal>& starts, std::uint32_t width) {
  std::vector<Ordinal> out;
  for (const auto& s : starts)
    for (std::uint32_t i = 0; i < width; ++i) out.push_back(add(s, Ordinal::from_nat(i)));
  std::sort(out.begin(), out.end(), [](const Ordinal& a, const Ordinal& b) {
    return Ordinal::compare(a, b) == std::strong_ordering::less;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace sforge
