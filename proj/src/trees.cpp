#include "sforge/trees.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

namespace sforge {

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_intersect(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

NodeSet set_minus(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const NodeSet& a, NodeId v) {
  return std::binary_search(a.begin(), a.end(), v);
}

bool set_subset(const NodeSet& a, const NodeSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

NodeSet sorted_unique(NodeSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

void FinTree::finish_construction() {
  const std::size_t n = parent_.size();
  if (n == 0) fail(ErrorKind::Domain, "tree must have at least a root");
  if (parent_[0] != -1) fail(ErrorKind::Domain, "node 0 must be the root");
  depth_.assign(n, 0);
  pre_index_.assign(n, 0);
  sib_rank_.assign(n, 0);
  if (labels_.size() != n) {
    labels_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      if (labels_[i].empty()) labels_[i] = "n" + std::to_string(i);
  }
  for (NodeId v = 0; v < n; ++v) {
    const auto& ch = children_[v];
    for (std::size_t r = 0; r < ch.size(); ++r) sib_rank_[ch[r]] = r;
  }
  // depth + preorder; also validates that parents form a single rooted tree
  std::vector<NodeId> stack{0};
  std::size_t seen = 0;
  std::vector<bool> visited(n, false);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (visited[v]) fail(ErrorKind::Domain, "parent array has a cycle");
    visited[v] = true;
    pre_index_[v] = seen++;
    const auto& ch = children_[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      depth_[*it] = depth_[v] + 1;
      stack.push_back(*it);
    }
  }
  if (seen != n) fail(ErrorKind::Domain, "parent array is not a connected tree");
}

FinTree FinTree::parse(const std::string& text) {
  FinTree t;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto ident = [&]() -> std::string {
    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (pos == start) fail(ErrorKind::Parse, "expected node label", long(pos));
    return text.substr(start, pos - start);
  };
  std::function<NodeId(long)> node = [&](long parent) -> NodeId {
    std::string name = ident();
    NodeId id = NodeId(t.parent_.size());
    t.parent_.push_back(parent);
    t.children_.emplace_back();
    t.labels_.push_back(name);
    if (parent >= 0) t.children_[std::size_t(parent)].push_back(id);
    skip();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      while (true) {
        node(long(id));
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          break;
        }
        fail(ErrorKind::Parse, "expected ',' or ')' in tree literal", long(pos));
      }
    }
    return id;
  };
  node(-1);
  skip();
  if (pos != text.size()) fail(ErrorKind::Parse, "trailing input after tree literal", long(pos));
  t.finish_construction();
  return t;
}

FinTree FinTree::from_parents(const std::vector<long>& parents, const std::vector<long>& order,
                              const std::vector<std::string>& labels) {
  FinTree t;
  const std::size_t n = parents.size();
  t.parent_ = parents;
  t.children_.resize(n);
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = NodeId(i);
  if (!order.empty()) {
    if (order.size() != n) fail(ErrorKind::Domain, "order array size mismatch");
    std::stable_sort(ids.begin(), ids.end(),
                     [&](NodeId a, NodeId b) { return order[a] < order[b]; });
  }
  for (NodeId v : ids) {
    long p = parents[v];
    if (p < -1 || p >= long(n)) fail(ErrorKind::Domain, "parent index out of range");
    if (p >= 0) t.children_[std::size_t(p)].push_back(v);
  }
  if (!labels.empty()) t.labels_ = labels;
  t.finish_construction();
  return t;
}

std::optional<NodeId> FinTree::parent(NodeId v) const {
  if (parent_[v] < 0) return std::nullopt;
  return NodeId(parent_[v]);
}

NodeId FinTree::node(const std::string& label) const {
  for (NodeId v = 0; v < labels_.size(); ++v)
    if (labels_[v] == label) return v;
  fail(ErrorKind::Domain, "no node labeled '" + label + "'");
}

bool FinTree::le(NodeId a, NodeId b) const {
  NodeId v = b;
  while (depth_[v] > depth_[a]) v = NodeId(parent_[v]);
  return v == a;
}

NodeId FinTree::meet(NodeId a, NodeId b) const {
  while (depth_[a] > depth_[b]) a = NodeId(parent_[a]);
  while (depth_[b] > depth_[a]) b = NodeId(parent_[b]);
  while (a != b) {
    a = NodeId(parent_[a]);
    b = NodeId(parent_[b]);
  }
  return a;
}

NodeId FinTree::is_toward(NodeId t, NodeId u) const {
  if (!lt(t, u)) fail(ErrorKind::Domain, "is_toward requires t < u");
  NodeId v = u;
  while (depth_[v] > depth_[t] + 1) v = NodeId(parent_[v]);
  return v;
}

NodeId FinTree::meet_is(NodeId a, NodeId b) const {
  if (comparable(a, b)) return le(a, b) ? a : b;
  return is_toward(meet(a, b), a);
}

NodeSet FinTree::is_image(NodeId t, const NodeSet& x) const {
  NodeSet out;
  for (NodeId u : x)
    if (lt(t, u)) out.push_back(is_toward(t, u));
  return sorted_unique(std::move(out));
}

NodeSet FinTree::generate(const NodeSet& s, Closure closure) const {
  NodeSet cur = s;
  bool grew = true;
  while (grew) {
    grew = false;
    NodeSet add;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        NodeId m = meet(cur[i], cur[j]);
        if (!set_contains(cur, m)) add.push_back(m);
        if (closure == Closure::WedgeIs && !comparable(cur[i], cur[j])) {
          NodeId w0 = meet_is(cur[i], cur[j]);
          NodeId w1 = meet_is(cur[j], cur[i]);
          if (!set_contains(cur, w0)) add.push_back(w0);
          if (!set_contains(cur, w1)) add.push_back(w1);
        }
      }
    }
    if (!add.empty()) {
      cur = set_union(cur, sorted_unique(std::move(add)));
      grew = true;
    }
  }
  return cur;
}

bool FinTree::is_wedge_closed(const NodeSet& s) const {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!set_contains(s, meet(s[i], s[j]))) return false;
  return true;
}

bool FinTree::is_chain(const NodeSet& s) const {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (!comparable(s[i], s[j])) return false;
  return true;
}

bool FinTree::is_antichain_a(const NodeSet& s) const {
  if (s.size() <= 1) return true;
  long p = parent_[s[0]];
  for (NodeId v : s)
    if (parent_[v] != p) return false;
  return true;
}

std::vector<NodeSet> FinTree::maximal_chains(const NodeSet& s) const {
  std::vector<NodeSet> out;
  for (NodeId v : s) {
    bool maximal = true;
    for (NodeId u : s)
      if (u != v && lt(v, u)) {
        maximal = false;
        break;
      }
    if (!maximal) continue;
    NodeSet chain;
    for (NodeId u : s)
      if (le(u, v)) chain.push_back(u);
    out.push_back(std::move(chain));
  }
  return out;
}

Classification FinTree::classify(const NodeSet& s_in) const {
  if (s_in.size() < 2) fail(ErrorKind::Domain, "classify needs at least two nodes");
  NodeSet s = s_in;
  std::sort(s.begin(), s.end(), [&](NodeId a, NodeId b) { return prec(a, b); });

  if (is_chain(s_in)) return Classification{SetShape::Chain, std::nullopt, {}};

  bool fan = true;
  NodeId root_meet = meet(s[0], s[1]);
  for (std::size_t i = 0; i < s.size() && fan; ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (meet(s[i], s[j]) != root_meet) {
        fan = false;
        break;
      }
  if (fan) return Classification{SetShape::Fan, root_meet, {}};

  bool antichain = true;
  for (std::size_t i = 0; i < s.size() && antichain; ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (comparable(s[i], s[j])) {
        antichain = false;
        break;
      }
  if (antichain) {
    // order the teeth by where they attach to the wedge-chain; a comb's
    // defining equations then hold exactly in this enumeration
    std::sort(s.begin(), s.end(), [&](NodeId a, NodeId b) {
      std::size_t da = 0, db = 0;
      for (NodeId x : s) {
        if (x != a) da = std::max(da, depth(meet(a, x)));
        if (x != b) db = std::max(db, depth(meet(b, x)));
      }
      if (da != db) return da < db;
      return prec(a, b);
    });
    bool comb = true;
    for (std::size_t k = 0; k < s.size() && comb; ++k)
      for (std::size_t l = k + 1; l < s.size() && comb; ++l)
        for (std::size_t m = l + 1; m < s.size(); ++m) {
          if (meet(s[k], s[l]) != meet(s[k], s[m]) || !lt(meet(s[k], s[l]), meet(s[l], s[m]))) {
            comb = false;
            break;
          }
        }
    if (comb) {
      NodeSet chain;
      for (std::size_t k = 0; k + 1 < s.size(); ++k) chain.push_back(meet(s[k], s[k + 1]));
      return Classification{SetShape::Comb, std::nullopt, sorted_unique(std::move(chain))};
    }
  }
  return Classification{SetShape::Mixed, std::nullopt, {}};
}

NodeSet FinTree::stem(const NodeSet& tau) const {
  if (tau.empty()) fail(ErrorKind::Domain, "stem of an empty subtree");
  NodeSet out;
  for (NodeId t : tau) {
    bool all = true;
    for (NodeId u : tau)
      if (!comparable(t, u)) {
        all = false;
        break;
      }
    if (all) out.push_back(t);
  }
  return out;
}

PairAnalysis FinTree::pair_analysis(const NodeSet& tau0, const NodeSet& tau1) const {
  if (!is_wedge_closed(tau0) || !is_wedge_closed(tau1))
    fail(ErrorKind::Precondition, "pair analysis requires wedge-closed subtrees");
  PairAnalysis a;
  NodeSet uni = set_union(tau0, tau1);
  NodeSet gen = generate(uni, Closure::Wedge);
  NodeSet d01 = set_minus(tau0, tau1);
  NodeSet d10 = set_minus(tau1, tau0);

  for (NodeId w : gen) {
    bool above0 = false, above1 = false;
    for (NodeId t : d01)
      if (le(w, t)) {
        above0 = true;
        break;
      }
    for (NodeId t : d10)
      if (le(w, t)) {
        above1 = true;
        break;
      }
    if (above0 && above1) a.pi.push_back(w);
  }
  for (NodeId w : a.pi) {
    bool maximal = true;
    for (NodeId v : a.pi)
      if (v != w && lt(w, v)) {
        maximal = false;
        break;
      }
    if (maximal) a.sigma.push_back(w);
  }
  for (NodeId t0 : tau0)
    for (NodeId t1 : tau1) {
      if (comparable(t0, t1)) continue;
      NodeId m = meet(t0, t1);
      if (!set_contains(uni, m)) a.sigma_bar.push_back(m);
    }
  a.sigma_bar = sorted_unique(std::move(a.sigma_bar));

  a.rho = set_intersect(tau0, tau1);
  a.rho_bar = set_intersect(generate(tau0, Closure::WedgeIs), generate(tau1, Closure::WedgeIs));
  a.rho0 = set_union(a.rho_bar, NodeSet{root()});

  NodeSet rho0_max;
  for (NodeId u : a.rho0) {
    bool maximal = true;
    for (NodeId v : a.rho0)
      if (v != u && lt(u, v)) {
        maximal = false;
        break;
      }
    if (maximal) rho0_max.push_back(u);
  }
  for (NodeId u : rho0_max) {
    NodeSet above;
    for (NodeId w : a.pi)
      if (le(u, w)) above.push_back(w);
    if (above.empty()) continue;
    a.infinity_set.push_back(u);
    NodeSet sig_above;
    for (NodeId w : a.sigma)
      if (le(u, w)) sig_above.push_back(w);
    if (sig_above.size() != 1)
      fail(ErrorKind::Internal, "uniqueness of sigma above an infinity point failed");
    a.varpi[u] = sig_above[0];
  }
  if (!set_subset(a.sigma_bar, a.sigma))
    fail(ErrorKind::Internal, "sigma_bar escaped sigma");
  return a;
}

bool FinTree::odot_member(const SetPredicate& sibling_family, const SetPredicate& chain_family,
                          const NodeSet& s, const OdotOptions& opts) const {
  NodeSet gen = generate(s, Closure::Wedge);
  for (NodeId t = 0; t < size(); ++t) {
    if (!sibling_family(is_image(t, gen))) return false;
  }
  auto chains = maximal_chains(gen);
  if (opts.chains_hereditary) {
    for (const auto& c : chains)
      if (!chain_family(c)) return false;
    return true;
  }
  // non-hereditary chain family: every subset of every maximal chain
  std::set<NodeSet> seen;
  std::size_t work = 0;
  for (const auto& c : chains) {
    if (c.size() > 30) fail(ErrorKind::Resource, "chain subset enumeration too large");
    for (std::uint64_t mask = 0; mask < (1ull << c.size()); ++mask) {
      if (++work > opts.chain_budget) fail(ErrorKind::Resource, "chain subset budget exceeded");
      NodeSet sub;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (mask & (1ull << i)) sub.push_back(c[i]);
      if (seen.insert(sub).second && !chain_family(sub)) return false;
    }
  }
  return true;
}

SequenceReport FinTree::sequence_canonical(const std::vector<NodeSet>& taus,
                                           std::size_t subset_budget) const {
  if (taus.size() < 3) fail(ErrorKind::Domain, "sequence analysis needs at least 3 subtrees");
  for (const auto& t : taus)
    if (!is_wedge_closed(t))
      fail(ErrorKind::Precondition, "sequence analysis requires wedge-closed subtrees");
  const std::size_t k = taus.size();
  SequenceReport rep;

  auto flag = [&rep](const std::string& why) {
    rep.well_placed = false;
    rep.reasons.push_back(why);
  };

  rep.delta_root = set_intersect(taus[0], taus[1]);
  for (std::size_t i = 0; i < k && rep.well_placed; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (set_intersect(taus[i], taus[j]) != rep.delta_root) {
        flag("not a Delta-system");
        break;
      }

  std::vector<NodeSet> is_closures(k);
  for (std::size_t i = 0; i < k; ++i) is_closures[i] = generate(taus[i], Closure::WedgeIs);
  rep.extended_root = set_intersect(is_closures[0], is_closures[1]);
  for (std::size_t i = 0; i < k && rep.well_placed; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (set_intersect(is_closures[i], is_closures[j]) != rep.extended_root) {
        flag("is-closures are not a Delta-system");
        break;
      }
  if (!rep.well_placed) return rep;

  std::vector<std::vector<PairAnalysis>> pa(k, std::vector<PairAnalysis>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) pa[i][j] = pair_analysis(taus[i], taus[j]);

  rep.tau_infinity = pa[0][1].infinity_set;
  for (std::size_t i = 0; i < k && rep.well_placed; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (pa[i][j].infinity_set != rep.tau_infinity) {
        flag("infinity sets differ between pairs");
        break;
      }
  if (!rep.well_placed) return rep;

  NodeSet all_union;
  for (const auto& t : taus) all_union = set_union(all_union, t);

  for (NodeId u : rep.tau_infinity) {
    CaseReport cr;
    bool stable = true;
    for (std::size_t i = 0; i + 1 < k && stable; ++i) {
      NodeId v = pa[i][i + 1].varpi.at(u);
      for (std::size_t j = i + 1; j < k; ++j)
        if (pa[i][j].varpi.at(u) != v) {
          stable = false;
          break;
        }
      if (stable) cr.varpi_seq.push_back(v);
    }
    if (!stable) {
      flag("varpi depends on the second index");
      return rep;
    }
    bool monotone = true, strict = true, constant = true;
    for (std::size_t i = 0; i + 1 < cr.varpi_seq.size(); ++i) {
      if (!le(cr.varpi_seq[i], cr.varpi_seq[i + 1])) monotone = false;
      if (!lt(cr.varpi_seq[i], cr.varpi_seq[i + 1])) strict = false;
      if (cr.varpi_seq[i] != cr.varpi_seq[i + 1]) constant = false;
    }
    if (!monotone) {
      flag("varpi sequence is not monotone");
      return rep;
    }
    if (!strict && !constant) {
      flag("varpi sequence neither constant nor strictly increasing");
      return rep;
    }
    if (strict && cr.varpi_seq.size() >= 2) {
      cr.z = cr.varpi_seq.back();
      bool none_in_union = true, each_in_own = true;
      for (std::size_t i = 0; i < cr.varpi_seq.size(); ++i) {
        if (set_contains(all_union, cr.varpi_seq[i])) none_in_union = false;
        if (!(set_contains(taus[i], cr.varpi_seq[i]) &&
              !set_contains(rep.delta_root, cr.varpi_seq[i])))
          each_in_own = false;
      }
      if (none_in_union) cr.candidates.push_back("2.1");
      if (each_in_own) cr.candidates.push_back("2.3");
    } else if (constant) {
      cr.w = cr.varpi_seq.empty() ? u : cr.varpi_seq[0];
      NodeId w = *cr.w;
      if (!set_contains(all_union, w)) cr.candidates.push_back("2.2");
      if (w == u && set_contains(rep.delta_root, u)) cr.candidates.push_back("2.4");
    }
    cr.tag = cr.candidates.size() == 1 ? cr.candidates[0] : "undetermined";
    rep.infinity_classification[u] = std::move(cr);
  }

  // a := rho0 union {w(u) : u constant}; f := ((rho0)_max \ tau_inf)
  //      union {w(u) : u constant} union {z(u) : u strict}
  NodeSet rho0 = pa[0][1].rho0;
  NodeSet rho0_max;
  for (NodeId u : rho0) {
    bool maximal = true;
    for (NodeId v : rho0)
      if (v != u && lt(u, v)) {
        maximal = false;
        break;
      }
    if (maximal) rho0_max.push_back(u);
  }
  rep.a_set = rho0;
  rep.f_set = set_minus(rho0_max, rep.tau_infinity);
  std::map<NodeId, std::vector<NodeId>> varpi_of_z;
  for (NodeId z : rep.f_set) varpi_of_z[z] = std::vector<NodeId>(k, z);
  for (const auto& [u, cr] : rep.infinity_classification) {
    if (cr.w) {
      rep.a_set = set_union(rep.a_set, NodeSet{*cr.w});
      rep.f_set = set_union(rep.f_set, NodeSet{*cr.w});
      varpi_of_z[*cr.w] = std::vector<NodeId>(k, *cr.w);
    }
    if (cr.z) {
      rep.f_set = set_union(rep.f_set, NodeSet{*cr.z});
      std::vector<NodeId> seq = cr.varpi_seq;
      while (seq.size() < k) seq.push_back(seq.back());
      varpi_of_z[*cr.z] = seq;
    }
  }

  // corollary checks over index sets I
  std::vector<std::vector<std::size_t>> index_sets;
  if (k <= subset_budget) {
    for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
      std::vector<std::size_t> I;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1ull << i)) I.push_back(i);
      index_sets.push_back(std::move(I));
    }
  } else {
    rep.checks_sampled = true;
    for (std::size_t i = 0; i < k; ++i) index_sets.push_back({i});
    for (std::size_t i = 0; i + 1 < k; ++i) index_sets.push_back({i, i + 1});
    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    index_sets.push_back(all);
  }

  for (const auto& I : index_sets) {
    NodeSet uni;
    for (std::size_t i : I) uni = set_union(uni, taus[i]);
    NodeSet tau_I = generate(uni, Closure::Wedge);

    for (NodeId t : tau_I) {
      bool ok = false;
      for (const auto& [z, vz] : varpi_of_z) {
        NodeId m = meet(t, z);
        for (std::size_t i : I) {
          std::size_t count = 0;
          for (NodeId v : tau_I)
            if (le(m, v) && le(v, t) && !set_contains(taus[i], v)) ++count;
          if (count <= 1) {
            ok = true;
            break;
          }
        }
        if (ok) break;
      }
      if (!ok)
        rep.check_violations.push_back("interval control fails at node " + labels_[t]);
    }

    for (const auto& [z, vz] : varpi_of_z) {
      NodeSet allowed;
      for (std::size_t i : I) allowed.push_back(vz[i]);
      allowed = sorted_unique(std::move(allowed));
      for (NodeId v : tau_I) {
        if (!le(v, z)) continue;
        if (set_contains(uni, v)) continue;
        if (!set_contains(allowed, v))
          rep.check_violations.push_back("below-z control fails at node " + labels_[v]);
      }
    }

    for (NodeId t : tau_I) {
      if (set_contains(rep.a_set, t)) continue;
      NodeSet img = is_image(t, tau_I);
      bool ok = false;
      for (std::size_t i : I) {
        if (set_minus(img, is_image(t, taus[i])).size() <= 1) {
          ok = true;
          break;
        }
      }
      if (!ok)
        rep.check_violations.push_back("successor control fails at node " + labels_[t]);
    }
  }
  return rep;
}

std::string FinTree::format() const {
  std::function<void(NodeId, std::ostringstream&)> emit = [&](NodeId v, std::ostringstream& os) {
    os << labels_[v];
    if (!children_[v].empty()) {
      os << "(";
      bool first = true;
      for (NodeId c : children_[v]) {
        if (!first) os << ",";
        first = false;
        emit(c, os);
      }
      os << ")";
    }
  };
  std::ostringstream os;
  emit(0, os);
  return os.str();
}

}  // namespace sforge
