#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sforge/error.hpp"

namespace sforge {

using NodeId = std::uint32_t;
using NodeSet = std::vector<NodeId>;  // sorted ascending, no duplicates

enum class Closure { Wedge, WedgeIs };

enum class SetShape { Chain, Fan, Comb, Mixed };

struct Classification {
  SetShape shape;
  std::optional<NodeId> fan_root;  // set for Fan
  NodeSet comb_chain;              // set for Comb, the wedge-chain (u_k)
};

struct PairAnalysis {
  NodeSet pi;          // nodes below points of both differences
  NodeSet sigma;       // maximal elements of pi
  NodeSet sigma_bar;   // meets of incomparable cross pairs outside the union
  NodeSet rho;         // tau0 iv tau1
  NodeSet rho_bar;     // is-closure intersection
  NodeSet rho0;        // rho_bar plus the root
  NodeSet infinity_set;
  std::map<NodeId, NodeId> varpi;  // defined exactly on infinity_set
};

// Consistency tags for the per-point classification of a sequence of subtrees.
struct CaseReport {
  std::vector<std::string> candidates;  // subset of {"2.1","2.2","2.3","2.4"}
  std::string tag;                      // the single candidate, or "undetermined"
  std::vector<NodeId> varpi_seq;        // varpi_i(u) for i = 0..k-2
  std::optional<NodeId> w;              // constant value, when constant
  std::optional<NodeId> z;              // last varpi, when strictly increasing
};

struct SequenceReport {
  bool well_placed = true;
  std::vector<std::string> reasons;  // why not well placed, when not
  NodeSet delta_root;                // rho
  NodeSet extended_root;             // rho_bar
  NodeSet tau_infinity;
  std::map<NodeId, CaseReport> infinity_classification;
  NodeSet a_set;
  NodeSet f_set;
  std::vector<std::string> check_violations;  // failed corollary instances
  bool checks_sampled = false;
};

struct OdotOptions {
  bool chains_hereditary = true;    // check only maximal chains of <s>
  std::size_t chain_budget = 1u << 20;
};

using SetPredicate = std::function<bool(const NodeSet&)>;

/// Finite rooted tree with ordered sibling lists. Node 0 is the root. The
/// derived orders: < (tree order), <_a (siblings under a common parent,
/// by list position) and the total extension prec are fixed at construction.
class FinTree {
public:
  // Literal form: label(child,child(...),...) e.g. "r(a(c,d),b)".
  static FinTree parse(const std::string& text);
  // parent[i] = parent id, -1 for the root; children ordered by `order` rank
  // when given, else by node id.
  static FinTree from_parents(const std::vector<long>& parents,
                              const std::vector<long>& order = {},
                              const std::vector<std::string>& labels = {});

  std::size_t size() const { return parent_.size(); }
  NodeId root() const { return 0; }
  std::optional<NodeId> parent(NodeId v) const;
  const std::vector<NodeId>& children(NodeId v) const { return children_[v]; }
  const std::string& label(NodeId v) const { return labels_[v]; }
  NodeId node(const std::string& label) const;
  std::size_t depth(NodeId v) const { return depth_[v]; }
  std::size_t pre_index(NodeId v) const { return pre_index_[v]; }

  bool le(NodeId a, NodeId b) const;  // tree order, a <= b
  bool lt(NodeId a, NodeId b) const { return a != b && le(a, b); }
  bool comparable(NodeId a, NodeId b) const { return le(a, b) || le(b, a); }
  bool prec(NodeId a, NodeId b) const { return pre_index_[a] < pre_index_[b]; }

  NodeId meet(NodeId a, NodeId b) const;
  // Immediate successor of t below u; requires t < u.
  NodeId is_toward(NodeId t, NodeId u) const;
  NodeId meet_is(NodeId a, NodeId b) const;

  // Is_t'' x, the immediate successors of t realized inside x.
  NodeSet is_image(NodeId t, const NodeSet& x) const;

  NodeSet generate(const NodeSet& s, Closure closure) const;
  bool is_wedge_closed(const NodeSet& s) const;
  bool is_chain(const NodeSet& s) const;
  bool is_antichain_a(const NodeSet& s) const;  // chain of <_a: siblings of one node

  // Maximal chains of s under the tree order.
  std::vector<NodeSet> maximal_chains(const NodeSet& s) const;

  Classification classify(const NodeSet& s) const;
  NodeSet stem(const NodeSet& tau) const;

  PairAnalysis pair_analysis(const NodeSet& tau0, const NodeSet& tau1) const;

  bool odot_member(const SetPredicate& sibling_family, const SetPredicate& chain_family,
                   const NodeSet& s, const OdotOptions& opts = {}) const;

  SequenceReport sequence_canonical(const std::vector<NodeSet>& taus,
                                    std::size_t subset_budget = 6) const;

  std::string format() const;

private:
  std::vector<long> parent_;  // -1 for root
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> pre_index_;
  std::vector<std::size_t> sib_rank_;  // position within the parent's list

  void finish_construction();
};

NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_intersect(const NodeSet& a, const NodeSet& b);
NodeSet set_minus(const NodeSet& a, const NodeSet& b);
bool set_contains(const NodeSet& a, NodeId v);
bool set_subset(const NodeSet& a, const NodeSet& b);

}  // namespace sforge
