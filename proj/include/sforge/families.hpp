#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sforge/ordinal.hpp"
#include "sforge/trees.hpp"

namespace sforge {

// A ground-set point, encoded as a short word of naturals:
//   naturals -> [n]; pairs -> [i,j]; finite sequences -> the sequence itself;
//   tree nodes -> [preorder index].
using Point = std::vector<std::uint32_t>;
using PointSet = std::vector<Point>;  // sorted in ground order, no duplicates

enum class GroundKind { Naturals, PairsLex, SeqQlex, TreeNodes };

class GroundSet {
public:
  static GroundSet naturals() { return GroundSet{GroundKind::Naturals, nullptr}; }
  static GroundSet pairs_lex() { return GroundSet{GroundKind::PairsLex, nullptr}; }
  static GroundSet seq_qlex() { return GroundSet{GroundKind::SeqQlex, nullptr}; }
  static GroundSet tree_nodes(std::shared_ptr<const FinTree> t);

  GroundKind kind;
  std::shared_ptr<const FinTree> tree;  // TreeNodes only

  bool less(const Point& a, const Point& b) const;
  bool comparable(const Point& a, const Point& b) const;
  bool is_chain(const PointSet& s) const;
  bool total_order() const { return kind != GroundKind::TreeNodes; }
  // n-th point of the canonical window enumeration (Naturals and TreeNodes).
  Point window_point(std::uint32_t n) const;
  bool has_window() const {
    return kind == GroundKind::Naturals || kind == GroundKind::TreeNodes;
  }
  bool same_as(const GroundSet& other) const {
    return kind == other.kind && tree.get() == other.tree.get();
  }
};

PointSet make_set(const GroundSet& g, std::vector<Point> pts);
PointSet nat_set(std::initializer_list<std::uint32_t> xs);
PointSet nat_set(const std::vector<std::uint32_t>& xs);

struct FamilyNode;

/// A symbolic compact-hereditary-family expression. Immutable; shared
/// structurally. Membership is decidable pointwise, rank follows the
/// combinator formulas.
class FamilyExpr {
public:
  FamilyExpr() = default;
  explicit FamilyExpr(std::shared_ptr<const FamilyNode> node) : node_(std::move(node)) {}
  const FamilyNode& node() const { return *node_; }
  const std::shared_ptr<const FamilyNode>& ptr() const { return node_; }
  bool valid() const { return node_ != nullptr; }
  const GroundSet& ground() const;
  std::string str() const;

private:
  std::shared_ptr<const FamilyNode> node_;
};

using PointPredicate = std::function<bool(const Point&)>;
using PointMap = std::function<Point(const Point&)>;

namespace fam {

struct Empty {};
struct Cube { std::uint32_t k; };
struct SchreierBase {};
struct Schreier { Ordinal alpha; };
struct CanonicalUniform { Ordinal alpha; FamilyExpr expanded; };
struct Union { FamilyExpr f, g; };
struct SquareUnion { FamilyExpr f, g; };
struct ChainSquareUnion { FamilyExpr f, g; };
struct PlusSum { FamilyExpr f, g; };  // low part from g, high part from f
struct Tensor { FamilyExpr f, g; };   // blocks from f, min pattern in g
struct BoxTimes { FamilyExpr f; std::uint32_t n; FamilyExpr expanded; };
struct Shift { FamilyExpr f; std::uint32_t n; };
struct Restrict { FamilyExpr f; PointPredicate pred; std::string name; bool declared_infinite; };
struct Section { FamilyExpr f; PointSet t; };
struct Preimage { PointMap map; std::string name; FamilyExpr g; };
struct Fubini { FamilyExpr f, g; };
struct Power { std::vector<FamilyExpr> slices; FamilyExpr g; };
struct MultOmega { FamilyExpr f, h; FamilyExpr expanded; };  // (env x h) (+) env

using Variant = std::variant<Empty, Cube, SchreierBase, Schreier, CanonicalUniform, Union,
                             SquareUnion, ChainSquareUnion, PlusSum, Tensor, BoxTimes, Shift,
                             Restrict, Section, Preimage, Fubini, Power, MultOmega>;

}  // namespace fam

struct FamilyNode {
  std::uint64_t id;
  GroundSet ground;
  fam::Variant v;
};

// Constructors (ground defaults to the naturals where meaningful).
FamilyExpr make_empty(GroundSet g = GroundSet::naturals());
FamilyExpr make_cube(std::uint32_t k, GroundSet g = GroundSet::naturals());
FamilyExpr make_schreier_base();
FamilyExpr make_schreier(const Ordinal& alpha);
FamilyExpr make_canonical_uniform(const Ordinal& alpha);
FamilyExpr make_union(FamilyExpr f, FamilyExpr g);
FamilyExpr make_square_union(FamilyExpr f, FamilyExpr g);
FamilyExpr make_chain_square_union(FamilyExpr f, FamilyExpr g);
FamilyExpr make_plus_sum(FamilyExpr f, FamilyExpr g);
FamilyExpr make_tensor(FamilyExpr f, FamilyExpr g);
FamilyExpr make_box_times(FamilyExpr f, std::uint32_t n);
FamilyExpr make_shift(FamilyExpr f, std::uint32_t n);
FamilyExpr make_restrict(FamilyExpr f, PointPredicate pred, std::string name,
                         bool declared_infinite = false);
FamilyExpr make_section(FamilyExpr f, PointSet t);
FamilyExpr make_preimage(PointMap map, std::string name, GroundSet domain, FamilyExpr g);
FamilyExpr make_fubini(FamilyExpr f, FamilyExpr g);
FamilyExpr make_power(std::vector<FamilyExpr> slices, FamilyExpr g);
// multiplication by a family on omega: (env(f) (x) h) (+) env(f), env = f
FamilyExpr mult_omega(FamilyExpr f, FamilyExpr h);

struct EvalBudget {
  std::uint64_t work = 80'000'000;   // membership recursion steps
  std::uint32_t window_max = 24;    // window enumeration cap
  std::uint32_t limit_rank_max = 64;  // cap on the limit-clause index scan
};

class FamilyEval {
public:
  explicit FamilyEval(EvalBudget budget = {}) : budget_(budget) {}

  bool member(const FamilyExpr& e, const PointSet& s);
  const EvalBudget& budget() const { return budget_; }

private:
  struct Key {
    std::uint64_t node;
    PointSet set;
    bool operator==(const Key& o) const { return node == o.node && set == o.set; }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  bool eval(const FamilyNode& n, const PointSet& s);
  FamilyExpr schreier_level(const Ordinal& a);

  EvalBudget budget_;
  std::uint64_t work_ = 0;
  std::unordered_map<Key, bool, KeyHash> memo_;
  std::unordered_map<Ordinal, FamilyExpr, OrdinalHash> schreier_cache_;
};

bool member(const FamilyExpr& e, const PointSet& s, const EvalBudget& budget = {});

Ordinal rank(const FamilyExpr& e);
std::pair<Ordinal, Ordinal> srk_bounds(const FamilyExpr& e);

// structural classes used by the rank/srk calculus
bool is_uniform_class(const FamilyExpr& e);
bool is_spreading_class(const FamilyExpr& e);

std::vector<PointSet> enumerate_window(const FamilyExpr& e, std::uint32_t window,
                                       const EvalBudget& budget = {});

struct AuditReport {
  bool hereditary = true;
  bool spreading = true;
  std::vector<std::pair<PointSet, PointSet>> hereditary_cex;  // (member, missing subset)
  std::vector<std::pair<PointSet, PointSet>> spreading_cex;   // (member, missing spread)
};
AuditReport audit_window(const FamilyExpr& e, std::uint32_t window,
                         const EvalBudget& budget = {});

// Iterated Cantor-Bendixson derivative membership for spreading hereditary
// families: s is in the k-th derivative iff some one-point right extension
// below the horizon lands in the (k-1)-st. Horizon-bounded.
bool derivative_member(const FamilyExpr& e, const PointSet& s, std::uint32_t k,
                       std::uint32_t horizon, const EvalBudget& budget = {});

std::optional<std::uint32_t> inclusion_scan(const FamilyExpr& a, const FamilyExpr& b,
                                            std::uint32_t window, std::uint32_t shift_max,
                                            const EvalBudget& budget = {});

}  // namespace sforge
