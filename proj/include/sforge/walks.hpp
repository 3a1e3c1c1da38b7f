#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sforge/ordinal.hpp"
#include "sforge/trees.hpp"

namespace sforge {

// One entry of rho0: a club segment, a finite increasing set of ordinals.
using ClubSegment = std::vector<Ordinal>;
using Rho0Value = std::vector<ClubSegment>;

/// Walks on ordinals below a ground segment theta, with the canonical
/// C-sequence: C_{a+1} = {a}, and for limit lambda the zero-based canonical
/// enumeration whose tail is the Wainer fundamental sequence.
class WalkSystem {
public:
  explicit WalkSystem(Ordinal theta = omega_pow(Ordinal::omega()));

  const Ordinal& theta() const { return theta_; }

  // n-th point of C_lambda (n >= 0), for limit lambda.
  Ordinal club_point(const Ordinal& lambda, std::uint64_t n) const;
  // C_alpha iv beta as a finite set; requires beta < alpha when alpha is limit.
  ClubSegment club_below(const Ordinal& alpha, const Ordinal& beta) const;
  // min(C_alpha \ x); requires x < alpha.
  Ordinal min_club_at_least(const Ordinal& alpha, const Ordinal& x) const;

  std::vector<Ordinal> trace(const Ordinal& alpha, const Ordinal& beta) const;
  std::uint32_t rho2(const Ordinal& alpha, const Ordinal& beta) const;
  Rho0Value rho0(const Ordinal& alpha, const Ordinal& beta) const;

  struct NodeInfo {
    Ordinal alpha;
    Ordinal beta;      // minimal representative
    Rho0Value value;   // rho0(alpha, beta)
  };

  struct TreeResult {
    FinTree tree;
    std::vector<NodeInfo> info;  // indexed by node id
  };

  // The tree of restricted rho0 functions over all pairs from the given
  // points, nodes keyed by (alpha, rho0(alpha,beta)); end-extension order via
  // the coherence of rho0.
  TreeResult build_tree(const std::vector<Ordinal>& points,
                        std::size_t pair_budget = 100000) const;

  struct MonotoneReport {
    std::size_t node_count = 0;
    std::size_t pairs_checked = 0;
    std::size_t walks_computed = 0;
    bool lengths_consistent = true;  // len(rho0) == rho2 on every walked pair
    std::vector<std::string> violations;
  };

  // Verifies that rho0 is strictly monotone from (T(rho0), <) into the
  // lexicographic power of club segments ordered by end-extension.
  MonotoneReport check_monotone(const std::vector<Ordinal>& points,
                                std::size_t pair_budget = 100000) const;

private:
  void check_in_ground(const Ordinal& a) const;
  Ordinal theta_;
};

// points {start + i : i < width} for each start; sorted, deduplicated
std::vector<Ordinal> walk_grid(const std::vector<Ordinal>& starts, std::uint32_t width);

// end-extension on club segments: a is an initial part of b
bool segment_initial(const ClubSegment& a, const ClubSegment& b);

// strict lexicographic order on rho0 values with end-extension on entries:
// at the first differing index the smaller entry is a proper initial segment
// of the larger; with no differing index the proper extension is smaller
// (the walk that continues past the other's target)
bool rho0_lex_less(const Rho0Value& a, const Rho0Value& b);

}  // namespace sforge
