#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sforge/families.hpp"
#include "sforge/ordinal.hpp"

namespace sforge {

using Rational = boost::multiprecision::cpp_rational;

// finitely supported exact-rational vector over the naturals
using SparseVec = std::map<std::uint32_t, Rational>;

SparseVec make_vec(std::initializer_list<std::pair<std::uint32_t, Rational>> entries);
SparseVec unit_vec(std::uint32_t n);
Rational l1_norm(const SparseVec& x);
Rational sup_norm(const SparseVec& x);
SparseVec add_scaled(const SparseVec& a, const Rational& c, const SparseVec& b);

Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& q);

/// A member of the Tsirelson norming set K: a signed unit functional or half
/// the sum of successively supported members with an admissible min pattern.
/// sign 0 encodes the zero functional.
struct TsFunctional {
  int sign = 0;
  std::uint32_t point = 0;
  std::vector<TsFunctional> parts;  // nonempty exactly for combined functionals

  bool is_unit() const { return parts.empty() && sign != 0; }
  bool is_zero() const { return parts.empty() && sign == 0; }
  Rational eval(const SparseVec& x) const;
  void coefficients(std::map<std::uint32_t, Rational>& out, const Rational& scale) const;
  std::map<std::uint32_t, Rational> coefficients() const;
  std::optional<std::uint32_t> min_support() const;
  std::optional<std::uint32_t> max_support() const;
};

struct NormBudget {
  std::uint32_t max_support = 20;
  std::uint64_t work = 80'000'000;
  std::size_t norming_set_cap = 500'000;
};

struct SchreierNormResult {
  Rational value;
  PointSet witness;  // member of the family (or a singleton for the sup part)
};

// ||x||_F = max(sup norm, max over members of F inside supp x of the abs sum)
SchreierNormResult schreier_norm(const FamilyExpr& f, const SparseVec& x,
                                 const NormBudget& budget = {});

struct TsirelsonNormResult {
  Rational value;
  TsFunctional cert;  // a norming functional achieving the value
};

// implicit Tsirelson norm, computed as an exact fixed point over interval
// blocks of the support, with admissibility {min E_i} in S_alpha
TsirelsonNormResult tsirelson_norm(const Ordinal& alpha, const SparseVec& x,
                                   const NormBudget& budget = {});

// all members of K_depth supported inside {0,...,window-1}, deduplicated by
// their coefficient maps, in a deterministic order
std::vector<TsFunctional> norming_set(const Ordinal& alpha, std::uint32_t depth,
                                      std::uint32_t window, const NormBudget& budget = {});

// F_0 = cube(1), F_{n+1} = F_n x S_alpha via the omega multiplication
FamilyExpr family_chain(const Ordinal& alpha, std::uint32_t n);

struct InterpolationResult {
  Rational lo;
  Rational hi;  // hi - lo == l1(x) / 2^(trunc+1), the certified tail bound
  std::uint32_t trunc;
  std::vector<Rational> chain_norms;  // ||x||_{F_n} for n = 1..trunc
  TsirelsonNormResult base;           // the Tsirelson evaluation of the truncation
};

InterpolationResult interpolation_norm(const Ordinal& alpha, const SparseVec& x,
                                       std::uint32_t trunc, const NormBudget& budget = {});

struct DualWitness {
  std::uint32_t n;            // chain index, n >= 1
  PointSet set;               // a member of F_n
  std::vector<int> signs;     // one per point of the set
};

// value of sum_n (b_n / 2^(n+1)) * (sum_{xi in s_n} sign * u_xi^*) at x;
// b is admissible when a certificate matches it exactly or when its l1 mass
// is at most one (which already places it in the Tsirelson dual ball)
Rational dual_pairing_bound(const Ordinal& alpha, const SparseVec& x,
                            const std::vector<Rational>& b,
                            const std::vector<DualWitness>& witnesses,
                            const std::optional<TsFunctional>& b_cert = std::nullopt,
                            const NormBudget& budget = {});

enum class EngineKind { Schreier, Tsirelson, Interpolation };

struct NormEngine {
  EngineKind kind;
  FamilyExpr family;        // Schreier engine
  Ordinal alpha;            // Tsirelson / interpolation engine
  std::uint32_t trunc = 6;  // interpolation truncation
  NormBudget budget;

  // exact value for the first two engines, certified upper bound for the third
  Rational norm_upper(const SparseVec& x) const;
};

struct SpreadingBounds {
  Rational upper;  // min found ratio, a valid upper bound for the best constant
  Rational lower;  // certified uniform bound, 0 if no certificate applies
  bool lower_certified = false;
};

SpreadingBounds spreading_constant(const Ordinal& alpha, const std::vector<SparseVec>& vectors,
                                   const NormEngine& engine, std::uint32_t window,
                                   const NormBudget& budget = {});

struct PtakResult {
  std::map<std::uint32_t, Rational> coeffs;  // a convex combination
  PointSet support;                          // a member of S_beta
  Rational mass;                             // max over C-subsets of the support
};

// repeated-averages combination on a maximal S_beta set based in the window,
// with the achieved C-mass evaluated exactly
PtakResult ptak_combination(const FamilyExpr& c, const Ordinal& beta, std::uint32_t window_start,
                            std::uint32_t window_end, const NormBudget& budget = {});

// exact max of sum_{i in t} a_i over t in C restricted to s
Rational family_mass(const FamilyExpr& c, const PointSet& s,
                     const std::map<std::uint32_t, Rational>& a, const NormBudget& budget = {});

}  // namespace sforge
