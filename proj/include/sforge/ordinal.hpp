#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "sforge/error.hpp"

namespace sforge {

using BigInt = boost::multiprecision::cpp_int;

struct OrdTerm;

/// An ordinal below epsilon_0 in Cantor normal form,
/// w^e0*c0 + w^e1*c1 + ... with e0 > e1 > ... and ci >= 1,
/// plus an opaque top sentinel for epsilon_0 itself.
/// Values are immutable; all operations are pure.
class Ordinal {
public:
  Ordinal();
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal zero() { return Ordinal(); }
  static Ordinal one() { return from_nat(1); }
  static Ordinal omega();
  static Ordinal eps0();
  static Ordinal from_nat(const BigInt& n);
  static Ordinal from_nat(std::uint64_t n) { return from_nat(BigInt(n)); }

  // Builds from a term list; validates strict exponent decrease and coeff >= 1.
  static Ordinal from_terms(std::vector<OrdTerm> terms);

  bool is_eps0() const { return eps0_; }
  bool is_zero() const { return !eps0_ && terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;  // nonzero with trailing exponent 0
  bool is_limit() const;      // nonzero, not eps0, trailing exponent >= 1

  BigInt as_nat() const;  // Domain error unless finite

  std::size_t term_count() const { return terms_.size(); }
  const OrdTerm& term(std::size_t i) const { return terms_[i]; }
  const Ordinal& leading_exp() const;
  const BigInt& leading_coeff() const;

  std::strong_ordering operator<=>(const Ordinal& other) const { return compare(*this, other); }
  bool operator==(const Ordinal& other) const { return compare(*this, other) == 0; }

  static std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

  std::size_t hash() const;
  std::string str() const;  // canonical text form, parse(str()) == *this

private:
  bool eps0_ = false;
  std::vector<OrdTerm> terms_;
};

struct OrdTerm {
  Ordinal exp;
  BigInt coeff;
};

enum class IndecKind { Sum, Product, Exp };

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
Ordinal omega_pow(const Ordinal& a);
Ordinal natural_sum(const Ordinal& a, const Ordinal& b);

// The unique d with a + d = b; requires a <= b < eps0.
Ordinal sub_left(const Ordinal& a, const Ordinal& b);

// Predecessor of a successor ordinal.
Ordinal pred(const Ordinal& a);

bool is_indecomposable(const Ordinal& a, IndecKind kind);

// Least exp-indecomposable ordinal strictly above a, within the
// representable universe {1, w, eps0}.
Ordinal iota(const Ordinal& a);

// Growth function: f_alpha(0)=1, f_alpha(xi+1)=f_alpha(xi)*(max(alpha,xi)*w),
// continuous at limits. Evaluated through its closed form, so limit stages
// cost no more than successor ones.
Ordinal f_growth(const Ordinal& alpha, const Ordinal& xi);

// n-th member (n >= 0) of the canonical Wainer-style fundamental sequence of a
// limit ordinal; strictly increasing in n with supremum lambda.
Ordinal fundamental_sequence(const Ordinal& lambda, std::uint64_t n);

std::string format_ordinal(const Ordinal& a);

struct OrdinalHash {
  std::size_t operator()(const Ordinal& a) const { return a.hash(); }
};

}  // namespace sforge
