#include "sforge/ordinal.hpp"

#include <sstream>

namespace sforge {

Ordinal::Ordinal() = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal Ordinal::omega() {
  Ordinal r;
  r.terms_.push_back(OrdTerm{Ordinal::one(), 1});
  return r;
}

Ordinal Ordinal::eps0() {
  Ordinal r;
  r.eps0_ = true;
  return r;
}

Ordinal Ordinal::from_nat(const BigInt& n) {
  if (n < 0) fail(ErrorKind::Domain, "ordinal from negative integer");
  Ordinal r;
  if (n > 0) r.terms_.push_back(OrdTerm{Ordinal::zero(), n});
  return r;
}

Ordinal Ordinal::from_terms(std::vector<OrdTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff < 1) fail(ErrorKind::Domain, "CNF coefficient must be >= 1");
    if (terms[i].exp.is_eps0()) fail(ErrorKind::Unsupported, "CNF exponent must be below eps0");
    if (i + 1 < terms.size() && compare(terms[i + 1].exp, terms[i].exp) != std::strong_ordering::less)
      fail(ErrorKind::Domain, "CNF exponents must strictly decrease");
  }
  Ordinal r;
  r.terms_ = std::move(terms);
  return r;
}

bool Ordinal::is_finite() const {
  if (eps0_) return false;
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_[0].exp.is_zero();
}

bool Ordinal::is_successor() const {
  if (eps0_ || terms_.empty()) return false;
  return terms_.back().exp.is_zero();
}

bool Ordinal::is_limit() const {
  if (eps0_ || terms_.empty()) return false;
  return !terms_.back().exp.is_zero();
}

BigInt Ordinal::as_nat() const {
  if (is_zero()) return 0;
  if (!is_finite()) fail(ErrorKind::Domain, "ordinal is not finite");
  return terms_[0].coeff;
}

const Ordinal& Ordinal::leading_exp() const {
  if (eps0_ || terms_.empty()) fail(ErrorKind::Domain, "leading exponent of 0 or eps0");
  return terms_[0].exp;
}

const BigInt& Ordinal::leading_coeff() const {
  if (eps0_ || terms_.empty()) fail(ErrorKind::Domain, "leading coefficient of 0 or eps0");
  return terms_[0].coeff;
}

std::strong_ordering Ordinal::compare(const Ordinal& a, const Ordinal& b) {
  if (a.eps0_ || b.eps0_) {
    if (a.eps0_ && b.eps0_) return std::strong_ordering::equal;
    return a.eps0_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = compare(a.terms_[i].exp, b.terms_[i].exp);
    if (c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff < b.terms_[i].coeff ? std::strong_ordering::less
                                                   : std::strong_ordering::greater;
  }
  if (a.terms_.size() == b.terms_.size()) return std::strong_ordering::equal;
  return a.terms_.size() < b.terms_.size() ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
}

std::size_t Ordinal::hash() const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  if (eps0_) {
    mix(0x5555);
    return h;
  }
  for (const auto& t : terms_) {
    mix(t.exp.hash());
    mix(std::hash<std::string>{}(t.coeff.str()));
  }
  return h;
}

std::string Ordinal::str() const { return format_ordinal(*this); }

namespace {

void check_cnf_operand(const Ordinal& a, const char* op) {
  if (a.is_eps0()) fail(ErrorKind::Unsupported, std::string(op) + " does not accept eps0");
}

std::vector<OrdTerm> terms_of(const Ordinal& a) {
  std::vector<OrdTerm> out;
  out.reserve(a.term_count());
  for (std::size_t i = 0; i < a.term_count(); ++i) out.push_back(a.term(i));
  return out;
}

}  // namespace

Ordinal add(const Ordinal& a, const Ordinal& b) {
  check_cnf_operand(a, "add");
  check_cnf_operand(b, "add");
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.leading_exp();
  std::vector<OrdTerm> out;
  for (std::size_t i = 0; i < a.term_count(); ++i) {
    auto c = Ordinal::compare(a.term(i).exp, lead);
    if (c == std::strong_ordering::greater) {
      out.push_back(a.term(i));
    } else {
      break;  // absorbed by b
    }
  }
  std::vector<OrdTerm> bt = terms_of(b);
  // merge head coefficient when a has a term with exponent == lead
  for (std::size_t i = 0; i < a.term_count(); ++i) {
    if (Ordinal::compare(a.term(i).exp, lead) == std::strong_ordering::equal) {
      bt[0].coeff += a.term(i).coeff;
      break;
    }
  }
  for (auto& t : bt) out.push_back(std::move(t));
  return Ordinal::from_terms(std::move(out));
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  check_cnf_operand(a, "mul");
  check_cnf_operand(b, "mul");
  if (a.is_zero() || b.is_zero()) return Ordinal::zero();
  Ordinal acc = Ordinal::zero();
  // distribute b's CNF over a: a*(x+y) = a*x + a*y
  for (std::size_t i = 0; i < b.term_count(); ++i) {
    const OrdTerm& bt = b.term(i);
    if (bt.exp.is_zero()) {
      // a * finite m: multiply leading coefficient, keep the tail
      std::vector<OrdTerm> ts = terms_of(a);
      ts[0].coeff *= bt.coeff;
      acc = add(acc, Ordinal::from_terms(std::move(ts)));
    } else {
      std::vector<OrdTerm> ts;
      ts.push_back(OrdTerm{add(a.leading_exp(), bt.exp), bt.coeff});
      acc = add(acc, Ordinal::from_terms(std::move(ts)));
    }
  }
  return acc;
}

Ordinal omega_pow(const Ordinal& a) {
  check_cnf_operand(a, "omega_pow");
  std::vector<OrdTerm> ts;
  ts.push_back(OrdTerm{a, 1});
  return Ordinal::from_terms(std::move(ts));
}

Ordinal natural_sum(const Ordinal& a, const Ordinal& b) {
  check_cnf_operand(a, "natural_sum");
  check_cnf_operand(b, "natural_sum");
  std::vector<OrdTerm> out;
  std::size_t i = 0, j = 0;
  while (i < a.term_count() || j < b.term_count()) {
    if (i == a.term_count()) {
      out.push_back(b.term(j++));
    } else if (j == b.term_count()) {
      out.push_back(a.term(i++));
    } else {
      auto c = Ordinal::compare(a.term(i).exp, b.term(j).exp);
      if (c == std::strong_ordering::greater) {
        out.push_back(a.term(i++));
      } else if (c == std::strong_ordering::less) {
        out.push_back(b.term(j++));
      } else {
        out.push_back(OrdTerm{a.term(i).exp, a.term(i).coeff + b.term(j).coeff});
        ++i;
        ++j;
      }
    }
  }
  return Ordinal::from_terms(std::move(out));
}

Ordinal sub_left(const Ordinal& a, const Ordinal& b) {
  check_cnf_operand(a, "sub_left");
  check_cnf_operand(b, "sub_left");
  if (Ordinal::compare(a, b) == std::strong_ordering::greater)
    fail(ErrorKind::Domain, "sub_left requires a <= b");
  std::size_t i = 0;
  while (i < a.term_count() && i < b.term_count()) {
    auto c = Ordinal::compare(a.term(i).exp, b.term(i).exp);
    if (c != std::strong_ordering::equal) break;
    if (a.term(i).coeff != b.term(i).coeff) {
      std::vector<OrdTerm> out;
      out.push_back(OrdTerm{b.term(i).exp, b.term(i).coeff - a.term(i).coeff});
      for (std::size_t j = i + 1; j < b.term_count(); ++j) out.push_back(b.term(j));
      return Ordinal::from_terms(std::move(out));
    }
    ++i;
  }
  std::vector<OrdTerm> out;
  for (std::size_t j = i; j < b.term_count(); ++j) out.push_back(b.term(j));
  return Ordinal::from_terms(std::move(out));
}

Ordinal pred(const Ordinal& a) {
  if (!a.is_successor()) fail(ErrorKind::Domain, "pred of a non-successor ordinal");
  std::vector<OrdTerm> ts = terms_of(a);
  if (ts.back().coeff == 1) {
    ts.pop_back();
  } else {
    ts.back().coeff -= 1;
  }
  return Ordinal::from_terms(std::move(ts));
}

bool is_indecomposable(const Ordinal& a, IndecKind kind) {
  if (a.is_zero()) fail(ErrorKind::Domain, "indecomposability undefined for 0");
  switch (kind) {
    case IndecKind::Sum:
      if (a.is_eps0()) return true;
      return a.term_count() == 1 && a.leading_coeff() == 1;
    case IndecKind::Product:
      if (a.is_eps0()) return true;
      if (a == Ordinal::one()) return true;
      return a.term_count() == 1 && a.leading_coeff() == 1 &&
             is_indecomposable(a.leading_exp(), IndecKind::Sum);
    case IndecKind::Exp:
      return a == Ordinal::one() || a == Ordinal::omega() || a.is_eps0();
  }
  return false;
}

Ordinal iota(const Ordinal& a) {
  if (a.is_eps0())
    fail(ErrorKind::Unsupported, "iota(eps0) exceeds the representable universe");
  if (a.is_zero()) return Ordinal::one();
  if (a.is_finite()) return Ordinal::omega();
  return Ordinal::eps0();
}

Ordinal fundamental_sequence(const Ordinal& lambda, std::uint64_t n) {
  if (!lambda.is_limit()) fail(ErrorKind::Domain, "fundamental sequence needs a limit ordinal");
  std::vector<OrdTerm> prefix = terms_of(lambda);
  OrdTerm last = prefix.back();
  prefix.pop_back();
  if (last.coeff > 1) {
    prefix.push_back(OrdTerm{last.exp, last.coeff - 1});
  }
  if (last.exp.is_successor()) {
    Ordinal gamma = pred(last.exp);
    if (n + 1 > 0) prefix.push_back(OrdTerm{gamma, BigInt(n) + 1});
    return Ordinal::from_terms(std::move(prefix));
  }
  // limit exponent: descend into the exponent's sequence
  Ordinal sub = fundamental_sequence(last.exp, n);
  prefix.push_back(OrdTerm{sub, 1});
  return Ordinal::from_terms(std::move(prefix));
}

namespace {

// Ordered sum of the pieces (e+1)*w^(e+1) over exponents e with a < e < hi.
// Partial sums absorb, so a limit upper end collapses to w^hi.
Ordinal sum_exp_pieces(const Ordinal& a, const Ordinal& hi) {
  Ordinal lo_bound = add(a, Ordinal::one());
  if (Ordinal::compare(hi, lo_bound) != std::strong_ordering::greater) return Ordinal::zero();
  if (hi.is_limit()) return omega_pow(hi);
  Ordinal f = pred(hi);
  Ordinal head = sum_exp_pieces(a, f);
  Ordinal piece = mul(add(f, Ordinal::one()), omega_pow(add(f, Ordinal::one())));
  return add(head, piece);
}

}  // namespace

Ordinal f_growth(const Ordinal& alpha, const Ordinal& xi) {
  check_cnf_operand(alpha, "f_growth");
  check_cnf_operand(xi, "f_growth");
  if (xi.is_zero()) return Ordinal::one();
  if (alpha.is_zero()) {
    // literal recursion: f_0(1) = 1*(max(0,0)*w) = 0, and 0 persists
    return Ordinal::zero();
  }
  const Ordinal& a = alpha.leading_exp();
  Ordinal d0 = add(a, Ordinal::one());
  Ordinal bound = omega_pow(d0);  // w^(a+1); the step factor is constant (a+1) below it
  if (Ordinal::compare(xi, bound) != std::strong_ordering::greater) {
    return omega_pow(mul(d0, xi));
  }
  const Ordinal& big_e = xi.leading_exp();
  Ordinal g = mul(d0, bound);
  g = add(g, sum_exp_pieces(a, big_e));
  Ordinal tail_type = sub_left(omega_pow(big_e), xi);
  g = add(g, mul(add(big_e, Ordinal::one()), tail_type));
  return omega_pow(g);
}

std::string format_ordinal(const Ordinal& a) {
  if (a.is_eps0()) return "eps0";
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.term_count(); ++i) {
    const OrdTerm& t = a.term(i);
    if (!first) os << "+";
    first = false;
    if (t.exp.is_zero()) {
      os << t.coeff;
      continue;
    }
    if (t.exp == Ordinal::one()) {
      os << "w";
    } else if (t.exp.is_finite() || t.exp == Ordinal::omega()) {
      os << "w^" << format_ordinal(t.exp);
    } else {
      os << "w^(" << format_ordinal(t.exp) << ")";
    }
    if (t.coeff != 1) os << "*" << t.coeff;
  }
  return os.str();
}

}  // namespace sforge
