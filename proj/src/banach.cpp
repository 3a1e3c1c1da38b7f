#include "sforge/banach.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sforge {

SparseVec make_vec(std::initializer_list<std::pair<std::uint32_t, Rational>> entries) {
  SparseVec v;
  for (const auto& [k, q] : entries)
    if (q != 0) v[k] = q;
  return v;
}

SparseVec unit_vec(std::uint32_t n) { return SparseVec{{n, Rational(1)}}; }

Rational l1_norm(const SparseVec& x) {
  Rational s = 0;
  for (const auto& [k, q] : x) s += abs(q);
  return s;
}

Rational sup_norm(const SparseVec& x) {
  Rational s = 0;
  for (const auto& [k, q] : x) s = std::max(s, Rational(abs(q)));
  return s;
}

SparseVec add_scaled(const SparseVec& a, const Rational& c, const SparseVec& b) {
  SparseVec out = a;
  for (const auto& [k, q] : b) {
    Rational v = out.count(k) ? Rational(out[k] + c * q) : Rational(c * q);
    if (v == 0)
      out.erase(k);
    else
      out[k] = v;
  }
  return out;
}

Rational parse_rational(const std::string& text) {
  std::size_t slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) fail(ErrorKind::Parse, "zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    fail(ErrorKind::Parse, "malformed rational '" + text + "'");
  }
}

std::string format_rational(const Rational& q) {
  std::ostringstream os;
  if (denominator(q) == 1) {
    os << numerator(q);
  } else {
    os << numerator(q) << "/" << denominator(q);
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// functionals

Rational TsFunctional::eval(const SparseVec& x) const {
  if (parts.empty()) {
    if (sign == 0) return 0;
    auto it = x.find(point);
    return it == x.end() ? Rational(0) : Rational(sign) * it->second;
  }
  Rational s = 0;
  for (const auto& p : parts) s += p.eval(x);
  return s / 2;
}

void TsFunctional::coefficients(std::map<std::uint32_t, Rational>& out,
                                const Rational& scale) const {
  if (parts.empty()) {
    if (sign != 0) out[point] += scale * sign;
    return;
  }
  for (const auto& p : parts) p.coefficients(out, scale / 2);
}

std::map<std::uint32_t, Rational> TsFunctional::coefficients() const {
  std::map<std::uint32_t, Rational> out;
  coefficients(out, Rational(1));
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

std::optional<std::uint32_t> TsFunctional::min_support() const {
  if (parts.empty()) {
    if (sign == 0) return std::nullopt;
    return point;
  }
  for (const auto& p : parts)
    if (auto m = p.min_support()) return m;
  return std::nullopt;
}

std::optional<std::uint32_t> TsFunctional::max_support() const {
  if (parts.empty()) {
    if (sign == 0) return std::nullopt;
    return point;
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it)
    if (auto m = it->max_support()) return m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Schreier space norm

SchreierNormResult schreier_norm(const FamilyExpr& f, const SparseVec& x,
                                 const NormBudget& budget) {
  if (f.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, "schreier norm vectors live on the naturals");
  if (x.size() > budget.max_support) fail(ErrorKind::Resource, "support exceeds the budget");
  std::vector<std::uint32_t> supp;
  for (const auto& [k, q] : x) supp.push_back(k);

  SchreierNormResult best;
  best.value = 0;
  for (const auto& [k, q] : x) {
    if (abs(q) > best.value) {
      best.value = abs(q);
      best.witness = nat_set({k});
    }
  }

  FamilyEval ev(EvalBudget{budget.work, 32, 64});
  // depth-first over subsets of the support, pruned by hereditariness
  std::vector<std::uint32_t> cur;
  std::function<void(std::size_t, const Rational&)> dfs = [&](std::size_t from,
                                                              const Rational& sum) {
    if (sum > best.value) {
      best.value = sum;
      best.witness = nat_set(cur);
    }
    for (std::size_t i = from; i < supp.size(); ++i) {
      cur.push_back(supp[i]);
      if (ev.member(f, nat_set(cur))) dfs(i + 1, sum + abs(x.at(supp[i])));
      cur.pop_back();
    }
  };
  if (ev.member(f, {})) dfs(0, Rational(0));
  return best;
}

// ---------------------------------------------------------------------------
// Tsirelson norm

namespace {

struct SegmentPlan {
  Rational value;
  bool from_unit = true;
  std::uint32_t unit_index = 0;                          // index into the support
  std::vector<std::pair<std::uint32_t, std::uint32_t>> blocks;  // index ranges
};

struct TsirelsonSolver {
  const std::vector<std::uint32_t>& supp;
  const std::vector<Rational>& vals;  // aligned with supp
  FamilyEval& ev;
  const FamilyExpr& admissible;       // S_alpha
  std::uint64_t work = 0;
  std::uint64_t work_cap;
  std::map<std::pair<std::uint32_t, std::uint32_t>, SegmentPlan> memo;

  const SegmentPlan& solve(std::uint32_t lo, std::uint32_t hi) {
    auto key = std::make_pair(lo, hi);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    SegmentPlan plan;
    plan.value = 0;
    for (std::uint32_t i = lo; i < hi; ++i) {
      if (abs(vals[i]) > plan.value) {
        plan.value = abs(vals[i]);
        plan.unit_index = i;
      }
    }
    // search admissible block systems; mins prefixes stay admissible because
    // S_alpha is hereditary, which prunes the branching
    std::vector<std::pair<std::uint32_t, std::uint32_t>> blocks;
    std::vector<std::uint32_t> mins;
    search(lo, hi, lo, Rational(0), blocks, mins, plan);
    auto [it, unused] = memo.emplace(key, std::move(plan));
    return it->second;
  }

  void search(std::uint32_t lo, std::uint32_t hi, std::uint32_t from, const Rational& sum,
              std::vector<std::pair<std::uint32_t, std::uint32_t>>& blocks,
              std::vector<std::uint32_t>& mins, SegmentPlan& plan) {
    if (++work > work_cap) fail(ErrorKind::Resource, "tsirelson work budget exceeded");
    if (!blocks.empty()) {
      bool whole = blocks.size() == 1 && blocks[0].first == lo && blocks[0].second == hi;
      if (!whole) {
        Rational v = sum / 2;
        if (v > plan.value) {
          plan.value = v;
          plan.from_unit = false;
          plan.blocks = blocks;
        }
      }
    }
    for (std::uint32_t a = from; a < hi; ++a) {
      mins.push_back(supp[a]);
      if (!ev.member(admissible, nat_set(mins))) {
        mins.pop_back();
        continue;  // a later, more spread start can still be admissible
      }
      for (std::uint32_t b = a + 1; b <= hi; ++b) {
        if (a == lo && b == hi) continue;  // the self-referential whole block
        blocks.emplace_back(a, b);
        search(lo, hi, b, sum + solve_value(a, b), blocks, mins, plan);
        blocks.pop_back();
      }
      mins.pop_back();
    }
  }

  Rational solve_value(std::uint32_t a, std::uint32_t b) { return solve(a, b).value; }

  TsFunctional build(std::uint32_t lo, std::uint32_t hi) {
    const SegmentPlan& plan = solve(lo, hi);
    if (plan.from_unit) {
      if (lo == hi) return TsFunctional{};  // zero functional on an empty segment
      TsFunctional f;
      f.sign = vals[plan.unit_index] < 0 ? -1 : 1;
      f.point = supp[plan.unit_index];
      return f;
    }
    TsFunctional f;
    f.sign = 1;
    for (const auto& [a, b] : plan.blocks) f.parts.push_back(build(a, b));
    return f;
  }
};

}  // namespace

TsirelsonNormResult tsirelson_norm(const Ordinal& alpha, const SparseVec& x,
                                   const NormBudget& budget) {
  if (x.size() > budget.max_support) fail(ErrorKind::Resource, "support exceeds the budget");
  TsirelsonNormResult out;
  if (x.empty()) {
    out.value = 0;
    out.cert = TsFunctional{};
    return out;
  }
  std::vector<std::uint32_t> supp;
  std::vector<Rational> vals;
  for (const auto& [k, q] : x) {
    supp.push_back(k);
    vals.push_back(q);
  }
  FamilyEval ev(EvalBudget{budget.work, 32, 64});
  FamilyExpr adm = make_schreier(alpha);
  TsirelsonSolver solver{supp, vals, ev, adm, 0, budget.work, {}};
  out.value = solver.solve(0, std::uint32_t(supp.size())).value;
  out.cert = solver.build(0, std::uint32_t(supp.size()));
  return out;
}

// ---------------------------------------------------------------------------
// norming set

namespace {

void combine_layer(const std::vector<TsFunctional>& pool, std::vector<TsFunctional>& out,
                   std::set<std::map<std::uint32_t, Rational>>& seen, FamilyEval& ev,
                   const FamilyExpr& adm, std::size_t cap) {
  // pool entries sorted by min support; choose successive sequences with an
  // admissible min pattern
  std::vector<const TsFunctional*> chosen;
  std::vector<std::uint32_t> mins;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!chosen.empty()) {
      TsFunctional f;
      f.sign = 1;
      for (auto* p : chosen) f.parts.push_back(*p);
      auto coeffs = f.coefficients();
      if (seen.insert(coeffs).second) {
        out.push_back(std::move(f));
        if (out.size() > cap) fail(ErrorKind::Resource, "norming set budget exceeded");
      }
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      const TsFunctional& cand = pool[i];
      auto mn = cand.min_support();
      if (!mn) continue;
      if (!chosen.empty()) {
        auto mx = chosen.back()->max_support();
        if (!mx || *mn <= *mx) continue;
      }
      mins.push_back(*mn);
      if (!ev.member(adm, nat_set(mins))) {
        mins.pop_back();
        continue;
      }
      chosen.push_back(&cand);
      rec(i + 1);
      chosen.pop_back();
      mins.pop_back();
    }
  };
  rec(0);
}

}  // namespace

std::vector<TsFunctional> norming_set(const Ordinal& alpha, std::uint32_t depth,
                                      std::uint32_t window, const NormBudget& budget) {
  std::vector<TsFunctional> k;
  std::set<std::map<std::uint32_t, Rational>> seen;
  for (std::uint32_t n = 0; n < window; ++n) {
    for (int sign : {1, -1}) {
      TsFunctional f;
      f.sign = sign;
      f.point = n;
      seen.insert(f.coefficients());
      k.push_back(std::move(f));
    }
  }
  FamilyEval ev(EvalBudget{budget.work, 32, 64});
  FamilyExpr adm = make_schreier(alpha);
  for (std::uint32_t d = 0; d < depth; ++d) {
    std::vector<TsFunctional> pool = k;
    std::stable_sort(pool.begin(), pool.end(), [](const TsFunctional& a, const TsFunctional& b) {
      auto ma = a.min_support(), mb = b.min_support();
      return ma && mb ? *ma < *mb : bool(mb);
    });
    std::vector<TsFunctional> fresh;
    combine_layer(pool, fresh, seen, ev, adm, budget.norming_set_cap);
    for (auto& f : fresh) k.push_back(std::move(f));
    if (k.size() > budget.norming_set_cap)
      fail(ErrorKind::Resource, "norming set budget exceeded");
  }
  std::stable_sort(k.begin(), k.end(), [](const TsFunctional& a, const TsFunctional& b) {
    return a.coefficients() < b.coefficients();
  });
  return k;
}

// ---------------------------------------------------------------------------
// interpolation

FamilyExpr family_chain(const Ordinal& alpha, std::uint32_t n) {
  FamilyExpr f = make_cube(1);
  FamilyExpr s = make_schreier(alpha);
  for (std::uint32_t i = 0; i < n; ++i) f = mult_omega(f, s);
  return f;
}

namespace {

Rational dyadic(std::uint32_t n) {
  BigInt d = 1;
  d <<= n;
  return Rational(1, d);
}

}  // namespace

InterpolationResult interpolation_norm(const Ordinal& alpha, const SparseVec& x,
                                       std::uint32_t trunc, const NormBudget& budget) {
  if (trunc < 1) fail(ErrorKind::Domain, "interpolation truncation must be >= 1");
  InterpolationResult out;
  out.trunc = trunc;
  SparseVec coeffs;
  for (std::uint32_t n = 1; n <= trunc; ++n) {
    Rational norm_n = schreier_norm(family_chain(alpha, n), x, budget).value;
    out.chain_norms.push_back(norm_n);
    Rational c = norm_n * dyadic(n + 1);
    if (c != 0) coeffs[n] = c;
  }
  out.base = tsirelson_norm(alpha, coeffs, budget);
  out.lo = out.base.value;
  out.hi = out.lo + l1_norm(x) * dyadic(trunc + 1);
  return out;
}

Rational dual_pairing_bound(const Ordinal& alpha, const SparseVec& x,
                            const std::vector<Rational>& b,
                            const std::vector<DualWitness>& witnesses,
                            const std::optional<TsFunctional>& b_cert,
                            const NormBudget& budget) {
  // admissibility of b as a Tsirelson dual-ball element
  bool admissible = false;
  if (b_cert) {
    std::map<std::uint32_t, Rational> expect;
    for (std::size_t n = 0; n < b.size(); ++n)
      if (b[n] != 0) expect[std::uint32_t(n + 1)] = b[n];
    admissible = b_cert->coefficients() == expect;
  } else {
    Rational mass = 0;
    for (const auto& q : b) mass += abs(q);
    admissible = mass <= 1;
  }
  if (!admissible)
    fail(ErrorKind::Precondition, "b is not certified inside the Tsirelson dual ball");

  FamilyEval ev(EvalBudget{budget.work, 32, 64});
  Rational total = 0;
  for (const auto& w : witnesses) {
    if (w.n < 1 || w.n > b.size())
      fail(ErrorKind::Precondition, "witness index outside the coefficient list");
    if (w.signs.size() != w.set.size())
      fail(ErrorKind::Precondition, "witness sign count mismatch");
    FamilyExpr fn = family_chain(alpha, w.n);
    if (!ev.member(fn, w.set))
      fail(ErrorKind::Precondition, "witness set is not a member of its chain family");
    Rational inner = 0;
    for (std::size_t i = 0; i < w.set.size(); ++i) {
      auto it = x.find(w.set[i][0]);
      if (it != x.end()) inner += Rational(w.signs[i]) * it->second;
    }
    total += b[w.n - 1] * dyadic(w.n + 1) * inner;
  }
  return total;
}

// ---------------------------------------------------------------------------
// spreading models

Rational NormEngine::norm_upper(const SparseVec& x) const {
  switch (kind) {
    case EngineKind::Schreier: return schreier_norm(family, x, budget).value;
    case EngineKind::Tsirelson: return tsirelson_norm(alpha, x, budget).value;
    case EngineKind::Interpolation: return interpolation_norm(alpha, x, trunc, budget).hi;
  }
  fail(ErrorKind::Internal, "unknown engine");
}

namespace {

std::vector<PointSet> maximal_members(const FamilyExpr& f, std::uint32_t window,
                                      const EvalBudget& budget) {
  auto members = enumerate_window(f, window, budget);
  std::set<PointSet> all(members.begin(), members.end());
  std::vector<PointSet> out;
  for (const auto& s : members) {
    bool maximal = true;
    for (std::uint32_t p = 0; p < window && maximal; ++p) {
      Point pt{p};
      if (std::binary_search(s.begin(), s.end(), pt)) continue;
      PointSet ext = s;
      ext.insert(std::lower_bound(ext.begin(), ext.end(), pt), pt);
      if (all.count(ext)) maximal = false;
    }
    if (maximal && !s.empty()) out.push_back(s);
  }
  return out;
}

}  // namespace

SpreadingBounds spreading_constant(const Ordinal& alpha, const std::vector<SparseVec>& vectors,
                                   const NormEngine& engine, std::uint32_t window,
                                   const NormBudget& budget) {
  SpreadingBounds out;
  out.upper = 0;
  out.lower = 0;
  if (vectors.empty()) fail(ErrorKind::Domain, "spreading analysis needs vectors");
  std::uint32_t idx_cap = std::uint32_t(vectors.size());
  std::uint32_t w = std::min(window, idx_cap);
  EvalBudget eb{budget.work, 32, 64};
  FamilyExpr salpha = make_schreier(alpha);
  auto maximal = maximal_members(salpha, w, eb);
  if (maximal.empty()) fail(ErrorKind::Domain, "no admissible index sets inside the window");
  // the finite descent schedule visits a fixed slice of the maximal sets; the
  // certificate scan below still covers all of them
  std::vector<PointSet> schedule = maximal;
  if (schedule.size() > 8) schedule.resize(8);

  bool first = true;
  for (const auto& s : schedule) {
    // deterministic coordinate descent from the uniform point of the simplex
    std::map<std::uint32_t, Rational> a;
    for (const auto& p : s) a[p[0]] = Rational(1, std::uint64_t(s.size()));
    auto combo_norm = [&](const std::map<std::uint32_t, Rational>& coef) {
      SparseVec acc;
      for (const auto& [i, c] : coef) acc = add_scaled(acc, c, vectors[i]);
      return engine.norm_upper(acc);
    };
    Rational cur = combo_norm(a);
    for (int round = 1; round <= 3; ++round) {
      Rational step = Rational(1, std::uint64_t(s.size()) << round);
      for (const auto& pi : s)
        for (const auto& pj : s) {
          if (pi == pj) continue;
          auto trial = a;
          if (trial[pi[0]] < step) continue;
          trial[pi[0]] -= step;
          trial[pj[0]] += step;
          Rational v = combo_norm(trial);
          if (v < cur) {
            cur = v;
            a = trial;
          }
        }
    }
    if (first || cur < out.upper) out.upper = cur;
    first = false;
  }

  // certified lower bound for successively supported vectors through peaks
  bool successive = true;
  for (std::size_t i = 0; i + 1 < vectors.size() && successive; ++i) {
    if (vectors[i].empty() || vectors[i + 1].empty() ||
        vectors[i].rbegin()->first >= vectors[i + 1].begin()->first)
      successive = false;
  }
  if (!vectors.empty() && vectors.back().empty()) successive = false;
  if (successive) {
    std::vector<std::uint32_t> peaks;
    Rational peak_min;
    bool first_peak = true;
    for (const auto& v : vectors) {
      std::uint32_t arg = v.begin()->first;
      Rational mag = abs(v.begin()->second);
      for (const auto& [k, q] : v)
        if (abs(q) > mag) {
          mag = abs(q);
          arg = k;
        }
      peaks.push_back(arg);
      if (first_peak || mag < peak_min) peak_min = mag;
      first_peak = false;
    }
    auto pattern_holds = [&](const FamilyExpr& target, bool use_peaks) {
      FamilyEval lev(eb);
      for (const auto& s : maximal) {
        std::vector<std::uint32_t> image;
        for (const auto& p : s)
          image.push_back(use_peaks ? peaks[p[0]] : vectors[p[0]].begin()->first);
        if (!lev.member(target, nat_set(image))) return false;
      }
      return true;
    };
    switch (engine.kind) {
      case EngineKind::Schreier:
        if (pattern_holds(engine.family, true)) {
          out.lower = peak_min;
          out.lower_certified = true;
        }
        break;
      case EngineKind::Tsirelson:
        if (pattern_holds(salpha, false)) {
          Rational m;
          bool fst = true;
          for (const auto& v : vectors) {
            Rational nv = tsirelson_norm(alpha, v, budget).value;
            if (fst || nv < m) m = nv;
            fst = false;
          }
          out.lower = m / 2;
          out.lower_certified = true;
        }
        break;
      case EngineKind::Interpolation:
        if (pattern_holds(family_chain(alpha, 1), true)) {
          out.lower = peak_min / 4;
          out.lower_certified = true;
        }
        break;
    }
  }
  if (out.lower > out.upper) fail(ErrorKind::Internal, "spreading bounds crossed");
  return out;
}

// ---------------------------------------------------------------------------
// Ptak combinations

namespace {

// maximal member of S_beta starting at `start`, truncated at `end`
std::vector<std::uint32_t> maximal_schreier_set(const Ordinal& beta, std::uint32_t start,
                                                std::uint32_t end) {
  if (start >= end) return {};
  if (beta.is_zero()) return {start};
  if (beta.is_successor()) {
    Ordinal lower = pred(beta);
    std::vector<std::uint32_t> out;
    std::uint32_t cursor = start;
    for (std::uint32_t blocks = 0; blocks < start && cursor < end; ++blocks) {
      auto block = maximal_schreier_set(lower, cursor, end);
      if (block.empty()) break;
      out.insert(out.end(), block.begin(), block.end());
      cursor = block.back() + 1;
    }
    return out;
  }
  return maximal_schreier_set(fundamental_sequence(beta, start), start, end);
}

// exact max of the weight over Schreier-base subsets: for each admissible
// minimum m take the m-1 heaviest points above it
Rational base_mass(const PointSet& s, const std::map<std::uint32_t, Rational>& a) {
  Rational best = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::uint32_t m = s[i][0];
    if (m == 0) continue;
    std::vector<Rational> above;
    for (std::size_t j = i + 1; j < s.size(); ++j) above.push_back(a.at(s[j][0]));
    std::sort(above.rbegin(), above.rend());
    Rational sum = a.at(m);
    for (std::uint32_t c = 0; c + 1 < m && c < above.size(); ++c) sum += above[c];
    if (sum > best) best = sum;
  }
  return best;
}

bool is_schreier_one(const FamilyExpr& c) {
  if (std::get_if<fam::SchreierBase>(&c.node().v)) return true;
  if (auto* s = std::get_if<fam::Schreier>(&c.node().v)) return s->alpha == Ordinal::one();
  return false;
}

Rational branch_bound_mass(const FamilyExpr& c, const PointSet& s,
                           const std::map<std::uint32_t, Rational>& a,
                           const NormBudget& budget) {
  FamilyEval ev(EvalBudget{budget.work, 32, 64});
  // descending suffix weight sums in point order, for the bound
  std::vector<Rational> suffix(s.size() + 1, Rational(0));
  for (std::size_t i = s.size(); i-- > 0;) suffix[i] = suffix[i + 1] + a.at(s[i][0]);
  Rational best = 0;
  std::uint64_t work = 0;
  std::vector<std::uint32_t> cur;
  std::function<void(std::size_t, const Rational&)> dfs = [&](std::size_t from,
                                                              const Rational& sum) {
    if (++work > budget.work) fail(ErrorKind::Resource, "mass search budget exceeded");
    if (sum > best) best = sum;
    for (std::size_t i = from; i < s.size(); ++i) {
      if (sum + suffix[i] <= best) return;  // nothing ahead can improve
      cur.push_back(s[i][0]);
      if (ev.member(c, nat_set(cur))) dfs(i + 1, sum + a.at(s[i][0]));
      cur.pop_back();
    }
  };
  dfs(0, Rational(0));
  return best;
}

}  // namespace

Rational family_mass(const FamilyExpr& c, const PointSet& s,
                     const std::map<std::uint32_t, Rational>& a, const NormBudget& budget) {
  if (is_schreier_one(c)) return base_mass(s, a);
  return branch_bound_mass(c, s, a, budget);
}

PtakResult ptak_combination(const FamilyExpr& c, const Ordinal& beta, std::uint32_t window_start,
                            std::uint32_t window_end, const NormBudget& budget) {
  if (c.ground().kind != GroundKind::Naturals)
    fail(ErrorKind::Composition, "ptak combinations live on the naturals");
  std::uint32_t start = std::max<std::uint32_t>(window_start, 1);
  if (start >= window_end) fail(ErrorKind::Domain, "empty admissible window");
  std::vector<std::uint32_t> s = maximal_schreier_set(beta, start, window_end);
  if (s.empty()) fail(ErrorKind::Domain, "no admissible base set in the window");

  // repeated averages down the Schreier recursion
  std::function<std::map<std::uint32_t, Rational>(const Ordinal&, std::uint32_t, std::uint32_t)>
      averages = [&](const Ordinal& b, std::uint32_t lo,
                     std::uint32_t hi) -> std::map<std::uint32_t, Rational> {
    std::map<std::uint32_t, Rational> out;
    if (lo >= hi) return out;
    if (b.is_zero()) {
      out[lo] = 1;
      return out;
    }
    if (b.is_successor()) {
      Ordinal lower = pred(b);
      std::vector<std::map<std::uint32_t, Rational>> blocks;
      std::uint32_t cursor = lo;
      for (std::uint32_t k = 0; k < lo && cursor < hi; ++k) {
        auto block_set = maximal_schreier_set(lower, cursor, hi);
        if (block_set.empty()) break;
        blocks.push_back(averages(lower, cursor, block_set.back() + 1));
        cursor = block_set.back() + 1;
      }
      Rational share(1, std::uint64_t(blocks.size()));
      for (const auto& blk : blocks)
        for (const auto& [p, wgt] : blk) out[p] += share * wgt;
      return out;
    }
    return averages(fundamental_sequence(b, lo), lo, hi);
  };

  PtakResult out;
  out.coeffs = averages(beta, start, s.back() + 1);
  out.support = nat_set(s);
  // convexity is exact by construction; keep only the support weights
  {
    Rational total = 0;
    for (const auto& [p, w] : out.coeffs) total += w;
    if (total != 1) fail(ErrorKind::Internal, "averages do not sum to one");
  }
  out.mass = family_mass(c, out.support, out.coeffs, budget);

  // one local-improvement pass: shift weight from the heaviest point of the
  // critical set to the lightest point outside it when that helps
  for (int pass = 0; pass < 2; ++pass) {
    std::uint32_t heavy = s[0];
    for (auto p : s)
      if (out.coeffs[p] > out.coeffs[heavy]) heavy = p;
    std::uint32_t light = s[0];
    for (auto p : s)
      if (out.coeffs[p] < out.coeffs[light]) light = p;
    if (heavy == light) break;
    Rational delta = (out.coeffs[heavy] - out.coeffs[light]) / 4;
    if (delta == 0) break;
    auto trial = out.coeffs;
    trial[heavy] -= delta;
    trial[light] += delta;
    Rational m = family_mass(c, out.support, trial, budget);
    if (m < out.mass) {
      out.coeffs = trial;
      out.mass = m;
    } else {
      break;
    }
  }
  return out;
}

}  // namespace sforge
