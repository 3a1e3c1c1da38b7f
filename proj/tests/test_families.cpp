#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sforge/families.hpp"
#include "sforge/parse.hpp"

using namespace sforge;

namespace {

Ordinal O(const std::string& s) { return parse_ordinal(s); }

std::vector<std::uint32_t> vals(const PointSet& s) {
  std::vector<std::uint32_t> v;
  for (const auto& p : s) v.push_back(p[0]);
  return v;
}

// Independent recognizer for the finite Schreier levels: first-block recursion
// carrying the accumulated min pattern, a different search shape than the
// implementation's mask enumeration.
bool oracle_base(const std::vector<std::uint32_t>& s) {
  return s.empty() || s.size() <= s[0];
}

bool oracle_schreier(int k, const std::vector<std::uint32_t>& s);

bool oracle_rec(int k, const std::vector<std::uint32_t>& s, std::size_t pos,
                std::vector<std::uint32_t>& mins) {
  if (pos == s.size()) return oracle_base(mins);
  for (std::size_t len = 1; pos + len <= s.size(); ++len) {
    std::vector<std::uint32_t> block(s.begin() + long(pos), s.begin() + long(pos + len));
    if (!oracle_schreier(k - 1, block)) continue;
    mins.push_back(s[pos]);
    bool ok = oracle_rec(k, s, pos + len, mins);
    mins.pop_back();
    if (ok) return true;
  }
  return false;
}

bool oracle_schreier(int k, const std::vector<std::uint32_t>& s) {
  if (k == 0) return s.size() <= 1;
  if (s.empty()) return true;
  std::vector<std::uint32_t> mins;
  return oracle_rec(k, s, 0, mins);
}

FamilyExpr random_finite_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 8 : 3);
  switch (pick(rng)) {
    case 0: return make_empty();
    case 1: {
      std::uniform_int_distribution<int> kd(0, 3);
      return make_cube(std::uint32_t(kd(rng)));
    }
    case 2: return make_schreier_base();
    case 3: {
      std::uniform_int_distribution<int> ad(0, 2);
      return make_schreier(Ordinal::from_nat(std::uint64_t(ad(rng))));
    }
    case 4: return make_union(random_finite_expr(rng, depth - 1), random_finite_expr(rng, depth - 1));
    case 5:
      return make_square_union(random_finite_expr(rng, depth - 1),
                               random_finite_expr(rng, depth - 1));
    case 6:
      return make_plus_sum(random_finite_expr(rng, depth - 1), random_finite_expr(rng, depth - 1));
    case 7: {
      std::uniform_int_distribution<int> nd(1, 2);
      return make_box_times(random_finite_expr(rng, depth - 1), std::uint32_t(nd(rng)));
    }
    default: {
      std::uniform_int_distribution<int> nd(0, 3);
      return make_shift(random_finite_expr(rng, depth - 1), std::uint32_t(nd(rng)));
    }
  }
}

}  // namespace

TEST_CASE("membership: pinned examples") {
  CHECK(member(make_schreier_base(), nat_set({3, 4, 5})));
  CHECK_FALSE(member(make_schreier_base(), nat_set({0})));
  CHECK(member(make_schreier_base(), {}));
  CHECK(member(make_schreier(O("2")), nat_set({2, 3, 6, 7, 8})));
  CHECK_FALSE(member(make_schreier(O("2")), nat_set({1, 2})));
  CHECK(member(make_cube(3), {}));
  CHECK(member(make_schreier(O("0")), nat_set({0})));
  CHECK_FALSE(member(make_schreier(O("1")), nat_set({0})));
}

TEST_CASE("membership: Schreier levels against the first-block oracle") {
  for (int level = 1; level <= 3; ++level) {
    FamilyExpr e = make_schreier(Ordinal::from_nat(std::uint64_t(level)));
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
      std::vector<std::uint32_t> xs;
      for (std::uint32_t i = 0; i < 10; ++i)
        if (mask & (1u << i)) xs.push_back(i);
      CHECK(member(e, nat_set(xs)) == oracle_schreier(level, xs));
    }
  }
}

TEST_CASE("membership: plus sum orientation (low part from the right factor)") {
  FamilyExpr low_from_base = make_plus_sum(make_cube(1), make_schreier_base());
  FamilyExpr low_from_cube = make_plus_sum(make_schreier_base(), make_cube(1));
  // {0,5}: {0} is no Schreier-base set, so only the cube-low orientation admits it
  CHECK_FALSE(member(low_from_base, nat_set({0, 5})));
  CHECK(member(low_from_cube, nat_set({0, 5})));
  // {3,4,5,6}: base-low takes {3,4,5}, cube-high takes {6}
  CHECK(member(low_from_cube, nat_set({3, 4, 5, 6})));
}

TEST_CASE("membership: Schreier limit clause picks a witness level") {
  FamilyExpr e = make_schreier(O("w"));
  CHECK(member(e, {}));
  CHECK(member(e, nat_set({2, 3})));
  CHECK_FALSE(member(e, nat_set({1, 2})));
  // coherence: every member has a witnessing finite level below its min
  for (std::uint32_t mask = 0; mask < (1u << 8); ++mask) {
    std::vector<std::uint32_t> xs;
    for (std::uint32_t i = 0; i < 8; ++i)
      if (mask & (1u << i)) xs.push_back(i);
    if (!member(e, nat_set(xs))) continue;
    if (xs.empty()) continue;
    bool witnessed = false;
    for (std::uint32_t n = 0; n <= xs[0] && !witnessed; ++n)
      if (member(make_schreier(fundamental_sequence(O("w"), n)), nat_set(xs))) witnessed = true;
    CHECK(witnessed);
  }
}

TEST_CASE("rank: combinator formulas") {
  CHECK(rank(make_schreier(O("2"))) == O("w^2"));
  CHECK(rank(make_cube(4)) == O("4"));
  CHECK(rank(make_tensor(make_schreier(O("1")), make_cube(2))) == O("w*2"));
  CHECK(rank(make_empty()) == O("0"));
  CHECK(rank(make_schreier_base()) == O("w"));
  CHECK(rank(make_canonical_uniform(O("w^2*2+3"))) == O("w^2*2+3"));
  CHECK(rank(make_union(make_schreier(O("1")), make_cube(4))) == O("w"));
  CHECK(rank(make_square_union(make_schreier(O("1")), make_cube(2))) == O("w+2"));
  // ordinal sum of (+) takes the high-part rank first: w + 1 vs 1 + w
  CHECK(rank(make_plus_sum(make_schreier_base(), make_cube(1))) == O("w+1"));
  CHECK(rank(make_plus_sum(make_cube(1), make_schreier_base())) == O("w"));
  CHECK(rank(make_box_times(make_cube(2), 3)) == O("6"));
  CHECK(rank(make_shift(make_schreier_base(), 4)) == O("w"));
  CHECK_THROWS_AS(rank(make_restrict(make_schreier_base(),
                                     [](const Point& p) { return p[0] % 2 == 0; }, "evens")),
                  Error);
  CHECK_THROWS_AS(rank(make_fubini(make_cube(1), make_cube(1))), Error);
}

TEST_CASE("srk bounds") {
  auto [lo1, hi1] = srk_bounds(make_schreier(O("w")));
  CHECK(lo1 == O("w^w"));
  CHECK(hi1 == O("w^w"));
  auto [lo2, hi2] = srk_bounds(make_cube(3));
  CHECK(lo2 == O("3"));
  CHECK(hi2 == O("3"));
  FamilyExpr evens = make_restrict(make_schreier(O("1")),
                                   [](const Point& p) { return p[0] % 2 == 0; }, "evens", true);
  auto [lo3, hi3] = srk_bounds(evens);
  CHECK(lo3 == O("w"));
  CHECK(hi3 == O("w"));
}

TEST_CASE("enumerate_window") {
  auto got = enumerate_window(make_schreier_base(), 4);
  std::vector<std::vector<std::uint32_t>> expect{{}, {1}, {2}, {3}, {2, 3}};
  REQUIRE(got.size() == expect.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(vals(got[i]) == expect[i]);

  auto cube1 = enumerate_window(make_cube(1), 3);
  REQUIRE(cube1.size() == 4);
  CHECK(vals(cube1[0]).empty());
  CHECK(vals(cube1[3]) == std::vector<std::uint32_t>{2});

  auto empty = enumerate_window(make_empty(), 10);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].empty());

  EvalBudget small;
  small.window_max = 8;
  CHECK_THROWS_AS(enumerate_window(make_cube(1), 9, small), Error);
}

TEST_CASE("audit_window") {
  auto rep = audit_window(make_schreier(O("2")), 12);
  CHECK(rep.hereditary);
  CHECK(rep.spreading);

  auto rep2 = audit_window(make_plus_sum(make_cube(1), make_schreier_base()), 10);
  CHECK(rep2.hereditary);

  FamilyExpr evens = make_restrict(make_schreier_base(),
                                   [](const Point& p) { return p[0] % 2 == 0; }, "evens");
  auto rep3 = audit_window(evens, 10);
  CHECK(rep3.hereditary);
  CHECK_FALSE(rep3.spreading);
  CHECK_FALSE(rep3.spreading_cex.empty());
}

TEST_CASE("hereditariness invariant over random combinator expressions") {
  std::mt19937 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    FamilyExpr e = random_finite_expr(rng, 3);
    auto rep = audit_window(e, 8);
    CHECK(rep.hereditary);
  }
}

TEST_CASE("derivative_member") {
  CHECK(derivative_member(make_schreier_base(), {}, 1, 10));
  CHECK_FALSE(derivative_member(make_schreier_base(), nat_set({1}), 1, 50));
  CHECK(derivative_member(make_cube(2), {}, 2, 10));
  CHECK_FALSE(derivative_member(make_cube(2), {}, 3, 10));
  FamilyExpr evens = make_restrict(make_schreier_base(),
                                   [](const Point& p) { return p[0] % 2 == 0; }, "evens");
  CHECK_THROWS_AS(derivative_member(evens, {}, 1, 10), Error);
}

TEST_CASE("finite-rank sandwich for spreading composites") {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 25) {
    FamilyExpr e = random_finite_expr(rng, 2);
    Ordinal r = rank(e);
    if (!r.is_finite()) continue;
    if (!is_spreading_class(e)) continue;
    ++done;
    auto m = std::uint32_t(r.as_nat());
    const std::uint32_t window = 12;
    auto members = enumerate_window(e, window);
    std::uint32_t max_size = 0;
    for (const auto& s : members) max_size = std::max<std::uint32_t>(max_size, std::uint32_t(s.size()));
    CHECK(max_size <= m);
    // some tail cube of dimension m embeds, found by scanning start points
    bool found = false;
    for (std::uint32_t n = 0; n + m <= window && !found; ++n) {
      bool all_in = true;
      for (std::uint32_t mask = 0; mask < (1u << (window - n)) && all_in; ++mask) {
        std::vector<std::uint32_t> xs;
        for (std::uint32_t i = 0; i < window - n; ++i)
          if (mask & (1u << i)) xs.push_back(n + i);
        if (xs.size() <= m && !member(e, nat_set(xs))) all_in = false;
      }
      if (all_in) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("mult_omega") {
  FamilyExpr m = mult_omega(make_cube(1), make_schreier_base());
  CHECK(member(m, nat_set({0, 2, 3})));
  CHECK(rank(m) == O("w+1"));
  FamilyExpr me = mult_omega(make_empty(), make_schreier_base());
  CHECK(std::holds_alternative<fam::Empty>(me.node().v));
  CHECK_THROWS_AS(mult_omega(make_restrict(make_cube(1), [](const Point&) { return true; }, "all"),
                             make_schreier_base()),
                  Error);
}

TEST_CASE("multiplication law M.2, small finite check") {
  std::mt19937 rng(4242);
  FamilyExpr F = make_schreier(O("1"));
  FamilyExpr H = make_schreier_base();
  FamilyExpr G = mult_omega(F, H);
  FamilyEval ev;
  for (int trial = 0; trial < 100; ++trial) {
    // random successive blocks in F inside the window
    std::vector<std::vector<std::uint32_t>> blocks;
    std::uint32_t cursor = 1;
    std::uniform_int_distribution<int> kd(1, 4);
    int k = kd(rng);
    for (int b = 0; b < k && cursor < 20; ++b) {
      std::uniform_int_distribution<std::uint32_t> startd(cursor, cursor + 2);
      std::uint32_t start = startd(rng);
      std::uniform_int_distribution<std::uint32_t> lend(1, 3);
      std::uint32_t len = std::min(lend(rng), start);  // keeps the block in S_1
      std::vector<std::uint32_t> block;
      for (std::uint32_t i = 0; i < len; ++i) block.push_back(start + i);
      blocks.push_back(block);
      cursor = start + len;
    }
    // random admissible index set x in H over the block indices
    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < blocks.size(); ++i) idx.push_back(i);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_int_distribution<std::size_t> xd(0, blocks.size());
    idx.resize(xd(rng));
    std::sort(idx.begin(), idx.end());
    if (!ev.member(H, nat_set(idx))) continue;
    std::vector<std::uint32_t> mins, uni;
    for (auto i : idx) {
      mins.push_back(blocks[i][0]);
      for (auto x : blocks[i]) uni.push_back(x);
    }
    if (!ev.member(H, nat_set(mins))) continue;
    CHECK(ev.member(G, nat_set(uni)));
  }
}

TEST_CASE("inclusion_scan") {
  auto n1 = inclusion_scan(make_schreier(O("1")), make_schreier(O("2")), 14, 10);
  REQUIRE(n1.has_value());
  CHECK(*n1 <= 2);
  auto n2 = inclusion_scan(make_cube(2), make_schreier_base(), 12, 10);
  REQUIRE(n2.has_value());
  CHECK(*n2 == 2);
  auto n3 = inclusion_scan(make_schreier_base(), make_schreier_base(), 10, 5);
  REQUIRE(n3.has_value());
  CHECK(*n3 == 0);
  // cube(3) never fits into cube(2), no shift helps
  CHECK_FALSE(inclusion_scan(make_cube(3), make_cube(2), 10, 6).has_value());
}

TEST_CASE("section, shift, chain square union on a tree ground") {
  FamilyExpr sect = make_section(make_schreier_base(), nat_set({3}));
  // s in S_{3}: 3 < s and {3} u s in S
  CHECK(member(sect, nat_set({5, 6})));
  CHECK_FALSE(member(sect, nat_set({5, 6, 7})));
  CHECK(member(sect, {}));

  FamilyExpr sh = make_shift(make_cube(2), 3);
  CHECK(member(sh, nat_set({3, 7})));
  CHECK_FALSE(member(sh, nat_set({2, 7})));

  auto tree = std::make_shared<FinTree>(FinTree::parse("r(a(c,d),b)"));
  GroundSet tg = GroundSet::tree_nodes(tree);
  FamilyExpr chain2 = make_chain_square_union(make_cube(1, tg), make_cube(1, tg));
  auto pre = [&](const char* l) { return std::uint32_t(tree->pre_index(tree->node(l))); };
  CHECK(member(chain2, make_set(tg, {Point{pre("r")}, Point{pre("a")}})));
  CHECK_FALSE(member(chain2, make_set(tg, {Point{pre("c")}, Point{pre("d")}})));
}

TEST_CASE("fubini and power membership") {
  FamilyExpr fub = make_fubini(make_cube(2), make_schreier_base());
  // projection {1,2} in cube(2); sections {3},{3,4} wait: sections must be in S
  PointSet ok = make_set(GroundSet::pairs_lex(), {Point{1, 3}, Point{2, 3}, Point{2, 4}});
  CHECK(member(fub, ok));
  PointSet bad_proj =
      make_set(GroundSet::pairs_lex(), {Point{1, 3}, Point{2, 3}, Point{4, 3}});
  CHECK_FALSE(member(fub, bad_proj));
  PointSet bad_section = make_set(GroundSet::pairs_lex(), {Point{1, 0}});
  CHECK_FALSE(member(fub, bad_section));  // section {0} is not in S

  FamilyExpr pw = make_power({make_cube(1, GroundSet::seq_qlex()), make_cube(2, GroundSet::seq_qlex())},
                             make_cube(2));
  PointSet x = make_set(GroundSet::seq_qlex(), {Point{5}, Point{1, 2}, Point{1, 3}});
  CHECK(member(pw, x));
  PointSet too_many_len1 = make_set(GroundSet::seq_qlex(), {Point{5}, Point{6}});
  CHECK_FALSE(member(pw, too_many_len1));
  PointSet too_long = make_set(GroundSet::seq_qlex(), {Point{1, 2, 3}});
  CHECK_FALSE(member(pw, too_long));
}

TEST_CASE("preimage pulls a family back through a map") {
  // predecessor map on naturals: n -> n div 2; preimage of S
  FamilyExpr pre = make_preimage([](const Point& p) { return Point{p[0] / 2}; }, "half",
                                 GroundSet::naturals(), make_schreier_base());
  CHECK(member(pre, nat_set({4, 5})));        // image {2}, in S
  CHECK_FALSE(member(pre, nat_set({0, 1})));  // image {0}
  CHECK(member(pre, nat_set({6, 7, 8, 9})));  // image {3,4}
}

TEST_CASE("expression printing round") {
  FamilyExpr e = make_tensor(make_schreier(O("w")), make_cube(2));
  CHECK(e.str() == "(S[w] (*) cube(2))");
  CHECK(make_canonical_uniform(O("w")).str() == "U(w)");
}
