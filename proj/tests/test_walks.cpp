#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sforge/parse.hpp"
#include "sforge/walks.hpp"

using namespace sforge;

namespace {

Ordinal O(const std::string& s) { return parse_ordinal(s); }

std::vector<Ordinal> ords(std::initializer_list<const char*> xs) {
  std::vector<Ordinal> out;
  for (auto* x : xs) out.push_back(O(x));
  return out;
}

}  // namespace

TEST_CASE("canonical clubs") {
  WalkSystem w;
  CHECK(w.club_point(O("w"), 0) == O("0"));
  CHECK(w.club_point(O("w"), 3) == O("3"));
  CHECK(w.club_point(O("w*2"), 0) == O("w"));
  CHECK(w.club_point(O("w*2"), 2) == O("w+2"));
  CHECK(w.club_point(O("w^2"), 1) == O("w"));
  CHECK(w.club_point(O("w^w"), 0) == O("1"));
  CHECK(w.club_point(O("w^w"), 2) == O("w^2"));
  CHECK(w.club_below(O("w"), O("2")) == ClubSegment{O("0"), O("1")});
  CHECK(w.club_below(O("w+1"), O("1")).empty());
  CHECK(w.club_below(O("5"), O("5")) == ClubSegment{O("4")});
}

TEST_CASE("trace: pinned walks") {
  WalkSystem w;
  CHECK(w.trace(O("2"), O("w")) == ords({"w", "2"}));
  CHECK(w.trace(O("w"), O("w")) == ords({"w"}));
  CHECK(w.trace(O("1"), O("w+2")) == ords({"w+2", "w+1", "w", "1"}));
  CHECK_THROWS_AS(w.trace(O("3"), O("2")), Error);
  CHECK_THROWS_AS(w.trace(O("0"), O("w^w")), Error);  // outside the ground
}

TEST_CASE("rho2 and rho0: pinned values") {
  WalkSystem w;
  CHECK(w.rho2(O("0"), O("0")) == 0);
  CHECK(w.rho2(O("2"), O("w")) == 1);
  CHECK(w.rho2(O("1"), O("w+2")) == 3);
  CHECK(w.rho0(O("2"), O("w")) == Rho0Value{{O("0"), O("1")}});
  CHECK(w.rho0(O("w"), O("w")).empty());
  Rho0Value expect{{}, {}, {O("0")}};
  CHECK(w.rho0(O("1"), O("w+2")) == expect);
}

TEST_CASE("rho0 length equals rho2; entries are club initial segments") {
  WalkSystem w;
  auto pts = walk_grid(ords({"0", "w", "w*2", "w^2"}), 6);
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      auto value = w.rho0(pts[i], pts[j]);
      CHECK(value.size() == w.rho2(pts[i], pts[j]));
      auto tr = w.trace(pts[i], pts[j]);
      for (std::size_t k = 0; k < value.size(); ++k) {
        ClubSegment seg = w.club_below(tr[k], pts[i]);
        CHECK(value[k] == seg);
      }
    }
}

TEST_CASE("build_tree: small finite segment") {
  WalkSystem w;
  auto tr = w.build_tree(ords({"0", "1", "2"}));
  CHECK(tr.info.size() == 4);
  CHECK(tr.tree.size() == 4);
  CHECK(tr.info[0].alpha == O("0"));
  // the nodes of domain 1: the walk from 1 and the walk through 2
  int depth1 = 0;
  for (const auto& ni : tr.info)
    if (ni.alpha == O("1")) ++depth1;
  CHECK(depth1 == 2);

  auto single = w.build_tree(ords({"0"}));
  CHECK(single.info.size() == 1);

  // node count is bounded by the number of pairs
  auto big = w.build_tree(walk_grid(ords({"0", "w"}), 4));
  CHECK(big.info.size() <= 8 * 9 / 2 + 1);
}

TEST_CASE("build_tree respects the order characterization") {
  WalkSystem w;
  auto pts = walk_grid(ords({"0", "w", "w*2"}), 5);
  auto tr = w.build_tree(pts);
  const FinTree& T = tr.tree;
  for (NodeId t = 0; t < T.size(); ++t)
    for (NodeId u = 0; u < T.size(); ++u) {
      if (t == u) continue;
      bool structural = T.lt(t, u);
      bool characterized =
          Ordinal::compare(tr.info[t].alpha, tr.info[u].alpha) == std::strong_ordering::less &&
          (tr.info[t].alpha.is_zero() ||
           w.rho0(tr.info[t].alpha, tr.info[u].beta) == tr.info[t].value);
      CHECK(structural == characterized);
    }
}

TEST_CASE("check_monotone: zero violations on sampled segments") {
  WalkSystem w;
  SUBCASE("below w*3") {
    auto rep = w.check_monotone(walk_grid(ords({"0", "w", "w*2"}), 6));
    CHECK(rep.violations.empty());
    CHECK(rep.lengths_consistent);
    CHECK(rep.pairs_checked > 0);
  }
  SUBCASE("through w^2 and w^2+w") {
    auto rep = w.check_monotone(walk_grid(ords({"0", "w", "w^2", "w^2+w"}), 4));
    CHECK(rep.violations.empty());
    CHECK(rep.lengths_consistent);
  }
  SUBCASE("single node") {
    auto rep = w.check_monotone(ords({"0"}));
    CHECK(rep.violations.empty());
    CHECK(rep.pairs_checked == 0);
  }
}

TEST_CASE("rho0_lex_less conventions") {
  Rho0Value shorter{{O("0")}};
  Rho0Value longer{{O("0")}, {}};
  CHECK(rho0_lex_less(longer, shorter));   // proper extension is smaller
  CHECK_FALSE(rho0_lex_less(shorter, longer));
  Rho0Value diverge_small{{O("0")}};
  Rho0Value diverge_big{{O("0"), O("1")}};
  CHECK(rho0_lex_less(diverge_small, diverge_big));
  CHECK_FALSE(rho0_lex_less(diverge_big, diverge_small));
}

TEST_CASE("walk budget") {
  WalkSystem w;
  CHECK_THROWS_AS(w.build_tree(walk_grid(ords({"0", "w"}), 12), 10), Error);
}
