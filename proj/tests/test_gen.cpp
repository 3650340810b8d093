#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "modlie/gen.hpp"

using namespace modlie;

namespace {

std::string thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

LieAlgebra replay_algebra(const PairCertificate& c) {
  Fq K = c.field_k == 1 ? Fq::prime(c.p) : Fq::ext(c.p, c.field_k);
  return algebra_by_name(K, c.algebra, 400);
}

}  // namespace

TEST_CASE("exhaustive pair census over sl_2 matches the hand count") {
  Fq F = Fq::prime(5);
  LieAlgebra L = classical_by_name(F, "A1").L;
  StrataCensus c = strata_census(L, SamplingPlan::all());
  CHECK(c.total == 15625);
  // counted by hand: the zero pair; 31 lines through 0 contribute 31*24
  // collinear nonzero pairs; the 6 Borel subalgebras contribute 6*(25^2 - 145)
  // pairs spanning a 2-dim subalgebra; everything else generates
  std::map<int, long long> expect{{0, 1}, {1, 744}, {2, 2880}, {3, 12000}};
  CHECK(c.histogram == expect);
  CHECK(c.plan == "exhaustive");
}

TEST_CASE("random census plans are reproducible and see full-rank pairs") {
  Fq F = Fq::prime(5);
  WittAlgebra Z = build_zassenhaus(F, 1);
  StrataCensus c = strata_census(Z.L, SamplingPlan::sample(42, 10000));
  CHECK(c.total == 10000);
  CHECK(c.histogram[5] > 0);
  for (const auto& [d, n] : c.histogram) {
    CHECK(d >= 0);
    CHECK(d <= 5);
    CHECK(n > 0);
  }
  StrataCensus c2 = strata_census(Z.L, SamplingPlan::sample(42, 1500));
  StrataCensus c3 = strata_census(Z.L, SamplingPlan::sample(42, 1500));
  CHECK(c2.histogram == c3.histogram);

  LieAlgebra A2 = classical_by_name(F, "A2").L;
  CHECK(thrown_code([&] { strata_census(A2, SamplingPlan::all()); }) == "BudgetExceeded");
}

TEST_CASE("graded recipe certifies the rank-one and rank-two algebras") {
  Fq F25 = Fq::ext(5, 2);
  struct Row {
    int m;
    MultiIndex n;
    int dim;
  };
  for (const Row& row : {Row{1, {1}, 5}, Row{2, {1, 1}, 50}, Row{1, {2}, 25}}) {
    WittAlgebra W = build_witt(F25, row.m, row.n);
    GradedRecipe r = graded_recipe_pair(W);
    CHECK(r.cert.closure_dim == row.dim);
    CHECK(r.cert.method == "graded-recipe");
    CHECK(replay(W.L, r.cert));

    // the pair decomposes as logged
    Vec sum = vec_add(F25, vec_add(F25, r.xm1, r.x0), r.xs);
    CHECK(sum == r.cert.x);
    CHECK(r.cert.y == r.y0);
    CHECK(r.alpha_m1 != r.alpha_s);

    // y0 is the logged torus combination with powers of the generator
    std::vector<Vec> torus = W.torus();
    Vec y0 = vec_zero(W.L.dim());
    std::uint64_t idx = 1;
    for (int j = 0; j < row.m; ++j) {
      y0 = vec_add(F25, y0, vec_scale(F25, F25.elem_from_index(idx), torus[j]));
      idx *= 5;
    }
    CHECK(y0 == r.y0);

    // the separating element takes pairwise distinct values on the weights
    REQUIRE(r.separated_values.size() == r.phi.size());
    std::vector<FqElem> vals;
    for (const MultiIndex& w : r.phi) {
      FqElem v = F25.zero();
      for (std::size_t i = 0; i < w.size(); ++i)
        v = F25.add(v, F25.mul(F25.from_int(w[i]), r.separator[i]));
      vals.push_back(v);
    }
    CHECK(vals == r.separated_values);
    std::sort(vals.begin(), vals.end());
    CHECK(std::adjacent_find(vals.begin(), vals.end()) == vals.end());
  }

  // small case cross-checked against the quadratic closure oracle
  WittAlgebra W11 = build_witt(F25, 1, {1});
  GradedRecipe r = graded_recipe_pair(W11);
  CHECK(naive_closure(W11.L, {r.cert.x, r.cert.y}).dim() == 5);
  GradedRecipe again = graded_recipe_pair(W11);
  CHECK(again.cert.x == r.cert.x);
  CHECK(again.cert.y == r.cert.y);

  Fq F49 = Fq::ext(7, 2);
  CHECK(graded_recipe_pair(build_witt(F49, 1, {1})).cert.closure_dim == 7);

  Fq F5 = Fq::prime(5);
  CHECK(thrown_code([&] { graded_recipe_pair(build_witt(F5, 2, {1, 1})); }) == "FieldTooSmall");
}

TEST_CASE("split partner selection matches the closure oracle") {
  Fq F = Fq::prime(5);
  WittAlgebra Z = build_zassenhaus(F, 1);
  const int d = 5;

  SECTION("top-component x pairs with the downward shift") {
    Vec x = vec_scale(F, F.from_int(3), unit_vec(d, d - 1));
    ZassenhausPartner zp = zassenhaus_partner(Z, x);
    CHECK(zp.top_shortcut);
    CHECK(zp.cert.y == unit_vec(d, 0));
    CHECK(zp.cert.closure_dim == 5);
    WittAlgebra Z2 = build_zassenhaus(F, 2);
    ZassenhausPartner zp2 = zassenhaus_partner(Z2, unit_vec(25, 24));
    CHECK(zp2.top_shortcut);
    CHECK(zp2.cert.closure_dim == 25);
  }

  SECTION("preconditions") {
    CHECK(thrown_code([&] { zassenhaus_partner(Z, vec_zero(d)); }) == "SpecMismatch");
    WittAlgebra W21 = build_witt(F, 2, {1, 1});
    CHECK(thrown_code([&] { zassenhaus_partner(W21, unit_vec(50, 0)); }) == "SpecMismatch");
  }

  SECTION("the e0 partner agrees with an exhaustive alpha scan") {
    Vec x = unit_vec(d, 1);
    // oracle: try every alpha in the base field through the quadratic closure
    std::vector<std::uint64_t> good;
    for (std::uint64_t i = 0; i < 5; ++i) {
      Vec y = unit_vec(d, 0);
      y[d - 1] = F.elem_from_index(i);
      if (naive_closure(Z.L, {x, y}).dim() == d) good.push_back(i);
    }
    CHECK(good == std::vector<std::uint64_t>{1, 2, 3, 4});
    ZassenhausPartner zp = zassenhaus_partner(Z, x);
    CHECK(zp.ext_mult == 1);
    CHECK(zp.alpha == F.elem_from_index(good.front()));
    CHECK(naive_closure(Z.L, {zp.cert.x, zp.cert.y}).dim() == d);
  }

  SECTION("every nonzero x with base-field coordinates finds a partner") {
    Rng rng(99);
    for (int t = 0; t < 60; ++t) {
      Vec x = random_nonzero_vec(F, d, rng);
      ZassenhausPartner zp = zassenhaus_partner(Z, x);
      CHECK(zp.ext_mult == 1);  // degree <= 4 in alpha cannot kill all 5 points
      CHECK(zp.cert.closure_dim == d);
      CHECK(replay(replay_algebra(zp.cert), zp.cert));
    }
    WittAlgebra Z2 = build_zassenhaus(F, 2);
    for (int t = 0; t < 25; ++t) {
      Vec x = random_nonzero_vec(F, 25, rng);
      ZassenhausPartner zp = zassenhaus_partner(Z2, x);
      CHECK(zp.ext_mult <= 2);
      CHECK(zp.cert.closure_dim == 25);
    }
  }
}

TEST_CASE("iterates against the split partner follow the shift pattern") {
  Fq F = Fq::prime(5);
  Rng rng(4242);
  for (std::uint32_t n : {1u, 2u}) {
    WittAlgebra Z = build_zassenhaus(F, n);
    const int d = Z.L.dim();
    const int s = Z.s;
    for (int trial = 0; trial < 5; ++trial) {
      Vec lam = random_nonzero_vec(F, d, rng);
      FqElem alpha = random_nonzero(F, rng);
      Vec y = unit_vec(d, 0);
      y[static_cast<std::size_t>(d - 1)] = alpha;
      Vec z = lam;
      for (int k = 1; k <= s; ++k) {
        z = Z.L.bracket(y, z);
        // predicted column: the coefficients shift down k slots, the slot
        // s-k picks up -alpha lam_{-1}, the tail wraps to alpha lam_j, and
        // the top entry doubles
        Vec want = vec_zero(d);
        want[0] = lam[static_cast<std::size_t>(k)];
        for (int j = 0; j + k <= s - 1; ++j)
          want[static_cast<std::size_t>(1 + j)] = lam[static_cast<std::size_t>(j + k + 1)];
        want[static_cast<std::size_t>(1 + s - k)] =
            F.sub(lam[static_cast<std::size_t>(d - 1)], F.mul(alpha, lam[0]));
        for (int t = 1; t <= k - 1; ++t)
          want[static_cast<std::size_t>(1 + s - k + t)] =
              F.mul(alpha, lam[static_cast<std::size_t>(t)]);
        want[static_cast<std::size_t>(d - 1)] =
            F.mul(F.from_int(2), F.mul(alpha, lam[static_cast<std::size_t>(k)]));
        CHECK(z == want);
      }
    }
  }
}

TEST_CASE("the partner determinant has the predicted degree and leading term") {
  Fq K = Fq::ext(5, 2);
  WittAlgebra Z = build_zassenhaus(K, 1);
  const int d = 5, s = 3;
  Rng rng(7);

  auto interpolated = [&](const Fq& F, const LieAlgebra& L, const Vec& x, int pts) {
    std::vector<FqElem> xs, ys;
    for (int i = 0; i < pts; ++i) {
      xs.push_back(F.elem_from_index(static_cast<std::uint64_t>(i)));
      ys.push_back(partner_matrix_det(L, x, xs.back()));
    }
    return lagrange_interpolate(F, xs, ys);
  };

  SECTION("lowest coordinate present: degree s+1 and exact leading term") {
    for (int t = 0; t < 5; ++t) {
      Vec x = random_vec(K, d, rng);
      x[0] = random_nonzero(K, rng);
      std::vector<FqElem> pol = interpolated(K, Z.L, x, s + 3);
      REQUIRE(static_cast<int>(pol.size()) == s + 2);
      CHECK(pol.back() == K.pow(K.neg(x[0]), static_cast<std::uint64_t>(s + 1)));
    }
  }

  SECTION("general minimal coordinate: degree s-k, leading term lam_k^{s+1} up to sign") {
    for (int k = 0; k <= s - 1; ++k) {
      for (int t = 0; t < 3; ++t) {
        Vec x = vec_zero(d);
        for (int j = k; j <= s; ++j)
          x[static_cast<std::size_t>(j + 1)] = random_elem(K, rng);
        x[static_cast<std::size_t>(k + 1)] = random_nonzero(K, rng);
        std::vector<FqElem> pol = interpolated(K, Z.L, x, s + 3);
        REQUIRE(static_cast<int>(pol.size()) == s - k + 1);
        FqElem lead = K.pow(x[static_cast<std::size_t>(k + 1)],
                            static_cast<std::uint64_t>(s + 1));
        CHECK((pol.back() == lead || pol.back() == K.neg(lead)));
      }
    }
  }

  SECTION("x = e0 gives exactly a cubic monomial") {
    std::vector<FqElem> pol = interpolated(K, Z.L, unit_vec(d, 1), s + 3);
    REQUIRE(pol.size() == 4);
    CHECK(pol[0].is_zero());
    CHECK(pol[1].is_zero());
    CHECK(pol[2].is_zero());
    CHECK((pol[3] == K.one() || pol[3] == K.neg(K.one())));
  }

  SECTION("height two over a cubic extension") {
    Fq K3 = Fq::ext(5, 3);
    WittAlgebra Z2 = build_zassenhaus(K3, 2);
    Rng rng2(13);
    Vec x = random_vec(K3, 25, rng2);
    x[0] = random_nonzero(K3, rng2);
    std::vector<FqElem> pol = interpolated(K3, Z2.L, x, 27);
    REQUIRE(pol.size() == 25);  // degree s+1 = 24
    CHECK(pol.back() == K3.pow(K3.neg(x[0]), 24));
  }
}

TEST_CASE("obstruction probes bound the derived algebra and route the envelope") {
  Fq F = Fq::prime(5);
  WittAlgebra W = build_witt(F, 2, {1, 1});
  const int d = W.L.dim();
  int top = W.basis_index(W.O.index_of({4, 4}), 0);
  Vec x = unit_vec(d, top);

  SECTION("sampled report") {
    ObstructionReport rep = obstruction_report(W, x, 40, 7);
    CHECK(rep.bound == 25);
    CHECK(rep.dim_w == 50);
    CHECK(rep.all_bounded);
    CHECK(rep.none_generates);
    CHECK(rep.envelopes_hold);
    CHECK(rep.samples.size() == 40);
    for (const ObstructionSample& smp : rep.samples) {
      CHECK(smp.k >= 0);
      CHECK(smp.k <= 2);
      CHECK(smp.derived_dim <= 25);
      CHECK(smp.closure_dim < 50);
      CHECK(smp.detail.empty());
    }
    ObstructionReport rep2 = obstruction_report(W, x, 40, 7);
    for (std::size_t i = 0; i < rep.samples.size(); ++i)
      CHECK(rep.samples[i].y == rep2.samples[i].y);
  }

  SECTION("pinned probes hit both branches") {
    ObstructionContext C = obstruction_context(W, x);
    CHECK(C.trivial);

    Vec y = unit_vec(d, W.basis_index(W.O.index_of({0, 0}), 0));  // D_1
    ObstructionSample smp = obstruction_probe(W, C, x, y);
    CHECK(smp.k == 1);
    CHECK(smp.envelope_ok);

    y = unit_vec(d, W.basis_index(W.O.index_of({1, 0}), 0));  // x1 D_1, toral
    smp = obstruction_probe(W, C, x, y);
    CHECK(smp.k == 0);
    CHECK(smp.envelope_ok);

    smp = obstruction_probe(W, C, x, vec_zero(d));
    CHECK(smp.k == 0);
    CHECK(smp.closure_dim == 1);
    CHECK(smp.envelope_ok);

    // generic y realizes the maximal invariant and the delta envelope
    Rng rng(31);
    bool found = false;
    for (int t = 0; t < 40 && !found; ++t) {
      Vec yr = random_vec(F, d, rng);
      ObstructionSample sr = obstruction_probe(W, C, x, yr);
      CHECK(sr.envelope_ok);
      found = sr.k == 2;
    }
    CHECK(found);
  }

  SECTION("mixed heights route through the tall embedding") {
    WittAlgebra Wm = build_witt(F, 2, {1, 2});
    int topm = Wm.basis_index(Wm.O.index_of({4, 24}), 1);
    Vec xm = unit_vec(Wm.L.dim(), topm);
    ObstructionReport rep = obstruction_report(Wm, xm, 6, 11);
    CHECK(rep.bound == 125);
    CHECK(rep.dim_w == 250);
    CHECK(rep.all_bounded);
    CHECK(rep.none_generates);
    CHECK(rep.envelopes_hold);
  }

  SECTION("preconditions") {
    WittAlgebra Z = build_zassenhaus(F, 1);
    CHECK(thrown_code([&] { obstruction_context(Z, unit_vec(5, 4)); }) == "SpecMismatch");
    CHECK(thrown_code([&] { obstruction_context(W, vec_zero(d)); }) == "SpecMismatch");
    CHECK(thrown_code([&] { obstruction_context(W, unit_vec(d, 0)); }) == "SpecMismatch");
  }
}

TEST_CASE("searches certify what they find and describe what they searched") {
  Fq F = Fq::prime(5);

  SECTION("classical recipe delegates to the constructive partner") {
    ClassicalAlgebra g = classical_by_name(F, "A1");
    Rng rng(5);
    Vec x = random_nonzero_vec(F, 3, rng);
    SearchOptions opt;
    opt.seed = 17;
    SearchOutcome out = one_and_half_search(g, x, Strategy::recipe, opt);
    REQUIRE(out.cert.has_value());
    CHECK(out.cert->method == "theoremB");
    CHECK(out.cert->closure_dim == 3);
    CHECK(replay(replay_algebra(*out.cert), *out.cert));
  }

  SECTION("rank-one recipe uses the split partner") {
    WittAlgebra Z = build_zassenhaus(F, 1);
    SearchOutcome out = one_and_half_search(Z, unit_vec(5, 1), Strategy::recipe);
    REQUIRE(out.cert.has_value());
    CHECK(out.cert->method == "zassenhaus");
    CHECK(out.cert->closure_dim == 5);
  }

  SECTION("recipe refuses to invent a partner for wide algebras") {
    WittAlgebra W = build_witt(F, 2, {1, 1});
    SearchOutcome out = one_and_half_search(W, unit_vec(50, 0), Strategy::recipe);
    CHECK(!out.cert.has_value());
    CHECK(out.searched.find("m > 1") != std::string::npos);
  }

  SECTION("random search over the base field") {
    WittAlgebra Z = build_zassenhaus(F, 1);
    SearchOptions opt;
    opt.seed = 3;
    opt.budget = 200;
    opt.max_ext = 1;
    SearchOutcome out = one_and_half_search(Z, unit_vec(5, 1), Strategy::random, opt);
    REQUIRE(out.cert.has_value());
    CHECK(out.cert->method == "search");
    CHECK(replay(Z.L, *out.cert));
  }

  SECTION("random search reports the scanned levels when nothing generates") {
    WittAlgebra W = build_witt(F, 2, {1, 1});
    int top = W.basis_index(W.O.index_of({4, 4}), 0);
    SearchOptions opt;
    opt.seed = 1;
    opt.budget = 5;
    opt.max_ext = 1;
    SearchOutcome out = one_and_half_search(W, unit_vec(50, top), Strategy::random, opt);
    CHECK(!out.cert.has_value());
    CHECK(out.tested == 5);
    CHECK(out.searched.find("random y over") != std::string::npos);
  }

  SECTION("exhaustive search on a two-coordinate grid") {
    WittAlgebra Z = build_zassenhaus(F, 1);
    SearchOptions opt;
    opt.grid = {0, 4};
    opt.budget = 30;
    SearchOutcome out = one_and_half_search(Z, unit_vec(5, 1), Strategy::exhaustive, opt);
    REQUIRE(out.cert.has_value());
    CHECK(replay(Z.L, *out.cert));

    SearchOptions narrow;
    narrow.grid = {1};
    narrow.budget = 30;
    SearchOutcome miss = one_and_half_search(Z, unit_vec(5, 1), Strategy::exhaustive, narrow);
    CHECK(!miss.cert.has_value());
    CHECK(miss.tested == 5);
    CHECK(miss.searched.find("e0") != std::string::npos);
    CHECK(miss.searched.find("exhaustive") != std::string::npos);

    SearchOptions big;
    big.budget = 100;
    CHECK(thrown_code([&] {
            one_and_half_search(Z, unit_vec(5, 1), Strategy::exhaustive, big);
          }) == "BudgetExceeded");
  }
}

TEST_CASE("generation is invariant under invertible changes of the pair") {
  Fq F = Fq::prime(5);
  LieAlgebra A1 = classical_by_name(F, "A1").L;
  WittAlgebra Z = build_zassenhaus(F, 1);
  Rng rng(2024);
  for (const LieAlgebra* L : {&A1, &Z.L}) {
    for (int t = 0; t < 10; ++t) {
      Vec x = random_vec(F, L->dim(), rng);
      Vec y = random_vec(F, L->dim(), rng);
      FqElem a, b, c, dd;
      do {
        a = random_elem(F, rng);
        b = random_elem(F, rng);
        c = random_elem(F, rng);
        dd = random_elem(F, rng);
      } while (F.sub(F.mul(a, dd), F.mul(b, c)).is_zero());
      Vec x2 = vec_add(F, vec_scale(F, a, x), vec_scale(F, b, y));
      Vec y2 = vec_add(F, vec_scale(F, c, x), vec_scale(F, dd, y));
      CHECK(generated_subalgebra(*L, x, y).space.dim() ==
            generated_subalgebra(*L, x2, y2).space.dim());
    }
  }
}
