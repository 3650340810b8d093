#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "modlie/classical.hpp"

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

Vec random_vec(const Fq& F, int n, Rng& rng) {
  Vec v(static_cast<std::size_t>(n));
  for (auto& c : v) c = random_elem(F, rng);
  return v;
}

bool root_values_distinct(const ClassicalAlgebra& g, const Vec& y) {
  const Fq& F = g.L.field();
  std::vector<FqElem> vals;
  for (int i = 0; i < g.phi->positive_count(); ++i) {
    FqElem v = root_value(g, i, y);
    vals.push_back(v);
    vals.push_back(F.neg(v));
  }
  std::sort(vals.begin(), vals.end());
  return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
}

}  // namespace

TEST_CASE("root systems match the type catalogue", "[rootsystem]") {
  struct Row {
    const char* type;
    int rank, positives, top_height;
  };
  for (Row r : {Row{"A", 1, 1, 1}, Row{"A", 2, 3, 2}, Row{"A", 3, 6, 3}, Row{"A", 4, 10, 4},
                Row{"B", 2, 4, 3}, Row{"B", 3, 9, 5}, Row{"C", 3, 9, 5}, Row{"D", 4, 12, 5},
                Row{"G", 2, 6, 5}}) {
    RootSystem phi(r.type, r.rank);
    CAPTURE(r.type, r.rank);
    REQUIRE(phi.positive_count() == r.positives);
    int top = 0;
    for (int i = 0; i < phi.positive_count(); ++i) top = std::max(top, phi.height(i));
    REQUIRE(top == r.top_height);
  }

  REQUIRE(thrown_code([] { RootSystem("E", 6); }) == "UnsupportedType");
  REQUIRE(thrown_code([] { RootSystem("F", 4); }) == "UnsupportedType");
  REQUIRE(thrown_code([] { RootSystem("A", 0); }) == "UnsupportedType");
  REQUIRE(thrown_code([] { RootSystem("D", 2); }) == "UnsupportedType");
  REQUIRE(thrown_code([] { RootSystem("G", 3); }) == "UnsupportedType");
}

TEST_CASE("B2 roots, norms, and coroots are pinned", "[rootsystem]") {
  RootSystem phi("B", 2);
  REQUIRE(phi.positive_roots() ==
          std::vector<std::vector<int>>{{0, 1}, {1, 0}, {1, 1}, {1, 2}});
  REQUIRE(phi.height(2) == 2);
  REQUIRE(phi.height(3) == 3);
  REQUIRE(phi.norm(0) == 2);
  REQUIRE(phi.norm(1) == 4);
  REQUIRE(phi.norm(2) == 2);
  REQUIRE(phi.norm(3) == 4);
  REQUIRE(phi.coroot(2) == std::vector<std::int64_t>{2, 1});
  REQUIRE(phi.coroot(3) == std::vector<std::int64_t>{1, 1});
  REQUIRE(phi.index_of({1, 1}) == 2);
  REQUIRE(phi.index_of({2, 1}) == -1);
}

TEST_CASE("B2 structure constants follow the convention", "[rootsystem]") {
  RootSystem phi("B", 2);
  // extraspecial pairs get +(steps down + 1)
  REQUIRE(phi.n_positive(0, 1) == 1);   // [e_{01}, e_{10}] = e_{11}
  REQUIRE(phi.n_positive(0, 2) == 2);   // [e_{01}, e_{11}] = 2 e_{12}
  REQUIRE(phi.n_positive(1, 0) == -1);  // antisymmetry
  REQUIRE(phi.n_positive(1, 2) == 0);   // (2,1) is not a root
  REQUIRE(phi.n_positive(0, 3) == 0);
  REQUIRE(phi.n_positive(1, 3) == 0);
  REQUIRE(phi.n_positive(2, 3) == 0);
  // mixed constants through the zero-sum relation
  REQUIRE(phi.n_mixed(2, 0) == -2);  // [e_{11}, f_{01}] = -2 e_{10}
  REQUIRE(phi.n_mixed(0, 2) == -2);
  REQUIRE(phi.n_mixed(3, 0) == -1);  // [e_{12}, f_{01}] = -e_{11}
  REQUIRE(phi.n_mixed(1, 0) == 0);   // (1,-1) is not a root
}

TEST_CASE("G2 roots and constants are pinned", "[rootsystem]") {
  RootSystem phi("G", 2);
  REQUIRE(phi.positive_roots() ==
          std::vector<std::vector<int>>{{0, 1}, {1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}});
  REQUIRE(std::vector<int>{phi.norm(0), phi.norm(1), phi.norm(2), phi.norm(3), phi.norm(4),
                           phi.norm(5)} == std::vector<int>{6, 2, 2, 2, 6, 6});
  REQUIRE(phi.n_positive(0, 1) == 1);  // extraspecial for (1,1)
  REQUIRE(phi.n_positive(1, 2) == 2);  // extraspecial for (2,1)
  REQUIRE(phi.n_positive(1, 3) == 3);  // extraspecial for (3,1): string of length 3 below
  REQUIRE(phi.n_positive(0, 4) == 1);  // extraspecial for (3,2)
  // string through (2,1) in direction -(1,1): (1,0), then the negative root
  // (0,-1); two steps down, so magnitude 3
  REQUIRE(std::abs(phi.n_positive(2, 3)) == 3);
}

TEST_CASE("Chevalley algebras validate with catalogue dimensions", "[classical]") {
  struct Row {
    const char* type;
    int rank, dim;
    const char* name;
  };
  for (auto F : {Fq::prime(5), Fq::prime(7)})
    for (Row r : {Row{"A", 1, 3, "A1"}, Row{"A", 2, 8, "A2"}, Row{"B", 2, 10, "B2"},
                  Row{"C", 3, 21, "C3"}, Row{"D", 4, 28, "D4"}, Row{"G", 2, 14, "G2"}}) {
      ClassicalAlgebra g = chevalley_algebra(F, r.type, r.rank);
      CAPTURE(F.describe(), r.name);
      REQUIRE(g.L.dim() == r.dim);
      REQUIRE(g.L.name() == r.name);
      REQUIRE(g.L.graded());
      REQUIRE(!g.L.validate().has_value());
      REQUIRE(g.kind == "chevalley");
      REQUIRE(static_cast<int>(g.eplus.size()) == g.phi->positive_count());
      REQUIRE(static_cast<int>(g.cartan_slots.size()) == r.rank);
    }
}

TEST_CASE("A1 is sl2 with the textbook table", "[classical]") {
  Fq F = Fq::prime(5);
  ClassicalAlgebra g = chevalley_algebra(F, "A", 1);
  // basis order: e = 0, h = 1, f = 2
  REQUIRE(g.L.labels() == std::vector<std::string>{"e[1]", "h1", "f[1]"});
  REQUIRE(g.L.bracket_basis(0, 2) == Vec{F.zero(), F.one(), F.zero()});           // [e,f] = h
  REQUIRE(g.L.bracket(unit_vec(3, 1), unit_vec(3, 0)) ==
          Vec{F.from_int(2), F.zero(), F.zero()});                                // [h,e] = 2e
  REQUIRE(g.L.bracket(unit_vec(3, 1), unit_vec(3, 2)) ==
          Vec{F.zero(), F.zero(), F.from_int(-2)});                               // [h,f] = -2f
}

TEST_CASE("sl3 matches gl3 through the matrix-unit correspondence", "[classical]") {
  Fq F = Fq::prime(5);
  ClassicalAlgebra a2 = chevalley_algebra(F, "A", 2);
  ClassicalAlgebra gl = gl_algebra(F, 3);
  auto E = [&](int r, int c) { return unit_vec(9, r * 3 + c); };
  auto minus = [&](Vec v) { return vec_scale(F, F.from_int(-1), v); };
  // root order: (0,1), (1,0), (1,1); simple numbering: #0 = (1,0), #1 = (0,1)
  std::vector<Vec> img = {
      E(1, 2),                              // e_{(0,1)}
      E(0, 1),                              // e_{(1,0)}
      minus(E(0, 2)),                       // e_{(1,1)}
      vec_add(F, E(0, 0), minus(E(1, 1))),  // h1
      vec_add(F, E(1, 1), minus(E(2, 2))),  // h2
      E(2, 1),                              // f_{(0,1)}
      E(1, 0),                              // f_{(1,0)}
      minus(E(2, 0)),                       // f_{(1,1)}
  };
  auto apply = [&](const Vec& v) {
    Vec out = vec_zero(9);
    for (int i = 0; i < 8; ++i)
      out = vec_add(F, out, vec_scale(F, v[static_cast<std::size_t>(i)],
                                      img[static_cast<std::size_t>(i)]));
    return out;
  };
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) {
      CAPTURE(a, b);
      REQUIRE(apply(a2.L.bracket_basis(a, b)) ==
              gl.L.bracket(img[static_cast<std::size_t>(a)], img[static_cast<std::size_t>(b)]));
    }
}

TEST_CASE("sl psl gl pgl constructors", "[classical]") {
  Fq F = Fq::prime(5);

  ClassicalAlgebra sl4 = sl_algebra(F, 4);
  REQUIRE(sl4.L.dim() == 15);
  REQUIRE(sl4.L.name() == "sl:4");
  REQUIRE(sl4.kind == "sl");
  REQUIRE(center(sl4.L).dim() == 0);
  REQUIRE(!sl4.L.validate().has_value());

  ClassicalAlgebra sl5 = sl_algebra(F, 5);
  REQUIRE(sl5.L.dim() == 24);
  REQUIRE(center(sl5.L).dim() == 1);

  ClassicalAlgebra psl5 = psl_algebra(F, 5);
  REQUIRE(psl5.L.dim() == 23);
  REQUIRE(psl5.L.name() == "psl:5");
  REQUIRE(center(psl5.L).dim() == 0);
  REQUIRE(!psl5.L.validate().has_value());
  REQUIRE(psl5.eplus.size() == 10);
  REQUIRE(psl5.eminus.size() == 10);
  // the center h1 + 2h2 + 3h3 + 4h4 pivots away the first Cartan slot
  REQUIRE(psl5.cartan_slots.size() == 3);
  REQUIRE(psl5.cartan_slots[0].second == 1);
  REQUIRE(psl5.cartan_slots[1].second == 2);
  REQUIRE(psl5.cartan_slots[2].second == 3);
  // chart consistency: the surviving Cartan images act by the root pairings
  for (const auto& [slot, t] : psl5.cartan_slots)
    for (int i = 0; i < psl5.phi->positive_count(); ++i) {
      Vec lhs = psl5.L.bracket(unit_vec(23, slot),
                               unit_vec(23, psl5.eplus[static_cast<std::size_t>(i)]));
      Vec rhs = vec_scale(F, root_value(psl5, i, unit_vec(23, slot)),
                          unit_vec(23, psl5.eplus[static_cast<std::size_t>(i)]));
      REQUIRE(lhs == rhs);
    }

  ClassicalAlgebra psl4 = psl_algebra(F, 4);  // p does not divide 4: nothing to kill
  REQUIRE(psl4.L.dim() == 15);
  REQUIRE(psl4.kind == "psl");

  ClassicalAlgebra gl3 = gl_algebra(F, 3);
  REQUIRE(gl3.L.dim() == 9);
  REQUIRE(gl3.L.graded());
  REQUIRE(!gl3.L.validate().has_value());
  RowSpace z3 = center(gl3.L);
  REQUIRE(z3.dim() == 1);
  Vec id3 = vec_zero(9);
  for (int r = 0; r < 3; ++r) id3[static_cast<std::size_t>(r * 3 + r)] = F.one();
  REQUIRE(z3.contains(id3));

  ClassicalAlgebra pgl3 = pgl_algebra(F, 3);
  REQUIRE(pgl3.L.dim() == 8);
  REQUIRE(center(pgl3.L).dim() == 0);
  REQUIRE(!pgl3.L.validate().has_value());
  REQUIRE(!pgl3.charted());
}

TEST_CASE("classical_by_name resolves the CLI names", "[classical]") {
  Fq F = Fq::prime(5);
  REQUIRE(classical_by_name(F, "A1").L.dim() == 3);
  REQUIRE(classical_by_name(F, "B2").L.dim() == 10);
  REQUIRE(classical_by_name(F, "C3").L.dim() == 21);
  REQUIRE(classical_by_name(F, "D4").L.dim() == 28);
  REQUIRE(classical_by_name(F, "G2").L.dim() == 14);
  REQUIRE(classical_by_name(F, "sl:4").L.dim() == 15);
  REQUIRE(classical_by_name(F, "psl:5").L.dim() == 23);
  REQUIRE(classical_by_name(F, "gl:3").L.dim() == 9);
  REQUIRE(classical_by_name(F, "pgl:3").L.dim() == 8);
  for (const char* bad : {"E6", "F4", "X2", "", "A", "sl:", "sl:1", "q"})
    REQUIRE(thrown_code([&] { classical_by_name(F, bad); }) == "UnsupportedType");
}

TEST_CASE("random vectors generate the whole algebra as an ideal", "[classical]") {
  Fq F = Fq::prime(5);
  Rng rng(2024);
  std::vector<ClassicalAlgebra> corpus;
  corpus.push_back(chevalley_algebra(F, "A", 1));
  corpus.push_back(chevalley_algebra(F, "A", 2));
  corpus.push_back(chevalley_algebra(F, "B", 2));
  corpus.push_back(chevalley_algebra(F, "G", 2));
  corpus.push_back(chevalley_algebra(F, "C", 3));
  corpus.push_back(chevalley_algebra(F, "D", 4));
  corpus.push_back(sl_algebra(F, 5));  // perfect with simple quotient
  corpus.push_back(psl_algebra(F, 5));
  for (const auto& g : corpus) {
    CAPTURE(g.L.name());
    for (int draw = 0; draw < 5; ++draw) {
      Vec v = random_vec(F, g.L.dim(), rng);
      if (vec_is_zero(v)) continue;
      REQUIRE(ideal_closure(g.L, {v}).dim() == g.L.dim());
    }
  }
}

TEST_CASE("root spaces are one-dimensional and brackets refill the Cartan", "[classical]") {
  for (auto F : {Fq::prime(5), Fq::prime(7)})
    for (const char* type : {"A", "B", "G"})
      for (int rank = (std::string(type) == "A" ? 1 : 2);
           rank <= (std::string(type) == "A" ? 2 : 2); ++rank) {
        ClassicalAlgebra g = chevalley_algebra(F, type, rank);
        CAPTURE(F.describe(), g.L.name());
        auto spaces = weight_decomposition(g.L, g.cartan_basis());
        int m = g.phi->positive_count(), l = rank;
        REQUIRE(static_cast<int>(spaces.size()) == 2 * m + 1);
        int zero_dim = 0;
        for (const auto& ws : spaces) {
          bool zero = true;
          for (FqElem a : ws.alpha) zero = zero && a.is_zero();
          if (zero)
            zero_dim = static_cast<int>(ws.basis.size());
          else
            REQUIRE(ws.basis.size() == 1);
        }
        REQUIRE(zero_dim == l);
        RowSpace span(F, g.L.dim());
        for (int i = 0; i < m; ++i)
          span.insert(g.L.bracket_basis(g.eplus[static_cast<std::size_t>(i)],
                                        g.eminus[static_cast<std::size_t>(i)]));
        REQUIRE(span.dim() == l);
        for (const auto& [slot, t] : g.cartan_slots)
          REQUIRE(span.contains(unit_vec(g.L.dim(), slot)));
      }
}

TEST_CASE("regular Cartan elements have distinct root values", "[classical]") {
  Rng rng(77);
  ClassicalAlgebra a1 = chevalley_algebra(Fq::prime(5), "A", 1);
  Vec y = regular_cartan_element(a1, rng);
  REQUIRE(root_values_distinct(a1, y));

  // six root values cannot be distinct inside F_5
  ClassicalAlgebra a2 = chevalley_algebra(Fq::prime(5), "A", 2);
  REQUIRE(thrown_code([&] { regular_cartan_element(a2, rng); }) == "FieldTooSmall");
  ClassicalAlgebra a2x = a2.with_field(Fq::ext(5, 2));
  Vec y2 = regular_cartan_element(a2x, rng);
  REQUIRE(root_values_distinct(a2x, y2));

  ClassicalAlgebra g2 = chevalley_algebra(Fq::prime(7), "G", 2);
  REQUIRE(thrown_code([&] { regular_cartan_element(g2, rng); }) == "FieldTooSmall");
  ClassicalAlgebra g2x = g2.with_field(Fq::ext(7, 2));
  REQUIRE(root_values_distinct(g2x, regular_cartan_element(g2x, rng)));

  // the exhaustive sweep must find the tight packing: 20 values inside F_25
  ClassicalAlgebra p5 = psl_algebra(Fq::prime(5), 5).with_field(Fq::ext(5, 2));
  REQUIRE(root_values_distinct(p5, regular_cartan_element(p5, rng)));
}

TEST_CASE("exp(ad) gives root-group automorphisms", "[classical]") {
  Fq F = Fq::prime(5);
  ClassicalAlgebra g = chevalley_algebra(F, "A", 1);
  // exp(t ad e) f = f + t h - t^2 e
  for (std::int64_t t : {0, 1, 2, 3}) {
    Matrix M = exp_ad_automorphism(g, 0, false, F.from_int(t));
    Vec img = mat_vec(F, M, unit_vec(3, 2));
    REQUIRE(img == Vec{F.from_int(-t * t), F.from_int(t), F.one()});
  }
  REQUIRE(exp_ad_automorphism(g, 0, false, F.zero()) == Matrix::identity(F, 3));
  Matrix a = exp_ad_automorphism(g, 0, true, F.from_int(2));
  Matrix b = exp_ad_automorphism(g, 0, true, F.from_int(-2));
  REQUIRE(mat_mul(F, a, b) == Matrix::identity(F, 3));

  // ad h is semisimple, not nilpotent
  REQUIRE(thrown_code([&] { exp_ad_nilpotent(g.L, unit_vec(3, 1), F.one()); }) ==
          "NilpotencyIndexTooLarge");

  // the vector route agrees with the matrix route
  ClassicalAlgebra g2 = chevalley_algebra(F, "G", 2);
  Rng rng(5);
  for (int draw = 0; draw < 20; ++draw) {
    int i = static_cast<int>(rng.uniform(6));
    bool neg = rng.uniform(2) == 1;
    FqElem t = random_elem(F, rng);
    Vec v = random_vec(F, 14, rng);
    Vec gen = unit_vec(14, neg ? g2.eminus[static_cast<std::size_t>(i)]
                               : g2.eplus[static_cast<std::size_t>(i)]);
    REQUIRE(exp_ad_apply(g2.L, gen, t, v) ==
            mat_vec(F, exp_ad_nilpotent(g2.L, gen, t), v));
  }
}

TEST_CASE("densification fills every root component", "[classical]") {
  Fq F = Fq::prime(5);
  Rng rng(11);
  ClassicalAlgebra a1 = chevalley_algebra(F, "A", 1);

  Densified d = densify_components(a1, unit_vec(3, 0), rng);
  REQUIRE(!d.image[0].is_zero());
  REQUIRE(!d.image[2].is_zero());
  REQUIRE(mat_vec(F, d.sigma, unit_vec(3, 0)) == d.image);
  REQUIRE(mat_vec(F, d.sigma_inv, d.image) == unit_vec(3, 0));
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      Vec lhs = mat_vec(F, d.sigma, a1.L.bracket_basis(a, b));
      Vec rhs = a1.L.bracket(mat_vec(F, d.sigma, unit_vec(3, a)),
                             mat_vec(F, d.sigma, unit_vec(3, b)));
      REQUIRE(lhs == rhs);
    }

  Vec dense = Vec{F.one(), F.from_int(2), F.from_int(3)};
  Densified d2 = densify_components(a1, dense, rng);
  REQUIRE(d2.image == dense);
  REQUIRE(d2.sigma == Matrix::identity(F, 3));

  REQUIRE(thrown_code([&] { densify_components(a1, vec_zero(3), rng); }) == "SpecMismatch");

  ClassicalAlgebra a2 = chevalley_algebra(F, "A", 2);
  for (int draw = 0; draw < 10; ++draw) {
    Vec x = random_vec(F, 8, rng);
    if (vec_is_zero(x)) continue;
    Densified dd = densify_components(a2, x, rng);
    for (int i = 0; i < 3; ++i) {
      REQUIRE(!dd.image[static_cast<std::size_t>(a2.eplus[static_cast<std::size_t>(i)])].is_zero());
      REQUIRE(!dd.image[static_cast<std::size_t>(a2.eminus[static_cast<std::size_t>(i)])].is_zero());
    }
  }
}

TEST_CASE("partner search certifies generation for classical algebras", "[classical]") {
  Fq F = Fq::prime(5);
  Rng rng(404);

  ClassicalAlgebra a1 = chevalley_algebra(F, "A", 1);
  Vec epf = vec_add(F, unit_vec(3, 0), unit_vec(3, 2));
  GenerationCertificate c1 = theoremB_partner(a1, epf, rng);
  REQUIRE(c1.degree <= 2);
  REQUIRE(generated_subalgebra(c1.algebra.L, c1.x, c1.y).space.dim() == 3);
  REQUIRE(naive_closure(c1.algebra.L, {c1.x, c1.y}).dim() == 3);

  GenerationCertificate c2 = theoremB_partner(a1, unit_vec(3, 0), rng);
  REQUIRE(c2.degree <= 2);
  REQUIRE(generated_subalgebra(c2.algebra.L, c2.x, c2.y).space.dim() == 3);

  REQUIRE(thrown_code([&] { theoremB_partner(a1, vec_zero(3), rng); }) == "SpecMismatch");
  REQUIRE(thrown_code([&] {
            Rng r2(1);
            theoremB_partner(gl_algebra(F, 3), unit_vec(9, 1), r2);
          }) == "UnsupportedType");

  struct Sample {
    const char* name;
    int draws;
  };
  for (Sample s : {Sample{"A2", 10}, Sample{"B2", 5}, Sample{"G2", 3}, Sample{"sl:4", 3},
                   Sample{"psl:5", 2}}) {
    ClassicalAlgebra g = classical_by_name(F, s.name);
    Rng sub = rng.fork(fnv1a64(s.name));
    for (int draw = 0; draw < s.draws; ++draw) {
      Vec x = random_vec(F, g.L.dim(), sub);
      if (vec_is_zero(x)) continue;
      CAPTURE(s.name, draw);
      GenerationCertificate cert = theoremB_partner(g, x, sub);
      REQUIRE(cert.degree <= 2);
      REQUIRE(generated_subalgebra(cert.algebra.L, cert.x, cert.y).space.dim() == g.L.dim());
      if (draw == 0 && g.L.dim() <= 10)
        REQUIRE(naive_closure(cert.algebra.L, {cert.x, cert.y}).dim() == g.L.dim());
    }
  }
}

TEST_CASE("regular plus dense pairs span through Van der Monde powers", "[classical]") {
  Fq K = Fq::ext(5, 2);
  ClassicalAlgebra g = chevalley_algebra(K, "A", 2);
  Rng rng(9);
  Vec y = regular_cartan_element(g, rng);
  int m = g.phi->positive_count();
  Vec x = vec_zero(g.L.dim());
  for (int i = 0; i < m; ++i) {
    x[static_cast<std::size_t>(g.eplus[static_cast<std::size_t>(i)])] = K.one();
    x[static_cast<std::size_t>(g.eminus[static_cast<std::size_t>(i)])] = K.from_int(2);
  }
  RowSpace span(K, g.L.dim());
  Vec w = x;
  for (int k = 0; k <= 2 * m; ++k) {
    span.insert(w);
    w = g.L.bracket(y, w);
  }
  REQUIRE(span.dim() == 2 * m);
  for (int i = 0; i < m; ++i) {
    REQUIRE(span.contains(unit_vec(g.L.dim(), g.eplus[static_cast<std::size_t>(i)])));
    REQUIRE(span.contains(unit_vec(g.L.dim(), g.eminus[static_cast<std::size_t>(i)])));
  }
  // with a Cartan part the k = 0 row adds one more dimension
  Vec x2 = vec_add(K, x, unit_vec(g.L.dim(), g.cartan_slots[0].first));
  RowSpace span2(K, g.L.dim());
  w = x2;
  for (int k = 0; k <= 2 * m; ++k) {
    span2.insert(w);
    w = g.L.bracket(y, w);
  }
  REQUIRE(span2.dim() == 2 * m + 1);
}

TEST_CASE("direct sums of sl2 admit partners for doubly-nonzero x", "[classical]") {
  Fq F = Fq::prime(5);
  ClassicalAlgebra a1 = chevalley_algebra(F, "A", 1);
  LieAlgebra L = direct_sum(a1.L, a1.L);
  Rng rng(31);
  auto pair_vec = [&](const Vec& a, const Vec& b) {
    Vec v = vec_zero(6);
    for (int i = 0; i < 3; ++i) {
      v[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
      v[static_cast<std::size_t>(3 + i)] = b[static_cast<std::size_t>(i)];
    }
    return v;
  };
  Vec e = unit_vec(3, 0), h = unit_vec(3, 1), f = unit_vec(3, 2);
  std::vector<Vec> samples = {pair_vec(e, e), pair_vec(e, f), pair_vec(vec_add(F, e, f), h),
                              pair_vec(h, e), pair_vec(h, h)};
  for (int draw = 0; draw < 5; ++draw) {
    Vec a = random_vec(F, 3, rng), b = random_vec(F, 3, rng);
    if (vec_is_zero(a) || vec_is_zero(b)) continue;
    samples.push_back(pair_vec(a, b));
  }
  for (std::size_t s = 0; s < samples.size(); ++s) {
    CAPTURE(s);
    bool found = false;
    for (int draw = 0; draw < 2000 && !found; ++draw) {
      Vec y = random_vec(F, 6, rng);
      if (generated_subalgebra(L, samples[s], y).space.dim() == 6) found = true;
    }
    REQUIRE(found);
  }
}

TEST_CASE("central extension partner search covers gl", "[classical]") {
  Fq F = Fq::prime(5);
  Rng rng(1212);
  ClassicalAlgebra gl2 = gl_algebra(F, 2);
  Vec e12 = unit_vec(4, 1);
  Vec y = central_extension_partner(gl2.L, e12, rng);
  REQUIRE(generated_subalgebra(gl2.L, e12, y).space.dim() == 4);
  REQUIRE(naive_closure(gl2.L, {e12, y}).dim() == 4);

  Vec id2 = vec_add(F, unit_vec(4, 0), unit_vec(4, 3));
  REQUIRE(thrown_code([&] { central_extension_partner(gl2.L, id2, rng); }) == "SpecMismatch");

  ClassicalAlgebra gl3 = gl_algebra(F, 3);
  RowSpace z3 = center(gl3.L);
  for (int draw = 0; draw < 3; ++draw) {
    Vec x = random_vec(F, 9, rng);
    if (z3.contains(x)) continue;
    Vec yy = central_extension_partner(gl3.L, x, rng);
    REQUIRE(generated_subalgebra(gl3.L, x, yy).space.dim() == 9);
  }

  // at most one central shift can fail once the quotient partner is fixed
  RowSpace z2 = center(gl2.L);
  Quotient Q = quotient(gl2.L, z2);
  Vec xbar = quotient_project(Q, gl2.L, e12);
  Vec ybar;
  for (int i = 0;; ++i) {
    REQUIRE(i < 500);
    Vec cand = random_vec(F, Q.algebra.dim(), rng);
    if (generated_subalgebra(Q.algebra, xbar, cand).space.dim() == Q.algebra.dim()) {
      ybar = cand;
      break;
    }
  }
  Vec y0 = quotient_lift(Q, gl2.L, ybar);
  int good = 0;
  for (std::uint64_t idx = 0; idx < F.q(); ++idx) {
    Vec cand = vec_add(F, y0, vec_scale(F, F.elem_from_index(idx), z2.rows()[0]));
    if (generated_subalgebra(gl2.L, e12, cand).space.dim() == 4) ++good;
  }
  REQUIRE(good >= static_cast<int>(F.q()) - 1);
}

TEST_CASE("field extension keeps the chart and the constants", "[classical]") {
  ClassicalAlgebra g = chevalley_algebra(Fq::prime(5), "B", 2);
  ClassicalAlgebra gx = g.with_field(Fq::ext(5, 2));
  REQUIRE(gx.L.dim() == 10);
  REQUIRE(!gx.L.validate().has_value());
  REQUIRE(gx.eplus == g.eplus);
  REQUIRE(gx.cartan_slots == g.cartan_slots);
  const Fq& K = gx.L.field();
  for (int a = 0; a < 10; ++a)
    for (int b = a + 1; b < 10; ++b) {
      Vec over5 = g.L.bracket_basis(a, b);
      Vec over25 = gx.L.bracket_basis(a, b);
      for (int i = 0; i < 10; ++i)
        REQUIRE(over25[static_cast<std::size_t>(i)] ==
                K.from_int(g.L.field().digit(over5[static_cast<std::size_t>(i)], 0)));
    }
}
