#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/classical.hpp"
#include "modlie/field.hpp"
#include "modlie/liealg.hpp"
#include "modlie/linalg.hpp"
#include "modlie/pstruct.hpp"
#include "modlie/witt.hpp"

namespace modlie {

inline Vec random_vec(const Fq& F, int n, Rng& rng) {
  Vec v(static_cast<std::size_t>(n));
  for (auto& c : v) c = random_elem(F, rng);
  return v;
}

inline Vec random_nonzero_vec(const Fq& F, int n, Rng& rng) {
  for (;;) {
    Vec v = random_vec(F, n, rng);
    if (!vec_is_zero(v)) return v;
  }
}

inline Vec embed_vec(const FieldEmbedding& emb, const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = emb.map(v[i]);
  return out;
}

/// Vector whose coordinates are the base-q digits of the counter; counting
/// from 0 to q^n - 1 enumerates F_q^n exactly once.
inline Vec vec_from_counter(const Fq& F, int n, std::uint64_t counter) {
  Vec v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    v[static_cast<std::size_t>(i)] = F.elem_from_index(counter % F.q());
    counter /= F.q();
  }
  return v;
}

/// Dispatches an algebra descriptor: "W:m:n1,..." and "Zass:n" go to the
/// Cartan-type builders, everything else to the classical ones.
inline LieAlgebra algebra_by_name(const Fq& F, const std::string& name, int cap = 250) {
  if (name.rfind("W:", 0) == 0 || name.rfind("Zass:", 0) == 0)
    return witt_by_name(F, name, cap).L;
  return classical_by_name(F, name).L;
}

// ---------------------------------------------------------------------------
// Certificates

/// A generating pair together with everything needed to replay it: the
/// algebra descriptor, the field the pair lives in (possibly an extension of
/// the field the search started from), and the seed that produced it.
struct PairCertificate {
  std::string algebra;
  std::uint32_t p = 0;
  std::uint32_t field_k = 1;
  Vec x, y;
  int closure_dim = 0;
  std::string method;  // theoremB | graded-recipe | zassenhaus | search
  std::uint64_t seed = 0;
};

inline bool replay(const LieAlgebra& L, const PairCertificate& c) {
  return generated_subalgebra(L, c.x, c.y).space.dim() == c.closure_dim;
}

// ---------------------------------------------------------------------------
// Strata census

struct SamplingPlan {
  bool exhaustive = false;
  std::uint64_t seed = 0;
  long long count = 0;

  static SamplingPlan all() { return {true, 0, 0}; }
  static SamplingPlan sample(std::uint64_t seed, long long count) { return {false, seed, count}; }

  std::string describe() const {
    if (exhaustive) return "exhaustive";
    return "random seed=" + std::to_string(seed) + " count=" + std::to_string(count);
  }
};

/// Histogram d -> number of sampled pairs (x, y) with dim F<x,y> = d.
struct StrataCensus {
  std::string algebra;
  std::string plan;
  long long total = 0;
  std::map<int, long long> histogram;
};

inline StrataCensus strata_census(const LieAlgebra& L, const SamplingPlan& plan,
                                  double pair_budget = 1e8) {
  StrataCensus out;
  out.algebra = L.name();
  out.plan = plan.describe();
  const Fq& F = L.field();
  if (plan.exhaustive) {
    double side = 1;
    for (int i = 0; i < L.dim(); ++i) side *= static_cast<double>(F.q());
    check(side * side <= pair_budget, "BudgetExceeded",
          "exhaustive census over " + L.name() + " needs " + std::to_string(side * side) +
              " pairs");
    std::uint64_t n = static_cast<std::uint64_t>(side);
    for (std::uint64_t a = 0; a < n; ++a) {
      Vec x = vec_from_counter(F, L.dim(), a);
      for (std::uint64_t b = 0; b < n; ++b) {
        Vec y = vec_from_counter(F, L.dim(), b);
        ++out.histogram[generated_subalgebra(L, x, y).space.dim()];
        ++out.total;
      }
    }
  } else {
    Rng base(plan.seed);
    for (long long i = 0; i < plan.count; ++i) {
      Rng rng = base.fork(static_cast<std::uint64_t>(i));
      Vec x = random_vec(F, L.dim(), rng);
      Vec y = random_vec(F, L.dim(), rng);
      ++out.histogram[generated_subalgebra(L, x, y).space.dim()];
      ++out.total;
    }
  }
  long long sum = 0;
  for (const auto& [d, c] : out.histogram) {
    check(d >= 0 && d <= L.dim(), "SpecMismatch", "census stratum escaped the dimension range");
    sum += c;
  }
  check(sum == out.total, "SpecMismatch", "census counts do not sum to the sample size");
  return out;
}

// ---------------------------------------------------------------------------
// Graded recipe for type W

/// Intermediate objects of the graded-recipe construction, kept for reports:
/// the torus element y0 with prime-field-independent coefficients, the three
/// homogeneous parts of x, the weight data, and the separating torus element
/// whose values on the involved weights are pairwise distinct.
struct GradedRecipe {
  PairCertificate cert;
  Vec y0, xm1, x0, xs;
  MultiIndex alpha_m1, alpha_s;
  std::vector<MultiIndex> phi;  // weights of the degree-0 part plus the two above
  Vec separator;                // torus coefficients of the separating element
  std::vector<FqElem> separated_values;
};

namespace detail {

inline FqElem weight_value(const Fq& F, const MultiIndex& w, const Vec& mu) {
  FqElem v = F.zero();
  for (std::size_t i = 0; i < w.size(); ++i)
    v = F.add(v, F.mul(F.from_int(w[i]), mu[i]));
  return v;
}

inline bool pairwise_distinct(std::vector<FqElem> vals) {
  std::sort(vals.begin(), vals.end());
  return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
}

}  // namespace detail

/// Generating pair for a graded type-W algebra, built constructively rather
/// than searched: y0 is a torus element whose p-th power iterations span the
/// torus, and x = x_{-1} + x_0 + x_s combines weight vectors of the extreme
/// components with a degree-0 partner of y0. Every step re-verifies the
/// property it relies on and reports its step id on failure.
inline GradedRecipe graded_recipe_pair(const WittAlgebra& W, std::uint64_t seed = 0) {
  const Fq& F = W.L.field();
  const int m = W.m;
  const int d = W.L.dim();
  check(static_cast<int>(F.k()) >= m, "FieldTooSmall",
        "the recipe needs extension degree >= " + std::to_string(m) +
            " for prime-field-independent torus coefficients");

  GradedRecipe out;

  // torus element with F_p-independent coefficients: lambda_j = theta^j
  std::vector<Vec> torus = W.torus();
  std::vector<FqElem> lambda;
  std::uint64_t idx = 1;
  for (int j = 0; j < m; ++j) {
    lambda.push_back(F.elem_from_index(idx));
    idx *= F.p();
  }
  Vec y0 = vec_zero(d);
  for (int j = 0; j < m; ++j)
    y0 = vec_add(F, y0, vec_scale(F, lambda[static_cast<std::size_t>(j)],
                                  torus[static_cast<std::size_t>(j)]));

  // the p-iterations of y0 stay in the torus with Frobenius-twisted
  // coefficients; their span is the torus iff the Moore matrix of the
  // lambdas is invertible
  Matrix moore(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      FqElem v = lambda[static_cast<std::size_t>(j)];
      for (int t = 0; t < i; ++t) v = F.frobenius(v);
      moore.at(i, j) = v;
    }
  check(rank(F, moore) == m, "RecipeStepFailed",
        "torus-span: the p-iterations of y0 do not span the torus");
  // certify that the coefficient-level iteration really is the p-th power:
  // ad(sum lambda_j^p h_j) must equal (ad y0)^p on the whole algebra
  Vec y0p = vec_zero(d);
  for (int j = 0; j < m; ++j)
    y0p = vec_add(F, y0p, vec_scale(F, F.frobenius(lambda[static_cast<std::size_t>(j)]),
                                    torus[static_cast<std::size_t>(j)]));
  check(W.L.ad(y0p) == mat_pow(F, W.L.ad(y0), F.p()), "RecipeStepFailed",
        "torus-span: the torus iteration is not the adjoint p-th power");

  // weight vectors in the extreme components with distinct weights
  int im1 = -1, is = -1;
  for (int u = 0; u < d && im1 < 0; ++u)
    if (W.L.degrees()[static_cast<std::size_t>(u)] == -1) im1 = u;
  for (int u = 0; u < d; ++u) {
    if (W.L.degrees()[static_cast<std::size_t>(u)] != W.s) continue;
    if (W.basis_weight(u) != W.basis_weight(im1)) {
      is = u;
      break;
    }
  }
  check(im1 >= 0 && is >= 0, "RecipeStepFailed",
        "weights: no extreme weight vectors with distinct weights");
  out.alpha_m1 = W.basis_weight(im1);
  out.alpha_s = W.basis_weight(is);
  Vec xm1 = unit_vec(d, im1);
  Vec xs = unit_vec(d, is);

  // degree-0 partner of y0: the all-off-diagonal element plus one diagonal
  // unit usually works; fall back to seeded random degree-0 elements
  std::vector<int> deg0;
  for (int u = 0; u < d; ++u)
    if (W.L.degrees()[static_cast<std::size_t>(u)] == 0) deg0.push_back(u);
  auto matrix_unit = [&](int i, int j) {
    MultiIndex eps(static_cast<std::size_t>(m), 0);
    eps[static_cast<std::size_t>(i)] = 1;
    return W.basis_index(W.O.index_of(eps), j);
  };
  Vec x0 = vec_zero(d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) x0[static_cast<std::size_t>(matrix_unit(i, j))] = F.one();
  x0[static_cast<std::size_t>(matrix_unit(0, 0))] = F.one();
  const int dim0 = static_cast<int>(deg0.size());
  bool have_x0 = generated_subalgebra(W.L, x0, y0).space.dim() == dim0;
  Rng rng(seed ^ 0x67656e72ULL);
  for (int attempt = 0; attempt < 40 && !have_x0; ++attempt) {
    x0 = vec_zero(d);
    for (int u : deg0) x0[static_cast<std::size_t>(u)] = random_elem(F, rng);
    have_x0 = generated_subalgebra(W.L, x0, y0).space.dim() == dim0;
  }
  check(have_x0, "RecipeStepFailed", "x0-partner: no degree-0 partner of y0 found");

  // separation: a torus element taking pairwise distinct values on the
  // degree-0 weights together with the two extreme weights
  out.phi = torus_weights(W, 0);
  out.phi.push_back(out.alpha_m1);
  out.phi.push_back(out.alpha_s);
  std::sort(out.phi.begin(), out.phi.end());
  out.phi.erase(std::unique(out.phi.begin(), out.phi.end()), out.phi.end());
  check(static_cast<std::size_t>(dim0) == static_cast<std::size_t>(m) * static_cast<std::size_t>(m)
            && out.phi.size() == torus_weights(W, 0).size() + 2,
        "RecipeStepFailed", "weights: an extreme weight collides with a degree-0 weight");
  bool separated = false;
  Vec mu;
  std::vector<FqElem> values;
  auto try_mu = [&](Vec cand_mu) {
    values.clear();
    for (const MultiIndex& w : out.phi)
      values.push_back(detail::weight_value(F, w, cand_mu));
    if (detail::pairwise_distinct(values)) {
      mu = std::move(cand_mu);
      separated = true;
    }
  };
  for (std::uint64_t cand = 1; cand < 4000 && !separated; ++cand)
    try_mu(vec_from_counter(F, m, cand));
  // the counter scan only reaches the later torus coordinates once the
  // earlier digits wrap, so on larger fields top up with seeded random
  // candidates; a random element separates a fixed weight set with
  // probability at least 1 - |phi|^2 / q
  Rng sep_rng(seed ^ 0x73657061ULL);
  for (int attempt = 0; attempt < 200 && !separated; ++attempt)
    try_mu(random_vec(F, m, sep_rng));
  check(separated, "RecipeStepFailed", "separation: no separating torus element found");
  out.separator = mu;
  out.separated_values = values;

  Vec x = vec_add(F, vec_add(F, xm1, x0), xs);
  GeneratedSubalgebra got = generated_subalgebra(W.L, x, y0);
  check(got.space.dim() == d, "RecipeStepFailed",
        "closure: the recipe pair generated a proper subalgebra of dimension " +
            std::to_string(got.space.dim()));

  out.y0 = y0;
  out.xm1 = std::move(xm1);
  out.x0 = std::move(x0);
  out.xs = std::move(xs);
  out.cert = {W.L.name(), F.p(), F.k(), std::move(x), std::move(y0),
              d,          "graded-recipe", seed};
  return out;
}

// ---------------------------------------------------------------------------
// Zassenhaus partner

/// Partner certificate for W(1, n) plus the data that selected it: the
/// scalar alpha with det(M_alpha) != 0, the extension multiplier where it
/// was found, and the interpolated determinant polynomial (empty for the
/// top-component shortcut or when the field has too few points).
struct ZassenhausPartner {
  PairCertificate cert;
  FqElem alpha{0};
  int ext_mult = 1;
  bool top_shortcut = false;
  std::vector<FqElem> det_poly;
};

inline FqElem poly_eval(const Fq& F, const std::vector<FqElem>& coeffs, FqElem at) {
  FqElem v = F.zero();
  for (std::size_t i = coeffs.size(); i-- > 0;) v = F.add(F.mul(v, at), coeffs[i]);
  return v;
}

/// Lagrange interpolation through distinct points; returns dense
/// coefficients, constant term first.
inline std::vector<FqElem> lagrange_interpolate(const Fq& F, const std::vector<FqElem>& xs,
                                                const std::vector<FqElem>& ys) {
  check(xs.size() == ys.size() && !xs.empty(), "SpecMismatch", "interpolation size mismatch");
  std::vector<FqElem> acc(xs.size(), F.zero());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<FqElem> num{F.one()};
    FqElem den = F.one();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      num.insert(num.begin(), F.zero());
      for (std::size_t t = 0; t + 1 < num.size(); ++t)
        num[t] = F.sub(num[t], F.mul(xs[j], num[t + 1]));
      den = F.mul(den, F.sub(xs[i], xs[j]));
    }
    FqElem scale = F.div(ys[i], den);
    for (std::size_t t = 0; t < num.size(); ++t)
      acc[t] = F.add(acc[t], F.mul(scale, num[t]));
  }
  while (acc.size() > 1 && acc.back().is_zero()) acc.pop_back();
  return acc;
}

/// det of the (s+2) x (s+2) matrix whose rows are y_alpha, x, and the
/// iterated brackets (ad y_alpha)^j (x) for j = 1..s; nonzero exactly when
/// the pair (x, y_alpha) generates W(1, n).
inline FqElem partner_matrix_det(const LieAlgebra& L, const Vec& x, FqElem alpha) {
  const Fq& F = L.field();
  int d = L.dim();
  Vec y = unit_vec(d, 0);
  y[static_cast<std::size_t>(d - 1)] = alpha;
  Matrix M(d, d);
  for (int c = 0; c < d; ++c) M.at(0, c) = y[static_cast<std::size_t>(c)];
  Vec row = x;
  for (int r = 1; r < d; ++r) {
    for (int c = 0; c < d; ++c) M.at(r, c) = row[static_cast<std::size_t>(c)];
    row = L.bracket(y, row);
  }
  return det(F, M);
}

/// Partner for a nonzero x in W(1, n). Top-component x pairs with e_{-1}
/// directly; otherwise y_alpha = e_{-1} + alpha e_s, where alpha is the
/// first field element with det(M_alpha) != 0, searched through extensions
/// of the base field up to total degree 4. The determinant is materialized
/// as a polynomial in alpha by interpolation whenever the field has enough
/// points, and the chosen alpha is cross-checked against a direct
/// determinant evaluation; the certificate itself always comes from the
/// closure.
inline ZassenhausPartner zassenhaus_partner(const WittAlgebra& Z, const Vec& x) {
  check(Z.m == 1, "SpecMismatch", "partner construction needs W(1, n)");
  check(!vec_is_zero(x), "SpecMismatch", "partner construction needs x != 0");
  const Fq& F = Z.L.field();
  const int d = Z.L.dim();
  const int s = Z.s;

  bool top = true;
  for (int i = 0; i + 1 < d; ++i)
    if (!x[static_cast<std::size_t>(i)].is_zero()) top = false;
  if (top) {
    Vec y = unit_vec(d, 0);
    GeneratedSubalgebra got = generated_subalgebra(Z.L, x, y);
    check(got.space.dim() == d, "SpecMismatch", "the top-component partner failed to certify");
    ZassenhausPartner out;
    out.top_shortcut = true;
    out.cert = {Z.L.name(), F.p(), F.k(), x, std::move(y), d, "zassenhaus", 0};
    return out;
  }

  std::string searched;
  for (std::uint32_t mult = 1; F.k() * mult <= 4; ++mult) {
    Fq K = mult == 1 ? F : Fq::ext(F.p(), F.k() * mult);
    WittAlgebra ZK = mult == 1 ? Z : build_zassenhaus(K, Z.n[0], std::max(250, d));
    Vec xK = x;
    if (mult > 1) xK = embed_vec(FieldEmbedding(F, K), x);
    if (!searched.empty()) searched += ", ";
    searched += K.describe();

    std::vector<FqElem> poly;
    std::optional<FqElem> alpha;
    if (K.q() >= static_cast<std::uint64_t>(s) + 3) {
      std::vector<FqElem> pts, vals;
      for (int i = 0; i < s + 3; ++i) {
        pts.push_back(K.elem_from_index(static_cast<std::uint64_t>(i)));
        vals.push_back(partner_matrix_det(ZK.L, xK, pts.back()));
      }
      poly = lagrange_interpolate(K, pts, vals);
      for (std::uint64_t i = 0; i < K.q() && !alpha; ++i) {
        FqElem a = K.elem_from_index(i);
        if (!poly_eval(K, poly, a).is_zero()) alpha = a;
      }
      if (alpha) {
        FqElem direct = partner_matrix_det(ZK.L, xK, *alpha);
        check(direct == poly_eval(K, poly, *alpha) && !direct.is_zero(), "SpecMismatch",
              "interpolated determinant disagrees with direct evaluation");
      }
    } else {
      for (std::uint64_t i = 0; i < K.q() && !alpha; ++i) {
        FqElem a = K.elem_from_index(i);
        if (!partner_matrix_det(ZK.L, xK, a).is_zero()) alpha = a;
      }
    }
    if (!alpha) continue;

    Vec y = unit_vec(d, 0);
    y[static_cast<std::size_t>(d - 1)] = *alpha;
    GeneratedSubalgebra got = generated_subalgebra(ZK.L, xK, y);
    check(got.space.dim() == d, "SpecMismatch",
          "nonzero determinant did not certify through the closure");
    ZassenhausPartner out;
    out.alpha = *alpha;
    out.ext_mult = static_cast<int>(mult);
    out.det_poly = std::move(poly);
    out.cert = {Z.L.name(), K.p(), K.k(), std::move(xK), std::move(y), d, "zassenhaus", 0};
    return out;
  }
  fail("NoAlphaInSearchedExtensions",
       "det(M_alpha) vanished identically over " + searched + " for this x");
}

// ---------------------------------------------------------------------------
// Obstruction report for W(m, n), m >= 2

/// Per-sample record: the invariant k of y (computed in the W(|n|, 1)
/// envelope), the dimensions of the generated subalgebra and its derived
/// subalgebra, and whether the routed envelope assertions held.
struct ObstructionSample {
  Vec y;
  int k = 0;
  int closure_dim = 0;
  int derived_dim = 0;
  bool envelope_ok = false;
  std::string detail;
};

struct ObstructionReport {
  std::string algebra;
  Vec x;
  int dim_w = 0;
  int bound = 0;  // p^{|n|}
  std::uint64_t seed = 0;
  std::vector<ObstructionSample> samples;
  bool all_bounded = true;
  bool none_generates = true;
  bool envelopes_hold = true;
};

/// Shared data for probing many y against one top-component x: the W(|n|, 1)
/// envelope, the transport matrix into it, and the image of x.
struct ObstructionContext {
  WittAlgebra target;
  Matrix map;
  bool trivial;  // source already is W(m, 1); no transport needed
  Vec xt;
  int bound;
};

inline ObstructionContext obstruction_context(const WittAlgebra& W, const Vec& x) {
  check(W.m >= 2, "SpecMismatch", "the obstruction needs m >= 2");
  check(!vec_is_zero(x), "SpecMismatch", "the obstruction needs x != 0");
  for (int u = 0; u < W.L.dim(); ++u)
    check(x[static_cast<std::size_t>(u)].is_zero() ||
              W.L.degrees()[static_cast<std::size_t>(u)] == W.s,
          "SpecMismatch", "x must lie in the top graded component");
  bool trivial = true;
  for (auto h : W.n)
    if (h != 1) trivial = false;
  if (trivial) return {W, Matrix(0, 0), true, x, W.O.dim()};
  int N = static_cast<int>(mi_length(W.n));
  int target_dim = N;
  for (int i = 0; i < N; ++i) target_dim *= static_cast<int>(W.L.field().p());
  IotaEmbedding io = iota_embed(W, std::max(250, target_dim));
  Vec xt = mat_vec(W.L.field(), io.map, x);
  int bound = io.target.O.dim();
  return {std::move(io.target), std::move(io.map), false, std::move(xt), bound};
}

/// One probe: closure and derived dimensions in the source algebra, then the
/// envelope assertions routed by k in the W(|n|, 1) picture. Violations are
/// recorded, not thrown.
inline ObstructionSample obstruction_probe(const WittAlgebra& W, const ObstructionContext& C,
                                           const Vec& x, const Vec& y) {
  const Fq& F = W.L.field();
  const WittAlgebra& T = C.target;
  ObstructionSample out;
  out.y = y;
  GeneratedSubalgebra gs = generated_subalgebra(W.L, x, y);
  out.closure_dim = gs.space.dim();
  out.derived_dim = generated_derived_subalgebra(W.L, x, y).dim();
  out.envelope_ok = true;
  auto fail_with = [&](const std::string& msg) {
    out.envelope_ok = false;
    if (out.detail.empty()) out.detail = msg;
  };
  try {
    Vec yt = C.trivial ? y : mat_vec(F, C.map, y);
    DependenceData dd = dependence_data(T, yt);
    out.k = dd.k;
    if (dd.k == T.m) {
      DeltaElement de = delta_element(T, C.xt, yt);
      if (!vec_is_zero(T.L.bracket(yt, de.delta))) fail_with("[y, delta] != 0");
      RowSpace env(F, T.L.dim());
      for (int o = 0; o < T.O.dim(); ++o)
        env.insert(witt_module_action(T, unit_vec(T.O.dim(), o), de.delta));
      check(env.dim() <= C.bound, "SpecMismatch", "B delta grew past dim O");
      env.insert(yt);
      for (const Vec& row : gs.space.rows()) {
        Vec rt = C.trivial ? row : mat_vec(F, C.map, row);
        if (!env.contains(rt)) fail_with("closure escaped B delta + F y");
      }
    } else {
      RowSpace H(F, T.L.dim());
      Vec v = C.xt;
      while (H.insert(v)) v = T.L.bracket(yt, v);
      if (H.dim() > C.bound) fail_with("the F[ad y]-module broke the p^{|n|} bound");
      for (const Vec& row : H.rows())
        if (!vec_is_zero(T.L.bracket(C.xt, row))) fail_with("[x, H] != 0");
      RowSpace HY = H;
      HY.insert(yt);
      if (HY.dim() != out.closure_dim) fail_with("closure is not H + F y");
    }
  } catch (const Error& e) {
    fail_with(e.what());
  }
  return out;
}

/// Samples y at random and certifies the negative half of the generation
/// theorem on each: the derived subalgebra of F<x, y> stays within p^{|n|}
/// dimensions, so the pair cannot generate the m p^{|n|}-dimensional algebra.
inline ObstructionReport obstruction_report(const WittAlgebra& W, const Vec& x, int trials,
                                            std::uint64_t seed) {
  ObstructionContext C = obstruction_context(W, x);
  ObstructionReport out;
  out.algebra = W.L.name();
  out.x = x;
  out.dim_w = W.L.dim();
  out.bound = C.bound;
  out.seed = seed;
  Rng base(seed);
  for (int i = 0; i < trials; ++i) {
    Rng rng = base.fork(static_cast<std::uint64_t>(i));
    Vec y = random_vec(W.L.field(), W.L.dim(), rng);
    ObstructionSample s = obstruction_probe(W, C, x, y);
    out.all_bounded = out.all_bounded && s.derived_dim <= out.bound;
    out.none_generates = out.none_generates && s.closure_dim < out.dim_w;
    out.envelopes_hold = out.envelopes_hold && s.envelope_ok;
    out.samples.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1.5-generation search

enum class Strategy { recipe, random, exhaustive };

struct SearchOptions {
  std::uint64_t seed = 0;
  long long budget = 20000;  // y samples per field level (random) or grid cap (exhaustive)
  int max_ext = 4;           // total extension degree the ladder may reach
  std::vector<int> grid;     // exhaustive: basis indices spanning the y grid; empty = all
};

struct SearchOutcome {
  std::optional<PairCertificate> cert;
  std::string searched;
  long long tested = 0;
};

namespace detail {

inline SearchOutcome search_random(const LieAlgebra& L, const Vec& x, const SearchOptions& opt) {
  const Fq& base = L.field();
  SearchOutcome out;
  for (std::uint32_t mult = 1; base.k() * mult <= static_cast<std::uint32_t>(opt.max_ext);
       ++mult) {
    Fq K = mult == 1 ? base : Fq::ext(base.p(), base.k() * mult);
    LieAlgebra LK = mult == 1 ? L : L.with_field(K);
    Vec xK = mult == 1 ? x : embed_vec(FieldEmbedding(base, K), x);
    if (!out.searched.empty()) out.searched += ", ";
    out.searched += "random y over " + K.describe() + "^" + std::to_string(L.dim());
    Rng rng = Rng(opt.seed).fork(mult);
    for (long long i = 0; i < opt.budget; ++i) {
      Vec y = random_vec(K, L.dim(), rng);
      ++out.tested;
      if (generated_subalgebra(LK, xK, y).space.dim() == LK.dim()) {
        out.cert = PairCertificate{L.name(), K.p(), K.k(), xK,     std::move(y),
                                   LK.dim(), "search", opt.seed};
        return out;
      }
    }
  }
  return out;
}

inline SearchOutcome search_exhaustive(const LieAlgebra& L, const Vec& x,
                                       const SearchOptions& opt) {
  const Fq& F = L.field();
  std::vector<int> grid = opt.grid;
  if (grid.empty())
    for (int i = 0; i < L.dim(); ++i) grid.push_back(i);
  double size = 1;
  for (std::size_t i = 0; i < grid.size(); ++i) size *= static_cast<double>(F.q());
  check(size <= static_cast<double>(opt.budget), "BudgetExceeded",
        "exhaustive grid has " + std::to_string(size) + " points; budget is " +
            std::to_string(opt.budget));
  SearchOutcome out;
  out.searched = "exhaustive y in span{";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out.searched += ", ";
    out.searched += L.labels()[static_cast<std::size_t>(grid[i])];
  }
  out.searched += "} over " + F.describe() + " (" + std::to_string(static_cast<long long>(size)) +
                  " points)";
  std::uint64_t n = static_cast<std::uint64_t>(size);
  for (std::uint64_t c = 0; c < n; ++c) {
    Vec coeffs = vec_from_counter(F, static_cast<int>(grid.size()), c);
    Vec y = vec_zero(L.dim());
    for (std::size_t i = 0; i < grid.size(); ++i)
      y[static_cast<std::size_t>(grid[i])] = coeffs[i];
    ++out.tested;
    if (generated_subalgebra(L, x, y).space.dim() == L.dim()) {
      out.cert = PairCertificate{L.name(), F.p(),    F.k(),   x,
                                 std::move(y), L.dim(), "search", opt.seed};
      return out;
    }
  }
  return out;
}

}  // namespace detail

/// Searches a generating partner for x in a classical algebra. The recipe
/// strategy delegates to the constructive partner; random and exhaustive
/// scan y grids and never claim more than the space they searched.
inline SearchOutcome one_and_half_search(const ClassicalAlgebra& g, const Vec& x,
                                         Strategy strategy, const SearchOptions& opt = {}) {
  if (strategy == Strategy::random) return detail::search_random(g.L, x, opt);
  if (strategy == Strategy::exhaustive) return detail::search_exhaustive(g.L, x, opt);
  SearchOutcome out;
  out.searched = "constructive partner (regular torus element through a densifying automorphism)";
  Rng rng(opt.seed);
  try {
    GenerationCertificate c = theoremB_partner(g, x, rng);
    out.tested = 1;
    out.cert = PairCertificate{g.L.name(),
                               c.algebra.L.field().p(),
                               c.algebra.L.field().k(),
                               c.x,
                               c.y,
                               c.algebra.L.dim(),
                               "theoremB",
                               opt.seed};
  } catch (const Error& e) {
    if (e.code() != "SearchBudgetExhausted") throw;
    out.searched += "; " + std::string(e.what());
  }
  return out;
}

/// Same router for type W: the recipe strategy uses the Zassenhaus partner
/// construction when m = 1 and reports NotFound immediately for m > 1,
/// where top-component elements provably lack partners.
inline SearchOutcome one_and_half_search(const WittAlgebra& W, const Vec& x, Strategy strategy,
                                         const SearchOptions& opt = {}) {
  if (strategy == Strategy::random) return detail::search_random(W.L, x, opt);
  if (strategy == Strategy::exhaustive) return detail::search_exhaustive(W.L, x, opt);
  SearchOutcome out;
  if (W.m > 1) {
    out.searched = "recipe route: no partner construction exists for type W with m > 1";
    return out;
  }
  try {
    ZassenhausPartner zp = zassenhaus_partner(W, x);
    out.tested = 1;
    out.searched = "determinant scan over extensions of " + W.L.field().describe();
    out.cert = std::move(zp.cert);
  } catch (const Error& e) {
    if (e.code() != "NoAlphaInSearchedExtensions") throw;
    out.searched = e.what();
  }
  return out;
}

}  // namespace modlie
