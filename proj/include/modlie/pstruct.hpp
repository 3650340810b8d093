#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/liealg.hpp"
#include "modlie/linalg.hpp"
#include "modlie/witt.hpp"

namespace modlie {

/// Unique z with ad z = (ad y)^p, for algebras with trivial center. Equations
/// [z, b_j] = column j of (ad y)^p are stacked until their coefficient rows
/// reach full rank; the candidate is then verified against the whole matrix.
inline Vec p_power(const LieAlgebra& L, const Vec& y) {
  const Fq& F = L.field();
  check(center(L).dim() == 0, "SpecMismatch", "the p-power map needs a trivial center");
  int d = L.dim();
  Matrix target = mat_pow(F, L.ad(y), F.p());
  if (target.is_zero()) return vec_zero(d);

  RowSpace seen(F, d);
  std::vector<Vec> rows;
  std::vector<FqElem> rhs;
  for (int j = 0; j < d && seen.dim() < d; ++j) {
    Matrix adbj = L.ad(unit_vec(d, j));
    for (int r = 0; r < d; ++r) {
      Vec row(static_cast<std::size_t>(d));
      for (int c = 0; c < d; ++c) row[static_cast<std::size_t>(c)] = F.neg(adbj.at(r, c));
      if (!seen.insert(row)) continue;
      rows.push_back(std::move(row));
      rhs.push_back(target.at(r, j));
    }
  }
  check(seen.dim() == d, "SpecMismatch", "adjoint equations did not reach full rank");
  Matrix A(static_cast<int>(rows.size()), d);
  Vec b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < d; ++c) A.at(static_cast<int>(r), c) = rows[r][static_cast<std::size_t>(c)];
    b[r] = rhs[r];
  }
  auto z = solve(F, A, b);
  check(z.has_value(), "NotInAdImage", "(ad y)^p is not an inner derivation");
  check(L.ad(*z) == target, "NotInAdImage", "(ad y)^p is not an inner derivation");
  return *z;
}

/// Sequence y^{[p^j]}, j = 0..bound, with powers[0] = y; for graded algebras
/// the degree-(-1) components are recorded alongside.
struct PPowerData {
  std::vector<Vec> powers;
  std::vector<Vec> deltas;
};

inline PPowerData p_power_sequence(const LieAlgebra& L, const Vec& y, int bound) {
  PPowerData out;
  out.powers.push_back(y);
  for (int j = 1; j <= bound; ++j) out.powers.push_back(p_power(L, out.powers.back()));
  if (L.graded()) {
    for (const Vec& z : out.powers) {
      Vec delta = vec_zero(L.dim());
      for (int i = 0; i < L.dim(); ++i)
        if (L.degrees()[static_cast<std::size_t>(i)] == -1)
          delta[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
      out.deltas.push_back(std::move(delta));
    }
  }
  return out;
}

/// p-th power inside W(m,1) by operator composition: W(m,1) carries every
/// derivation of O(m,1), so the associative power D_y^p stays in W and is the
/// unique element with ad z = (ad y)^p. Reads the coefficient functions off
/// the generators, which is far cheaper than solving adjoint equations.
inline Vec witt_p_power(const WittAlgebra& W, const Vec& y) {
  for (auto hgt : W.n) check(hgt == 1, "SpecMismatch", "operator p-powers need W(m,1)");
  const Fq& F = W.L.field();
  Vec z = vec_zero(W.L.dim());
  for (int i = 0; i < W.m; ++i) {
    MultiIndex eps(static_cast<std::size_t>(W.m), 0);
    eps[static_cast<std::size_t>(i)] = 1;
    Vec f = unit_vec(W.O.dim(), W.O.index_of(eps));
    for (std::uint32_t r = 0; r < F.p(); ++r) f = w_apply(W, y, f);
    for (int o = 0; o < W.O.dim(); ++o)
      z[static_cast<std::size_t>(W.basis_index(o, i))] = f[static_cast<std::size_t>(o)];
  }
  return z;
}

inline PPowerData witt_p_power_sequence(const WittAlgebra& W, const Vec& y, int bound) {
  PPowerData out;
  out.powers.push_back(y);
  for (int j = 1; j <= bound; ++j) out.powers.push_back(witt_p_power(W, out.powers.back()));
  for (const Vec& z : out.powers) {
    Vec delta = vec_zero(W.L.dim());
    for (int i = 0; i < W.L.dim(); ++i)
      if (W.L.degrees()[static_cast<std::size_t>(i)] == -1)
        delta[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)];
    out.deltas.push_back(std::move(delta));
  }
  return out;
}

/// Span of y^{[p^j]} for j >= j0. For j0 at least the semisimple exponent of
/// ad y, the first r powers already span and the next one certifies
/// stabilization, where r is the p-order of ad y.
inline RowSpace toral_span(const LieAlgebra& L, const Vec& y, int j0) {
  const Fq& F = L.field();
  Matrix ady = L.ad(y);
  check(j0 >= semisimple_exponent(F, ady), "SpecMismatch",
        "toral span needs a semisimple starting power");
  int r = p_order(F, ady);
  Vec z = y;
  for (int j = 0; j < j0; ++j) z = p_power(L, z);
  RowSpace T(F, L.dim());
  for (int j = 0; j < r; ++j) {
    T.insert(z);
    z = p_power(L, z);
  }
  check(T.dim() == r, "SpecMismatch", "toral span fell short of the p-order");
  check(r == 0 || T.contains(z), "SpecMismatch", "toral span failed to stabilize");
  return T;
}

/// The invariants attached to y in W(m,1): the least k with the degree-(-1)
/// components delta_0..delta_k of the p-power sequence dependent, the
/// relation alpha with alpha_k = 1, the p-polynomial f(t) = sum alpha_j
/// t^{p^j}, its cofactor g with f(t) = t g(t), and the degree-0 component h
/// of f(y).
struct DependenceData {
  int k;
  std::vector<FqElem> alpha;
  std::vector<FqElem> g;  // dense coefficients, degree p^k - 1
  Vec h;
  PPowerData seq;
};

inline DependenceData dependence_data(const WittAlgebra& W, const Vec& y) {
  for (auto hgt : W.n) check(hgt == 1, "SpecMismatch", "dependence data needs W(m,1)");
  const LieAlgebra& L = W.L;
  const Fq& F = L.field();
  PPowerData seq = witt_p_power_sequence(W, y, W.m);

  DependenceTracker t(F, W.m);
  int k = -1;
  std::vector<FqElem> alpha;
  for (int j = 0; j <= W.m; ++j) {
    Vec compressed(static_cast<std::size_t>(W.m));
    for (int i = 0; i < W.m; ++i)
      compressed[static_cast<std::size_t>(i)] = seq.deltas[static_cast<std::size_t>(j)]
          [static_cast<std::size_t>(W.basis_index(0, i))];
    if (auto comb = t.feed(compressed)) {
      k = j;
      alpha = *comb;
      break;
    }
  }
  check(k >= 0 && k <= W.m, "SpecMismatch", "dependence index escaped its bound");

  Vec fy = vec_zero(L.dim());
  for (int j = 0; j <= k; ++j)
    fy = vec_add(F, fy, vec_scale(F, alpha[static_cast<std::size_t>(j)],
                                  seq.powers[static_cast<std::size_t>(j)]));
  Vec h = vec_zero(L.dim());
  for (int i = 0; i < L.dim(); ++i) {
    int deg = L.degrees()[static_cast<std::size_t>(i)];
    if (deg < 0)
      check(fy[static_cast<std::size_t>(i)].is_zero(), "SpecMismatch",
            "f(y) has a component below degree 0");
    if (deg == 0) h[static_cast<std::size_t>(i)] = fy[static_cast<std::size_t>(i)];
  }

  std::uint64_t pk = 1;
  for (int j = 0; j < k; ++j) pk *= F.p();
  std::vector<FqElem> g(static_cast<std::size_t>(pk), F.zero());
  std::uint64_t e = 1;
  for (int j = 0; j <= k; ++j) {
    g[static_cast<std::size_t>(e - 1)] = alpha[static_cast<std::size_t>(j)];
    e *= F.p();
  }
  return {k, std::move(alpha), std::move(g), std::move(h), std::move(seq)};
}

/// delta = g(ad y)(x) for x in the top component, together with a module
/// witness b solving b * delta = x. The lowest degree in delta is checked to
/// be exactly s - k(p-1).
struct DeltaElement {
  Vec delta;
  Vec witness;
  DependenceData data;
};

inline DeltaElement delta_element(const WittAlgebra& W, const Vec& x, const Vec& y) {
  const LieAlgebra& L = W.L;
  const Fq& F = L.field();
  check(!vec_is_zero(x), "SpecMismatch", "delta element needs a nonzero x");
  for (int i = 0; i < L.dim(); ++i)
    check(x[static_cast<std::size_t>(i)].is_zero() ||
              L.degrees()[static_cast<std::size_t>(i)] == W.s,
          "SpecMismatch", "delta element needs x in the top component");

  DependenceData dd = dependence_data(W, y);
  Vec delta = vec_zero(L.dim());
  Vec cur = x;
  for (std::size_t e = 0; e < dd.g.size(); ++e) {
    if (!dd.g[e].is_zero()) delta = vec_add(F, delta, vec_scale(F, dd.g[e], cur));
    if (e + 1 < dd.g.size()) cur = L.bracket(y, cur);
  }

  int lowest = W.s + 1;
  for (int i = 0; i < L.dim(); ++i)
    if (!delta[static_cast<std::size_t>(i)].is_zero())
      lowest = std::min(lowest, L.degrees()[static_cast<std::size_t>(i)]);
  check(lowest == W.s - dd.k * static_cast<int>(F.p() - 1), "SpecMismatch",
        "delta landed at the wrong filtration level");

  Matrix action(L.dim(), W.O.dim());
  for (int o = 0; o < W.O.dim(); ++o) {
    Vec col = witt_module_action(W, unit_vec(W.O.dim(), o), delta);
    for (int r = 0; r < L.dim(); ++r) action.at(r, o) = col[static_cast<std::size_t>(r)];
  }
  auto witness = solve(F, action, x);
  check(witness.has_value(), "SpecMismatch", "x is not a module multiple of delta");
  return {std::move(delta), std::move(*witness), std::move(dd)};
}

/// Base-p digits (little-endian) and their sum.
struct PAry {
  std::vector<std::uint32_t> digits;
  std::uint32_t length;
};

inline PAry p_ary(std::uint32_t p, std::uint64_t a) {
  PAry out{{}, 0};
  while (a > 0) {
    out.digits.push_back(static_cast<std::uint32_t>(a % p));
    out.length += out.digits.back();
    a /= p;
  }
  return out;
}

/// Views a graded algebra through its induced descending filtration
/// L_(k) = direct sum of the components of degree >= k.
class FiltrationView {
public:
  explicit FiltrationView(const LieAlgebra& L) : L_(&L) {
    check(L.graded(), "SpecMismatch", "filtration view needs a graded algebra");
  }

  const LieAlgebra& algebra() const { return *L_; }

  /// Largest k with x in L_(k): the lowest degree in the support of x.
  int nu(const Vec& x) const {
    check(!vec_is_zero(x), "SpecMismatch", "nu is undefined at zero");
    int best = 0;
    bool found = false;
    for (int i = 0; i < L_->dim(); ++i)
      if (!x[static_cast<std::size_t>(i)].is_zero()) {
        int d = L_->degrees()[static_cast<std::size_t>(i)];
        if (!found || d < best) best = d;
        found = true;
      }
    return best;
  }

  /// Homogeneous component of x in degree nu(x); zero stays zero.
  Vec gr(const Vec& x) const {
    if (vec_is_zero(x)) return x;
    int k = nu(x);
    Vec out = vec_zero(L_->dim());
    for (int i = 0; i < L_->dim(); ++i)
      if (L_->degrees()[static_cast<std::size_t>(i)] == k)
        out[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    return out;
  }

private:
  const LieAlgebra* L_;
};

/// p-orders of h and of its graded image. Equality is asserted whenever
/// nu(h) >= 0; below the filtration zero it is only reported, and the
/// below_filtration_zero flag marks the case.
struct OrdComparison {
  int ord_h;
  int ord_gr_h;
  bool equal;
  bool below_filtration_zero;
};

inline OrdComparison ord_compare(const FiltrationView& V, const Vec& h) {
  const LieAlgebra& L = V.algebra();
  const Fq& F = L.field();
  check(!vec_is_zero(h), "SpecMismatch", "ord_compare needs a nonzero element");
  int oh = p_order(F, L.ad(h));
  int og = p_order(F, L.ad(V.gr(h)));
  bool below = V.nu(h) < 0;
  if (!below)
    check(oh == og, "SpecMismatch", "p-order changed under the graded projection");
  return {oh, og, oh == og, below};
}

}  // namespace modlie
