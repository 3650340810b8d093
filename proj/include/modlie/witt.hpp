#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/liealg.hpp"
#include "modlie/linalg.hpp"

namespace modlie {

using MultiIndex = std::vector<std::uint32_t>;

inline std::uint32_t mi_length(const MultiIndex& a) {
  std::uint32_t s = 0;
  for (auto v : a) s += v;
  return s;
}

/// Binomial coefficient mod p by Lucas' theorem; zero outside 0 <= b <= a.
inline std::uint32_t lucas_binom(std::uint32_t p, std::int64_t a, std::int64_t b) {
  if (b < 0 || b > a) return 0;
  std::uint64_t r = 1;
  while (a > 0 || b > 0) {
    std::uint32_t ad = static_cast<std::uint32_t>(a % p), bd = static_cast<std::uint32_t>(b % p);
    if (bd > ad) return 0;
    std::uint64_t d = 1;
    for (std::uint32_t t = 0; t < bd; ++t) d = d * (ad - t) / (t + 1);
    r = r * (d % p) % p;
    a /= p;
    b /= p;
  }
  return static_cast<std::uint32_t>(r);
}

/// Divided power algebra O(m, n): basis x^(alpha) for 0 <= alpha <= tau with
/// tau_i = p^{n_i} - 1, and x^(a) x^(b) = binom(a+b, a) x^(a+b), truncated.
/// Basis indices are mixed-radix numbers with variable 1 fastest.
class DividedPowerAlgebra {
public:
  DividedPowerAlgebra(const Fq& F, MultiIndex heights) : F_(F), n_(std::move(heights)) {
    check(!n_.empty(), "SpecMismatch", "divided power algebra needs at least one variable");
    std::uint64_t d = 1;
    for (auto h : n_) {
      check(h >= 1, "SpecMismatch", "variable heights must be at least 1");
      stride_.push_back(d);
      std::uint64_t radix = 1;
      for (std::uint32_t t = 0; t < h; ++t) radix *= F_.p();
      tau_.push_back(static_cast<std::uint32_t>(radix - 1));
      d *= radix;
      check(d <= 1u << 20, "DimensionCapExceeded", "divided power algebra above desk scale");
    }
    dim_ = static_cast<int>(d);
  }

  const Fq& field() const { return F_; }
  int vars() const { return static_cast<int>(n_.size()); }
  const MultiIndex& heights() const { return n_; }
  const MultiIndex& tau() const { return tau_; }
  int dim() const { return dim_; }
  int one_index() const { return 0; }
  int tau_index() const { return dim_ - 1; }

  int index_of(const MultiIndex& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < n_.size(); ++i) {
      check(a[i] <= tau_[i], "SpecMismatch", "exponent exceeds the truncation bound");
      idx += a[i] * stride_[i];
    }
    return static_cast<int>(idx);
  }

  MultiIndex alpha_of(int idx) const {
    MultiIndex a(n_.size());
    std::uint64_t rem = static_cast<std::uint64_t>(idx);
    for (std::size_t i = 0; i < n_.size(); ++i) {
      a[i] = static_cast<std::uint32_t>(rem % (tau_[i] + 1));
      rem /= tau_[i] + 1;
    }
    return a;
  }

  int degree(int idx) const { return static_cast<int>(mi_length(alpha_of(idx))); }

  /// x^(a) * x^(b) as (basis index, coefficient); coefficient 0 encodes zero
  /// (either truncation past tau or a vanishing binomial).
  std::pair<int, std::uint32_t> mul_basis(int a, int b) const {
    MultiIndex av = alpha_of(a), bv = alpha_of(b);
    std::uint64_t coeff = 1;
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < n_.size(); ++i) {
      std::uint32_t s = av[i] + bv[i];
      if (s > tau_[i]) return {0, 0};
      coeff = coeff * lucas_binom(F_.p(), s, av[i]) % F_.p();
      idx += s * stride_[i];
    }
    return {static_cast<int>(idx), static_cast<std::uint32_t>(coeff)};
  }

private:
  Fq F_;
  MultiIndex n_, tau_;
  std::vector<std::uint64_t> stride_;
  int dim_ = 0;
};

inline Vec o_one(const DividedPowerAlgebra& A) { return unit_vec(A.dim(), A.one_index()); }

inline Vec o_mul(const DividedPowerAlgebra& A, const Vec& u, const Vec& v) {
  const Fq& F = A.field();
  Vec out = vec_zero(A.dim());
  for (int a = 0; a < A.dim(); ++a) {
    if (u[static_cast<std::size_t>(a)].is_zero()) continue;
    for (int b = 0; b < A.dim(); ++b) {
      if (v[static_cast<std::size_t>(b)].is_zero()) continue;
      auto [k, c] = A.mul_basis(a, b);
      if (c == 0) continue;
      out[static_cast<std::size_t>(k)] =
          F.add(out[static_cast<std::size_t>(k)],
                F.mul(F.from_int(c), F.mul(u[static_cast<std::size_t>(a)],
                                           v[static_cast<std::size_t>(b)])));
    }
  }
  return out;
}

/// Witt algebra W(m, n) on the basis x^(alpha) D_j, frozen into structure
/// constants from the derivation formula
///   [x^(a) D_i, x^(b) D_j] = binom(a+b-e_i, a) x^(a+b-e_i) D_j
///                          - binom(a+b-e_j, b) x^(a+b-e_j) D_i.
struct WittAlgebra {
  LieAlgebra L;
  DividedPowerAlgebra O;
  int m;
  MultiIndex n;
  int s;  // top degree; the grading runs -1 .. s

  int basis_index(int o_idx, int j) const { return o_idx * m + j; }
  int o_index(int basis_idx) const { return basis_idx / m; }
  int var_of(int basis_idx) const { return basis_idx % m; }

  /// Standard torus x^(e_i) D_i, i = 1..m.
  std::vector<Vec> torus() const {
    std::vector<Vec> t;
    for (int i = 0; i < m; ++i) {
      MultiIndex e(static_cast<std::size_t>(m), 0);
      e[static_cast<std::size_t>(i)] = 1;
      t.push_back(unit_vec(L.dim(), basis_index(O.index_of(e), i)));
    }
    return t;
  }

  /// Weight of a basis element under the standard torus: entry i of the
  /// weight of x^(alpha) D_j is alpha_i - delta_{ij} mod p.
  MultiIndex basis_weight(int basis_idx) const {
    MultiIndex a = O.alpha_of(o_index(basis_idx));
    std::uint32_t p = L.field().p();
    int j = var_of(basis_idx);
    MultiIndex w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      w[static_cast<std::size_t>(i)] =
          (a[static_cast<std::size_t>(i)] + (i == j ? p - 1 : 0)) % p;
    return w;
  }
};

inline std::string witt_label(const MultiIndex& a, int j) {
  std::string s = "x^(";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s + ")D_" + std::to_string(j + 1);
}

inline WittAlgebra build_witt(const Fq& F, int m, MultiIndex n, int cap = 250) {
  check(F.p() > 3, "UnsupportedType", "characteristic must exceed 3");
  check(m >= 1 && static_cast<std::size_t>(m) == n.size(), "SpecMismatch",
        "W(m, n) needs one height per variable");
  DividedPowerAlgebra O(F, n);
  std::uint64_t dim = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(O.dim());
  check(dim <= static_cast<std::uint64_t>(cap), "DimensionCapExceeded",
        "W(" + std::to_string(m) + ", |n|=" + std::to_string(mi_length(n)) + ") has dimension " +
            std::to_string(dim) + " above the cap " + std::to_string(cap));

  std::string name = "W:" + std::to_string(m) + ":";
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) name += ',';
    name += std::to_string(n[i]);
  }
  LieAlgebraBuilder b(F, static_cast<int>(dim));
  b.set_name(name);
  for (int o = 0; o < O.dim(); ++o) {
    MultiIndex a = O.alpha_of(o);
    for (int j = 0; j < m; ++j) {
      b.set_label(o * m + j, witt_label(a, j));
      b.set_degree(o * m + j, static_cast<int>(mi_length(a)) - 1);
    }
  }

  // one derivation term: x^(a) * D_i(x^(b)) scaling D_j
  auto term = [&](const MultiIndex& a, const MultiIndex& b, int i) -> std::pair<int, std::uint32_t> {
    if (b[static_cast<std::size_t>(i)] == 0) return {0, 0};
    MultiIndex s = b;
    s[static_cast<std::size_t>(i)] -= 1;
    std::uint64_t coeff = 1;
    std::uint64_t idx = 0;
    for (int t = 0; t < m; ++t) {
      std::uint32_t sum = a[static_cast<std::size_t>(t)] + s[static_cast<std::size_t>(t)];
      if (sum > O.tau()[static_cast<std::size_t>(t)]) return {0, 0};
      coeff = coeff * lucas_binom(F.p(), sum, a[static_cast<std::size_t>(t)]) % F.p();
    }
    MultiIndex full = s;
    for (int t = 0; t < m; ++t) full[static_cast<std::size_t>(t)] += a[static_cast<std::size_t>(t)];
    idx = static_cast<std::uint64_t>(O.index_of(full));
    return {static_cast<int>(idx), static_cast<std::uint32_t>(coeff)};
  };

  for (int u = 0; u < static_cast<int>(dim); ++u)
    for (int v = u + 1; v < static_cast<int>(dim); ++v) {
      int oa = u / m, i = u % m, ob = v / m, j = v % m;
      MultiIndex a = O.alpha_of(oa), bb = O.alpha_of(ob);
      auto [k1, c1] = term(a, bb, i);
      if (c1 != 0) b.add(u, v, k1 * m + j, c1);
      auto [k2, c2] = term(bb, a, j);
      if (c2 != 0) b.add(u, v, k2 * m + i, -static_cast<std::int64_t>(c2));
    }

  int s = static_cast<int>(mi_length(O.tau())) - 1;
  return {b.build(), std::move(O), m, std::move(n), s};
}

/// Zassenhaus presentation of W(1, n): basis e_{-1} .. e_{p^n - 2} with
/// [e_i, e_j] = (binom(i+j+1, j) - binom(i+j+1, i)) e_{i+j}. Brackets that
/// would leave the range must have vanishing coefficients; this is asserted.
inline WittAlgebra build_zassenhaus(const Fq& F, std::uint32_t n, int cap = 250) {
  check(F.p() > 3, "UnsupportedType", "characteristic must exceed 3");
  check(n >= 1, "SpecMismatch", "Zassenhaus height must be at least 1");
  DividedPowerAlgebra O(F, {n});
  int dim = O.dim();
  check(dim <= cap, "DimensionCapExceeded",
        "Zass(" + std::to_string(n) + ") has dimension " + std::to_string(dim) +
            " above the cap " + std::to_string(cap));
  int s = dim - 2;
  LieAlgebraBuilder b(F, dim);
  b.set_name("Zass:" + std::to_string(n));
  for (int t = 0; t < dim; ++t) {
    b.set_label(t, "e" + std::to_string(t - 1));
    b.set_degree(t, t - 1);
  }
  std::uint32_t p = F.p();
  for (int u = 0; u < dim; ++u)
    for (int v = u + 1; v < dim; ++v) {
      std::int64_t i = u - 1, j = v - 1;
      std::int64_t c = (lucas_binom(p, i + j + 1, j) + p - lucas_binom(p, i + j + 1, i)) % p;
      if (i + j > s) {
        check(c == 0, "SpecMismatch", "Zassenhaus truncation disagrees with the binomials");
        continue;
      }
      if (c != 0) b.add(u, v, static_cast<int>(i + j) + 1, c);
    }
  return {b.build(), std::move(O), 1, {n}, s};
}

/// Derivation action of a W(m, n) element on an O(m, n) element.
inline Vec w_apply(const WittAlgebra& W, const Vec& d, const Vec& f) {
  const Fq& F = W.L.field();
  Vec out = vec_zero(W.O.dim());
  for (int u = 0; u < W.L.dim(); ++u) {
    if (d[static_cast<std::size_t>(u)].is_zero()) continue;
    MultiIndex a = W.O.alpha_of(W.o_index(u));
    int i = W.var_of(u);
    for (int o = 0; o < W.O.dim(); ++o) {
      if (f[static_cast<std::size_t>(o)].is_zero()) continue;
      MultiIndex bb = W.O.alpha_of(o);
      if (bb[static_cast<std::size_t>(i)] == 0) continue;
      bb[static_cast<std::size_t>(i)] -= 1;
      bool ok = true;
      std::uint64_t coeff = 1;
      for (int t = 0; t < W.m && ok; ++t) {
        std::uint32_t sum = a[static_cast<std::size_t>(t)] + bb[static_cast<std::size_t>(t)];
        if (sum > W.O.tau()[static_cast<std::size_t>(t)]) ok = false;
        coeff = coeff * lucas_binom(F.p(), sum, a[static_cast<std::size_t>(t)]) % F.p();
        bb[static_cast<std::size_t>(t)] = sum;
      }
      if (!ok || coeff == 0) continue;
      int k = W.O.index_of(bb);
      out[static_cast<std::size_t>(k)] =
          F.add(out[static_cast<std::size_t>(k)],
                F.mul(F.from_int(static_cast<std::int64_t>(coeff)),
                      F.mul(d[static_cast<std::size_t>(u)],
                                               f[static_cast<std::size_t>(o)])));
    }
  }
  return out;
}

/// O(m, n)-module action f * (g D_j) = (f g) D_j.
inline Vec witt_module_action(const WittAlgebra& W, const Vec& f, const Vec& w) {
  const Fq& F = W.L.field();
  Vec out = vec_zero(W.L.dim());
  for (int u = 0; u < W.L.dim(); ++u) {
    if (w[static_cast<std::size_t>(u)].is_zero()) continue;
    int j = W.var_of(u);
    for (int o = 0; o < W.O.dim(); ++o) {
      if (f[static_cast<std::size_t>(o)].is_zero()) continue;
      auto [k, c] = W.O.mul_basis(o, W.o_index(u));
      if (c == 0) continue;
      int t = W.basis_index(k, j);
      out[static_cast<std::size_t>(t)] =
          F.add(out[static_cast<std::size_t>(t)],
                F.mul(F.from_int(c), F.mul(f[static_cast<std::size_t>(o)],
                                           w[static_cast<std::size_t>(u)])));
    }
  }
  return out;
}

struct IotaEmbedding {
  WittAlgebra target;  // W(|n|, 1)
  Matrix map;          // target.dim x src.dim
};

/// Embedding of W(m, n) into W(|n|, 1): transport derivations through the
/// algebra isomorphism O(m, n) -> O(|n|, 1) that splits each exponent into
/// its p-adic digits, one target variable per digit position. The image of
/// x^(a) D_i collects, for each digit position j of variable i, the term
///   binom(a + (p^j - 1) e_i, a) x^(a + (p^j - 1) e_i) d/d y_{i,j}.
/// Injectivity and bracket preservation are verified on all basis pairs.
inline IotaEmbedding iota_embed(const WittAlgebra& src, int cap = 250) {
  const Fq& F = src.L.field();
  std::uint32_t N = mi_length(src.n);
  WittAlgebra target = build_witt(F, static_cast<int>(N), MultiIndex(N, 1), cap);

  std::vector<int> var_offset;  // target variable id of digit 0 of source variable i
  int off = 0;
  for (int i = 0; i < src.m; ++i) {
    var_offset.push_back(off);
    off += static_cast<int>(src.n[static_cast<std::size_t>(i)]);
  }
  auto digit_index = [&](const MultiIndex& mu) {
    MultiIndex c(N, 0);
    for (int i = 0; i < src.m; ++i) {
      std::uint32_t rem = mu[static_cast<std::size_t>(i)];
      for (std::uint32_t j = 0; j < src.n[static_cast<std::size_t>(i)]; ++j) {
        c[static_cast<std::size_t>(var_offset[static_cast<std::size_t>(i)] + static_cast<int>(j))] =
            rem % F.p();
        rem /= F.p();
      }
    }
    return target.O.index_of(c);
  };

  Matrix map(target.L.dim(), src.L.dim());
  for (int u = 0; u < src.L.dim(); ++u) {
    MultiIndex a = src.O.alpha_of(src.o_index(u));
    int i = src.var_of(u);
    std::uint64_t step = 1;
    for (std::uint32_t j = 0; j < src.n[static_cast<std::size_t>(i)]; ++j) {
      MultiIndex mu = a;
      mu[static_cast<std::size_t>(i)] += static_cast<std::uint32_t>(step) - 1;
      if (mu[static_cast<std::size_t>(i)] <= src.O.tau()[static_cast<std::size_t>(i)]) {
        std::uint32_t coeff = lucas_binom(F.p(), mu[static_cast<std::size_t>(i)],
                                          a[static_cast<std::size_t>(i)]);
        if (coeff != 0) {
          int row = target.basis_index(digit_index(mu),
                                       var_offset[static_cast<std::size_t>(i)] + static_cast<int>(j));
          map.at(row, u) = F.from_int(coeff);
        }
      }
      step *= F.p();
    }
  }

  check(rank(F, map) == src.L.dim(), "SpecMismatch", "embedding is not injective");
  for (int u = 0; u < src.L.dim(); ++u)
    for (int v = u + 1; v < src.L.dim(); ++v) {
      Vec lhs = mat_vec(F, map, src.L.bracket_basis(u, v));
      Vec rhs = target.L.bracket(mat_vec(F, map, unit_vec(src.L.dim(), u)),
                                 mat_vec(F, map, unit_vec(src.L.dim(), v)));
      check(lhs == rhs, "SpecMismatch", "embedding failed the bracket check");
    }
  return {std::move(target), std::move(map)};
}

/// Weight set of the standard torus on the homogeneous component of degree k,
/// sorted and deduplicated.
inline std::vector<MultiIndex> torus_weights(const WittAlgebra& W, int k) {
  std::vector<MultiIndex> out;
  for (int u = 0; u < W.L.dim(); ++u)
    if (W.L.degrees()[static_cast<std::size_t>(u)] == k) out.push_back(W.basis_weight(u));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Dependence test for degree-1 elements of O(m, 1) through the product
/// xi_1^{p-1} ... xi_k^{p-1}, which vanishes exactly on dependent families;
/// cross-checked against the rank of the coefficient matrix.
inline bool dp_product_dependent(const DividedPowerAlgebra& A, const std::vector<Vec>& xis) {
  const Fq& F = A.field();
  for (auto h : A.heights())
    check(h == 1, "SpecMismatch", "the product criterion needs O(m, 1)");
  Matrix coeffs(static_cast<int>(xis.size()), A.vars());
  for (std::size_t r = 0; r < xis.size(); ++r)
    for (int o = 0; o < A.dim(); ++o) {
      if (xis[r][static_cast<std::size_t>(o)].is_zero()) continue;
      check(A.degree(o) == 1, "SpecMismatch", "the product criterion needs degree-1 elements");
      MultiIndex a = A.alpha_of(o);
      for (int i = 0; i < A.vars(); ++i)
        if (a[static_cast<std::size_t>(i)] == 1) coeffs.at(static_cast<int>(r), i) = xis[r][static_cast<std::size_t>(o)];
    }
  Vec prod = o_one(A);
  for (const Vec& xi : xis)
    for (std::uint32_t t = 0; t + 1 < F.p(); ++t) prod = o_mul(A, prod, xi);
  bool dependent = rank(F, coeffs) < static_cast<int>(xis.size());
  check(vec_is_zero(prod) == dependent, "SpecMismatch",
        "product criterion disagrees with the rank computation");
  return dependent;
}

/// Dependence test for degree-(-1) derivations of W(m, 1): compose each
/// operator p-1 times onto x^(tau); the result vanishes exactly on dependent
/// families. Cross-checked against the coefficient rank.
inline bool witt_product_dependent(const WittAlgebra& W, const std::vector<Vec>& ds) {
  const Fq& F = W.L.field();
  for (auto h : W.n) check(h == 1, "SpecMismatch", "the product criterion needs W(m, 1)");
  Matrix coeffs(static_cast<int>(ds.size()), W.m);
  for (std::size_t r = 0; r < ds.size(); ++r)
    for (int u = 0; u < W.L.dim(); ++u) {
      if (ds[r][static_cast<std::size_t>(u)].is_zero()) continue;
      check(W.L.degrees()[static_cast<std::size_t>(u)] == -1, "SpecMismatch",
            "the product criterion needs degree -1 derivations");
      coeffs.at(static_cast<int>(r), W.var_of(u)) = ds[r][static_cast<std::size_t>(u)];
    }
  Vec f = unit_vec(W.O.dim(), W.O.tau_index());
  for (const Vec& d : ds)
    for (std::uint32_t t = 0; t + 1 < F.p(); ++t) f = w_apply(W, d, f);
  bool dependent = rank(F, coeffs) < static_cast<int>(ds.size());
  check(vec_is_zero(f) == dependent, "SpecMismatch",
        "operator criterion disagrees with the rank computation");
  return dependent;
}

struct TopAndMin {
  int tau_index;  // O-basis index of x^(tau)
  RowSpace top;   // the top homogeneous component W_s
  RowSpace j0w;   // span of x^(tau) * (basis of W)
};

/// Distinguished top monomial, top component, and the product J_0 * W, which
/// must coincide with the top component.
inline TopAndMin top_and_min_structures(const WittAlgebra& W) {
  const Fq& F = W.L.field();
  RowSpace top(F, W.L.dim());
  for (int u = 0; u < W.L.dim(); ++u)
    if (W.L.degrees()[static_cast<std::size_t>(u)] == W.s) top.insert(unit_vec(W.L.dim(), u));
  RowSpace j0w(F, W.L.dim());
  Vec xtau = unit_vec(W.O.dim(), W.O.tau_index());
  for (int u = 0; u < W.L.dim(); ++u)
    j0w.insert(witt_module_action(W, xtau, unit_vec(W.L.dim(), u)));
  check(top.dim() == j0w.dim() && [&] {
          for (const Vec& r : j0w.rows())
            if (!top.contains(r)) return false;
          return true;
        }(),
        "SpecMismatch", "J_0 * W differs from the top component");
  return {W.O.tau_index(), std::move(top), std::move(j0w)};
}

/// Parses the CLI-facing names "W:m:n1,...,nm" and "Zass:n".
inline WittAlgebra witt_by_name(const Fq& F, const std::string& name, int cap = 250) {
  auto parse_int = [&](const std::string& s) -> std::uint32_t {
    check(!s.empty(), "UnsupportedType", "malformed algebra name " + name);
    std::uint64_t v = 0;
    for (char c : s) {
      check(c >= '0' && c <= '9', "UnsupportedType", "malformed algebra name " + name);
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
      check(v <= 1000000, "UnsupportedType", "malformed algebra name " + name);
    }
    return static_cast<std::uint32_t>(v);
  };
  if (name.rfind("Zass:", 0) == 0) return build_zassenhaus(F, parse_int(name.substr(5)), cap);
  if (name.rfind("W:", 0) == 0) {
    std::size_t colon = name.find(':', 2);
    check(colon != std::string::npos, "UnsupportedType", "malformed algebra name " + name);
    int m = static_cast<int>(parse_int(name.substr(2, colon - 2)));
    MultiIndex n;
    std::string rest = name.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) {
        n.push_back(parse_int(rest.substr(pos)));
        break;
      }
      n.push_back(parse_int(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return build_witt(F, m, std::move(n), cap);
  }
  fail("UnsupportedType", "unknown algebra name " + name);
}

}  // namespace modlie
