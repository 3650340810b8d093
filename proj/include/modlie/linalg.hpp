#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "modlie/field.hpp"

namespace modlie {

using Vec = std::vector<FqElem>;

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<FqElem> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  FqElem& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  FqElem at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  static Matrix identity(const Fq& F, int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = F.one();
    return m;
  }

  bool is_zero() const {
    for (auto x : a)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols &&
           std::equal(x.a.begin(), x.a.end(), y.a.begin(),
                      [](FqElem u, FqElem v) { return u == v; });
  }
};

inline Vec vec_zero(int n) { return Vec(static_cast<std::size_t>(n)); }

inline bool vec_is_zero(const Vec& v) {
  for (auto x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline Vec vec_add(const Fq& F, const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(r[i], b[i]);
  return r;
}

inline Vec vec_scale(const Fq& F, FqElem s, const Vec& a) {
  Vec r = a;
  for (auto& x : r) x = F.mul(s, x);
  return r;
}

inline void vec_axpy(const Fq& F, Vec& y, FqElem s, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = F.add(y[i], F.mul(s, x[i]));
}

inline Matrix mat_mul(const Fq& F, const Matrix& A, const Matrix& B) {
  check(A.cols == B.rows, "SpecMismatch", "matrix product shape mismatch");
  Matrix C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int l = 0; l < A.cols; ++l) {
      FqElem s = A.at(i, l);
      if (s.is_zero()) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(s, B.at(l, j)));
    }
  return C;
}

inline Vec mat_vec(const Fq& F, const Matrix& A, const Vec& v) {
  check(A.cols == static_cast<int>(v.size()), "SpecMismatch", "matrix-vector shape mismatch");
  Vec r = vec_zero(A.rows);
  for (int i = 0; i < A.rows; ++i) {
    FqElem s = F.zero();
    const FqElem* row = &A.a[static_cast<std::size_t>(i) * A.cols];
    for (int j = 0; j < A.cols; ++j)
      if (!row[j].is_zero() && !v[static_cast<std::size_t>(j)].is_zero())
        s = F.add(s, F.mul(row[j], v[static_cast<std::size_t>(j)]));
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

inline Matrix mat_add(const Fq& F, const Matrix& A, const Matrix& B) {
  check(A.rows == B.rows && A.cols == B.cols, "SpecMismatch", "matrix sum shape mismatch");
  Matrix C = A;
  for (std::size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.add(C.a[i], B.a[i]);
  return C;
}

inline Matrix mat_scale(const Fq& F, FqElem s, const Matrix& A) {
  Matrix C = A;
  for (auto& x : C.a) x = F.mul(s, x);
  return C;
}

inline Matrix mat_pow(const Fq& F, Matrix A, std::uint64_t e) {
  check(A.rows == A.cols, "SpecMismatch", "power of non-square matrix");
  Matrix R = Matrix::identity(F, A.rows);
  while (e > 0) {
    if (e & 1) R = mat_mul(F, R, A);
    A = mat_mul(F, A, A);
    e >>= 1;
  }
  return R;
}

inline Matrix mat_transpose(const Matrix& A) {
  Matrix T(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

struct Rref {
  Matrix m;
  std::vector<int> pivots;  // pivot column per nonzero row
  int rank = 0;
};

/// Deterministic reduced row echelon form: pivots scan columns left to right,
/// choosing the topmost available row.
inline Rref rref(const Fq& F, Matrix A) {
  Rref out;
  int r = 0;
  for (int col = 0; col < A.cols && r < A.rows; ++col) {
    int pivot = -1;
    for (int i = r; i < A.rows; ++i)
      if (!A.at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != r)
      for (int j = 0; j < A.cols; ++j) std::swap(A.at(pivot, j), A.at(r, j));
    FqElem s = F.inv(A.at(r, col));
    for (int j = col; j < A.cols; ++j) A.at(r, j) = F.mul(s, A.at(r, j));
    for (int i = 0; i < A.rows; ++i) {
      if (i == r) continue;
      FqElem c = A.at(i, col);
      if (c.is_zero()) continue;
      for (int j = col; j < A.cols; ++j)
        A.at(i, j) = F.sub(A.at(i, j), F.mul(c, A.at(r, j)));
    }
    out.pivots.push_back(col);
    ++r;
  }
  out.rank = r;
  out.m = std::move(A);
  return out;
}

inline int rank(const Fq& F, const Matrix& A) { return rref(F, A).rank; }

inline FqElem det(const Fq& F, Matrix A) {
  check(A.rows == A.cols, "SpecMismatch", "determinant of non-square matrix");
  FqElem d = F.one();
  int n = A.rows;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = col; i < n; ++i)
      if (!A.at(i, col).is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) return F.zero();
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(A.at(pivot, j), A.at(col, j));
      d = F.neg(d);
    }
    d = F.mul(d, A.at(col, col));
    FqElem inv = F.inv(A.at(col, col));
    for (int i = col + 1; i < n; ++i) {
      FqElem c = F.mul(inv, A.at(i, col));
      if (c.is_zero()) continue;
      for (int j = col; j < n; ++j) A.at(i, j) = F.sub(A.at(i, j), F.mul(c, A.at(col, j)));
    }
  }
  return d;
}

inline std::optional<Matrix> inverse(const Fq& F, const Matrix& A) {
  check(A.rows == A.cols, "SpecMismatch", "inverse of non-square matrix");
  int n = A.rows;
  Matrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, n + i) = F.one();
  }
  Rref r = rref(F, aug);
  for (int i = 0; i < n; ++i)
    if (i >= r.rank || r.pivots[static_cast<std::size_t>(i)] != i) return std::nullopt;
  Matrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = r.m.at(i, n + j);
  return inv;
}

/// One solution of A x = b, if consistent.
inline std::optional<Vec> solve(const Fq& F, const Matrix& A, const Vec& b) {
  check(A.rows == static_cast<int>(b.size()), "SpecMismatch", "solve shape mismatch");
  Matrix aug(A.rows, A.cols + 1);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) aug.at(i, j) = A.at(i, j);
    aug.at(i, A.cols) = b[static_cast<std::size_t>(i)];
  }
  Rref r = rref(F, aug);
  for (int i = 0; i < r.rank; ++i)
    if (r.pivots[static_cast<std::size_t>(i)] == A.cols) return std::nullopt;
  Vec x = vec_zero(A.cols);
  for (int i = 0; i < r.rank; ++i)
    x[static_cast<std::size_t>(r.pivots[static_cast<std::size_t>(i)])] = r.m.at(i, A.cols);
  return x;
}

/// Canonical nullspace basis (one row per free column).
inline Matrix nullspace(const Fq& F, const Matrix& A) {
  Rref r = rref(F, A);
  std::vector<bool> is_pivot(static_cast<std::size_t>(A.cols), false);
  for (int c : r.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  Matrix N(A.cols - r.rank, A.cols);
  int row = 0;
  for (int free = 0; free < A.cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    N.at(row, free) = F.one();
    for (int i = 0; i < r.rank; ++i)
      N.at(row, r.pivots[static_cast<std::size_t>(i)]) = F.neg(r.m.at(i, free));
    ++row;
  }
  return N;
}

/// Incremental row space in canonical rref form; rows stay sorted by pivot.
class RowSpace {
public:
  RowSpace(const Fq& F, int ambient) : F_(F), n_(ambient) {}

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }
  const Fq& field() const { return F_; }

  Vec reduce(Vec v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      FqElem c = v[static_cast<std::size_t>(pivots_[r])];
      if (c.is_zero()) continue;
      const Vec& row = rows_[r];
      for (std::size_t j = static_cast<std::size_t>(pivots_[r]); j < v.size(); ++j)
        v[j] = F_.sub(v[j], F_.mul(c, row[j]));
    }
    return v;
  }

  bool contains(const Vec& v) const { return vec_is_zero(reduce(v)); }

  /// Inserts the span of v; returns true when the dimension grew.
  bool insert(const Vec& v) {
    check(static_cast<int>(v.size()) == n_, "SpecMismatch", "row length mismatch");
    Vec r = reduce(v);
    int piv = -1;
    for (int j = 0; j < n_; ++j)
      if (!r[static_cast<std::size_t>(j)].is_zero()) {
        piv = j;
        break;
      }
    if (piv < 0) return false;
    FqElem s = F_.inv(r[static_cast<std::size_t>(piv)]);
    for (int j = piv; j < n_; ++j)
      r[static_cast<std::size_t>(j)] = F_.mul(s, r[static_cast<std::size_t>(j)]);
    // back-eliminate the new pivot column to keep rows canonical
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      FqElem c = rows_[i][static_cast<std::size_t>(piv)];
      if (c.is_zero()) continue;
      for (int j = piv; j < n_; ++j)
        rows_[i][static_cast<std::size_t>(j)] =
            F_.sub(rows_[i][static_cast<std::size_t>(j)], F_.mul(c, r[static_cast<std::size_t>(j)]));
    }
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), piv);
    return true;
  }

  Matrix to_matrix() const {
    Matrix m(dim(), n_);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < n_; ++j) m.at(i, j) = rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
  }

  /// Coordinates of v in terms of the stored rows, if v lies in the space.
  std::optional<Vec> coordinates(const Vec& v) const {
    Vec r = v;
    Vec coords(rows_.size(), F_.zero());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      FqElem c = r[static_cast<std::size_t>(pivots_[i])];
      if (c.is_zero()) continue;
      coords[i] = c;
      for (std::size_t j = static_cast<std::size_t>(pivots_[i]); j < r.size(); ++j)
        r[j] = F_.sub(r[j], F_.mul(c, rows_[i][j]));
    }
    if (!vec_is_zero(r)) return std::nullopt;
    return coords;
  }

private:
  Fq F_;
  int n_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

/// Feeds a sequence of vectors and reports the first linear dependence as the
/// coefficient vector c with c_last = 1 and sum_j c_j v_j = 0.
class DependenceTracker {
public:
  DependenceTracker(const Fq& F, int ambient) : F_(F), n_(ambient) {}

  std::optional<std::vector<FqElem>> feed(const Vec& v) {
    check(static_cast<int>(v.size()) == n_, "SpecMismatch", "tracker row length mismatch");
    Vec r = v;
    std::vector<FqElem> comb(count_ + 1, F_.zero());
    comb[count_] = F_.one();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      FqElem c = r[static_cast<std::size_t>(pivots_[i])];
      if (c.is_zero()) continue;
      for (std::size_t j = 0; j < r.size(); ++j) r[j] = F_.sub(r[j], F_.mul(c, rows_[i][j]));
      for (std::size_t j = 0; j < combs_[i].size(); ++j)
        comb[j] = F_.sub(comb[j], F_.mul(c, combs_[i][j]));
    }
    if (vec_is_zero(r)) return comb;
    int piv = -1;
    for (int j = 0; j < n_; ++j)
      if (!r[static_cast<std::size_t>(j)].is_zero()) {
        piv = j;
        break;
      }
    FqElem s = F_.inv(r[static_cast<std::size_t>(piv)]);
    for (auto& x : r) x = F_.mul(s, x);
    for (auto& x : comb) x = F_.mul(s, x);
    rows_.push_back(std::move(r));
    combs_.push_back(std::move(comb));
    pivots_.push_back(piv);
    ++count_;
    return std::nullopt;
  }

private:
  Fq F_;
  int n_;
  std::size_t count_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::vector<FqElem>> combs_;
  std::vector<int> pivots_;
};

/// Minimal monic annihilator of the Krylov sequence v, Av, A^2 v, ...
inline Poly krylov_annihilator(const Fq& F, const Matrix& A, const Vec& v) {
  DependenceTracker t(F, static_cast<int>(v.size()));
  Vec cur = v;
  for (int step = 0; step <= A.rows + 1; ++step) {
    if (auto comb = t.feed(cur)) return poly_trim(Poly{*comb});
    cur = mat_vec(F, A, cur);
  }
  fail("SpecMismatch", "krylov sequence failed to close");
}

/// Minimal polynomial of a square matrix (lcm of cyclic annihilators).
inline Poly min_poly(const Fq& F, const Matrix& A) {
  check(A.rows == A.cols && A.rows >= 1, "SpecMismatch", "min_poly needs a square matrix");
  int n = A.rows;
  Poly m = poly_one(F);
  for (int i = 0; i < n; ++i) {
    // w = m(A) e_i via Horner
    Vec w = vec_zero(n);
    for (std::size_t j = m.c.size(); j-- > 0;) {
      w = mat_vec(F, A, w);
      w[static_cast<std::size_t>(i)] = F.add(w[static_cast<std::size_t>(i)], m.c[j]);
    }
    if (vec_is_zero(w)) continue;
    m = poly_mul(F, m, krylov_annihilator(F, A, w));
    check(m.deg() <= n, "SpecMismatch", "minimal polynomial degree exceeded dimension");
    if (m.deg() == n) break;
  }
  return m;
}

/// u semisimple over the working field iff its minimal polynomial is
/// squarefree; in characteristic p a vanishing derivative already rules this
/// out, the gcd test covers that case automatically.
inline bool is_semisimple(const Fq& F, const Matrix& A) {
  Poly m = min_poly(F, A);
  Poly g = poly_gcd(F, m, poly_derivative(F, m));
  return g.deg() == 0;
}

/// p-polynomial sum_j a_j t^(p^j), coefficient j of t^(p^j); monic: a.back()=1.
struct PPoly {
  std::vector<FqElem> a;
  int pdeg() const { return static_cast<int>(a.size()) - 1; }
};

inline FqElem ppoly_eval(const Fq& F, const PPoly& f, FqElem t) {
  FqElem acc = F.zero();
  FqElem cur = t;
  for (std::size_t j = 0; j < f.a.size(); ++j) {
    acc = F.add(acc, F.mul(f.a[j], cur));
    cur = F.pow(cur, F.p());
  }
  return acc;
}

inline Matrix ppoly_eval_matrix(const Fq& F, const PPoly& f, const Matrix& A) {
  Matrix acc(A.rows, A.cols);
  Matrix cur = A;
  for (std::size_t j = 0; j < f.a.size(); ++j) {
    acc = mat_add(F, acc, mat_scale(F, f.a[j], cur));
    if (j + 1 < f.a.size()) cur = mat_pow(F, cur, F.p());
  }
  return acc;
}

/// Expansion into an ordinary polynomial of degree p^pdeg.
inline Poly ppoly_expand(const Fq& F, const PPoly& f) {
  Poly out;
  std::uint64_t top = 1;
  for (int j = 0; j < f.pdeg(); ++j) top *= F.p();
  check(top <= 1000000, "FieldTooLargeForEnumeration", "p-polynomial expansion too large");
  out.c.assign(static_cast<std::size_t>(top) + 1, F.zero());
  std::uint64_t e = 1;
  for (std::size_t j = 0; j < f.a.size(); ++j) {
    out.c[static_cast<std::size_t>(e)] = F.add(out.c[static_cast<std::size_t>(e)], f.a[j]);
    e *= F.p();
  }
  return poly_trim(std::move(out));
}

/// Minimal monic p-polynomial of A: the first linear dependence among
/// A, A^p, A^(p^2), ...
inline PPoly p_min_poly(const Fq& F, const Matrix& A) {
  check(A.rows == A.cols && A.rows >= 1, "SpecMismatch", "p_min_poly needs a square matrix");
  int n2 = A.rows * A.rows;
  DependenceTracker t(F, n2);
  Matrix cur = A;
  for (int j = 0; j <= n2 + 1; ++j) {
    if (auto comb = t.feed(cur.a)) return PPoly{*comb};
    cur = mat_pow(F, cur, F.p());
  }
  fail("SpecMismatch", "p-power sequence failed to close");
}

/// Least e with A^(p^e) semisimple.
inline int semisimple_exponent(const Fq& F, Matrix A) {
  for (int e = 0; e <= 64; ++e) {
    if (is_semisimple(F, A)) return e;
    A = mat_pow(F, A, F.p());
  }
  fail("SpecMismatch", "no semisimple power found");
}

/// p-order r of A: deg p_min_poly = p^(r + semisimple_exponent).
inline int p_order(const Fq& F, const Matrix& A) {
  PPoly f = p_min_poly(F, A);
  int e = semisimple_exponent(F, A);
  int r = f.pdeg() - e;
  check(r >= 0, "SpecMismatch", "negative p-order");
  return r;
}

/// Roots of min_poly with multiplicity stripped; nullopt when it does not
/// split over the working field.
inline std::optional<std::vector<FqElem>> eigenvalues_if_split(const Fq& F, const Matrix& A,
                                                               std::uint64_t bound = 100000) {
  if (F.q() > bound) return std::nullopt;
  Poly m = min_poly(F, A);
  std::vector<FqElem> eig;
  Poly rest = m;
  while (rest.deg() > 0) {
    auto roots = find_roots(F, rest, bound);
    if (roots.empty()) return std::nullopt;
    FqElem r = roots.front();
    eig.push_back(r);
    Poly lin;
    lin.c = {F.neg(r), F.one()};
    while (true) {
      auto [quo, rem] = poly_divmod(F, rest, lin);
      if (!rem.is_zero()) break;
      rest = quo;
      if (rest.deg() == 0) break;
      if (!poly_eval(F, rest, r).is_zero()) break;
    }
  }
  std::sort(eig.begin(), eig.end(),
            [&](FqElem x, FqElem y) { return F.index_of(x) < F.index_of(y); });
  return eig;
}

/// Cross-check route for p_order: the F_p-rank of the eigenvalue set viewed
/// as digit vectors; requires the minimal polynomial to split.
inline std::optional<int> p_order_via_eigenvalues(const Fq& F, const Matrix& A) {
  auto eig = eigenvalues_if_split(F, A);
  if (!eig) return std::nullopt;
  // additive F_p-span of the eigenvalues: rank of their digit matrix
  Matrix digits(static_cast<int>(eig->size()), static_cast<int>(F.k()));
  Fq Fp = Fq::prime(F.p());
  for (std::size_t i = 0; i < eig->size(); ++i)
    for (std::uint32_t j = 0; j < F.k(); ++j)
      digits.at(static_cast<int>(i), static_cast<int>(j)) = Fp.from_int(F.digit((*eig)[i], j));
  return rank(Fp, digits);
}

}  // namespace modlie
