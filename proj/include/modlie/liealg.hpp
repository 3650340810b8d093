#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "modlie/linalg.hpp"

namespace modlie {

/// Finite-dimensional Lie algebra given by structure constants over the prime
/// field, evaluated over a chosen working field of the same characteristic.
/// Storage is canonical: only pairs i<j are kept, [e_j,e_i] is derived by
/// sign, and [e_i,e_i] = 0 by construction.
class LieAlgebra {
public:
  struct Entry {
    std::uint32_t k;
    std::uint32_t c;  // in [1, p)
  };
  struct PairBlock {
    std::int32_t i, j;          // i < j
    std::uint32_t begin, end;   // slice of entries_
  };
  struct ValidationIssue {
    std::string kind;  // "jacobi" or "grading"
    int i, j, k;
  };

  const Fq& field() const { return F_; }
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool graded() const { return graded_; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::size_t pair_count() const { return pairs_.size(); }
  std::size_t entry_count() const { return entries_.size(); }

  /// Same structure constants over another field of equal characteristic.
  LieAlgebra with_field(const Fq& K) const {
    check(K.p() == F_.p(), "SpecMismatch", "field change must preserve characteristic");
    LieAlgebra out = *this;
    out.F_ = K;
    return out;
  }

  LieAlgebra renamed(std::string s) const {
    LieAlgebra out = *this;
    out.name_ = std::move(s);
    return out;
  }

  /// Signed structure constants of [e_a, e_b]: calls fn(k, c) with c in
  /// (-p, p) \ {0}; nothing for a == b.
  template <typename Fn>
  void for_pair(int a, int b, Fn&& fn) const {
    if (a == b) return;
    int i = a < b ? a : b;
    int j = a < b ? b : a;
    std::uint32_t pos = pair_index_[static_cast<std::size_t>(i) * dim_ + j];
    if (pos == 0) return;
    const PairBlock& blk = pairs_[pos - 1];
    std::int64_t sign = a < b ? 1 : -1;
    for (std::uint32_t e = blk.begin; e < blk.end; ++e)
      fn(static_cast<int>(entries_[e].k), sign * static_cast<std::int64_t>(entries_[e].c));
  }

  Vec bracket_basis(int a, int b) const {
    Vec r = vec_zero(dim_);
    for_pair(a, b, [&](int k, std::int64_t c) {
      r[static_cast<std::size_t>(k)] = F_.from_int(static_cast<std::uint64_t>(
          c >= 0 ? c : c + F_.p()));
    });
    return r;
  }

  Vec bracket(const Vec& u, const Vec& v) const {
    check(static_cast<int>(u.size()) == dim_ && static_cast<int>(v.size()) == dim_,
          "SpecMismatch", "bracket operand length mismatch");
    Vec r = vec_zero(dim_);
    for (const PairBlock& blk : pairs_) {
      const FqElem ui = u[static_cast<std::size_t>(blk.i)];
      const FqElem vj = v[static_cast<std::size_t>(blk.j)];
      const FqElem uj = u[static_cast<std::size_t>(blk.j)];
      const FqElem vi = v[static_cast<std::size_t>(blk.i)];
      FqElem t = F_.sub(ui.is_zero() || vj.is_zero() ? F_.zero() : F_.mul(ui, vj),
                        uj.is_zero() || vi.is_zero() ? F_.zero() : F_.mul(uj, vi));
      if (t.is_zero()) continue;
      for (std::uint32_t e = blk.begin; e < blk.end; ++e) {
        FqElem& slot = r[entries_[e].k];
        slot = F_.add(slot, F_.mul(FqElem{entries_[e].c}, t));
      }
    }
    return r;
  }

  /// Matrix of ad(u): column j holds [u, e_j].
  Matrix ad(const Vec& u) const {
    Matrix m(dim_, dim_);
    for (const PairBlock& blk : pairs_) {
      const FqElem ui = u[static_cast<std::size_t>(blk.i)];
      const FqElem uj = u[static_cast<std::size_t>(blk.j)];
      if (ui.is_zero() && uj.is_zero()) continue;
      for (std::uint32_t e = blk.begin; e < blk.end; ++e) {
        FqElem c{entries_[e].c};
        int k = static_cast<int>(entries_[e].k);
        if (!ui.is_zero()) m.at(k, blk.j) = F_.add(m.at(k, blk.j), F_.mul(c, ui));
        if (!uj.is_zero()) m.at(k, blk.i) = F_.sub(m.at(k, blk.i), F_.mul(c, uj));
      }
    }
    return m;
  }

  /// Checks the Jacobi identity on all basis triples and, when graded, that
  /// every structure constant respects the grading. Returns the first
  /// counterexample in lexicographic order, or nullopt.
  std::optional<ValidationIssue> validate() const {
    if (graded_) {
      for (const PairBlock& blk : pairs_)
        for (std::uint32_t e = blk.begin; e < blk.end; ++e)
          if (degrees_[entries_[e].k] !=
              degrees_[static_cast<std::size_t>(blk.i)] + degrees_[static_cast<std::size_t>(blk.j)])
            return ValidationIssue{"grading", blk.i, blk.j, static_cast<int>(entries_[e].k)};
    }
    const std::int64_t p = F_.p();
    std::vector<std::int64_t> scratch(static_cast<std::size_t>(dim_), 0);
    std::vector<int> touched;
    touched.reserve(16);
    auto add_term = [&](int a, int b, int c) {
      for_pair(a, b, [&](int m, std::int64_t c1) {
        for_pair(m, c, [&](int k2, std::int64_t c2) {
          if (scratch[static_cast<std::size_t>(k2)] == 0) touched.push_back(k2);
          scratch[static_cast<std::size_t>(k2)] += c1 * c2;
        });
      });
    };
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          add_term(i, j, k);
          add_term(j, k, i);
          add_term(k, i, j);
          bool ok = true;
          for (int t : touched)
            if (scratch[static_cast<std::size_t>(t)] % p != 0) ok = false;
          for (int t : touched) scratch[static_cast<std::size_t>(t)] = 0;
          touched.clear();
          if (!ok) return ValidationIssue{"jacobi", i, j, k};
        }
    return std::nullopt;
  }

private:
  friend class LieAlgebraBuilder;
  friend LieAlgebra direct_sum(const LieAlgebra&, const LieAlgebra&);

  explicit LieAlgebra(const Fq& F) : F_(F) {}

  Fq F_;
  int dim_ = 0;
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  bool graded_ = false;
  std::vector<PairBlock> pairs_;
  std::vector<std::uint32_t> pair_index_;  // (i*dim+j) -> position+1 in pairs_
  std::vector<Entry> entries_;
};

class LieAlgebraBuilder {
public:
  LieAlgebraBuilder(const Fq& F, int dim) : F_(F), dim_(dim) {
    check(dim >= 0, "SpecMismatch", "negative dimension");
    labels_.resize(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) labels_[static_cast<std::size_t>(i)] = "e" + std::to_string(i);
  }

  /// Adds c * e_k to [e_i, e_j]; i != j, any integer c.
  void add(int i, int j, int k, std::int64_t c) {
    check(i >= 0 && i < dim_ && j >= 0 && j < dim_ && k >= 0 && k < dim_,
          "SpecMismatch", "structure constant index out of range");
    check(i != j, "SpecMismatch", "structure constants on equal indices are forced to zero");
    std::int64_t p = F_.p();
    if (i > j) {
      std::swap(i, j);
      c = -c;
    }
    std::int64_t r = ((c % p) + p) % p;
    auto key = std::make_tuple(i, j, k);
    std::int64_t cur = 0;
    if (auto it = acc_.find(key); it != acc_.end()) cur = it->second;
    std::int64_t next = (cur + r) % p;
    if (next == 0)
      acc_.erase(key);
    else
      acc_[key] = next;
  }

  void set_label(int i, std::string s) { labels_[static_cast<std::size_t>(i)] = std::move(s); }
  void set_name(std::string s) { name_ = std::move(s); }
  void set_degree(int i, int d) {
    if (degrees_.empty()) degrees_.assign(static_cast<std::size_t>(dim_), 0);
    degrees_[static_cast<std::size_t>(i)] = d;
  }

  LieAlgebra build() const {
    LieAlgebra L(F_);
    L.dim_ = dim_;
    L.name_ = name_;
    L.labels_ = labels_;
    L.graded_ = !degrees_.empty();
    L.degrees_ = degrees_.empty() ? std::vector<int>(static_cast<std::size_t>(dim_), 0) : degrees_;
    L.pair_index_.assign(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_), 0);
    std::pair<int, int> cur{-1, -1};
    for (const auto& [key, c] : acc_) {
      auto [i, j, k] = key;
      if (std::pair<int, int>{i, j} != cur) {
        if (!L.pairs_.empty()) L.pairs_.back().end = static_cast<std::uint32_t>(L.entries_.size());
        L.pairs_.push_back({i, j, static_cast<std::uint32_t>(L.entries_.size()), 0});
        L.pair_index_[static_cast<std::size_t>(i) * dim_ + j] =
            static_cast<std::uint32_t>(L.pairs_.size());
        cur = {i, j};
      }
      L.entries_.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(c)});
    }
    if (!L.pairs_.empty()) L.pairs_.back().end = static_cast<std::uint32_t>(L.entries_.size());
    return L;
  }

private:
  Fq F_;
  int dim_;
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<int> degrees_;
  std::map<std::tuple<int, int, int>, std::int64_t> acc_;
};

inline LieAlgebra direct_sum(const LieAlgebra& A, const LieAlgebra& B) {
  check(A.field() == B.field(), "SpecMismatch", "direct sum needs a common field");
  LieAlgebraBuilder b(A.field(), A.dim() + B.dim());
  b.set_name(A.name() + "+" + B.name());
  for (int i = 0; i < A.dim(); ++i) b.set_label(i, A.labels()[static_cast<std::size_t>(i)] + "'");
  for (int i = 0; i < B.dim(); ++i)
    b.set_label(A.dim() + i, B.labels()[static_cast<std::size_t>(i)] + "\"");
  if (A.graded() || B.graded()) {
    for (int i = 0; i < A.dim(); ++i) b.set_degree(i, A.degrees()[static_cast<std::size_t>(i)]);
    for (int i = 0; i < B.dim(); ++i)
      b.set_degree(A.dim() + i, B.degrees()[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < A.dim(); ++i)
    for (int j = i + 1; j < A.dim(); ++j)
      A.for_pair(i, j, [&](int k, std::int64_t c) { b.add(i, j, k, c); });
  for (int i = 0; i < B.dim(); ++i)
    for (int j = i + 1; j < B.dim(); ++j)
      B.for_pair(i, j, [&](int k, std::int64_t c) {
        b.add(A.dim() + i, A.dim() + j, A.dim() + k, c);
      });
  return b.build();
}

/// Embeds a vector of A (resp. B) into A + B.
inline Vec sum_embed_left(const LieAlgebra& sum, const Vec& u) {
  Vec r = vec_zero(sum.dim());
  std::copy(u.begin(), u.end(), r.begin());
  return r;
}
inline Vec sum_embed_right(const LieAlgebra& sum, const Vec& u) {
  Vec r = vec_zero(sum.dim());
  std::copy(u.begin(), u.end(), r.end() - static_cast<std::ptrdiff_t>(u.size()));
  return r;
}

/// Grows S until it is closed under ad(op) for every op in ops.
inline void saturate(const LieAlgebra& L, RowSpace& S, const std::vector<Vec>& ops) {
  std::deque<Vec> work(S.rows().begin(), S.rows().end());
  while (!work.empty()) {
    Vec v = std::move(work.front());
    work.pop_front();
    for (const Vec& op : ops) {
      Vec w = L.bracket(op, v);
      if (S.insert(w)) work.push_back(std::move(w));
    }
  }
}

/// Smallest ideal of L containing the seed vectors.
inline RowSpace ideal_closure(const LieAlgebra& L, const std::vector<Vec>& seeds) {
  RowSpace S(L.field(), L.dim());
  std::deque<Vec> work;
  for (const Vec& s : seeds)
    if (S.insert(s)) work.push_back(s);
  while (!work.empty()) {
    Vec v = std::move(work.front());
    work.pop_front();
    Matrix advT = mat_transpose(L.ad(v));
    // rows of advT are [v, e_i] = -[e_i, v]
    for (int i = 0; i < L.dim(); ++i) {
      Vec w(advT.a.begin() + static_cast<std::ptrdiff_t>(i) * L.dim(),
            advT.a.begin() + static_cast<std::ptrdiff_t>(i + 1) * L.dim());
      if (S.insert(w)) work.push_back(std::move(w));
    }
  }
  return S;
}

struct GeneratedSubalgebra {
  RowSpace space;
  int rounds;  // stages X^(1) including X^(k) built before the chain stalled
};

/// Subalgebra generated by x and y, built stagewise: X_1 is the F[ad y]-module
/// generated by x, X_{k+1} the F[ad y]-module generated by [x, X_k], and the
/// result is F y + sum of the X_k. Each stage keeps the accumulated space
/// stable under ad(y), so a Krylov chain may stop at its first dependent
/// vector; the chain of stages grows strictly, hence stalls within dim steps,
/// and a stalled chain is stable under ad(x) as well.
inline GeneratedSubalgebra generated_subalgebra(const LieAlgebra& L, const Vec& x, const Vec& y) {
  RowSpace X(L.field(), L.dim());
  auto chain = [&](Vec w, std::vector<Vec>& sink) {
    while (X.insert(w)) {
      sink.push_back(w);
      w = L.bracket(y, w);
    }
  };
  std::vector<Vec> fresh;
  chain(x, fresh);
  int rounds = 1;
  while (!fresh.empty() && X.dim() < L.dim()) {
    std::vector<Vec> next;
    for (const Vec& v : fresh) chain(L.bracket(x, v), next);
    if (next.empty()) break;
    fresh = std::move(next);
    ++rounds;
    check(rounds <= L.dim() + 1, "SpecMismatch", "generated-subalgebra chain exceeded its bound");
  }
  X.insert(y);
  return {std::move(X), rounds};
}

/// Reference closure: repeatedly span-and-bracket the full current basis
/// until nothing new appears. Deliberately plain; intended as an oracle on
/// small algebras.
inline RowSpace naive_closure(const LieAlgebra& L, const std::vector<Vec>& gens) {
  RowSpace S(L.field(), L.dim());
  for (const Vec& g : gens) S.insert(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Vec> snapshot = S.rows();
    for (std::size_t a = 0; a < snapshot.size(); ++a)
      for (std::size_t b = a + 1; b < snapshot.size(); ++b)
        if (S.insert(L.bracket(snapshot[a], snapshot[b]))) grew = true;
  }
  return S;
}

/// Derived subalgebra [M, M] of M = the subalgebra generated by x and y,
/// computed without constructing M: the closure N of span{[x,y]} under ad(x)
/// and ad(y) normalizes itself through x and y, hence is an ideal of M, and
/// M/N is spanned by two commuting generators, so [M,M] = N.
inline RowSpace generated_derived_subalgebra(const LieAlgebra& L, const Vec& x, const Vec& y) {
  RowSpace S(L.field(), L.dim());
  S.insert(L.bracket(x, y));
  saturate(L, S, {x, y});
  return S;
}

/// Derived subalgebra of the whole algebra, with early exit once full.
inline RowSpace derived_subalgebra(const LieAlgebra& L) {
  RowSpace S(L.field(), L.dim());
  for (int i = 0; i < L.dim() && S.dim() < L.dim(); ++i)
    for (int j = i + 1; j < L.dim() && S.dim() < L.dim(); ++j)
      S.insert(L.bracket_basis(i, j));
  return S;
}

/// Span of all pairwise brackets of the rows of S.
inline RowSpace derived_of(const LieAlgebra& L, const RowSpace& S) {
  RowSpace D(L.field(), L.dim());
  const auto& rows = S.rows();
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) D.insert(L.bracket(rows[a], rows[b]));
  return D;
}

/// Last term of the derived series of a subalgebra: iterate S <- [S,S] until
/// the dimension stops dropping. The fixpoint is perfect (or zero).
inline RowSpace derived_series_last(const LieAlgebra& L, RowSpace S) {
  while (true) {
    RowSpace D = derived_of(L, S);
    check(D.dim() <= S.dim(), "SpecMismatch", "derived series of a non-subalgebra");
    if (D.dim() == S.dim()) return S;
    S = std::move(D);
  }
}

inline Vec unit_vec(int n, int i) {
  Vec v(static_cast<std::size_t>(n));
  v[static_cast<std::size_t>(i)] = FqElem{1};
  return v;
}

inline Vec matrix_row(const Matrix& M, int r) {
  return Vec(M.a.begin() + static_cast<std::ptrdiff_t>(r) * M.cols,
             M.a.begin() + static_cast<std::ptrdiff_t>(r + 1) * M.cols);
}

/// Center: simultaneous kernel of v -> [v, e_j], intersected one j at a time.
inline RowSpace center(const LieAlgebra& L) {
  const Fq& F = L.field();
  Matrix V = Matrix::identity(F, L.dim());
  for (int j = 0; j < L.dim() && V.rows > 0; ++j) {
    Matrix B(V.rows, L.dim());
    for (int r = 0; r < V.rows; ++r) {
      Vec img = L.bracket(matrix_row(V, r), unit_vec(L.dim(), j));
      for (int c = 0; c < L.dim(); ++c) B.at(r, c) = img[static_cast<std::size_t>(c)];
    }
    // combinations of the V rows whose images vanish
    V = mat_mul(F, nullspace(F, mat_transpose(B)), V);
  }
  RowSpace S(F, L.dim());
  for (int r = 0; r < V.rows; ++r) S.insert(matrix_row(V, r));
  return S;
}

struct Quotient {
  LieAlgebra algebra;
  std::vector<int> complement;     // ambient indices of coset representatives
  std::vector<Vec> ideal_rows;     // canonical rref basis of the ideal
  std::vector<int> ideal_pivots;
};

/// Projects an ambient vector to quotient coordinates.
inline Vec quotient_project(const Quotient& Q, const LieAlgebra& ambient, Vec v) {
  const Fq& F = ambient.field();
  for (std::size_t r = 0; r < Q.ideal_rows.size(); ++r) {
    FqElem c = v[static_cast<std::size_t>(Q.ideal_pivots[r])];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = F.sub(v[j], F.mul(c, Q.ideal_rows[r][j]));
  }
  Vec out(Q.complement.size());
  for (std::size_t a = 0; a < Q.complement.size(); ++a)
    out[a] = v[static_cast<std::size_t>(Q.complement[a])];
  return out;
}

inline Vec quotient_lift(const Quotient& Q, const LieAlgebra& ambient, const Vec& v) {
  Vec out = vec_zero(ambient.dim());
  for (std::size_t a = 0; a < Q.complement.size(); ++a)
    out[static_cast<std::size_t>(Q.complement[a])] = v[a];
  return out;
}

/// Quotient by an ideal (verified). Coset representatives are the standard
/// basis vectors at non-pivot columns of the ideal's canonical basis.
inline Quotient quotient(const LieAlgebra& L, const RowSpace& ideal) {
  const Fq& F = L.field();
  for (const Vec& row : ideal.rows())
    for (int i = 0; i < L.dim(); ++i)
      check(ideal.contains(L.bracket(unit_vec(L.dim(), i), row)), "SpecMismatch",
            "quotient by a non-ideal");
  std::vector<bool> is_pivot(static_cast<std::size_t>(L.dim()), false);
  for (int c : ideal.pivots()) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<int> comp;
  for (int i = 0; i < L.dim(); ++i)
    if (!is_pivot[static_cast<std::size_t>(i)]) comp.push_back(i);
  int qdim = static_cast<int>(comp.size());

  Quotient Q{LieAlgebraBuilder(F, 0).build(), comp, ideal.rows(),
             ideal.pivots()};
  LieAlgebraBuilder b(F, qdim);
  b.set_name(L.name() + "/ideal");
  for (int a = 0; a < qdim; ++a)
    b.set_label(a, L.labels()[static_cast<std::size_t>(comp[static_cast<std::size_t>(a)])] + "~");
  bool homogeneous = L.graded();
  for (const Vec& row : ideal.rows()) {
    std::optional<int> d;
    for (int i = 0; homogeneous && i < L.dim(); ++i) {
      if (row[static_cast<std::size_t>(i)].is_zero()) continue;
      int di = L.degrees()[static_cast<std::size_t>(i)];
      if (!d) d = di;
      homogeneous = *d == di;
    }
  }
  if (homogeneous)
    for (int a = 0; a < qdim; ++a)
      b.set_degree(a, L.degrees()[static_cast<std::size_t>(comp[static_cast<std::size_t>(a)])]);
  for (int a = 0; a < qdim; ++a)
    for (int bb = a + 1; bb < qdim; ++bb) {
      Vec w = quotient_project(Q, L,
                               L.bracket_basis(comp[static_cast<std::size_t>(a)],
                                               comp[static_cast<std::size_t>(bb)]));
      for (int k = 0; k < qdim; ++k) {
        FqElem c = w[static_cast<std::size_t>(k)];
        if (c.is_zero()) continue;
        check(c.v < F.p(), "SpecMismatch", "quotient constants leave the prime field");
        b.add(a, bb, k, static_cast<std::int64_t>(c.v));
      }
    }
  Q.algebra = b.build();
  return Q;
}

struct WeightSpace {
  Vec alpha;            // one eigenvalue per torus element
  std::vector<Vec> basis;
};

/// Simultaneous eigenspace decomposition of a subspace for a commuting family
/// of ad-actions. Throws NotDiagonalizable when an action fails to split over
/// the working field, is not semisimple on a block, or does not preserve the
/// space.
inline std::vector<WeightSpace> weight_decomposition(const LieAlgebra& L,
                                                     const std::vector<Vec>& torus,
                                                     const std::vector<Vec>& space) {
  const Fq& F = L.field();
  struct Block {
    Vec alpha;
    Matrix basis;  // rows span the block
  };
  Matrix space_m(static_cast<int>(space.size()), L.dim());
  for (std::size_t r = 0; r < space.size(); ++r)
    for (int c = 0; c < L.dim(); ++c) space_m.at(static_cast<int>(r), c) = space[r][static_cast<std::size_t>(c)];
  check(rank(F, space_m) == space_m.rows, "SpecMismatch", "space rows must be independent");
  std::vector<Block> blocks{{Vec{}, std::move(space_m)}};
  for (const Vec& t : torus) {
    Matrix ad_t = L.ad(t);
    std::vector<Block> next;
    for (Block& blk : blocks) {
      int m = blk.basis.rows;
      // solve basis^T * R = images for the restriction R in block coordinates
      Matrix bt = mat_transpose(blk.basis);
      Matrix aug(L.dim(), m + m);
      for (int r = 0; r < L.dim(); ++r)
        for (int c = 0; c < m; ++c) aug.at(r, c) = bt.at(r, c);
      for (int c = 0; c < m; ++c) {
        Vec img = mat_vec(F, ad_t, matrix_row(blk.basis, c));
        for (int r = 0; r < L.dim(); ++r) aug.at(r, m + c) = img[static_cast<std::size_t>(r)];
      }
      Rref rr = rref(F, aug);
      Matrix R(m, m);
      for (int i = 0; i < rr.rank; ++i) {
        int piv = rr.pivots[static_cast<std::size_t>(i)];
        if (piv >= m) fail("NotDiagonalizable", "action does not preserve a weight block");
        for (int c = 0; c < m; ++c) R.at(piv, c) = rr.m.at(i, m + c);
      }
      Poly mp = min_poly(F, R);
      if (poly_gcd(F, mp, poly_derivative(F, mp)).deg() != 0)
        fail("NotDiagonalizable", "action is not semisimple on a weight block");
      auto eig = eigenvalues_if_split(F, R);
      if (!eig || static_cast<int>(eig->size()) != mp.deg())
        fail("NotDiagonalizable", "eigenvalues do not split over the working field");
      for (FqElem lam : *eig) {
        Matrix shifted = R;
        for (int i = 0; i < m; ++i) shifted.at(i, i) = F.sub(shifted.at(i, i), lam);
        // coordinate vectors c with (R - lam) c = 0; rows map back through the basis
        Matrix N = nullspace(F, shifted);
        Block nb;
        nb.alpha = blk.alpha;
        nb.alpha.push_back(lam);
        nb.basis = mat_mul(F, N, blk.basis);
        next.push_back(std::move(nb));
      }
    }
    blocks = std::move(next);
  }
  int total = 0;
  for (const Block& b : blocks) total += b.basis.rows;
  check(total == static_cast<int>(space.size()), "NotDiagonalizable",
        "weight spaces do not fill the decomposed space");
  std::sort(blocks.begin(), blocks.end(), [&](const Block& a, const Block& b) {
    for (std::size_t i = 0; i < a.alpha.size(); ++i) {
      auto ia = F.index_of(a.alpha[i]), ib = F.index_of(b.alpha[i]);
      if (ia != ib) return ia < ib;
    }
    return false;
  });
  std::vector<WeightSpace> out;
  for (Block& b : blocks) {
    WeightSpace w;
    w.alpha = std::move(b.alpha);
    for (int r = 0; r < b.basis.rows; ++r) w.basis.push_back(matrix_row(b.basis, r));
    out.push_back(std::move(w));
  }
  return out;
}

inline std::vector<WeightSpace> weight_decomposition(const LieAlgebra& L,
                                                     const std::vector<Vec>& torus) {
  std::vector<Vec> space;
  for (int i = 0; i < L.dim(); ++i) space.push_back(unit_vec(L.dim(), i));
  return weight_decomposition(L, torus, space);
}

}  // namespace modlie
