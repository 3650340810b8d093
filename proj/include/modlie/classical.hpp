#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modlie/field.hpp"
#include "modlie/liealg.hpp"
#include "modlie/linalg.hpp"
#include "modlie/rootsystem.hpp"

namespace modlie {

/// A classical algebra together with its root chart: which basis index hosts
/// e_r and e_{-r} for every positive root r, and which indices span the
/// Cartan subalgebra (paired with the simple-root number whose coroot they
/// represent). The chart survives the center quotient (psl); gl and pgl are
/// uncharted and route generation through the central-extension recipe.
struct ClassicalAlgebra {
  LieAlgebra L;
  std::string kind;  // chevalley | sl | psl | gl | pgl
  std::string type;  // root-system letter for charted kinds
  std::shared_ptr<const RootSystem> phi;
  std::vector<int> eplus, eminus;
  std::vector<std::pair<int, int>> cartan_slots;  // (basis index, simple number)

  bool charted() const { return phi != nullptr; }

  std::vector<Vec> cartan_basis() const {
    std::vector<Vec> out;
    for (const auto& [slot, t] : cartan_slots) out.push_back(unit_vec(L.dim(), slot));
    return out;
  }

  ClassicalAlgebra with_field(const Fq& K) const {
    return {L.with_field(K), kind, type, phi, eplus, eminus, cartan_slots};
  }
};

inline std::string root_label(const char* head, const std::vector<int>& c) {
  std::string s = head;
  s += '[';
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(c[i]);
  }
  s += ']';
  return s;
}

/// Chevalley-basis algebra of the given type: basis e_r (one per positive
/// root, in root order), then h_1..h_l (simple coroots), then e_{-r}.
inline ClassicalAlgebra chevalley_algebra(const Fq& F, const std::string& type, int rank,
                                          const std::string& name = "") {
  check(F.p() > 3, "UnsupportedType", "characteristic must exceed 3");
  auto phi = std::make_shared<const RootSystem>(type, rank);
  int m = phi->positive_count(), l = rank;
  LieAlgebraBuilder b(F, 2 * m + l);
  b.set_name(name.empty() ? (type == "G" ? "G2" : type + std::to_string(rank)) : name);
  for (int i = 0; i < m; ++i) {
    b.set_label(i, root_label("e", phi->root(i)));
    b.set_degree(i, phi->height(i));
    b.set_label(m + l + i, root_label("f", phi->root(i)));
    b.set_degree(m + l + i, -phi->height(i));
  }
  for (int t = 0; t < l; ++t) {
    b.set_label(m + t, "h" + std::to_string(t + 1));
    b.set_degree(m + t, 0);
  }

  auto simple = [&](int t) {
    std::vector<int> e(static_cast<std::size_t>(rank), 0);
    e[static_cast<std::size_t>(t)] = 1;
    return e;
  };

  for (int a = 0; a < m; ++a)
    for (int c = a + 1; c < m; ++c) {
      std::vector<int> s = phi->root(a);
      for (int i = 0; i < rank; ++i) s[static_cast<std::size_t>(i)] += phi->root(c)[static_cast<std::size_t>(i)];
      int si = phi->index_of(s);
      if (si < 0) continue;
      std::int64_t n = phi->n_positive(a, c);
      b.add(a, c, si, n);
      b.add(m + l + a, m + l + c, m + l + si, -n);
    }

  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      if (a == c) {
        auto co = phi->coroot(a);
        for (int t = 0; t < l; ++t)
          if (co[static_cast<std::size_t>(t)] != 0) b.add(a, m + l + a, m + t, co[static_cast<std::size_t>(t)]);
        continue;
      }
      std::vector<int> d = phi->root(a);
      bool pos = true, neg = true;
      for (int i = 0; i < rank; ++i) {
        d[static_cast<std::size_t>(i)] -= phi->root(c)[static_cast<std::size_t>(i)];
        if (d[static_cast<std::size_t>(i)] < 0) pos = false;
        if (d[static_cast<std::size_t>(i)] > 0) neg = false;
      }
      if (pos) {
        int u = phi->index_of(d);
        if (u >= 0) b.add(a, m + l + c, u, phi->n_mixed(a, c));
      } else if (neg) {
        for (int& v : d) v = -v;
        int w = phi->index_of(d);
        if (w >= 0) b.add(a, m + l + c, m + l + w, phi->n_mixed(a, c));
      }
    }

  for (int t = 0; t < l; ++t)
    for (int a = 0; a < m; ++a) {
      std::int64_t pr = phi->pairing(phi->root(a), simple(t));
      if (pr % static_cast<std::int64_t>(F.p()) == 0) continue;
      b.add(a, m + t, a, -pr);
      b.add(m + t, m + l + a, m + l + a, -pr);
    }

  ClassicalAlgebra g{b.build(), "chevalley", type, phi, {}, {}, {}};
  for (int i = 0; i < m; ++i) {
    g.eplus.push_back(i);
    g.eminus.push_back(m + l + i);
  }
  for (int t = 0; t < l; ++t) g.cartan_slots.push_back({m + t, t});
  return g;
}

inline ClassicalAlgebra sl_algebra(const Fq& F, int n) {
  check(n >= 2, "UnsupportedType", "sl needs n >= 2");
  ClassicalAlgebra g = chevalley_algebra(F, "A", n - 1, "sl:" + std::to_string(n));
  g.kind = "sl";
  return g;
}

/// Center quotient of sl_n; keeps the root chart because the center sits
/// inside the Cartan span, so all e_r representatives survive unchanged.
inline ClassicalAlgebra psl_algebra(const Fq& F, int n) {
  ClassicalAlgebra s = sl_algebra(F, n);
  RowSpace z = center(s.L);
  if (z.dim() == 0) {
    s.kind = "psl";
    s.L = s.L.renamed("psl:" + std::to_string(n));
    return s;
  }
  Quotient Q = quotient(s.L, z);
  std::vector<int> where(static_cast<std::size_t>(s.L.dim()), -1);
  for (std::size_t a = 0; a < Q.complement.size(); ++a)
    where[static_cast<std::size_t>(Q.complement[a])] = static_cast<int>(a);
  ClassicalAlgebra g{Q.algebra.renamed("psl:" + std::to_string(n)),
                     "psl", "A", s.phi, {}, {}, {}};
  for (std::size_t i = 0; i < s.eplus.size(); ++i) {
    int ep = where[static_cast<std::size_t>(s.eplus[i])];
    int em = where[static_cast<std::size_t>(s.eminus[i])];
    check(ep >= 0 && em >= 0, "SpecMismatch", "center quotient collapsed a root vector");
    g.eplus.push_back(ep);
    g.eminus.push_back(em);
  }
  for (const auto& [slot, t] : s.cartan_slots)
    if (where[static_cast<std::size_t>(slot)] >= 0)
      g.cartan_slots.push_back({where[static_cast<std::size_t>(slot)], t});
  return g;
}

/// Full matrix algebra gl_n on the basis E_{ab}, graded by b - a.
inline ClassicalAlgebra gl_algebra(const Fq& F, int n) {
  check(n >= 2, "UnsupportedType", "gl needs n >= 2");
  check(F.p() > 3, "UnsupportedType", "characteristic must exceed 3");
  LieAlgebraBuilder b(F, n * n);
  b.set_name("gl:" + std::to_string(n));
  auto idx = [n](int r, int c) { return r * n + c; };
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      b.set_label(idx(r, c), "E" + std::to_string(r + 1) + std::to_string(c + 1));
      b.set_degree(idx(r, c), c - r);
    }
  for (int i = 0; i < n * n; ++i)
    for (int j = i + 1; j < n * n; ++j) {
      int a = i / n, bb = i % n, c = j / n, d = j % n;
      if (bb == c) b.add(i, j, idx(a, d), 1);
      if (d == a) b.add(i, j, idx(c, bb), -1);
    }
  return {b.build(), "gl", "", nullptr, {}, {}, {}};
}

inline ClassicalAlgebra pgl_algebra(const Fq& F, int n) {
  ClassicalAlgebra g = gl_algebra(F, n);
  RowSpace z = center(g.L);
  check(z.dim() == 1, "SpecMismatch", "gl center is not one-dimensional");
  Quotient Q = quotient(g.L, z);
  return {Q.algebra.renamed("pgl:" + std::to_string(n)), "pgl", "", nullptr, {}, {}, {}};
}

/// Parses the CLI-facing names: "A1".."D9", "G2", "sl:n", "psl:n", "gl:n",
/// "pgl:n".
inline ClassicalAlgebra classical_by_name(const Fq& F, const std::string& name) {
  auto tail_int = [&](std::size_t from) -> int {
    check(from < name.size(), "UnsupportedType", "malformed algebra name " + name);
    int v = 0;
    for (std::size_t i = from; i < name.size(); ++i) {
      check(name[i] >= '0' && name[i] <= '9', "UnsupportedType", "malformed algebra name " + name);
      v = v * 10 + (name[i] - '0');
    }
    return v;
  };
  if (name.rfind("sl:", 0) == 0) return sl_algebra(F, tail_int(3));
  if (name.rfind("psl:", 0) == 0) return psl_algebra(F, tail_int(4));
  if (name.rfind("gl:", 0) == 0) return gl_algebra(F, tail_int(3));
  if (name.rfind("pgl:", 0) == 0) return pgl_algebra(F, tail_int(4));
  check(!name.empty(), "UnsupportedType", "empty algebra name");
  std::string letter(1, name[0]);
  if (letter == "A" || letter == "B" || letter == "C" || letter == "D" || letter == "G")
    return chevalley_algebra(F, letter, tail_int(1));
  fail("UnsupportedType", "unknown algebra name " + name);
}

/// Value of positive root i at a vector y lying in the Cartan span.
inline FqElem root_value(const ClassicalAlgebra& g, int i, const Vec& y) {
  const Fq& F = g.L.field();
  FqElem v = F.zero();
  for (const auto& [slot, t] : g.cartan_slots) {
    std::vector<int> e(static_cast<std::size_t>(g.phi->rank()), 0);
    e[static_cast<std::size_t>(t)] = 1;
    v = F.add(v, F.mul(y[static_cast<std::size_t>(slot)],
                       F.from_int(g.phi->pairing(g.phi->root(i), e))));
  }
  return v;
}

/// Searches the Cartan subalgebra for y whose root values are pairwise
/// distinct over the full root set {±r}: 200 random draws, then an exhaustive
/// sweep when the coordinate space is enumerable.
inline Vec regular_cartan_element(const ClassicalAlgebra& g, Rng& rng) {
  check(g.charted(), "UnsupportedType", "regular Cartan search needs a root chart");
  const Fq& F = g.L.field();
  int m = g.phi->positive_count();
  int l = static_cast<int>(g.cartan_slots.size());
  std::vector<std::vector<FqElem>> pair_scalar(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (const auto& [slot, t] : g.cartan_slots) {
      std::vector<int> e(static_cast<std::size_t>(g.phi->rank()), 0);
      e[static_cast<std::size_t>(t)] = 1;
      pair_scalar[static_cast<std::size_t>(i)].push_back(
          F.from_int(g.phi->pairing(g.phi->root(i), e)));
    }
  std::vector<FqElem> vals(static_cast<std::size_t>(2 * m));
  auto regular = [&](const std::vector<FqElem>& c) {
    for (int i = 0; i < m; ++i) {
      FqElem v = F.zero();
      for (int t = 0; t < l; ++t)
        v = F.add(v, F.mul(c[static_cast<std::size_t>(t)],
                           pair_scalar[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]));
      vals[static_cast<std::size_t>(2 * i)] = v;
      vals[static_cast<std::size_t>(2 * i + 1)] = F.neg(v);
    }
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 1; i < vals.size(); ++i)
      if (vals[i] == vals[i - 1]) return false;
    return true;
  };
  auto to_vec = [&](const std::vector<FqElem>& c) {
    Vec y = vec_zero(g.L.dim());
    for (int t = 0; t < l; ++t)
      y[static_cast<std::size_t>(g.cartan_slots[static_cast<std::size_t>(t)].first)] =
          c[static_cast<std::size_t>(t)];
    return y;
  };

  if (2 * m <= static_cast<int>(F.q())) {
    std::vector<FqElem> c(static_cast<std::size_t>(l));
    for (int draw = 0; draw < 200; ++draw) {
      for (auto& x : c) x = random_elem(F, rng);
      if (regular(c)) return to_vec(c);
    }
    if (F.q() <= 10000) {
      double space = 1;
      for (int t = 0; t < l; ++t) space *= static_cast<double>(F.q());
      if (space <= 4e6) {
        std::vector<std::uint64_t> od(static_cast<std::size_t>(l), 0);
        while (true) {
          for (int t = 0; t < l; ++t) c[static_cast<std::size_t>(t)] = F.elem_from_index(od[static_cast<std::size_t>(t)]);
          if (regular(c)) return to_vec(c);
          int t = 0;
          while (t < l && ++od[static_cast<std::size_t>(t)] == F.q()) od[static_cast<std::size_t>(t++)] = 0;
          if (t == l) break;
        }
      }
    }
  }
  fail("FieldTooSmall", "no regular Cartan element found over " + F.describe());
}

/// exp(t ad v) as a matrix; ad v must be nilpotent of index < p so that the
/// factorials in the series stay invertible.
inline Matrix exp_ad_nilpotent(const LieAlgebra& L, const Vec& v, FqElem t) {
  const Fq& F = L.field();
  Matrix A = L.ad(v);
  Matrix M = Matrix::identity(F, L.dim());
  if (A.is_zero()) return M;
  Matrix Apow = A;
  FqElem coef = t;
  for (std::uint64_t k = 1;;) {
    M = mat_add(F, M, mat_scale(F, coef, Apow));
    Apow = mat_mul(F, A, Apow);
    ++k;
    if (Apow.is_zero()) break;
    check(k < F.p(), "NilpotencyIndexTooLarge",
          "ad is not nilpotent of index below the characteristic");
    coef = F.div(F.mul(coef, t), F.from_int(static_cast<std::int64_t>(k)));
  }
  return M;
}

/// Image of w under exp(t ad v) without forming the matrix.
inline Vec exp_ad_apply(const LieAlgebra& L, const Vec& v, FqElem t, Vec w) {
  const Fq& F = L.field();
  Vec out = w, term = w;
  for (std::uint64_t k = 1;; ++k) {
    Vec nxt = L.bracket(v, term);
    if (vec_is_zero(nxt)) break;
    check(k < F.p(), "NilpotencyIndexTooLarge",
          "ad is not nilpotent of index below the characteristic");
    term = vec_scale(F, F.div(t, F.from_int(static_cast<std::int64_t>(k))), nxt);
    if (vec_is_zero(term)) break;
    out = vec_add(F, out, term);
  }
  return out;
}

/// Root-group automorphism exp(t ad e_r) for the i-th positive root (or its
/// negative); verified to preserve brackets on every basis pair.
inline Matrix exp_ad_automorphism(const ClassicalAlgebra& g, int i, bool negative, FqElem t) {
  check(g.charted(), "UnsupportedType", "root-group automorphisms need a root chart");
  int slot = negative ? g.eminus[static_cast<std::size_t>(i)] : g.eplus[static_cast<std::size_t>(i)];
  Matrix M = exp_ad_nilpotent(g.L, unit_vec(g.L.dim(), slot), t);
  const Fq& F = g.L.field();
  std::vector<Vec> col(static_cast<std::size_t>(g.L.dim()));
  for (int a = 0; a < g.L.dim(); ++a) col[static_cast<std::size_t>(a)] = mat_vec(F, M, unit_vec(g.L.dim(), a));
  for (int a = 0; a < g.L.dim(); ++a)
    for (int b = a + 1; b < g.L.dim(); ++b) {
      Vec lhs = mat_vec(F, M, g.L.bracket_basis(a, b));
      Vec rhs = g.L.bracket(col[static_cast<std::size_t>(a)], col[static_cast<std::size_t>(b)]);
      check(lhs == rhs, "SpecMismatch", "exp(ad) failed the automorphism check");
    }
  return M;
}

struct Densified {
  Vec image;
  Matrix sigma;
  Matrix sigma_inv;
};

/// Pushes x through random products of root-group automorphisms until every
/// root component is nonzero. The matrices are only assembled for the
/// successful product.
inline Densified densify_components(const ClassicalAlgebra& g, const Vec& x, Rng& rng,
                                    int budget = 200) {
  check(g.charted(), "UnsupportedType", "densification needs a root chart");
  check(!vec_is_zero(x), "SpecMismatch", "densification needs a nonzero vector");
  const Fq& F = g.L.field();
  int m = g.phi->positive_count();
  auto dense = [&](const Vec& v) {
    for (int i = 0; i < m; ++i)
      if (v[static_cast<std::size_t>(g.eplus[static_cast<std::size_t>(i)])].is_zero() ||
          v[static_cast<std::size_t>(g.eminus[static_cast<std::size_t>(i)])].is_zero())
        return false;
    return true;
  };
  if (dense(x)) {
    Matrix id = Matrix::identity(F, g.L.dim());
    return {x, id, id};
  }
  std::vector<int> order(static_cast<std::size_t>(2 * m));
  for (int i = 0; i < 2 * m; ++i) order[static_cast<std::size_t>(i)] = i;
  std::vector<FqElem> ts(static_cast<std::size_t>(2 * m));
  auto gen_vec = [&](int signed_root) {
    int i = signed_root % m;
    return unit_vec(g.L.dim(), signed_root < m ? g.eplus[static_cast<std::size_t>(i)]
                                               : g.eminus[static_cast<std::size_t>(i)]);
  };
  for (int draw = 0; draw < budget; ++draw) {
    for (int i = 2 * m - 1; i > 0; --i)
      std::swap(order[static_cast<std::size_t>(i)],
                order[static_cast<std::size_t>(rng.uniform(static_cast<std::uint64_t>(i) + 1))]);
    for (auto& t : ts) t = random_nonzero(F, rng);
    Vec v = x;
    for (int i = 0; i < 2 * m; ++i)
      v = exp_ad_apply(g.L, gen_vec(order[static_cast<std::size_t>(i)]), ts[static_cast<std::size_t>(i)], v);
    if (!dense(v)) continue;
    Matrix sigma = Matrix::identity(F, g.L.dim());
    Matrix inv = Matrix::identity(F, g.L.dim());
    for (int i = 0; i < 2 * m; ++i) {
      Vec gv = gen_vec(order[static_cast<std::size_t>(i)]);
      sigma = mat_mul(F, exp_ad_nilpotent(g.L, gv, ts[static_cast<std::size_t>(i)]), sigma);
      inv = mat_mul(F, inv, exp_ad_nilpotent(g.L, gv, F.neg(ts[static_cast<std::size_t>(i)])));
    }
    check(mat_vec(F, sigma, x) == v && mat_vec(F, inv, v) == x, "SpecMismatch",
          "densification matrices disagree with the vector route");
    return {v, sigma, inv};
  }
  fail("SearchBudgetExhausted",
       "component densification budget exhausted over " + F.describe() + "; extend the field");
}

struct GenerationCertificate {
  ClassicalAlgebra algebra;  // possibly over an extension field
  int degree;                // extension degree over the input field
  Vec x, y;                  // the certified generating pair
  int closure_rounds;
};

/// Generating partner for any nonzero x: densify x by an automorphism sigma,
/// take a regular Cartan element y0, and certify that (x, sigma^{-1} y0)
/// generates. Escalates the field up to total extension degree 4 when the
/// base field is too small.
inline GenerationCertificate theoremB_partner(const ClassicalAlgebra& g, const Vec& x, Rng& rng) {
  check(g.charted(), "UnsupportedType",
        "partner search needs a root chart; use the central-extension route instead");
  check(!vec_is_zero(x), "SpecMismatch", "partner search needs x != 0");
  const Fq& base = g.L.field();
  for (std::uint32_t mult = 1; base.k() * mult <= 4; ++mult) {
    Fq K = mult == 1 ? base : Fq::ext(base.p(), base.k() * mult);
    ClassicalAlgebra gx = mult == 1 ? g : g.with_field(K);
    Vec xx = x;
    if (mult > 1) {
      FieldEmbedding emb(base, K);
      for (auto& c : xx) c = emb.map(c);
    }
    Rng sub = rng.fork(mult);
    try {
      for (int attempt = 0; attempt < 3; ++attempt) {
        Vec y0 = regular_cartan_element(gx, sub);
        Densified d = densify_components(gx, xx, sub);
        Vec y = mat_vec(K, d.sigma_inv, y0);
        GeneratedSubalgebra got = generated_subalgebra(gx.L, xx, y);
        if (got.space.dim() == gx.L.dim())
          return {std::move(gx), static_cast<int>(mult), std::move(xx), std::move(y), got.rounds};
      }
    } catch (const Error& e) {
      if (e.code() != "FieldTooSmall" && e.code() != "SearchBudgetExhausted") throw;
    }
  }
  fail("SearchBudgetExhausted", "no certified partner up to extension degree 4");
}

/// Generating partner through a one-dimensional center: find a partner for
/// the image of x in g/z, lift it, and scan the central shifts y_0 + alpha z.
inline Vec central_extension_partner(const LieAlgebra& L, const Vec& x, Rng& rng,
                                     int quotient_budget = 500) {
  const Fq& F = L.field();
  RowSpace z = center(L);
  check(z.dim() == 1, "SpecMismatch", "central-extension route needs a 1-dimensional center");
  check(!z.contains(x), "SpecMismatch", "x must not be central");
  Quotient Q = quotient(L, z);
  Vec xbar = quotient_project(Q, L, x);
  std::optional<Vec> ybar;
  for (int i = 0; i < quotient_budget && !ybar; ++i) {
    Vec cand(static_cast<std::size_t>(Q.algebra.dim()));
    for (auto& c : cand) c = random_elem(F, rng);
    if (generated_subalgebra(Q.algebra, xbar, cand).space.dim() == Q.algebra.dim()) ybar = cand;
  }
  check(ybar.has_value(), "SearchBudgetExhausted",
        "no quotient partner found; the quotient may not be 1.5-generated");
  Vec y0 = quotient_lift(Q, L, *ybar);
  const Vec& zv = z.rows()[0];
  for (std::uint64_t idx = 0; idx < F.q(); ++idx) {
    Vec y = vec_add(F, y0, vec_scale(F, F.elem_from_index(idx), zv));
    if (generated_subalgebra(L, x, y).space.dim() == L.dim()) return y;
  }
  fail("NoPartnerInField", "every central shift failed; extend the field");
}

}  // namespace modlie
