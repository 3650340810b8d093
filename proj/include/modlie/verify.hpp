#pragma once

#include <map>
#include <string>
#include <vector>

#include "modlie/gen.hpp"
#include "modlie/pstruct.hpp"

namespace modlie {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Structural axioms: antisymmetry of the bracket on random elements plus
/// the builder-level Jacobi and grading validation over all basis triples.
inline CheckResult check_axioms(const LieAlgebra& L, std::uint64_t seed = 0) {
  CheckResult r{"axioms:" + L.name(), true, "dim " + std::to_string(L.dim())};
  Rng rng(seed ^ fnv1a64(L.name()));
  for (int t = 0; t < 10 && r.pass; ++t) {
    Vec x = random_vec(L.field(), L.dim(), rng);
    if (!vec_is_zero(L.bracket(x, x))) {
      r.pass = false;
      r.detail = "[x, x] != 0";
    }
  }
  if (r.pass) {
    if (auto issue = L.validate()) {
      r.pass = false;
      r.detail = issue->kind + " failed at (" + std::to_string(issue->i) + ", " +
                 std::to_string(issue->j) + ", " + std::to_string(issue->k) + ")";
    }
  }
  return r;
}

namespace checks {

/// The order of e_{-1} + e_0 drops from 1 to 0 under the graded projection,
/// which only happens below filtration level zero.
inline CheckResult ord_filtration_remark(const Fq& F) {
  WittAlgebra W = build_zassenhaus(F, 1);
  FiltrationView V(W.L);
  Vec h = vec_add(F, unit_vec(5, 0), unit_vec(5, 1));
  OrdComparison c = ord_compare(V, h);
  bool ok = c.ord_h == 1 && c.ord_gr_h == 0 && !c.equal && c.below_filtration_zero;
  return {"ord-filtration-remark", ok,
          "ord(h)=" + std::to_string(c.ord_h) + " ord(gr h)=" + std::to_string(c.ord_gr_h)};
}

/// Inside filtration level zero the p-order is blind to the grading.
inline CheckResult ord_graded_agreement(const Fq& F, std::uint64_t seed) {
  for (const char* name : {"W:1:1", "W:2:1,1"}) {
    WittAlgebra W = witt_by_name(F, name);
    FiltrationView V(W.L);
    Rng rng(seed ^ fnv1a64(name));
    for (int t = 0; t < 25; ++t) {
      Vec h = random_vec(F, W.L.dim(), rng);
      for (int i = 0; i < W.L.dim(); ++i)
        if (W.L.degrees()[static_cast<std::size_t>(i)] < 0) h[static_cast<std::size_t>(i)] = F.zero();
      if (vec_is_zero(h)) continue;
      OrdComparison c = ord_compare(V, h);  // throws on disagreement
      if (!c.equal || c.below_filtration_zero)
        return {"ord-graded-agreement", false, std::string("failed on ") + name};
    }
  }
  return {"ord-graded-agreement", true, "50 elements of filtration level >= 0"};
}

/// The degree-0 weights never collide with the weights of the extreme
/// graded components.
inline CheckResult weight_separation(const Fq& F) {
  for (const char* name : {"W:2:1,1", "W:1:2"}) {
    WittAlgebra W = witt_by_name(F, name);
    std::vector<MultiIndex> g0 = torus_weights(W, 0);
    for (int k : {-1, W.s})
      for (const MultiIndex& w : torus_weights(W, k))
        for (const MultiIndex& v : g0)
          if (w == v)
            return {"weight-separation", false, std::string("collision in ") + name};
  }
  return {"weight-separation", true, "degree 0 vs degrees -1 and s"};
}

/// The operator route and the adjoint-equation route compute the same p-th
/// power, and its ad really is the p-th power of ad.
inline CheckResult p_power_adjoint(const Fq& F, std::uint64_t seed) {
  WittAlgebra W = witt_by_name(F, "W:2:1,1");
  Rng rng(seed ^ 0x70707777ULL);
  for (int t = 0; t < 5; ++t) {
    Vec y = random_vec(F, W.L.dim(), rng);
    Vec z = witt_p_power(W, y);
    if (z != p_power(W.L, y))
      return {"p-power-adjoint", false, "operator and solve routes disagree"};
    if (W.L.ad(z) != mat_pow(F, W.L.ad(y), F.p()))
      return {"p-power-adjoint", false, "ad(y^[p]) != (ad y)^p"};
  }
  return {"p-power-adjoint", true, "5 random elements in W:2:1,1"};
}

/// Digit-splitting embeds W(1,2) into W(2,1) hitting the top component.
inline CheckResult embedding_heights(const Fq& F) {
  WittAlgebra src = witt_by_name(F, "W:1:2");
  IotaEmbedding io = iota_embed(src);  // verifies injectivity and brackets
  int s_target = io.target.s;
  for (int c = 0; c < src.L.dim(); ++c) {
    if (src.L.degrees()[static_cast<std::size_t>(c)] != src.s) continue;
    bool hit = false;
    for (int r = 0; r < io.target.L.dim(); ++r)
      if (!io.map.at(r, c).is_zero()) {
        hit = true;
        if (io.target.L.degrees()[static_cast<std::size_t>(r)] != s_target)
          return {"embedding-heights", false, "top component escaped the top degree"};
      }
    if (!hit) return {"embedding-heights", false, "top basis vector mapped to zero"};
  }
  return {"embedding-heights", true,
          "degree " + std::to_string(src.s) + " lands in degree " + std::to_string(s_target)};
}

/// Iterated brackets against e_{-1} + alpha e_s shift the coefficient
/// column with the two alpha wrap terms.
inline CheckResult shift_pattern(const Fq& F, std::uint64_t seed) {
  WittAlgebra Z = build_zassenhaus(F, 1);
  const int d = Z.L.dim(), s = Z.s;
  Rng rng(seed ^ 0x5a55ULL);
  for (int t = 0; t < 3; ++t) {
    Vec lam = random_nonzero_vec(F, d, rng);
    FqElem alpha = random_nonzero(F, rng);
    Vec y = unit_vec(d, 0);
    y[static_cast<std::size_t>(d - 1)] = alpha;
    Vec z = lam;
    for (int k = 1; k <= s; ++k) {
      z = Z.L.bracket(y, z);
      Vec want = vec_zero(d);
      want[0] = lam[static_cast<std::size_t>(k)];
      for (int j = 0; j + k <= s - 1; ++j)
        want[static_cast<std::size_t>(1 + j)] = lam[static_cast<std::size_t>(j + k + 1)];
      want[static_cast<std::size_t>(1 + s - k)] =
          F.sub(lam[static_cast<std::size_t>(d - 1)], F.mul(alpha, lam[0]));
      for (int u = 1; u <= k - 1; ++u)
        want[static_cast<std::size_t>(1 + s - k + u)] =
            F.mul(alpha, lam[static_cast<std::size_t>(u)]);
      want[static_cast<std::size_t>(d - 1)] =
          F.mul(F.from_int(2), F.mul(alpha, lam[static_cast<std::size_t>(k)]));
      if (z != want) return {"shift-pattern", false, "iterate " + std::to_string(k)};
    }
  }
  return {"shift-pattern", true, "3 random columns, all iterates"};
}

/// Pairs rooted at the top of W(2,1) never reach past p^{|n|} dimensions.
inline CheckResult derived_bound(const Fq& F, std::uint64_t seed) {
  WittAlgebra W = witt_by_name(F, "W:2:1,1");
  Vec x = unit_vec(W.L.dim(), W.basis_index(W.O.dim() - 1, 0));
  ObstructionReport rep = obstruction_report(W, x, 5, seed);
  bool ok = rep.all_bounded && rep.none_generates && rep.envelopes_hold;
  return {"derived-bound", ok,
          "bound " + std::to_string(rep.bound) + " over " + std::to_string(rep.samples.size()) +
              " samples"};
}

/// Every nonzero base-field x in Zass(1) finds a split partner in at most a
/// quadratic extension.
inline CheckResult partner_sweep(const Fq& F, std::uint64_t seed) {
  WittAlgebra Z = build_zassenhaus(F, 1);
  Rng rng(seed ^ 0x1337ULL);
  int worst = 1;
  for (int t = 0; t < 40; ++t) {
    Vec x = random_nonzero_vec(F, Z.L.dim(), rng);
    ZassenhausPartner zp = zassenhaus_partner(Z, x);
    worst = std::max(worst, zp.ext_mult);
    if (zp.cert.closure_dim != Z.L.dim())
      return {"partner-sweep", false, "partner failed to certify"};
  }
  if (worst > 2) return {"partner-sweep", false, "needed extension degree above 2"};
  return {"partner-sweep", true, "40 random x, max extension multiplier " + std::to_string(worst)};
}

/// The graded recipe certifies the small type-W algebras over a quadratic
/// extension.
inline CheckResult recipe_closure(const Fq& F) {
  Fq K = Fq::ext(F.p(), 2);
  for (const char* name : {"W:1:1", "W:2:1,1", "W:1:2"}) {
    WittAlgebra W = witt_by_name(K, name);
    GradedRecipe r = graded_recipe_pair(W);
    if (r.cert.closure_dim != W.L.dim())
      return {"recipe-closure", false, std::string("short closure on ") + name};
  }
  return {"recipe-closure", true, "full closures over the quadratic extension"};
}

/// The exhaustive pair census over sl_2 reproduces the hand count of
/// strata sizes.
inline CheckResult census_exhaustive(const Fq& F) {
  if (F.p() != 5 || F.k() != 1)
    return {"census-exhaustive", true, "skipped: pinned to the 5-element field"};
  LieAlgebra L = classical_by_name(F, "A1").L;
  StrataCensus c = strata_census(L, SamplingPlan::all());
  std::map<int, long long> expect{{0, 1}, {1, 744}, {2, 2880}, {3, 12000}};
  bool ok = c.histogram == expect;
  return {"census-exhaustive", ok, "15625 pairs over F_5"};
}

}  // namespace checks

/// Behavior-named checks, optionally filtered by name.
inline std::vector<CheckResult> run_named_checks(const Fq& F, std::uint64_t seed,
                                                 const std::string& only = "") {
  std::vector<CheckResult> out;
  auto want = [&](const char* n) { return only.empty() || only == n; };
  if (want("ord-filtration-remark")) out.push_back(checks::ord_filtration_remark(F));
  if (want("ord-graded-agreement")) out.push_back(checks::ord_graded_agreement(F, seed));
  if (want("weight-separation")) out.push_back(checks::weight_separation(F));
  if (want("p-power-adjoint")) out.push_back(checks::p_power_adjoint(F, seed));
  if (want("embedding-heights")) out.push_back(checks::embedding_heights(F));
  if (want("shift-pattern")) out.push_back(checks::shift_pattern(F, seed));
  if (want("derived-bound")) out.push_back(checks::derived_bound(F, seed));
  if (want("partner-sweep")) out.push_back(checks::partner_sweep(F, seed));
  if (want("recipe-closure")) out.push_back(checks::recipe_closure(F));
  if (want("census-exhaustive")) out.push_back(checks::census_exhaustive(F));
  check(!out.empty(), "SpecMismatch", "no check named " + only);
  return out;
}

inline std::vector<std::string> default_axiom_roster() {
  return {"A1", "A2", "B2", "G2", "W:1:1", "W:2:1,1", "Zass:1", "Zass:2"};
}

}  // namespace modlie
