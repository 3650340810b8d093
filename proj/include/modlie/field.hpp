#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "modlie/util.hpp"

namespace modlie {

/// Element of F_{p^k}: k base-p digits packed one per byte, digit i is the
/// coefficient of t^i in the polynomial basis. Always stored reduced, so
/// equality is bit equality and zero is v == 0.
struct FqElem {
  std::uint64_t v = 0;
  bool is_zero() const { return v == 0; }
  friend bool operator==(FqElem a, FqElem b) { return a.v == b.v; }
  friend bool operator!=(FqElem a, FqElem b) { return a.v != b.v; }
  friend bool operator<(FqElem a, FqElem b) { return a.v < b.v; }
};

inline bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Arithmetic context for F_{p^k}, p > 3 prime, k <= 8. Elements are plain
/// values; all operations go through the field object. Extension arithmetic
/// reduces modulo a fixed monic irreducible modulus.
class Fq {
public:
  static constexpr std::uint32_t kMaxK = 8;
  static constexpr std::uint32_t kMaxP = 251;

  /// Prime field F_p.
  static Fq prime(std::uint32_t p) { return ext(p, 1); }

  /// F_{p^k} with the shipped fixed modulus for (p, k); deterministic search
  /// (lex-smallest monic primitive irreducible) outside the shipped table.
  static Fq ext(std::uint32_t p, std::uint32_t k) {
    return Fq(p, k, modulus_for(p, k), /*validate=*/false);
  }

  /// F_{p^k} with an explicit monic modulus, coefficients c_0..c_k, c_k = 1.
  static Fq with_modulus(std::uint32_t p, const std::vector<std::uint32_t>& coeffs) {
    check(coeffs.size() >= 2, "UnsupportedExtension", "modulus needs degree >= 1");
    std::uint32_t k = static_cast<std::uint32_t>(coeffs.size()) - 1;
    return Fq(p, k, coeffs, /*validate=*/true);
  }

  /// Registers a modulus override for (p, k); used by the data-file hook.
  static void set_modulus_override(std::uint32_t p, std::uint32_t k,
                                   const std::vector<std::uint32_t>& coeffs) {
    Fq probe(p, k, coeffs, /*validate=*/true);  // reject bad data up front
    std::lock_guard<std::mutex> lock(cache_mutex());
    cache()[{p, k}] = coeffs;
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint64_t q() const { return q_; }

  /// Modulus coefficients c_0..c_k (monic).
  std::vector<std::uint32_t> modulus() const {
    std::vector<std::uint32_t> out(mod_.begin(), mod_.begin() + k_ + 1);
    return out;
  }

  friend bool operator==(const Fq& a, const Fq& b) {
    return a.p_ == b.p_ && a.k_ == b.k_ && a.mod_ == b.mod_;
  }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

  std::string describe() const {
    std::string s = "F_" + std::to_string(p_);
    if (k_ > 1) s += "^" + std::to_string(k_);
    return s;
  }

  FqElem zero() const { return FqElem{0}; }
  FqElem one() const { return FqElem{1}; }

  /// Constant embedding of an integer (mod p).
  FqElem from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return FqElem{static_cast<std::uint64_t>(r)};
  }

  FqElem from_coeffs(const std::vector<std::uint32_t>& c) const {
    check(c.size() <= k_, "SpecMismatch", "too many coefficients for field");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      check(c[i] < p_, "SpecMismatch", "coefficient out of range");
      v |= static_cast<std::uint64_t>(c[i]) << (8 * i);
    }
    return FqElem{v};
  }

  std::vector<std::uint32_t> coeffs(FqElem a) const {
    std::vector<std::uint32_t> out(k_);
    for (std::uint32_t i = 0; i < k_; ++i) out[i] = digit(a, i);
    return out;
  }

  std::uint32_t digit(FqElem a, std::uint32_t i) const {
    return static_cast<std::uint32_t>((a.v >> (8 * i)) & 0xff);
  }

  /// Deterministic enumeration: index `i` in [0, q) maps to the element with
  /// base-p digits of i as coefficients.
  FqElem elem_from_index(std::uint64_t idx) const {
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      v |= (idx % p_) << (8 * i);
      idx /= p_;
    }
    return FqElem{v};
  }

  std::uint64_t index_of(FqElem a) const {
    std::uint64_t idx = 0, mult = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      idx += digit(a, i) * mult;
      mult *= p_;
    }
    return idx;
  }

  FqElem add(FqElem a, FqElem b) const {
    if (k_ == 1) {
      std::uint64_t s = a.v + b.v;
      if (s >= p_) s -= p_;
      return FqElem{s};
    }
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint32_t s = digit(a, i) + digit(b, i);
      if (s >= p_) s -= p_;
      v |= static_cast<std::uint64_t>(s) << (8 * i);
    }
    return FqElem{v};
  }

  FqElem neg(FqElem a) const {
    if (k_ == 1) return FqElem{a.v == 0 ? 0 : p_ - a.v};
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint32_t d = digit(a, i);
      if (d != 0) d = p_ - d;
      v |= static_cast<std::uint64_t>(d) << (8 * i);
    }
    return FqElem{v};
  }

  FqElem sub(FqElem a, FqElem b) const { return add(a, neg(b)); }

  FqElem mul(FqElem a, FqElem b) const {
    if (k_ == 1) return FqElem{(a.v * b.v) % p_};
    if (a.v == 0 || b.v == 0) return FqElem{0};
    std::uint64_t conv[2 * kMaxK - 1] = {0};
    for (std::uint32_t i = 0; i < k_; ++i) {
      std::uint64_t ai = digit(a, i);
      if (ai == 0) continue;
      for (std::uint32_t j = 0; j < k_; ++j) conv[i + j] += ai * digit(b, j);
    }
    for (std::int32_t d = 2 * static_cast<std::int32_t>(k_) - 2;
         d >= static_cast<std::int32_t>(k_); --d) {
      std::uint64_t c = conv[d] % p_;
      if (c == 0) continue;
      const auto& row = red_[static_cast<std::size_t>(d - k_)];
      for (std::uint32_t i = 0; i < k_; ++i) conv[i] += c * row[i];
    }
    std::uint64_t v = 0;
    for (std::uint32_t i = 0; i < k_; ++i) v |= (conv[i] % p_) << (8 * i);
    return FqElem{v};
  }

  FqElem pow(FqElem a, std::uint64_t e) const {
    FqElem r = one(), base = a;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  FqElem inv(FqElem a) const {
    check(!a.is_zero(), "DivisionByZero", "inverse of zero");
    return pow(a, q_ - 2);
  }

  FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }

  /// Frobenius a -> a^(p^times).
  FqElem frobenius(FqElem a, std::uint32_t times = 1) const {
    FqElem r = a;
    for (std::uint32_t i = 0; i < times; ++i) r = pow(r, p_);
    return r;
  }

  /// A fixed multiplicative generator: the class of t for shipped extension
  /// moduli (primitive by construction), otherwise the lowest-index element
  /// of full order.
  FqElem generator() const {
    FqElem t = k_ == 1 ? from_int(static_cast<std::int64_t>(p_) - static_cast<std::int64_t>(mod_[0]))
                       : elem_from_index(p_);  // the element t
    if (k_ == 1) {
      // modulus is t - g with c_0 = p - g
      if (element_order(t) == q_ - 1) return t;
    } else if (element_order(t) == q_ - 1) {
      return t;
    }
    for (std::uint64_t i = 2; i < q_; ++i) {
      FqElem c = elem_from_index(i);
      if (element_order(c) == q_ - 1) return c;
    }
    fail("UnsupportedExtension", "no generator found");
  }

  std::uint64_t element_order(FqElem a) const {
    check(!a.is_zero(), "SpecMismatch", "order of zero undefined");
    std::uint64_t n = q_ - 1;
    std::uint64_t ord = n;
    std::uint64_t m = n;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
      while (m % d == 0) {
        while (ord % d == 0 && pow(a, ord / d) == one()) ord /= d;
        m /= d;
      }
    }
    if (m > 1 && ord % m == 0 && pow(a, ord / m) == one()) ord /= m;
    return ord;
  }

  /// Deterministic lex-smallest monic primitive irreducible of degree k,
  /// the rule that generates the shipped table.
  static std::vector<std::uint32_t> search_modulus(std::uint32_t p, std::uint32_t k);

private:
  Fq(std::uint32_t p, std::uint32_t k, const std::vector<std::uint32_t>& coeffs, bool validate)
      : p_(p), k_(k) {
    check(is_prime_u32(p), "NotAPrime", "p = " + std::to_string(p));
    check(p > 3, "UnsupportedPrime", "p must exceed 3");
    check(p <= kMaxP, "UnsupportedPrime", "p above supported packing bound");
    check(k >= 1 && k <= kMaxK, "UnsupportedExtension", "k must be in 1..8");
    check(coeffs.size() == k + 1, "UnsupportedExtension", "modulus degree mismatch");
    check(coeffs[k] == 1, "UnsupportedExtension", "modulus must be monic");
    q_ = 1;
    for (std::uint32_t i = 0; i < k; ++i) q_ *= p;
    mod_.fill(0);
    for (std::uint32_t i = 0; i <= k; ++i) {
      check(coeffs[i] < p, "UnsupportedExtension", "modulus coefficient out of range");
      mod_[i] = coeffs[i];
    }
    // red_[d] = coefficients of t^(k+d) reduced mod the modulus
    if (k >= 2) {
      std::array<std::uint32_t, kMaxK> cur{};
      for (std::uint32_t i = 0; i < k; ++i)
        cur[i] = (p - mod_[i]) % p;  // t^k = -(c_0 + ... + c_{k-1} t^{k-1})
      red_[0] = cur;
      for (std::uint32_t d = 1; d + k <= 2 * k - 2; ++d) {
        std::array<std::uint32_t, kMaxK> nxt{};
        std::uint32_t top = cur[k - 1];
        for (std::uint32_t i = k - 1; i >= 1; --i) nxt[i] = cur[i - 1];
        nxt[0] = 0;
        if (top != 0) {
          for (std::uint32_t i = 0; i < k; ++i) {
            std::uint64_t t = nxt[i] + static_cast<std::uint64_t>(top) * ((p - mod_[i]) % p);
            nxt[i] = static_cast<std::uint32_t>(t % p);
          }
        }
        red_[d] = nxt;
        cur = nxt;
      }
    }
    if (validate && k >= 2) validate_irreducible();
  }

  void validate_irreducible() const;

  static std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
  }
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>& cache();
  static std::vector<std::uint32_t> modulus_for(std::uint32_t p, std::uint32_t k);

  std::uint32_t p_ = 0, k_ = 0;
  std::uint64_t q_ = 0;
  std::array<std::uint32_t, kMaxK + 1> mod_{};
  std::array<std::array<std::uint32_t, kMaxK>, kMaxK> red_{};
};

/// Dense polynomial over a field, c[i] the coefficient of t^i, no trailing
/// zeros (zero polynomial has empty c).
struct Poly {
  std::vector<FqElem> c;
  bool is_zero() const { return c.empty(); }
  int deg() const { return static_cast<int>(c.size()) - 1; }
};

inline Poly poly_trim(Poly f) {
  while (!f.c.empty() && f.c.back().is_zero()) f.c.pop_back();
  return f;
}

inline Poly poly_from_ints(const Fq& F, const std::vector<std::int64_t>& v) {
  Poly f;
  f.c.reserve(v.size());
  for (auto n : v) f.c.push_back(F.from_int(n));
  return poly_trim(std::move(f));
}

inline Poly poly_one(const Fq& F) { return Poly{{F.one()}}; }

inline Poly poly_add(const Fq& F, const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), F.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = F.add(r.c[i], b.c[i]);
  return poly_trim(std::move(r));
}

inline Poly poly_scale(const Fq& F, FqElem s, const Poly& a) {
  if (s.is_zero()) return Poly{};
  Poly r = a;
  for (auto& x : r.c) x = F.mul(s, x);
  return r;
}

inline Poly poly_sub(const Fq& F, const Poly& a, const Poly& b) {
  return poly_add(F, a, poly_scale(F, F.from_int(-1), b));
}

inline Poly poly_mul(const Fq& F, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly{};
  Poly r;
  r.c.assign(a.c.size() + b.c.size() - 1, F.zero());
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  return poly_trim(std::move(r));
}

/// Division with remainder; divisor must be nonzero.
inline std::pair<Poly, Poly> poly_divmod(const Fq& F, Poly a, const Poly& b) {
  check(!b.is_zero(), "DivisionByZero", "polynomial division by zero");
  Poly quo;
  if (a.deg() < b.deg()) return {Poly{}, poly_trim(std::move(a))};
  quo.c.assign(static_cast<std::size_t>(a.deg() - b.deg()) + 1, F.zero());
  FqElem lead_inv = F.inv(b.c.back());
  for (int d = a.deg(); d >= b.deg(); --d) {
    if (static_cast<std::size_t>(d) >= a.c.size()) continue;
    FqElem coef = a.c[static_cast<std::size_t>(d)];
    if (coef.is_zero()) continue;
    FqElem s = F.mul(coef, lead_inv);
    quo.c[static_cast<std::size_t>(d - b.deg())] = s;
    for (int i = 0; i <= b.deg(); ++i) {
      std::size_t pos = static_cast<std::size_t>(d - b.deg() + i);
      a.c[pos] = F.sub(a.c[pos], F.mul(s, b.c[static_cast<std::size_t>(i)]));
    }
  }
  return {poly_trim(std::move(quo)), poly_trim(std::move(a))};
}

inline Poly poly_monic(const Fq& F, const Poly& a) {
  if (a.is_zero() || a.c.back() == F.one()) return a;
  return poly_scale(F, F.inv(a.c.back()), a);
}

inline Poly poly_gcd(const Fq& F, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = poly_divmod(F, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(F, a);
}

inline Poly poly_derivative(const Fq& F, const Poly& a) {
  Poly r;
  if (a.deg() < 1) return r;
  r.c.resize(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i)
    r.c[i - 1] = F.mul(F.from_int(static_cast<std::int64_t>(i)), a.c[i]);
  return poly_trim(std::move(r));
}

inline FqElem poly_eval(const Fq& F, const Poly& f, FqElem x) {
  FqElem r = F.zero();
  for (std::size_t i = f.c.size(); i-- > 0;) r = F.add(F.mul(r, x), f.c[i]);
  return r;
}

inline bool poly_eq(const Poly& a, const Poly& b) {
  if (a.c.size() != b.c.size()) return false;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (a.c[i] != b.c[i]) return false;
  return true;
}

/// All roots of f in the field, by full enumeration, ascending element index.
inline std::vector<FqElem> find_roots(const Fq& F, const Poly& f,
                                      std::uint64_t enumeration_bound = 100000) {
  check(!f.is_zero(), "SpecMismatch", "root-finding on the zero polynomial");
  check(F.q() <= enumeration_bound, "FieldTooLargeForEnumeration",
        F.describe() + " exceeds enumeration bound");
  std::vector<FqElem> roots;
  for (std::uint64_t i = 0; i < F.q(); ++i) {
    FqElem x = F.elem_from_index(i);
    if (poly_eval(F, f, x).is_zero()) roots.push_back(x);
  }
  return roots;
}

inline void Fq::validate_irreducible() const {
  // A reducible monic polynomial of degree k has an irreducible factor of
  // degree d <= k/2, hence a root in F_{p^d}; check those fields exhaustively.
  for (std::uint32_t d = 1; d <= k_ / 2; ++d) {
    Fq sub = Fq::ext(p_, d);
    Poly f;
    f.c.reserve(k_ + 1);
    for (std::uint32_t i = 0; i <= k_; ++i) f.c.push_back(sub.from_int(mod_[i]));
    f = poly_trim(std::move(f));
    for (std::uint64_t idx = 0; idx < sub.q(); ++idx) {
      if (poly_eval(sub, f, sub.elem_from_index(idx)).is_zero())
        fail("UnsupportedExtension", "modulus is reducible");
    }
  }
}

inline std::vector<std::uint32_t> Fq::search_modulus(std::uint32_t p, std::uint32_t k) {
  check(is_prime_u32(p) && p > 3 && p <= kMaxP, "NotAPrime", "bad p for modulus search");
  if (k == 1) {
    // degree-1 "modulus" t - g for the smallest primitive root g mod p
    Fq f(p, 1, {0, 1}, false);
    for (std::uint32_t g = 2; g < p; ++g) {
      if (f.element_order(f.from_int(g)) == p - 1)
        return {(p - g) % p, 1};
    }
    fail("NotAPrime", "no primitive root");
  }
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) q *= p;
  check(q <= 2000000, "UnsupportedExtension", "modulus search above desk scale");
  // candidates ordered by (c_{k-1}, ..., c_0) ascending
  for (std::uint64_t n = 0; n < q; ++n) {
    std::vector<std::uint32_t> coeffs(k + 1, 0);
    coeffs[k] = 1;
    std::uint64_t rem = n;
    for (std::uint32_t i = 0; i < k; ++i) {
      coeffs[i] = static_cast<std::uint32_t>(rem % p);
      rem /= p;
    }
    bool irreducible = true;
    for (std::uint32_t d = 1; irreducible && d <= k / 2; ++d) {
      Fq sub = Fq::ext(p, d);
      Poly f;
      for (std::uint32_t i = 0; i <= k; ++i) f.c.push_back(sub.from_int(coeffs[i]));
      f = poly_trim(std::move(f));
      for (std::uint64_t idx = 0; idx < sub.q(); ++idx) {
        if (poly_eval(sub, f, sub.elem_from_index(idx)).is_zero()) {
          irreducible = false;
          break;
        }
      }
    }
    if (!irreducible) continue;
    Fq cand(p, k, coeffs, false);
    FqElem t = cand.elem_from_index(p);
    if (cand.element_order(t) == cand.q() - 1) return coeffs;
  }
  fail("UnsupportedExtension", "no primitive irreducible found");
}

inline std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>>& Fq::cache() {
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> c;
  return c;
}

inline std::vector<std::uint32_t> Fq::modulus_for(std::uint32_t p, std::uint32_t k) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find({p, k});
    if (it != cache().end()) return it->second;
  }
  // Shipped table: lex-smallest monic primitive irreducible per (p, k), so
  // serialized elements are portable across builds.
  struct Entry {
    std::uint32_t p, k;
    std::vector<std::uint32_t> coeffs;
  };
  static const std::vector<Entry> table = {
      {5, 1, {3, 1}},        {5, 2, {2, 1, 1}},      {5, 3, {2, 3, 0, 1}},
      {5, 4, {2, 2, 1, 0, 1}},
      {7, 1, {4, 1}},        {7, 2, {3, 1, 1}},      {7, 3, {2, 3, 0, 1}},
      {7, 4, {5, 3, 1, 0, 1}},
      {11, 1, {9, 1}},       {11, 2, {7, 1, 1}},     {11, 3, {4, 1, 0, 1}},
      {11, 4, {2, 1, 0, 0, 1}},
      {13, 1, {11, 1}},      {13, 2, {2, 1, 1}},     {13, 3, {6, 1, 0, 1}},
      {13, 4, {2, 1, 1, 0, 1}},
  };
  std::vector<std::uint32_t> coeffs;
  for (const auto& e : table) {
    if (e.p == p && e.k == k) {
      coeffs = e.coeffs;
      break;
    }
  }
  if (coeffs.empty()) coeffs = search_modulus(p, k);
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache().emplace(std::make_pair(p, k), coeffs);
  return coeffs;
}

/// Field homomorphism F_{p^j} -> F_{p^k} for j | k: the source generator t is
/// sent to the lowest-index root of the source modulus in the target field.
class FieldEmbedding {
public:
  FieldEmbedding(const Fq& src, const Fq& dst) : src_(src), dst_(dst) {
    check(src.p() == dst.p(), "SpecMismatch", "embedding requires equal characteristic");
    check(dst.k() % src.k() == 0, "UnsupportedExtension",
          "no embedding " + src.describe() + " -> " + dst.describe());
    if (src.k() == 1) {
      root_ = dst.zero();
      return;
    }
    Poly f;
    auto m = src.modulus();
    for (auto c : m) f.c.push_back(dst.from_int(c));
    f = poly_trim(std::move(f));
    auto roots = find_roots(dst, f, dst.q());
    check(!roots.empty(), "UnsupportedExtension", "modulus has no root in target");
    root_ = roots.front();
  }

  const Fq& src() const { return src_; }
  const Fq& dst() const { return dst_; }

  FqElem map(FqElem a) const {
    if (src_.k() == 1) return dst_.from_int(src_.digit(a, 0));
    FqElem r = dst_.zero();
    for (std::uint32_t i = src_.k(); i-- > 0;)
      r = dst_.add(dst_.mul(r, root_), dst_.from_int(src_.digit(a, i)));
    return r;
  }

private:
  Fq src_, dst_;
  FqElem root_;
};

/// Random field element helpers on top of the deterministic Rng.
inline FqElem random_elem(const Fq& F, Rng& rng) { return F.elem_from_index(rng.uniform(F.q())); }

inline FqElem random_nonzero(const Fq& F, Rng& rng) {
  return F.elem_from_index(1 + rng.uniform(F.q() - 1));
}

}  // namespace modlie
