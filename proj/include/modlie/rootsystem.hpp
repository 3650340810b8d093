#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "modlie/util.hpp"

namespace modlie {

/// Exact rational scalar for the sign recursion; values stay tiny.
struct Rat {
  std::int64_t num = 0, den = 1;
  Rat() = default;
  Rat(std::int64_t n) : num(n) {}
  Rat(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }
  void normalize() {
    check(den != 0, "SpecMismatch", "rational with zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool is_integer() const { return den == 1; }
};

inline Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
inline Rat operator-(Rat a) { return Rat(-a.num, a.den); }
inline Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
inline Rat operator/(Rat a, Rat b) {
  check(b.num != 0, "SpecMismatch", "rational division by zero");
  return Rat(a.num * b.den, a.den * b.num);
}

/// Reduced root system of type A, B, C, D, or G2, with positive roots in
/// simple-root coordinates and integral Chevalley structure constants.
///
/// Signs are fixed deterministically: positive roots are ordered by height
/// then lexicographically; for each non-simple positive root g the
/// decomposition g = a1 + b with minimal a1 (always a simple root under this
/// order) gets N(a1, b) = +(p+1), where p counts the steps b, b-a1, ... stay
/// roots. All other constants follow from the Jacobi identity, so the
/// convention is certified afterwards by validating the built algebra.
class RootSystem {
public:
  RootSystem(const std::string& type, int rank) : type_(type), rank_(rank) {
    build_gram();
    generate_roots();
    resolve_constants();
  }

  const std::string& type() const { return type_; }
  int rank() const { return rank_; }
  int positive_count() const { return static_cast<int>(roots_.size()); }
  const std::vector<std::vector<int>>& positive_roots() const { return roots_; }
  const std::vector<int>& root(int i) const { return roots_[static_cast<std::size_t>(i)]; }
  int height(int i) const { return heights_[static_cast<std::size_t>(i)]; }
  int norm(int i) const { return norms_[static_cast<std::size_t>(i)]; }  // (r, r)

  /// Index of a positive root given coordinates, or -1.
  int index_of(const std::vector<int>& coords) const {
    auto it = index_.find(coords);
    return it == index_.end() ? -1 : it->second;
  }

  /// Symmetric bilinear form on root-lattice vectors.
  std::int64_t form(const std::vector<int>& a, const std::vector<int>& b) const {
    std::int64_t s = 0;
    for (int i = 0; i < rank_; ++i)
      for (int j = 0; j < rank_; ++j)
        s += static_cast<std::int64_t>(a[static_cast<std::size_t>(i)]) *
             gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
             b[static_cast<std::size_t>(j)];
    return s;
  }

  /// Cartan pairing <r, s-check> = 2 (r,s) / (s,s).
  std::int64_t pairing(const std::vector<int>& r, const std::vector<int>& s) const {
    std::int64_t num = 2 * form(r, s), den = form(s, s);
    check(num % den == 0, "SpecMismatch", "non-integral Cartan pairing");
    return num / den;
  }

  /// Coordinates of the coroot of positive root r in the simple-coroot basis;
  /// entry i is a_i (alpha_i, alpha_i) / (r, r), always integral.
  std::vector<std::int64_t> coroot(int r) const {
    std::vector<std::int64_t> c(static_cast<std::size_t>(rank_));
    std::int64_t dr = norms_[static_cast<std::size_t>(r)];
    for (int i = 0; i < rank_; ++i) {
      std::int64_t num = static_cast<std::int64_t>(roots_[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]) *
                         gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
      check(num % dr == 0, "SpecMismatch", "non-integral coroot coefficient");
      c[static_cast<std::size_t>(i)] = num / dr;
    }
    return c;
  }

  /// Structure constant N(a, b) for signed positive-root indices: the signed
  /// index +i stands for root i, -i-1 for its negative... see signed helpers.
  /// Here both arguments are positive roots: [e_a, e_b] = N e_{a+b}.
  std::int64_t n_positive(int a, int b) const {
    check(a != b, "SpecMismatch", "equal roots have zero bracket");
    if (a > b) return -n_positive(b, a);
    auto it = n_.find({a, b});
    return it == n_.end() ? 0 : it->second;
  }

  /// N(x, -y) for distinct positive roots x, y (indices); zero when x - y is
  /// not a root. Reduces to a positive pair of smaller height sum through the
  /// zero-sum Jacobi relation N(a,b)/(c,c) = N(b,c)/(a,a) for a + b + c = 0.
  std::int64_t n_mixed(int x, int y) const {
    check(x != y, "SpecMismatch", "n_mixed needs distinct roots");
    std::vector<int> diff = roots_[static_cast<std::size_t>(x)];
    for (int i = 0; i < rank_; ++i)
      diff[static_cast<std::size_t>(i)] -= roots_[static_cast<std::size_t>(y)][static_cast<std::size_t>(i)];
    bool pos = true, neg = true;
    for (int v : diff) {
      if (v < 0) pos = false;
      if (v > 0) neg = false;
    }
    if (pos) {
      int u = index_of(diff);
      if (u < 0) return 0;
      // triple (-x, y, u) sums to zero: N(x,-y) = -(u,u) N(y,u) / (x,x)
      Rat r = -Rat(norm(u)) * Rat(n_positive_raw(y, u)) / Rat(norm(x));
      check(r.is_integer(), "SpecMismatch", "non-integral mixed constant");
      return r.num;
    }
    if (neg) {
      for (int& v : diff) v = -v;
      int w = index_of(diff);
      if (w < 0) return 0;
      // triple (x, -y, w) sums to zero: N(x,-y) = (w,w) N(w,x) / (y,y)
      Rat r = Rat(norm(w)) * Rat(n_positive_raw(w, x)) / Rat(norm(y));
      check(r.is_integer(), "SpecMismatch", "non-integral mixed constant");
      return r.num;
    }
    return 0;  // mixed-sign difference is never a root
  }

private:
  void build_gram() {
    check(rank_ >= 1, "UnsupportedType", "rank must be at least 1");
    auto zero = std::vector<std::vector<std::int64_t>>(
        static_cast<std::size_t>(rank_), std::vector<std::int64_t>(static_cast<std::size_t>(rank_), 0));
    gram_ = zero;
    auto chain = [&](std::int64_t diag, std::int64_t off) {
      for (int i = 0; i < rank_; ++i) gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = diag;
      for (int i = 0; i + 1 < rank_; ++i) {
        gram_[static_cast<std::size_t>(i)][static_cast<std::size_t>(i + 1)] = off;
        gram_[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(i)] = off;
      }
    };
    if (type_ == "A") {
      chain(2, -1);
    } else if (type_ == "B") {
      check(rank_ >= 2, "UnsupportedType", "type B needs rank >= 2");
      chain(4, -2);
      gram_[static_cast<std::size_t>(rank_ - 1)][static_cast<std::size_t>(rank_ - 1)] = 2;
    } else if (type_ == "C") {
      check(rank_ >= 2, "UnsupportedType", "type C needs rank >= 2");
      chain(2, -1);
      gram_[static_cast<std::size_t>(rank_ - 1)][static_cast<std::size_t>(rank_ - 1)] = 4;
      gram_[static_cast<std::size_t>(rank_ - 2)][static_cast<std::size_t>(rank_ - 1)] = -2;
      gram_[static_cast<std::size_t>(rank_ - 1)][static_cast<std::size_t>(rank_ - 2)] = -2;
    } else if (type_ == "D") {
      check(rank_ >= 3, "UnsupportedType", "type D needs rank >= 3");
      chain(2, -1);
      // fork: last node attaches to node rank-3 instead of rank-2
      gram_[static_cast<std::size_t>(rank_ - 2)][static_cast<std::size_t>(rank_ - 1)] = 0;
      gram_[static_cast<std::size_t>(rank_ - 1)][static_cast<std::size_t>(rank_ - 2)] = 0;
      gram_[static_cast<std::size_t>(rank_ - 3)][static_cast<std::size_t>(rank_ - 1)] = -1;
      gram_[static_cast<std::size_t>(rank_ - 1)][static_cast<std::size_t>(rank_ - 3)] = -1;
    } else if (type_ == "G") {
      check(rank_ == 2, "UnsupportedType", "type G has rank 2");
      gram_ = {{2, -3}, {-3, 6}};
    } else {
      fail("UnsupportedType", "root system type " + type_ + " is not supported");
    }
  }

  bool is_root(const std::vector<int>& c) const { return index_.count(c) > 0; }

  void generate_roots() {
    // simple roots first, then close upward by height using root strings
    for (int i = 0; i < rank_; ++i) {
      std::vector<int> e(static_cast<std::size_t>(rank_), 0);
      e[static_cast<std::size_t>(i)] = 1;
      push_root(std::move(e), 1);
    }
    std::size_t level_begin = 0;
    int h = 1;
    while (level_begin < roots_.size()) {
      std::size_t level_end = roots_.size();
      for (std::size_t r = level_begin; r < level_end; ++r)
        for (int i = 0; i < rank_; ++i) {
          std::vector<int> cand = roots_[r];
          // p = steps down the alpha_i string from roots_[r]
          int steps_down = 0;
          std::vector<int> down = cand;
          while (true) {
            down[static_cast<std::size_t>(i)] -= 1;
            bool zero = true;
            for (int v : down) zero = zero && v == 0;
            if (zero || !is_root(down)) break;
            ++steps_down;
          }
          std::int64_t q = steps_down - pairing(roots_[r], root_coord(i));
          if (q <= 0) continue;
          cand[static_cast<std::size_t>(i)] += 1;
          if (!is_root(cand)) push_root(std::move(cand), h + 1);
        }
      level_begin = level_end;
      ++h;
      check(h <= 64, "SpecMismatch", "root generation failed to terminate");
    }
    check(string_bound_ok(), "SpecMismatch", "root string longer than type allows");
  }

  std::vector<int> root_coord(int i) const {
    std::vector<int> e(static_cast<std::size_t>(rank_), 0);
    e[static_cast<std::size_t>(i)] = 1;
    return e;
  }

  void push_root(std::vector<int> c, int h) {
    // keep the list ordered by height, then lexicographically ascending
    std::size_t pos = roots_.size();
    while (pos > 0) {
      std::size_t prev = pos - 1;
      if (heights_[prev] < h || (heights_[prev] == h && roots_[prev] < c)) break;
      --pos;
    }
    roots_.insert(roots_.begin() + static_cast<std::ptrdiff_t>(pos), c);
    heights_.insert(heights_.begin() + static_cast<std::ptrdiff_t>(pos), h);
    index_.clear();
    for (std::size_t r = 0; r < roots_.size(); ++r) index_[roots_[r]] = static_cast<int>(r);
    norms_.clear();
    for (std::size_t r = 0; r < roots_.size(); ++r)
      norms_.push_back(static_cast<int>(form(roots_[r], roots_[r])));
  }

  bool string_bound_ok() const {
    int bound = type_ == "G" ? 4 : 2;
    for (std::size_t a = 0; a < roots_.size(); ++a)
      for (std::size_t b = 0; b < roots_.size(); ++b) {
        if (a == b) continue;
        int len = 0;
        std::vector<int> c = roots_[b];
        while (true) {
          for (int i = 0; i < rank_; ++i) c[static_cast<std::size_t>(i)] += roots_[a][static_cast<std::size_t>(i)];
          if (!is_root(c)) break;
          ++len;
        }
        if (len > bound) return false;
      }
    return true;
  }

  /// p+1 for the pair (a, b): one plus the number of steps b - a, b - 2a, ...
  /// that remain roots (negatives of positive roots included).
  std::int64_t string_down_plus_one(int a, int b) const {
    int steps = 0;
    std::vector<int> c = roots_[static_cast<std::size_t>(b)];
    while (true) {
      bool zero = true;
      for (int i = 0; i < rank_; ++i) {
        c[static_cast<std::size_t>(i)] -= roots_[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        if (c[static_cast<std::size_t>(i)] != 0) zero = false;
      }
      if (zero) break;
      std::vector<int> abs = c;
      bool allneg = true;
      for (int v : abs) allneg = allneg && v <= 0;
      if (allneg)
        for (int& v : abs) v = -v;
      if (!is_root(abs)) break;
      ++steps;
    }
    return steps + 1;
  }

  void resolve_constants() {
    int m = positive_count();
    std::vector<std::vector<std::pair<int, int>>> decomps(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        std::vector<int> s = roots_[static_cast<std::size_t>(a)];
        for (int i = 0; i < rank_; ++i)
          s[static_cast<std::size_t>(i)] += roots_[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
        int g = index_of(s);
        if (g >= 0) decomps[static_cast<std::size_t>(g)].push_back({a, b});
      }
    // by construction roots_ is sorted by height; process in list order
    for (int g = 0; g < m; ++g) {
      const auto& dec = decomps[static_cast<std::size_t>(g)];
      if (dec.empty()) continue;  // simple root
      // minimal first component in the total order = dec entry with smallest a
      int a1 = dec[0].first, b1 = dec[0].second;
      for (const auto& [a, b] : dec)
        if (a < a1) {
          a1 = a;
          b1 = b;
        }
      check(heights_[static_cast<std::size_t>(a1)] == 1, "SpecMismatch",
            "extraspecial pair must start with a simple root");
      n_[{a1, b1}] = string_down_plus_one(a1, b1);
      for (const auto& [a, b] : dec) {
        if (a == a1) continue;
        // Jacobi on (-a1, a, b): N(a,b) = -(N(-a1,a) N(a-a1,b) + N(b,-a1) N(b-a1,a)) / N(g,-a1)
        Rat t1 = term_na1(a1, a, b);
        Rat t2 = term_bn(a1, a, b);
        Rat denom(n_mixed(g, a1));
        check(denom.num != 0, "SpecMismatch", "vanishing denominator in sign recursion");
        Rat val = -(t1 + t2) / denom;
        check(val.is_integer(), "SpecMismatch", "non-integral structure constant");
        std::int64_t expect = string_down_plus_one(a, b);
        check(val.num == expect || val.num == -expect, "SpecMismatch",
              "structure constant magnitude disagrees with root string");
        n_[{a, b}] = val.num;
      }
    }
  }

  // N(-a1, a) * N(a - a1, b) with drop-out when a - a1 is not a root
  Rat term_na1(int a1, int a, int b) const {
    std::vector<int> d = roots_[static_cast<std::size_t>(a)];
    for (int i = 0; i < rank_; ++i)
      d[static_cast<std::size_t>(i)] -= roots_[static_cast<std::size_t>(a1)][static_cast<std::size_t>(i)];
    bool nonneg = true;
    for (int v : d) nonneg = nonneg && v >= 0;
    if (!nonneg) return Rat(0);
    int u = index_of(d);
    if (u < 0) return Rat(0);
    return Rat(-n_mixed(a, a1)) * Rat(n_positive_raw(u, b));
  }

  // N(b, -a1) * N(b - a1, a) with drop-out when b - a1 is not a root
  Rat term_bn(int a1, int a, int b) const {
    std::vector<int> d = roots_[static_cast<std::size_t>(b)];
    for (int i = 0; i < rank_; ++i)
      d[static_cast<std::size_t>(i)] -= roots_[static_cast<std::size_t>(a1)][static_cast<std::size_t>(i)];
    bool nonneg = true;
    for (int v : d) nonneg = nonneg && v >= 0;
    if (!nonneg) return Rat(0);
    int w = index_of(d);
    if (w < 0) return Rat(0);
    return Rat(n_mixed(b, a1)) * Rat(n_positive_raw(w, a));
  }

  std::int64_t n_positive_raw(int a, int b) const {
    if (a == b) return 0;
    if (a > b) {
      auto it = n_.find({b, a});
      return it == n_.end() ? 0 : -it->second;
    }
    auto it = n_.find({a, b});
    return it == n_.end() ? 0 : it->second;
  }

  std::string type_;
  int rank_;
  std::vector<std::vector<std::int64_t>> gram_;
  std::vector<std::vector<int>> roots_;
  std::vector<int> heights_;
  std::vector<int> norms_;
  std::map<std::vector<int>, int> index_;
  std::map<std::pair<int, int>, std::int64_t> n_;
};

}  // namespace modlie
