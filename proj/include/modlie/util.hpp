#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modlie {

/// Error with a stable machine-readable code alongside the human message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw Error(code, what);
}

inline void check(bool cond, const std::string& code, const std::string& what) {
  if (!cond) fail(code, what);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based deterministic generator: identical streams on every
/// platform, and fork(i) yields independent reproducible substreams.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL)) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform in [0, bound) by rejection; bound >= 1.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    std::uint64_t limit = ~0ULL - (~0ULL % bound);
    for (;;) {
      std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

  Rng fork(std::uint64_t stream) const {
    return Rng(splitmix64(state_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }

private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace modlie
