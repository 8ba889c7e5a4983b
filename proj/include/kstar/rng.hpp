#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace kstar {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Child seed for a tagged position in a schedule. Depends only on the
// arguments, so sequential and parallel schedules draw identical streams.
template <class... Parts>
constexpr std::uint64_t derive_seed(std::uint64_t base, Parts... parts) {
  std::uint64_t s = mix64(base);
  ((s = mix64(s ^ mix64(static_cast<std::uint64_t>(parts) + 0x632be59bd9b4e019ULL))), ...);
  return s;
}

// Portable random stream: mt19937_64 plus hand-written transforms, so the
// draws do not depend on the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer on [0, n).
  std::size_t below(std::size_t n);

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // k distinct values from [0, n) in draw order.
  std::vector<int> sample_without_replacement(int n, int k);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kstar
