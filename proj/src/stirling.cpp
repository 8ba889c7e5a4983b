#include "kstar/stirling.hpp"

#include <string>

#include "kstar/errors.hpp"

namespace kstar {

std::uint64_t stirling_partition_count(int n, int k) {
  if (n < 0 || k < 0) throw ParameterError("stirling_partition_count needs n, k >= 0");
  if (n > kStirlingMaxN)
    throw NumericalError("stirling_partition_count overflows for n = " + std::to_string(n) + " (max " +
                         std::to_string(kStirlingMaxN) + ")");
  if (k > n) return 0;
  if (k == 0) return n == 0 ? 1 : 0;
  __int128 sum = 0;
  __int128 binom = 1;  // C(k, i)
  for (int i = 0; i <= k; ++i) {
    if (i > 0) binom = binom * (k - i + 1) / i;
    __int128 p = 1;
    for (int e = 0; e < n; ++e) p *= i;
    const __int128 term = binom * p;
    sum += ((k - i) % 2 == 0) ? term : -term;
  }
  __int128 fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return static_cast<std::uint64_t>(sum / fact);
}

}  // namespace kstar
