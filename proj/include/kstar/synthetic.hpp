#pragma once

#include <cstdint>

#include "kstar/data.hpp"

namespace kstar {

// 60 x 600, three classes of 20. Class c owns features [200c, 200c + 200):
// N(3, 1) inside the class, N(1, 1) elsewhere.
LabeledData gen_gaussian3(std::uint64_t seed);

// 250 x 2, five classes of 50 with identity covariance, centred on the
// corners of a square of side lambda and on its centre. lambda must be > 0.
LabeledData gen_gaussian5(double lambda, std::uint64_t seed);

// 60 x 600, class sizes 8, 12, 10, 15, 5, 10. Class c (1-based) owns 50
// marker features drawn N(5 - 0.5(c-1), 0.4 + 0.1(c-1)) inside the class and
// N(0, 1) elsewhere; the last 300 features are N(0, 1) noise.
LabeledData gen_simulated6(std::uint64_t seed);

}  // namespace kstar
