#pragma once

#include <cstdint>

#include "kstar/rng.hpp"

namespace kstar {

// Seed schedule shared by the native instances and the generic engine, so
// both draw identical streams.
namespace seeds {
inline std::uint64_t iteration(std::uint64_t seed, int k, int h) { return derive_seed(seed, 0x51, k, h); }
inline std::uint64_t fast_iteration(std::uint64_t seed, int h) { return derive_seed(seed, 0x52, h); }
inline std::uint64_t dgp(std::uint64_t it, int dataset) { return derive_seed(it, 1, dataset); }
inline std::uint64_t split(std::uint64_t it, int dataset) { return derive_seed(it, 2, dataset); }
inline std::uint64_t cluster(std::uint64_t it, int edge) { return derive_seed(it, 3, edge); }
inline std::uint64_t train(std::uint64_t it, int edge) { return derive_seed(it, 4, edge); }
// Clustering of the untouched input: one seed for all rounds.
inline std::uint64_t base_cluster(std::uint64_t seed, int edge) { return derive_seed(seed, 0x53, edge); }
inline std::uint64_t reference(std::uint64_t seed, int b) { return derive_seed(seed, 5, b); }
inline std::uint64_t reference_run(std::uint64_t seed, int b) { return derive_seed(seed, 6, b); }
// Gap: per step, the observed run and the reference datasets.
inline std::uint64_t gap_step(std::uint64_t seed, int step) { return derive_seed(seed, 0x60, step); }
inline std::uint64_t gap_observed(std::uint64_t step_seed) { return derive_seed(step_seed, 0); }
inline std::uint64_t gap_reference(std::uint64_t step_seed, int b) { return derive_seed(step_seed, 1, b); }
inline std::uint64_t gap_reference_run(std::uint64_t step_seed, int b) { return derive_seed(step_seed, 2, b); }
}  // namespace seeds

}  // namespace kstar
