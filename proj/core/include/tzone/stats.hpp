#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace tzone {

/// Monte Carlo mean with standard error (sample sd / sqrt(n)).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Pairwise (cascade) sum. The result depends only on the input order,
/// never on how the samples were produced.
double pairwise_sum(std::span<const double> xs);

/// Mean and standard error of i.i.d. samples, both from pairwise sums.
McEstimate estimate(std::span<const double> samples);

/// Runs body(i) for i in [0, n) on `workers` threads (0 = hardware
/// concurrency). Indices are split into contiguous chunks; body must only
/// write state owned by index i. The first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace tzone
