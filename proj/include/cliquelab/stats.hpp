#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cliquelab {

// Wilson score interval, clamped to [0,1].
std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials,
                                          double confidence = 0.95);

// Standard normal quantile (Acklam's rational approximation).
double normal_quantile(double p);

// Chi-square upper quantile via the Wilson-Hilferty approximation.
double chi_square_quantile(double p, int df);

// Pearson statistic for per-cell binomial counts with a common success
// probability: sum (O_i - T p)^2 / (T p (1-p)).
double binomial_cells_chi_square(const std::vector<uint64_t>& counts, uint64_t trials_per_cell,
                                 double p);

}  // namespace cliquelab
