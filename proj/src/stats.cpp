#include "cliquelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cliquelab {

double normal_quantile(double p) {
    if (!(p > 0 && p < 1)) throw std::invalid_argument("quantile needs p in (0,1)");
    // Acklam 2003
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, x;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    return x;
}

std::pair<double, double> wilson_interval(uint64_t successes, uint64_t trials, double confidence) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    double z = normal_quantile(0.5 + confidence / 2.0);
    double nn = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (phat + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / nn + z2 / (4 * nn * nn)) / denom;
    return {std::clamp(center - half, 0.0, 1.0), std::clamp(center + half, 0.0, 1.0)};
}

double chi_square_quantile(double p, int df) {
    if (df < 1) throw std::invalid_argument("df must be positive");
    double z = normal_quantile(p);
    double k = static_cast<double>(df);
    double term = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * term * term * term;
}

double binomial_cells_chi_square(const std::vector<uint64_t>& counts, uint64_t trials_per_cell,
                                 double p) {
    double expected = static_cast<double>(trials_per_cell) * p;
    double var = expected * (1.0 - p);
    if (var <= 0) throw std::invalid_argument("degenerate cell variance");
    double stat = 0;
    for (uint64_t c : counts) {
        double diff = static_cast<double>(c) - expected;
        stat += diff * diff / var;
    }
    return stat;
}

}  // namespace cliquelab
