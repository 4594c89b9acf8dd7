#include "kfrac/detail/moments.hpp"

#include <cmath>

#include "kfrac/kernels.hpp"

namespace kfrac::detail {

namespace {

// int_0^x u (1+u)^{a-1} du
double shifted_first_moment(double x, double a) {
    if (x < 0.25) {
        double sum = 0.0, binom = 1.0, xp = x * x;
        for (int j = 0; j < 200; ++j) {
            const double term = binom * xp / (j + 2);
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
            binom *= (a - 1.0 - j) / (j + 1.0);
            xp *= x;
        }
        return sum;
    }
    const double l = std::log1p(x);
    return std::expm1((a + 1.0) * l) / (a + 1.0) - std::expm1(a * l) / a;
}

}  // namespace

LinearMoments linear_moments(double lo, double hi, double a) {
    const double width = hi - lo;
    const double m0 = pow_diff(hi, lo, a) / a;
    double m1;
    if (lo == 0.0) {
        m1 = std::pow(hi, a + 1.0) / (a + 1.0);
    } else {
        m1 = std::pow(lo, a + 1.0) * shifted_first_moment(width / lo, a);
    }
    LinearMoments m;
    m.far = m1 / width;
    m.near = m0 - m.far;
    return m;
}

double hypersingular_cell(double lo, double hi, double alpha) { return -pow_diff(hi, lo, -alpha) / alpha; }

}  // namespace kfrac::detail
