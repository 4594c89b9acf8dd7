#pragma once

namespace kfrac::detail {

// For P linear on [lo, hi] with P(lo) = P_near and P(hi) = P_far:
//   int_lo^hi P(s) s^{a-1} ds = near * P_near + far * P_far.
struct LinearMoments {
    double near = 0.0;
    double far = 0.0;
};

LinearMoments linear_moments(double lo, double hi, double a);

// int over the cell (r - hi, r - lo) of (r - t)^{-alpha-1} dt, lo > 0.
double hypersingular_cell(double lo, double hi, double alpha);

}  // namespace kfrac::detail
