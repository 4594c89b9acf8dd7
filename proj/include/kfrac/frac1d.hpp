#pragma once

#include <functional>
#include <optional>

#include "kfrac/directional.hpp"
#include "kfrac/grid_function.hpp"
#include "kfrac/matrix.hpp"

namespace kfrac {

// One-dimensional Riemann-Liouville and Marchaud operators on a uniform interval grid.
// These are written directly in physical coordinates and serve as the n = 1 reference
// for the directional operators.

GridFunction rl_integral_left(const GridFunction& f, double alpha);
GridFunction rl_integral_right(const GridFunction& f, double alpha);

// Truncated Marchaud derivative, epsilon >= h.
GridFunction marchaud_trunc(const GridFunction& f, double alpha, double epsilon, Side side);
Matrix marchaud_matrix(const RayGrid& grid, double alpha, double epsilon, Side side);

// Riemann-Liouville derivative by the L1 scheme: the piecewise-linear interpolant through
// (0, f0) and the nodes is differentiated exactly against (r - t)^{-alpha}. Without f0 the
// value at 0 is extrapolated from the first two nodes.
GridFunction rl_derivative_left(const GridFunction& f, double alpha, std::optional<double> f0 = std::nullopt);

enum class PowerMode { integral, derivative };

// r -> Gamma(b+1)/Gamma(b+1+a) r^{b+a}  or  Gamma(b+1)/Gamma(b+1-a) r^{b-a}
std::function<double(double)> power_oracle(double beta, double alpha, PowerMode mode);

}  // namespace kfrac
