#include "kfrac/frac1d.hpp"

#include <cmath>

#include "kfrac/detail/moments.hpp"
#include "kfrac/error.hpp"
#include "kfrac/kernels.hpp"

namespace kfrac {

namespace {

void require_uniform_1d(const RayGrid& g) {
    if (g.dim() != 1 || g.n_dirs() != 1) throw ShapeError("frac1d operators need a uniform 1-D interval grid");
}

}  // namespace

GridFunction rl_integral_left(const GridFunction& f, double alpha) {
    check_alpha(alpha);
    const RayGrid& g = *f.grid;
    require_uniform_1d(g);
    const std::size_t N = g.n_radial();
    const double h = g.ray(0).h;
    const cplx f_zero = 1.5 * f[0] - 0.5 * f[1];
    GridFunction out(f.grid);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = g.r(0, i);
        const auto first = detail::linear_moments(r - 0.5 * h, r, alpha);
        cplx s = first.near * f[0] + first.far * f_zero;
        for (std::size_t k = 0; k < i; ++k) {
            // segment [r_k, r_{k+1}]
            const auto m = detail::linear_moments(r - g.r(0, k + 1), r - g.r(0, k), alpha);
            s += m.near * f[k + 1] + m.far * f[k];
        }
        out[i] = s / gamma(alpha);
    }
    return out;
}

GridFunction rl_integral_right(const GridFunction& f, double alpha) {
    check_alpha(alpha);
    const RayGrid& g = *f.grid;
    require_uniform_1d(g);
    const std::size_t N = g.n_radial();
    const double h = g.ray(0).h, d = g.ray(0).length;
    const cplx f_end = 1.5 * f[N - 1] - 0.5 * f[N - 2];
    GridFunction out(f.grid);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = g.r(0, i);
        const double end = d - r;
        const auto last = detail::linear_moments(end - 0.5 * h, end, alpha);
        cplx s = last.near * f[N - 1] + last.far * f_end;
        for (std::size_t k = N - 1; k-- > i;) {
            const auto m = detail::linear_moments(g.r(0, k) - r, g.r(0, k + 1) - r, alpha);
            s += m.near * f[k] + m.far * f[k + 1];
        }
        out[i] = s / gamma(alpha);
    }
    return out;
}

Matrix marchaud_matrix(const RayGrid& g, double alpha, double epsilon, Side side) {
    check_alpha(alpha);
    require_uniform_1d(g);
    const std::size_t N = g.n_radial();
    const double h = g.ray(0).h, d = g.ray(0).length;
    if (!(epsilon >= h * (1.0 - 1e-12))) throw DomainError("marchaud_trunc: epsilon below grid resolution");
    const double g1 = gamma(1.0 - alpha);
    Matrix m(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = g.r(0, i);
        const double dist = side == Side::left ? r : d - r;
        double diag = std::pow(dist, -alpha) / g1;
        if (dist < epsilon) {
            diag += (pow_diff(epsilon, dist, -alpha) / alpha) * (alpha / g1);
        } else if (side == Side::left) {
            // cells [k h, (k+1) h] cut at r - epsilon, midpoint value f(r_k)
            double cells = 0.0;
            for (std::size_t k = 0; k * h < r - epsilon; ++k) {
                const double b = std::min((k + 1) * h, r - epsilon);
                const double w = detail::hypersingular_cell(r - b, r - k * h, alpha);
                m(i, k) -= alpha / g1 * w;
                cells += w;
            }
            diag += alpha / g1 * cells;
        } else {
            double cells = 0.0;
            for (std::size_t k = N; k-- > 0;) {
                if ((k + 1) * h <= r + epsilon) break;
                const double a = std::max(k * h, r + epsilon);
                const double w = detail::hypersingular_cell(a - r, (k + 1) * h - r, alpha);
                m(i, k) -= alpha / g1 * w;
                cells += w;
            }
            diag += alpha / g1 * cells;
        }
        m(i, i) += diag;
    }
    return m;
}

GridFunction marchaud_trunc(const GridFunction& f, double alpha, double epsilon, Side side) {
    const Matrix m = marchaud_matrix(*f.grid, alpha, epsilon, side);
    return GridFunction(f.grid, matvec<cplx>(m, f.values));
}

GridFunction rl_derivative_left(const GridFunction& f, double alpha, std::optional<double> f0) {
    check_alpha(alpha);
    const RayGrid& g = *f.grid;
    require_uniform_1d(g);
    const std::size_t N = g.n_radial();
    const double h = g.ray(0).h;
    const cplx f_zero = f0 ? cplx(*f0) : 1.5 * f[0] - 0.5 * f[1];
    const double b = 1.0 - alpha;
    GridFunction out(f.grid);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = g.r(0, i);
        // f(0) r^{-a} + int_0^r p'(t) (r - t)^{-a} dt with p piecewise linear
        cplx s = f_zero * std::pow(r, -alpha);
        s += (f[0] - f_zero) / (0.5 * h) * (pow_diff(r, r - 0.5 * h, b) / b);
        for (std::size_t k = 0; k < i; ++k) {
            const double lo = r - g.r(0, k + 1), hi = r - g.r(0, k);
            s += (f[k + 1] - f[k]) / h * (pow_diff(hi, lo, b) / b);
        }
        out[i] = s / gamma(1.0 - alpha);
    }
    return out;
}

std::function<double(double)> power_oracle(double beta, double alpha, PowerMode mode) {
    check_alpha(alpha);
    if (!(beta >= 0.0)) throw DomainError("power_oracle: beta must be >= 0");
    if (mode == PowerMode::derivative && !(beta > alpha - 1.0))
        throw DomainError("power_oracle: derivative needs beta > alpha - 1");
    const double sign = mode == PowerMode::integral ? 1.0 : -1.0;
    const double c = gamma(beta + 1.0) / gamma(beta + 1.0 + sign * alpha);
    const double p = beta + sign * alpha;
    return [c, p](double r) { return c * std::pow(r, p); };
}

}  // namespace kfrac
