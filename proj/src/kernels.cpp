#include "kfrac/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "kfrac/error.hpp"

namespace kfrac {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void FracParams::validate() const {
    check_alpha(alpha);
    if (n < 1) throw DomainError("dimension n must be >= 1");
    if (epsilon < 0.0) throw DomainError("epsilon must be positive (0 = tie to h)");
    if (!(lambda > alpha && lambda <= 1.0)) throw DomainError("need alpha < lambda <= 1");
}

double gamma(double x) {
    if (!(x > 0.0)) throw DomainError("gamma: argument must be positive");
    return std::tgamma(x);
}

double c_n_alpha(int n, double alpha) {
    check_alpha(alpha);
    if (n < 1) throw DomainError("c_n_alpha: n must be >= 1");
    return std::tgamma(static_cast<double>(n)) / gamma(n - alpha);
}

double weight_moment_series(int n, double alpha) {
    check_alpha(alpha);
    double s = 0.0;
    for (int j = 0; j <= n - 2; ++j) s += std::tgamma(j + 1.0) / gamma(j + 2.0 - alpha);
    return s;
}

double kernel_K(double t, double alpha) {
    check_alpha(alpha);
    if (t < 0.0) return 0.0;
    if (t == 0.0) return kernel_K_at_zero;
    const double c = std::sin(alpha * std::numbers::pi) / std::numbers::pi;
    const double tail = t > 1.0 ? std::pow(t - 1.0, alpha) : 0.0;
    const double diff = t > 1.0 ? pow_diff(t, t - 1.0, alpha) : std::pow(t, alpha) - tail;
    return c * diff / t;
}

double kernel_K_integral(double alpha, double cutoff) {
    check_alpha(alpha);
    if (!(cutoff >= 2.0)) throw DomainError("kernel_K_integral: cutoff must be >= 2");
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [alpha](double t) { return kernel_K(t, alpha); };
    // [0,1] carries the t^{alpha-1} endpoint singularity, [1,2] the derivative kink at t = 1.
    double body = ts.integrate(f, 0.0, 1.0, 1e-14) + ts.integrate(f, 1.0, 2.0, 1e-14);
    if (cutoff > 2.0) body += ts.integrate(f, 2.0, cutoff, 1e-14);

    // t^a - (t-1)^a = sum_k c_k t^{a-k}, c_k = (-1)^{k+1} binom(a, k)
    double tail = 0.0;
    double binom = 1.0;
    for (int k = 1; k < 400; ++k) {
        binom *= (alpha - (k - 1)) / k;
        const double ck = ((k % 2) ? 1.0 : -1.0) * binom;
        const double term = ck * std::pow(cutoff, alpha - k) / (k - alpha);
        tail += term;
        if (std::abs(term) < 1e-18 * std::abs(tail)) break;
    }
    const double c = std::sin(alpha * std::numbers::pi) / std::numbers::pi;
    return body + c * tail;
}

double kernel_k(double t, double alpha) {
    check_alpha(alpha);
    if (!(t > 0.0)) throw DomainError("kernel_k: t must be positive");
    if (t == 1.0) throw DomainError("kernel_k: t = 1 is the integrable singularity");
    const double g = gamma(alpha);
    if (t < 1.0) return std::pow(t, alpha - 1.0) / g;
    return pow_diff(t, t - 1.0, alpha - 1.0) / g;
}

double telescoping_residual(int n, double alpha) {
    check_alpha(alpha);
    if (n < 2) throw DomainError("telescoping_residual: n must be >= 2");
    double lhs = 1.0 / gamma(2.0 - alpha);
    for (int i = 1; i <= n - 2; ++i) lhs += alpha * std::tgamma(i + 1.0) / gamma(2.0 - alpha + i);
    return std::abs(lhs - c_n_alpha(n, alpha));
}

double mu_theoretical(double alpha, int n, double diam, double lambda, double lip_M,
                      double inf_rho, bool monotone) {
    check_alpha(alpha);
    if (!(diam > 0.0)) throw DomainError("mu_theoretical: diameter must be positive");
    const double g1 = gamma(1.0 - alpha);
    const double base = 0.5 * std::pow(diam, -alpha) * (1.0 / g1 + c_n_alpha(n, alpha));
    if (monotone) return base;
    if (!(lambda > alpha)) throw DomainError("mu_theoretical: need lambda > alpha");
    if (!(inf_rho > 0.0)) throw DomainError("mu_theoretical: inf rho must be positive");
    if (lip_M < 0.0) throw DomainError("mu_theoretical: Hoelder constant must be >= 0");
    return base - alpha * lip_M * std::pow(diam, lambda - alpha) /
                      (2.0 * g1 * (lambda - alpha) * inf_rho);
}

double nu_exponent(int n, double p, double q, double alpha, double beta, double l) {
    check_alpha(alpha);
    auto fail = [](const std::string& what) { throw DomainError("nu_exponent: violated " + what); };
    if (n < 1) fail("n >= 1");
    if (!(p >= 1.0)) fail("p >= 1");
    if (!(q > p)) fail("q > p");
    if (!(l >= 1.0)) fail("l >= 1");
    if (!(beta >= 0.0)) fail("beta >= 0");
    if (!(alpha < l - n / p + n / q)) fail("alpha < l - n/p + n/q");
    const double nu = (n / l) * (1.0 / p - 1.0 / q) + (alpha + beta) / l;
    if (!(nu > 0.0)) fail("nu > 0");
    if (!(nu < 1.0)) {
        std::ostringstream os;
        os << "nu < 1 (nu = " << nu << ")";
        fail(os.str());
    }
    return nu;
}

double pow_diff(double hi, double lo, double p) {
    if (lo == 0.0) return std::pow(hi, p) - (p > 0.0 ? 0.0 : std::pow(lo, p));
    return std::pow(lo, p) * std::expm1(p * std::log1p((hi - lo) / lo));
}

}  // namespace kfrac
