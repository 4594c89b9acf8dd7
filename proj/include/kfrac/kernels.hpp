#pragma once

#include <limits>

namespace kfrac {

// Order alpha, space dimension n, truncation radius epsilon, Hoelder exponent lambda of rho.
struct FracParams {
    double alpha = 0.5;
    int n = 1;
    double epsilon = 0.0;  // 0 means "tie to the radial spacing h"
    double lambda = 1.0;

    void validate() const;
};

void check_alpha(double alpha);

double gamma(double x);

// (n-1)! / Gamma(n - alpha)
double c_n_alpha(int n, double alpha);

// sum_{j=0}^{n-2} j! / Gamma(j + 2 - alpha); the r^{-alpha} moment of the weight 1 - (t/r)^{n-1}
// divided by Gamma(1 - alpha). Zero for n = 1.
double weight_moment_series(int n, double alpha);

inline constexpr double kernel_K_at_zero = std::numeric_limits<double>::infinity();

// (sin(alpha pi)/pi) (t_+^alpha - (t-1)_+^alpha) / t. Returns kernel_K_at_zero at t = 0.
double kernel_K(double t, double alpha);

// int_0^T K dt by tanh-sinh quadrature plus the series tail int_T^inf K dt.
double kernel_K_integral(double alpha, double cutoff);

// Resolvent kernel of the inversion formula; t <= 0 and t == 1 are rejected.
double kernel_k(double t, double alpha);

// |1/Gamma(2-a) + a sum_{i=1}^{n-2} i!/Gamma(2-a+i) - C_n|
double telescoping_residual(int n, double alpha);

double mu_theoretical(double alpha, int n, double diam, double lambda, double lip_M,
                      double inf_rho, bool monotone);

double nu_exponent(int n, double p, double q, double alpha, double beta, double l);

// Stable hi^p - lo^p for hi >= lo >= 0.
double pow_diff(double hi, double lo, double p);

}  // namespace kfrac
