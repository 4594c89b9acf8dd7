#pragma once

#include <cstddef>
#include <span>

// Row weights of the per-ray operators in grid units: spacing 1, nodes k + 1/2,
// ray end at N. Callers scale by h^{+-alpha} and the Gamma factors.
namespace kfrac::detail {

// (I f)(r_i) Gamma(alpha) / h^alpha = sum_k row[k] f_k, weight (t_k / r_i)^{n-1} included.
void integral_left_row(std::size_t i, std::size_t N, double alpha, int n, std::span<double> row);
void integral_right_row(std::size_t i, std::size_t N, double alpha, std::span<double> row);

// psi f(r_i) / h^{-alpha} = sum_k row[k] f_k; c = epsilon / h >= 1.
void psi_left_row(std::size_t i, std::size_t N, double alpha, int n, double c, std::span<double> row);
void psi_right_row(std::size_t i, std::size_t N, double alpha, double c, std::span<double> row);

// Parts of the left difference quotient kept apart for the formal assembly:
// off[k] = W_ik (t_k/r_i)^{n-1} for k < i, cells = sum_k W_ik, closed = closed-form branch
// value when r_i < c (then off and cells are zero).
struct LeftQuotientParts {
    double cells = 0.0;
    double weighted_cells = 0.0;
    double closed = 0.0;
    bool small_r = false;
};
LeftQuotientParts left_quotient(std::size_t i, double alpha, int n, double c, std::span<double> off);

}  // namespace kfrac::detail
