#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kfrac/exec.hpp"
#include "kfrac/operator_matrix.hpp"
#include "kfrac/verdict.hpp"

namespace kfrac {

struct SymEigs {
    std::vector<double> values;  // ascending
    double max_residual = 0.0;   // max ||A v - lambda v||_G / (||v||_G max(1, ||A||))
};
// Eigenvalues of a G-symmetric operator matrix.
SymEigs sym_eigs(const OperatorMatrix& a);

struct GeneralEigs {
    std::vector<cplx> values;  // ascending by real part, then imaginary part
    double max_residual = 0.0;
};
GeneralEigs general_eigs(const OperatorMatrix& a);

struct RangeSample {
    cplx zeta;
    CVector v;          // zeta = (A v, v)_G / (v, v)_G
    std::string kind;   // "top", "bottom" or "random"
    double angle = 0.0; // rotation angle of the boundary sample
};
std::vector<RangeSample> numerical_range(const OperatorMatrix& a, int n_angles, int n_random = 100,
                                         std::uint64_t seed = 42, Exec ex = Exec::parallel);
cplx rayleigh_quotient(const OperatorMatrix& a, const CVector& v);

// min over u of Re (A u, u)_G / ||u||_G^2
double accretivity_margin(const OperatorMatrix& a);

struct SectorFit {
    double gamma = 0.0;
    double theta = 0.0;
    bool degenerate = false;  // vertical spread at the vertex, theta = pi/2
};
SectorFit sector_fit(std::span<const cplx> points);

// Distance from z to the convex hull of points (0 inside).
double hull_distance(std::span<const cplx> points, cplx z);

struct BoundsCheck {
    double lower_margin = 0.0;  // min_n lambda_n(H) - lambda_n(L0)
    double upper_margin = 0.0;  // min_n lambda_n(L1) - lambda_n(H)
    std::size_t worst_lower = 0, worst_upper = 0;
    bool pass() const { return lower_margin >= -1e-10 && upper_margin >= -1e-10; }
};
BoundsCheck eigen_bounds_check(std::span<const double> eigs0, std::span<const double> eigs_h,
                               std::span<const double> eigs1);

// Parametric wedge constants; every input must be positive.
struct SectorConstants {
    double a0 = 0.0, a1 = 0.0;
    double K = 0.0, delta = 0.0, eps_young = 0.0, C2 = 0.0, C3 = 0.0;
    double nu = 0.0, mu = 0.0, inf_rho = 0.0;
    double k = 0.0, gamma = 0.0, theta = 0.0;

    static SectorConstants compute(double a0, double a1, double K, double delta, double eps_young, double C2,
                                   double C3, double nu, double mu, double inf_rho);
};

struct SpectralReport {
    std::vector<cplx> eigenvalues;
    std::vector<RangeSample> range_samples;
    double accretivity_margin = 0.0;
    SectorFit sector_fit;
    std::vector<Verdict> verdicts;
};

}  // namespace kfrac
