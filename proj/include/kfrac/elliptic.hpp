#pragma once

#include <cstdint>
#include <string>

#include "kfrac/exec.hpp"
#include "kfrac/geometry.hpp"
#include "kfrac/operator_matrix.hpp"

namespace kfrac {

enum class Preset { constant, linear_ramp, cosine };

Preset parse_preset(const std::string& s);
std::string to_string(Preset p);

// Scalar field of the distance r to the pole:
//   constant     v
//   linear_ramp  v (1 + s (r/D)^p)     Hoelder with exponent p, monotone in r
//   cosine       v (1 + s cos(pi r/D))
// D is the domain diameter.
struct ScalarField {
    Preset preset = Preset::constant;
    double value = 1.0;
    double amplitude = 0.0;
    double exponent = 1.0;
    double scale = 1.0;

    double operator()(double r) const;
    double inf() const;
    double sup() const;
    double holder_exponent() const;  // 1 unless linear_ramp
    double holder_constant() const;
    bool nonincreasing() const;  // along every ray
};

// Isotropic a^{ij} = a(r) delta_ij and weight rho(r).
struct CoefficientField {
    ScalarField a;
    ScalarField rho;
    int n = 1;
    double a0 = 0.0;       // ellipticity constant
    double a1 = 0.0;       // sup (sum a_ij^2)^{1/2}
    double lambda = 1.0;   // Hoelder exponent of rho
    double lip_M = 0.0;    // Hoelder constant of rho
    double inf_rho = 0.0;

    static CoefficientField make(ScalarField a, ScalarField rho, const ConvexDomain& dom);
    bool rho_monotone() const { return rho.nonincreasing(); }
};

struct CoefficientCheck {
    double ellipticity_margin = 0.0;  // min (xi^T a xi - a0 |xi|^2) / |xi|^2
    double positivity_margin = 0.0;   // min rho - inf_rho
    double holder_margin = 0.0;       // min M |Q-P|^lambda - |rho(Q) - rho(P)|
    bool ok() const { return ellipticity_margin >= -1e-12 && positivity_margin >= -1e-12 && holder_margin >= -1e-12; }
};
CoefficientCheck validate_coefficients(const CoefficientField& c, const ConvexDomain& dom, std::uint64_t seed,
                                       int samples = 2000);

// Stiffness K and operator G^{-1} K of -div(a grad u) with Dirichlet data, finite volumes on
// the node cells. gauss selects two-point Gauss averaging of a on each face segment (form t).
Matrix stiffness(const RayGrid& grid, const ScalarField& a, bool gauss = false);

OperatorMatrix assemble_L(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex = Exec::parallel);
OperatorMatrix assemble_L_plus(const GridPtr& grid, const CoefficientField& c, double alpha,
                               Exec ex = Exec::parallel);

struct HParts {
    OperatorMatrix sym;      // (A_L + G^{-1} A_L^T G) / 2
    OperatorMatrix average;  // (A_L + A_{L+}) / 2
    double gap = 0.0;        // || average - sym ||_G / || sym ||_G
};
HParts assemble_H(const GridPtr& grid, const CoefficientField& c, double alpha, Exec ex = Exec::parallel);

OperatorMatrix assemble_comparator(const GridPtr& grid, int k, double a_const, double rho_const);

// Form matrices: t[u, v] = v^H T u.
struct FormMatrices {
    Matrix t, t_star;
    Matrix h() const;
};
FormMatrices assemble_form_t(const GridPtr& grid, const CoefficientField& c, double alpha,
                             Exec ex = Exec::parallel);
cplx form_value(const Matrix& form, const CVector& u, const CVector& v);

double green_form_residual(const GridPtr& grid, const CoefficientField& c, double alpha);

struct FormOrder {
    double lower_margin = 0.0;  // lambda_min of sym(H - L0) in the G inner product
    double upper_margin = 0.0;  // lambda_min of sym(L1 - H)
    bool pass() const { return lower_margin >= -1e-10 && upper_margin >= -1e-10; }
};
FormOrder form_order_check(const OperatorMatrix& h, const OperatorMatrix& l0, const OperatorMatrix& l1);

struct ComparatorConstants {
    double a_lo = 0.0, rho_lo = 0.0;
    double a_hi = 0.0, rho_hi = 0.0;
    double form_bound = 0.0;  // numerically estimated sup h[f] / (||grad f||^2 + ||f||^2)
};
ComparatorConstants default_comparators(const GridPtr& grid, const CoefficientField& c, const OperatorMatrix& h_sym,
                                        double mu);

}  // namespace kfrac
