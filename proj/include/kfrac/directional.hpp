#pragma once

#include <string>

#include "kfrac/exec.hpp"
#include "kfrac/grid_function.hpp"
#include "kfrac/operator_matrix.hpp"

namespace kfrac {

// Directional operators along the rays of a RayGrid. The left integral carries the weight
// (t/r)^{n-1}, the right one does not.
enum class DirOp {
    integral_left,
    integral_right,
    psi_plus,
    psi_minus,
    trunc_left,         // f r^{-a}/G(1-a) + a/G(1-a) psi+
    trunc_right,        // f (d-r)^{-a}/G(1-a) + a/G(1-a) psi-
    formal,             // difference quotient with (t/r)^{n-1} + C_n f r^{-a}, moment-corrected
    formal_restricted,  // the same operator taken as the restriction of trunc_left
};

std::string to_string(DirOp op);

struct DirSpec {
    DirOp op = DirOp::integral_left;
    double alpha = 0.5;
    double epsilon = 0.0;  // 0: epsilon = h on every ray
};

// Block-diagonal over rays; deterministic entry order, bitwise identical for both policies.
OperatorMatrix assemble_matrix(const GridPtr& grid, const DirSpec& spec, Exec ex = Exec::parallel);

// Node-by-node evaluation without storing the matrix.
GridFunction apply_operator(const GridPtr& grid, const DirSpec& spec, const GridFunction& f,
                            Exec ex = Exec::parallel);

GridFunction dir_integral_left(const GridPtr& grid, const GridFunction& g, double alpha);
GridFunction dir_integral_right(const GridPtr& grid, const GridFunction& g, double alpha);
GridFunction psi_plus(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon);
GridFunction psi_minus(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon);
GridFunction kipriyanov_trunc_left(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon = 0.0);
GridFunction kipriyanov_trunc_right(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon = 0.0);

enum class FormalPath { direct, restriction };

struct FormalResult {
    GridFunction value;
    bool boundary_warning = false;  // f does not vanish at the far end of some ray
};
FormalResult kipriyanov_formal(const GridPtr& grid, const GridFunction& f, double alpha,
                               FormalPath path = FormalPath::direct);

// True if |f| at the last node of a ray exceeds 0.75 max |f_{i+1} - f_i| on that ray.
bool boundary_nonvanishing(const GridFunction& f);

enum class Side { left, right };

// || D_eps I phi - phi || / ||phi|| with eps = h.
double inversion_residual(const GridPtr& grid, const GridFunction& phi, double alpha, Side side = Side::left);

// || I_{0+} phi_eps f - f || / ||f||, phi_eps f = (f r^{-a} + a psi+ f)/G(1-a), eps = h.
double representability_residual(const GridPtr& grid, const GridFunction& f, double alpha);

enum class AdjointKind { integral, derivative };
double adjoint_residual(const GridPtr& grid, double alpha, AdjointKind kind);

}  // namespace kfrac
