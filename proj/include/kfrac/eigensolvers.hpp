#pragma once

#include <vector>

#include "kfrac/matrix.hpp"

// Dense deterministic eigensolvers.
namespace kfrac::eig {

// Householder reduction A = Q T Q^T of a real symmetric matrix. T has diagonal d and
// off-diagonal e (e[k] couples k and k+1, e.size() == n - 1). Q is formed when q != nullptr.
void tridiagonalize(Matrix a, std::vector<double>& d, std::vector<double>& e, Matrix* q);

// Implicit-shift QL on a symmetric tridiagonal matrix. On return d holds the eigenvalues in
// ascending order; if z is given its columns are rotated along (pass Q to get eigenvectors).
void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, Matrix* z);

// Inverse iteration for the eigenvector of the tridiagonal (d, e) at eigenvalue lambda.
std::vector<double> tridiagonal_eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                            double lambda);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns, empty unless requested
};
SymmetricEigen symmetric_eigen(const Matrix& a, bool vectors);

// Lower Cholesky factor of a symmetric positive definite matrix.
Matrix cholesky(const Matrix& b);

// Eigenvalues of A x = lambda B x, A symmetric, B symmetric positive definite.
std::vector<double> generalized_symmetric_eigenvalues(const Matrix& a, const Matrix& b);

// Orthogonal reduction to upper Hessenberg form (in place).
void hessenberg_reduce(Matrix& a);

// Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.
std::vector<cplx> hessenberg_qr(Matrix h);

// Inverse iteration on a Hessenberg matrix; returns ||H x - lambda x|| / ||x||.
double hessenberg_residual(const Matrix& h, cplx lambda);

// Extreme eigenpairs of the Hermitian matrix c S + i s K (S symmetric, K skew-symmetric).
struct HermitianExtremes {
    double lo = 0.0, hi = 0.0;
    CVector v_lo, v_hi;  // unit vectors
};
HermitianExtremes hermitian_extremes(const Matrix& sym, const Matrix& skew, double c, double s);

}  // namespace kfrac::eig
