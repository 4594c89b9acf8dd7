#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kfrac/exec.hpp"
#include "kfrac/grid_function.hpp"
#include "kfrac/matrix.hpp"

namespace kfrac {

// Real block-diagonal matrix of a discretized operator together with the diagonal Gram
// matrix of the weighted L2 inner product. A dense operator is a single block.
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    OperatorMatrix(std::vector<Matrix> blocks, std::vector<double> gram, std::string tag);
    static OperatorMatrix dense(Matrix m, std::vector<double> gram, std::string tag);

    std::size_t size() const { return gram_.size(); }
    std::size_t n_blocks() const { return blocks_.size(); }
    const Matrix& block(std::size_t b) const { return blocks_[b]; }
    std::size_t offset(std::size_t b) const { return offsets_[b]; }
    const std::vector<double>& gram() const { return gram_; }
    const std::string& tag() const { return tag_; }
    void set_tag(std::string t) { tag_ = std::move(t); }

    double entry(std::size_t i, std::size_t j) const;
    Matrix to_dense() const;
    bool same_blocks(const OperatorMatrix& o) const;

    CVector apply(std::span<const cplx> x) const;
    std::vector<double> apply(std::span<const double> x) const;
    GridFunction apply(const GridFunction& f) const;

    // G^{-1} A^T G, the adjoint in the weighted inner product.
    OperatorMatrix g_adjoint() const;
    // (A + G^{-1} A^T G) / 2
    OperatorMatrix g_symmetric_part() const;
    // G^{1/2} A G^{-1/2} block by block; symmetric iff A is G-symmetric.
    std::vector<Matrix> scaled_blocks() const;

    OperatorMatrix scale_rows(std::span<const double> d) const;  // diag(d) A
    OperatorMatrix scale_cols(std::span<const double> d) const;  // A diag(d)
    OperatorMatrix densified() const;

    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a);

private:
    std::vector<Matrix> blocks_;
    std::vector<std::size_t> offsets_;
    std::vector<double> gram_;
    std::string tag_;
};

// Largest singular value in the G-weighted norm by power iteration on G^{-1} A^T G A.
struct PowerIterationOptions {
    double tol = 1e-8;
    int max_iter = 10000;
};
double operator_norm(const OperatorMatrix& a, Exec ex = Exec::parallel, PowerIterationOptions opt = {});

// ||G^{-1} A^T G - B||_G / ||B||_G
double adjoint_mismatch(const OperatorMatrix& a, const OperatorMatrix& b, Exec ex = Exec::parallel);

// Column-by-column assembly of a black-box linear operator. Block structure follows the rays
// when per_ray is set. A random superposition probe rejects nonlinear maps.
using GridOperator = std::function<GridFunction(const GridFunction&)>;
OperatorMatrix assemble_columns(const GridPtr& grid, const GridOperator& op, std::string tag, bool per_ray,
                                Exec ex = Exec::parallel);

}  // namespace kfrac
