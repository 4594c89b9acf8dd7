#include "kfrac/operator_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kfrac/error.hpp"

namespace kfrac {

OperatorMatrix::OperatorMatrix(std::vector<Matrix> blocks, std::vector<double> gram, std::string tag)
    : blocks_(std::move(blocks)), gram_(std::move(gram)), tag_(std::move(tag)) {
    std::size_t off = 0;
    for (const auto& b : blocks_) {
        if (!b.square()) throw ShapeError("operator blocks must be square");
        offsets_.push_back(off);
        off += b.rows();
    }
    if (off != gram_.size()) throw ShapeError("block sizes do not add up to the gram size");
    for (double w : gram_)
        if (!(w > 0.0)) throw DomainError("gram diagonal must be strictly positive");
}

OperatorMatrix OperatorMatrix::dense(Matrix m, std::vector<double> gram, std::string tag) {
    std::vector<Matrix> blocks;
    blocks.push_back(std::move(m));
    return OperatorMatrix(std::move(blocks), std::move(gram), std::move(tag));
}

double OperatorMatrix::entry(std::size_t i, std::size_t j) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), i);
    const std::size_t b = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    const std::size_t lo = offsets_[b], n = blocks_[b].rows();
    if (j < lo || j >= lo + n) return 0.0;
    return blocks_[b](i - lo, j - lo);
}

Matrix OperatorMatrix::to_dense() const {
    Matrix m(size(), size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const std::size_t lo = offsets_[b];
        for (std::size_t i = 0; i < blocks_[b].rows(); ++i)
            for (std::size_t j = 0; j < blocks_[b].cols(); ++j) m(lo + i, lo + j) = blocks_[b](i, j);
    }
    return m;
}

bool OperatorMatrix::same_blocks(const OperatorMatrix& o) const {
    if (o.blocks_.size() != blocks_.size()) return false;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        if (o.blocks_[b].rows() != blocks_[b].rows()) return false;
    return true;
}

template <class V>
static std::vector<V> apply_blocks(const OperatorMatrix& a, std::span<const V> x) {
    if (x.size() != a.size()) throw ShapeError("operator applied to a vector of the wrong size");
    std::vector<V> y(x.size(), V{});
    for (std::size_t b = 0; b < a.n_blocks(); ++b) {
        const Matrix& m = a.block(b);
        const std::size_t lo = a.offset(b);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            V s{};
            const auto r = m.row(i);
            for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[lo + j];
            y[lo + i] = s;
        }
    }
    return y;
}

CVector OperatorMatrix::apply(std::span<const cplx> x) const { return apply_blocks<cplx>(*this, x); }
std::vector<double> OperatorMatrix::apply(std::span<const double> x) const { return apply_blocks<double>(*this, x); }

GridFunction OperatorMatrix::apply(const GridFunction& f) const {
    return GridFunction(f.grid, apply(std::span<const cplx>(f.values)));
}

OperatorMatrix OperatorMatrix::g_adjoint() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Matrix& m = blocks_[b];
        const std::size_t lo = offsets_[b];
        Matrix t(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) t(i, j) = m(j, i) * gram_[lo + j] / gram_[lo + i];
        out.push_back(std::move(t));
    }
    return OperatorMatrix(std::move(out), gram_, tag_ + "^*");
}

OperatorMatrix OperatorMatrix::g_symmetric_part() const {
    OperatorMatrix s = 0.5 * (*this + g_adjoint());
    s.tag_ = "sym(" + tag_ + ")";
    return s;
}

std::vector<Matrix> OperatorMatrix::scaled_blocks() const {
    std::vector<Matrix> out;
    out.reserve(blocks_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        Matrix m = blocks_[b];
        const std::size_t lo = offsets_[b];
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) *= std::sqrt(gram_[lo + i]) / std::sqrt(gram_[lo + j]);
        out.push_back(std::move(m));
    }
    return out;
}

OperatorMatrix OperatorMatrix::scale_rows(std::span<const double> d) const {
    if (d.size() != size()) throw ShapeError("row scaling of wrong size");
    OperatorMatrix out = *this;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (std::size_t i = 0; i < blocks_[b].rows(); ++i)
            for (auto& v : out.blocks_[b].row(i)) v *= d[offsets_[b] + i];
    return out;
}

OperatorMatrix OperatorMatrix::scale_cols(std::span<const double> d) const {
    if (d.size() != size()) throw ShapeError("column scaling of wrong size");
    OperatorMatrix out = *this;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
        for (std::size_t i = 0; i < blocks_[b].rows(); ++i) {
            auto r = out.blocks_[b].row(i);
            for (std::size_t j = 0; j < r.size(); ++j) r[j] *= d[offsets_[b] + j];
        }
    return out;
}

OperatorMatrix OperatorMatrix::densified() const {
    if (blocks_.size() == 1) return *this;
    return dense(to_dense(), gram_, tag_);
}

static void check_compatible(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.size() != b.size()) throw ShapeError("operators live on different grids");
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a.gram()[k] != b.gram()[k]) throw ShapeError("operators carry different gram matrices");
}

static OperatorMatrix combine(const OperatorMatrix& a, const OperatorMatrix& b, double sb, const char* op) {
    check_compatible(a, b);
    const std::string tag = "(" + a.tag() + op + b.tag() + ")";
    if (a.same_blocks(b)) {
        std::vector<Matrix> blocks;
        for (std::size_t k = 0; k < a.n_blocks(); ++k) {
            Matrix m = a.block(k);
            const Matrix& o = b.block(k);
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += sb * o(i, j);
            blocks.push_back(std::move(m));
        }
        return OperatorMatrix(std::move(blocks), a.gram(), tag);
    }
    Matrix m = a.to_dense();
    const Matrix o = b.to_dense();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += sb * o(i, j);
    return OperatorMatrix::dense(std::move(m), a.gram(), tag);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) { return combine(a, b, 1.0, "+"); }
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) { return combine(a, b, -1.0, "-"); }

OperatorMatrix operator*(double s, const OperatorMatrix& a) {
    OperatorMatrix out = a;
    for (auto& b : out.blocks_) b *= s;
    return out;
}

namespace {

double weighted_norm2(std::span<const double> x, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += w[k] * x[k] * x[k];
    return s;
}

double block_norm(const Matrix& m, std::span<const double> w, const PowerIterationOptions& opt) {
    const std::size_t n = m.rows();
    std::vector<double> x(n, 1.0), y(n), z(n);
    double prev = -1.0;
    for (int it = 0; it < opt.max_iter; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const auto r = m.row(i);
            for (std::size_t j = 0; j < n; ++j) s += r[j] * x[j];
            y[i] = s;
        }
        const double xx = weighted_norm2(x, w);
        const double sigma = std::sqrt(weighted_norm2(y, w) / xx);
        if (sigma == 0.0) return 0.0;
        if (prev >= 0.0 && std::abs(sigma - prev) <= opt.tol * sigma) return sigma;
        prev = sigma;
        // z = G^{-1} A^T G y
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double gy = w[i] * y[i];
            const auto r = m.row(i);
            for (std::size_t j = 0; j < n; ++j) z[j] += r[j] * gy;
        }
        for (std::size_t j = 0; j < n; ++j) z[j] /= w[j];
        const double zn = std::sqrt(weighted_norm2(z, w));
        if (zn == 0.0) return sigma;
        for (std::size_t j = 0; j < n; ++j) x[j] = z[j] / zn;
    }
    throw ConvergenceError("operator_norm: power iteration did not converge");
}

}  // namespace

double operator_norm(const OperatorMatrix& a, Exec ex, PowerIterationOptions opt) {
    std::vector<double> norms(a.n_blocks(), 0.0);
    for_each_index(ex, a.n_blocks(), [&](std::size_t b) {
        const std::span<const double> w(a.gram().data() + a.offset(b), a.block(b).rows());
        norms[b] = block_norm(a.block(b), w, opt);
    });
    double m = 0.0;
    for (double v : norms) m = std::max(m, v);
    return m;
}

double adjoint_mismatch(const OperatorMatrix& a, const OperatorMatrix& b, Exec ex) {
    const double nb = operator_norm(b, ex);
    const double nd = operator_norm(a.g_adjoint() - b, ex);
    if (nb == 0.0) return nd == 0.0 ? 0.0 : INFINITY;
    return nd / nb;
}

OperatorMatrix assemble_columns(const GridPtr& grid, const GridOperator& op, std::string tag, bool per_ray,
                                Exec ex) {
    const std::size_t n = grid->size();
    // superposition probe
    {
        std::mt19937_64 rng(12345);
        std::normal_distribution<double> nd;
        GridFunction f(grid), g(grid);
        for (std::size_t k = 0; k < n; ++k) {
            f[k] = {nd(rng), nd(rng)};
            g[k] = {nd(rng), nd(rng)};
        }
        const cplx a{nd(rng), nd(rng)}, b{nd(rng), nd(rng)};
        const GridFunction lhs = op(a * f + b * g);
        const GridFunction rhs = a * op(f) + b * op(g);
        double scale = 0.0, diff = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            scale = std::max(scale, std::abs(rhs[k]));
            diff = std::max(diff, std::abs(lhs[k] - rhs[k]));
        }
        if (diff > 1e-10 * std::max(1.0, scale)) throw DomainError("assemble_columns: operator is not linear");
    }
    Matrix full(n, n);
    for_each_index(ex, n, [&](std::size_t col) {
        GridFunction e(grid);
        e[col] = 1.0;
        const GridFunction y = op(e);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(y[i].imag()) > 1e-12 * std::max(1.0, std::abs(y[i])))
                throw DomainError("assemble_columns: operator does not map real data to real data");
            full(i, col) = y[i].real();
        }
    });
    if (!per_ray) return OperatorMatrix::dense(std::move(full), grid->weights(), std::move(tag));
    const std::size_t N = grid->n_radial();
    std::vector<Matrix> blocks;
    for (std::size_t j = 0; j < grid->n_dirs(); ++j) {
        Matrix m(N, N);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) m(i, k) = full(j * N + i, j * N + k);
        blocks.push_back(std::move(m));
    }
    return OperatorMatrix(std::move(blocks), grid->weights(), std::move(tag));
}

}  // namespace kfrac
