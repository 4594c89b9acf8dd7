#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "kfrac/eigensolvers.hpp"
#include "kfrac/error.hpp"

using namespace kfrac;

namespace {
Matrix random_matrix(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (std::size_t e = 0; e < n * n; ++e) m.data()[e] = nd(rng);
    return m;
}

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    Matrix m = random_matrix(n, seed);
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

bool cplx_less(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }
}  // namespace

TEST_SUITE("eigensolvers") {

TEST_CASE("symmetric eigenvalues against Eigen") {
    for (std::size_t n : {1, 2, 5, 40, 97}) {
        const Matrix a = random_symmetric(n, n);
        const auto mine = eig::symmetric_eigen(a, true);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a));
        REQUIRE(mine.values.size() == n);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(mine.values[k] - ref.eigenvalues()(k)) <= 1e-11 * (1.0 + std::abs(ref.eigenvalues()(k))));
        CHECK(std::is_sorted(mine.values.begin(), mine.values.end()));
        // A V = V diag(lambda), V orthogonal
        const Matrix av = matmul(a, mine.vectors);
        double res = 0.0, orth = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                res = std::max(res, std::abs(av(i, k) - mine.values[k] * mine.vectors(i, k)));
                double dot = 0.0;
                for (std::size_t l = 0; l < n; ++l) dot += mine.vectors(l, i) * mine.vectors(l, k);
                orth = std::max(orth, std::abs(dot - (i == k ? 1.0 : 0.0)));
            }
        CHECK(res <= 1e-11 * (1.0 + a.max_abs() * n));
        CHECK(orth <= 1e-12 * n);
    }
}

TEST_CASE("diagonal and tridiagonal input") {
    Matrix d(5, 5);
    const double diag[] = {3.0, -1.0, 7.0, 0.5, 2.0};
    for (std::size_t i = 0; i < 5; ++i) d(i, i) = diag[i];
    const auto v = eig::symmetric_eigen(d, false).values;
    CHECK(v == std::vector<double>{-1.0, 0.5, 2.0, 3.0, 7.0});
    // (-1, 2, -1): 2 - 2 cos(k pi / (n + 1))
    const std::size_t n = 50;
    std::vector<double> dd(n, 2.0);
    const std::vector<double> e(n - 1, -1.0);
    eig::tridiagonal_ql(dd, e, nullptr);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(dd[k] - (2.0 - 2.0 * std::cos((k + 1) * M_PI / (n + 1)))) <= 1e-13);
    // inverse iteration vector is an eigenvector
    const std::vector<double> full(n, 2.0);
    const auto y = eig::tridiagonal_eigenvector(full, e, dd[3]);
    double r = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double ty = 2.0 * y[i];
        if (i > 0) ty -= y[i - 1];
        if (i + 1 < n) ty -= y[i + 1];
        r = std::max(r, std::abs(ty - dd[3] * y[i]));
        ny += y[i] * y[i];
    }
    CHECK(ny == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r <= 1e-12);
}

TEST_CASE("generalized symmetric problem") {
    const std::size_t n = 30;
    const Matrix a = random_symmetric(n, 3);
    Matrix b = random_matrix(n, 4);
    b = matmul(b, b.transpose());
    for (std::size_t i = 0; i < n; ++i) b(i, i) += n;
    const auto mine = eig::generalized_symmetric_eigenvalues(a, b);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(to_eigen(a), to_eigen(b));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(mine[k] - ref.eigenvalues()(k)) <= 1e-12);
    const Matrix l = eig::cholesky(b);
    const Matrix llt = matmul(l, l.transpose());
    CHECK((llt - b).max_abs() <= 1e-12 * b.max_abs());
    Matrix indefinite = Matrix::identity(3);
    indefinite(2, 2) = -1.0;
    CHECK_THROWS_AS(eig::cholesky(indefinite), DomainError);
    CHECK_THROWS_AS(eig::generalized_symmetric_eigenvalues(a, Matrix::identity(3)), ShapeError);
}

TEST_CASE("nonsymmetric eigenvalues against Eigen") {
    for (std::size_t n : {1, 2, 3, 10, 60}) {
        Matrix h = random_matrix(n, 100 + n);
        const Matrix a = h;
        eig::hessenberg_reduce(h);
        for (std::size_t i = 2; i < n; ++i)
            for (std::size_t j = 0; j + 1 < i; ++j) CHECK(h(i, j) == 0.0);
        std::vector<cplx> mine = eig::hessenberg_qr(h);
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(a), false);
        std::vector<cplx> ref(es.eigenvalues().data(), es.eigenvalues().data() + n);
        std::sort(mine.begin(), mine.end(), cplx_less);
        std::sort(ref.begin(), ref.end(), cplx_less);
        REQUIRE(mine.size() == n);
        for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(mine[k] - ref[k]) <= 1e-9 * (1.0 + std::abs(ref[k])));
        for (const cplx z : mine) CHECK(eig::hessenberg_residual(h, z) <= 1e-9 * (1.0 + std::abs(z)));
    }
}

TEST_CASE("hermitian extremes against Eigen") {
    const std::size_t n = 25;
    const Matrix s = random_symmetric(n, 7);
    Matrix k = random_matrix(n, 8);
    k = 0.5 * (k - k.transpose());
    for (double ang : {0.0, 0.4, 1.3, 2.9}) {
        const double c = std::cos(ang), sn = std::sin(ang);
        const auto ex = eig::hermitian_extremes(s, k, c, sn);
        Eigen::MatrixXcd h(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) h(i, j) = {c * s(i, j), sn * k(i, j)};
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(h);
        CHECK(std::abs(ex.lo - ref.eigenvalues()(0)) <= 1e-11);
        CHECK(std::abs(ex.hi - ref.eigenvalues()(n - 1)) <= 1e-11);
        for (const auto* pair : {&ex.v_lo, &ex.v_hi}) {
            const double lam = pair == &ex.v_lo ? ex.lo : ex.hi;
            Eigen::VectorXcd v(n);
            for (std::size_t i = 0; i < n; ++i) v(i) = (*pair)[i];
            CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK((h * v - lam * v).norm() <= 1e-9);
        }
    }
}

}  // TEST_SUITE
