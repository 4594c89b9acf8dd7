#include "kfrac/directional.hpp"

#include <algorithm>
#include <cmath>

#include "kfrac/detail/moments.hpp"
#include "kfrac/detail/ray_rows.hpp"
#include "kfrac/error.hpp"
#include "kfrac/kernels.hpp"

namespace kfrac {

namespace detail {

namespace {
double radial_weight(double t, double r, int n) { return n == 1 ? 1.0 : std::pow(t / r, n - 1); }
}  // namespace

void integral_left_row(std::size_t i, std::size_t N, double alpha, int n, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    const double r = i + 0.5;
    auto add = [&](std::size_t k, double c) { row[k] += c * radial_weight(k + 0.5, r, n); };
    // [0, r_0]: the value at 0 is extrapolated for n = 1 and zero otherwise (t^{n-1} factor)
    const LinearMoments first = linear_moments(r - 0.5, r, alpha);
    add(0, first.near);
    if (n == 1) {
        row[0] += 1.5 * first.far;
        if (N > 1) row[1] -= 0.5 * first.far;
    }
    for (std::size_t k = 0; k < i; ++k) {
        const LinearMoments m = linear_moments(static_cast<double>(i - k - 1), static_cast<double>(i - k), alpha);
        add(k + 1, m.near);
        add(k, m.far);
    }
}

void integral_right_row(std::size_t i, std::size_t N, double alpha, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    const double end = N - i - 0.5;  // distance from r_i to the ray end
    const LinearMoments last = linear_moments(end - 0.5, end, alpha);
    row[N - 1] += last.near + 1.5 * last.far;
    if (N > 1) row[N - 2] -= 0.5 * last.far;
    for (std::size_t k = N - 1; k-- > i;) {
        const LinearMoments m = linear_moments(static_cast<double>(k - i), static_cast<double>(k - i + 1), alpha);
        row[k] += m.near;
        row[k + 1] += m.far;
    }
}

LeftQuotientParts left_quotient(std::size_t i, double alpha, int n, double c, std::span<double> off) {
    std::fill(off.begin(), off.end(), 0.0);
    LeftQuotientParts p;
    const double r = i + 0.5;
    if (r < c) {
        p.small_r = true;
        p.closed = pow_diff(c, r, -alpha) / alpha;
        return p;
    }
    const double top = r - c;
    for (std::size_t k = 0; static_cast<double>(k) < top; ++k) {
        const double b = std::min(k + 1.0, top);
        const double w = hypersingular_cell(r - b, r - k, alpha);
        const double wk = radial_weight(k + 0.5, r, n);
        off[k] = w * wk;
        p.cells += w;
        p.weighted_cells += w * wk;
    }
    return p;
}

void psi_left_row(std::size_t i, std::size_t N, double alpha, int n, double c, std::span<double> row) {
    (void)N;
    const LeftQuotientParts p = left_quotient(i, alpha, n, c, row);
    for (std::size_t k = 0; k < i; ++k) row[k] = -row[k];
    row[i] = p.small_r ? p.closed : p.cells;
}

void psi_right_row(std::size_t i, std::size_t N, double alpha, double c, std::span<double> row) {
    std::fill(row.begin(), row.end(), 0.0);
    const double r = i + 0.5;
    const double rho = N - r;
    if (rho < c) {
        row[i] = pow_diff(c, rho, -alpha) / alpha;
        return;
    }
    const double bottom = r + c;
    double cells = 0.0;
    for (std::size_t k = N; k-- > 0;) {
        if (k + 1.0 <= bottom) break;
        const double a = std::max(static_cast<double>(k), bottom);
        const double w = hypersingular_cell(a - r, k + 1.0 - r, alpha);
        row[k] -= w;
        cells += w;
    }
    row[i] += cells;
}

}  // namespace detail

std::string to_string(DirOp op) {
    switch (op) {
        case DirOp::integral_left: return "integral_left";
        case DirOp::integral_right: return "integral_right";
        case DirOp::psi_plus: return "psi_plus";
        case DirOp::psi_minus: return "psi_minus";
        case DirOp::trunc_left: return "trunc_left";
        case DirOp::trunc_right: return "trunc_right";
        case DirOp::formal: return "formal";
        case DirOp::formal_restricted: return "formal_restricted";
    }
    return "?";
}

namespace {

bool uses_epsilon(DirOp op) { return op != DirOp::integral_left && op != DirOp::integral_right; }

// epsilon / h on ray j; rejects truncation below the grid resolution
double truncation_ratio(const Ray& ray, double epsilon) {
    if (epsilon == 0.0) return 1.0;
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    double c = epsilon / ray.h;
    if (c < 1.0 - 1e-12) throw DomainError("epsilon below grid resolution (epsilon < h)");
    return std::max(c, 1.0);
}

struct RowContext {
    DirSpec spec;
    int n = 1;
    std::size_t N = 0;
    double c = 1.0;
    double h = 1.0;
    double g_alpha = 1.0;   // Gamma(alpha)
    double g_1alpha = 1.0;  // Gamma(1 - alpha)
    double cn = 1.0;
    double moment_series = 0.0;
};

RowContext make_context(const RayGrid& grid, std::size_t j, const DirSpec& spec) {
    check_alpha(spec.alpha);
    RowContext ctx;
    ctx.spec = spec;
    ctx.n = grid.dim();
    ctx.N = grid.n_radial();
    ctx.h = grid.ray(j).h;
    ctx.c = uses_epsilon(spec.op) ? truncation_ratio(grid.ray(j), spec.epsilon) : 1.0;
    ctx.g_alpha = gamma(spec.alpha);
    ctx.g_1alpha = gamma(1.0 - spec.alpha);
    ctx.cn = c_n_alpha(ctx.n, spec.alpha);
    ctx.moment_series = weight_moment_series(ctx.n, spec.alpha);
    return ctx;
}

// Physical row i of the ray block; scratch has length N.
void build_row(const RowContext& ctx, std::size_t i, std::span<double> row, std::span<double> scratch) {
    const double a = ctx.spec.alpha;
    const double up = std::pow(ctx.h, a), down = std::pow(ctx.h, -a);
    const double q = a / ctx.g_1alpha;
    const double r = i + 0.5;
    switch (ctx.spec.op) {
        case DirOp::integral_left:
            detail::integral_left_row(i, ctx.N, a, ctx.n, row);
            for (auto& v : row) v *= up / ctx.g_alpha;
            return;
        case DirOp::integral_right:
            detail::integral_right_row(i, ctx.N, a, row);
            for (auto& v : row) v *= up / ctx.g_alpha;
            return;
        case DirOp::psi_plus:
            detail::psi_left_row(i, ctx.N, a, ctx.n, ctx.c, row);
            for (auto& v : row) v *= down;
            return;
        case DirOp::psi_minus:
            detail::psi_right_row(i, ctx.N, a, ctx.c, row);
            for (auto& v : row) v *= down;
            return;
        case DirOp::trunc_left:
        case DirOp::formal_restricted:
            detail::psi_left_row(i, ctx.N, a, ctx.n, ctx.c, row);
            for (auto& v : row) v *= q;
            row[i] += std::pow(r, -a) / ctx.g_1alpha;
            for (auto& v : row) v *= down;
            return;
        case DirOp::trunc_right:
            detail::psi_right_row(i, ctx.N, a, ctx.c, row);
            for (auto& v : row) v *= q;
            row[i] += std::pow(ctx.N - r, -a) / ctx.g_1alpha;
            for (auto& v : row) v *= down;
            return;
        case DirOp::formal: {
            // q sum_k (f_i - f_k)(t_k/r)^{n-1} W_ik + C_n r^{-a} f_i
            //   + q (psi+[1](r_i) - exact psi+[1](r_i)) f_i
            const auto p = detail::left_quotient(i, a, ctx.n, ctx.c, scratch);
            std::fill(row.begin(), row.end(), 0.0);
            double moment = 0.0;  // discrete psi+ applied to 1
            if (p.small_r) {
                moment = p.closed;
            } else {
                for (std::size_t k = 0; k < i; ++k) {
                    row[k] = -q * scratch[k];
                    const double w = scratch[k] / (ctx.n == 1 ? 1.0 : std::pow((k + 0.5) / r, ctx.n - 1));
                    moment += w - scratch[k];
                }
            }
            const double rp = std::pow(r, -a);
            const double exact_moment = ctx.g_1alpha * rp * ctx.moment_series;
            row[i] = q * p.weighted_cells + ctx.cn * rp + q * (moment - exact_moment);
            for (auto& v : row) v *= down;
            return;
        }
    }
}

void check_grid(const GridPtr& grid) {
    if (!grid) throw ShapeError("null grid");
}

}  // namespace

OperatorMatrix assemble_matrix(const GridPtr& grid, const DirSpec& spec, Exec ex) {
    check_grid(grid);
    const std::size_t N = grid->n_radial(), J = grid->n_dirs();
    std::vector<RowContext> ctx;
    for (std::size_t j = 0; j < J; ++j) ctx.push_back(make_context(*grid, j, spec));
    std::vector<Matrix> blocks(J, Matrix(N, N));
    for_each_index(ex, J, [&](std::size_t j) {
        std::vector<double> scratch(N);
        for (std::size_t i = 0; i < N; ++i) build_row(ctx[j], i, blocks[j].row(i), scratch);
    });
    return OperatorMatrix(std::move(blocks), grid->weights(), to_string(spec.op));
}

GridFunction apply_operator(const GridPtr& grid, const DirSpec& spec, const GridFunction& f, Exec ex) {
    check_grid(grid);
    check_on_grid(*grid, f);
    const std::size_t N = grid->n_radial(), J = grid->n_dirs();
    std::vector<RowContext> ctx;
    for (std::size_t j = 0; j < J; ++j) ctx.push_back(make_context(*grid, j, spec));
    GridFunction out(grid);
    for_each_index(ex, J, [&](std::size_t j) {
        std::vector<double> row(N), scratch(N);
        for (std::size_t i = 0; i < N; ++i) {
            build_row(ctx[j], i, row, scratch);
            cplx s{};
            for (std::size_t k = 0; k < N; ++k) s += row[k] * f[j * N + k];
            out[j * N + i] = s;
        }
    });
    return out;
}

GridFunction dir_integral_left(const GridPtr& grid, const GridFunction& g, double alpha) {
    return apply_operator(grid, {DirOp::integral_left, alpha, 0.0}, g);
}
GridFunction dir_integral_right(const GridPtr& grid, const GridFunction& g, double alpha) {
    return apply_operator(grid, {DirOp::integral_right, alpha, 0.0}, g);
}
GridFunction psi_plus(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon) {
    return apply_operator(grid, {DirOp::psi_plus, alpha, epsilon}, f);
}
GridFunction psi_minus(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon) {
    return apply_operator(grid, {DirOp::psi_minus, alpha, epsilon}, f);
}
GridFunction kipriyanov_trunc_left(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon) {
    return apply_operator(grid, {DirOp::trunc_left, alpha, epsilon}, f);
}
GridFunction kipriyanov_trunc_right(const GridPtr& grid, const GridFunction& f, double alpha, double epsilon) {
    return apply_operator(grid, {DirOp::trunc_right, alpha, epsilon}, f);
}

bool boundary_nonvanishing(const GridFunction& f) {
    const RayGrid& g = *f.grid;
    const std::size_t N = g.n_radial();
    for (std::size_t j = 0; j < g.n_dirs(); ++j) {
        double jump = 0.0;
        for (std::size_t i = 0; i + 1 < N; ++i) jump = std::max(jump, std::abs(f[j * N + i + 1] - f[j * N + i]));
        if (std::abs(f[j * N + N - 1]) > 0.75 * jump) return true;
    }
    return false;
}

FormalResult kipriyanov_formal(const GridPtr& grid, const GridFunction& f, double alpha, FormalPath path) {
    check_grid(grid);
    check_on_grid(*grid, f);
    FormalResult res;
    const DirOp op = path == FormalPath::direct ? DirOp::formal : DirOp::formal_restricted;
    res.value = apply_operator(grid, {op, alpha, 0.0}, f);
    res.boundary_warning = boundary_nonvanishing(f);
    return res;
}

namespace {
double relative(const GridFunction& approx, const GridFunction& exact) {
    const double ne = norm(exact);
    if (ne == 0.0) return norm(approx) == 0.0 ? 0.0 : INFINITY;
    return norm(approx - exact) / ne;
}
}  // namespace

double inversion_residual(const GridPtr& grid, const GridFunction& phi, double alpha, Side side) {
    check_on_grid(*grid, phi);
    if (norm(phi) == 0.0) return 0.0;
    if (side == Side::left) {
        const GridFunction f = dir_integral_left(grid, phi, alpha);
        return relative(kipriyanov_trunc_left(grid, f, alpha), phi);
    }
    const GridFunction f = dir_integral_right(grid, phi, alpha);
    return relative(kipriyanov_trunc_right(grid, f, alpha), phi);
}

double representability_residual(const GridPtr& grid, const GridFunction& f, double alpha) {
    check_on_grid(*grid, f);
    if (norm(f) == 0.0) return 0.0;
    // phi_eps f is exactly the truncated left derivative
    const GridFunction phi = kipriyanov_trunc_left(grid, f, alpha);
    return relative(dir_integral_left(grid, phi, alpha), f);
}

double adjoint_residual(const GridPtr& grid, double alpha, AdjointKind kind) {
    const DirOp l = kind == AdjointKind::integral ? DirOp::integral_left : DirOp::trunc_left;
    const DirOp r = kind == AdjointKind::integral ? DirOp::integral_right : DirOp::trunc_right;
    const OperatorMatrix a = assemble_matrix(grid, {l, alpha, 0.0});
    const OperatorMatrix b = assemble_matrix(grid, {r, alpha, 0.0});
    return adjoint_mismatch(a, b);
}

}  // namespace kfrac
