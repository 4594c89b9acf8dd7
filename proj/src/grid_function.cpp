#include "kfrac/grid_function.hpp"

#include <cmath>

#include "kfrac/error.hpp"

namespace kfrac {

GridFunction::GridFunction(GridPtr g, CVector v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw ShapeError("grid function without grid");
    if (values.size() != grid->size()) throw ShapeError("grid function value count differs from node count");
}

GridFunction::GridFunction(GridPtr g) : grid(std::move(g)) {
    if (!grid) throw ShapeError("grid function without grid");
    values.assign(grid->size(), cplx{});
}

GridFunction sample(const GridPtr& grid, const std::function<cplx(double, std::size_t)>& f) {
    GridFunction out(grid);
    for (std::size_t j = 0; j < grid->n_dirs(); ++j)
        for (std::size_t i = 0; i < grid->n_radial(); ++i) out[grid->index(j, i)] = f(grid->r(j, i), j);
    return out;
}

GridFunction sample_point(const GridPtr& grid, const std::function<cplx(Vec2)>& f) {
    GridFunction out(grid);
    for (std::size_t j = 0; j < grid->n_dirs(); ++j)
        for (std::size_t i = 0; i < grid->n_radial(); ++i) out[grid->index(j, i)] = f(grid->point(j, i));
    return out;
}

void check_on_grid(const RayGrid& grid, const GridFunction& f) {
    if (!f.grid || f.values.size() != grid.size() || !f.grid->same_layout(grid))
        throw ShapeError("grid function is not sampled on this grid");
}

cplx integrate(const RayGrid& grid, const GridFunction& f) {
    check_on_grid(grid, f);
    const auto& w = grid.weights();
    cplx s{};
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f[k];
    return s;
}

cplx inner(const GridFunction& f, const GridFunction& g) {
    check_on_grid(*f.grid, g);
    const auto& w = f.grid->weights();
    cplx s{};
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * f[k] * std::conj(g[k]);
    return s;
}

double norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner(f, f).real())); }

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    check_on_grid(*a.grid, b);
    GridFunction out(a.grid);
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
    return out;
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    check_on_grid(*a.grid, b);
    GridFunction out(a.grid);
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return out;
}

GridFunction operator*(cplx s, const GridFunction& a) {
    GridFunction out(a.grid);
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = s * a[k];
    return out;
}

}  // namespace kfrac
