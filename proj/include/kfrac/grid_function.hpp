#pragma once

#include <functional>

#include "kfrac/geometry.hpp"
#include "kfrac/matrix.hpp"

namespace kfrac {

// Complex samples on a RayGrid, node order j * n_radial + i.
struct GridFunction {
    GridPtr grid;
    CVector values;

    GridFunction() = default;
    GridFunction(GridPtr g, CVector v);
    explicit GridFunction(GridPtr g);  // zeros

    std::size_t size() const { return values.size(); }
    cplx& operator[](std::size_t k) { return values[k]; }
    const cplx& operator[](std::size_t k) const { return values[k]; }
};

// f sampled at the nodes; f(r, j) receives the distance to the pole and the ray index.
GridFunction sample(const GridPtr& grid, const std::function<cplx(double r, std::size_t j)>& f);
GridFunction sample_point(const GridPtr& grid, const std::function<cplx(Vec2 q)>& f);

void check_on_grid(const RayGrid& grid, const GridFunction& f);

// sum w f
cplx integrate(const RayGrid& grid, const GridFunction& f);
// (f, g) = sum w f conj(g)
cplx inner(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator*(cplx s, const GridFunction& a);

}  // namespace kfrac
