#include "kfrac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kfrac/error.hpp"

namespace kfrac {

namespace {
constexpr double pi = std::numbers::pi;
}

std::string to_string(Shape s) {
    switch (s) {
        case Shape::interval: return "interval";
        case Shape::sector: return "sector";
        case Shape::disk: return "disk";
    }
    return "?";
}

ConvexDomain ConvexDomain::interval(double d) {
    if (!(d > 0.0)) throw DomainError("interval length must be positive");
    ConvexDomain dom;
    dom.shape_ = Shape::interval;
    dom.length_ = d;
    dom.diam_ = d;
    return dom;
}

ConvexDomain ConvexDomain::sector(double radius, double angle) {
    if (!(radius > 0.0)) throw DomainError("sector radius must be positive");
    if (!(angle > 0.0 && angle <= pi)) throw DomainError("sector angle must lie in (0, pi]");
    ConvexDomain dom;
    dom.shape_ = Shape::sector;
    dom.radius_ = radius;
    dom.angle_ = angle;
    dom.diam_ = radius * std::max(1.0, 2.0 * std::sin(angle / 2.0));
    return dom;
}

ConvexDomain ConvexDomain::disk(double radius, Vec2 center, Vec2 pole) {
    if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
    const double dist = std::hypot(pole[0] - center[0], pole[1] - center[1]);
    if (std::abs(dist - radius) > 1e-12 * radius)
        throw DomainError("disk pole must lie on the boundary circle");
    ConvexDomain dom;
    dom.shape_ = Shape::disk;
    dom.radius_ = radius;
    dom.center_ = center;
    dom.pole_ = pole;
    dom.diam_ = 2.0 * radius;
    return dom;
}

double ConvexDomain::area() const {
    switch (shape_) {
        case Shape::interval: return length_;
        case Shape::sector: return 0.5 * angle_ * radius_ * radius_;
        case Shape::disk: return pi * radius_ * radius_;
    }
    return 0.0;
}

double ConvexDomain::axis_angle() const {
    if (shape_ == Shape::disk) return std::atan2(center_[1] - pole_[1], center_[0] - pole_[0]);
    return 0.0;
}

bool ConvexDomain::contains(Vec2 q, double tol) const {
    switch (shape_) {
        case Shape::interval: return q[0] >= -tol && q[0] <= length_ + tol;
        case Shape::sector: {
            const double r = std::hypot(q[0], q[1]);
            if (r <= tol) return true;
            return r <= radius_ + tol && std::abs(std::atan2(q[1], q[0])) <= angle_ / 2.0 + tol / r;
        }
        case Shape::disk:
            return std::hypot(q[0] - center_[0], q[1] - center_[1]) <= radius_ + tol;
    }
    return false;
}

RayLength ray_length(const ConvexDomain& dom, std::span<const double> e) {
    if (static_cast<int>(e.size()) != dom.dim()) throw ShapeError("ray_length: direction has wrong dimension");
    if (dom.shape() == Shape::interval) {
        if (e[0] > 0.0) return {dom.length(), false};
        return {0.0, true};
    }
    const double norm = std::hypot(e[0], e[1]);
    if (std::abs(norm - 1.0) > 1e-12) throw DomainError("ray_length: direction must be a unit vector");
    if (dom.shape() == Shape::sector) {
        const double phi = std::atan2(e[1], e[0]);
        if (std::abs(phi) <= dom.angle() / 2.0) return {dom.radius(), false};
        return {0.0, true};
    }
    // |P + e t - C|^2 = R^2 with |P - C| = R  =>  t = -2 e.(P - C)
    const Vec2 p = dom.pole(), c = dom.center();
    const double t = -2.0 * (e[0] * (p[0] - c[0]) + e[1] * (p[1] - c[1]));
    if (t <= 0.0) return {0.0, true};
    return {t, false};
}

RayGrid::RayGrid(ConvexDomain dom, std::vector<Ray> rays, std::size_t n_radial)
    : dom_(std::move(dom)), rays_(std::move(rays)), n_radial_(n_radial) {
    weights_.resize(size());
    const int n = dom_.dim();
    for (std::size_t j = 0; j < rays_.size(); ++j)
        for (std::size_t i = 0; i < n_radial_; ++i)
            weights_[index(j, i)] = rays_[j].dchi * std::pow(r(j, i), n - 1) * rays_[j].h;
}

Vec2 RayGrid::point(std::size_t j, std::size_t i) const {
    const double t = r(j, i);
    if (dom_.dim() == 1) return {t, 0.0};
    const Vec2 p = dom_.pole();
    return {p[0] + rays_[j].e[0] * t, p[1] + rays_[j].e[1] * t};
}

double RayGrid::max_spacing() const {
    double h = 0.0;
    for (const auto& ray : rays_) h = std::max(h, ray.h);
    return h;
}

bool RayGrid::same_layout(const RayGrid& o) const {
    if (this == &o) return true;
    if (o.n_radial_ != n_radial_ || o.rays_.size() != rays_.size()) return false;
    if (o.dom_.shape() != dom_.shape()) return false;
    for (std::size_t j = 0; j < rays_.size(); ++j)
        if (o.rays_[j].length != rays_[j].length || o.rays_[j].angle != rays_[j].angle) return false;
    return true;
}

GridPtr build_ray_grid(const ConvexDomain& dom, std::size_t n_dirs, std::size_t n_radial) {
    if (n_radial < 8) throw DomainError("build_ray_grid: need at least 8 radial nodes");
    if (n_dirs < 1) throw DomainError("build_ray_grid: need at least one direction");
    std::vector<Ray> rays;
    const double N = static_cast<double>(n_radial);
    if (dom.shape() == Shape::interval) {
        if (n_dirs != 1) throw DomainError("build_ray_grid: the interval has exactly one direction");
        Ray ray;
        ray.length = dom.length();
        ray.dchi = 1.0;
        ray.h = ray.length / N;
        rays.push_back(ray);
        return std::make_shared<const RayGrid>(dom, std::move(rays), n_radial);
    }
    // Direction cone: [-Theta/2, Theta/2] for the sector, (-pi/2, pi/2) about the inward
    // normal for the disk. Midpoints of a uniform partition never hit the tangent directions.
    const double width = dom.shape() == Shape::sector ? dom.angle() : pi;
    const double dchi = width / static_cast<double>(n_dirs);
    const double axis = dom.axis_angle();
    for (std::size_t j = 0; j < n_dirs; ++j) {
        Ray ray;
        const double phi = -width / 2.0 + (static_cast<double>(j) + 0.5) * dchi;
        ray.angle = axis + phi;
        ray.e = {std::cos(ray.angle), std::sin(ray.angle)};
        if (dom.shape() == Shape::sector) {
            ray.length = dom.radius();
        } else {
            ray.length = 2.0 * dom.radius() * std::cos(phi);
        }
        ray.dchi = dchi;
        ray.h = ray.length / N;
        rays.push_back(ray);
    }
    return std::make_shared<const RayGrid>(dom, std::move(rays), n_radial);
}

}  // namespace kfrac
