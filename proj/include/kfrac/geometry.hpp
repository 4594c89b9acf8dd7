#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace kfrac {

using Vec2 = std::array<double, 2>;

enum class Shape { interval, sector, disk };

std::string to_string(Shape s);

// Convex domain with a marked boundary pole P.
//   interval [0, d], pole 0.
//   sector of radius R and opening angle Theta <= pi, vertex at the origin, bisected by +x.
//   disk of radius R with center C and pole on the circle.
class ConvexDomain {
public:
    static ConvexDomain interval(double d);
    static ConvexDomain sector(double radius, double angle);
    static ConvexDomain disk(double radius, Vec2 center, Vec2 pole);

    Shape shape() const { return shape_; }
    int dim() const { return shape_ == Shape::interval ? 1 : 2; }
    double length() const { return length_; }
    double radius() const { return radius_; }
    double angle() const { return angle_; }
    Vec2 center() const { return center_; }
    Vec2 pole() const { return pole_; }
    double diam() const { return diam_; }
    double area() const;  // |Omega|; length for the interval

    // Angle of the cone axis (direction of the inward normal at the pole for the disk).
    double axis_angle() const;
    bool contains(Vec2 q, double tol = 0.0) const;

private:
    Shape shape_ = Shape::interval;
    double length_ = 0.0;
    double radius_ = 0.0;
    double angle_ = 0.0;
    Vec2 center_{0.0, 0.0};
    Vec2 pole_{0.0, 0.0};
    double diam_ = 0.0;
};

struct RayLength {
    double length = 0.0;
    bool outside = false;  // e leaves the direction cone; length is then 0
};

// sup{t : P + e t in Omega}. For the interval pass a one-component e.
RayLength ray_length(const ConvexDomain& dom, std::span<const double> e);

struct Ray {
    Vec2 e{1.0, 0.0};
    double angle = 0.0;   // polar angle of e
    double length = 0.0;  // d(e)
    double dchi = 1.0;    // angular weight
    double h = 0.0;       // radial spacing d(e)/N
};

class RayGrid {
public:
    RayGrid(ConvexDomain dom, std::vector<Ray> rays, std::size_t n_radial);

    const ConvexDomain& domain() const { return dom_; }
    int dim() const { return dom_.dim(); }
    std::size_t n_dirs() const { return rays_.size(); }
    std::size_t n_radial() const { return n_radial_; }
    std::size_t size() const { return rays_.size() * n_radial_; }
    std::size_t index(std::size_t j, std::size_t i) const { return j * n_radial_ + i; }

    const Ray& ray(std::size_t j) const { return rays_[j]; }
    double r(std::size_t j, std::size_t i) const { return (static_cast<double>(i) + 0.5) * rays_[j].h; }
    double r_at(std::size_t k) const { return r(k / n_radial_, k % n_radial_); }
    Vec2 point(std::size_t j, std::size_t i) const;
    const std::vector<double>& weights() const { return weights_; }
    double max_spacing() const;

    bool same_layout(const RayGrid& o) const;

private:
    ConvexDomain dom_;
    std::vector<Ray> rays_;
    std::size_t n_radial_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const RayGrid>;

GridPtr build_ray_grid(const ConvexDomain& dom, std::size_t n_dirs, std::size_t n_radial);

}  // namespace kfrac
