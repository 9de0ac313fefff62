#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace nfamb {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Spherical position about the array centroid; theta from +Z, phi from +X.
struct Point {
    double d = 1.0;
    double theta = 0.0;
    double phi = 0.0;

    static Vec3 direction(double theta, double phi)
    {
        return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    }
    Vec3 cartesian() const { return direction(theta, phi) * d; }
};

/// Ray along which each geometry's closed-form cut is defined.
struct Ray {
    double theta = 0.0;
    double phi = 0.0;
};

inline Ray default_ray(ArrayKind k)
{
    switch (k) {
    case ArrayKind::ULA: return {std::numbers::pi / 2, std::numbers::pi / 2};
    case ArrayKind::UCA: return {std::numbers::pi / 2, 0.0};
    case ArrayKind::URA:
    case ArrayKind::UPCA: return {0.0, 0.0};
    }
    return {};
}

class ArrayGeometry {
public:
    ArrayGeometry(ArrayKind kind, std::vector<Vec3> elements, double aperture_d, double spacing)
        : kind_(kind), elements_(std::move(elements)), aperture_d_(aperture_d), spacing_(spacing)
    {
    }

    /// One isotropic element at the origin (the single receiver of SIMO/MISO processing).
    static ArrayGeometry point_source() { return ArrayGeometry(ArrayKind::ULA, {Vec3{}}, 0.0, 0.5); }

    ArrayKind kind() const { return kind_; }
    const std::vector<Vec3>& elements() const { return elements_; }
    const Vec3& element(std::size_t i) const { return elements_.at(i); }
    std::size_t size() const { return elements_.size(); }
    double aperture_d() const { return aperture_d_; }
    double spacing() const { return spacing_; }

private:
    ArrayKind kind_;
    std::vector<Vec3> elements_;
    double aperture_d_;
    double spacing_;
};

namespace detail {

inline std::size_t round_up_odd(std::size_t m) { return (m % 2 == 0) ? m + 1 : m; }

inline std::size_t ceil_count(double v) { return static_cast<std::size_t>(std::ceil(v - 1e-9)); }

inline void recentre(std::vector<Vec3>& pts)
{
    Vec3 c;
    for (const auto& p : pts)
        c = c + p;
    c = c * (1.0 / static_cast<double>(pts.size()));
    for (auto& p : pts)
        p = p - c;
}

inline std::vector<Vec3> ring(double r, std::size_t n)
{
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        out.push_back({r * std::cos(a), r * std::sin(a), 0.0});
    }
    return out;
}

} // namespace detail

/// Lay out an array of the given kind. Element counts are rounded up to odd.
inline ArrayGeometry build_array(ArrayKind kind, double aperture_d, double spacing)
{
    if (!(std::isfinite(aperture_d) && std::isfinite(spacing)) || aperture_d <= 0.0 || spacing <= 0.0)
        throw InvalidInput("build_array: aperture and spacing must be positive");
    if (spacing > 0.5)
        throw NyquistError("build_array: spacing above half a wavelength");
    if (aperture_d < spacing)
        throw DegenerateArrayError("build_array: aperture smaller than one spacing");

    std::vector<Vec3> pts;
    double actual_spacing = spacing;
    switch (kind) {
    case ArrayKind::ULA: {
        const std::size_t m = detail::round_up_odd(detail::ceil_count(aperture_d / spacing) + 1);
        actual_spacing = aperture_d / static_cast<double>(m - 1);
        const auto half = static_cast<long>(m / 2);
        for (long i = -half; i <= half; ++i)
            pts.push_back({static_cast<double>(i) * actual_spacing, 0.0, 0.0});
        break;
    }
    case ArrayKind::UCA: {
        const std::size_t m =
            detail::round_up_odd(detail::ceil_count(std::numbers::pi * aperture_d / spacing));
        pts = detail::ring(aperture_d / 2.0, m);
        actual_spacing = std::numbers::pi * aperture_d / static_cast<double>(m);
        break;
    }
    case ArrayKind::URA: {
        const double side = aperture_d / std::numbers::sqrt2;
        const std::size_t m = detail::round_up_odd(detail::ceil_count(side / spacing) + 1);
        actual_spacing = side / static_cast<double>(m - 1);
        const auto half = static_cast<long>(m / 2);
        for (long i = -half; i <= half; ++i)
            for (long j = -half; j <= half; ++j)
                pts.push_back({static_cast<double>(i) * actual_spacing,
                               static_cast<double>(j) * actual_spacing, 0.0});
        break;
    }
    case ArrayKind::UPCA: {
        const double r_max = aperture_d / 2.0;
        const std::size_t q_rings = std::max<std::size_t>(1, detail::ceil_count(r_max / spacing));
        pts.push_back({});
        for (std::size_t q = 1; q <= q_rings; ++q) {
            const double r = r_max * static_cast<double>(q) / static_cast<double>(q_rings);
            const std::size_t n = std::max<std::size_t>(
                1, detail::ceil_count(2.0 * std::numbers::pi * r / spacing));
            const auto rg = detail::ring(r, n);
            pts.insert(pts.end(), rg.begin(), rg.end());
        }
        actual_spacing = std::min(spacing, r_max / static_cast<double>(q_rings));
        break;
    }
    }
    detail::recentre(pts);
    return ArrayGeometry(kind, std::move(pts), aperture_d, actual_spacing);
}

/// Exact Euclidean distance from element i to p.
inline double distance(const ArrayGeometry& g, std::size_t i, const Point& p)
{
    return (p.cartesian() - g.element(i)).norm();
}

inline double distance(const Vec3& element, const Vec3& target) { return (target - element).norm(); }

/// Largest element-to-element distance (quadratic in the element count).
inline double max_pairwise_distance(const ArrayGeometry& g)
{
    double best = 0.0;
    const auto& e = g.elements();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j)
            best = std::max(best, (e[i] - e[j]).norm());
    return best;
}

struct EffectiveAperture {
    double x = 0.0;  ///< along X (the only axis for ULA, the diameter for UCA/UPCA)
    double y = 0.0;  ///< along Y (URA only, zero otherwise)
};

inline EffectiveAperture effective_aperture(const ArrayGeometry& g, double theta_p, double phi_p)
{
    const double st = std::sin(theta_p);
    const double cx = std::sqrt(std::max(0.0, 1.0 - st * st * std::cos(phi_p) * std::cos(phi_p)));
    const double cy = std::sqrt(std::max(0.0, 1.0 - st * st * std::sin(phi_p) * std::sin(phi_p)));
    switch (g.kind()) {
    case ArrayKind::ULA: return {g.aperture_d() * cx, 0.0};
    case ArrayKind::URA: {
        const double side = g.aperture_d() / std::numbers::sqrt2;
        return {side * cx, side * cy};
    }
    case ArrayKind::UCA:
    case ArrayKind::UPCA: return {g.aperture_d(), 0.0};
    }
    return {};
}

inline double fraunhofer_distance(double d_eff)
{
    if (!(d_eff > 0.0))
        throw InvalidInput("fraunhofer_distance: aperture must be positive");
    return 2.0 * d_eff * d_eff;
}

/// |d - d'| / (d d'); an infinite d' gives the far-field limit 1/d.
inline double vergence(double d, double d_prime)
{
    if (!(d > 0.0) || !(d_prime > 0.0))
        throw InvalidInput("vergence: distances must be positive");
    if (std::isinf(d_prime))
        return 1.0 / d;
    if (std::isinf(d))
        return 1.0 / d_prime;
    return std::fabs(d - d_prime) / (d * d_prime);
}

struct CorrectionTerm {
    double value = 0.0;
    std::size_t element = 0;
};

/// Worst |delta_m(p_min) - delta_m(p_max)| over the elements, with p_min at 1.2D on the ray and
/// p_max at infinity. The reference point cancels, so centroid referencing is used throughout.
inline CorrectionTerm max_correction_term(const ArrayGeometry& g, Mode mode, Ray ray)
{
    const Vec3 u = Point::direction(ray.theta, ray.phi);
    const double d_min = 1.2 * g.aperture_d();
    const Vec3 p_min = u * d_min;
    CorrectionTerm best;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const Vec3& e = g.element(m);
        const double near = distance(e, p_min) - d_min;
        const double far = -e.dot(u);
        const double v = std::fabs(near - far);
        if (v > best.value)
            best = {v, m};
    }
    if (mode == Mode::Mimo)
        best.value *= 2.0;
    return best;
}

inline CorrectionTerm max_correction_term(const ArrayGeometry& g, Mode mode)
{
    return max_correction_term(g, mode, default_ray(g.kind()));
}

} // namespace nfamb
