#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "specfun.hpp"
#include "types.hpp"
#include "waveform.hpp"

namespace nfamb {

struct SensingConfig {
    ArrayGeometry tx;
    ArrayGeometry rx;
    Mode mode = Mode::SimoMiso;
    double b_frac = 0.0;
    std::size_t k_subcarriers = 1024;
    WindowKind window = WindowKind::Rect;

    /// One aperture; the other side is a single element at the centroid.
    static SensingConfig simo(const ArrayGeometry& g, double b_frac, std::size_t k = 1024,
                              WindowKind w = WindowKind::Rect)
    {
        return {g, ArrayGeometry::point_source(), Mode::SimoMiso, b_frac, k, w};
    }

    /// Identical collocated transmit and receive apertures.
    static SensingConfig mimo(const ArrayGeometry& g, double b_frac, std::size_t k = 1024,
                              WindowKind w = WindowKind::Rect)
    {
        return {g, g, Mode::Mimo, b_frac, k, w};
    }

    void validate() const
    {
        if (!(b_frac >= 0.0) || !std::isfinite(b_frac))
            throw InvalidInput("SensingConfig: b_frac must be finite and non-negative");
        if (k_subcarriers < 1)
            throw InvalidInput("SensingConfig: k_subcarriers must be >= 1");
        if (tx.size() == 0 || rx.size() == 0)
            throw InvalidInput("SensingConfig: empty aperture");
    }
};

/// Window weights for K subcarriers; the rectangular window is accepted for any K >= 1.
inline WindowSpec window_for(WindowKind kind, std::size_t k)
{
    if (kind == WindowKind::Rect && k < 8) {
        WindowSpec w;
        w.kind = kind;
        w.k = k;
        w.weights.assign(k, 1.0);
        w.cosine_terms = {1.0};
        return w;
    }
    return make_window(kind, k);
}

enum class OfdmRoute { Auto, PairKernel, Subcarrier };

namespace detail {

inline std::complex<double> carrier(double cycles)
{
    const double frac = cycles - std::round(cycles);
    return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

/// Delta d_m = d_m(p') - d_m(p) for each element.
inline void path_differences(const std::vector<Vec3>& elems, const std::vector<double>& d_true,
                             const Vec3& p, std::vector<double>& out)
{
    out.resize(elems.size());
    for (std::size_t m = 0; m < elems.size(); ++m)
        out[m] = d_true[m] - distance(elems[m], p);
}

inline std::vector<double> distances_to(const std::vector<Vec3>& elems, const Vec3& p)
{
    std::vector<double> d(elems.size());
    for (std::size_t m = 0; m < elems.size(); ++m)
        d[m] = distance(elems[m], p);
    return d;
}

inline bool same_layout(const ArrayGeometry& x, const ArrayGeometry& y)
{
    if (x.size() != y.size())
        return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& p = x.element(i);
        const auto& q = y.element(i);
        if (p.x != q.x || p.y != q.y || p.z != q.z)
            return false;
    }
    return true;
}

inline std::vector<Vec3> grid_points(const RadialGrid& grid)
{
    const Vec3 u = Point::direction(grid.theta, grid.phi);
    std::vector<Vec3> pts(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        pts[i] = u * grid.samples[i];
    return pts;
}

inline void attach_validity(AmbiguityCurve& c, const RadialGrid& grid, double aperture)
{
    const auto w = grid.validity_warning(aperture);
    if (!w.empty())
        c.warnings.push_back(w);
}

/// Subcarrier array factor sum_m exp(-j 2 pi (1 + f_k) a_m) for all k, f_k = B (k - c) / K.
inline void subcarrier_af(const std::vector<double>& a, double b_frac, std::size_t k,
                          std::vector<std::complex<double>>& out)
{
    out.assign(k, {});
    const double c = 0.5 * static_cast<double>(k - 1);
    const double kk = static_cast<double>(k);
    for (double am : a) {
        const std::complex<double> rot = carrier(b_frac / kk * am);
        std::complex<double> z;
        for (std::size_t n = 0; n < k; ++n) {
            if (n % 64 == 0)
                z = carrier((1.0 + b_frac * (static_cast<double>(n) - c) / kk) * am);
            out[n] += z;
            z *= rot;
        }
    }
}

} // namespace detail

/// Matched-filter ambiguity with a continuous rectangular spectrum between explicit positions.
/// Returns |A|^2 / (M N)^2 for each hypothesis.
inline std::vector<double> ambiguity_exact_points(const SensingConfig& cfg, const Vec3& p_true,
                                                  const std::vector<Vec3>& hypotheses)
{
    cfg.validate();
    const auto& te = cfg.tx.elements();
    const auto& re = cfg.rx.elements();
    const auto dt = detail::distances_to(te, p_true);
    const auto dr = detail::distances_to(re, p_true);
    const double mn = static_cast<double>(te.size() * re.size());
    std::vector<double> out(hypotheses.size());
    parallel_for(hypotheses.size(), [&](std::size_t i) {
        std::vector<double> a, b;
        detail::path_differences(te, dt, hypotheses[i], a);
        detail::path_differences(re, dr, hypotheses[i], b);
        std::complex<double> s;
        if (cfg.b_frac == 0.0) {
            std::complex<double> sa, sb;
            for (double v : a)
                sa += detail::carrier(v);
            for (double v : b)
                sb += detail::carrier(v);
            s = sa * sb;
        } else {
            std::vector<std::complex<double>> pa(a.size()), pb(b.size());
            for (std::size_t m = 0; m < a.size(); ++m)
                pa[m] = detail::carrier(a[m]);
            for (std::size_t n = 0; n < b.size(); ++n)
                pb[n] = detail::carrier(b[n]);
            const bool cascade = a.size() * b.size() > 10000;
            PairwiseSum<std::complex<double>> acc;
            std::complex<double> plain;
            for (std::size_t m = 0; m < a.size(); ++m)
                for (std::size_t n = 0; n < b.size(); ++n) {
                    const auto t = pa[m] * pb[n] * sinc(cfg.b_frac * (a[m] + b[n]));
                    if (cascade)
                        acc.add(t);
                    else
                        plain += t;
                }
            s = cascade ? acc.result() : plain;
        }
        out[i] = std::norm(s) / (mn * mn);
    });
    return out;
}

/// Exact-distance matched filter, continuous rectangular spectrum of width B_f.
inline AmbiguityCurve ambiguity_exact(const SensingConfig& cfg, const RadialGrid& grid)
{
    grid.validate();
    const Vec3 p_true = Point::direction(grid.theta, grid.phi) * grid.d_prime;
    auto v = ambiguity_exact_points(cfg, p_true, detail::grid_points(grid));
    const double mn = static_cast<double>(cfg.tx.size() * cfg.rx.size());
    auto c = AmbiguityCurve::from_linear(grid, std::move(v), Provenance::Exact, mn);
    detail::attach_validity(c, grid, cfg.tx.aperture_d());
    return c;
}

/// Normalized |AF|^2 / M with exact distances.
inline AmbiguityCurve array_factor_exact(const ArrayGeometry& g, const RadialGrid& grid)
{
    grid.validate();
    const Vec3 p_true = Point::direction(grid.theta, grid.phi) * grid.d_prime;
    const auto pts = detail::grid_points(grid);
    const auto dt = detail::distances_to(g.elements(), p_true);
    const double m = static_cast<double>(g.size());
    std::vector<double> out(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
        std::vector<double> a;
        detail::path_differences(g.elements(), dt, pts[i], a);
        std::complex<double> s;
        if (a.size() > 10000) {
            PairwiseSum<std::complex<double>> acc;
            for (double v : a)
                acc.add(detail::carrier(v));
            s = acc.result();
        } else {
            for (double v : a)
                s += detail::carrier(v);
        }
        out[i] = std::norm(s) / (m * m);
    });
    auto c = AmbiguityCurve::from_linear(grid, std::move(out), Provenance::AfOnly, m);
    detail::attach_validity(c, grid, g.aperture_d());
    return c;
}

/// OFDM matched filter: the frequency integral becomes a weighted mean over K subcarriers.
inline std::vector<double> ambiguity_exact_ofdm_points(const SensingConfig& cfg, const Vec3& p_true,
                                                       const std::vector<Vec3>& hypotheses,
                                                       OfdmRoute route = OfdmRoute::Auto)
{
    cfg.validate();
    if (cfg.k_subcarriers < 2)
        throw InvalidInput("ambiguity_exact_ofdm: at least two subcarriers required");
    const WindowSpec w = window_for(cfg.window, cfg.k_subcarriers);
    const auto& te = cfg.tx.elements();
    const auto& re = cfg.rx.elements();
    const bool mirrored = detail::same_layout(cfg.tx, cfg.rx);
    const double msz = static_cast<double>(te.size()), nsz = static_cast<double>(re.size());
    const double k = static_cast<double>(cfg.k_subcarriers);

    if (route == OfdmRoute::Auto) {
        const double kernel_terms = static_cast<double>(2 * w.cosine_terms.size() - 1);
        const double pair_cost = msz * nsz * (4.0 + 3.0 * kernel_terms);
        const double sub_cost = k * (mirrored ? msz : msz + nsz) * 1.5 + 3.0 * k;
        route = pair_cost <= sub_cost ? OfdmRoute::PairKernel : OfdmRoute::Subcarrier;
    }

    const auto dt = detail::distances_to(te, p_true);
    const auto dr = detail::distances_to(re, p_true);
    const double mn = msz * nsz;
    const double wsum = w.weight_sum();
    std::vector<double> out(hypotheses.size());
    parallel_for(hypotheses.size(), [&](std::size_t i) {
        std::vector<double> a, b;
        detail::path_differences(te, dt, hypotheses[i], a);
        detail::path_differences(re, dr, hypotheses[i], b);
        std::complex<double> s;
        if (route == OfdmRoute::PairKernel) {
            std::vector<std::complex<double>> pa(a.size()), pb(b.size());
            for (std::size_t m = 0; m < a.size(); ++m)
                pa[m] = detail::carrier(a[m]);
            for (std::size_t n = 0; n < b.size(); ++n)
                pb[n] = detail::carrier(b[n]);
            const bool cascade = a.size() * b.size() > 10000;
            PairwiseSum<std::complex<double>> acc;
            std::complex<double> plain;
            for (std::size_t m = 0; m < a.size(); ++m)
                for (std::size_t n = 0; n < b.size(); ++n) {
                    const auto t = pa[m] * pb[n] * chi_windowed_kernel_u(w, cfg.b_frac * (a[m] + b[n]));
                    if (cascade)
                        acc.add(t);
                    else
                        plain += t;
                }
            s = cascade ? acc.result() : plain;
        } else {
            std::vector<std::complex<double>> fa, fb;
            detail::subcarrier_af(a, cfg.b_frac, cfg.k_subcarriers, fa);
            if (!mirrored)
                detail::subcarrier_af(b, cfg.b_frac, cfg.k_subcarriers, fb);
            const auto& fr = mirrored ? fa : fb;
            PairwiseSum<std::complex<double>> acc;
            for (std::size_t n = 0; n < cfg.k_subcarriers; ++n)
                acc.add(w.weights[n] * fa[n] * fr[n]);
            s = acc.result() / wsum;
        }
        out[i] = std::norm(s) / (mn * mn);
    });
    return out;
}

inline AmbiguityCurve ambiguity_exact_ofdm(const SensingConfig& cfg, const RadialGrid& grid,
                                           OfdmRoute route = OfdmRoute::Auto)
{
    grid.validate();
    const Vec3 p_true = Point::direction(grid.theta, grid.phi) * grid.d_prime;
    auto v = ambiguity_exact_ofdm_points(cfg, p_true, detail::grid_points(grid), route);
    const double mn = static_cast<double>(cfg.tx.size() * cfg.rx.size());
    auto c = AmbiguityCurve::from_linear(grid, std::move(v), Provenance::Exact, mn);
    detail::attach_validity(c, grid, cfg.tx.aperture_d());
    return c;
}

} // namespace nfamb
