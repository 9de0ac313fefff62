#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "exact_mf.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "specfun.hpp"
#include "types.hpp"
#include "waveform.hpp"

namespace nfamb {

/// Normalized Fresnel kernel of the linear aperture, f(x) = (4/x)(C^2(sqrt(x/4)) + S^2(sqrt(x/4))).
inline double af_ula_normalized(double x)
{
    x = std::fabs(x);
    if (x < 1e-8)
        return 1.0 - std::numbers::pi * std::numbers::pi * x * x / 720.0;
    const double v = std::sqrt(x / 4.0);
    const auto fs = fresnel(v);
    return (fs.c * fs.c + fs.s * fs.s) / (v * v);
}

/// Normalized closed-form |AF|^2 as a function of x = d_FA * d_ver.
inline double af_closed_normalized(ArrayKind kind, double x)
{
    switch (kind) {
    case ArrayKind::ULA: return af_ula_normalized(x);
    case ArrayKind::UCA: {
        const double j = bessel_j0(std::numbers::pi * x / 16.0);
        return j * j;
    }
    case ArrayKind::URA: {
        const double f = af_ula_normalized(x / 2.0);
        return f * f;
    }
    case ArrayKind::UPCA: {
        const double s = sinc(x / 16.0);
        return s * s;
    }
    }
    return 0.0;
}

/// Un-normalized closed-form |AF|^2 (peak m_elements at d = d').
inline double af_closed(ArrayKind kind, double d_prime, double d, double d_fa, std::size_t m_elements)
{
    return static_cast<double>(m_elements) * af_closed_normalized(kind, d_fa * vergence(d, d_prime));
}

/// Distances closer than 1.2 D are outside the Taylor-approximation region.
inline bool in_taylor_region(double d, double d_prime, double aperture_d)
{
    return d >= 1.2 * aperture_d && d_prime >= 1.2 * aperture_d;
}

namespace detail {
inline constexpr double cut_tol = 1e-9;
}

/// Closed-form |AF|^2 along an arbitrary ray, with the Fraunhofer distance rescaled by the
/// effective aperture. Only the ULA and URA have off-axis forms; UCA is accepted in its plane
/// and UPCA on its normal.
inline double af_closed_offaxis(ArrayKind kind, double d_prime, double d, double theta_p, double phi_p,
                                const ArrayGeometry& g)
{
    const double m = static_cast<double>(g.size());
    const double dver = vergence(d, d_prime);
    switch (kind) {
    case ArrayKind::ULA: {
        const auto eff = effective_aperture(g, theta_p, phi_p);
        return m * af_ula_normalized(2.0 * eff.x * eff.x * dver);
    }
    case ArrayKind::URA: {
        const auto eff = effective_aperture(g, theta_p, phi_p);
        return m * af_ula_normalized(2.0 * eff.x * eff.x * dver) *
               af_ula_normalized(2.0 * eff.y * eff.y * dver);
    }
    case ArrayKind::UCA:
        if (std::fabs(theta_p - std::numbers::pi / 2) > detail::cut_tol)
            throw UnsupportedCut("af_closed_offaxis: UCA closed form holds in the array plane only");
        return af_closed(kind, d_prime, d, fraunhofer_distance(g.aperture_d()), g.size());
    case ArrayKind::UPCA:
        if (std::fabs(theta_p) > detail::cut_tol)
            throw UnsupportedCut("af_closed_offaxis: UPCA closed form holds on the array normal only");
        return af_closed(kind, d_prime, d, fraunhofer_distance(g.aperture_d()), g.size());
    }
    return 0.0;
}

enum class ChiModel { Ofdm, Sinc };
enum class AfSource { ClosedForm, Exact };

struct ApproxOptions {
    ChiModel chi = ChiModel::Ofdm;
    AfSource af = AfSource::ClosedForm;
};

/// Bandwidth-only factor |chi|^2 on the grid using the centre-referenced difference 2(d - d').
inline AmbiguityCurve bandwidth_only(const SensingConfig& cfg, const RadialGrid& grid,
                                     ChiModel chi = ChiModel::Ofdm)
{
    grid.validate();
    std::vector<double> v(grid.size());
    if (chi == ChiModel::Ofdm) {
        const WindowSpec w = window_for(cfg.window, cfg.k_subcarriers);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = chi_windowed_kernel(cfg.b_frac, w, grid.samples[i] - grid.d_prime);
            v[i] = x * x;
        }
    } else {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = chi_rect_oneway(cfg.b_frac, grid.samples[i] - grid.d_prime);
            v[i] = x * x;
        }
    }
    return AmbiguityCurve::from_linear(grid, std::move(v), Provenance::BandwidthOnly);
}

/// Normalized |AF|^2 of one aperture on the grid from its closed form.
inline std::vector<double> af_closed_curve(const ArrayGeometry& g, const RadialGrid& grid)
{
    std::vector<double> v(grid.size(), 1.0);
    if (g.size() == 1)
        return v;
    const double m = static_cast<double>(g.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = af_closed_offaxis(g.kind(), grid.d_prime, grid.samples[i], grid.theta, grid.phi, g) / m;
    return v;
}

/// Separable approximation |chi|^2 |AF_tx|^2 |AF_rx|^2, normalized to 1 at d = d'.
inline AmbiguityCurve ambiguity_approx(const SensingConfig& cfg, const RadialGrid& grid,
                                       ApproxOptions opt = {})
{
    grid.validate();
    auto bw = bandwidth_only(cfg, grid, opt.chi);
    auto factor = [&](const ArrayGeometry& g) {
        if (g.size() == 1)
            return std::vector<double>(grid.size(), 1.0);
        if (opt.af == AfSource::Exact)
            return array_factor_exact(g, grid).values_linear;
        return af_closed_curve(g, grid);
    };
    const auto ft = factor(cfg.tx);
    const auto fr = detail::same_layout(cfg.tx, cfg.rx) ? ft : factor(cfg.rx);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = bw.values_linear[i] * ft[i] * fr[i];
    auto c = AmbiguityCurve::from_linear(grid, std::move(v), Provenance::Approx,
                                         static_cast<double>(cfg.tx.size() * cfg.rx.size()));
    detail::attach_validity(c, grid, cfg.tx.aperture_d());
    return c;
}

/// Closed-form AF-only curve of the configuration (the product over both apertures).
inline AmbiguityCurve af_only_closed(const SensingConfig& cfg, const RadialGrid& grid)
{
    grid.validate();
    const auto ft = af_closed_curve(cfg.tx, grid);
    const auto fr = af_closed_curve(cfg.rx, grid);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = ft[i] * fr[i];
    auto c = AmbiguityCurve::from_linear(grid, std::move(v), Provenance::AfOnly,
                                         static_cast<double>(cfg.tx.size() * cfg.rx.size()));
    detail::attach_validity(c, grid, cfg.tx.aperture_d());
    return c;
}

struct ConstraintReport {
    ArrayKind kind = ArrayKind::ULA;
    Mode mode = Mode::SimoMiso;
    double bf_dlambda = std::numeric_limits<double>::quiet_NaN();
    double limit = 0.0;
    double recomputed_limit = std::numeric_limits<double>::quiet_NaN();
    bool satisfied_quarter = false;
};

inline double tabulated_constraint_limit(ArrayKind kind, Mode mode)
{
    const double base = kind == ArrayKind::UCA ? 9.615 : 10.0;
    return base / static_cast<double>(af_power(mode));
}

/// Bandwidth-aperture product limit; the recomputed value is D / max correction term of a
/// discrete array of aperture `recompute_aperture` (skipped when that is not positive).
inline ConstraintReport separability_constraint(ArrayKind kind, Mode mode,
                                                double bf_dlambda = std::numeric_limits<double>::quiet_NaN(),
                                                double recompute_aperture = 1000.0, double spacing = 0.5)
{
    ConstraintReport r;
    r.kind = kind;
    r.mode = mode;
    r.bf_dlambda = bf_dlambda;
    r.limit = tabulated_constraint_limit(kind, mode);
    if (recompute_aperture > 0.0) {
        const auto g = build_array(kind, recompute_aperture, spacing);
        r.recomputed_limit = g.aperture_d() / max_correction_term(g, mode).value;
    }
    r.satisfied_quarter = std::isfinite(bf_dlambda) && bf_dlambda <= r.limit / 4.0;
    return r;
}

} // namespace nfamb
