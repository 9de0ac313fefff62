#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "closed_form.hpp"
#include "error.hpp"
#include "exact_mf.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "roots.hpp"
#include "types.hpp"
#include "waveform.hpp"

namespace nfamb {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// Half-power argument x of the normalized closed-form |AF|^2 (squared for MIMO).
inline double solve_alpha(ArrayKind kind, Mode mode)
{
    const int p = af_power(mode);
    auto g = [&](double x) { return std::pow(af_closed_normalized(kind, x), p) - 0.5; };
    double hi = 0.25;
    while (g(hi) > 0.0) {
        hi += 0.25;
        if (hi > 64.0)
            throw ComputationError("solve_alpha: no half-power crossing");
    }
    return bisect(g, hi - 0.25, hi, 1e-12);
}

/// 3 dB range width of the near-field beam; infinite at and beyond d_FA / alpha.
inline double beamdepth(double d_ap, double d_prime, double alpha)
{
    if (!(d_ap > 0.0) || !(d_prime > 0.0))
        throw InvalidInput("beamdepth: aperture and distance must be positive");
    const double dfa = fraunhofer_distance(d_ap);
    const double den = dfa * dfa - alpha * alpha * d_prime * d_prime;
    if (den <= 0.0)
        return inf;
    return 2.0 * alpha * dfa * d_prime * d_prime / den;
}

inline double bd_min_asymptotic(double alpha)
{
    if (!(alpha > 0.0))
        throw InvalidInput("bd_min_asymptotic: alpha must be positive");
    return 1.44 * alpha;
}

inline double min_aperture(double eta, double alpha)
{
    if (!(eta > 1.0))
        throw InvalidInput("min_aperture: eta must exceed 1");
    if (std::isinf(eta))
        return 0.6 * alpha;
    return 0.6 * alpha * std::sqrt(eta / (eta - 1.0));
}

inline double min_fbw(double eta, double alpha)
{
    if (!(eta >= 1.0))
        throw InvalidInput("min_fbw: eta must be at least 1");
    return eta * 0.308 / alpha;
}

/// B_f D_lambda at the eta-matched sizing; alpha cancels.
inline double min_bf_d_product(double eta) { return min_fbw(eta, 1.0) * min_aperture(eta, 1.0); }

struct NfRegion {
    double lower = 0.0;
    double upper = 0.0;
};

inline NfRegion nf_region(double d_ap, double alpha)
{
    return {1.2 * d_ap, fraunhofer_distance(d_ap) / alpha};
}

/// Distance at which the beamdepth equals the bandwidth resolution 0.443 / B_f.
inline double boundary_nf_bw(double d_ap, double b_frac, double alpha)
{
    if (!(d_ap > 0.0) || !(b_frac >= 0.0))
        throw InvalidInput("boundary_nf_bw: invalid aperture or bandwidth");
    if (std::isinf(b_frac))
        return 0.0;
    const double d2 = d_ap * d_ap;
    return std::sqrt(1.772 * d2 * d2 / (4.0 * alpha * b_frac * d2 + 0.443 * alpha * alpha));
}

/// boundary_nf_bw limited to the near-field region.
inline double boundary_nf_bw_clamped(double d_ap, double b_frac, double alpha)
{
    const auto r = nf_region(d_ap, alpha);
    return std::clamp(boundary_nf_bw(d_ap, b_frac, alpha), r.lower, r.upper);
}

/// Mainlobe index range [lo, hi] around the global maximum: walk outwards while non-increasing.
struct Lobe {
    std::size_t peak = 0, lo = 0, hi = 0;
};

inline Lobe mainlobe(const std::vector<double>& v)
{
    if (v.empty())
        throw InvalidInput("mainlobe: empty curve");
    Lobe l;
    l.peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
    l.hi = l.peak;
    while (l.hi + 1 < v.size() && v[l.hi + 1] <= v[l.hi])
        ++l.hi;
    l.lo = l.peak;
    while (l.lo > 0 && v[l.lo - 1] <= v[l.lo])
        --l.lo;
    return l;
}

/// Highest sidelobe relative to the peak, in dB; -inf when nothing lies outside the mainlobe.
inline double psl(const std::vector<double>& v)
{
    const Lobe l = mainlobe(v);
    double side = -1.0;
    for (std::size_t i = 0; i < l.lo; ++i)
        side = std::max(side, v[i]);
    for (std::size_t i = l.hi + 1; i < v.size(); ++i)
        side = std::max(side, v[i]);
    if (side <= 0.0)
        return -inf;
    return 10.0 * std::log10(side / v[l.peak]);
}

inline double psl(const AmbiguityCurve& c) { return psl(c.values_linear); }

/// Sidelobe to mainlobe energy in dB, trapezoid-integrated over x.
inline double isl(const std::vector<double>& x, const std::vector<double>& v)
{
    if (x.size() != v.size())
        throw InvalidInput("isl: size mismatch");
    const Lobe l = mainlobe(v);
    auto trap = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = a; i < b; ++i)
            s += 0.5 * (v[i] + v[i + 1]) * (x[i + 1] - x[i]);
        return s;
    };
    const double main = trap(l.lo, l.hi);
    const double side = trap(0, l.lo) + trap(l.hi, v.size() - 1);
    if (side <= 0.0)
        return -inf;
    if (main <= 0.0)
        return inf;
    return 10.0 * std::log10(side / main);
}

inline double isl(const AmbiguityCurve& c) { return isl(c.grid.samples, c.values_linear); }

/// Width of the region around the peak above half the peak value, linearly interpolated.
inline double half_power_width(const std::vector<double>& x, const std::vector<double>& v)
{
    const Lobe l = mainlobe(v);
    const double half = 0.5 * v[l.peak];
    std::size_t i = l.peak;
    while (i + 1 < v.size() && v[i + 1] >= half)
        ++i;
    if (i + 1 == v.size())
        return inf;
    const double right = x[i] + (v[i] - half) / (v[i] - v[i + 1]) * (x[i + 1] - x[i]);
    std::size_t j = l.peak;
    while (j > 0 && v[j - 1] >= half)
        --j;
    if (j == 0)
        return inf;
    const double left = x[j] - (v[j] - half) / (v[j] - v[j - 1]) * (x[j] - x[j - 1]);
    return right - left;
}

inline double half_power_width(const AmbiguityCurve& c)
{
    return half_power_width(c.grid.samples, c.values_linear);
}

/// RMSE of dB values, both floored at -120 dB.
inline double db_rmse(const AmbiguityCurve& a, const AmbiguityCurve& b)
{
    if (a.size() != b.size() || a.grid.samples != b.grid.samples)
        throw GridError("db_rmse: curves are on different grids");
    if (a.size() == 0)
        throw GridError("db_rmse: empty curves");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = std::max(-120.0, to_db(a.values_linear[i]));
        const double dbv = std::max(-120.0, to_db(b.values_linear[i]));
        acc += (da - dbv) * (da - dbv);
    }
    return std::sqrt(acc / static_cast<double>(a.size()));
}

/// Fractional bandwidth whose 3 dB resolution 0.443 / B_f equals BD_min = 1.44 alpha.
inline double matched_bandwidth(double alpha) { return min_fbw(1.0, alpha); }

enum class SidelobeMetric { PSL, ISL };

struct GainSetup {
    ArrayKind kind = ArrayKind::ULA;
    Mode mode = Mode::SimoMiso;
    double aperture_d = 50.0;
    double spacing = 0.5;
    double b_frac = 0.0;
    std::size_t k_subcarriers = 1024;
    WindowKind window = WindowKind::Rect;
    /// Half-width of the evaluation grid in bandwidth null widths 1/(2 B_f).
    double null_widths = 10.0;
    double step = 0.025;
};

struct GainPoint {
    double d_prime = 0.0;
    double gain_db = nan;      ///< baseline - composite: positive means lower sidelobes
    double composite_db = nan;
    double baseline_db = nan;
    std::string note;
};

inline RadialGrid gain_grid(const GainSetup& s, double d_prime)
{
    const double w = s.null_widths / (2.0 * s.b_frac);
    const double lo = std::max(s.step, d_prime - w);
    return RadialGrid::uniform(d_prime, lo, d_prime + w, s.step, default_ray(s.kind));
}

/// Sidelobe gain of the separable composite over the bandwidth-only curve at each d'.
inline std::vector<GainPoint> gain_vs_distance(const GainSetup& s, SidelobeMetric metric,
                                               const std::vector<double>& d_primes)
{
    if (!(s.b_frac > 0.0))
        throw InvalidInput("gain_vs_distance: b_frac must be positive");
    const auto g = build_array(s.kind, s.aperture_d, s.spacing);
    const SensingConfig cfg = s.mode == Mode::Mimo ? SensingConfig::mimo(g, s.b_frac, s.k_subcarriers, s.window)
                                                   : SensingConfig::simo(g, s.b_frac, s.k_subcarriers, s.window);
    const auto region = nf_region(s.aperture_d, solve_alpha(s.kind, s.mode));
    std::vector<GainPoint> out(d_primes.size());
    parallel_for(d_primes.size(), [&](std::size_t i) {
        GainPoint& gp = out[i];
        gp.d_prime = d_primes[i];
        if (d_primes[i] < region.lower * (1 - 1e-12) || d_primes[i] > region.upper * (1 + 1e-12)) {
            gp.note = "outside near-field region";
            return;
        }
        const auto grid = gain_grid(s, d_primes[i]);
        const auto comp = ambiguity_approx(cfg, grid);
        const auto base = bandwidth_only(cfg, grid);
        if (metric == SidelobeMetric::PSL) {
            gp.composite_db = psl(comp);
            gp.baseline_db = psl(base);
        } else {
            gp.composite_db = isl(comp);
            gp.baseline_db = isl(base);
        }
        gp.gain_db = gp.baseline_db - gp.composite_db;
    });
    return out;
}

/// n log-spaced values on [lo, hi].
inline std::vector<double> logspace(double lo, double hi, std::size_t n)
{
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

struct ResolutionPoint {
    double d_prime = 0.0;
    double width = nan;       ///< 3 dB width of the composite curve
    double beamdepth = nan;   ///< analytic near-field beamdepth
    double bandwidth_res = nan;  ///< 0.443 / B_f
};

/// Composite 3 dB resolution versus distance for one configuration.
inline std::vector<ResolutionPoint> resolution_vs_distance(ArrayKind kind, Mode mode, double d_ap, double b_frac,
                                                           const std::vector<double>& d_primes,
                                                           double spacing = 0.5, std::size_t k = 1024)
{
    const double alpha = solve_alpha(kind, mode);
    const auto g = build_array(kind, d_ap, spacing);
    const SensingConfig cfg = mode == Mode::Mimo ? SensingConfig::mimo(g, b_frac, k) : SensingConfig::simo(g, b_frac, k);
    std::vector<ResolutionPoint> out(d_primes.size());
    parallel_for(d_primes.size(), [&](std::size_t i) {
        const double dp = d_primes[i];
        auto& r = out[i];
        r.d_prime = dp;
        r.beamdepth = beamdepth(d_ap, dp, alpha);
        r.bandwidth_res = b_frac > 0.0 ? 0.443 / b_frac : inf;
        const double scale = std::min(r.beamdepth, r.bandwidth_res);
        if (!std::isfinite(scale)) {
            r.width = inf;
            return;
        }
        const double w = 4.0 * scale;
        const double step = scale / 400.0;
        const auto grid = RadialGrid::uniform(dp, std::max(step, dp - w), dp + w, step, default_ray(kind));
        r.width = half_power_width(ambiguity_approx(cfg, grid));
    });
    return out;
}

struct MinBwOptions {
    std::size_t k_subcarriers = 1024;
    double eta = 1.01;
    std::size_t n_distances = 64;
    double rel_tol = 1e-4;
    /// Allowed excess over the far-field PSL target (numerical slack at the far-field end).
    double margin_db = 0.01;
    double max_half_width = 2000.0;
    double step = 0.02;
    std::size_t max_samples = 20000;
};

struct MinBwResult {
    ArrayKind kind = ArrayKind::ULA;
    Mode mode = Mode::SimoMiso;
    WindowKind window = WindowKind::Rect;
    double aperture_d = 0.0;
    double target_psl_db = 0.0;
    double b_frac = inf;  ///< smallest fractional bandwidth meeting the target (inf: none needed)
    double ratio = inf;   ///< B_f,min / B_f,min_PSL
    double worst_d_prime = nan;
};

/// PSL of the window's own bandwidth ambiguity, measured on a dense lag grid.
inline double window_psl_measured(const WindowSpec& w, double u_max = 60.0, double du = 1e-3)
{
    const auto n = static_cast<std::size_t>(u_max / du) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = chi_windowed_kernel_u(w, du * static_cast<double>(i));
        v[i] = c * c;
    }
    return psl(v);
}

namespace detail {

/// Worst PSL over the near-field span of the composite built from the asymptotic array factor,
/// whose argument is d_FA |d - d'| / d'^2. The curve is symmetric in d - d', so one side suffices.
inline std::pair<double, double> worst_span_psl(ArrayKind kind, int p, const WindowSpec& w, double b_frac,
                                                double d_fa, const std::vector<double>& d_primes,
                                                const MinBwOptions& opt)
{
    std::vector<double> res(d_primes.size());
    parallel_for(d_primes.size(), [&](std::size_t j) {
        const double dp = d_primes[j];
        const double half =
            b_frac > 0.0 ? std::min(40.0 * 0.443 * w.relative_resolution / b_frac, opt.max_half_width)
                         : opt.max_half_width;
        const auto n_full = std::min(static_cast<std::size_t>(2.0 * half / opt.step) + 2, opt.max_samples);
        const double step = 2.0 * half / static_cast<double>(n_full - 1);
        const auto n = static_cast<std::size_t>(half / step) + 1;
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double delta = step * static_cast<double>(i);
            const double c = b_frac > 0.0 ? chi_windowed_kernel(b_frac, w, delta) : 1.0;
            const double f = af_closed_normalized(kind, d_fa * delta / (dp * dp));
            v[i] = c * c * (p == 2 ? f * f : f);
        }
        res[j] = psl(v);
    });
    std::size_t worst = 0;
    for (std::size_t j = 1; j < res.size(); ++j)
        if (res[j] > res[worst])
            worst = j;
    return {res[worst], d_primes[worst]};
}

} // namespace detail

/// Smallest B_f whose composite PSL stays at or below the window's far-field PSL over the whole
/// near-field span of an eta-matched aperture.
inline MinBwResult min_bw_for_psl(ArrayKind kind, Mode mode, WindowKind window, const MinBwOptions& opt = {})
{
    MinBwResult r;
    r.kind = kind;
    r.mode = mode;
    r.window = window;
    const double alpha = solve_alpha(kind, mode);
    const int p = af_power(mode);
    r.aperture_d = min_aperture(opt.eta, alpha);
    const double d_fa = fraunhofer_distance(r.aperture_d);
    const auto d_primes = logspace(1.2 * r.aperture_d, d_fa / alpha, opt.n_distances);
    const WindowSpec w = make_window(window, opt.k_subcarriers);
    r.target_psl_db = window_psl_measured(w);
    const double target = r.target_psl_db + opt.margin_db;
    auto worst = [&](double b) { return detail::worst_span_psl(kind, p, w, b, d_fa, d_primes, opt); };

    const auto af_alone = worst(0.0);
    if (af_alone.first <= target) {
        r.worst_d_prime = af_alone.second;
        return r;
    }
    double lo = 0.0, hi = 0.02;
    while (worst(hi).first > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3)
            throw ComputationError("min_bw_for_psl: PSL target not reachable");
    }
    while (hi - lo > opt.rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (worst(mid).first > target)
            lo = mid;
        else
            hi = mid;
    }
    r.b_frac = hi;
    r.worst_d_prime = worst(hi).second;
    r.ratio = w.relative_resolution * min_fbw(1.0, alpha) / hi;
    return r;
}

struct MetricsReport {
    double alpha = nan;
    double bd_min = nan;
    NfRegion nf{nan, nan};
    double psl_db = nan;
    double isl_db = nan;
    double psl_gain_db = nan;
    double isl_gain_db = nan;
    double db_rmse = nan;
    double b_f_min_psl = nan;
};

} // namespace nfamb
