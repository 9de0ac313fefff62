#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "error.hpp"
#include "specfun.hpp"
#include "types.hpp"

namespace nfamb {

/// Rectangular-spectrum bandwidth ambiguity for a bistatic path difference.
inline double chi_rect(double b_frac, double delta_bistatic)
{
    if (b_frac < 0.0)
        throw InvalidInput("chi_rect: negative bandwidth");
    return sinc(b_frac * delta_bistatic);
}

/// Same, for a one-way (monostatic) distance difference.
inline double chi_rect_oneway(double b_frac, double delta_oneway)
{
    return chi_rect(b_frac, 2.0 * delta_oneway);
}

/// sin(pi u) / (K sin(pi u / K)), continuous through the zeros of the denominator.
inline double dirichlet_ratio(double u, std::size_t k)
{
    const double kk = static_cast<double>(k);
    const double m = std::round(u / kk);
    const double r = u / kk - m;
    const double sign = (static_cast<long long>(std::fabs(m)) * static_cast<long long>(k - 1)) % 2 == 0
                            ? 1.0
                            : -1.0;
    if (std::fabs(r) < 1e-13)
        return sign;
    return sign * sin_pi(u - m * kk) / (kk * sin_pi(r));
}

/// OFDM bandwidth ambiguity, K subcarriers centred on the carrier, one-way difference delta.
inline double chi_ofdm(double b_frac, std::size_t k, double delta_oneway)
{
    if (k < 2)
        throw InvalidInput("chi_ofdm: at least two subcarriers required");
    if (b_frac < 0.0)
        throw InvalidInput("chi_ofdm: negative bandwidth");
    return dirichlet_ratio(2.0 * b_frac * delta_oneway, k);
}

struct WindowSpec {
    WindowKind kind = WindowKind::Rect;
    std::size_t k = 0;
    std::vector<double> weights;       ///< unit mean
    std::vector<double> cosine_terms;  ///< w[n] proportional to sum_l a_l cos(2 pi l n / (k-1))
    double relative_resolution = 1.0;  ///< tabulated mainlobe widening vs Rect
    double psl_db = -13.26;            ///< tabulated peak sidelobe level

    double weight_sum() const
    {
        double s = 0.0;
        for (double w : weights)
            s += w;
        return s;
    }
};

/// Symmetric window (k-1 denominator), rescaled to unit mean.
inline WindowSpec make_window(WindowKind kind, std::size_t k)
{
    if (k < 8)
        throw InvalidInput("make_window: at least 8 subcarriers required");
    WindowSpec w;
    w.kind = kind;
    w.k = k;
    switch (kind) {
    case WindowKind::Rect:
        w.cosine_terms = {1.0};
        w.relative_resolution = 1.0;
        w.psl_db = -13.26;
        break;
    case WindowKind::Hamming:
        w.cosine_terms = {0.54, -0.46};
        w.relative_resolution = 2.0;
        w.psl_db = -43.68;
        break;
    case WindowKind::Hann:
        w.cosine_terms = {0.5, -0.5};
        w.relative_resolution = 2.0;
        w.psl_db = -31.47;
        break;
    case WindowKind::Blackman:
        w.cosine_terms = {0.42, -0.5, 0.08};
        w.relative_resolution = 3.0;
        w.psl_db = -58.11;
        break;
    default: throw InvalidInput("make_window: unsupported window kind");
    }
    w.weights.resize(k);
    const double den = static_cast<double>(k - 1);
    double sum = 0.0;
    for (std::size_t n = 0; n < k; ++n) {
        double v = 0.0;
        for (std::size_t l = 0; l < w.cosine_terms.size(); ++l)
            v += w.cosine_terms[l] * std::cos(2.0 * std::numbers::pi * static_cast<double>(l * n) / den);
        w.weights[n] = v;
        sum += v;
    }
    const double scale = static_cast<double>(k) / sum;
    for (double& v : w.weights)
        v *= scale;
    return w;
}

/// Windowed OFDM ambiguity as the direct normalized weighted subcarrier sum,
/// evaluated at normalized lag u = 2 B_f delta (delta one-way). Real and signed.
inline double chi_windowed_u(const WindowSpec& w, double u)
{
    const std::size_t k = w.k;
    const double c = 0.5 * static_cast<double>(k - 1);
    const double step = 2.0 * std::numbers::pi * u / static_cast<double>(k);
    const std::complex<double> rot = std::polar(1.0, -step);
    std::complex<double> z;
    std::complex<double> acc;
    for (std::size_t n = 0; n < k; ++n) {
        if (n % 64 == 0)
            z = std::polar(1.0, -step * (static_cast<double>(n) - c));
        acc += w.weights[n] * z;
        z *= rot;
    }
    return acc.real() / w.weight_sum();
}

inline std::vector<double> chi_windowed(double b_frac, const WindowSpec& w, const std::vector<double>& deltas)
{
    if (b_frac < 0.0)
        throw InvalidInput("chi_windowed: negative bandwidth");
    std::vector<double> out(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i)
        out[i] = chi_windowed_u(w, 2.0 * b_frac * deltas[i]);
    return out;
}

/// Closed form of chi_windowed_u: a cosine-sum window turns the sum into shifted Dirichlet kernels.
inline double chi_windowed_kernel_u(const WindowSpec& w, double u)
{
    const double kk = static_cast<double>(w.k);
    const double shift = kk / (kk - 1.0);
    double acc = w.cosine_terms[0] * dirichlet_ratio(u, w.k);
    double raw_sum = kk * w.cosine_terms[0];
    for (std::size_t l = 1; l < w.cosine_terms.size(); ++l) {
        const double a = w.cosine_terms[l] * ((l % 2 == 0) ? 1.0 : -1.0);
        const double sl = shift * static_cast<double>(l);
        acc += 0.5 * a * (dirichlet_ratio(u - sl, w.k) + dirichlet_ratio(u + sl, w.k));
        raw_sum += w.cosine_terms[l];
    }
    return kk * acc / raw_sum;
}

inline double chi_windowed_kernel(double b_frac, const WindowSpec& w, double delta_oneway)
{
    return chi_windowed_kernel_u(w, 2.0 * b_frac * delta_oneway);
}

/// Windowed ambiguity from the circular convolution of the rectangular-spectrum response with
/// the transform of the window, both on an L = oversample*K point lag grid. Entry n is the value
/// at u = n / oversample.
inline std::vector<double> chi_windowed_circular(const WindowSpec& w, std::size_t oversample)
{
    if (oversample < 1)
        throw InvalidInput("chi_windowed_circular: oversample must be >= 1");
    using cd = std::complex<double>;
    const std::size_t k = w.k;
    const std::size_t len = oversample * k;
    const double ld = static_cast<double>(len);
    const double c = 0.5 * static_cast<double>(k - 1);
    std::vector<cd> rect(len), win(len);
    for (std::size_t l = 0; l < len; ++l) {
        const double ph = -std::numbers::pi * static_cast<double>(k - 1) * static_cast<double>(l) / ld;
        rect[l] = std::polar(static_cast<double>(k) *
                                 dirichlet_ratio(static_cast<double>(l) / static_cast<double>(oversample), k),
                             ph);
        cd acc;
        for (std::size_t n = 0; n < k; ++n) {
            const auto idx = (n * l) % len;
            acc += w.weights[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(idx) / ld);
        }
        win[l] = acc;
    }
    std::vector<double> out(len);
    const double norm = w.weight_sum();
    for (std::size_t n = 0; n < len; ++n) {
        cd acc;
        for (std::size_t l = 0; l < len; ++l)
            acc += rect[l] * win[(n + len - l) % len];
        acc /= ld;
        const auto idx = static_cast<double>(n) * c;
        const cd centre = std::polar(1.0, 2.0 * std::numbers::pi * std::fmod(idx, ld) / ld);
        out[n] = (acc * centre).real() / norm;
    }
    return out;
}

} // namespace nfamb
