#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include "error.hpp"

namespace nfamb {

struct FresnelPair {
    double c = 0.0;
    double s = 0.0;
};

namespace detail {

inline void require_finite(double x, const char* what)
{
    if (!std::isfinite(x))
        throw DomainError(std::string(what) + ": non-finite argument");
}

/// Switchover between the power series and the continued fraction.
inline constexpr double fresnel_seam = 1.5;

inline FresnelPair fresnel_series(double ax)
{
    const double t = 0.5 * std::numbers::pi * ax * ax;
    double term = 1.0;  // t^k / k!
    double c = 0.0, s = 0.0;
    for (int k = 0; k < 200; ++k) {
        if (k > 0)
            term *= t / k;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        const double contrib = sign * term / (2 * k + 1);
        if (k % 2 == 0)
            c += contrib;
        else
            s += contrib;
        if (k > 4 && term / (2 * k + 1) < 1e-18)
            break;
    }
    return {ax * c, ax * s};
}

/// cos and sin of pi*x^2/2 with x^2 reduced modulo 4 before scaling.
inline std::complex<double> half_pi_square_phasor(double ax)
{
    const double hi = ax * ax;
    const double lo = std::fma(ax, ax, -hi);
    const double r = std::fmod(hi, 4.0) + lo;
    const double ph = 0.5 * std::numbers::pi * r;
    return {std::cos(ph), std::sin(ph)};
}

inline FresnelPair fresnel_cfrac(double ax)
{
    using cd = std::complex<double>;
    constexpr double eps = 1e-16;
    constexpr double fpmin = 1e-300;
    const double pix2 = std::numbers::pi * ax * ax;
    cd b(1.0, -pix2);
    cd cc(1.0 / fpmin, 0.0);
    cd d = 1.0 / b;
    cd h = d;
    int n = -1;
    bool converged = false;
    for (int k = 2; k < 5000; ++k) {
        n += 2;
        const double a = -static_cast<double>(n) * (n + 1);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const cd del = cc * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ComputationError("fresnel: continued fraction did not converge");
    h *= cd(ax, -ax);
    const cd cs = cd(0.5, 0.5) * (1.0 - half_pi_square_phasor(ax) * h);
    return {cs.real(), cs.imag()};
}

} // namespace detail

/// Fresnel integrals C(x) = int_0^x cos(pi t^2/2) dt and S(x) = int_0^x sin(pi t^2/2) dt.
inline FresnelPair fresnel(double x)
{
    detail::require_finite(x, "fresnel");
    const double ax = std::fabs(x);
    FresnelPair r;
    if (ax == 0.0)
        return r;
    if (ax > 1e15)
        r = {0.5, 0.5};
    else if (ax <= detail::fresnel_seam)
        r = detail::fresnel_series(ax);
    else
        r = detail::fresnel_cfrac(ax);
    if (x < 0.0) {
        r.c = -r.c;
        r.s = -r.s;
    }
    return r;
}

namespace detail {

inline constexpr double j0_seam = 17.0;

inline double j0_series(double ax)
{
    const long double q = static_cast<long double>(ax) * ax / 4.0L;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(term) < 1e-24L)
            break;
    }
    return static_cast<double>(sum);
}

inline double j0_asymptotic(double ax)
{
    const double w = 8.0 * ax;
    double u = 1.0;
    double p = 1.0, q = 0.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double f = static_cast<double>(2 * k - 1);
        u *= -(f * f) / (k * w);
        if (std::fabs(u) > last)
            break;
        last = std::fabs(u);
        // u_k enters P for even k and Q for odd k with alternating signs
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * u;
        else
            q += sign * u;
        if (last < 1e-18)
            break;
    }
    const double c = std::cos(ax), s = std::sin(ax);
    const double cphi = (c + s) * std::numbers::sqrt2 / 2.0;  // cos(x - pi/4)
    const double sphi = (s - c) * std::numbers::sqrt2 / 2.0;  // sin(x - pi/4)
    return std::sqrt(2.0 / (std::numbers::pi * ax)) * (p * cphi - q * sphi);
}

} // namespace detail

/// Bessel function of the first kind, order zero.
inline double bessel_j0(double x)
{
    detail::require_finite(x, "bessel_j0");
    const double ax = std::fabs(x);
    if (ax <= detail::j0_seam)
        return detail::j0_series(ax);
    return detail::j0_asymptotic(ax);
}

/// sin(pi*x) with exact zeros at the integers.
template <typename T>
T sin_pi(T x)
{
    T r = x - 2 * std::round(x / 2);  // r in [-1, 1]
    if (r > T(0.5))
        r = 1 - r;
    else if (r < T(-0.5))
        r = -1 - r;
    return std::sin(std::numbers::pi_v<T> * r);
}

/// Normalized sinc, sin(pi x)/(pi x).
template <typename T>
T sinc(T x)
{
    detail::require_finite(static_cast<double>(x), "sinc");
    if (std::fabs(x) < T(1e-6)) {
        const T px = std::numbers::pi_v<T> * x;
        return 1 - px * px / 6;
    }
    return sin_pi(x) / (std::numbers::pi_v<T> * x);
}

} // namespace nfamb
