#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "types.hpp"

namespace nfamb {

/// Hypothesis distances along a fixed ray, with the true target distance d'.
struct RadialGrid {
    double d_prime = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::vector<double> samples;

    Ray ray() const { return {theta, phi}; }
    std::size_t size() const { return samples.size(); }

    /// Index of the sample nearest d'.
    std::size_t nearest_index() const
    {
        auto it = std::lower_bound(samples.begin(), samples.end(), d_prime);
        if (it == samples.end())
            return samples.size() - 1;
        if (it != samples.begin() && (d_prime - *(it - 1)) < (*it - d_prime))
            --it;
        return static_cast<std::size_t>(it - samples.begin());
    }

    /// Uniform samples on [lo, hi] with the given step; d' is inserted if it falls inside.
    static RadialGrid uniform(double d_prime, double lo, double hi, double step, Ray ray)
    {
        if (!(step > 0.0) || !(hi > lo))
            throw GridError("RadialGrid: empty range");
        RadialGrid g{d_prime, ray.theta, ray.phi, {}};
        const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        g.samples.reserve(n + 1);
        for (std::size_t i = 0; i < n; ++i)
            g.samples.push_back(lo + step * static_cast<double>(i));
        if (d_prime >= lo && d_prime <= hi)
            g.insert(d_prime);
        return g;
    }

    /// Dense near d' (step), geometric growth of the step by `growth` beyond `dense_half_width`,
    /// stopping at `half_width`. The low side is clipped at `floor_d`.
    static RadialGrid focused(double d_prime, double dense_half_width, double half_width, double step,
                              Ray ray, double floor_d = 0.0, double growth = 1.05)
    {
        if (!(step > 0.0) || !(half_width > 0.0) || !(d_prime > 0.0))
            throw GridError("RadialGrid: invalid focused grid parameters");
        RadialGrid g{d_prime, ray.theta, ray.phi, {}};
        std::vector<double> right{0.0};
        double off = 0.0, h = step;
        while (off + h <= half_width) {
            off += h;
            right.push_back(off);
            if (off >= dense_half_width)
                h *= growth;
        }
        for (auto it = right.rbegin(); it != right.rend(); ++it) {
            const double d = d_prime - *it;
            if (*it > 0.0 && d > floor_d && d > 0.0)
                g.samples.push_back(d);
        }
        for (double o : right)
            g.samples.push_back(d_prime + o);
        return g;
    }

    void insert(double d)
    {
        auto it = std::lower_bound(samples.begin(), samples.end(), d);
        if (it != samples.end() && std::fabs(*it - d) <= 1e-12 * std::max(1.0, d)) {
            *it = d;
            return;
        }
        if (it != samples.begin() && std::fabs(*(it - 1) - d) <= 1e-12 * std::max(1.0, d)) {
            *(it - 1) = d;
            return;
        }
        samples.insert(it, d);
    }

    /// Throws on empty, non-increasing or non-positive samples.
    void validate() const
    {
        if (samples.empty())
            throw GridError("RadialGrid: empty grid");
        if (!(d_prime > 0.0) || !std::isfinite(d_prime))
            throw GridError("RadialGrid: target distance must be positive");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (!(samples[i] > 0.0) || !std::isfinite(samples[i]))
                throw GridError("RadialGrid: samples must be positive and finite");
            if (i > 0 && !(samples[i] > samples[i - 1]))
                throw GridError("RadialGrid: samples must be strictly increasing");
        }
    }

    /// Warning text when part of the grid lies closer than 1.2 D, empty otherwise.
    std::string validity_warning(double aperture_d) const
    {
        const double lim = 1.2 * aperture_d;
        if (!samples.empty() && (samples.front() < lim || d_prime < lim))
            return "grid extends below 1.2D = " + std::to_string(lim) +
                   " (outside the Taylor-approximation region)";
        return {};
    }
};

inline constexpr double db_floor_linear = 1e-300;

inline double to_db(double v) { return 10.0 * std::log10(std::max(v, db_floor_linear)); }

/// |A|^2 samples over a grid, normalized so that the value at d = d' is 1.
struct AmbiguityCurve {
    RadialGrid grid;
    std::vector<double> values_linear;
    std::vector<double> values_db;
    Provenance provenance = Provenance::Exact;
    /// Un-normalized value at d = d' (M N for the matched filter, M for an array factor).
    double peak_gain = 1.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return values_linear.size(); }

    void refresh_db()
    {
        values_db.resize(values_linear.size());
        for (std::size_t i = 0; i < values_linear.size(); ++i)
            values_db[i] = to_db(values_linear[i]);
    }

    static AmbiguityCurve from_linear(RadialGrid grid, std::vector<double> lin, Provenance p,
                                      double peak_gain = 1.0)
    {
        AmbiguityCurve c;
        c.grid = std::move(grid);
        c.values_linear = std::move(lin);
        c.provenance = p;
        c.peak_gain = peak_gain;
        c.refresh_db();
        return c;
    }

    /// Rescales so that the largest sample is 1.
    void normalize_to_max()
    {
        const double mx = *std::max_element(values_linear.begin(), values_linear.end());
        if (mx > 0.0)
            for (double& v : values_linear)
                v /= mx;
        refresh_db();
    }
};

} // namespace nfamb
