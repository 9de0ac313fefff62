#include <gtest/gtest.h>

#include <nfamb/exact_mf.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace nfamb;

namespace {

using cld = std::complex<long double>;

cld phasor(long double cycles)
{
    const long double ph = -2.0L * std::numbers::pi_v<long double> * cycles;
    return {std::cos(ph), std::sin(ph)};
}

std::vector<long double> path_diffs(const std::vector<Vec3>& e, const Vec3& p_true, const Vec3& p_hyp)
{
    std::vector<long double> out;
    for (const auto& x : e)
        out.push_back(static_cast<long double>((p_hyp - x).norm()) - static_cast<long double>((p_true - x).norm()));
    return out;
}

/// Matched-filter response integrated over the band by the trapezoid rule, frequencies relative
/// to the carrier.
double trapezoid_oracle(const std::vector<Vec3>& tx, const std::vector<Vec3>& rx, double b, const Vec3& p_true,
                        const Vec3& p_hyp, int n_points)
{
    const auto a = path_diffs(tx, p_true, p_hyp);
    const auto c = path_diffs(rx, p_true, p_hyp);
    cld acc;
    for (int i = 0; i < n_points; ++i) {
        const long double f = 1.0L + b * (static_cast<long double>(i) / (n_points - 1) - 0.5L);
        const long double wgt = (i == 0 || i == n_points - 1) ? 0.5L : 1.0L;
        cld s;
        for (auto x : a)
            for (auto y : c)
                s += phasor(f * (x + y));
        acc += wgt * s;
    }
    acc /= static_cast<long double>(n_points - 1);
    const long double mn = static_cast<long double>(tx.size() * rx.size());
    return static_cast<double>(std::norm(acc) / (mn * mn));
}

/// Weighted subcarrier sum with every phasor evaluated independently.
double subcarrier_oracle(const std::vector<Vec3>& tx, const std::vector<Vec3>& rx, double b, const WindowSpec& w,
                         const Vec3& p_true, const Vec3& p_hyp)
{
    const auto a = path_diffs(tx, p_true, p_hyp);
    const auto c = path_diffs(rx, p_true, p_hyp);
    const long double kk = static_cast<long double>(w.k);
    cld acc;
    long double ws = 0.0L;
    for (std::size_t n = 0; n < w.k; ++n) {
        const long double f = 1.0L + b * (static_cast<long double>(n) - 0.5L * (kk - 1.0L)) / kk;
        cld s;
        for (auto x : a)
            for (auto y : c)
                s += phasor(f * (x + y));
        acc += static_cast<long double>(w.weights[n]) * s;
        ws += w.weights[n];
    }
    acc /= ws;
    const long double mn = static_cast<long double>(tx.size() * rx.size());
    return static_cast<double>(std::norm(acc) / (mn * mn));
}

std::vector<Vec3> random_cloud(std::mt19937_64& rng, std::size_t n, double extent)
{
    std::uniform_real_distribution<double> u(-extent, extent);
    std::vector<Vec3> v;
    for (std::size_t i = 0; i < n; ++i)
        v.push_back({u(rng), u(rng), u(rng) * 0.3});
    return v;
}

ArrayGeometry custom(std::vector<Vec3> e) { return ArrayGeometry(ArrayKind::ULA, std::move(e), 4.0, 0.5); }

} // namespace

TEST(ExactMf, MatchesTrapezoidFrequencyIntegration)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> off(-3.0, 3.0);
    for (int trial = 0; trial < 6; ++trial) {
        const auto tx = random_cloud(rng, 1 + trial % 5, 2.0);
        const auto rx = random_cloud(rng, 5 - trial % 5, 2.0);
        const double b = 0.05 + 0.07 * trial;
        const SensingConfig cfg{custom(tx), custom(rx), Mode::Mimo, b, 1024, WindowKind::Rect};
        const Vec3 p_true{1.0, 2.0, 15.0};
        std::vector<Vec3> hyps;
        for (int h = 0; h < 12; ++h)
            hyps.push_back(p_true + Vec3{off(rng), off(rng), 4.0 * off(rng)});
        const auto got = ambiguity_exact_points(cfg, p_true, hyps);
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            const double ref = trapezoid_oracle(tx, rx, b, p_true, hyps[h], 40001);
            EXPECT_NEAR(got[h], ref, 1e-6 * std::max(ref, 1e-3)) << "trial " << trial << " h " << h;
        }
    }
}

TEST(ExactMf, UnitPeakAtTruePosition)
{
    const auto g = build_array(ArrayKind::UCA, 10.0, 0.5);
    for (auto cfg : {SensingConfig::simo(g, 0.1), SensingConfig::mimo(g, 0.1)}) {
        const Vec3 p{0.0, 0.0, 20.0};
        EXPECT_NEAR(ambiguity_exact_points(cfg, p, {p})[0], 1.0, 1e-13);
        EXPECT_NEAR(ambiguity_exact_ofdm_points(cfg, p, {p})[0], 1.0, 1e-13);
    }
}

TEST(ExactMf, SymmetricInTrueAndHypothesis)
{
    const auto g = build_array(ArrayKind::URA, 6.0, 0.5);
    const auto cfg = SensingConfig::mimo(g, 0.2, 64);
    const Vec3 p{0.5, -0.3, 12.0}, q{1.0, 0.2, 14.5};
    EXPECT_NEAR(ambiguity_exact_points(cfg, p, {q})[0], ambiguity_exact_points(cfg, q, {p})[0], 1e-13);
    EXPECT_NEAR(ambiguity_exact_ofdm_points(cfg, p, {q})[0], ambiguity_exact_ofdm_points(cfg, q, {p})[0], 1e-13);
}

TEST(ExactMf, InvariantUnderRigidShift)
{
    std::mt19937_64 rng(11);
    const auto tx = random_cloud(rng, 4, 3.0);
    const auto rx = random_cloud(rng, 3, 3.0);
    const Vec3 shift{17.0, -4.0, 2.5};
    auto moved = [&](std::vector<Vec3> v) {
        for (auto& x : v)
            x = x + shift;
        return v;
    };
    const SensingConfig a{custom(tx), custom(rx), Mode::Mimo, 0.15, 128, WindowKind::Hann};
    const SensingConfig b{custom(moved(tx)), custom(moved(rx)), Mode::Mimo, 0.15, 128, WindowKind::Hann};
    const Vec3 p{0.0, 1.0, 20.0}, q{0.5, 0.0, 23.0};
    EXPECT_NEAR(ambiguity_exact_points(a, p, {q})[0], ambiguity_exact_points(b, p + shift, {q + shift})[0], 1e-12);
    EXPECT_NEAR(ambiguity_exact_ofdm_points(a, p, {q})[0],
                ambiguity_exact_ofdm_points(b, p + shift, {q + shift})[0], 1e-12);
}

TEST(ExactMf, ZeroBandwidthMimoIsSquaredArrayFactor)
{
    const auto g = build_array(ArrayKind::ULA, 20.0, 0.5);
    const auto grid = RadialGrid::uniform(30.0, 20.0, 40.0, 0.1, default_ray(ArrayKind::ULA));
    const auto mimo = ambiguity_exact(SensingConfig::mimo(g, 0.0), grid);
    const auto simo = ambiguity_exact(SensingConfig::simo(g, 0.0), grid);
    const auto af = array_factor_exact(g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_NEAR(mimo.values_linear[i], af.values_linear[i] * af.values_linear[i], 1e-12);
        EXPECT_NEAR(simo.values_linear[i], af.values_linear[i], 1e-12);
    }
    EXPECT_EQ(af.provenance, Provenance::AfOnly);
    EXPECT_DOUBLE_EQ(af.peak_gain, static_cast<double>(g.size()));
}

TEST(ExactMf, SingleElementArrayFactorIsFlat)
{
    const auto g = ArrayGeometry::point_source();
    const auto grid = RadialGrid::uniform(10.0, 5.0, 15.0, 0.5, {0.0, 0.0});
    for (double v : array_factor_exact(g, grid).values_linear)
        EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(ExactMfOfdm, RoutesAgreeWithIndependentSum)
{
    std::mt19937_64 rng(3);
    const auto tx = random_cloud(rng, 5, 2.0);
    const auto rx = random_cloud(rng, 4, 2.0);
    const Vec3 p{0.0, 0.0, 10.0};
    std::vector<Vec3> hyps;
    for (double dz : {-3.0, -1.2, -0.1, 0.0, 0.4, 2.2, 5.0})
        hyps.push_back(p + Vec3{0.2, -0.1, dz});
    for (auto kind : all_windows) {
        const SensingConfig cfg{custom(tx), custom(rx), Mode::Mimo, 0.3, 64, kind};
        const auto w = window_for(kind, 64);
        const auto pair = ambiguity_exact_ofdm_points(cfg, p, hyps, OfdmRoute::PairKernel);
        const auto sub = ambiguity_exact_ofdm_points(cfg, p, hyps, OfdmRoute::Subcarrier);
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            const double ref = subcarrier_oracle(tx, rx, 0.3, w, p, hyps[h]);
            EXPECT_NEAR(pair[h], ref, 1e-11) << to_string(kind);
            EXPECT_NEAR(sub[h], ref, 1e-11) << to_string(kind);
        }
    }
}

TEST(ExactMfOfdm, SharedApertureRoutesAgree)
{
    const auto g = build_array(ArrayKind::UPCA, 8.0, 0.5);
    const auto cfg = SensingConfig::mimo(g, 0.1, 256);
    const Vec3 p{0.0, 0.0, 12.0};
    const std::vector<Vec3> hyps{{0.0, 0.0, 11.0}, {0.0, 0.0, 13.7}, {0.3, 0.0, 12.2}};
    const auto a = ambiguity_exact_ofdm_points(cfg, p, hyps, OfdmRoute::Subcarrier);
    const auto b = ambiguity_exact_ofdm_points(cfg, p, hyps, OfdmRoute::PairKernel);
    for (std::size_t i = 0; i < hyps.size(); ++i)
        EXPECT_NEAR(a[i], b[i], 1e-12);
}

TEST(ExactMfOfdm, ConvergesToContinuousSpectrum)
{
    const auto g = build_array(ArrayKind::ULA, 10.0, 0.5);
    const auto cfg_cont = SensingConfig::simo(g, 0.1);
    const Vec3 p = Point::direction(std::numbers::pi / 2, std::numbers::pi / 2) * 15.0;
    std::vector<Vec3> hyps;
    for (double d = 8.0; d < 22.0; d += 0.7)
        hyps.push_back(Point::direction(std::numbers::pi / 2, std::numbers::pi / 2) * d);
    const auto ref = ambiguity_exact_points(cfg_cont, p, hyps);
    double prev = 1.0;
    for (std::size_t k : {64u, 512u, 4096u}) {
        auto cfg = cfg_cont;
        cfg.k_subcarriers = k;
        const auto v = ambiguity_exact_ofdm_points(cfg, p, hyps);
        double err = 0.0;
        for (std::size_t i = 0; i < hyps.size(); ++i)
            err = std::max(err, std::fabs(v[i] - ref[i]));
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-5);
}

TEST(ExactMf, RejectsInvalidConfig)
{
    const auto g = build_array(ArrayKind::ULA, 5.0, 0.5);
    const Vec3 p{0.0, 0.0, 10.0};
    EXPECT_THROW(ambiguity_exact_points(SensingConfig::simo(g, -0.1), p, {p}), InvalidInput);
    EXPECT_THROW(ambiguity_exact_ofdm_points(SensingConfig::simo(g, 0.1, 1), p, {p}), InvalidInput);
    RadialGrid bad;
    bad.d_prime = 10.0;
    bad.samples = {5.0, 4.0};
    EXPECT_THROW(ambiguity_exact(SensingConfig::simo(g, 0.1), bad), GridError);
}

TEST(ExactMf, WarnsBelowValidityRegion)
{
    const auto g = build_array(ArrayKind::ULA, 10.0, 0.5);
    const auto grid = RadialGrid::uniform(15.0, 5.0, 20.0, 0.5, default_ray(ArrayKind::ULA));
    EXPECT_FALSE(ambiguity_exact(SensingConfig::simo(g, 0.0), grid).warnings.empty());
}
