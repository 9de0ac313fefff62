#include <gtest/gtest.h>

#include <nfamb/closed_form.hpp>

#include <cmath>
#include <complex>
#include <numbers>

using namespace nfamb;

namespace {

constexpr double pi = std::numbers::pi;

/// |mean of exp(-j pi rho^2 v)|^2 over a continuous aperture, with rho the transverse offset
/// and v the vergence; midpoint rule on a fine mesh.
double aperture_average(ArrayKind kind, double d_ap, double v)
{
    std::complex<double> acc;
    double wsum = 0.0;
    auto add = [&](double rho2, double w) {
        acc += w * std::polar(1.0, -pi * rho2 * v);
        wsum += w;
    };
    const int n = 4000;
    switch (kind) {
    case ArrayKind::ULA:
        for (int i = 0; i < n; ++i) {
            const double y = d_ap * ((i + 0.5) / n - 0.5);
            add(y * y, 1.0);
        }
        break;
    case ArrayKind::UCA: {
        // In-plane cut: only the component of the rim transverse to the ray contributes.
        const double r = d_ap / 2.0;
        for (int i = 0; i < n; ++i) {
            const double psi = 2.0 * pi * (i + 0.5) / n;
            add(r * r * std::sin(psi) * std::sin(psi), 1.0);
        }
        break;
    }
    case ArrayKind::URA: {
        const double side = d_ap / std::numbers::sqrt2;
        const int m = 600;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double x = side * ((i + 0.5) / m - 0.5), y = side * ((j + 0.5) / m - 0.5);
                add(x * x + y * y, 1.0);
            }
        break;
    }
    case ArrayKind::UPCA: {
        const double r = d_ap / 2.0;
        for (int i = 0; i < n; ++i) {
            const double rho = r * (i + 0.5) / n;
            add(rho * rho, rho);
        }
        break;
    }
    }
    return std::norm(acc / wsum);
}

} // namespace

TEST(ClosedForm, MatchesContinuousApertureIntegral)
{
    const double d_ap = 10.0, d_fa = 2.0 * d_ap * d_ap;
    for (auto k : all_kinds)
        for (double x : {0.1, 1.0, 4.0, 7.0, 12.0, 25.0, 60.0}) {
            const double v = x / d_fa;
            EXPECT_NEAR(af_closed_normalized(k, x), aperture_average(k, d_ap, v), 2e-5)
                << to_string(k) << " x=" << x;
        }
}

TEST(ClosedForm, UnitAtFocusAndSmallArgumentSeries)
{
    for (auto k : all_kinds)
        EXPECT_NEAR(af_closed_normalized(k, 0.0), 1.0, 1e-15);
    const double x = 5e-9;
    EXPECT_NEAR(af_ula_normalized(x), 1.0 - pi * pi * x * x / 720.0, 1e-18);
    EXPECT_NEAR(af_ula_normalized(2e-3), 1.0 - pi * pi * 4e-6 / 720.0, 1e-12);
}

TEST(ClosedForm, HalfPowerNearTabulatedArgument)
{
    EXPECT_NEAR(af_closed_normalized(ArrayKind::ULA, 6.952), 0.5, 1e-3);
    EXPECT_NEAR(af_closed_normalized(ArrayKind::UCA, 5.737), 0.5, 1e-3);
}

TEST(ClosedForm, ScaledByElementCount)
{
    const double v = af_closed(ArrayKind::URA, 80.0, 90.0, 5000.0, 101);
    EXPECT_NEAR(v, 101.0 * af_closed_normalized(ArrayKind::URA, 5000.0 * vergence(90.0, 80.0)), 1e-12);
}

TEST(ClosedForm, AgreesWithExactArrayFactorFarFromAperture)
{
    for (auto k : all_kinds) {
        const auto g = build_array(k, 20.0, 0.5);
        const double dp = 60.0;
        const auto grid = RadialGrid::uniform(dp, 45.0, 90.0, 0.25, default_ray(k));
        const auto exact = array_factor_exact(g, grid);
        const auto closed = af_closed_curve(g, grid);
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (exact.values_linear[i] > 0.3) {
                EXPECT_NEAR(closed[i], exact.values_linear[i], 0.02) << to_string(k) << " d=" << grid.samples[i];
            }
    }
}

TEST(ClosedForm, OffAxisUlaUsesProjectedAperture)
{
    const auto g = build_array(ArrayKind::ULA, 30.0, 0.5);
    const double theta = pi / 3;
    const double deff = 30.0 * std::sqrt(1.0 - std::pow(std::sin(theta), 2));
    const double got = af_closed_offaxis(ArrayKind::ULA, 80.0, 95.0, theta, 0.0, g) / g.size();
    EXPECT_NEAR(got, af_ula_normalized(2.0 * deff * deff * vergence(95.0, 80.0)), 1e-12);
    const double broadside = af_closed_offaxis(ArrayKind::ULA, 80.0, 95.0, pi / 2, pi / 2, g) / g.size();
    EXPECT_NEAR(broadside, af_closed_normalized(ArrayKind::ULA, 1800.0 * vergence(95.0, 80.0)), 1e-12);
}

TEST(ClosedForm, UnsupportedCutsThrow)
{
    const auto uca = build_array(ArrayKind::UCA, 10.0, 0.5);
    const auto upca = build_array(ArrayKind::UPCA, 10.0, 0.5);
    EXPECT_THROW(af_closed_offaxis(ArrayKind::UCA, 30.0, 31.0, 0.2, 0.0, uca), UnsupportedCut);
    EXPECT_THROW(af_closed_offaxis(ArrayKind::UPCA, 30.0, 31.0, 0.2, 0.0, upca), UnsupportedCut);
    EXPECT_NO_THROW(af_closed_offaxis(ArrayKind::UCA, 30.0, 31.0, pi / 2, 1.0, uca));
}

TEST(ClosedForm, TaylorRegion)
{
    EXPECT_TRUE(in_taylor_region(60.0, 70.0, 50.0));
    EXPECT_FALSE(in_taylor_region(59.0, 70.0, 50.0));
}

TEST(Approx, SeparableProductWithUnitPeak)
{
    const auto g = build_array(ArrayKind::UCA, 20.0, 0.5);
    const auto grid = RadialGrid::uniform(30.0, 24.0, 40.0, 0.1, default_ray(ArrayKind::UCA));
    const auto cfg = SensingConfig::mimo(g, 0.05, 256, WindowKind::Hann);
    const auto approx = ambiguity_approx(cfg, grid);
    const auto bw = bandwidth_only(cfg, grid);
    const auto af = af_closed_curve(g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(approx.values_linear[i], bw.values_linear[i] * af[i] * af[i], 1e-15);
    EXPECT_NEAR(approx.values_linear[grid.nearest_index()], 1.0, 1e-12);
    EXPECT_EQ(approx.provenance, Provenance::Approx);
    EXPECT_EQ(bw.provenance, Provenance::BandwidthOnly);
}

TEST(Approx, SimoReceiverContributesNothing)
{
    const auto g = build_array(ArrayKind::ULA, 20.0, 0.5);
    const auto grid = RadialGrid::uniform(30.0, 24.0, 40.0, 0.1, default_ray(ArrayKind::ULA));
    const auto cfg = SensingConfig::simo(g, 0.0, 64);
    const auto approx = ambiguity_approx(cfg, grid);
    const auto af = af_closed_curve(g, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(approx.values_linear[i], af[i], 1e-15);
}

TEST(Approx, SincModelMatchesOfdmForManySubcarriers)
{
    const auto g = build_array(ArrayKind::ULA, 10.0, 0.5);
    const auto grid = RadialGrid::uniform(20.0, 12.0, 40.0, 0.2, default_ray(ArrayKind::ULA));
    const auto cfg = SensingConfig::simo(g, 0.05, 1 << 15);
    const auto a = bandwidth_only(cfg, grid, ChiModel::Ofdm);
    const auto b = bandwidth_only(cfg, grid, ChiModel::Sinc);
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(a.values_linear[i], b.values_linear[i], 1e-7);
}

TEST(Approx, ExactSourceConvergesAtSmallBandwidth)
{
    const auto g = build_array(ArrayKind::UPCA, 20.0, 0.5);
    const auto grid = RadialGrid::uniform(24.0, 14.0, 40.0, 0.1, default_ray(ArrayKind::UPCA));
    const auto cfg = SensingConfig::simo(g, 1e-3, 1024);
    const auto exact = ambiguity_exact_ofdm(cfg, grid);
    const auto approx = ambiguity_approx(cfg, grid, {ChiModel::Ofdm, AfSource::Exact});
    for (std::size_t i = 0; i < grid.size(); ++i)
        EXPECT_NEAR(approx.values_linear[i], exact.values_linear[i], 1e-3);
}

TEST(Constraint, TabulatedAndRecomputedLimits)
{
    const auto ula = separability_constraint(ArrayKind::ULA, Mode::SimoMiso, 2.0, 200.0);
    EXPECT_DOUBLE_EQ(ula.limit, 10.0);
    EXPECT_NEAR(ula.recomputed_limit, 10.0, 0.01);
    EXPECT_TRUE(ula.satisfied_quarter);
    const auto uca = separability_constraint(ArrayKind::UCA, Mode::Mimo, 2.0, 0.0);
    EXPECT_DOUBLE_EQ(uca.limit, 4.8075);
    EXPECT_TRUE(std::isnan(uca.recomputed_limit));
    EXPECT_FALSE(uca.satisfied_quarter);
}
