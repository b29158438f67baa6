#include <cmath>
#include <limits>

#include "doctest.h"
#include "pplab/exact.hpp"
#include "pplab/grid_ops.hpp"
#include "pplab/regularity.hpp"

using namespace pplab;

namespace {
constexpr double kQInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("sharp exponent formula") {
    CHECK(holder_beta(4.0, 10.0) == 19.0 / 15.0);
    CHECK(holder_beta(1.5, 4.0) == 1.5);
    CHECK(holder_beta(3.0, kQInf, 0.01) == doctest::Approx(1.49).epsilon(1e-14));
    CHECK(holder_beta(1.5, kQInf, 0.01) == doctest::Approx(1.99).epsilon(1e-14));

    CHECK_THROWS_AS(holder_beta(2.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_beta(3.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_beta(0.9, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(holder_beta(3.0, 4.0, -0.1), std::invalid_argument);
}

TEST_CASE("beta stays below the q=inf limit and converges to it") {
    for (double p : {2.5, 3.0, 4.0, 6.0}) {
        const double limit = p / (p - 1);
        double prev = 0.0;
        for (double q : {3.0, 10.0, 100.0, 1e6}) {
            const double b = holder_beta(p, q);
            CHECK(b < limit);
            CHECK(b > prev);  // monotone approach
            prev = b;
        }
        CHECK(std::abs(holder_beta(p, 1e12) - limit) < 1e-11);
    }
}

TEST_CASE("homogeneous-equation gradient exponent") {
    CHECK(p_harmonic_gradient_exponent(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p_harmonic_gradient_exponent(3.0) ==
          doctest::Approx(0.72871355387816905).epsilon(1e-12));
    for (double p : {1.2, 1.5, 3.0, 5.0, 10.0})
        CHECK(p_harmonic_gradient_exponent(p) > std::min(p - 1.0, 1.0 / (p - 1.0)));
}

TEST_CASE("ExponentParams bundles the dichotomy") {
    const ExponentParams e = ExponentParams::make(4.0, 10.0);
    CHECK(e.beta == 19.0 / 15.0);
    CHECK(e.alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(e.beta > 1.0);
    CHECK(e.beta < 2.0);
    const ExponentParams e2 = ExponentParams::make(1.5, 6.0);
    CHECK(e2.beta == doctest::Approx(2.0 - 2.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("holder seminorm identities") {
    auto g = Grid2D::disc(0.5, 1.0 / 16.0);
    const auto region = g->nodes_in_ball(g->origin(), 0.45);
    const std::size_t budget = 100'000'000;  // exact enumeration

    const ScalarField dist = ScalarField::sample(g, [](Vec2 q) { return norm(q); });
    CHECK(holder_seminorm(dist, 1.0, region, budget).value == doctest::Approx(1.0).epsilon(1e-12));

    const ScalarField constant(g, 3.25);
    CHECK(holder_seminorm(constant, 0.7, region, budget).value == 0.0);

    // [ |x|^s ]_{C^s} = 1, attained against the origin node.
    const ScalarField root = ScalarField::sample(g, [](Vec2 q) { return std::sqrt(norm(q)); });
    const auto res = holder_seminorm(root, 0.5, region, budget);
    CHECK(!res.subsampled);
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.value <= 1.0 + 1e-12);
}

TEST_CASE("holder seminorm homogeneity and region monotonicity") {
    auto g = Grid2D::disc(0.5, 1.0 / 16.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return std::sin(3 * q.x) + q.y; });
    ScalarField u2 = u;
    for (auto& v : u2.values()) v *= 2.0;  // power of two: exact scaling
    const auto small = g->nodes_in_ball(g->origin(), 0.25);
    const auto large = g->nodes_in_ball(g->origin(), 0.45);
    const std::size_t budget = 100'000'000;
    CHECK(holder_seminorm(u2, 0.5, large, budget).value ==
          2.0 * holder_seminorm(u, 0.5, large, budget).value);
    CHECK(holder_seminorm(u, 0.5, small, budget).value <=
          holder_seminorm(u, 0.5, large, budget).value);
}

TEST_CASE("subsampled seminorm is a deterministic lower bound") {
    auto g = Grid2D::disc(0.5, 1.0 / 32.0);
    const ScalarField u =
        ScalarField::sample(g, [](Vec2 q) { return std::cos(5 * q.x) * std::sin(4 * q.y); });
    const auto region = g->nodes_in_ball(g->origin(), 0.45);
    const auto exact = holder_seminorm(u, 0.5, region, 1'000'000'000);
    REQUIRE(!exact.subsampled);
    const auto sub1 = holder_seminorm(u, 0.5, region, 20'000);
    const auto sub2 = holder_seminorm(u, 0.5, region, 20'000);
    CHECK(sub1.subsampled);
    CHECK(sub1.value <= exact.value + 1e-15);
    CHECK(sub1.value == sub2.value);  // deterministic
    CHECK(sub1.value > 0.5 * exact.value);
    CHECK(sub1.pairs_evaluated < exact.pairs_evaluated);
}

TEST_CASE("seminorm rejects degenerate regions") {
    auto g = Grid2D::disc(0.5, 1.0 / 16.0);
    const ScalarField u(g, 1.0);
    const std::vector<std::size_t> one{g->nearest_node({0.0, 0.0})};
    CHECK_THROWS_AS(holder_seminorm(u, 0.5, one, 1000), std::invalid_argument);
    // Two nodes closer than 2h: every pair is excluded.
    std::vector<std::size_t> close{g->nearest_node({0.0, 0.0}), g->nearest_node({1.0 / 16.0, 0.0})};
    CHECK_THROWS_AS(holder_seminorm(u, 0.5, close, 1000), std::invalid_argument);
    CHECK_THROWS_AS(holder_seminorm(u, 1.5, one, 1000), std::invalid_argument);
}

TEST_CASE("fit_exponent recovers exact power laws to machine precision") {
    const std::vector<double> r{0.2, 0.1, 0.05, 0.025};
    std::vector<double> v13, v07;
    for (double x : r) {
        v13.push_back(std::pow(x, 1.3));
        v07.push_back(2.0 * std::pow(x, 0.7));
    }
    const PowerFit f13 = fit_exponent(r, v13);
    CHECK(std::abs(f13.slope - 1.3) < 1e-10);
    CHECK(f13.r2 == doctest::Approx(1.0).epsilon(1e-12));
    const PowerFit f07 = fit_exponent(r, v07);
    CHECK(std::abs(f07.slope - 0.7) < 1e-10);  // prefactor drops out
}

TEST_CASE("fit_exponent documents the upward log-correction bias") {
    std::vector<double> r, v;
    for (double x = 0.2; x >= 0.003124; x /= 2) {
        r.push_back(x);
        v.push_back(std::pow(x, 1.5) * std::pow(-std::log(x), -0.5));
    }
    REQUIRE(r.size() == 7);
    const PowerFit fit = fit_exponent(r, v);
    CHECK(fit.slope >= 1.5);
    CHECK(fit.slope <= 1.65);
    CHECK(fit.slope == doctest::Approx(1.6493).epsilon(1e-3));
}

TEST_CASE("fit_exponent error paths") {
    const std::vector<double> r{0.2, 0.1, 0.05};
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(fit_exponent(r, v), std::invalid_argument);
    const std::vector<double> r4{0.2, 0.1, 0.05, 0.025};
    const std::vector<double> v4{1.0, 2.0, 0.0, 3.0};  // zero value unusable -> 3 left
    CHECK_THROWS_AS(fit_exponent(r4, v4), std::invalid_argument);
}

TEST_CASE("excess scan of the rendered torsional field finds the sharp rate") {
    auto g = Grid2D::disc(1.0, 1.0 / 128.0);
    const ScalarField v = render(torsional_creep(3.0), g);
    const ExcessScan scan = excess_scan(v, {0.0, 0.0}, auto_scan_radii(*g, {0.0, 0.0}));
    CHECK(std::abs(scan.fitted_exponent - 1.5) < 0.05);
    CHECK(scan.fit_r2 > 0.999);
    // The gradient vanishes at the center, so both excess notions coincide.
    for (std::size_t k = 0; k < scan.radii.size(); ++k)
        CHECK(scan.s_lin[k] == doctest::Approx(scan.s_osc[k]).epsilon(1e-10));
}

TEST_CASE("excess scan of an affine field reports an undefined exponent") {
    auto g = Grid2D::disc(1.0, 1.0 / 32.0);
    const ScalarField v = ScalarField::sample(g, [](Vec2 q) { return 2.0 * q.x - q.y; });
    const ExcessScan scan = excess_scan(v, {0.0, 0.0}, auto_scan_radii(*g, {0.0, 0.0}));
    CHECK(scan.usable_radii == 0);
    CHECK(std::isnan(scan.fitted_exponent));
    for (double s : scan.s_lin) CHECK(s <= 1e-14);
}

TEST_CASE("excess scan of the quadratic bowl fits exponent 2") {
    auto g = Grid2D::disc(1.0, 1.0 / 128.0);
    const ScalarField v =
        ScalarField::sample(g, [](Vec2 q) { return 0.5 * (q.x * q.x + q.y * q.y); });
    const ExcessScan scan = excess_scan(v, {0.0, 0.0}, auto_scan_radii(*g, {0.0, 0.0}));
    CHECK(std::abs(scan.fitted_exponent - 2.0) < 0.02);
}

TEST_CASE("excess values are monotone and satisfy the triangle bound") {
    auto g = Grid2D::disc(1.0, 1.0 / 64.0);
    const ScalarField v = render(torsional_creep(3.0), g);
    const ExcessScan scan = excess_scan(v, {0.25, 0.125}, auto_scan_radii(*g, {0.25, 0.125}));
    const double gn = norm(scan.center_gradient);
    for (std::size_t k = 0; k < scan.radii.size(); ++k) {
        if (k > 0) {
            CHECK(scan.s_osc[k] <= scan.s_osc[k - 1]);  // radii stored decreasing
            CHECK(scan.s_lin[k] <= scan.s_lin[k - 1]);
        }
        CHECK(scan.s_lin[k] <= scan.s_osc[k] + scan.radii[k] * gn + 1e-12);
    }
}

TEST_CASE("excess scan radii validation") {
    auto g = Grid2D::disc(1.0, 1.0 / 32.0);
    const ScalarField v(g, 0.0);
    CHECK_THROWS_AS(excess_scan(v, {0.0, 0.0}, {1.0 / 32.0}), std::invalid_argument);  // < 4h
    CHECK_THROWS_AS(excess_scan(v, {0.0, 0.0}, {0.3}), std::invalid_argument);  // > limit
    CHECK_THROWS_AS(excess_scan(v, {0.99, 0.0}, {0.125}), std::invalid_argument);  // center
}

TEST_CASE("rescale_blowup normalization on aligned grids") {
    const double hs = 1.0 / 128.0;
    auto src = Grid2D::disc(1.0, hs);
    const ScalarField v = render(torsional_creep(3.0), src);
    const double r = 0.125;
    const ExcessScan scan = excess_scan(v, {0.0, 0.0}, {r});
    auto tgt = Grid2D::disc(1.0, hs / r);
    const ScalarField V = rescale_blowup(v, {0.0, 0.0}, r, scan.s_osc[0], tgt);

    CHECK(V[tgt->nearest_node({0.0, 0.0})] == 0.0);
    double sup = 0.0;
    for (std::size_t n : tgt->nodes_in_ball(tgt->origin(), 1.0, false))
        sup = std::max(sup, std::abs(V[n]));
    CHECK(sup == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rescale_blowup normalization with unaligned interpolation") {
    auto src = Grid2D::disc(1.0, 1.0 / 128.0);
    const ScalarField v = render(torsional_creep(3.0), src);
    const double r = 0.1;  // not a node-aligned zoom
    const ExcessScan scan = excess_scan(v, {0.0, 0.0}, {r});
    auto tgt = Grid2D::disc(1.0, 1.0 / 16.0);
    const ScalarField V = rescale_blowup(v, {0.0, 0.0}, r, scan.s_osc[0], tgt);
    double sup = 0.0;
    for (std::size_t n : tgt->nodes_in_ball(tgt->origin(), 1.0, false))
        sup = std::max(sup, std::abs(V[n]));
    CHECK(sup == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rescale_blowup chain rule") {
    const double hs = 1.0 / 128.0;
    auto src = Grid2D::disc(1.0, hs);
    const ScalarField v = render(torsional_creep(3.0), src);
    const Vec2 x0{0.25, 0.0};
    const double r = 0.125;
    const double S = 0.04;  // any positive normalization
    auto tgt = Grid2D::disc(1.0, hs / r);
    const ScalarField V = rescale_blowup(v, x0, r, S, tgt);
    const VectorField gV = gradient(V);
    const VectorField gv = gradient(v);
    const std::size_t tc = tgt->nearest_node({0.0, 0.0});
    const std::size_t sc = src->nearest_node(x0);
    CHECK(gV.x(tc) == doctest::Approx(r / S * gv.x(sc)).epsilon(1e-10));
    CHECK(gV.y(tc) == doctest::Approx(r / S * gv.y(sc)).epsilon(1e-10));
}

TEST_CASE("rescale_blowup rejects out-of-domain targets") {
    auto src = Grid2D::disc(0.5, 1.0 / 32.0);
    const ScalarField v(src, 1.0);
    auto tgt = Grid2D::disc(1.0, 1.0 / 8.0);
    CHECK_THROWS_AS(rescale_blowup(v, {0.0, 0.0}, 1.0, 1.0, tgt), std::invalid_argument);
    CHECK_THROWS_AS(rescale_blowup(v, {0.0, 0.0}, 0.1, 0.0, tgt), std::invalid_argument);
}

TEST_CASE("rescale_gradient normalizes the center gradient") {
    auto src = Grid2D::disc(1.0, 1.0 / 128.0);
    const ScalarField v = render(torsional_creep(3.0), src);
    const double beta = 1.4;
    auto tgt = Grid2D::square(0.5, 1.0 / 16.0);
    const ScalarField w = rescale_gradient(v, {0.5, 0.0}, beta, tgt);
    CHECK(w[tgt->nearest_node({0.0, 0.0})] == 0.0);
    const VectorField gw = gradient(w);
    const std::size_t c = tgt->nearest_node({0.0, 0.0});
    CHECK(std::hypot(gw.x(c), gw.y(c)) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rescale_gradient of an affine field is affine with unit gradient") {
    auto src = Grid2D::square(2.0, 1.0 / 16.0);
    const ScalarField v = ScalarField::sample(src, [](Vec2 q) { return 0.3 * q.x + 0.4 * q.y; });
    auto tgt = Grid2D::square(0.5, 1.0 / 16.0);
    const ScalarField w = rescale_gradient(v, {0.0, 0.0}, 1.5, tgt);
    const VectorField gw = gradient(w);
    for (std::size_t n : tgt->interior_nodes())
        CHECK(std::hypot(gw.x(n), gw.y(n)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("rescale_gradient rejects a vanishing gradient") {
    auto src = Grid2D::disc(1.0, 1.0 / 16.0);
    const ScalarField v(src, 2.0);
    auto tgt = Grid2D::disc(1.0, 0.25);
    CHECK_THROWS_AS(rescale_gradient(v, {0.0, 0.0}, 1.5, tgt), std::invalid_argument);
}

TEST_CASE("dyadic probe: alternative (i) on the torsional field") {
    auto g = Grid2D::disc(1.0, 1.0 / 64.0);
    const ScalarField v = render(torsional_creep(3.0), g);
    const DyadicProbe probe = dyadic_alternative_probe(v, {0.0, 0.0}, 1.0 / 16.0, 1.4, 1.0);
    REQUIRE(probe.radii.size() >= 3);
    for (std::size_t k = 0; k < probe.radii.size(); ++k) CHECK(probe.alt_i[k]);
    CHECK(probe.c_star > 0.0);
    CHECK(probe.c_star < 1.0);  // S_r = (2/3) r^{1.5} <= r^{1.4} on these radii
}

TEST_CASE("dyadic probe: exact power law gives c_star = 1") {
    auto g = Grid2D::disc(1.0, 1.0 / 128.0);
    const double beta = 1.4;
    const ScalarField v = ScalarField::sample(g, [&](Vec2 q) { return std::pow(norm(q), beta); });
    const DyadicProbe probe = dyadic_alternative_probe(v, {0.0, 0.0}, 1.0 / 32.0, beta, 1.0);
    CHECK(std::abs(probe.c_star - 1.0) < 0.05);
    for (std::size_t k = 0; k < probe.radii.size(); ++k) CHECK(probe.alt_i[k]);
}

TEST_CASE("dyadic probe: quadratic field satisfies alternative (ii) with k = 1") {
    auto g = Grid2D::disc(1.0, 1.0 / 128.0);
    const ScalarField v =
        ScalarField::sample(g, [](Vec2 q) { return 0.5 * (q.x * q.x + q.y * q.y); });
    const DyadicProbe probe = dyadic_alternative_probe(v, {0.0, 0.0}, 1.0 / 32.0, 1.5, 1.0);
    // S_r / S_{2r} = 1/4 <= 2^{-1.5}; the top radius has no larger partner.
    for (std::size_t k = 0; k + 1 < probe.radii.size(); ++k) {
        CHECK(probe.alt_ii[k]);
        CHECK(probe.alt_ii_k[k] == 1);
    }
    CHECK(!probe.alt_ii[probe.radii.size() - 1]);
}

TEST_CASE("dyadic probe rejects short chains") {
    auto g = Grid2D::disc(1.0, 1.0 / 16.0);
    const ScalarField v(g, 0.0);
    CHECK_THROWS_AS(dyadic_alternative_probe(v, {0.0, 0.0}, 0.2, 1.4, 1.0),
                    std::invalid_argument);
}
