#include <cmath>

#include "doctest.h"
#include "pplab/exact.hpp"
#include "pplab/grid_ops.hpp"
#include "pplab/quasiregular.hpp"

using namespace pplab;

TEST_CASE("complex gradient of simple fields") {
    auto g = Grid2D::square(2.0, 0.25);
    const ScalarField ux = ScalarField::sample(g, [](Vec2 q) { return q.x; });
    const VectorField f1 = complex_gradient(ux);
    for (std::size_t n : g->interior_nodes()) {
        CHECK(f1.x(n) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(f1.y(n) == doctest::Approx(0.0).epsilon(1e-14));
    }

    const ScalarField uxy = ScalarField::sample(g, [](Vec2 q) { return q.x * q.y; });
    const VectorField f2 = complex_gradient(uxy);
    const std::size_t n12 = g->nearest_node({1.0, 2.0});
    REQUIRE(g->interior(n12));
    CHECK(f2.x(n12) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f2.y(n12) == doctest::Approx(-1.0).epsilon(1e-12));

    // Harmonic u = x^2 - y^2 has the analytic complex gradient 2z.
    const ScalarField uh = ScalarField::sample(g, [](Vec2 q) { return q.x * q.x - q.y * q.y; });
    const VectorField f3 = complex_gradient(uh);
    for (std::size_t n : g->interior_nodes()) {
        const Vec2 q = g->coord(n);
        CHECK(f3.x(n) == doctest::Approx(2 * q.x).epsilon(1e-12));
        CHECK(f3.y(n) == doctest::Approx(2 * q.y).epsilon(1e-12));
    }
}

TEST_CASE("wirtinger derivatives of model maps") {
    auto g = Grid2D::square(1.0, 0.125);
    const VectorField c = VectorField::sample(g, [](Vec2) { return Vec2{0.7, -0.2}; });
    const WirtingerPair wc = wirtinger(c);
    for (std::size_t n : g->interior_nodes()) {
        CHECK(std::hypot(wc.fz.x(n), wc.fz.y(n)) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(std::hypot(wc.fzbar.x(n), wc.fzbar.y(n)) == doctest::Approx(0.0).epsilon(1e-14));
    }

    // Identity map z: fz = 1, fzbar = 0.
    const VectorField idz = VectorField::sample(g, [](Vec2 q) { return q; });
    const WirtingerPair wi = wirtinger(idz);
    // Conjugation zbar: fz = 0, fzbar = 1.
    const VectorField conj = VectorField::sample(g, [](Vec2 q) { return Vec2{q.x, -q.y}; });
    const WirtingerPair wj = wirtinger(conj);
    for (std::size_t n : g->interior_nodes()) {
        CHECK(wi.fz.x(n) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(wi.fz.y(n)) < 1e-13);
        CHECK(std::hypot(wi.fzbar.x(n), wi.fzbar.y(n)) < 1e-13);
        CHECK(wj.fzbar.x(n) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::hypot(wj.fz.x(n), wj.fz.y(n)) < 1e-13);
    }
}

TEST_CASE("wirtinger identity |fz|^2 - |fzbar|^2 equals the Jacobian") {
    auto g = Grid2D::square(1.0, 0.125);
    const ScalarField u =
        ScalarField::sample(g, [](Vec2 q) { return q.x * q.x * q.x * q.y - q.x * q.y * q.y; });
    const VectorField f = complex_gradient(u);
    const WirtingerPair wp = wirtinger(f);
    const ScalarField f1 = f.component_x();
    const ScalarField f2 = f.component_y();
    const VectorField d1 = gradient(f1, MissingPolicy::lenient);
    const VectorField d2 = gradient(f2, MissingPolicy::lenient);
    for (std::size_t n : g->interior_nodes()) {
        const double lhs = wp.fz.x(n) * wp.fz.x(n) + wp.fz.y(n) * wp.fz.y(n) -
                           wp.fzbar.x(n) * wp.fzbar.x(n) - wp.fzbar.y(n) * wp.fzbar.y(n);
        const double jac = d1.x(n) * d2.y(n) - d1.y(n) * d2.x(n);
        if (!std::isfinite(lhs) || !std::isfinite(jac)) continue;
        CHECK(lhs == doctest::Approx(jac).epsilon(1e-12));
    }
}

TEST_CASE("dilatation of the p=2 analytic oracle is stencil noise") {
    auto g = Grid2D::disc(0.9, 1.0 / 64.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x * q.x - q.y * q.y; });
    const DilatationReport rep = dilatation_check(u, 2.0, 0.1, 0.05);
    CHECK(rep.sup_ratio < 0.05);
    CHECK(rep.violations == 0);
    CHECK(rep.bound == 0.0);
}

TEST_CASE("dilatation of the radial p-harmonic field is extremal at (p-2)/p") {
    auto g = Grid2D::annulus(0.2, 0.9, 1.0 / 64.0);
    const ScalarField u = render(radial_p_harmonic(4.0), g);
    const DilatationReport rep = dilatation_check(u, 4.0, 0.05, 0.05);
    CHECK(rep.bound == 0.5);
    CHECK(rep.sup_ratio <= 0.55);
    CHECK(rep.sup_ratio > 0.4);  // the bound is attained, not vacuous
    CHECK(rep.admissible > 1000);
}

TEST_CASE("dilatation ratio of an analytic quartic decreases under refinement") {
    auto run = [](double h) {
        auto g = Grid2D::disc(0.9, h);
        const ScalarField u = ScalarField::sample(g, [](Vec2 z) {
            const double x2 = z.x * z.x, y2 = z.y * z.y;
            return x2 * x2 - 6 * x2 * y2 + y2 * y2;
        });
        return dilatation_check(u, 2.0, 0.2, 0.05).sup_ratio;
    };
    const double r32 = run(1.0 / 32.0);
    const double r64 = run(1.0 / 64.0);
    CHECK(r64 < 0.05);
    CHECK(r64 < 0.7 * r32);
}

TEST_CASE("dilatation of an affine field: everything is skipped, nothing violates") {
    auto g = Grid2D::disc(1.0, 0.125);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x - 2 * q.y; });
    const DilatationReport rep = dilatation_check(u, 3.0, 0.1, 0.05);
    CHECK(rep.sup_ratio == 0.0);
    CHECK(rep.violations == 0);
    CHECK(rep.admissible == 0);
    CHECK(rep.skipped_small_fz > 0);
}

TEST_CASE("dilatation error paths") {
    auto g = Grid2D::disc(1.0, 0.125);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x; });
    CHECK_THROWS_AS(dilatation_check(u, 1.5, 0.1, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(dilatation_check(u, 2.0, 5.0, 0.05), std::invalid_argument);  // excludes all
}

TEST_CASE("Dirichlet growth of the p=2 oracle has slope two") {
    auto g = Grid2D::disc(1.0, 1.0 / 64.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x * q.x - q.y * q.y; });
    const GrowthReport rep = dirichlet_growth(u, 2.0, {0.2, 0.3, 0.45, 0.6, 0.8});
    CHECK(rep.two_alpha == 2.0);
    CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.05));
    for (std::size_t k = 1; k < rep.integrals.size(); ++k)
        CHECK(rep.integrals[k] > rep.integrals[k - 1]);
}

TEST_CASE("Dirichlet growth of an affine field is degenerate") {
    auto g = Grid2D::disc(1.0, 1.0 / 32.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return 3 * q.x; });
    const GrowthReport rep = dirichlet_growth(u, 2.0, {0.2, 0.3, 0.45, 0.6});
    CHECK(rep.usable == 0);
    CHECK(std::isnan(rep.slope));
}

TEST_CASE("Dirichlet growth slope is invariant under field scaling") {
    auto g = Grid2D::annulus(0.2, 0.9, 1.0 / 64.0);
    const ScalarField u = render(radial_p_harmonic(4.0), g);
    ScalarField u2 = u;
    for (auto& v : u2.values()) v *= 2.0;
    const std::vector<double> radii{0.3, 0.4, 0.55, 0.7, 0.8};
    const GrowthReport a = dirichlet_growth(u, 4.0, radii);
    const GrowthReport b = dirichlet_growth(u2, 4.0, radii);
    CHECK(a.slope == doctest::Approx(b.slope).epsilon(1e-12));
    for (std::size_t k = 0; k < radii.size(); ++k)
        CHECK(b.integrals[k] == doctest::Approx(4.0 * a.integrals[k]).epsilon(1e-12));
    CHECK(a.slope >= 2.0 / 3.0 - 0.2);
    CHECK_THROWS_AS(dirichlet_growth(u, 4.0, {0.3, 0.4, 0.5}), std::invalid_argument);
}

TEST_CASE("gradient Holder ratio: affine fields give zero") {
    auto g = Grid2D::disc(1.0, 1.0 / 32.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x + q.y; });
    const HolderRatioReport rep = gradient_holder_check(u, 3.0, {0.0, 0.0}, 0.25);
    CHECK(rep.ratio == 0.0);
}

TEST_CASE("gradient Holder ratio of the saddle matches the closed form") {
    // [grad u]_{C^1(B_R)} = 2, ||u||_{B_{2R}} near 1, so the ratio is near
    // 2 R^2 = 0.5 (the sup norm is attained just inside the rim).
    auto g = Grid2D::disc(1.0, 1.0 / 64.0);
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x * q.x - q.y * q.y; });
    const HolderRatioReport rep = gradient_holder_check(u, 2.0, {0.0, 0.0}, 0.5);
    CHECK(rep.seminorm == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(rep.ratio == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("gradient Holder ratio is stable under refinement") {
    auto run = [](double h) {
        auto g = Grid2D::annulus(0.2, 0.9, h);
        const ScalarField u = render(radial_p_harmonic(3.0), g);
        return gradient_holder_check(u, 3.0, {0.0, 0.0}, 0.45).ratio;
    };
    const double r64 = run(1.0 / 64.0);
    const double r128 = run(1.0 / 128.0);
    CHECK(std::abs(r128 - r64) <= 0.1 * std::max(r64, r128));
}

TEST_CASE("small gradient check") {
    auto g = Grid2D::disc(1.0, 1.0 / 64.0);
    const ScalarField zero(g, 0.0);
    const SmallGradientReport r0 = small_gradient_check(zero, 1.5, {0.0, 0.0}, 0.25, 1e-10);
    CHECK(r0.ratio == 0.0);

    // |grad u| / |x| = 2 everywhere for the saddle; ratio = 2 R^2 / ||u||.
    const ScalarField u = ScalarField::sample(g, [](Vec2 q) { return q.x * q.x - q.y * q.y; });
    const SmallGradientReport rep = small_gradient_check(u, 1.9, {0.0, 0.0}, 0.25, 1e-10);
    const double expected = 2.0 * 0.25 * 0.25 / rep.sup_norm;
    CHECK(rep.ratio == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rep.sup_quotient == doctest::Approx(2.0).epsilon(1e-9));

    // Precondition: the center gradient must vanish.
    const ScalarField lin = ScalarField::sample(g, [](Vec2 q) { return q.x; });
    CHECK_THROWS_AS(small_gradient_check(lin, 1.5, {0.0, 0.0}, 0.25, 1e-10),
                    std::invalid_argument);
    CHECK_THROWS_AS(small_gradient_check(u, 2.5, {0.0, 0.0}, 0.25, 1e-10),
                    std::invalid_argument);
}
