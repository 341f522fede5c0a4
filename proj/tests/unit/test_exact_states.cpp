#include <doctest.h>

#include <cmath>

#include "catvortex/errors.hpp"
#include "catvortex/exact_states.hpp"
#include "catvortex/reduction.hpp"

using namespace catvortex;

TEST_SUITE("exact_states") {

TEST_CASE("rotation rate") {
    const CatenoidParams p;
    CHECK(omega_symmetric(0.0, 1.0, p) == 0.0);
    CHECK(omega_symmetric(v_star(p), 1.0, p) == doctest::Approx(0.030629383078988447).epsilon(1e-14));
    CHECK(omega_symmetric(v_star(p), 1.0, p) ==
          doctest::Approx(1.0 / (6.0 * std::sqrt(3.0) * kPi)).epsilon(1e-14));
    CHECK(omega_symmetric(0.5, 1.0, p) == doctest::Approx(0.028920919320691780).epsilon(1e-14));
    const double tail = std::exp(-20.0) / kPi;
    CHECK(omega_symmetric(10.0, 1.0, p) / tail == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(-omega_symmetric(-10.0, 1.0, p) / tail == doctest::Approx(1.0).epsilon(1e-4));
    for (double V = 0.05; V < 4.0; V += 0.05) {
        CHECK(omega_symmetric(-V, 1.0, p) == -omega_symmetric(V, 1.0, p));
        CHECK(omega_symmetric(V, 1.0, p) != 0.0);
        CHECK(omega_symmetric(V, -2.0, p) == doctest::Approx(-2.0 * omega_symmetric(V, 1.0, p)));
    }
    const SymmetricOrbit o = symmetric_orbit(0.5, 1.0, p);
    CHECK(o.V0 == 0.5);
    CHECK(o.Omega == omega_symmetric(0.5, 1.0, p));
}

TEST_CASE("rotation rate through the curvature") {
    CHECK(omega_from_curvature(0.0, 1.0, CatenoidParams()) == 0.0);
    CHECK(omega_from_curvature(1.0, 1.0, CatenoidParams()) ==
          doctest::Approx(omega_symmetric(1.0, 1.0, CatenoidParams())).epsilon(1e-14));
    for (double a : {1.0, 0.5, 2.0}) {
        const CatenoidParams p(a);
        for (int k = 0; k < 1000; ++k) {
            const double V = a * (-5.0 + 10.0 * k / 999.0);
            const double ref = omega_symmetric(V, 1.0, p);
            CHECK(std::abs(omega_from_curvature(V, 1.0, p) - ref) <= 1e-13 * std::abs(ref));
        }
    }
}

TEST_CASE("location of the fastest orbit") {
    CHECK(v_star(CatenoidParams()) == doctest::Approx(0.65847894846240835).epsilon(1e-15));
    CHECK(v_star(CatenoidParams(2.0)) == 2.0 * v_star(CatenoidParams()));
    const CatenoidParams p;
    double best = 0.0;
    double arg = 0.0;
    for (int k = 0; k <= 200000; ++k) {
        const double V = 1e-5 * k;
        const double Om = omega_symmetric(V, 1.0, p);
        if (Om > best) {
            best = Om;
            arg = V;
        }
    }
    CHECK(std::abs(arg - v_star(p)) <= 1e-5);
    const double e = 1e-6;
    for (double V = 0.02; V < 3.0; V += 0.02) {
        if (std::abs(V - v_star(p)) < 0.01) continue;
        const double slope = (omega_symmetric(V + e, 1.0, p) - omega_symmetric(V - e, 1.0, p)) / (2 * e);
        CHECK((V < v_star(p) ? slope > 0.0 : slope < 0.0));
    }
}

TEST_CASE("linear stability") {
    const CatenoidParams p;
    CHECK(stability(0.0, 1.0, p).lambda == 0.0);
    const StabilityData s = stability(v_star(p), 1.0, p);
    CHECK(s.lambda == doctest::Approx(0.053051647697298445).epsilon(1e-14));
    CHECK(s.lambda == doctest::Approx(1.0 / (6.0 * kPi)).epsilon(1e-14));
    CHECK(s.eigen_ratio == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(stability(0.3, 1.0, p).lambda == doctest::Approx(0.036744821995965536).epsilon(1e-14));
    CHECK(stability(0.5, 1.0, p).lambda == doctest::Approx(0.050092501665038544).epsilon(1e-14));
    CHECK(stability(1.0, 1.0, p).lambda == doctest::Approx(0.044085637382452748).epsilon(1e-14));
    for (double a : {1.0, 1.7}) {
        const CatenoidParams q(a);
        for (double V = -3.0; V <= 3.0; V += 0.1) {
            for (double G : {1.0, -0.6}) {
                const StabilityData d = stability(V * a, G, q);
                CHECK(d.lambda == doctest::Approx(std::sqrt(3.0) * std::abs(omega_symmetric(V * a, G, q))).epsilon(1e-13));
                CHECK(d.lambda * d.lambda == doctest::Approx(d.A * d.B).epsilon(1e-14));
                CHECK(d.eigen_ratio == doctest::Approx(-d.lambda / d.A).epsilon(1e-15));
                if (V > 0.0 && G > 0.0) {
                    CHECK(d.eigen_ratio == doctest::Approx(-std::sqrt(3.0) / a * std::tanh(V)).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("unstable seed") {
    const CatenoidParams p;
    const VortexSystem s0 = seed_unstable(0.5, 0.0, 1.0, p);
    const VortexSystem sym = symmetric_state(0.5, 1.0, p);
    CHECK(s0.positions == sym.positions);

    const VortexSystem s = seed_unstable(0.5, 1e-4, 1.0, p);
    const CollectiveState cs = to_collective(s);
    const double phi0 = -std::sqrt(3.0) * std::tanh(0.5) * 1e-4;
    CHECK(phi0 == doctest::Approx(-8.0041039542363377e-5).epsilon(1e-14));
    CHECK(cs.dv == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(cs.du - kPi == doctest::Approx(phi0).epsilon(1e-10));
    CHECK(cs.V == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cs.U == 0.0);

    const StabilityData d = stability(0.5, 1.0, p);
    const double eta = 1e-4;
    const double phi = d.eigen_ratio * eta;
    CHECK(-d.A * phi == doctest::Approx(d.lambda * eta).epsilon(1e-12));
    CHECK(-d.B * eta == doctest::Approx(d.lambda * phi).epsilon(1e-12));

    CHECK_THROWS_AS(seed_unstable(0.5, 0.02, 1.0, p), PerturbationTooLarge);
    CHECK_THROWS_AS(seed_unstable(0.5, -0.011, 1.0, p), PerturbationTooLarge);
    CHECK_NOTHROW(seed_unstable(0.5, 0.015, 1.0, CatenoidParams(2.0)));
}

}  // TEST_SUITE
