#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "catvortex/errors.hpp"
#include "catvortex/exact_states.hpp"
#include "catvortex/nbody.hpp"

using namespace catvortex;

namespace {

VortexSystem random_system(std::mt19937_64& rng, std::size_t n, bool same_sign = false) {
    std::uniform_real_distribution<double> dv(-1.5, 1.5);
    std::uniform_real_distribution<double> du(-kPi, kPi);
    std::uniform_real_distribution<double> dg(0.3, 2.0);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> da(0.5, 2.0);
    for (;;) {
        VortexSystem sys;
        sys.params = CatenoidParams(da(rng));
        for (std::size_t i = 0; i < n; ++i) {
            const double g = dg(rng);
            sys.circulations.push_back(same_sign || coin(rng) ? g : -g);
            sys.positions.push_back({dv(rng) * sys.params.a(), du(rng)});
        }
        bool spaced = true;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (pair_kernel(sys.positions[i], sys.positions[j], sys.params, 0.0) < 0.05)
                    spaced = false;
        if (spaced) return sys;
    }
}

double partial(const VortexSystem& sys, std::size_t i, bool meridional) {
    VortexSystem s = sys;
    double& x = meridional ? s.positions[i].v : s.positions[i].u;
    const double x0 = x;
    const double h = fd_step(1e-6, x0);
    x = x0 + h;
    const double fp = hamiltonian(s);
    x = x0 - h;
    const double fm = hamiltonian(s);
    return (fp - fm) / (2 * h);
}

VortexSystem single(double gamma, double v) {
    VortexSystem s;
    s.circulations = {gamma};
    s.positions = {{v, 0.3}};
    return s;
}

}  // namespace

TEST_SUITE("nbody") {

TEST_CASE("pair kernel and Green's function") {
    const CatenoidParams p;
    CHECK(pair_kernel({0.2, 0.0}, {0.2, kPi}, p) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(green_function({0.2, 0.0}, {0.2, kPi}, p) ==
          doctest::Approx(0.055158900038162898).epsilon(1e-14));
    CHECK(pair_kernel({1.0, kPi / 2}, {0.0, 0.0}, p) ==
          doctest::Approx(1.5430806348152437).epsilon(1e-14));
    CHECK_THROWS_AS(pair_kernel({0.1, 0.1}, {0.1, 0.1}, p), CollisionError);
    CHECK_THROWS_AS(pair_kernel({0.1, 0.1}, {0.1, 0.1 + 1e-7}, p), CollisionError);
    CHECK_NOTHROW(pair_kernel({0.1, 0.1}, {0.1, 0.1 + 1e-5}, p));
    // symmetric and 2 pi periodic in du
    const SurfacePoint a{0.3, 0.4};
    const SurfacePoint b{-0.8, 2.2};
    CHECK(pair_kernel(a, b, p) == pair_kernel(b, a, p));
    CHECK(pair_kernel(a, {b.v, b.u + 4 * kPi}, p) == doctest::Approx(pair_kernel(a, b, p)).epsilon(1e-14));
    CHECK(pair_kernel(a, b, p) > 0.0);
}

TEST_CASE("system validation") {
    VortexSystem s;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.circulations = {1.0, 0.0};
    s.positions = {{0, 0}, {0, 1}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.circulations = {1.0};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.circulations = {1.0, 1.0};
    s.positions = {{0, 0}, {0, 0}};
    CHECK_THROWS_AS(s.validate(), CollisionError);
    s.positions = {{0, 0}, {0, NAN}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.positions = {{0, 0}, {0, 1}};
    CHECK_NOTHROW(s.validate());
}

TEST_CASE("flat state layout") {
    VortexSystem s;
    s.circulations = {1, 2, 3};
    s.positions = {{1, 4}, {2, 5}, {3, 6}};
    const auto y = s.flat_state();
    CHECK(y == std::vector<double>{1, 2, 3, 4, 5, 6});
    VortexSystem t = s;
    t.assign_flat_state(std::vector<double>{6, 5, 4, 3, 2, 1});
    CHECK(t.positions[0] == SurfacePoint{6, 3});
    CHECK(t.positions[2] == SurfacePoint{4, 1});
}

TEST_CASE("Hamiltonian closed forms") {
    const CatenoidParams p;
    CHECK(hamiltonian(symmetric_state(0.0, 1.0, p)) == doctest::Approx(0.055158900038162898).epsilon(1e-14));
    CHECK(hamiltonian(single(1.0, 0.0)) == 0.0);
    for (double V0 : {0.3, 1.0, -2.0}) {
        const double expect = std::log(2.0) / (4 * kPi) - std::log(std::cosh(V0)) / (2 * kPi);
        CHECK(hamiltonian(symmetric_state(V0, 1.0, p)) == doctest::Approx(expect).epsilon(1e-13));
    }
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        VortexSystem s = random_system(rng, 4);
        const double H = hamiltonian(s);
        for (auto& x : s.positions) x.u += 0.37;
        CHECK(hamiltonian(s) == doctest::Approx(H).epsilon(1e-14));
    }
}

TEST_CASE("momentum") {
    const CatenoidParams p;
    CHECK(momentum(symmetric_state(0.0, 1.0, p)) == 0.0);
    CHECK(momentum(symmetric_state(1.0, 1.0, p)) == doctest::Approx(2.8134302039235094).epsilon(1e-15));
    CHECK(momentum(single(-1.0, 1.0)) == doctest::Approx(-1.4067151019617547).epsilon(1e-15));
    VortexSystem s = symmetric_state(0.7, 1.3, p);
    const double J = momentum(s);
    s.positions[0].u += 2.0;
    s.positions[1].u -= 0.4;
    CHECK(momentum(s) == J);
    CHECK(invariants(s).J == doctest::Approx(J).epsilon(1e-15));
    CHECK(invariants(s).H == doctest::Approx(hamiltonian(s)).epsilon(1e-15));
}

TEST_CASE("vector field special states") {
    const CatenoidParams p;
    for (double V0 : {0.5, -0.8, 0.0}) {
        const auto pv = vector_field(symmetric_state(V0, 1.0, p));
        const double Om = omega_symmetric(V0, 1.0, p);
        CHECK(std::abs(pv.dv[0]) < 1e-16);
        CHECK(std::abs(pv.dv[1]) < 1e-16);
        CHECK(pv.du[0] == doctest::Approx(Om).epsilon(1e-14));
        CHECK(pv.du[1] == doctest::Approx(Om).epsilon(1e-14));
    }
    const auto one = vector_field(single(1.0, 0.4));
    CHECK(one.dv[0] == 0.0);
    const double h = std::cosh(0.4);
    CHECK(one.du[0] == doctest::Approx(std::tanh(0.4) / (4 * kPi * h * h)).epsilon(1e-15));
    CHECK(vector_field(single(1.0, 0.0)).du[0] == 0.0);
}

TEST_CASE("vector field is Hamilton's equations") {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {2u, 3u, 5u}) {
        for (int k = 0; k < 34; ++k) {
            const VortexSystem s = random_system(rng, n);
            const auto pv = vector_field(s);
            const double a = s.params.a();
            for (std::size_t i = 0; i < n; ++i) {
                const double h = conformal_factor(s.positions[i].v, s.params);
                const double w = s.circulations[i] * a * h * h;
                const double Hu = partial(s, i, false);
                const double Hv = partial(s, i, true);
                CHECK(std::abs(w * pv.dv[i] - Hu) <= std::max(1e-6, 1e-4 * std::abs(Hu)));
                CHECK(std::abs(w * pv.du[i] + Hv) <= std::max(1e-6, 1e-4 * std::abs(Hv)));
            }
        }
    }
}

TEST_CASE("vector field symmetries") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 30; ++k) {
        VortexSystem s = random_system(rng, 4);
        const auto pv = vector_field(s);
        for (auto& x : s.positions) x.u += 1.234;
        const auto shifted = vector_field(s);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(shifted.dv[i] - pv.dv[i]) < 1e-13);
            CHECK(std::abs(shifted.du[i] - pv.du[i]) < 1e-13);
        }
    }
    for (int k = 0; k < 30; ++k) {
        const VortexSystem s = random_system(rng, 2);
        const auto pv = vector_field(s);
        const double a = s.params.a();
        double sum = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const double h = conformal_factor(s.positions[i].v, s.params);
            const double term = s.circulations[i] * a * h * h * pv.dv[i];
            sum += term;
            scale = std::max(scale, std::abs(term));
        }
        CHECK(std::abs(sum) < 1e-13 * std::max(1.0, scale));
    }
}

TEST_CASE("flat and structured forms agree") {
    std::mt19937_64 rng(3);
    const VortexSystem s = random_system(rng, 5);
    const auto pv = vector_field(s);
    std::vector<double> out(10);
    vector_field(s.circulations, s.params, s.flat_state(), out);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(out[i] == pv.dv[i]);
        CHECK(out[5 + i] == pv.du[i]);
    }
}

TEST_CASE("collisions are reported") {
    VortexSystem s;
    s.circulations = {1.0, 1.0};
    s.positions = {{0.2, 0.5}, {0.2, 0.5}};
    CHECK_THROWS_AS(vector_field(s), CollisionError);
    CHECK_THROWS_AS(hamiltonian(s), CollisionError);
    CHECK_NOTHROW(momentum(s));
}

TEST_CASE("Poisson brackets") {
    std::mt19937_64 rng(99);
    const Observable H = [](const VortexSystem& s) { return hamiltonian(s); };
    const Observable J = [](const VortexSystem& s) { return momentum(s); };
    for (int k = 0; k < 100; ++k) {
        const VortexSystem s = random_system(rng, 2);
        CHECK(std::abs(poisson_bracket(H, J, s)) < 1e-8);
    }
    const VortexSystem s = random_system(rng, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const Observable vi = [i](const VortexSystem& x) { return x.positions[i].v; };
        const Observable ui = [i](const VortexSystem& x) { return x.positions[i].u; };
        const double h = conformal_factor(s.positions[i].v, s.params);
        const double expect = 1.0 / (s.circulations[i] * s.params.a() * h * h);
        CHECK(poisson_bracket(vi, ui, s) == doctest::Approx(expect).epsilon(1e-8));
        CHECK(poisson_bracket(ui, vi, s) == doctest::Approx(-expect).epsilon(1e-8));
        CHECK(poisson_bracket(H, H, s) == 0.0);
    }
    // {u_i, H} reproduces the vector field
    const auto pv = vector_field(s);
    for (std::size_t i = 0; i < 3; ++i) {
        const Observable ui = [i](const VortexSystem& x) { return x.positions[i].u; };
        const Observable vi = [i](const VortexSystem& x) { return x.positions[i].v; };
        CHECK(poisson_bracket(ui, H, s) == doctest::Approx(pv.du[i]).epsilon(1e-6));
        CHECK(poisson_bracket(vi, H, s) == doctest::Approx(pv.dv[i]).epsilon(1e-6));
    }
    CHECK_THROWS_AS(poisson_bracket(H, J, s, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
