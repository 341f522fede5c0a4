#include "catvortex/nbody.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "catvortex/errors.hpp"

namespace catvortex {

namespace {

[[noreturn]] void throw_collision(std::size_t i, std::size_t j, double F) {
    std::ostringstream os;
    os.precision(17);
    os << "vortices " << i << " and " << j << " collide: F = " << F << " below floor "
       << kCollisionFloor;
    throw CollisionError(os.str());
}

}  // namespace

void VortexSystem::validate() const {
    if (positions.empty()) throw std::invalid_argument("vortex system needs at least one vortex");
    if (circulations.size() != positions.size()) {
        throw std::invalid_argument("circulation count does not match position count");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (circulations[i] == 0.0 || !std::isfinite(circulations[i])) {
            throw std::invalid_argument("circulation " + std::to_string(i) +
                                        " must be nonzero and finite");
        }
        if (!std::isfinite(positions[i].v) || !std::isfinite(positions[i].u)) {
            throw std::invalid_argument("position " + std::to_string(i) + " is not finite");
        }
    }
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            (void)pair_kernel(positions[i], positions[j], params);
        }
    }
}

std::vector<double> VortexSystem::flat_state() const {
    const std::size_t n = size();
    std::vector<double> y(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = positions[i].v;
        y[n + i] = positions[i].u;
    }
    return y;
}

void VortexSystem::assign_flat_state(std::span<const double> state) {
    const std::size_t n = state.size() / 2;
    positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) positions[i] = {state[i], state[n + i]};
}

namespace {

// cosh x - cos y without cancellation for close pairs
inline double kernel(double x, double y) {
    const double sh = std::sinh(0.5 * x);
    const double sn = std::sin(0.5 * y);
    return 2.0 * (sh * sh + sn * sn);
}

}  // namespace

double pair_kernel(const SurfacePoint& pi, const SurfacePoint& pj, const CatenoidParams& p,
                   double floor) {
    const double F = kernel((pi.v - pj.v) / p.a(), pi.u - pj.u);
    if (!(F >= floor)) {
        std::ostringstream os;
        os.precision(17);
        os << "near-collision: F = " << F << " below floor " << floor;
        throw CollisionError(os.str());
    }
    return F;
}

double green_function(const SurfacePoint& pi, const SurfacePoint& pj, const CatenoidParams& p) {
    return std::log(pair_kernel(pi, pj, p)) / (4.0 * kPi);
}

Invariants invariants(std::span<const double> gam, const CatenoidParams& p,
                      std::span<const double> y) {
    const std::size_t n = gam.size();
    const double a = p.a();
    double pair = 0.0;
    double self = 0.0;
    double J = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = y[i];
        const double ui = y[n + i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double F = kernel((vi - y[j]) / a, ui - y[n + j]);
            if (!(F >= kCollisionFloor)) throw_collision(i, j, F);
            pair += gam[i] * gam[j] * std::log(F);
        }
        self += gam[i] * gam[i] * std::log(std::cosh(vi / a));
        J += gam[i] * momentum_density(vi, p);
    }
    return {(pair - self) / (4.0 * kPi), J};
}

Invariants invariants(const VortexSystem& sys) {
    const auto y = sys.flat_state();
    return invariants(sys.circulations, sys.params, y);
}

double hamiltonian(const VortexSystem& sys) { return invariants(sys).H; }

double momentum(const VortexSystem& sys) {
    double J = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        J += sys.circulations[i] * momentum_density(sys.positions[i].v, sys.params);
    }
    return J;
}

void vector_field(std::span<const double> gam, const CatenoidParams& p,
                  std::span<const double> y, std::span<double> out) {
    const std::size_t n = gam.size();
    const double a = p.a();
    const double inv4pi = 1.0 / (4.0 * kPi);
    // out[i] collects sum_j gam_j sin(du_ij) / F_ij, out[n + i] the sinh sum;
    // each unordered pair is visited once and both terms are antisymmetric
    std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(2 * n), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = y[i];
        const double ui = y[n + i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double hx = 0.5 * (vi - y[j]) / a;
            const double hy = 0.5 * (ui - y[n + j]);
            const double sh = std::sinh(hx);
            const double sn = std::sin(hy);
            const double q = sh * sh + sn * sn;
            if (!(2.0 * q >= kCollisionFloor)) throw_collision(i, j, 2.0 * q);
            // sin(du) / F and sinh(dv/a) / F with the factors of two cancelled
            const double s_sin = sn * std::cos(hy) / q;
            const double s_sinh = sh * std::cosh(hx) / q;
            out[i] += gam[j] * s_sin;
            out[j] -= gam[i] * s_sin;
            out[n + i] += gam[j] * s_sinh;
            out[n + j] -= gam[i] * s_sinh;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double vi = y[i];
        const double h = std::cosh(vi / a);
        const double h2 = h * h;
        out[i] = inv4pi * out[i] / (a * h2);
        out[n + i] = inv4pi * (gam[i] * std::tanh(vi / a) - out[n + i]) / (a * a * h2);
    }
}

PhaseVelocity vector_field(const VortexSystem& sys) {
    const std::size_t n = sys.size();
    const auto y = sys.flat_state();
    std::vector<double> out(2 * n);
    vector_field(sys.circulations, sys.params, y, out);
    PhaseVelocity pv;
    pv.dv.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n));
    pv.du.assign(out.begin() + static_cast<std::ptrdiff_t>(n), out.end());
    return pv;
}

double poisson_bracket(const Observable& A, const Observable& B, const VortexSystem& sys,
                       double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");

    auto partial = [&](const Observable& f, std::size_t i, bool meridional) {
        VortexSystem s = sys;
        double& x = meridional ? s.positions[i].v : s.positions[i].u;
        const double x0 = x;
        const double h = fd_step(step, x0);
        x = x0 + h;
        const double fp = f(s);
        x = x0 - h;
        const double fm = f(s);
        return (fp - fm) / (2.0 * h);
    };

    const double a = sys.params.a();
    double total = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        const double h = conformal_factor(sys.positions[i].v, sys.params);
        const double weight = 1.0 / (sys.circulations[i] * a * h * h);
        const double Av = partial(A, i, true);
        const double Au = partial(A, i, false);
        const double Bv = partial(B, i, true);
        const double Bu = partial(B, i, false);
        total += weight * (Av * Bu - Au * Bv);
    }
    return total;
}

}  // namespace catvortex
