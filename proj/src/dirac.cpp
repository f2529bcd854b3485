#include "anchscgan/dirac.hpp"

#include "anchscgan/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace anchscgan {

namespace {

double ell(double t) { return -std::log1p(std::exp(-t)); }
double ell_prime(double t) { return 1.0 / (1.0 + std::exp(t)); }
double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

DiracState dirac_step(DiracState state) {
    if (state.eta <= 0.0) fail(ErrorCode::value, "step size must be positive");

    // Discriminator ascent on l(psi*theta).
    state.psi += state.eta * state.theta * ell_prime(state.psi * state.theta);

    // Generator descent with the fresh psi. The score coefficient multiplies
    // the objective, so its theta-dependence contributes a product-rule term.
    const double t = state.psi * state.theta;
    if (state.use_score) {
        const double s = std::exp(-std::abs(state.theta));
        const double ds = -sign(state.theta) * s;
        state.theta -= state.eta * (ds * ell(t) + s * state.psi * ell_prime(t));
    } else {
        state.theta -= state.eta * state.psi * ell_prime(t);
    }
    return state;
}

DiracTrajectory simulate_trajectory(double psi0, double theta0, double eta, long steps,
                                    bool use_score) {
    if (steps < 0) fail(ErrorCode::value, "step count must be >= 0");
    DiracTrajectory trajectory;
    trajectory.psi.reserve(static_cast<std::size_t>(steps) + 1);
    trajectory.theta.reserve(static_cast<std::size_t>(steps) + 1);
    DiracState state{psi0, theta0, eta, use_score};
    trajectory.psi.push_back(state.psi);
    trajectory.theta.push_back(state.theta);
    for (long i = 0; i < steps; ++i) {
        state = dirac_step(state);
        trajectory.psi.push_back(state.psi);
        trajectory.theta.push_back(state.theta);
    }
    return trajectory;
}

void write_trajectory_csv(const DiracTrajectory& trajectory, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, "cannot write '" + path + "'");
    out << "step,psi,theta\n";
    char buf[64];
    for (std::size_t i = 0; i < trajectory.psi.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g", i, trajectory.psi[i],
                      trajectory.theta[i]);
        out << buf << '\n';
    }
    if (!out) fail(ErrorCode::io, "write failed for '" + path + "'");
}

}  // namespace anchscgan
