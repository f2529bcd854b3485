#pragma once

#include <string>
#include <vector>

namespace anchscgan {

// One-parameter GAN: real data is a point mass at 0, the generator a point
// mass at theta, the discriminator D(x) = psi*x, objective l(psi*theta) with
// l(t) = -log(1+e^-t). Alternating updates, discriminator first. With the
// score on, the generator objective carries the coefficient s(theta) =
// e^-|theta| and its step differentiates through it.
struct DiracState {
    double psi = 0.0;
    double theta = 0.0;
    double eta = 0.01;
    bool use_score = false;
};

DiracState dirac_step(DiracState state);

struct DiracTrajectory {
    std::vector<double> psi;
    std::vector<double> theta;  // both of length steps+1, starting at init
};

DiracTrajectory simulate_trajectory(double psi0, double theta0, double eta, long steps,
                                    bool use_score);

// CSV with columns step,psi,theta.
void write_trajectory_csv(const DiracTrajectory& trajectory, const std::string& path);

}  // namespace anchscgan
