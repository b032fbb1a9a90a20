#pragma once

#include <vector>

#include "evospec/linalg.hpp"

namespace evospec {

struct RecoveryBoundReport {
    double condition_lhs = 0.0;   // ||H(eta)||
    double condition_rhs = 0.0;
    bool condition_satisfied = false;
    double distance_bound = 0.0;
    int theorem = 0;
};

// Oscillatory signals with gap constant C > 2.
double h1(int S, double C, int K);
double h2(int S, double C, int K);
// Decaying signals with z = e^{-E}.
double g1(int S, double delta);
double g2(int S, double delta);
// Decaying signals with z = 1 - E/2pi.
double g1_tilde(int S, double delta);
double g2_tilde(int S, double delta);

RecoveryBoundReport bound_theorem6(int S, double C, int K, double c_min, double hankel_noise_norm);
RecoveryBoundReport bound_theorem7(int S, double delta, int K, double c_min, double hankel_noise_norm);
RecoveryBoundReport bound_theorem8(int S, double delta, int K, double c_min, double hankel_noise_norm);

// K * eps_tot, an upper bound on ||H(eta)||_F for |eta(k)| <= eps_tot.
double hankel_noise_norm_bound(double eps_tot, int K);

struct HankelNoiseNorms {
    double spectral = 0.0;
    double frobenius = 0.0;
};
// Exact norms of H(eta) with L = K/2.
HankelNoiseNorms hankel_noise_norms(const std::vector<cplx>& eta);

}  // namespace evospec
