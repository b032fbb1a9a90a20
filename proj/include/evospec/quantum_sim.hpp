#pragma once

#include <cstdint>
#include <vector>

#include "evospec/hamiltonian.hpp"
#include "evospec/mc_sampler.hpp"
#include "evospec/signal.hpp"
#include "evospec/trotter.hpp"

namespace evospec {

constexpr int kStateVectorCap = 14;

struct StateVector {
    int n = 0;
    CVec amplitudes;
};

struct LocalGate {
    std::vector<int> support;
    CMat matrix;
};

StateVector make_state_vector(const CVec& amplitudes, int cap = kStateVectorCap);
StateVector apply_local_unitary(const StateVector& psi, const CMat& u, const std::vector<int>& support);

// <Phi| G_1 ... G_L |Phi>, applying G_L first.
cplx overlap(const StateVector& phi, const std::vector<LocalGate>& seq);

// Pr(m = 0 | theta): 1/2 + Re F / 2 at theta = 0, 1/2 - Im F / 2 at theta = pi/2.
double hadamard_test_prob(const StateVector& phi, const std::vector<LocalGate>& seq, double theta);
double hadamard_prob_from_overlap(cplx f, double theta);

// Successes among `count` Bernoulli(p) draws, chunked as in the path sampler.
std::size_t bernoulli_count(double p, std::size_t count, std::uint64_t seed, std::uint64_t stream, ExecPolicy policy);

struct QuantumConfig {
    double dt = 0.1;
    TrotterConfig trotter;
    std::size_t num_samples = 1000;  // per theta
    std::uint64_t seed = 0;
    ExecPolicy policy = ExecPolicy::Parallel;
};

// Trotterized <Phi| e^{-i k dt H} |Phi> evaluated exactly on the statevector.
cplx trotterized_overlap(const StateVector& phi, const LocalHamiltonian& h, double duration, const TrotterConfig& t,
                         TimeMode mode);

// Hadamard-test estimate F~ = (2 n0/|S| - 1) - i (2 n_{pi/2}/|S| - 1).
cplx estimate_gR(const StateVector& phi, const LocalHamiltonian& h, int k, const QuantumConfig& cfg);
std::vector<cplx> estimate_gR_series(const StateVector& phi, const LocalHamiltonian& h, int K, const QuantumConfig& cfg);

// Dense spectral oracle for g_R, g_I and g_D.
Signal exact_signal(const CVec& phi, const CMat& h, double step, int K, SignalKind kind, int cap = kDenseCap);

}  // namespace evospec
