#pragma once

#include <cstdint>
#include <vector>

#include "evospec/hamiltonian.hpp"
#include "evospec/mc_sampler.hpp"
#include "evospec/states.hpp"

namespace evospec {

// H' = scale (H + shift I) with spectrum inside [0, pi].
struct RescaledHamiltonian {
    LocalHamiltonian base;
    double shift = 0.0;
    double scale = 1.0;

    // Physical energy of a rescaled one.
    double to_physical(double e_rescaled) const { return e_rescaled / scale - shift; }
    CMat dense(int max_n = kDenseCap) const;
};

// Uses the certified bounds -/+ sum_i ||H_i||.
RescaledHamiltonian rescale_into_half_band(const LocalHamiltonian& h);

constexpr std::size_t kNodeBudget = 10'000'000;

// R(x0) = sum_y <x0| (I - H'/2pi)^k |y> Phi(y)/Phi(x0), merging equal strings at every depth.
cplx path_expansion_value(const InputStateAccess& state, const RescaledHamiltonian& h, int k, Bits x0,
                          std::size_t node_budget = kNodeBudget);

struct DequantConfig {
    std::size_t num_samples = 1000;
    int q = 1;
    EstimatorKind estimator = EstimatorKind::MedianOfMeans;
    std::uint64_t seed = 0;
    ExecPolicy policy = ExecPolicy::Parallel;
    std::size_t node_budget = kNodeBudget;
};

std::vector<double> dequant_samples(const InputStateAccess& state, const RescaledHamiltonian& h, int k,
                                    const DequantConfig& cfg);
SignalEstimate estimate_gD(const InputStateAccess& state, const RescaledHamiltonian& h, int k, const DequantConfig& cfg);

// Dense <Phi| (I - H'/2pi)^k |Phi>.
double exact_gD(const CVec& phi, const RescaledHamiltonian& h, int k);

}  // namespace evospec
