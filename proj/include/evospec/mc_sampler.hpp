#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "evospec/hamiltonian.hpp"
#include "evospec/propagator.hpp"
#include "evospec/rng.hpp"
#include "evospec/states.hpp"
#include "evospec/trotter.hpp"

namespace evospec {

enum class ExecPolicy { Serial, Parallel };
enum class EstimatorKind { MedianOfMeans, EmpiricalMean };

// Samples are processed in fixed chunks; chunk c always uses stream (stream, c),
// so the serial and parallel kernels produce identical samples.
constexpr std::size_t kChunk = 4096;

struct PathSample {
    std::vector<Bits> path;
    cplx R = 1.0;
    std::vector<double> log_weight_terms;  // log of each per-step weight factor
};

struct SignalEstimate {
    int k = 0;
    double value = 0.0;
    double stderr_proxy = 0.0;
    std::size_t num_samples = 0;
    int q = 1;
    std::vector<double> group_means;
    EstimatorKind estimator = EstimatorKind::EmpiricalMean;
    double sample_variance = 0.0;
    std::uint64_t seed = 0;
};

// P(a -> b) = G(a, b) phi(b) / (lambda phi(a)) over local states b.
RVec transition_row(const NonnegativePropagator& p, int local_in);
// Successor strings and their probabilities for a full n-bit input.
std::vector<std::pair<Bits, double>> transition_distribution(const NonnegativePropagator& p, Bits x, int n);
// Q(x, y) = G(x, y) lambda phi(x) / phi(y); column sums equal lambda^2.
RMat q_matrix(const NonnegativePropagator& p);

struct TrotterConfig {
    int order = 1;
    int M = 100;
    Scheme scheme = Scheme::Gamma;
};

// Precomputed transition tables for one Trotterized product of stoquastic propagators.
class PathSampler {
public:
    PathSampler(const LocalHamiltonian& h, const TrotterPlan& plan);

    int n() const { return n_; }
    std::size_t length() const { return factor_table_.size(); }
    const std::vector<NonnegativePropagator>& propagators() const { return props_; }
    double total_log_normalization() const { return total_log_norm_; }

    // One path with full diagnostics.
    PathSample sample_path(const InputStateAccess& state, Rng& rng) const;
    // R only; the hot loop.
    cplx sample_R(const InputStateAccess& state, Rng& rng) const;

    // Re R for `count` paths.
    std::vector<double> sample_values(const InputStateAccess& state, std::size_t count, std::uint64_t seed,
                                      std::uint64_t stream, ExecPolicy policy) const;

    // Reference kernel used by the parallel one; exposed for testing and benchmarks.
    std::vector<double> sample_values_serial(const InputStateAccess& state, std::size_t count, std::uint64_t seed,
                                             std::uint64_t stream) const;
    std::vector<double> sample_values_parallel(const InputStateAccess& state, std::size_t count, std::uint64_t seed,
                                               std::uint64_t stream) const;

private:
    struct Table {
        int d = 1;
        int m = 0;
        int shifts[8] = {};             // bit positions of the support, most significant first
        std::vector<int> count;         // nonzero successors per input
        std::vector<double> cum;        // d*d cumulative probabilities
        std::vector<double> weight;     // d*d per-step factor normalization * lambda phi(a) / phi(b)
        std::vector<Bits> flip;         // d*d XOR masks on the full string
        std::vector<int> out;           // d*d successor local index
    };

    void sample_chunk(const InputStateAccess& state, std::size_t begin, std::size_t end, std::uint64_t seed,
                      std::uint64_t stream, std::size_t chunk, double* out) const;

    int n_ = 0;
    std::vector<NonnegativePropagator> props_;
    std::vector<Table> tables_;
    std::vector<int> factor_table_;
    double total_log_norm_ = 0.0;
};

// Median in the smallest-index convention: the first a_i with
// #{a_j <= a_i} >= q/2 and #{a_j >= a_i} >= q/2.
double lower_median(const std::vector<double>& a);
// Contiguous groups; the first |samples| mod q groups have one extra element.
std::vector<double> group_means(const std::vector<double>& samples, int q);
double median_of_means(const std::vector<double>& samples, int q);
double sample_variance(const std::vector<double>& samples);

SignalEstimate summarize(const std::vector<double>& samples, int k, int q, EstimatorKind kind, std::uint64_t seed);

struct McConfig {
    double step = 1.0;  // tau per unit k
    int K = 0;
    TrotterConfig trotter;
    std::size_t num_samples = 1000;
    int q = 1;
    EstimatorKind estimator = EstimatorKind::EmpiricalMean;
    std::uint64_t seed = 0;
    ExecPolicy policy = ExecPolicy::Parallel;
};

// Estimates of g_I(k) = <Phi| T_k |Phi> for k = 0..K, with T_k the Trotterized e^{-k step H}.
std::vector<SignalEstimate> estimate_signal(const InputStateAccess& state, const LocalHamiltonian& h, const McConfig& cfg);

std::string to_string(EstimatorKind k);
EstimatorKind estimator_from_string(const std::string& s);

}  // namespace evospec
