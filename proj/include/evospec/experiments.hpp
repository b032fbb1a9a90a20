#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evospec/dequant.hpp"
#include "evospec/esprit.hpp"
#include "evospec/hamiltonian.hpp"
#include "evospec/mc_sampler.hpp"
#include "evospec/rng.hpp"
#include "evospec/signal.hpp"
#include "evospec/trotter.hpp"

namespace evospec {

// Every tunable of a run. Parsed from one JSON document; CLI flags override fields.
struct ExperimentConfig {
    // model
    int n = 7;
    double J = 1.0;
    double g = 4.0;
    Boundary boundary = Boundary::Open;
    std::string state = "phi_optimal";

    // signals
    double tau_step = 0.3;  // imaginary time per k
    double dt = 0.3;        // real time per k
    int K = 10;
    TrotterConfig trotter;  // order 1, M = 100, commuting groups
    std::size_t num_samples = 4200;
    int q = 1;
    EstimatorKind estimator = EstimatorKind::EmpiricalMean;
    double TF = 0.02;
    std::uint64_t seed = 1;
    int repetitions = 1;

    // sweeps
    std::vector<int> K_sweep{4, 8, 16, 32};
    std::vector<double> g_sweep{1.5, 2.0, 3.0, 4.0};
    std::vector<std::size_t> sigma_sweep{500, 1000, 2000, 4200, 8400};
    std::vector<int> M_sweep{25, 50, 100, 200, 400};
    double trotter_time = 3.0;

    // synthetic studies
    int S = 4;                 // poles per synthetic signal
    int audit_instances = 100; // per theorem
    int audit_S_max = 3;

    std::string out_dir = "out";
    ExecPolicy policy = ExecPolicy::Parallel;

    void validate() const;
    LocalHamiltonian hamiltonian() const { return build_tfim(n, J, g, boundary); }
};

ExperimentConfig config_from_json(const std::string& text);
std::string to_json(const ExperimentConfig& cfg);
// Hash of every field that changes results (not out_dir or the execution policy).
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Ground and first-excited relative errors, each estimate assigned to the nearer
// of the two reference levels; +inf when no estimate is assigned to a level.
struct LevelErrors {
    double ground_estimate = 0.0;
    double excited_estimate = 0.0;
    double ground_rel_error = 0.0;
    double excited_rel_error = 0.0;
    int unassigned = 0;
};
LevelErrors score_levels(const std::vector<double>& estimates, double e_ground, double e_excited);

struct PipelineResult {
    std::string pipeline;  // "mc", "quantum" or "dequant"
    Signal signal;
    std::vector<double> stderr_proxy;  // per k, empty for quantum
    SpectralEstimate estimate;
    bool rank_fallback = false;        // filtered order exceeded L; reran at S = L
    std::vector<double> spectrum;      // exact, physical units
    LevelErrors levels;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

// Shifted TFIM, path sampler on g_I, filtered ESPRIT.
PipelineResult run_mc_pipeline(const ExperimentConfig& cfg, std::uint64_t seed);
// Shifted TFIM, Hadamard-test estimates of g_R, filtered ESPRIT.
PipelineResult run_quantum_pipeline(const ExperimentConfig& cfg, std::uint64_t seed);
// Rescaled TFIM, path expansion of g_D, filtered ESPRIT.
PipelineResult run_dequant_pipeline(const ExperimentConfig& cfg, std::uint64_t seed);

// Signal, estimate, exact levels and scores as one JSON document.
std::string to_json(const PipelineResult& r);

// Filtered ESPRIT with the rank fallback; energies mapped through the signal's map.
SpectralEstimate recover(const Signal& s, double TF, bool* rank_fallback = nullptr);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// S energies uniform in [lo, hi) with pairwise separation >= min_gap (units of 2 pi).
std::vector<double> random_energies(int S, double lo, double hi, double min_gap, Rng& rng);
// y(k) = sum_j c_j z_j^k.
std::vector<cplx> synthetic_signal(const std::vector<double>& energies, const std::vector<double>& c, SignalKind kind,
                                   int K);

struct RunReport {
    std::vector<std::string> files;
    std::string summary;  // JSON
};

RunReport run_figure2_analog(const ExperimentConfig& cfg);
RunReport run_figure3_analog(const ExperimentConfig& cfg);
RunReport run_figure4_analog(const ExperimentConfig& cfg);
RunReport run_trotter_sweep(const ExperimentConfig& cfg);
RunReport run_bounds_audit(const ExperimentConfig& cfg);

// Per-k signal CSVs in the documented schema.
void write_signal_csv(const std::string& path, const PipelineResult& r, const ExperimentConfig& cfg);

}  // namespace evospec
