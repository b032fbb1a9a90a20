#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evospec/linalg.hpp"
#include "evospec/signal.hpp"

namespace evospec {

struct SpectralEstimate {
    std::vector<cplx> poles;
    std::vector<double> energies;        // physical units once the map is applied
    int S_effective = 0;
    std::vector<double> singular_values; // all Hankel singular values, descending
    double TF = 0.0;                     // 0 when the model order was given
    SignalKind kind = SignalKind::ImaginaryTime;
    bool complex_pole_warning = false;   // |Im log z| > 0.1 on a decaying kind
};

// (L+1) x (K-L+1) with entry (i, j) = y(i + j).
CMat hankel(const std::vector<cplx>& y, int L);

// ESPRIT with L = K/2 and model order S.
SpectralEstimate esprit(const std::vector<cplx>& y, int S);
// Model order = #{sigma >= TF sigma_max}.
SpectralEstimate filtered_esprit(const std::vector<cplx>& y, double TF);
// Matrix pencil with L = K/2; S > 0 fixes the order, otherwise TF selects it.
SpectralEstimate matrix_pencil(const std::vector<cplx>& y, int S, double TF = 0.0);

std::vector<double> poles_to_energies(const std::vector<cplx>& poles, SignalKind kind, const EnergyMap& map,
                                      bool* warning = nullptr);
// Fills energies of an estimate from its poles.
void apply_energy_map(SpectralEstimate& est, SignalKind kind, const EnergyMap& map);

struct MatchResult {
    double distance = 0.0;      // (1/2pi) min over injective matchings of the max mismatch
    std::size_t unmatched = 0;  // |longer| - |shorter|
};

MatchResult match(const std::vector<double>& e_true, const std::vector<double>& e_est);
double matching_distance(const std::vector<double>& e_true, const std::vector<double>& e_est);
// (1/2pi) max over true energies of the distance to the nearest estimate.
double coverage_distance(const std::vector<double>& e_true, const std::vector<double>& e_est);
// (1/2pi) min_{j != k} |E_j - E_k|.
double eigenvalue_gap(const std::vector<double>& e);

std::string to_json(const SpectralEstimate& est);

}  // namespace evospec
