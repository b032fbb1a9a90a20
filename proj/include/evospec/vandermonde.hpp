#pragma once

#include <optional>
#include <vector>

#include "evospec/linalg.hpp"

namespace evospec {

// (L+1) x S with entry (i, j) = z_j^i.
CMat vandermonde(const std::vector<cplx>& z, int L);

struct VandermondeDiagnostics {
    double sigma_min = 0.0;
    double norm = 0.0;
    double condition = 0.0;
    std::optional<double> gautschi;  // square case with real positive poles
};

VandermondeDiagnostics vandermonde_diagnostics(const std::vector<cplx>& z, int L);

// Gautschi's closed form for the induced infinity norm of the inverse of the
// square Vandermonde matrix: max_i prod_{j != i} (1 + |z_j|) / |z_j - z_i|.
double gautschi_inverse_norm(const std::vector<double>& z);

// Induced infinity norm of V^{-1} (square) or V^+ (tall), computed in extended precision.
double inverse_inf_norm(const std::vector<double>& z, int L);

}  // namespace evospec
