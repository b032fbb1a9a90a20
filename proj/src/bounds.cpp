#include "evospec/bounds.hpp"

#include <cmath>
#include <numbers>

#include "evospec/errors.hpp"
#include "evospec/esprit.hpp"

namespace evospec {

namespace {

double root_arg(int S, double C, int K) { return 1.0 - 2.0 * C * S / ((C - 1.0) * K); }

void check_decaying(int S, double delta, int K) {
    if (S < 1) throw DomainError("S must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("gap must lie in (0, 1)");
    if (K % 2 != 0) throw DomainError("K must be even");
    if (K % S != 0) throw DomainError("K must be a multiple of S");
    if (K + 1 < 2 * S) throw DomainError("need K + 1 >= 2S");
}

RecoveryBoundReport decaying_report(int theorem, double gg1, double gg2, int K, double c_min, double noise) {
    if (!(c_min > 0.0)) throw DomainError("c_min must be positive");
    RecoveryBoundReport r;
    r.theorem = theorem;
    r.condition_lhs = noise;
    r.condition_rhs = c_min / std::sqrt(static_cast<double>(K)) * gg1;
    r.condition_satisfied = noise <= r.condition_rhs;
    r.distance_bound = noise / c_min * K * std::sqrt(static_cast<double>(K)) * gg2;
    return r;
}

}  // namespace

double h1(int S, double C, int K) {
    return (C - 1.0) / (8.0 * std::sqrt(2.0 * S) * C) * std::sqrt(root_arg(S, C, K));
}

double h2(int S, double C, int K) {
    return 40.0 * std::numbers::sqrt2 * S * S * std::pow(C / (C - 1.0), 1.5) / root_arg(S, C, K);
}

double g1(int S, double delta) {
    const double base = std::exp(-2.0 * std::numbers::pi) * std::numbers::pi * delta;
    return std::pow(base, 3.0 * (S - 1)) / (32.0 * S * S);
}

double g2(int S, double delta) {
    const double base = std::exp(-2.0 * std::numbers::pi) * std::numbers::pi * delta;
    return std::exp(2.0 * std::numbers::pi) * 640.0 * std::numbers::sqrt2 * std::pow(S, 5.5) * std::pow(base, -5.0 * (S - 1));
}

double g1_tilde(int S, double delta) { return std::pow(delta, 3.0 * (S - 1)) / (32.0 * S * S); }

double g2_tilde(int S, double delta) {
    return 640.0 * std::numbers::sqrt2 * std::pow(S, 5.5) * std::pow(delta, -5.0 * (S - 1));
}

RecoveryBoundReport bound_theorem6(int S, double C, int K, double c_min, double noise) {
    if (S < 1) throw DomainError("S must be >= 1");
    if (!(C > 2.0)) throw DomainError("C must exceed 2");
    if (K + 1 < 2 * S) throw DomainError("need K + 1 >= 2S");
    if (!(root_arg(S, C, K) > 0.0)) throw DomainError("1 - 2CS/((C-1)K) must be positive");
    if (!(c_min > 0.0)) throw DomainError("c_min must be positive");
    RecoveryBoundReport r;
    r.theorem = 6;
    r.condition_lhs = noise;
    r.condition_rhs = c_min * K * h1(S, C, K);
    r.condition_satisfied = noise <= r.condition_rhs;
    r.distance_bound = noise / (c_min * K) * h2(S, C, K);
    return r;
}

RecoveryBoundReport bound_theorem7(int S, double delta, int K, double c_min, double noise) {
    check_decaying(S, delta, K);
    return decaying_report(7, g1(S, delta), g2(S, delta), K, c_min, noise);
}

RecoveryBoundReport bound_theorem8(int S, double delta, int K, double c_min, double noise) {
    check_decaying(S, delta, K);
    return decaying_report(8, g1_tilde(S, delta), g2_tilde(S, delta), K, c_min, noise);
}

double hankel_noise_norm_bound(double eps_tot, int K) { return K * eps_tot; }

HankelNoiseNorms hankel_noise_norms(const std::vector<cplx>& eta) {
    const int K = static_cast<int>(eta.size()) - 1;
    if (K < 0) throw InvalidArgument("empty noise vector");
    const CMat H = hankel(eta, K / 2);
    return HankelNoiseNorms{spectral_norm(H), H.norm()};
}

}  // namespace evospec
