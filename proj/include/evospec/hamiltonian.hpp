#pragma once

#include <string>
#include <vector>

#include "evospec/linalg.hpp"

namespace evospec {

struct HamiltonianTerm {
    std::vector<int> support;
    CMat matrix;  // 2^|support| square, Hermitian
};

enum class Boundary { Open, Periodic };

class LocalHamiltonian {
public:
    LocalHamiltonian() = default;
    // Groups are built by greedy coloring of the non-commutation graph.
    LocalHamiltonian(int n, std::vector<HamiltonianTerm> terms);
    // Explicit groups are validated for pairwise commutation.
    LocalHamiltonian(int n, std::vector<HamiltonianTerm> terms, std::vector<std::vector<int>> groups);

    int n() const { return n_; }
    const std::vector<HamiltonianTerm>& terms() const { return terms_; }
    const HamiltonianTerm& term(int i) const { return terms_[static_cast<std::size_t>(i)]; }
    int num_terms() const { return static_cast<int>(terms_.size()); }
    const std::vector<std::vector<int>>& groups() const { return groups_; }
    int num_groups() const { return static_cast<int>(groups_.size()); }

private:
    int n_ = 0;
    std::vector<HamiltonianTerm> terms_;
    std::vector<std::vector<int>> groups_;
};

struct ShiftedHamiltonian {
    LocalHamiltonian base;
    std::vector<double> per_term_shift;  // lambda_min of each original term
    double total_shift = 0.0;            // E_physical = E_shifted + total_shift
};

// Validates support and Hermiticity, then symmetrizes (A + A^dagger)/2.
HamiltonianTerm make_term(std::vector<int> support, const CMat& matrix, int n);

// Bond (i, i+1) carries -J(Z_i Z_{i+1} + g X_i); with an open chain the last
// qubit's field is a standalone term.
LocalHamiltonian build_tfim(int n, double J, double g, Boundary boundary = Boundary::Open);

bool is_termwise_stoquastic(const LocalHamiltonian& h);
bool is_stoquastic(const CMat& m);

bool terms_commute(const HamiltonianTerm& a, const HamiltonianTerm& b, double tol = 1e-12);
// Spectral norm of [a, b] on the joint support; 0 for disjoint supports.
double commutator_norm(const HamiltonianTerm& a, const HamiltonianTerm& b);

constexpr int kDenseCap = 12;

CMat dense_matrix(const LocalHamiltonian& h, int max_n = kDenseCap);
CMat group_matrix(const LocalHamiltonian& h, int group, int max_n = kDenseCap);
std::vector<double> exact_spectrum(const LocalHamiltonian& h, int max_n = kDenseCap);

double term_norm(const HamiltonianTerm& t);
double term_lambda_min(const HamiltonianTerm& t);
// Sum of term spectral norms; certified bound on |E|.
double norm_sum(const LocalHamiltonian& h);

ShiftedHamiltonian shift_terms(const LocalHamiltonian& h);

std::string to_json(const LocalHamiltonian& h);
LocalHamiltonian hamiltonian_from_json(const std::string& text);

}  // namespace evospec
