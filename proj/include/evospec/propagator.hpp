#pragma once

#include <utility>
#include <vector>

#include "evospec/hamiltonian.hpp"

namespace evospec {

struct IrreducibleBlock {
    std::vector<int> states;  // local basis indices, ascending
    RMat matrix;              // restriction of the propagator to states
    double perron_value = 0.0;
    RVec perron_vector;       // unit 2-norm, strictly positive
};

// e^{-tau H_i} divided by its largest eigenvalue, split into irreducible blocks.
struct NonnegativePropagator {
    std::vector<int> support;
    int term = -1;
    double tau = 0.0;
    RMat matrix;                  // normalized local propagator
    double normalization = 1.0;   // raw = normalization * matrix
    double log_normalization = 0.0;
    std::vector<IrreducibleBlock> blocks;
    std::vector<int> block_of;    // local state -> block index
    std::vector<int> slot_of;     // local state -> position inside its block

    double lambda_of(int local) const { return blocks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(local)])].perron_value; }
    double phi_of(int local) const {
        const auto& b = blocks[static_cast<std::size_t>(block_of[static_cast<std::size_t>(local)])];
        return b.perron_vector(slot_of[static_cast<std::size_t>(local)]);
    }
};

NonnegativePropagator local_propagator(const HamiltonianTerm& term, double tau, int term_index = -1);

// Connected components of the symmetrized nonzero pattern, each with its Perron pair.
std::vector<IrreducibleBlock> decompose_blocks(const RMat& g);

std::pair<double, RVec> perron_pair(const RMat& block);

enum class Parity { Odd, Even };

// Hermitian dilation on support plus one ancilla (least significant local bit):
// odd  F = G (x) |0><1| + G^T (x) |1><0|, even  F = G (x) |1><0| + G^T (x) |0><1|.
RMat symmetrize(const RMat& g, Parity parity);

// <a| F |b> on the ancilla, as a matrix on the system.
RMat ancilla_element(const RMat& f, int a, int b);

}  // namespace evospec
