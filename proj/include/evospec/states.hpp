#pragma once

#include <memory>
#include <string>
#include <vector>

#include "evospec/linalg.hpp"
#include "evospec/rng.hpp"

namespace evospec {

// Sampling access to |Phi(x)|^2 plus amplitude ratios Phi(y)/Phi(x).
class InputStateAccess {
public:
    virtual ~InputStateAccess() = default;
    virtual int n() const = 0;
    virtual Bits sample(Rng& rng) const = 0;
    virtual cplx ratio(Bits x, Bits y) const = 0;
    virtual bool has_amplitude() const { return true; }
    virtual cplx amplitude(Bits x) const = 0;
    virtual std::string kind() const = 0;

    // Full amplitude vector; needs has_amplitude() and n <= max_n.
    CVec dense(int max_n = 20) const;
};

using StatePtr = std::shared_ptr<const InputStateAccess>;

StatePtr product_plus(int n);
StatePtr phi_optimal(int n);
// Arbitrary normalized vector; sampling by inverse CDF. Test oracle.
StatePtr dense_state(const CVec& amplitudes);

StatePtr make_state(const std::string& kind, int n);

// Entry w is C(n, w) |Phi(w)|^2 for the weight-only amplitude of phi_optimal.
std::vector<double> hamming_weight_marginal(int n);
double phi_optimal_amplitude(int n, int weight);

// Uniformly random n-bit string of Hamming weight w (partial Fisher-Yates).
Bits random_fixed_weight(int n, int w, Rng& rng);

int popcount(Bits x);

}  // namespace evospec
