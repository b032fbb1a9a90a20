#pragma once

#include <vector>

#include "evospec/hamiltonian.hpp"

namespace evospec {

enum class TimeMode { RealTime, ImaginaryTime };
enum class Scheme { Gamma, PerTerm };

struct Stage {
    int group;
    double coeff;  // fraction of the total duration spent in this stage
};

struct LocalFactor {
    int term;
    double time;  // coeff * duration
};

struct TrotterPlan {
    int order = 1;
    int M = 1;
    TimeMode mode = TimeMode::ImaginaryTime;
    Scheme scheme = Scheme::Gamma;
    double duration = 0.0;
    std::vector<Stage> stages;              // unmerged, all M steps in application order
    std::vector<std::vector<int>> groups;   // term indices per group
    int num_terms = 0;

    // Number of local propagators: M N for p = 1, 2 M N 5^{p/2-1} for even p.
    long L() const;
    // Adjacent stages on the same group fused into one.
    std::vector<Stage> merged_stages() const;
    // Per-group coefficient sums over the whole plan (each should be 1).
    std::vector<double> coefficient_sums() const;
};

TrotterPlan first_order_plan(const LocalHamiltonian& h, double duration, int M, TimeMode mode,
                             Scheme scheme = Scheme::Gamma);
TrotterPlan suzuki_plan(const LocalHamiltonian& h, double duration, int M, int p, TimeMode mode,
                        Scheme scheme = Scheme::Gamma);
TrotterPlan make_plan(const LocalHamiltonian& h, double duration, int M, int p, TimeMode mode,
                      Scheme scheme = Scheme::Gamma);

// Local propagators in application order, merged stages expanded into their terms.
std::vector<LocalFactor> expand_plan(const TrotterPlan& plan);

// Product G_1 G_2 ... G_L with G = e^{-i t H_term} or e^{-t H_term}.
CMat dense_plan_operator(const LocalHamiltonian& h, const TrotterPlan& plan, int max_n = kDenseCap);
// G_1 ... G_L |v>, applied right to left on the statevector.
CVec apply_plan(const LocalHamiltonian& h, const TrotterPlan& plan, const CVec& v);

struct TrotterBound {
    double value = 0.0;
    bool valid = true;  // imaginary-time norm conditions hold
    double commutator_sum = 0.0;
};

TrotterBound first_order_error_bound(const LocalHamiltonian& h, double duration, int M, TimeMode mode,
                                     Scheme scheme = Scheme::Gamma);

}  // namespace evospec
