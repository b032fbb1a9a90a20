#include "evospec/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "evospec/errors.hpp"
#include "evospec/rng.hpp"

namespace evospec {

StateVector make_state_vector(const CVec& a, int cap) {
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(a.size()))));
    if (n < 1 || (Eigen::Index{1} << n) != a.size()) throw InvalidSize("state vector length must be a power of two");
    if (n > cap) throw ResourceLimit("statevector needs n <= " + std::to_string(cap));
    if (std::abs(a.norm() - 1.0) > 1e-10) throw InvalidArgument("state vector is not normalized");
    return StateVector{n, a};
}

StateVector apply_local_unitary(const StateVector& psi, const CMat& u, const std::vector<int>& support) {
    const Eigen::Index d = Eigen::Index{1} << support.size();
    if (u.rows() != d || u.cols() != d) throw InvalidSize("gate dimension does not match support");
    if ((u.adjoint() * u - CMat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) throw UnitarityError("gate");
    for (int q : support)
        if (q < 0 || q >= psi.n) throw InvalidArgument("gate support out of range");
    StateVector out = psi;
    apply_local(out.amplitudes, u, support, psi.n);
    return out;
}

cplx overlap(const StateVector& phi, const std::vector<LocalGate>& seq) {
    CVec v = phi.amplitudes;
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) apply_local(v, it->matrix, it->support, phi.n);
    return phi.amplitudes.dot(v);
}

double hadamard_prob_from_overlap(cplx f, double theta) {
    if (theta == 0.0) return 0.5 + 0.5 * f.real();
    if (std::abs(theta - 0.5 * std::numbers::pi) < 1e-12) return 0.5 - 0.5 * f.imag();
    throw InvalidArgument("theta must be 0 or pi/2");
}

double hadamard_test_prob(const StateVector& phi, const std::vector<LocalGate>& seq, double theta) {
    return std::clamp(hadamard_prob_from_overlap(overlap(phi, seq), theta), 0.0, 1.0);
}

std::size_t bernoulli_count(double p, std::size_t count, std::uint64_t seed, std::uint64_t stream, ExecPolicy policy) {
    const long chunks = static_cast<long>((count + kChunk - 1) / kChunk);
    std::vector<std::size_t> hits(static_cast<std::size_t>(chunks), 0);
    auto run = [&](long c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        Rng rng = make_rng(seed, stream_id(stream, cc));
        const std::size_t end = std::min(count, (cc + 1) * kChunk);
        std::size_t h = 0;
        for (std::size_t i = cc * kChunk; i < end; ++i) h += uniform01(rng) < p;
        hits[cc] = h;
    };
    if (policy == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
        for (long c = 0; c < chunks; ++c) run(c);
    } else {
        for (long c = 0; c < chunks; ++c) run(c);
    }
    std::size_t total = 0;
    for (auto h : hits) total += h;
    return total;
}

cplx trotterized_overlap(const StateVector& phi, const LocalHamiltonian& h, double duration, const TrotterConfig& t,
                         TimeMode mode) {
    if (h.n() != phi.n) throw InvalidArgument("state and Hamiltonian qubit counts differ");
    if (duration == 0.0) return phi.amplitudes.squaredNorm();
    const TrotterPlan plan = make_plan(h, duration, t.M, t.order, mode, t.scheme);
    return phi.amplitudes.dot(apply_plan(h, plan, phi.amplitudes));
}

cplx estimate_gR(const StateVector& phi, const LocalHamiltonian& h, int k, const QuantumConfig& cfg) {
    if (k < 0) throw InvalidArgument("k must be >= 0");
    if (cfg.num_samples == 0) throw InvalidArgument("|Sigma| must be positive");
    const cplx f = trotterized_overlap(phi, h, k * cfg.dt, cfg.trotter, TimeMode::RealTime);
    const double p0 = std::clamp(hadamard_prob_from_overlap(f, 0.0), 0.0, 1.0);
    const double p1 = std::clamp(hadamard_prob_from_overlap(f, 0.5 * std::numbers::pi), 0.0, 1.0);
    const double s = static_cast<double>(cfg.num_samples);
    const auto uk = static_cast<std::uint64_t>(k);
    const double n0 = static_cast<double>(bernoulli_count(p0, cfg.num_samples, cfg.seed, stream_id(uk, 0), cfg.policy));
    const double n1 = static_cast<double>(bernoulli_count(p1, cfg.num_samples, cfg.seed, stream_id(uk, 1), cfg.policy));
    return cplx(2.0 * n0 / s - 1.0, -(2.0 * n1 / s - 1.0));
}

std::vector<cplx> estimate_gR_series(const StateVector& phi, const LocalHamiltonian& h, int K, const QuantumConfig& cfg) {
    std::vector<cplx> out;
    for (int k = 0; k <= K; ++k) out.push_back(estimate_gR(phi, h, k, cfg));
    return out;
}

Signal exact_signal(const CVec& phi, const CMat& h, double step, int K, SignalKind kind, int cap) {
    const int n = static_cast<int>(std::lround(std::log2(static_cast<double>(h.rows()))));
    if (n > cap) throw ResourceLimit("exact signal needs n <= " + std::to_string(cap));
    if (phi.size() != h.rows()) throw InvalidSize("state and Hamiltonian dimensions differ");
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    const CVec c = es.eigenvectors().adjoint() * phi;
    Signal s;
    s.kind = kind;
    s.map.step = step;
    for (int k = 0; k <= K; ++k) {
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j < c.size(); ++j) {
            const cplx z = energy_to_pole(es.eigenvalues()(j) * step, kind);
            acc += std::norm(c(j)) * std::pow(z, k);
        }
        s.values.push_back(acc);
    }
    return s;
}

}  // namespace evospec
