#include "evospec/dequant.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <unordered_map>

#include "evospec/errors.hpp"

namespace evospec {

CMat RescaledHamiltonian::dense(int max_n) const {
    const CMat h = dense_matrix(base, max_n);
    return scale * (h + shift * CMat::Identity(h.rows(), h.cols()));
}

RescaledHamiltonian rescale_into_half_band(const LocalHamiltonian& h) {
    RescaledHamiltonian r;
    r.base = h;
    const double bound = norm_sum(h);
    const double lower = -bound, upper = bound;
    if (upper - lower > 0.0) {
        r.shift = -lower;
        r.scale = std::numbers::pi / (upper - lower);
    }
    return r;
}

cplx path_expansion_value(const InputStateAccess& state, const RescaledHamiltonian& h, int k, Bits x0,
                          std::size_t node_budget) {
    if (k < 0) throw InvalidArgument("k must be >= 0");
    const int n = h.base.n();
    const double two_pi = 2.0 * std::numbers::pi;
    const double diag = 1.0 - h.scale * h.shift / two_pi;
    const double coef = -h.scale / two_pi;

    std::unordered_map<Bits, cplx> v{{x0, 1.0}}, next;
    std::size_t nodes = 0;
    for (int l = 0; l < k; ++l) {
        next.clear();
        next.reserve(v.size() * 4);
        for (const auto& [z, vz] : v) {
            if (diag != 0.0) next[z] += vz * diag;
            for (const auto& t : h.base.terms()) {
                const unsigned a = local_index(z, t.support, n);
                for (Eigen::Index b = 0; b < t.matrix.cols(); ++b) {
                    const cplx hab = t.matrix(a, b);
                    if (hab == cplx(0)) continue;
                    next[with_local(z, t.support, n, static_cast<unsigned>(b))] += vz * coef * hab;
                    if (++nodes > node_budget)
                        throw ResourceLimit("path expansion node budget exceeded at k = " + std::to_string(k));
                }
            }
        }
        v.swap(next);
    }
    cplx r = 0.0;
    for (const auto& [y, vy] : v)
        if (vy != cplx(0)) r += vy * state.ratio(x0, y);
    return r;
}

std::vector<double> dequant_samples(const InputStateAccess& state, const RescaledHamiltonian& h, int k,
                                    const DequantConfig& cfg) {
    if (state.n() != h.base.n()) throw InvalidArgument("state and Hamiltonian qubit counts differ");
    const std::size_t count = cfg.num_samples;
    std::vector<double> out(count);
    const long chunks = static_cast<long>((count + kChunk - 1) / kChunk);
    // R(x0) is deterministic, so each chunk memoizes it per starting string.
    auto run = [&](long c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        Rng rng = make_rng(cfg.seed, stream_id(static_cast<std::uint64_t>(k), cc));
        std::unordered_map<Bits, double> memo;
        const std::size_t end = std::min(count, (cc + 1) * kChunk);
        for (std::size_t i = cc * kChunk; i < end; ++i) {
            const Bits x0 = state.sample(rng);
            auto it = memo.find(x0);
            if (it == memo.end())
                it = memo.emplace(x0, path_expansion_value(state, h, k, x0, cfg.node_budget).real()).first;
            out[i] = it->second;
        }
    };
    if (cfg.policy == ExecPolicy::Parallel) {
        // Exceptions must not escape the parallel region.
        std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 1)
        for (long c = 0; c < chunks; ++c) {
            try {
                run(c);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (long c = 0; c < chunks; ++c) run(c);
    }
    return out;
}

SignalEstimate estimate_gD(const InputStateAccess& state, const RescaledHamiltonian& h, int k, const DequantConfig& cfg) {
    if (cfg.num_samples == 0) throw InvalidArgument("|Sigma| must be positive");
    if (k == 0) {
        SignalEstimate e = summarize(std::vector<double>(cfg.num_samples, 1.0), 0, cfg.q, cfg.estimator, cfg.seed);
        return e;
    }
    return summarize(dequant_samples(state, h, k, cfg), k, cfg.q, cfg.estimator, cfg.seed);
}

double exact_gD(const CVec& phi, const RescaledHamiltonian& h, int k) {
    const CMat hp = h.dense();
    const CMat a = CMat::Identity(hp.rows(), hp.cols()) - hp / (2.0 * std::numbers::pi);
    CVec v = phi;
    for (int l = 0; l < k; ++l) v = a * v;
    return phi.dot(v).real();
}

}  // namespace evospec
