#include "evospec/mc_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <omp.h>

#include "evospec/errors.hpp"

namespace evospec {

RVec transition_row(const NonnegativePropagator& p, int a) {
    const Eigen::Index d = p.matrix.rows();
    RVec row = RVec::Zero(d);
    const double lambda = p.lambda_of(a);
    const double phi_a = p.phi_of(a);
    for (Eigen::Index b = 0; b < d; ++b) {
        const double g = p.matrix(a, b);
        if (g == 0.0) continue;
        row(b) = g * p.phi_of(static_cast<int>(b)) / (lambda * phi_a);
    }
    return row;
}

std::vector<std::pair<Bits, double>> transition_distribution(const NonnegativePropagator& p, Bits x, int n) {
    const int a = static_cast<int>(local_index(x, p.support, n));
    const RVec row = transition_row(p, a);
    std::vector<std::pair<Bits, double>> out;
    for (Eigen::Index b = 0; b < row.size(); ++b)
        if (row(b) > 0.0) out.emplace_back(with_local(x, p.support, n, static_cast<unsigned>(b)), row(b));
    return out;
}

RMat q_matrix(const NonnegativePropagator& p) {
    const Eigen::Index d = p.matrix.rows();
    RMat q = RMat::Zero(d, d);
    for (Eigen::Index x = 0; x < d; ++x)
        for (Eigen::Index y = 0; y < d; ++y) {
            const double g = p.matrix(x, y);
            if (g == 0.0) continue;
            q(x, y) = g * p.lambda_of(static_cast<int>(x)) * p.phi_of(static_cast<int>(x)) / p.phi_of(static_cast<int>(y));
        }
    return q;
}

PathSampler::PathSampler(const LocalHamiltonian& h, const TrotterPlan& plan) : n_(h.n()) {
    if (plan.mode != TimeMode::ImaginaryTime) throw InvalidArgument("path sampling needs an imaginary-time plan");
    if (!is_termwise_stoquastic(h)) throw StoquasticityError("Hamiltonian is not termwise stoquastic");
    std::map<std::pair<int, double>, int> index;
    for (const auto& f : expand_plan(plan)) {
        if (f.time == 0.0) continue;  // identity factors
        auto key = std::make_pair(f.term, f.time);
        auto it = index.find(key);
        if (it == index.end()) {
            props_.push_back(local_propagator(h.term(f.term), f.time, f.term));
            const auto& p = props_.back();
            Table t;
            t.m = static_cast<int>(p.support.size());
            if (t.m > 8) throw InvalidSize("term support larger than 8 qubits");
            t.d = 1 << t.m;
            for (int j = 0; j < t.m; ++j) t.shifts[j] = n_ - 1 - p.support[static_cast<std::size_t>(j)];
            const std::size_t dd = static_cast<std::size_t>(t.d) * static_cast<std::size_t>(t.d);
            t.count.assign(static_cast<std::size_t>(t.d), 0);
            t.cum.assign(dd, 0.0);
            t.weight.assign(dd, 0.0);
            t.flip.assign(dd, 0);
            t.out.assign(dd, 0);
            for (int a = 0; a < t.d; ++a) {
                const RVec row = transition_row(p, a);
                double acc = 0.0;
                int c = 0;
                for (int b = 0; b < t.d; ++b) {
                    if (row(b) <= 0.0) continue;
                    const std::size_t s = static_cast<std::size_t>(a * t.d + c);
                    acc += row(b);
                    t.cum[s] = acc;
                    t.weight[s] = p.normalization * p.lambda_of(a) * p.phi_of(a) / p.phi_of(b);
                    t.flip[s] = with_local(0, p.support, n_, static_cast<unsigned>(a ^ b));
                    t.out[s] = b;
                    ++c;
                }
                if (c == 0) throw InvariantViolation("transition row has no successor");
                t.cum[static_cast<std::size_t>(a * t.d + c - 1)] = 1.0;
                t.count[static_cast<std::size_t>(a)] = c;
            }
            tables_.push_back(std::move(t));
            it = index.emplace(key, static_cast<int>(tables_.size()) - 1).first;
        }
        factor_table_.push_back(it->second);
        total_log_norm_ += props_[static_cast<std::size_t>(it->second)].log_normalization;
    }
}

PathSample PathSampler::sample_path(const InputStateAccess& state, Rng& rng) const {
    PathSample ps;
    Bits x = state.sample(rng);
    const Bits x0 = x;
    ps.path.push_back(x);
    double w = 1.0;
    for (int ti : factor_table_) {
        const Table& t = tables_[static_cast<std::size_t>(ti)];
        unsigned a = 0;
        for (int j = 0; j < t.m; ++j) a = (a << 1) | static_cast<unsigned>((x >> t.shifts[j]) & 1U);
        const std::size_t row = static_cast<std::size_t>(a) * static_cast<std::size_t>(t.d);
        const int c = t.count[a];
        int s = 0;
        if (c > 1) {
            const double u = uniform01(rng);
            while (s < c - 1 && u >= t.cum[row + static_cast<std::size_t>(s)]) ++s;
        }
        w *= t.weight[row + static_cast<std::size_t>(s)];
        ps.log_weight_terms.push_back(std::log(t.weight[row + static_cast<std::size_t>(s)]));
        x ^= t.flip[row + static_cast<std::size_t>(s)];
        ps.path.push_back(x);
    }
    ps.R = state.ratio(x0, x) * w;
    return ps;
}

cplx PathSampler::sample_R(const InputStateAccess& state, Rng& rng) const {
    Bits x = state.sample(rng);
    const Bits x0 = x;
    double w = 1.0;
    const Table* tabs = tables_.data();
    for (int ti : factor_table_) {
        const Table& t = tabs[ti];
        unsigned a = 0;
        for (int j = 0; j < t.m; ++j) a = (a << 1) | static_cast<unsigned>((x >> t.shifts[j]) & 1U);
        const std::size_t row = static_cast<std::size_t>(a) * static_cast<std::size_t>(t.d);
        const int c = t.count[a];
        std::size_t s = row;
        if (c > 1) {
            const double u = uniform01(rng);
            const std::size_t last = row + static_cast<std::size_t>(c - 1);
            while (s < last && u >= t.cum[s]) ++s;
        }
        w *= t.weight[s];
        x ^= t.flip[s];
    }
    return state.ratio(x0, x) * w;
}

void PathSampler::sample_chunk(const InputStateAccess& state, std::size_t begin, std::size_t end, std::uint64_t seed,
                               std::uint64_t stream, std::size_t chunk, double* out) const {
    Rng rng = make_rng(seed, stream_id(stream, chunk));
    for (std::size_t i = begin; i < end; ++i) out[i] = sample_R(state, rng).real();
}

std::vector<double> PathSampler::sample_values_serial(const InputStateAccess& state, std::size_t count,
                                                      std::uint64_t seed, std::uint64_t stream) const {
    std::vector<double> out(count);
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < chunks; ++c)
        sample_chunk(state, c * kChunk, std::min(count, (c + 1) * kChunk), seed, stream, c, out.data());
    return out;
}

std::vector<double> PathSampler::sample_values_parallel(const InputStateAccess& state, std::size_t count,
                                                        std::uint64_t seed, std::uint64_t stream) const {
    std::vector<double> out(count);
    const long chunks = static_cast<long>((count + kChunk - 1) / kChunk);
#pragma omp parallel for schedule(dynamic, 1)
    for (long c = 0; c < chunks; ++c) {
        const std::size_t cc = static_cast<std::size_t>(c);
        sample_chunk(state, cc * kChunk, std::min(count, (cc + 1) * kChunk), seed, stream, cc, out.data());
    }
    return out;
}

std::vector<double> PathSampler::sample_values(const InputStateAccess& state, std::size_t count, std::uint64_t seed,
                                               std::uint64_t stream, ExecPolicy policy) const {
    if (state.n() != n_) throw InvalidArgument("state and Hamiltonian qubit counts differ");
    return policy == ExecPolicy::Parallel ? sample_values_parallel(state, count, seed, stream)
                                          : sample_values_serial(state, count, seed, stream);
}

double lower_median(const std::vector<double>& a) {
    if (a.empty()) throw InvalidArgument("median of an empty list");
    const double q = static_cast<double>(a.size());
    for (double ai : a) {
        std::size_t le = 0, ge = 0;
        for (double aj : a) {
            le += aj <= ai;
            ge += aj >= ai;
        }
        if (le >= q / 2.0 && ge >= q / 2.0) return ai;
    }
    throw NumericError("median not found (NaN input?)");
}

std::vector<double> group_means(const std::vector<double>& samples, int q) {
    if (samples.empty()) throw InvalidArgument("median-of-means needs samples");
    if (q < 1 || static_cast<std::size_t>(q) > samples.size()) throw InvalidArgument("group count must be in [1, |samples|]");
    const std::size_t base = samples.size() / static_cast<std::size_t>(q);
    const std::size_t extra = samples.size() % static_cast<std::size_t>(q);
    std::vector<double> means;
    std::size_t pos = 0;
    for (std::size_t g = 0; g < static_cast<std::size_t>(q); ++g) {
        const std::size_t len = base + (g < extra ? 1 : 0);
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += samples[pos + i];
        means.push_back(s / static_cast<double>(len));
        pos += len;
    }
    return means;
}

double median_of_means(const std::vector<double>& samples, int q) { return lower_median(group_means(samples, q)); }

double sample_variance(const std::vector<double>& s) {
    if (s.size() < 2) return 0.0;
    const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    double acc = 0.0;
    for (double v : s) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(s.size() - 1);
}

SignalEstimate summarize(const std::vector<double>& samples, int k, int q, EstimatorKind kind, std::uint64_t seed) {
    SignalEstimate e;
    e.k = k;
    e.num_samples = samples.size();
    e.estimator = kind;
    e.seed = seed;
    e.sample_variance = sample_variance(samples);
    e.stderr_proxy = std::sqrt(e.sample_variance / static_cast<double>(std::max<std::size_t>(samples.size(), 1)));
    if (kind == EstimatorKind::MedianOfMeans) {
        e.q = q;
        e.group_means = group_means(samples, q);
        e.value = lower_median(e.group_means);
    } else {
        e.q = 1;
        e.group_means = group_means(samples, 1);
        e.value = e.group_means[0];
    }
    return e;
}

std::vector<SignalEstimate> estimate_signal(const InputStateAccess& state, const LocalHamiltonian& h, const McConfig& cfg) {
    if (cfg.K < 0) throw InvalidArgument("K must be >= 0");
    if (cfg.num_samples == 0) throw InvalidArgument("|Sigma| must be positive");
    if (!(cfg.step > 0.0)) throw InvalidArgument("time step must be positive");
    std::vector<SignalEstimate> out;
    for (int k = 0; k <= cfg.K; ++k) {
        const TrotterPlan plan = make_plan(h, k * cfg.step, cfg.trotter.M, cfg.trotter.order, TimeMode::ImaginaryTime,
                                           cfg.trotter.scheme);
        const PathSampler sampler(h, plan);
        const auto values =
            sampler.sample_values(state, cfg.num_samples, cfg.seed, static_cast<std::uint64_t>(k), cfg.policy);
        out.push_back(summarize(values, k, cfg.q, cfg.estimator, cfg.seed));
    }
    return out;
}

std::string to_string(EstimatorKind k) { return k == EstimatorKind::MedianOfMeans ? "median_of_means" : "empirical_mean"; }

EstimatorKind estimator_from_string(const std::string& s) {
    if (s == "median_of_means") return EstimatorKind::MedianOfMeans;
    if (s == "empirical_mean") return EstimatorKind::EmpiricalMean;
    throw ConfigError("unknown estimator kind '" + s + "'");
}

}  // namespace evospec
