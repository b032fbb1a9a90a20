#include "evospec/trotter.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "evospec/errors.hpp"

namespace evospec {

namespace {

std::vector<std::vector<int>> scheme_groups(const LocalHamiltonian& h, Scheme scheme) {
    if (scheme == Scheme::Gamma) return h.groups();
    std::vector<std::vector<int>> g;
    for (int i = 0; i < h.num_terms(); ++i) g.push_back({i});
    return g;
}

// Symmetric second-order step with step fraction c: forward then backward, each half.
void append_s2(std::vector<Stage>& out, int num_groups, double c) {
    for (int g = 0; g < num_groups; ++g) out.push_back({g, 0.5 * c});
    for (int g = num_groups - 1; g >= 0; --g) out.push_back({g, 0.5 * c});
}

// Suzuki recursion S_{2k}(c) = S_{2k-2}(u c)^2 S_{2k-2}((1-4u) c) S_{2k-2}(u c)^2.
void append_suzuki(std::vector<Stage>& out, int num_groups, int p, double c) {
    if (p == 2) {
        append_s2(out, num_groups, c);
        return;
    }
    const int k = p / 2;
    const double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
    append_suzuki(out, num_groups, p - 2, u * c);
    append_suzuki(out, num_groups, p - 2, u * c);
    append_suzuki(out, num_groups, p - 2, (1.0 - 4.0 * u) * c);
    append_suzuki(out, num_groups, p - 2, u * c);
    append_suzuki(out, num_groups, p - 2, u * c);
}

TrotterPlan base_plan(const LocalHamiltonian& h, double duration, int M, int p, TimeMode mode, Scheme scheme) {
    if (M < 1) throw InvalidArgument("Trotter variable M must be >= 1");
    if (!(duration >= 0.0)) throw InvalidArgument("duration must be nonnegative");
    TrotterPlan plan;
    plan.order = p;
    plan.M = M;
    plan.mode = mode;
    plan.scheme = scheme;
    plan.duration = duration;
    plan.groups = scheme_groups(h, scheme);
    plan.num_terms = h.num_terms();
    return plan;
}

CMat factor_matrix(const HamiltonianTerm& t, double time, TimeMode mode) {
    const cplx f = mode == TimeMode::RealTime ? cplx(0, -time) : cplx(-time, 0);
    return expm_hermitian(t.matrix, f);
}

double hermitian_lambda_min(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double hermitian_norm(const CMat& m) {
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    const auto& w = es.eigenvalues();
    return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

}  // namespace

long TrotterPlan::L() const {
    long per_step = 0;
    for (const auto& s : stages) per_step += static_cast<long>(groups[static_cast<std::size_t>(s.group)].size());
    return per_step;
}

std::vector<Stage> TrotterPlan::merged_stages() const {
    std::vector<Stage> out;
    for (const auto& s : stages) {
        if (!out.empty() && out.back().group == s.group)
            out.back().coeff += s.coeff;
        else
            out.push_back(s);
    }
    return out;
}

std::vector<double> TrotterPlan::coefficient_sums() const {
    std::vector<double> sums(groups.size(), 0.0);
    for (const auto& s : stages) sums[static_cast<std::size_t>(s.group)] += s.coeff;
    return sums;
}

TrotterPlan first_order_plan(const LocalHamiltonian& h, double duration, int M, TimeMode mode, Scheme scheme) {
    TrotterPlan plan = base_plan(h, duration, M, 1, mode, scheme);
    const int G = static_cast<int>(plan.groups.size());
    for (int m = 0; m < M; ++m)
        for (int g = 0; g < G; ++g) plan.stages.push_back({g, 1.0 / M});
    return plan;
}

TrotterPlan suzuki_plan(const LocalHamiltonian& h, double duration, int M, int p, TimeMode mode, Scheme scheme) {
    if (p < 2 || p % 2 != 0) throw UnsupportedOrder("Suzuki order must be even and >= 2, got " + std::to_string(p));
    TrotterPlan plan = base_plan(h, duration, M, p, mode, scheme);
    const int G = static_cast<int>(plan.groups.size());
    for (int m = 0; m < M; ++m) append_suzuki(plan.stages, G, p, 1.0 / M);
    return plan;
}

TrotterPlan make_plan(const LocalHamiltonian& h, double duration, int M, int p, TimeMode mode, Scheme scheme) {
    if (p == 1) return first_order_plan(h, duration, M, mode, scheme);
    return suzuki_plan(h, duration, M, p, mode, scheme);
}

std::vector<LocalFactor> expand_plan(const TrotterPlan& plan) {
    std::vector<LocalFactor> out;
    out.reserve(static_cast<std::size_t>(plan.L()));
    for (const auto& s : plan.merged_stages())
        for (int t : plan.groups[static_cast<std::size_t>(s.group)]) out.push_back({t, s.coeff * plan.duration});
    return out;
}

CMat dense_plan_operator(const LocalHamiltonian& h, const TrotterPlan& plan, int max_n) {
    if (h.n() > max_n) throw ResourceLimit("dense plan operator needs n <= " + std::to_string(max_n));
    const Eigen::Index dim = Eigen::Index{1} << h.n();
    CMat acc = CMat::Identity(dim, dim);
    std::map<std::pair<int, double>, CMat> cache;
    for (const auto& f : expand_plan(plan)) {
        auto key = std::make_pair(f.term, f.time);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, embed(factor_matrix(h.term(f.term), f.time, plan.mode), h.term(f.term).support, h.n()))
                     .first;
        acc = acc * it->second;
    }
    return acc;
}

CVec apply_plan(const LocalHamiltonian& h, const TrotterPlan& plan, const CVec& v) {
    const auto factors = expand_plan(plan);
    std::map<std::pair<int, double>, CMat> cache;
    CVec out = v;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        auto key = std::make_pair(it->term, it->time);
        auto c = cache.find(key);
        if (c == cache.end()) c = cache.emplace(key, factor_matrix(h.term(it->term), it->time, plan.mode)).first;
        apply_local(out, c->second, h.term(it->term).support, h.n());
    }
    return out;
}

TrotterBound first_order_error_bound(const LocalHamiltonian& h, double duration, int M, TimeMode mode, Scheme scheme) {
    if (M < 1) throw InvalidArgument("Trotter variable M must be >= 1");
    const auto groups = scheme_groups(h, scheme);
    const std::size_t G = groups.size();
    const bool dense = h.n() <= 10;

    std::vector<CMat> gm;
    if (dense) {
        const Eigen::Index dim = Eigen::Index{1} << h.n();
        for (const auto& grp : groups) {
            CMat m = CMat::Zero(dim, dim);
            for (int i : grp) m += embed(h.term(i).matrix, h.term(i).support, h.n());
            gm.push_back(std::move(m));
        }
    }

    TrotterBound out;
    double comm = 0.0;
    for (std::size_t a = 0; a < G; ++a)
        for (std::size_t b = a + 1; b < G; ++b) {
            if (dense) {
                const CMat c = cplx(0, 1) * (gm[a] * gm[b] - gm[b] * gm[a]);
                comm += hermitian_norm((c + c.adjoint()) * 0.5);
            } else {
                for (int i : groups[a])
                    for (int j : groups[b]) comm += commutator_norm(h.term(i), h.term(j));
            }
        }
    out.commutator_sum = comm;
    const double base = comm * duration * duration / (2.0 * M);
    if (mode == TimeMode::RealTime) {
        out.value = base;
        return out;
    }
    out.value = 3.0 * std::numbers::e * std::numbers::e * base;

    constexpr double tol = 1e-10;
    bool valid = true;
    double norm_total = 0.0;
    if (dense) {
        CMat full = CMat::Zero(gm[0].rows(), gm[0].cols());
        for (std::size_t a = 0; a < G; ++a) {
            full += gm[a];
            if (hermitian_lambda_min(gm[a]) < -tol) valid = false;
            norm_total += hermitian_norm(gm[a]);
        }
        if (hermitian_lambda_min(full) < -tol) valid = false;
    } else {
        // Term-wise positivity is sufficient for both norm conditions.
        for (const auto& t : h.terms()) {
            if (term_lambda_min(t) < -tol) valid = false;
            norm_total += term_norm(t);
        }
    }
    if (duration * norm_total / M > 1.0) valid = false;
    out.valid = valid;
    return out;
}

}  // namespace evospec
