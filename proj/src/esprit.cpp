#include "evospec/esprit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "evospec/errors.hpp"
#include "json.hpp"

namespace evospec {

namespace {

// Subspace steps run in extended precision; clustered decaying poles lose
// several digits in double.
using LReal = long double;
using LCplx = std::complex<LReal>;
using LMat = Eigen::Matrix<LCplx, Eigen::Dynamic, Eigen::Dynamic>;

struct HankelSvd {
    int K = 0;
    int L = 0;
    LMat U;
    LMat V;
    std::vector<double> sigma;
};

HankelSvd hankel_svd(const std::vector<cplx>& y) {
    HankelSvd h;
    h.K = static_cast<int>(y.size()) - 1;
    if (h.K < 0) throw InvalidArgument("empty signal");
    if (h.K % 2 != 0) throw DomainError("K must be even");
    h.L = h.K / 2;
    LMat H(h.L + 1, h.K - h.L + 1);
    for (int i = 0; i <= h.L; ++i)
        for (int j = 0; j <= h.K - h.L; ++j) {
            const cplx v = y[static_cast<std::size_t>(i + j)];
            H(i, j) = LCplx(v.real(), v.imag());
        }
    Eigen::JacobiSVD<LMat> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericError("Hankel SVD failed");
    h.U = svd.matrixU();
    h.V = svd.matrixV();
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        h.sigma.push_back(static_cast<double>(svd.singularValues()(i)));
    return h;
}

std::vector<cplx> eigenvalues(const LMat& m) {
    Eigen::ComplexEigenSolver<LMat> es(m, false);
    if (es.info() != Eigen::Success) throw NumericError("pole eigensolver failed");
    std::vector<cplx> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const LCplx z = es.eigenvalues()(i);
        out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return out;
}

int order_from_tf(const std::vector<double>& sigma, double TF) {
    if (!(TF > 0.0 && TF < 1.0)) throw DomainError("truncation factor must lie in (0, 1)");
    const double smax = sigma.empty() ? 0.0 : sigma.front();
    int s = 0;
    for (double v : sigma) s += (smax > 0.0 && v >= TF * smax);
    if (s == 0) throw EmptyModelError("no singular value above TF * sigma_max");
    return s;
}

SpectralEstimate esprit_core(const HankelSvd& h, int S) {
    if (S < 1) throw InvalidArgument("model order must be >= 1");
    if (S > h.L) throw RankError("model order " + std::to_string(S) + " exceeds L = " + std::to_string(h.L));
    const LMat Us = h.U.leftCols(S);
    const LMat U0 = Us.topRows(h.L);
    const LMat U1 = Us.bottomRows(h.L);
    const LMat psi = pinv<LMat>(U0, LReal(1e-12)) * U1;
    SpectralEstimate est;
    est.poles = eigenvalues(psi);
    est.S_effective = S;
    est.singular_values = h.sigma;
    return est;
}

SpectralEstimate pencil_core(const HankelSvd& h, int S) {
    if (S < 1) throw InvalidArgument("model order must be >= 1");
    if (S > h.L) throw RankError("model order " + std::to_string(S) + " exceeds L = " + std::to_string(h.L));
    const LMat Wh = h.V.leftCols(S).adjoint();  // S x (K-L+1)
    const Eigen::Index cols = Wh.cols();
    const LMat W1 = Wh.leftCols(cols - 1);
    const LMat W2 = Wh.rightCols(cols - 1);
    const LMat m = W2 * pinv<LMat>(W1, LReal(1e-12));
    SpectralEstimate est;
    est.poles = eigenvalues(m);
    est.S_effective = S;
    est.singular_values = h.sigma;
    return est;
}

}  // namespace

CMat hankel(const std::vector<cplx>& y, int L) {
    const int K = static_cast<int>(y.size()) - 1;
    if (L < 0 || L > K) throw InvalidArgument("pencil parameter L out of range");
    CMat H(L + 1, K - L + 1);
    for (int i = 0; i <= L; ++i)
        for (int j = 0; j <= K - L; ++j) H(i, j) = y[static_cast<std::size_t>(i + j)];
    return H;
}

SpectralEstimate esprit(const std::vector<cplx>& y, int S) { return esprit_core(hankel_svd(y), S); }

SpectralEstimate filtered_esprit(const std::vector<cplx>& y, double TF) {
    const HankelSvd h = hankel_svd(y);
    SpectralEstimate est = esprit_core(h, order_from_tf(h.sigma, TF));
    est.TF = TF;
    return est;
}

SpectralEstimate matrix_pencil(const std::vector<cplx>& y, int S, double TF) {
    const HankelSvd h = hankel_svd(y);
    if (S > 0) return pencil_core(h, S);
    SpectralEstimate est = pencil_core(h, order_from_tf(h.sigma, TF));
    est.TF = TF;
    return est;
}

std::vector<double> poles_to_energies(const std::vector<cplx>& poles, SignalKind kind, const EnergyMap& map,
                                      bool* warning) {
    if (!(map.step > 0.0) || !(map.scale > 0.0)) throw DomainError("energy map needs positive step and scale");
    std::vector<double> out;
    for (const cplx& z : poles) {
        if (z == cplx(0)) throw DomainError("pole at zero");
        if (warning && kind != SignalKind::RealTime && std::abs(std::arg(z)) > 0.1) *warning = true;
        const double raw = pole_to_raw_energy(z, kind);
        out.push_back((raw / map.step - map.rate_correction) / map.scale + map.offset);
    }
    return out;
}

void apply_energy_map(SpectralEstimate& est, SignalKind kind, const EnergyMap& map) {
    est.kind = kind;
    bool warn = false;
    est.energies = poles_to_energies(est.poles, kind, map, &warn);
    est.complex_pole_warning = warn;
}

MatchResult match(const std::vector<double>& a, const std::vector<double>& b) {
    const std::vector<double>& shorter = a.size() <= b.size() ? a : b;
    const std::vector<double>& longer = a.size() <= b.size() ? b : a;
    MatchResult r;
    r.unmatched = longer.size() - shorter.size();
    const std::size_t m = shorter.size(), n = longer.size();
    if (m == 0) return r;
    const double two_pi = 2.0 * std::numbers::pi;

    if (n <= 8) {
        // Exhaustive over injective maps shorter -> longer.
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double worst = 0.0;
            for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, std::abs(shorter[i] - longer[static_cast<std::size_t>(perm[i])]));
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        r.distance = best / two_pi;
        return r;
    }

    // Bottleneck assignment: smallest threshold admitting a matching that saturates the shorter side.
    std::vector<double> cand;
    for (double x : shorter)
        for (double y : longer) cand.push_back(std::abs(x - y));
    std::sort(cand.begin(), cand.end());
    auto feasible = [&](double thr) {
        std::vector<int> owner(n, -1);
        std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t i, std::vector<char>& seen) {
            for (std::size_t j = 0; j < n; ++j) {
                if (seen[j] || std::abs(shorter[i] - longer[j]) > thr) continue;
                seen[j] = 1;
                if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
                    owner[j] = static_cast<int>(i);
                    return true;
                }
            }
            return false;
        };
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<char> seen(n, 0);
            if (!augment(i, seen)) return false;
        }
        return true;
    };
    std::size_t lo = 0, hi = cand.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (feasible(cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    r.distance = cand[lo] / two_pi;
    return r;
}

double matching_distance(const std::vector<double>& a, const std::vector<double>& b) { return match(a, b).distance; }

double coverage_distance(const std::vector<double>& e_true, const std::vector<double>& e_est) {
    if (e_est.empty()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (double e : e_true) {
        double best = std::numeric_limits<double>::infinity();
        for (double f : e_est) best = std::min(best, std::abs(e - f));
        worst = std::max(worst, best);
    }
    return worst / (2.0 * std::numbers::pi);
}

double eigenvalue_gap(const std::vector<double>& e) {
    if (e.size() < 2) throw InvalidArgument("gap needs at least two eigenvalues");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) best = std::min(best, std::abs(e[i] - e[j]));
    return best / (2.0 * std::numbers::pi);
}

std::string to_json(const SpectralEstimate& est) {
    nlohmann::json j;
    j["poles"] = nlohmann::json::array();
    for (const auto& z : est.poles) j["poles"].push_back({{"re", z.real()}, {"im", z.imag()}});
    j["energies"] = est.energies;
    j["singular_values"] = est.singular_values;
    j["S_effective"] = est.S_effective;
    j["TF"] = est.TF;
    j["kind"] = to_string(est.kind);
    j["complex_pole_warning"] = est.complex_pole_warning;
    return j.dump(2);
}

}  // namespace evospec
