#include "evospec/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "evospec/errors.hpp"

namespace evospec {

namespace {

std::size_t draw_index(const std::vector<double>& cdf, Rng& rng) {
    const double u = uniform01(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cdf.begin());
    return std::min(i, cdf.size() - 1);
}

class ProductPlus final : public InputStateAccess {
public:
    explicit ProductPlus(int n) : n_(n), amp_(std::pow(2.0, -0.5 * n)) {}
    int n() const override { return n_; }
    Bits sample(Rng& rng) const override { return rng() >> (64 - n_); }
    cplx ratio(Bits, Bits) const override { return 1.0; }
    cplx amplitude(Bits) const override { return amp_; }
    std::string kind() const override { return "plus_product"; }

private:
    int n_;
    double amp_;
};

class PhiOptimal final : public InputStateAccess {
public:
    explicit PhiOptimal(int n) : n_(n) {
        for (int w = 0; w <= n; ++w) amp_.push_back(phi_optimal_amplitude(n, w));
        const auto marginal = hamming_weight_marginal(n);
        std::partial_sum(marginal.begin(), marginal.end(), std::back_inserter(cdf_));
    }
    int n() const override { return n_; }
    Bits sample(Rng& rng) const override {
        const int w = static_cast<int>(draw_index(cdf_, rng));
        return random_fixed_weight(n_, w, rng);
    }
    cplx ratio(Bits x, Bits y) const override {
        const double ax = amp_[static_cast<std::size_t>(popcount(x))];
        if (ax == 0.0) throw InvariantViolation("amplitude ratio with Phi(x) = 0");
        return amp_[static_cast<std::size_t>(popcount(y))] / ax;
    }
    cplx amplitude(Bits x) const override { return amp_[static_cast<std::size_t>(popcount(x))]; }
    std::string kind() const override { return "phi_optimal"; }

private:
    int n_;
    std::vector<double> amp_;
    std::vector<double> cdf_;
};

class DenseState final : public InputStateAccess {
public:
    explicit DenseState(const CVec& a) : amp_(a) {
        const double dim = static_cast<double>(a.size());
        n_ = static_cast<int>(std::lround(std::log2(dim)));
        if (n_ < 1 || (Eigen::Index{1} << n_) != a.size()) throw InvalidSize("dense state length must be a power of two");
        const double norm = a.norm();
        if (std::abs(norm - 1.0) > 1e-10) throw InvalidArgument("dense state is not normalized");
        double acc = 0.0;
        for (Eigen::Index i = 0; i < a.size(); ++i) cdf_.push_back(acc += std::norm(a(i)));
    }
    int n() const override { return n_; }
    Bits sample(Rng& rng) const override { return draw_index(cdf_, rng); }
    cplx ratio(Bits x, Bits y) const override {
        const cplx ax = amp_(static_cast<Eigen::Index>(x));
        if (ax == cplx(0)) throw InvariantViolation("amplitude ratio with Phi(x) = 0");
        return amp_(static_cast<Eigen::Index>(y)) / ax;
    }
    cplx amplitude(Bits x) const override { return amp_(static_cast<Eigen::Index>(x)); }
    std::string kind() const override { return "dense"; }

private:
    int n_ = 0;
    CVec amp_;
    std::vector<double> cdf_;
};

}  // namespace

CVec InputStateAccess::dense(int max_n) const {
    if (n() > max_n) throw ResourceLimit("dense state vector needs n <= " + std::to_string(max_n));
    const Bits dim = Bits{1} << n();
    CVec v(static_cast<Eigen::Index>(dim));
    for (Bits x = 0; x < dim; ++x) v(static_cast<Eigen::Index>(x)) = amplitude(x);
    return v;
}

int popcount(Bits x) { return std::popcount(x); }

double phi_optimal_amplitude(int n, int w) {
    const double a = 1.0 / n + 1.0 / std::sqrt(static_cast<double>(n));
    const double b = 1.0 / n - 1.0 / std::sqrt(static_cast<double>(n));
    return std::pow(2.0, -0.5 * (n + 1)) * (a * (n - w) + b * w);
}

std::vector<double> hamming_weight_marginal(int n) {
    if (n < 1) throw InvalidSize("n must be >= 1");
    std::vector<double> p;
    double binom = 1.0;
    for (int w = 0; w <= n; ++w) {
        const double a = phi_optimal_amplitude(n, w);
        p.push_back(binom * a * a);
        binom = binom * (n - w) / (w + 1);
    }
    return p;
}

Bits random_fixed_weight(int n, int w, Rng& rng) {
    if (w < 0 || w > n) throw InvalidArgument("weight out of range");
    int pos[64];
    std::iota(pos, pos + n, 0);
    Bits x = 0;
    for (int i = 0; i < w; ++i) {
        int j = i + static_cast<int>(uniform01(rng) * (n - i));
        if (j >= n) j = n - 1;
        std::swap(pos[i], pos[j]);
        x |= Bits{1} << (n - 1 - pos[i]);
    }
    return x;
}

StatePtr product_plus(int n) {
    if (n < 1 || n > 62) throw InvalidSize("n must be in [1, 62]");
    return std::make_shared<ProductPlus>(n);
}

StatePtr phi_optimal(int n) {
    if (n < 1 || n > 62) throw InvalidSize("n must be in [1, 62]");
    return std::make_shared<PhiOptimal>(n);
}

StatePtr dense_state(const CVec& amplitudes) { return std::make_shared<DenseState>(amplitudes); }

StatePtr make_state(const std::string& kind, int n) {
    if (kind == "plus_product") return product_plus(n);
    if (kind == "phi_optimal") return phi_optimal(n);
    throw ConfigError("unknown state kind '" + kind + "'");
}

}  // namespace evospec
