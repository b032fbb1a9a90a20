#include "evospec/vandermonde.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "evospec/errors.hpp"

namespace evospec {

namespace {

void check_distinct(const std::vector<cplx>& z) {
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (z[i] == z[j]) throw NumericError("repeated pole makes the Vandermonde matrix singular");
}

using Wide = boost::multiprecision::cpp_bin_float_50;

// Gauss-Jordan inverse with partial pivoting; 50 significant digits.
std::vector<std::vector<Wide>> wide_inverse(std::vector<std::vector<Wide>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<Wide>> inv(n, std::vector<Wide>(n, Wide(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0) throw NumericError("singular Vandermonde matrix");
        std::swap(a[c], a[piv]);
        std::swap(inv[c], inv[piv]);
        const Wide d = a[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Wide f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace

CMat vandermonde(const std::vector<cplx>& z, int L) {
    if (L < 0) throw InvalidArgument("L must be >= 0");
    CMat v(L + 1, static_cast<Eigen::Index>(z.size()));
    for (std::size_t j = 0; j < z.size(); ++j) {
        cplx p = 1.0;
        for (int i = 0; i <= L; ++i) {
            v(i, static_cast<Eigen::Index>(j)) = p;
            p *= z[j];
        }
    }
    return v;
}

double gautschi_inverse_norm(const std::vector<double>& z) {
    std::vector<cplx> zc(z.begin(), z.end());
    check_distinct(zc);
    double best = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double p = 1.0;
        for (std::size_t j = 0; j < z.size(); ++j)
            if (j != i) p *= (1.0 + std::abs(z[j])) / std::abs(z[j] - z[i]);
        best = std::max(best, p);
    }
    return best;
}

double inverse_inf_norm(const std::vector<double>& z, int L) {
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<cplx> zc(z.begin(), z.end());
    check_distinct(zc);
    const Eigen::Index S = static_cast<Eigen::Index>(z.size());
    LMat v(L + 1, S);
    for (Eigen::Index j = 0; j < S; ++j) {
        long double p = 1.0L;
        for (int i = 0; i <= L; ++i) {
            v(i, j) = p;
            p *= static_cast<long double>(z[static_cast<std::size_t>(j)]);
        }
    }
    if (L + 1 == S) {
        std::vector<std::vector<Wide>> a(static_cast<std::size_t>(S), std::vector<Wide>(static_cast<std::size_t>(S)));
        for (std::size_t j = 0; j < z.size(); ++j) {
            Wide p = 1;
            for (std::size_t i = 0; i < z.size(); ++i) {
                a[i][j] = p;
                p *= Wide(z[j]);
            }
        }
        const auto inv = wide_inverse(std::move(a));
        Wide best = 0;
        for (const auto& row : inv) {
            Wide s = 0;
            for (const auto& e : row) s += abs(e);
            if (s > best) best = s;
        }
        return static_cast<double>(best);
    }
    const LMat inv = pinv<LMat>(v, 1e-18L);
    return static_cast<double>(inv.cwiseAbs().rowwise().sum().maxCoeff());
}

VandermondeDiagnostics vandermonde_diagnostics(const std::vector<cplx>& z, int L) {
    check_distinct(z);
    const CMat v = vandermonde(z, L);
    Eigen::JacobiSVD<CMat> svd(v);
    const auto& s = svd.singularValues();
    VandermondeDiagnostics d;
    d.norm = s(0);
    d.sigma_min = s(s.size() - 1);
    d.condition = d.sigma_min > 0.0 ? d.norm / d.sigma_min : std::numeric_limits<double>::infinity();
    const bool real_positive =
        std::all_of(z.begin(), z.end(), [](const cplx& c) { return c.imag() == 0.0 && c.real() > 0.0; });
    if (real_positive && static_cast<std::size_t>(L + 1) == z.size()) {
        std::vector<double> zr;
        for (const auto& c : z) zr.push_back(c.real());
        d.gautschi = gautschi_inverse_norm(zr);
    }
    return d;
}

}  // namespace evospec
