#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace evospec {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

using Bits = std::uint64_t;

// Qubit q of an n-qubit basis index is bit (n - 1 - q); qubit 0 is the most significant.
inline int qubit_bit(Bits x, int q, int n) { return static_cast<int>((x >> (n - 1 - q)) & 1U); }

// Local index of x restricted to support; support[0] is the most significant local bit.
inline unsigned local_index(Bits x, const std::vector<int>& support, int n) {
    unsigned r = 0;
    for (int q : support) r = (r << 1) | static_cast<unsigned>(qubit_bit(x, q, n));
    return r;
}

// x with its support bits overwritten by the local index b.
inline Bits with_local(Bits x, const std::vector<int>& support, int n, unsigned b) {
    const int m = static_cast<int>(support.size());
    for (int j = 0; j < m; ++j) {
        const Bits mask = Bits{1} << (n - 1 - support[j]);
        if ((b >> (m - 1 - j)) & 1U)
            x |= mask;
        else
            x &= ~mask;
    }
    return x;
}

namespace pauli {
CMat I();
CMat X();
CMat Y();
CMat Z();
}  // namespace pauli

CMat kron(const CMat& a, const CMat& b);

// Embeds a local operator acting on `support` into the full 2^n space.
CMat embed(const CMat& local, const std::vector<int>& support, int n);

// y = local (on support) applied to the statevector v.
void apply_local(CVec& v, const CMat& local, const std::vector<int>& support, int n);

// e^{factor * A} for Hermitian A.
CMat expm_hermitian(const CMat& a, cplx factor);

double spectral_norm(const CMat& a);
double spectral_norm(const RMat& a);

bool is_hermitian(const CMat& a, double tol);

// Moore-Penrose pseudo-inverse with relative cutoff on singular values.
template <typename Mat>
Mat pinv(const Mat& a, typename Mat::RealScalar rel_cut = typename Mat::RealScalar(1e-12));

}  // namespace evospec

#include "evospec/linalg_impl.hpp"
