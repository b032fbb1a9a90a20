#include "evospec/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "evospec/errors.hpp"

namespace evospec {

namespace pauli {
CMat I() { return CMat::Identity(2, 2); }
CMat X() {
    CMat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMat Y() {
    CMat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
CMat Z() {
    CMat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

CMat embed(const CMat& local, const std::vector<int>& support, int n) {
    const Bits dim = Bits{1} << n;
    const Eigen::Index d = local.rows();
    CMat full = CMat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Bits x = 0; x < dim; ++x) {
        const unsigned c = local_index(x, support, n);
        for (Eigen::Index r = 0; r < d; ++r) {
            const cplx v = local(r, c);
            if (v == cplx(0)) continue;
            full(static_cast<Eigen::Index>(with_local(x, support, n, static_cast<unsigned>(r))),
                 static_cast<Eigen::Index>(x)) += v;
        }
    }
    return full;
}

void apply_local(CVec& v, const CMat& local, const std::vector<int>& support, int n) {
    const Bits dim = Bits{1} << n;
    const Eigen::Index d = local.rows();
    CVec in(d), out(d);
    std::vector<Bits> idx(static_cast<std::size_t>(d));
    for (Bits x = 0; x < dim; ++x) {
        if (local_index(x, support, n) != 0) continue;
        for (Eigen::Index r = 0; r < d; ++r) {
            idx[static_cast<std::size_t>(r)] = with_local(x, support, n, static_cast<unsigned>(r));
            in(r) = v(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]));
        }
        out.noalias() = local * in;
        for (Eigen::Index r = 0; r < d; ++r) v(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)])) = out(r);
    }
}

CMat expm_hermitian(const CMat& a, cplx factor) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed in expm_hermitian");
    const RVec& w = es.eigenvalues();
    CVec e(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) e(i) = std::exp(factor * w(i));
    return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const CMat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMat> svd(a);
    return svd.singularValues()(0);
}

double spectral_norm(const RMat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<RMat> svd(a);
    return svd.singularValues()(0);
}

bool is_hermitian(const CMat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace evospec
