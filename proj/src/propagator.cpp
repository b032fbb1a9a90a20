#include "evospec/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "evospec/errors.hpp"

namespace evospec {

namespace {

constexpr double kClamp = 1e-14;

// Union-find components of the pattern {(i, j) : pred(i, j)}.
template <typename Pred>
std::vector<std::vector<int>> components(int d, Pred pred) {
    std::vector<int> parent(static_cast<std::size_t>(d));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
        return i;
    };
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j && pred(i, j)) parent[static_cast<std::size_t>(find(i))] = find(j);
    std::vector<std::vector<int>> out;
    std::vector<int> label(static_cast<std::size_t>(d), -1);
    for (int i = 0; i < d; ++i) {
        const int r = find(i);
        if (label[static_cast<std::size_t>(r)] < 0) {
            label[static_cast<std::size_t>(r)] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(label[static_cast<std::size_t>(r)])].push_back(i);
    }
    return out;
}

RMat submatrix(const RMat& m, const std::vector<int>& idx) {
    const Eigen::Index k = static_cast<Eigen::Index>(idx.size());
    RMat s(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) s(a, b) = m(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
    return s;
}

RMat kron(const RMat& a, const RMat& b) {
    RMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return r;
}

}  // namespace

std::pair<double, RVec> perron_pair(const RMat& block) {
    const Eigen::Index d = block.rows();
    if (d == 0 || block.cols() != d) throw InvalidArgument("Perron pair needs a nonempty square block");
    if (d == 1) return {block(0, 0), RVec::Ones(1)};
    double lambda = 0.0;
    RVec phi;
    const double scale = std::max(1.0, block.cwiseAbs().maxCoeff());
    if ((block - block.transpose()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
        Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (block + block.transpose()));
        if (es.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
        lambda = es.eigenvalues()(d - 1);
        phi = es.eigenvectors().col(d - 1);
    } else {
        Eigen::EigenSolver<RMat> es(block);
        if (es.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < d; ++i)
            if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
        lambda = es.eigenvalues()(best).real();
        phi = es.eigenvectors().col(best).real();
        phi.normalize();
    }
    if (phi.sum() < 0) phi = -phi;
    if (phi.minCoeff() <= 0.0) throw NumericError("Perron vector is not strictly positive; block is not irreducible");
    const double resid = (block * phi - lambda * phi).norm();
    if (resid > 1e-10 * std::max(1.0, std::abs(lambda))) throw NumericError("Perron residual too large");
    return {lambda, phi};
}

std::vector<IrreducibleBlock> decompose_blocks(const RMat& g) {
    if (g.rows() != g.cols()) throw InvalidArgument("propagator must be square");
    if (g.size() && g.minCoeff() < 0.0) throw InvalidArgument("propagator must be elementwise nonnegative");
    const int d = static_cast<int>(g.rows());
    std::vector<IrreducibleBlock> out;
    for (auto& states : components(d, [&](int i, int j) { return g(i, j) > 0.0 || g(j, i) > 0.0; })) {
        IrreducibleBlock b;
        b.states = std::move(states);
        b.matrix = submatrix(g, b.states);
        auto [lambda, phi] = perron_pair(b.matrix);
        b.perron_value = lambda;
        b.perron_vector = std::move(phi);
        out.push_back(std::move(b));
    }
    return out;
}

NonnegativePropagator local_propagator(const HamiltonianTerm& term, double tau, int term_index) {
    if (!(tau >= 0.0)) throw InvalidArgument("imaginary time step must be nonnegative");
    if (!is_stoquastic(term.matrix)) throw StoquasticityError("term has positive or complex off-diagonal entries");
    const RMat h = term.matrix.real();
    const int d = static_cast<int>(h.rows());
    const double hs = std::max(1.0, h.cwiseAbs().maxCoeff());

    // Exponentiate per connected component of H so cross-block entries are exactly zero.
    RMat g = RMat::Zero(d, d);
    for (const auto& comp : components(d, [&](int i, int j) { return std::abs(h(i, j)) > 1e-15 * hs; })) {
        const RMat hb = submatrix(h, comp);
        Eigen::SelfAdjointEigenSolver<RMat> es(hb);
        if (es.info() != Eigen::Success) throw NumericError("term eigensolver failed");
        const RVec e = (-tau * es.eigenvalues().array()).exp();
        const RMat gb = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
        for (std::size_t a = 0; a < comp.size(); ++a)
            for (std::size_t b = 0; b < comp.size(); ++b)
                g(comp[a], comp[b]) = gb(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (g(i, j) >= 0.0) continue;
            if (g(i, j) < -kClamp) throw StoquasticityError("propagator has a negative entry");
            g(i, j) = 0.0;
        }

    NonnegativePropagator p;
    p.support = term.support;
    p.term = term_index;
    p.tau = tau;
    p.blocks = decompose_blocks(g);
    double top = 0.0;
    for (const auto& b : p.blocks) top = std::max(top, b.perron_value);
    if (!(top > 0.0)) throw NumericError("propagator has no positive eigenvalue");
    p.normalization = top;
    p.log_normalization = std::log(top);
    p.matrix = g / top;
    for (auto& b : p.blocks) {
        b.matrix /= top;
        b.perron_value /= top;
    }
    p.block_of.assign(static_cast<std::size_t>(d), -1);
    p.slot_of.assign(static_cast<std::size_t>(d), -1);
    for (std::size_t bi = 0; bi < p.blocks.size(); ++bi)
        for (std::size_t s = 0; s < p.blocks[bi].states.size(); ++s) {
            p.block_of[static_cast<std::size_t>(p.blocks[bi].states[s])] = static_cast<int>(bi);
            p.slot_of[static_cast<std::size_t>(p.blocks[bi].states[s])] = static_cast<int>(s);
        }
    return p;
}

RMat symmetrize(const RMat& g, Parity parity) {
    if (g.rows() != g.cols()) throw InvalidArgument("symmetrize needs a square matrix");
    if (g.size() && g.minCoeff() < 0.0) throw InvalidArgument("symmetrize needs a nonnegative matrix");
    Eigen::JacobiSVD<RMat> svd(g);
    if (svd.singularValues().size() && svd.singularValues()(0) > 1.0 + 1e-12)
        throw ScalingError("singular values exceed 1");
    RMat e01 = RMat::Zero(2, 2), e10 = RMat::Zero(2, 2);
    e01(0, 1) = 1.0;
    e10(1, 0) = 1.0;
    if (parity == Parity::Odd) return kron(g, e01) + kron(g.transpose(), e10);
    return kron(g, e10) + kron(g.transpose(), e01);
}

RMat ancilla_element(const RMat& f, int a, int b) {
    const Eigen::Index d = f.rows() / 2;
    RMat out(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out(i, j) = f(2 * i + a, 2 * j + b);
    return out;
}

}  // namespace evospec
