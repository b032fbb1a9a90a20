#include "evospec/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "evospec/errors.hpp"
#include "json.hpp"

namespace evospec {

namespace {

constexpr double kHermTol = 1e-12;

// Maps both terms onto the union of their supports.
void joint_embed(const HamiltonianTerm& a, const HamiltonianTerm& b, CMat& ea, CMat& eb) {
    std::vector<int> joint = a.support;
    for (int q : b.support)
        if (std::find(joint.begin(), joint.end(), q) == joint.end()) joint.push_back(q);
    const int m = static_cast<int>(joint.size());
    auto relabel = [&](const std::vector<int>& s) {
        std::vector<int> r;
        for (int q : s) r.push_back(static_cast<int>(std::find(joint.begin(), joint.end(), q) - joint.begin()));
        return r;
    };
    ea = embed(a.matrix, relabel(a.support), m);
    eb = embed(b.matrix, relabel(b.support), m);
}

bool overlaps(const HamiltonianTerm& a, const HamiltonianTerm& b) {
    for (int q : a.support)
        if (std::find(b.support.begin(), b.support.end(), q) != b.support.end()) return true;
    return false;
}

double hermitian_norm(const CMat& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

}  // namespace

HamiltonianTerm make_term(std::vector<int> support, const CMat& matrix, int n) {
    std::set<int> seen;
    for (int q : support) {
        if (q < 0 || q >= n) throw InvalidArgument("term support index out of range");
        if (!seen.insert(q).second) throw InvalidArgument("term support indices must be distinct");
    }
    const Eigen::Index d = Eigen::Index{1} << support.size();
    if (matrix.rows() != d || matrix.cols() != d) throw InvalidSize("term matrix dimension does not match support");
    if (!is_hermitian(matrix, kHermTol)) throw InvalidArgument("term matrix is not Hermitian");
    CMat sym = (matrix + matrix.adjoint()) * 0.5;
    return HamiltonianTerm{std::move(support), std::move(sym)};
}

LocalHamiltonian::LocalHamiltonian(int n, std::vector<HamiltonianTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ < 1 || n_ > 62) throw InvalidSize("qubit count must be in [1, 62]");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        bool placed = false;
        for (auto& grp : groups_) {
            const bool ok = std::all_of(grp.begin(), grp.end(),
                                        [&](int j) { return terms_commute(terms_[i], terms_[static_cast<std::size_t>(j)]); });
            if (ok) {
                grp.push_back(static_cast<int>(i));
                placed = true;
                break;
            }
        }
        if (!placed) groups_.push_back({static_cast<int>(i)});
    }
}

LocalHamiltonian::LocalHamiltonian(int n, std::vector<HamiltonianTerm> terms, std::vector<std::vector<int>> groups)
    : n_(n), terms_(std::move(terms)), groups_(std::move(groups)) {
    if (n_ < 1 || n_ > 62) throw InvalidSize("qubit count must be in [1, 62]");
    std::vector<int> count(terms_.size(), 0);
    for (const auto& grp : groups_) {
        for (int i : grp) {
            if (i < 0 || i >= static_cast<int>(terms_.size())) throw InvalidArgument("group refers to missing term");
            ++count[static_cast<std::size_t>(i)];
        }
        for (std::size_t a = 0; a < grp.size(); ++a)
            for (std::size_t b = a + 1; b < grp.size(); ++b)
                if (!terms_commute(terms_[static_cast<std::size_t>(grp[a])], terms_[static_cast<std::size_t>(grp[b])]))
                    throw InvalidArgument("terms within a group do not commute");
    }
    for (int c : count)
        if (c != 1) throw InvalidArgument("groups must partition the terms");
}

LocalHamiltonian build_tfim(int n, double J, double g, Boundary boundary) {
    if (n < 2) throw InvalidSize("TFIM needs n >= 2");
    if (boundary == Boundary::Periodic && n < 3) throw InvalidSize("periodic TFIM needs n >= 3");
    if (!(J > 0.0)) throw InvalidArgument("TFIM coupling J must be positive");
    if (!(g >= 0.0)) throw InvalidArgument("TFIM field g must be nonnegative");
    using namespace pauli;
    const CMat bond = -J * (kron(Z(), Z()) + g * kron(X(), I()));
    std::vector<HamiltonianTerm> terms;
    const int bonds = boundary == Boundary::Open ? n - 1 : n;
    for (int i = 0; i < bonds; ++i) terms.push_back(make_term({i, (i + 1) % n}, bond, n));
    if (boundary == Boundary::Open) terms.push_back(make_term({n - 1}, -J * g * X(), n));
    return LocalHamiltonian(n, std::move(terms));
}

bool is_stoquastic(const CMat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (i == j) continue;
            if (m(i, j).real() > 1e-12 || std::abs(m(i, j).imag()) > 1e-12) return false;
        }
    return true;
}

bool is_termwise_stoquastic(const LocalHamiltonian& h) {
    return std::all_of(h.terms().begin(), h.terms().end(), [](const HamiltonianTerm& t) { return is_stoquastic(t.matrix); });
}

bool terms_commute(const HamiltonianTerm& a, const HamiltonianTerm& b, double tol) {
    if (!overlaps(a, b)) return true;
    CMat ea, eb;
    joint_embed(a, b, ea, eb);
    const double scale = std::max(1.0, ea.cwiseAbs().maxCoeff() * eb.cwiseAbs().maxCoeff());
    return (ea * eb - eb * ea).cwiseAbs().maxCoeff() <= tol * scale;
}

double commutator_norm(const HamiltonianTerm& a, const HamiltonianTerm& b) {
    if (!overlaps(a, b)) return 0.0;
    CMat ea, eb;
    joint_embed(a, b, ea, eb);
    // i[A, B] is Hermitian for Hermitian A, B.
    const CMat c = cplx(0, 1) * (ea * eb - eb * ea);
    return hermitian_norm((c + c.adjoint()) * 0.5);
}

CMat dense_matrix(const LocalHamiltonian& h, int max_n) {
    if (h.n() > max_n) throw ResourceLimit("dense assembly needs n <= " + std::to_string(max_n));
    const Eigen::Index dim = Eigen::Index{1} << h.n();
    CMat full = CMat::Zero(dim, dim);
    for (const auto& t : h.terms()) full += embed(t.matrix, t.support, h.n());
    return full;
}

CMat group_matrix(const LocalHamiltonian& h, int group, int max_n) {
    if (h.n() > max_n) throw ResourceLimit("dense assembly needs n <= " + std::to_string(max_n));
    const Eigen::Index dim = Eigen::Index{1} << h.n();
    CMat full = CMat::Zero(dim, dim);
    for (int i : h.groups()[static_cast<std::size_t>(group)]) full += embed(h.term(i).matrix, h.term(i).support, h.n());
    return full;
}

std::vector<double> exact_spectrum(const LocalHamiltonian& h, int max_n) {
    const CMat full = dense_matrix(h, max_n);
    Eigen::SelfAdjointEigenSolver<CMat> es(full, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("dense eigensolver failed");
    const RVec& w = es.eigenvalues();
    return std::vector<double>(w.data(), w.data() + w.size());
}

double term_norm(const HamiltonianTerm& t) { return hermitian_norm(t.matrix); }

double term_lambda_min(const HamiltonianTerm& t) {
    Eigen::SelfAdjointEigenSolver<CMat> es(t.matrix, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double norm_sum(const LocalHamiltonian& h) {
    double s = 0.0;
    for (const auto& t : h.terms()) s += term_norm(t);
    return s;
}

ShiftedHamiltonian shift_terms(const LocalHamiltonian& h) {
    ShiftedHamiltonian out;
    std::vector<HamiltonianTerm> terms;
    for (const auto& t : h.terms()) {
        const double lmin = term_lambda_min(t);
        const Eigen::Index d = t.matrix.rows();
        terms.push_back(HamiltonianTerm{t.support, t.matrix - lmin * CMat::Identity(d, d)});
        out.per_term_shift.push_back(lmin);
        out.total_shift += lmin;
    }
    out.base = LocalHamiltonian(h.n(), std::move(terms), h.groups());
    return out;
}

std::string to_json(const LocalHamiltonian& h) {
    nlohmann::json j;
    j["n"] = h.n();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : h.terms()) {
        nlohmann::json m = nlohmann::json::array();
        for (Eigen::Index r = 0; r < t.matrix.rows(); ++r)
            for (Eigen::Index c = 0; c < t.matrix.cols(); ++c) m.push_back({t.matrix(r, c).real(), t.matrix(r, c).imag()});
        j["terms"].push_back({{"support", t.support}, {"matrix", m}});
    }
    j["groups"] = h.groups();
    return j.dump(2);
}

LocalHamiltonian hamiltonian_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("hamiltonian JSON: ") + e.what());
    }
    try {
        const int n = j.at("n").get<int>();
        std::vector<HamiltonianTerm> terms;
        for (const auto& jt : j.at("terms")) {
            auto support = jt.at("support").get<std::vector<int>>();
            const Eigen::Index d = Eigen::Index{1} << support.size();
            const auto& flat = jt.at("matrix");
            if (static_cast<Eigen::Index>(flat.size()) != d * d) throw ConfigError("term matrix has wrong entry count");
            CMat m(d, d);
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index c = 0; c < d; ++c) {
                    const auto& e = flat[static_cast<std::size_t>(r * d + c)];
                    m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
                }
            terms.push_back(make_term(std::move(support), m, n));
        }
        if (j.contains("groups")) return LocalHamiltonian(n, std::move(terms), j.at("groups").get<std::vector<std::vector<int>>>());
        return LocalHamiltonian(n, std::move(terms));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("hamiltonian JSON: ") + e.what());
    }
}

}  // namespace evospec
