#include "doctest.h"

#include <cmath>
#include <numbers>

#include "evospec/errors.hpp"
#include "evospec/quantum_sim.hpp"

using namespace evospec;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector basis(int n, Bits x) {
    CVec a = CVec::Zero(Eigen::Index{1} << n);
    a(static_cast<Eigen::Index>(x)) = 1.0;
    return make_state_vector(a);
}

CMat random_unitary(int d, Rng& rng) {
    CMat a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    return Eigen::HouseholderQR<CMat>(a).householderQ();
}

StateVector random_state(int n, Rng& rng) {
    CVec a(Eigen::Index{1} << n);
    for (auto& v : a) v = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    return make_state_vector(a.normalized());
}

}  // namespace

TEST_CASE("apply_local_unitary") {
    SUBCASE("identity leaves the state unchanged") {
        Rng rng = make_rng(1);
        const auto psi = random_state(3, rng);
        CHECK((apply_local_unitary(psi, CMat::Identity(4, 4), {0, 2}).amplitudes - psi.amplitudes).norm() == 0.0);
    }
    SUBCASE("X on qubit 0 of |00> gives |10>") {
        const auto out = apply_local_unitary(basis(2, 0b00), pauli::X(), {0});
        CHECK(std::abs(out.amplitudes(0b10) - 1.0) < 1e-15);
    }
    SUBCASE("support order follows the local index convention") {
        // CNOT with control = first support qubit
        CMat cnot = CMat::Zero(4, 4);
        cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
        CHECK(std::abs(apply_local_unitary(basis(3, 0b001), cnot, {2, 0}).amplitudes(0b101) - 1.0) < 1e-15);
        CHECK(std::abs(apply_local_unitary(basis(3, 0b001), cnot, {0, 2}).amplitudes(0b001) - 1.0) < 1e-15);
    }
    SUBCASE("matches the embedded dense operator and preserves the norm") {
        Rng rng = make_rng(2);
        for (int t = 0; t < 10; ++t) {
            const auto psi = random_state(4, rng);
            const CMat u = random_unitary(4, rng);
            const std::vector<int> sup{3, 1};
            const auto out = apply_local_unitary(psi, u, sup);
            CHECK((out.amplitudes - embed(u, sup, 4) * psi.amplitudes).norm() < 1e-12);
            CHECK(std::abs(out.amplitudes.norm() - 1.0) < 1e-10);
        }
    }
    SUBCASE("disjoint supports commute") {
        Rng rng = make_rng(3);
        const auto psi = random_state(4, rng);
        const CMat a = random_unitary(2, rng), b = random_unitary(4, rng);
        const auto ab = apply_local_unitary(apply_local_unitary(psi, a, {0}), b, {1, 3});
        const auto ba = apply_local_unitary(apply_local_unitary(psi, b, {1, 3}), a, {0});
        CHECK((ab.amplitudes - ba.amplitudes).norm() < 1e-12);
    }
    SUBCASE("errors") {
        const auto psi = basis(2, 0);
        CHECK_THROWS_AS(apply_local_unitary(psi, 2.0 * pauli::X(), {0}), UnitarityError);
        CHECK_THROWS_AS(apply_local_unitary(psi, pauli::X(), {0, 1}), InvalidSize);
        CHECK_THROWS_AS(apply_local_unitary(psi, pauli::X(), {2}), InvalidArgument);
    }
}

TEST_CASE("make_state_vector validation") {
    CHECK_THROWS_AS(make_state_vector(CVec::Ones(3).normalized()), InvalidSize);
    CHECK_THROWS_AS(make_state_vector(CVec::Ones(4)), InvalidArgument);
    CHECK_THROWS_AS(make_state_vector(CVec::Ones(32).normalized(), 4), ResourceLimit);
}

TEST_CASE("overlap applies the last gate first") {
    Rng rng = make_rng(4);
    const auto phi = random_state(3, rng);
    const std::vector<LocalGate> seq{{{0, 1}, random_unitary(4, rng)}, {{1, 2}, random_unitary(4, rng)}};
    const CMat g = embed(seq[0].matrix, seq[0].support, 3) * embed(seq[1].matrix, seq[1].support, 3);
    CHECK(std::abs(overlap(phi, seq) - phi.amplitudes.dot(g * phi.amplitudes)) < 1e-12);
}

TEST_CASE("hadamard test probabilities") {
    Rng rng = make_rng(5);
    const auto phi = random_state(3, rng);
    CHECK(hadamard_test_prob(phi, {}, 0.0) == doctest::Approx(1.0));
    CHECK(hadamard_test_prob(phi, {}, kPi / 2) == doctest::Approx(0.5));
    CHECK(hadamard_test_prob(basis(1, 0), {{{0}, pauli::X()}}, 0.0) == doctest::Approx(0.5));
    CHECK(hadamard_prob_from_overlap(cplx(0.2, 0.6), 0.0) == doctest::Approx(0.6));
    CHECK(hadamard_prob_from_overlap(cplx(0.2, 0.6), kPi / 2) == doctest::Approx(0.2));
    CHECK_THROWS_AS(hadamard_prob_from_overlap(1.0, 1.0), InvalidArgument);
    for (int t = 0; t < 20; ++t) {
        const std::vector<LocalGate> seq{{{0, 2}, random_unitary(4, rng)}};
        for (double th : {0.0, kPi / 2}) {
            const double p = hadamard_test_prob(phi, seq, th);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
}

TEST_CASE("hadamard probabilities match an explicit ancilla circuit") {
    // H on ancilla, controlled-U, phase e^{i theta} on the ancilla, H, measure 0.
    Rng rng = make_rng(6);
    const auto phi = random_state(2, rng);
    const CMat u = random_unitary(4, rng);
    for (double th : {0.0, kPi / 2}) {
        const cplx ph = std::exp(cplx(0, th));
        const CVec branch0 = phi.amplitudes, branch1 = ph * (u * phi.amplitudes);
        const double p0 = 0.25 * (branch0 + branch1).squaredNorm();
        CHECK(std::abs(hadamard_test_prob(phi, {{{0, 1}, u}}, th) - p0) < 1e-12);
    }
}

TEST_CASE("bernoulli counts") {
    CHECK(bernoulli_count(1.0, 1000, 1, 0, ExecPolicy::Serial) == 1000);
    CHECK(bernoulli_count(0.0, 1000, 1, 0, ExecPolicy::Serial) == 0);
    const std::size_t n = 5 * kChunk + 17;
    const auto a = bernoulli_count(0.3, n, 9, 4, ExecPolicy::Serial);
    CHECK(a == bernoulli_count(0.3, n, 9, 4, ExecPolicy::Parallel));
    const double z = (static_cast<double>(a) - 0.3 * n) / std::sqrt(0.21 * n);
    CHECK(std::abs(z) < 5.0);
}

TEST_CASE("trotterized overlap matches the dense plan") {
    const auto h = build_tfim(4, 1.0, 4.0);
    const auto phi = make_state_vector(phi_optimal(4)->dense());
    TrotterConfig t{1, 10, Scheme::Gamma};
    for (auto mode : {TimeMode::RealTime, TimeMode::ImaginaryTime}) {
        const CMat g = dense_plan_operator(h, make_plan(h, 0.7, 10, 1, mode));
        CHECK(std::abs(trotterized_overlap(phi, h, 0.7, t, mode) - phi.amplitudes.dot(g * phi.amplitudes)) < 1e-12);
    }
    CHECK(std::abs(trotterized_overlap(phi, h, 0.0, t, TimeMode::RealTime) - 1.0) < 1e-14);
}

TEST_CASE("estimate_gR") {
    const auto h = build_tfim(5, 1.0, 4.0);
    const auto phi = make_state_vector(phi_optimal(5)->dense());
    QuantumConfig cfg;
    cfg.dt = 0.3;
    cfg.trotter.M = 20;
    cfg.num_samples = 10000;

    SUBCASE("k = 0 has real part exactly one") {
        const cplx e = estimate_gR(phi, h, 0, cfg);
        CHECK(e.real() == 1.0);
        CHECK(std::abs(e.imag()) < 5.0 / std::sqrt(1e4));
    }
    SUBCASE("within 4 sqrt(2/|S|) of the Trotterized overlap") {
        const cplx exact = trotterized_overlap(phi, h, 3 * cfg.dt, cfg.trotter, TimeMode::RealTime);
        int pass = 0;
        for (std::uint64_t rep = 0; rep < 30; ++rep) {
            cfg.seed = rep;
            pass += std::abs(estimate_gR(phi, h, 3, cfg) - exact) <= 4.0 * std::sqrt(2.0 / 1e4);
        }
        CHECK(pass >= 28);
    }
    SUBCASE("serial equals parallel; series matches single calls") {
        cfg.seed = 77;
        auto s = cfg;
        s.policy = ExecPolicy::Serial;
        const auto series = estimate_gR_series(phi, h, 3, cfg);
        REQUIRE(series.size() == 4);
        for (int k = 0; k <= 3; ++k) {
            CHECK(series[static_cast<std::size_t>(k)] == estimate_gR(phi, h, k, s));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(estimate_gR(phi, h, -1, cfg), InvalidArgument);
        cfg.num_samples = 0;
        CHECK_THROWS_AS(estimate_gR(phi, h, 1, cfg), InvalidArgument);
    }
}

TEST_CASE("estimate_gR converges at large sample size, n = 4") {
    const auto h = build_tfim(4, 1.0, 4.0);
    const auto phi = make_state_vector(phi_optimal(4)->dense());
    QuantumConfig cfg;
    cfg.dt = 0.3;
    cfg.trotter.M = 20;
    cfg.num_samples = 1000000;
    cfg.seed = 3;
    for (int k : {1, 4}) {
        const cplx exact = trotterized_overlap(phi, h, k * cfg.dt, cfg.trotter, TimeMode::RealTime);
        CHECK(std::abs(estimate_gR(phi, h, k, cfg) - exact) < 5e-3);
    }
}

TEST_CASE("exact signal") {
    const auto h = build_tfim(5, 1.0, 2.0);
    const CMat hd = dense_matrix(h);
    Rng rng = make_rng(7);
    const CVec phi = random_state(5, rng).amplitudes;
    for (auto kind : {SignalKind::RealTime, SignalKind::ImaginaryTime, SignalKind::OneMinusH}) {
        const auto s = exact_signal(phi, hd, 0.2, 4, kind);
        REQUIRE(s.values.size() == 5);
        CHECK(std::abs(s.values[0] - 1.0) < 1e-12);
        CHECK(s.kind == kind);
    }
    SUBCASE("matches matrix exponentials and powers") {
        const auto rt = exact_signal(phi, hd, 0.2, 4, SignalKind::RealTime);
        const auto it = exact_signal(phi, hd, 0.2, 4, SignalKind::ImaginaryTime);
        const auto om = exact_signal(phi, hd, 0.2, 4, SignalKind::OneMinusH);
        const CMat step = CMat::Identity(32, 32) - 0.2 * hd / (2 * kPi);
        CMat pw = CMat::Identity(32, 32);
        for (int k = 0; k <= 4; ++k) {
            CHECK(std::abs(rt.values[static_cast<std::size_t>(k)] - phi.dot(expm_hermitian(hd, cplx(0, -0.2 * k)) * phi)) < 1e-10);
            CHECK(std::abs(it.values[static_cast<std::size_t>(k)] - phi.dot(expm_hermitian(hd, cplx(-0.2 * k, 0)) * phi)) < 1e-10);
            CHECK(std::abs(om.values[static_cast<std::size_t>(k)] - phi.dot(pw * phi)) < 1e-10);
            pw = pw * step;
        }
    }
    SUBCASE("diagonal H with a basis state") {
        RMat d = RMat::Zero(4, 4);
        d.diagonal() << 0.1, 0.5, 0.9, 1.3;
        CVec e = CVec::Zero(4);
        e(2) = 1.0;
        const auto rt = exact_signal(e, d.cast<cplx>(), 0.5, 3, SignalKind::RealTime);
        const auto it = exact_signal(e, d.cast<cplx>(), 0.5, 3, SignalKind::ImaginaryTime);
        for (int k = 0; k <= 3; ++k) {
            CHECK(std::abs(rt.values[static_cast<std::size_t>(k)] - std::exp(cplx(0, -0.9 * 0.5 * k))) < 1e-14);
            CHECK(std::abs(it.values[static_cast<std::size_t>(k)] - std::exp(-0.9 * 0.5 * k)) < 1e-14);
        }
    }
    SUBCASE("spectral form agrees with exact_spectrum, n = 7") {
        const auto h7 = shift_terms(build_tfim(7, 1.0, 4.0)).base;
        const CMat hd7 = dense_matrix(h7);
        const CVec p7 = phi_optimal(7)->dense();
        const auto s = exact_signal(p7, hd7, 0.3, 6, SignalKind::ImaginaryTime);
        const auto levels = exact_spectrum(h7);
        Eigen::SelfAdjointEigenSolver<CMat> es(hd7);
        for (int k = 0; k <= 6; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < levels.size(); ++j)
                acc += std::norm(es.eigenvectors().col(static_cast<Eigen::Index>(j)).dot(p7)) * std::exp(-0.3 * k * levels[j]);
            CHECK(std::abs(s.values[static_cast<std::size_t>(k)].real() - acc) < 1e-10);
        }
    }
    CHECK_THROWS_AS(exact_signal(phi, hd, 0.2, 2, SignalKind::RealTime, 4), ResourceLimit);
    CHECK_THROWS_AS(exact_signal(CVec::Ones(4), hd, 0.2, 2, SignalKind::RealTime), InvalidSize);
}
