#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "evospec/dequant.hpp"
#include "evospec/errors.hpp"

using namespace evospec;

namespace {

constexpr double kPi = std::numbers::pi;

CMat step_matrix(const RescaledHamiltonian& h) {
    const Eigen::Index d = Eigen::Index{1} << h.base.n();
    return CMat::Identity(d, d) - h.dense() / (2 * kPi);
}

// Sum over every path without merging intermediate strings.
cplx naive_paths(const CMat& a, const CVec& phi, Bits x, Bits x0, int depth) {
    if (depth == 0) return phi(static_cast<Eigen::Index>(x)) / phi(static_cast<Eigen::Index>(x0));
    cplx acc = 0.0;
    for (Eigen::Index y = 0; y < a.cols(); ++y) {
        const cplx w = a(static_cast<Eigen::Index>(x), y);
        if (w != 0.0) acc += w * naive_paths(a, phi, static_cast<Bits>(y), x0, depth - 1);
    }
    return acc;
}

}  // namespace

TEST_CASE("rescale into the half band") {
    SUBCASE("single -Z term maps to {0, pi}") {
        const auto r = rescale_into_half_band(LocalHamiltonian(1, {make_term({0}, -pauli::Z(), 1)}));
        CHECK(r.shift == doctest::Approx(1.0));
        CHECK(r.scale == doctest::Approx(kPi / 2));
        Eigen::SelfAdjointEigenSolver<CMat> es(r.dense());
        CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(es.eigenvalues()(1) == doctest::Approx(kPi).epsilon(1e-12));
        CHECK(r.to_physical(0.0) == doctest::Approx(-1.0));
        CHECK(r.to_physical(kPi) == doctest::Approx(1.0));
    }
    SUBCASE("zero Hamiltonian") {
        const auto r = rescale_into_half_band(LocalHamiltonian(2, {make_term({0, 1}, CMat::Zero(4, 4), 2)}));
        Eigen::SelfAdjointEigenSolver<CMat> es(r.dense());
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        CHECK(es.eigenvalues().maxCoeff() <= kPi + 1e-12);
    }
    SUBCASE("tfim spectra lie in [0, pi]") {
        for (double g : {0.5, 1.0, 4.0}) {
            const auto r = rescale_into_half_band(build_tfim(6, 1.0, g));
            Eigen::SelfAdjointEigenSolver<CMat> es(r.dense());
            CHECK(es.eigenvalues().minCoeff() >= -1e-9);
            CHECK(es.eigenvalues().maxCoeff() <= kPi + 1e-9);
            const auto phys = exact_spectrum(build_tfim(6, 1.0, g));
            CHECK(r.to_physical(es.eigenvalues()(0)) == doctest::Approx(phys[0]).epsilon(1e-10));
        }
    }
}

TEST_CASE("path expansion equals naive enumeration and the dense row") {
    const auto r = rescale_into_half_band(build_tfim(4, 1.0, 2.0));
    const CMat a = step_matrix(r);
    for (const auto& s : {product_plus(4), phi_optimal(4)}) {
        const CVec phi = s->dense();
        for (int k = 0; k <= 3; ++k) {
            CMat ak = CMat::Identity(16, 16);
            for (int i = 0; i < k; ++i) ak = ak * a;
            for (Bits x0 = 0; x0 < 16; ++x0) {
                if (phi(static_cast<Eigen::Index>(x0)) == 0.0) continue;  // never sampled
                const cplx v = path_expansion_value(*s, r, k, x0);
                const cplx dense_row = ak.row(static_cast<Eigen::Index>(x0)).dot(phi.conjugate()) /
                                       phi(static_cast<Eigen::Index>(x0));
                CHECK(std::abs(v - dense_row) < 1e-12);
                if (k == 3) CHECK(std::abs(v - naive_paths(a, phi, x0, x0, 3)) < 1e-12);
            }
        }
    }
}

TEST_CASE("the exact mean of R is the dense signal") {
    const auto r = rescale_into_half_band(build_tfim(4, 1.0, 3.0));
    const auto s = phi_optimal(4);
    const CVec phi = s->dense();
    for (int k = 0; k <= 4; ++k) {
        double mean = 0.0, second = 0.0;
        for (Bits x = 0; x < 16; ++x) {
            if (phi(static_cast<Eigen::Index>(x)) == 0.0) continue;
            const double v = path_expansion_value(*s, r, k, x).real();
            mean += std::norm(phi(static_cast<Eigen::Index>(x))) * v;
            second += std::norm(phi(static_cast<Eigen::Index>(x))) * v * v;
        }
        CHECK(std::abs(mean - exact_gD(phi, r, k)) < 1e-12);
        CHECK(second <= 1.0 + 1e-12);
    }
}

TEST_CASE("trivial cases give exactly one") {
    const auto r = rescale_into_half_band(build_tfim(5, 1.0, 4.0));
    DequantConfig cfg;
    cfg.num_samples = 200;
    CHECK(estimate_gD(*phi_optimal(5), r, 0, cfg).value == 1.0);
    const auto zero = rescale_into_half_band(LocalHamiltonian(3, {make_term({1, 2}, CMat::Zero(4, 4), 3)}));
    for (int k : {0, 1, 5}) {
        const auto v = dequant_samples(*product_plus(3), zero, k, cfg);
        for (double x : v) CHECK(x == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(exact_gD(phi_optimal(5)->dense(), r, 0) == doctest::Approx(1.0));
}

TEST_CASE("estimates within 4 sqrt(q/|S|) of the dense signal, n = 5") {
    const auto r = rescale_into_half_band(build_tfim(5, 1.0, 4.0));
    const auto s = phi_optimal(5);
    DequantConfig cfg;
    cfg.num_samples = 10000;
    cfg.q = 8;
    cfg.seed = 12;
    for (int k = 0; k <= 4; ++k) {
        const auto e = estimate_gD(*s, r, k, cfg);
        CHECK(std::abs(e.value - exact_gD(s->dense(), r, k)) <= 4.0 * std::sqrt(cfg.q / 1e4));
        CHECK(e.sample_variance <= 1.05);
        CHECK(e.k == k);
        CHECK(e.q == 8);
    }
}

TEST_CASE("serial and parallel samples agree") {
    const auto r = rescale_into_half_band(build_tfim(5, 1.0, 2.0));
    DequantConfig cfg;
    cfg.num_samples = 2 * kChunk + 5;
    cfg.seed = 4;
    auto serial = cfg;
    serial.policy = ExecPolicy::Serial;
    CHECK(dequant_samples(*phi_optimal(5), r, 3, cfg) == dequant_samples(*phi_optimal(5), r, 3, serial));
}

TEST_CASE("node budget and validation") {
    const auto r = rescale_into_half_band(build_tfim(6, 1.0, 2.0));
    try {
        path_expansion_value(*phi_optimal(6), r, 3, 0, 20);
        FAIL("expected a resource limit");
    } catch (const ResourceLimit& e) {
        CHECK(std::string(e.what()).find("k = 3") != std::string::npos);
    }
    DequantConfig cfg;
    cfg.num_samples = 10;
    cfg.node_budget = 20;
    CHECK_THROWS_AS(estimate_gD(*phi_optimal(6), r, 3, cfg), ResourceLimit);
    CHECK_THROWS_AS(path_expansion_value(*phi_optimal(6), r, -1, 0), InvalidArgument);
    cfg.num_samples = 0;
    CHECK_THROWS_AS(estimate_gD(*phi_optimal(6), r, 1, cfg), InvalidArgument);
    CHECK_THROWS_AS(dequant_samples(*phi_optimal(5), r, 1, DequantConfig{}), InvalidArgument);
}
