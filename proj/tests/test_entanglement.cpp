#include "doctest.h"

#include <cmath>
#include <numbers>

#include "djc/entanglement.hpp"
#include "test_helpers.hpp"

using namespace djc;
namespace tt = djc::testing;

namespace {

DensityMatrix two_qubit(const ComplexMatrix& m) { return {m, {2, 2}}; }

DensityMatrix pure_atom_pair(double alpha) {
    // cos(a)|uu> + sin(a)|dd>
    ComplexMatrix rho(4, 4);
    const double c = std::cos(alpha), s = std::sin(alpha);
    rho(0, 0) = c * c;
    rho(3, 3) = s * s;
    rho(0, 3) = rho(3, 0) = c * s;
    return two_qubit(rho);
}

EntanglementTrace synthetic_trace(const std::vector<double>& tau,
                                  const std::vector<double>& conc) {
    EntanglementTrace t;
    t.tau = tau;
    t.concurrence_atoms = conc;
    t.negativity_cavities.assign(tau.size(), 0.0);
    t.norm.assign(tau.size(), 1.0);
    return t;
}

}  // namespace

TEST_CASE("concurrence: Bell state and maximally mixed state") {
    CHECK(concurrence(pure_atom_pair(std::numbers::pi / 4)) == doctest::Approx(1.0).epsilon(1e-10));

    ComplexMatrix mixed(4, 4);
    for (std::size_t i = 0; i < 4; ++i) mixed(i, i) = 0.25;
    CHECK(concurrence(two_qubit(mixed)) == 0.0);
}

TEST_CASE("concurrence: pure superposition gives |sin 2a|") {
    // the X-dispatching route is exact on these states
    CHECK(std::abs(concurrence_auto(pure_atom_pair(std::numbers::pi / 12)) - 0.5) < 1e-12);
    for (double alpha : {0.0, 0.1, 0.35, 0.7, 1.2, 1.5}) {
        const double expected = std::abs(std::sin(2.0 * alpha));
        CHECK(std::abs(concurrence_auto(pure_atom_pair(alpha)) - expected) < 1e-12);
        // the spectral Wootters route carries a sqrt-of-zero-eigenvalue
        // floor of about 1e-8 on pure states
        CHECK(std::abs(concurrence(pure_atom_pair(alpha)) - expected) < 1e-7);
    }
}

TEST_CASE("concurrence: rejects wrong dimensions and unphysical inputs") {
    DensityMatrix bad{ComplexMatrix::identity(3), {3}};
    CHECK_THROWS_AS(concurrence(bad), std::invalid_argument);

    ComplexMatrix negative(4, 4);
    negative(0, 0) = 1.1;
    negative(1, 1) = -0.1;  // far beyond roundoff
    CHECK_THROWS_AS(concurrence(two_qubit(negative)), std::runtime_error);
}

TEST_CASE("concurrence: tiny negative populations are clipped") {
    ComplexMatrix almost(4, 4);
    almost(0, 0) = 0.5 + 5e-9;
    almost(3, 3) = 0.5 + 5e-9;
    almost(1, 1) = -5e-9;
    almost(2, 2) = -5e-9;
    almost(0, 3) = almost(3, 0) = 0.5;
    CHECK(concurrence(two_qubit(almost)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("concurrence_x: closed-form cases") {
    ComplexMatrix bell(4, 4);
    bell(0, 0) = bell(3, 3) = 0.5;
    bell(0, 3) = bell(3, 0) = 0.5;
    CHECK(concurrence_x(two_qubit(bell)) == doctest::Approx(1.0).epsilon(1e-12));

    ComplexMatrix separable(4, 4);
    separable(0, 0) = separable(3, 3) = 0.25;
    separable(1, 1) = separable(2, 2) = 0.25;
    separable(0, 3) = separable(3, 0) = 0.1;  // |r14| < sqrt(r22 r33)
    CHECK(concurrence_x(two_qubit(separable)) == 0.0);
}

TEST_CASE("concurrence_x: agrees with Wootters on 500 random X states") {
    auto gen = tt::rng(501);
    for (int rep = 0; rep < 500; ++rep) {
        // half with populated inner coherence, as the Ising and XY dynamics produce
        const DensityMatrix rho = two_qubit(tt::random_x_state(gen, rep % 2 == 0));
        const double direct = concurrence(rho);
        const double closed = concurrence_x(rho);
        CHECK(std::abs(direct - closed) < 1e-10);
    }
}

TEST_CASE("concurrence_x: X-structure violation names the offending entry") {
    ComplexMatrix broken(4, 4);
    broken(0, 0) = broken(1, 1) = broken(2, 2) = broken(3, 3) = 0.25;
    broken(0, 1) = broken(1, 0) = 0.05;
    try {
        concurrence_x(two_qubit(broken));
        FAIL("expected a rejection");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
    }
}

TEST_CASE("negativity: Bell pair, product state, qutrit pair") {
    ComplexMatrix bell(4, 4);
    bell(0, 0) = bell(3, 3) = 0.5;
    bell(0, 3) = bell(3, 0) = 0.5;
    CHECK(negativity(two_qubit(bell), 2, 2) == doctest::Approx(0.5).epsilon(1e-12));

    // any product state has vanishing negativity
    auto gen = tt::rng(502);
    const std::vector<Complex> a = tt::random_state(gen, 3);
    const std::vector<Complex> b = tt::random_state(gen, 3);
    ComplexMatrix prod(9, 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    prod(i * 3 + j, k * 3 + l) =
                        a[i] * b[j] * std::conj(a[k]) * std::conj(b[l]);
    CHECK(negativity({prod, {3, 3}}, 3, 3) < 1e-12);

    // maximally entangled two-qutrit state: negativity 1, and the partial
    // transpose spectrum is the brute-force {1/3 x6, -1/3 x3} multiset
    ComplexMatrix max_ent(9, 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) max_ent(i * 3 + i, k * 3 + k) = 1.0 / 3.0;
    CHECK(negativity({max_ent, {3, 3}}, 3, 3) == doctest::Approx(1.0).epsilon(1e-11));

    ComplexMatrix pt(9, 9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                for (std::size_t l = 0; l < 3; ++l)
                    pt(i * 3 + j, k * 3 + l) = max_ent(i * 3 + l, k * 3 + j);
    const auto eig = herm_eig(pt);
    int minus = 0, plus = 0;
    for (double v : eig.eigenvalues) {
        if (std::abs(v - 1.0 / 3.0) < 1e-12) ++plus;
        if (std::abs(v + 1.0 / 3.0) < 1e-12) ++minus;
    }
    CHECK(plus == 6);
    CHECK(minus == 3);
}

TEST_CASE("negativity: invariant under local unitaries") {
    auto gen = tt::rng(503);
    const std::vector<Complex> psi = tt::random_state(gen, 9);
    ComplexMatrix rho(9, 9);
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
    const double base = negativity({rho, {3, 3}}, 3, 3);

    for (int rep = 0; rep < 5; ++rep) {
        const ComplexMatrix u = kron(tt::random_unitary(gen, 3), tt::random_unitary(gen, 3));
        const ComplexMatrix rotated = u * rho * u.adjoint();
        CHECK(std::abs(negativity({rotated, {3, 3}}, 3, 3) - base) < 1e-10);
    }
}

TEST_CASE("negativity: dimension mismatch rejected") {
    CHECK_THROWS_AS(negativity({ComplexMatrix::identity(6), {2, 3}}, 2, 2),
                    std::invalid_argument);
}

TEST_CASE("dark_periods: strictly positive trace yields nothing") {
    std::vector<double> tau, conc;
    for (int i = 0; i <= 100; ++i) {
        tau.push_back(0.1 * i);
        conc.push_back(0.2 + 0.1 * std::sin(0.3 * i));
    }
    CHECK(dark_periods(synthetic_trace(tau, conc)).empty());
}

TEST_CASE("dark_periods: a zero plateau is found with interpolated endpoints") {
    std::vector<double> tau, conc;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 0.01 * i;
        tau.push_back(t);
        conc.push_back((t >= 3.0 && t <= 5.0) ? 0.0 : 0.5);
    }
    const auto periods = dark_periods(synthetic_trace(tau, conc));
    REQUIRE(periods.size() == 1);
    CHECK(periods[0].start_tau == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(periods[0].end_tau == doctest::Approx(5.0).epsilon(1e-2));
    CHECK_FALSE(periods[0].censored_start);
    CHECK_FALSE(periods[0].censored_end);
}

TEST_CASE("dark_periods: censoring at the window edges") {
    std::vector<double> tau, conc;
    for (int i = 0; i <= 100; ++i) {
        const double t = 0.1 * i;
        tau.push_back(t);
        conc.push_back(t < 2.0 ? 0.0 : 0.4);
    }
    const auto periods = dark_periods(synthetic_trace(tau, conc));
    REQUIRE(periods.size() == 1);
    CHECK(periods[0].censored_start);
    CHECK_FALSE(periods[0].censored_end);
    CHECK(periods[0].start_tau == 0.0);
}

TEST_CASE("dark_periods: isolated touching-zero points are filtered out") {
    std::vector<double> tau, conc;
    for (int i = 0; i <= 100; ++i) {
        tau.push_back(0.1 * i);
        conc.push_back(i == 50 ? 0.0 : 0.3);
    }
    CHECK(dark_periods(synthetic_trace(tau, conc)).empty());
}

TEST_CASE("dark_periods: threshold must be positive") {
    const auto t = synthetic_trace({0.0, 1.0}, {0.1, 0.1});
    CHECK_THROWS_AS(dark_periods(t, 0.0, 0.1), std::invalid_argument);
}
