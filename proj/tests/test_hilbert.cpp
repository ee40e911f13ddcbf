#include "doctest.h"

#include <cmath>
#include <numbers>

#include "djc/hilbert.hpp"
#include "djc/models.hpp"
#include "test_helpers.hpp"

using namespace djc;
namespace tt = djc::testing;

TEST_CASE("CompositeSpace: dimensions and label round-trip") {
    CHECK(CompositeSpace(2).dim() == 36);
    CHECK(CompositeSpace(4).dim() == 100);
    CHECK_THROWS_AS(CompositeSpace(1), std::invalid_argument);

    const CompositeSpace space(3);
    SUBCASE("index and label maps are mutually inverse over the whole range") {
        for (std::size_t i = 0; i < space.dim(); ++i)
            CHECK(space.index_of(space.label_of(i)) == i);
    }
    SUBCASE("spot check") {
        const BasisLabel l{Spin::up, Spin::down, 1, 0};
        CHECK(space.label_of(space.index_of(l)) == l);
    }
}

TEST_CASE("site_operator: bosonic matrix elements with truncation") {
    const CompositeSpace space(2);
    const Operator a1 = site_operator(space, Site::cavity1, SiteOp::annihilate);

    // annihilate on cavity 1 maps |dd20> to sqrt(2) |dd10>
    const std::size_t from = space.index_of({Spin::down, Spin::down, 2, 0});
    const std::size_t to = space.index_of({Spin::down, Spin::down, 1, 0});
    CHECK(std::abs(a1.matrix(to, from) - Complex(std::sqrt(2.0), 0.0)) < 1e-15);

    // truncation: create on |..2.> vanishes
    const Operator ad1 = site_operator(space, Site::cavity1, SiteOp::create);
    for (std::size_t i = 0; i < space.dim(); ++i) CHECK(std::abs(ad1.matrix(i, from)) == 0.0);
}

TEST_CASE("site_operator: atomic raising acts and saturates") {
    const CompositeSpace space(2);
    const Operator sp2 = site_operator(space, Site::atom2, SiteOp::sigma_plus);
    const std::size_t ud = space.index_of({Spin::up, Spin::down, 0, 0});
    const std::size_t uu = space.index_of({Spin::up, Spin::up, 0, 0});
    CHECK(std::abs(sp2.matrix(uu, ud) - Complex(1.0, 0.0)) < 1e-15);
    for (std::size_t i = 0; i < space.dim(); ++i) CHECK(std::abs(sp2.matrix(i, uu)) == 0.0);
}

TEST_CASE("site_operator: number operator is diagonal in the basis labels") {
    const CompositeSpace space(2);
    const Operator n2 = site_operator(space, Site::cavity2, SiteOp::number);
    for (std::size_t i = 0; i < space.dim(); ++i) {
        for (std::size_t j = 0; j < space.dim(); ++j) {
            const Complex expected =
                (i == j) ? Complex(space.label_of(i).photons2, 0.0) : Complex(0.0, 0.0);
            CHECK(std::abs(n2.matrix(i, j) - expected) == 0.0);
        }
    }
}

TEST_CASE("site_operator: kind/site mismatch rejected") {
    const CompositeSpace space(2);
    CHECK_THROWS_AS(site_operator(space, Site::atom1, SiteOp::annihilate), std::invalid_argument);
    CHECK_THROWS_AS(site_operator(space, Site::cavity1, SiteOp::sigma_plus),
                    std::invalid_argument);
}

TEST_CASE("commutator [a_i, a_j^+] = delta_ij below the truncation row") {
    const CompositeSpace space(3);
    for (Site si : {Site::cavity1, Site::cavity2}) {
        for (Site sj : {Site::cavity1, Site::cavity2}) {
            const ComplexMatrix ai = site_operator(space, si, SiteOp::annihilate).matrix;
            const ComplexMatrix adj = site_operator(space, sj, SiteOp::create).matrix;
            const ComplexMatrix comm = ai * adj - adj * ai;
            const double expected = (si == sj) ? 1.0 : 0.0;
            for (std::size_t i = 0; i < space.dim(); ++i) {
                const BasisLabel li = space.label_of(i);
                // the identity fails only in the top Fock row of the commuted mode
                if (li.photons1 == space.fock_cutoff() || li.photons2 == space.fock_cutoff())
                    continue;
                CHECK(std::abs(comm(i, i) - Complex(expected, 0.0)) < 1e-14);
                for (std::size_t j = 0; j < space.dim(); ++j)
                    if (i != j) CHECK(std::abs(comm(i, j)) < 1e-14);
            }
        }
    }
}

TEST_CASE("partial_trace: Bell state with empty cavities gives the X corners") {
    const CompositeSpace space(2);
    PureState psi{space, std::vector<Complex>(space.dim(), 0.0)};
    const double r = 1.0 / std::sqrt(2.0);
    psi.amplitudes[space.index_of({Spin::up, Spin::up, 0, 0})] = r;
    psi.amplitudes[space.index_of({Spin::down, Spin::down, 0, 0})] = r;

    const DensityMatrix atoms = partial_trace(density_matrix(psi), {Site::atom1, Site::atom2});
    CHECK(atoms.matrix.rows() == 4);
    CHECK(std::abs(atoms.matrix(0, 0) - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(atoms.matrix(3, 3) - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(atoms.matrix(0, 3) - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(atoms.matrix(1, 1)) < 1e-14);
    CHECK(std::abs(atoms.matrix(2, 2)) < 1e-14);
}

TEST_CASE("partial_trace: product state reduces to a rank-1 projector") {
    const CompositeSpace space(2);
    PureState psi{space, std::vector<Complex>(space.dim(), 0.0)};
    psi.amplitudes[space.index_of({Spin::up, Spin::down, 1, 0})] = 1.0;

    const DensityMatrix atoms = partial_trace(density_matrix(psi), {Site::atom1, Site::atom2});
    // pure |ud><ud|
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double expected = (i == 1 && j == 1) ? 1.0 : 0.0;
            CHECK(std::abs(atoms.matrix(i, j) - Complex(expected, 0.0)) < 1e-14);
        }
    // rho^2 = rho
    CHECK(tt::max_abs_diff(atoms.matrix * atoms.matrix, atoms.matrix) < 1e-14);
}

TEST_CASE("partial_trace: random pure state against the index-contraction oracle") {
    const CompositeSpace space(2);
    auto gen = tt::rng(201);
    const std::vector<Complex> psi_vec = tt::random_state(gen, space.dim());
    PureState psi{space, psi_vec};

    const DensityMatrix atoms = partial_trace(density_matrix(psi), {Site::atom1, Site::atom2});
    const ComplexMatrix oracle = tt::atoms_reduced_oracle(space, psi_vec);
    CHECK(tt::max_abs_diff(atoms.matrix, oracle) < 1e-13);
    CHECK(std::abs(atoms.matrix.trace() - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("partial_trace: keeping all sites returns the input") {
    const CompositeSpace space(2);
    auto gen = tt::rng(202);
    PureState psi{space, tt::random_state(gen, space.dim())};
    const DensityMatrix rho = density_matrix(psi);
    const DensityMatrix all =
        partial_trace(rho, {Site::atom1, Site::atom2, Site::cavity1, Site::cavity2});
    CHECK(tt::max_abs_diff(all.matrix, rho.matrix) < 1e-14);
}

TEST_CASE("partial_trace: empty keep-set rejected") {
    const CompositeSpace space(2);
    PureState psi = initial_state(space, 0.3);
    const DensityMatrix rho = density_matrix(psi);
    CHECK_THROWS_AS(partial_trace(rho, std::span<const Site>{}), std::invalid_argument);
}

TEST_CASE("excitation_sector_basis: hopping model seed reaches exactly the nine listed states") {
    const CompositeSpace space(2);
    ModelParams p;
    p.g = 0.1;
    p.kappa = 0.05;
    const Operator h = build_hamiltonian(p, space, {});
    const PureState seed = initial_state(space, std::numbers::pi / 6);

    const std::vector<std::size_t> sector = excitation_sector_basis(space, h, seed);

    std::vector<std::size_t> expected;
    for (const BasisLabel& l : reduced_basis_labels()) expected.push_back(space.index_of(l));
    std::sort(expected.begin(), expected.end());
    CHECK(sector == expected);
}

TEST_CASE("excitation_sector_basis: decoupled vacuum seed stays alone") {
    const CompositeSpace space(2);
    ModelParams p;
    p.g = 0.1;
    p.kappa = 0.05;
    const Operator h = build_hamiltonian(p, space, {});
    PureState seed{space, std::vector<Complex>(space.dim(), 0.0)};
    const std::size_t vac = space.index_of({Spin::down, Spin::down, 0, 0});
    seed.amplitudes[vac] = 1.0;

    const std::vector<std::size_t> sector = excitation_sector_basis(space, h, seed);
    CHECK(sector == std::vector<std::size_t>{vac});
}

TEST_CASE("excitation_sector_basis: anisotropic XY coupling opens the sector") {
    const CompositeSpace space(4);
    ModelParams p;
    p.g = 0.5;
    p.kappa = 0.001;
    p.j_x = 1.95;
    p.j_y = 0.05;
    const Operator h =
        build_hamiltonian(p, space, {HamiltonianTag::xy, HamiltonianMode::operator_basis,
                                     AtomicEnergyConvention::half});
    const PureState seed = initial_state(space, std::numbers::pi / 6);
    const std::vector<std::size_t> sector = excitation_sector_basis(space, h, seed);
    CHECK(sector.size() > 9);
}

TEST_CASE("total excitation number commutes with the conserving Hamiltonians") {
    const CompositeSpace space(2);
    ModelParams p;
    p.g = 0.3;
    p.kappa = 0.2;
    p.j_ising = 0.7;
    p.j_x = 0.4;
    p.j_y = 0.4;
    const ComplexMatrix n = total_excitation_operator(space).matrix;

    const auto commutator_norm = [&](HamiltonianTag tag) {
        const Operator h = build_hamiltonian(
            p, space, {tag, HamiltonianMode::operator_basis, AtomicEnergyConvention::half});
        return (h.matrix * n - n * h.matrix).max_abs();
    };

    CHECK(commutator_norm(HamiltonianTag::jc_hop) < 1e-10);
    CHECK(commutator_norm(HamiltonianTag::ising) < 1e-10);
    CHECK(commutator_norm(HamiltonianTag::xy) < 1e-10);  // isotropic: j_x = j_y

    ModelParams aniso = p;
    aniso.j_x = 0.9;
    aniso.j_y = 0.1;
    const Operator h_aniso = build_hamiltonian(
        aniso, space, {HamiltonianTag::xy, HamiltonianMode::operator_basis,
                       AtomicEnergyConvention::half});
    CHECK((h_aniso.matrix * n - n * h_aniso.matrix).max_abs() > 1e-3);
}
