// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against the raw definitions (loops over
// indices, direct multiplication), not against the library routines it is
// used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "djc/hilbert.hpp"
#include "djc/numkit.hpp"

namespace djc::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline ComplexMatrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& gen, std::size_t n) {
    const ComplexMatrix m = random_matrix(gen, n, n);
    ComplexMatrix h(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return h;
}

/// Random unitary as the eigenvector matrix of a random Hermitian matrix.
inline ComplexMatrix random_unitary(std::mt19937_64& gen, std::size_t n) {
    return herm_eig(random_hermitian(gen, n)).eigenvectors;
}

inline std::vector<Complex> random_state(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> v(n);
    double norm_sq = 0.0;
    for (Complex& z : v) {
        z = Complex(dist(gen), dist(gen));
        norm_sq += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (Complex& z : v) z *= inv;
    return v;
}

/// Independent partial-trace oracle over the atoms of a pure state on a
/// 4-site composite space: rho(a,b) = sum_c psi[a,c] conj(psi[b,c]) with the
/// cavity pair flattened by hand.
inline ComplexMatrix atoms_reduced_oracle(const CompositeSpace& space,
                                          const std::vector<Complex>& psi) {
    const std::size_t dc = space.cavity_dim() * space.cavity_dim();
    ComplexMatrix rho(4, 4);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            Complex s = 0.0;
            for (std::size_t c = 0; c < dc; ++c) s += psi[a * dc + c] * std::conj(psi[b * dc + c]);
            rho(a, b) = s;
        }
    return rho;
}

/// Random two-qubit X state (diagonal plus anti-diagonal), positive
/// semidefinite and unit trace by construction. `inner_coherence` also
/// populates the (1,2) anti-diagonal pair.
inline ComplexMatrix random_x_state(std::mt19937_64& gen, bool inner_coherence) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double d[4];
    double sum = 0.0;
    for (double& x : d) {
        x = dist(gen) + 1e-6;
        sum += x;
    }
    for (double& x : d) x /= sum;

    ComplexMatrix rho(4, 4);
    for (std::size_t i = 0; i < 4; ++i) rho(i, i) = d[i];
    const double u = dist(gen);
    const double phase = 2.0 * std::numbers::pi * dist(gen);
    const Complex outer = std::polar(u * std::sqrt(d[0] * d[3]), phase);
    rho(0, 3) = outer;
    rho(3, 0) = std::conj(outer);
    if (inner_coherence) {
        const double v = dist(gen);
        const double phase2 = 2.0 * std::numbers::pi * dist(gen);
        const Complex inner = std::polar(v * std::sqrt(d[1] * d[2]), phase2);
        rho(1, 2) = inner;
        rho(2, 1) = std::conj(inner);
    }
    return rho;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

}  // namespace djc::testing
