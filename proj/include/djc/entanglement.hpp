// Entanglement quantifiers (Wootters concurrence, X-state closed form,
// negativity) and dark-period detection on concurrence traces.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "djc/hilbert.hpp"
#include "djc/models.hpp"
#include "djc/numkit.hpp"

namespace djc {

namespace detail {

// Density-matrix eigenvalues mildly negative from roundoff are clipped to
// zero; anything below -1e-8 means the caller handed us garbage.
inline double clip_population(double lambda, const char* where) {
    if (lambda < -1e-8) {
        std::ostringstream msg;
        msg << where << ": density matrix eigenvalue " << lambda
            << " is negative beyond numerical tolerance";
        throw std::runtime_error(msg.str());
    }
    return std::max(lambda, 0.0);
}

// V diag(f(lambda)) V-dagger
inline ComplexMatrix rebuild(const HermEigDecomposition& eig, const std::vector<double>& f) {
    const std::size_t n = eig.eigenvalues.size();
    const ComplexMatrix& v = eig.eigenvectors;
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += v(i, k) * f[k] * std::conj(v(j, k));
            out(i, j) = s;
        }
    return out;
}

inline const ComplexMatrix& spin_flip_matrix() {
    // sigma_y x sigma_y in the product basis (uu, ud, du, dd)
    static const ComplexMatrix y = [] {
        ComplexMatrix m(4, 4);
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();
    return y;
}

}  // namespace detail

/// Wootters concurrence of a two-qubit density matrix:
/// C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)) over the descending
/// eigenvalues of rho (sy x sy) rho* (sy x sy). Computed through the
/// Hermitian similar form sqrt(rho) rho~ sqrt(rho), which has the same
/// spectrum, so the Hermitian eigensolver suffices.
inline double concurrence(const DensityMatrix& rho) {
    if (rho.matrix.rows() != 4 || rho.matrix.cols() != 4)
        throw std::invalid_argument("concurrence: expected a 4x4 two-qubit density matrix");

    const HermEigDecomposition eig = herm_eig(rho.matrix);
    std::vector<double> sqrt_pop(4);
    for (std::size_t i = 0; i < 4; ++i)
        sqrt_pop[i] = std::sqrt(detail::clip_population(eig.eigenvalues[i], "concurrence"));
    const ComplexMatrix sqrt_rho = detail::rebuild(eig, sqrt_pop);

    const ComplexMatrix& y = detail::spin_flip_matrix();
    const ComplexMatrix rho_tilde = y * rho.matrix.conjugated() * y;
    const ComplexMatrix m = sqrt_rho * rho_tilde * sqrt_rho;

    const HermEigDecomposition meig = herm_eig(m);
    double c = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double root = std::sqrt(detail::clip_population(meig.eigenvalues[i], "concurrence"));
        c += (i == 3) ? root : -root;  // eigenvalues ascend; largest enters positively
    }
    return std::clamp(c, 0.0, 1.0);
}

/// Closed-form concurrence for X states (nonzero entries only on the
/// diagonal and anti-diagonal): C = 2 max(0, |r14| - sqrt(r22 r33),
/// |r23| - sqrt(r11 r44)). For the hopping model's reduced states the inner
/// coherence r23 vanishes and this is just 2 max(0, |r14| - sqrt(r22 r33));
/// the Ising and XY variants populate r23, which the second branch covers.
inline double concurrence_x(const DensityMatrix& rho) {
    if (rho.matrix.rows() != 4 || rho.matrix.cols() != 4)
        throw std::invalid_argument("concurrence_x: expected a 4x4 two-qubit density matrix");
    const ComplexMatrix& r = rho.matrix;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j || i + j == 3) continue;
            if (std::abs(r(i, j)) >= 1e-9) {
                std::ostringstream msg;
                msg << "concurrence_x: entry (" << i << "," << j << ") = |" << std::abs(r(i, j))
                    << "| breaks the X structure";
                throw std::invalid_argument(msg.str());
            }
        }
    const double d0 = r(0, 0).real(), d1 = r(1, 1).real();
    const double d2 = r(2, 2).real(), d3 = r(3, 3).real();
    const double outer = std::abs(r(0, 3)) - std::sqrt(std::max(0.0, d1 * d2));
    const double inner = std::abs(r(1, 2)) - std::sqrt(std::max(0.0, d0 * d3));
    return 2.0 * std::max({0.0, outer, inner});
}

/// True when nothing lives outside the diagonal and anti-diagonal.
inline bool is_x_structured(const DensityMatrix& rho, double tol = 1e-9) {
    if (rho.matrix.rows() != 4 || rho.matrix.cols() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && i + j != 3 && std::abs(rho.matrix(i, j)) >= tol) return false;
    return true;
}

/// Concurrence through the best-conditioned route: the closed form when the
/// state is X structured (as every reduced state of these models is), the
/// general Wootters computation otherwise. The closed form avoids the
/// sqrt-of-near-zero eigenvalue floor of the spectral route, which matters
/// for pure states where the concurrence must come out exact.
inline double concurrence_auto(const DensityMatrix& rho) {
    if (is_x_structured(rho)) return concurrence_x(rho);
    return concurrence(rho);
}

/// Negativity across the (dim_a, dim_b) bipartition:
/// (||rho^{T_B}||_1 - 1)/2 = sum of |negative eigenvalues| of the partial
/// transpose for a unit-trace state.
inline double negativity(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b) {
    const std::size_t n = rho.matrix.rows();
    if (dim_a * dim_b != n || rho.matrix.cols() != n)
        throw std::invalid_argument("negativity: bipartition dims do not match the matrix");

    ComplexMatrix pt(n, n);
    for (std::size_t ia = 0; ia < dim_a; ++ia)
        for (std::size_t ib = 0; ib < dim_b; ++ib)
            for (std::size_t ja = 0; ja < dim_a; ++ja)
                for (std::size_t jb = 0; jb < dim_b; ++jb)
                    pt(ia * dim_b + ib, ja * dim_b + jb) =
                        rho.matrix(ia * dim_b + jb, ja * dim_b + ib);

    const HermEigDecomposition eig = herm_eig(pt);
    double neg = 0.0;
    for (double lambda : eig.eigenvalues)
        if (lambda < 0.0) neg -= lambda;
    return neg;
}

/// Maximal interval of vanishing atom-atom concurrence, in scaled time.
struct DarkPeriod {
    double start_tau = 0.0;
    double end_tau = 0.0;
    bool censored_start = false;  // interval touches the start of the grid
    bool censored_end = false;    // interval touches the end of the grid

    double duration() const { return end_tau - start_tau; }
};

/// Time series of entanglement observables on a uniform scaled-time grid,
/// with the configuration that produced it.
struct EntanglementTrace {
    std::vector<double> tau;
    std::vector<double> concurrence_atoms;
    std::vector<double> negativity_cavities;
    std::vector<double> norm;

    ModelParams params;
    double alpha = 0.0;
    HamiltonianVariant variant;
    int fock_cutoff = 0;

    // cutoff-convergence guard: largest observable shift when re-run at
    // fock_cutoff + 2 (NaN when the guard did not run)
    double convergence_shift = std::numeric_limits<double>::quiet_NaN();
    bool convergence_checked = false;
    bool converged() const { return convergence_checked && convergence_shift < 1e-6; }

    double grid_step() const {
        return tau.size() > 1 ? (tau.back() - tau.front()) / static_cast<double>(tau.size() - 1)
                              : 0.0;
    }
};

/// Maximal intervals where the concurrence stays below `threshold` for at
/// least `min_duration`, endpoints refined by linear interpolation between
/// the straddling grid points. Intervals touching the grid boundary are
/// flagged censored.
inline std::vector<DarkPeriod> dark_periods(const EntanglementTrace& trace, double threshold,
                                            double min_duration) {
    if (threshold <= 0.0) throw std::invalid_argument("dark_periods: threshold must be > 0");
    const std::vector<double>& c = trace.concurrence_atoms;
    const std::vector<double>& tau = trace.tau;
    std::vector<DarkPeriod> out;
    if (c.size() != tau.size() || c.empty()) return out;

    const auto crossing = [&](std::size_t lo, std::size_t hi) {
        // linear interpolation of c(tau) = threshold between grid neighbours
        const double c0 = c[lo], c1 = c[hi];
        if (c0 == c1) return tau[lo];
        const double f = (threshold - c0) / (c1 - c0);
        return tau[lo] + f * (tau[hi] - tau[lo]);
    };

    std::size_t i = 0;
    const std::size_t n = c.size();
    while (i < n) {
        if (c[i] >= threshold) {
            ++i;
            continue;
        }
        const std::size_t first = i;
        while (i + 1 < n && c[i + 1] < threshold) ++i;
        const std::size_t last = i;

        DarkPeriod period;
        if (first == 0) {
            period.start_tau = tau.front();
            period.censored_start = true;
        } else {
            period.start_tau = crossing(first - 1, first);
        }
        if (last + 1 == n) {
            period.end_tau = tau.back();
            period.censored_end = true;
        } else {
            period.end_tau = crossing(last + 1, last);
        }
        if (period.duration() >= min_duration) out.push_back(period);
        ++i;
    }
    return out;
}

/// Default detection: threshold 1e-9, minimum duration two grid steps
/// (flat zero plateaus count, isolated touching-zero points do not).
inline std::vector<DarkPeriod> dark_periods(const EntanglementTrace& trace) {
    return dark_periods(trace, 1e-9, 2.0 * trace.grid_step());
}

inline double total_dark_duration(const std::vector<DarkPeriod>& periods) {
    double total = 0.0;
    for (const DarkPeriod& p : periods) total += p.duration();
    return total;
}

}  // namespace djc
