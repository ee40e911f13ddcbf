// Composite atom x atom x cavity x cavity Hilbert space: basis bookkeeping,
// site-local operators, partial traces and conserved-sector discovery.
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "djc/numkit.hpp"

namespace djc {

/// Spin convention: index 0 is the excited state (sigma_z eigenvalue +1).
enum class Spin { up = 0, down = 1 };

enum class Site { atom1 = 0, atom2 = 1, cavity1 = 2, cavity2 = 3 };

enum class SiteOp { sigma_z, sigma_plus, sigma_minus, annihilate, create, number, identity };

/// One basis vector |s1 s2 n1 n2>.
struct BasisLabel {
    Spin atom1 = Spin::down;
    Spin atom2 = Spin::down;
    int photons1 = 0;
    int photons2 = 0;

    bool operator==(const BasisLabel&) const = default;
};

/// The truncated product space. Basis index runs lexicographically with
/// atom1 slowest: index = ((s1*2 + s2)*d + n1)*d + n2, d = fock_cutoff+1.
class CompositeSpace {
public:
    explicit CompositeSpace(int fock_cutoff) : fock_cutoff_(fock_cutoff) {
        if (fock_cutoff < 2)
            throw std::invalid_argument("CompositeSpace: fock_cutoff must be >= 2, got " +
                                        std::to_string(fock_cutoff));
    }

    int fock_cutoff() const { return fock_cutoff_; }
    std::size_t cavity_dim() const { return static_cast<std::size_t>(fock_cutoff_) + 1; }
    std::array<std::size_t, 4> site_dims() const {
        return {2, 2, cavity_dim(), cavity_dim()};
    }
    std::size_t dim() const { return 4 * cavity_dim() * cavity_dim(); }

    std::size_t index_of(const BasisLabel& l) const {
        check_label(l);
        const std::size_t d = cavity_dim();
        const std::size_t s1 = static_cast<std::size_t>(l.atom1);
        const std::size_t s2 = static_cast<std::size_t>(l.atom2);
        return ((s1 * 2 + s2) * d + static_cast<std::size_t>(l.photons1)) * d +
               static_cast<std::size_t>(l.photons2);
    }

    BasisLabel label_of(std::size_t index) const {
        if (index >= dim())
            throw std::invalid_argument("CompositeSpace: basis index out of range");
        const std::size_t d = cavity_dim();
        BasisLabel l;
        l.photons2 = static_cast<int>(index % d);
        index /= d;
        l.photons1 = static_cast<int>(index % d);
        index /= d;
        l.atom2 = static_cast<Spin>(index % 2);
        l.atom1 = static_cast<Spin>(index / 2);
        return l;
    }

    bool operator==(const CompositeSpace&) const = default;

private:
    void check_label(const BasisLabel& l) const {
        if (l.photons1 < 0 || l.photons1 > fock_cutoff_ || l.photons2 < 0 ||
            l.photons2 > fock_cutoff_)
            throw std::invalid_argument("CompositeSpace: photon number outside cutoff");
    }

    int fock_cutoff_;
};

/// Dense operator on the full composite space.
struct Operator {
    CompositeSpace space;
    ComplexMatrix matrix;
};

/// Normalized state vector over the composite space.
struct PureState {
    CompositeSpace space;
    std::vector<Complex> amplitudes;

    double norm() const {
        double s = 0.0;
        for (const Complex& a : amplitudes) s += std::norm(a);
        return std::sqrt(s);
    }
};

/// Density matrix of the full space or of a kept subsystem; site_dims lists
/// the tensor-factor dimensions of whatever the matrix acts on.
struct DensityMatrix {
    ComplexMatrix matrix;
    std::vector<std::size_t> site_dims;

    std::size_t dim() const { return matrix.rows(); }
};

inline DensityMatrix density_matrix(const PureState& psi) {
    const std::size_t n = psi.amplitudes.size();
    DensityMatrix rho;
    rho.matrix = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            rho.matrix(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    const auto dims = psi.space.site_dims();
    rho.site_dims.assign(dims.begin(), dims.end());
    return rho;
}

namespace detail {

inline ComplexMatrix local_spin_matrix(SiteOp kind) {
    ComplexMatrix m(2, 2);
    switch (kind) {
        case SiteOp::sigma_z:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
        case SiteOp::sigma_plus:
            m(0, 1) = 1.0;
            break;
        case SiteOp::sigma_minus:
            m(1, 0) = 1.0;
            break;
        case SiteOp::identity:
            m(0, 0) = m(1, 1) = 1.0;
            break;
        default:
            throw std::invalid_argument("site_operator: bosonic operator requested on an atom site");
    }
    return m;
}

inline ComplexMatrix local_mode_matrix(SiteOp kind, std::size_t d) {
    ComplexMatrix m(d, d);
    switch (kind) {
        case SiteOp::annihilate:
            for (std::size_t n = 1; n < d; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
            break;
        case SiteOp::create:
            // truncation: create |cutoff> = 0
            for (std::size_t n = 1; n < d; ++n) m(n, n - 1) = std::sqrt(static_cast<double>(n));
            break;
        case SiteOp::number:
            for (std::size_t n = 0; n < d; ++n) m(n, n) = static_cast<double>(n);
            break;
        case SiteOp::identity:
            for (std::size_t n = 0; n < d; ++n) m(n, n) = 1.0;
            break;
        default:
            throw std::invalid_argument("site_operator: spin operator requested on a cavity site");
    }
    return m;
}

}  // namespace detail

/// Identity on every other site tensored with the local matrix at `site`.
inline Operator site_operator(const CompositeSpace& space, Site site, SiteOp kind) {
    const std::size_t d = space.cavity_dim();
    const auto dims = space.site_dims();
    ComplexMatrix out;
    for (std::size_t s = 0; s < 4; ++s) {
        ComplexMatrix local;
        if (s == static_cast<std::size_t>(site)) {
            local = (s < 2) ? detail::local_spin_matrix(kind) : detail::local_mode_matrix(kind, d);
        } else {
            local = ComplexMatrix::identity(dims[s]);
        }
        out = (s == 0) ? std::move(local) : kron(out, local);
    }
    return {space, std::move(out)};
}

/// Total excitation number N = sum_i sigma+_i sigma-_i + sum_j n_j.
inline Operator total_excitation_operator(const CompositeSpace& space) {
    ComplexMatrix n(space.dim(), space.dim());
    for (std::size_t i = 0; i < space.dim(); ++i) {
        const BasisLabel l = space.label_of(i);
        double excitations = static_cast<double>(l.photons1 + l.photons2);
        if (l.atom1 == Spin::up) excitations += 1.0;
        if (l.atom2 == Spin::up) excitations += 1.0;
        n(i, i) = excitations;
    }
    return {space, std::move(n)};
}

/// Trace out every site not in `keep`. Keeping all sites returns the input.
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const Site> keep) {
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep-set must not be empty");
    if (rho.site_dims.size() != 4)
        throw std::invalid_argument("partial_trace: expected a full-space density matrix");
    std::size_t total = 1;
    for (std::size_t d : rho.site_dims) total *= d;
    if (rho.matrix.rows() != total || rho.matrix.cols() != total)
        throw std::invalid_argument("partial_trace: matrix does not match site dimensions");

    std::array<bool, 4> kept{false, false, false, false};
    for (Site s : keep) kept[static_cast<std::size_t>(s)] = true;

    std::vector<std::size_t> keep_sites, trace_sites;
    for (std::size_t s = 0; s < 4; ++s) (kept[s] ? keep_sites : trace_sites).push_back(s);

    std::size_t keep_dim = 1, trace_dim = 1;
    for (std::size_t s : keep_sites) keep_dim *= rho.site_dims[s];
    for (std::size_t s : trace_sites) trace_dim *= rho.site_dims[s];

    // strides of each site in the full-space index (lexicographic, site 0 slowest)
    std::array<std::size_t, 4> stride{};
    std::size_t acc = 1;
    for (std::size_t s = 4; s-- > 0;) {
        stride[s] = acc;
        acc *= rho.site_dims[s];
    }

    auto compose = [&](std::size_t keep_multi, std::size_t trace_multi) {
        std::size_t full = 0;
        for (std::size_t k = keep_sites.size(); k-- > 0;) {
            const std::size_t s = keep_sites[k];
            full += (keep_multi % rho.site_dims[s]) * stride[s];
            keep_multi /= rho.site_dims[s];
        }
        for (std::size_t k = trace_sites.size(); k-- > 0;) {
            const std::size_t s = trace_sites[k];
            full += (trace_multi % rho.site_dims[s]) * stride[s];
            trace_multi /= rho.site_dims[s];
        }
        return full;
    };

    DensityMatrix out;
    out.matrix = ComplexMatrix(keep_dim, keep_dim);
    for (std::size_t s : keep_sites) out.site_dims.push_back(rho.site_dims[s]);

    for (std::size_t i = 0; i < keep_dim; ++i) {
        for (std::size_t j = 0; j < keep_dim; ++j) {
            Complex s = 0.0;
            for (std::size_t t = 0; t < trace_dim; ++t)
                s += rho.matrix(compose(i, t), compose(j, t));
            out.matrix(i, j) = s;
        }
    }
    return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<Site> keep) {
    return partial_trace(rho, std::span<const Site>(keep.begin(), keep.size()));
}

/// Basis indices reachable from the seed's support through nonzero matrix
/// elements of h (threshold 1e-12). The returned set is closed under h, so
/// dynamics started inside it stay inside it exactly. Ascending order.
inline std::vector<std::size_t> excitation_sector_basis(const CompositeSpace& space,
                                                        const Operator& h,
                                                        const PureState& seed) {
    if (h.matrix.rows() != space.dim() || seed.amplitudes.size() != space.dim())
        throw std::invalid_argument("excitation_sector_basis: dimension mismatch");
    constexpr double threshold = 1e-12;

    const std::size_t n = space.dim();
    std::vector<char> in_sector(n, 0);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(seed.amplitudes[i]) > threshold) {
            in_sector[i] = 1;
            frontier.push_back(i);
        }
    }
    while (!frontier.empty()) {
        const std::size_t i = frontier.back();
        frontier.pop_back();
        for (std::size_t j = 0; j < n; ++j) {
            if (!in_sector[j] && std::abs(h.matrix(i, j)) > threshold) {
                in_sector[j] = 1;
                frontier.push_back(j);
            }
        }
    }

    std::vector<std::size_t> sector;
    for (std::size_t i = 0; i < n; ++i)
        if (in_sector[i]) sector.push_back(i);
    return sector;
}

}  // namespace djc
