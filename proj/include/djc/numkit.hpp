// Dense complex linear algebra for exact quantum dynamics on small spaces
// (everything here tops out at a few hundred dimensions, so dense storage
// and a cyclic Jacobi eigensolver are entirely adequate).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace djc {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Complex>& entries() const { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    ComplexMatrix conjugated() const {
        ComplexMatrix out(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const Complex& z : data_) s += std::norm(z);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const Complex& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    /// Worst deviation from M = M-dagger, with its location.
    struct HermitianDefect {
        double value = 0.0;
        std::size_t row = 0;
        std::size_t col = 0;
    };

    HermitianDefect hermitian_defect() const {
        HermitianDefect d;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                const double v = std::abs((*this)(i, j) - std::conj((*this)(j, i)));
                if (v > d.value) d = {v, i, j};
            }
        }
        return d;
    }

    bool is_hermitian(double tol = 1e-12) const {
        return is_square() && hermitian_defect().value < tol;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o, "+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o, "-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (Complex& z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product: inner dimensions " +
                                        std::to_string(a.cols_) + " and " +
                                        std::to_string(b.rows_) + " differ");
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex aik = a(i, k);
                if (aik == 0.0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        }
        return out;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("matrix ") + what + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline std::vector<Complex> operator*(const ComplexMatrix& m, const std::vector<Complex>& v) {
    if (m.cols() != v.size())
        throw std::invalid_argument("matrix-vector product: dimension mismatch");
    std::vector<Complex> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

/// Kronecker (tensor) product. Satisfies (A x B)(C x D) = (AC) x (BD).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

/// Spectral decomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors as unitary column matrix, M = V diag(lambda) V-dagger.
struct HermEigDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair exactly; sweeps repeat
/// until the off-diagonal Frobenius norm drops below 1e-13 (scaled by the
/// input norm when that exceeds 1, so the target stays reachable in
/// floating point for large matrices).
inline HermEigDecomposition herm_eig(const ComplexMatrix& m) {
    if (!m.is_square())
        throw std::invalid_argument("herm_eig: matrix is " + std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()) + ", not square");
    const auto defect = m.hermitian_defect();
    if (defect.value >= 1e-10) {
        std::ostringstream msg;
        msg << "herm_eig: input not Hermitian: |M(" << defect.row << "," << defect.col
            << ") - conj(M(" << defect.col << "," << defect.row << "))| = " << defect.value;
        throw std::invalid_argument(msg.str());
    }

    const std::size_t n = m.rows();
    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double tol = 1e-13 * std::max(1.0, scale);
    const double skip = tol / (10.0 * std::max<std::size_t>(n, 1));

    const int max_sweeps = 60;
    int sweep = 0;
    while (detail::off_diagonal_norm(a) >= tol) {
        if (++sweep > max_sweeps)
            throw std::runtime_error("herm_eig: Jacobi iteration failed to converge after " +
                                     std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= skip) continue;

                // Unitary 2x2 rotation that zeroes the (p,q) pair:
                //   U(p,p)=c, U(p,q)=-s e^{i phi}, U(q,p)=s e^{-i phi}, U(q,q)=c
                // with phi = arg(a_pq) and 2t = atan2(2|a_pq|, a_pp - a_qq).
                const double phi = std::arg(apq);
                const Complex eip = std::polar(1.0, phi);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, app - aqq);
                const double c = std::cos(theta);
                const double s = std::sin(theta);

                // rows p,q of U-dagger * A
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = c * apj + s * eip * aqj;
                    a(q, j) = -s * std::conj(eip) * apj + c * aqj;
                }
                // columns p,q of (U-dagger A) * U
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = c * aip + s * std::conj(eip) * aiq;
                    a(i, q) = -s * eip * aip + c * aiq;

                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = c * vip + s * std::conj(eip) * viq;
                    v(i, q) = -s * eip * vip + c * viq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    return out;
}

/// U(t) = V exp(-i lambda t) V-dagger from a cached decomposition.
inline ComplexMatrix propagator(const HermEigDecomposition& eig, double t) {
    const std::size_t n = eig.eigenvalues.size();
    const ComplexMatrix& v = eig.eigenvectors;
    ComplexMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                s += v(i, k) * std::polar(1.0, -eig.eigenvalues[k] * t) * std::conj(v(j, k));
            u(i, j) = s;
        }
    }
    return u;
}

/// Time-evolution operator exp(-i h t) of a Hermitian generator.
inline ComplexMatrix propagator(const ComplexMatrix& h, double t) {
    return propagator(herm_eig(h), t);
}

/// Apply exp(-i h t) to a vector without forming the full propagator.
inline std::vector<Complex> propagate(const HermEigDecomposition& eig,
                                      const std::vector<Complex>& psi, double t) {
    const std::size_t n = eig.eigenvalues.size();
    if (psi.size() != n)
        throw std::invalid_argument("propagate: state dimension mismatch");
    const ComplexMatrix& v = eig.eigenvectors;
    std::vector<Complex> modal(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::conj(v(i, k)) * psi[i];
        modal[k] = s * std::polar(1.0, -eig.eigenvalues[k] * t);
    }
    std::vector<Complex> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += v(i, k) * modal[k];
        out[i] = s;
    }
    return out;
}

}  // namespace djc
