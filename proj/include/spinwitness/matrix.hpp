#pragma once

// Dense complex matrices sized for multi-qubit operators (dim <= 2^10).
// Row-major storage, value semantics throughout.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spinwitness {

using cplx = std::complex<double>;

class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return data_; }
    std::vector<cplx>& data() { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0, 0.0)) continue;
                const cplx* brow = &b.data_[k * b.cols_];
                cplx* crow = &c.data_[i * c.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) crow[j] += aik * brow[j];
            }
        }
        return c;
    }

    std::vector<cplx> operator*(const std::vector<cplx>& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
        std::vector<cplx> out(rows_, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx acc(0.0, 0.0);
            const cplx* row = &data_[i * cols_];
            for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
            out[i] = acc;
        }
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix c(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) c.data_[i] = std::conj(data_[i]);
        return c;
    }

    ComplexMatrix adjoint() const {
        ComplexMatrix a(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
        return a;
    }

    cplx trace() const {
        if (rows_ != cols_) throw std::invalid_argument("trace of non-square matrix");
        cplx t(0.0, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    bool is_hermitian(double tol) const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_, cols_;
    std::vector<cplx> data_;
};

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// Tensor product with the first operand as the leftmost (most significant) factor.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const cplx av = a(ia, ja);
            if (av == cplx(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    c(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return c;
}

// sigma^0..sigma^3 with sigma^0 = identity; basis fixed by sigma^z|0> = |0>.
inline const ComplexMatrix& pauli(int mu) {
    static const std::vector<ComplexMatrix> sigmas = [] {
        std::vector<ComplexMatrix> s(4, ComplexMatrix(2, 2));
        s[0](0, 0) = 1.0; s[0](1, 1) = 1.0;
        s[1](0, 1) = 1.0; s[1](1, 0) = 1.0;
        s[2](0, 1) = cplx(0.0, -1.0); s[2](1, 0) = cplx(0.0, 1.0);
        s[3](0, 0) = 1.0; s[3](1, 1) = -1.0;
        return s;
    }();
    if (mu < 0 || mu > 3) throw std::invalid_argument("pauli index out of range");
    return sigmas[mu];
}

inline ComplexMatrix outer(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
}

inline cplx inner(const std::vector<cplx>& u, const std::vector<cplx>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner: size mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

inline double vec_norm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

}  // namespace spinwitness
