#pragma once

// Quantum-state primitives on qubit registers: partial trace / transpose,
// a deterministic Hermitian eigensolver, fidelity and the symmetric projector.
//
// Index convention: qubit 1 is the LEFTMOST tensor factor, i.e. the most
// significant bit of the computational basis index.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwitness/matrix.hpp"

namespace spinwitness {

constexpr int kMaxQubits = 10;

inline std::size_t dim_for_qubits(int nqubits) {
    if (nqubits < 1 || nqubits > kMaxQubits)
        throw std::invalid_argument("qubit count out of supported range 1..10");
    return std::size_t{1} << nqubits;
}

// Bit of qubit q (1-based, leftmost factor = qubit 1) in basis index idx.
inline int qubit_bit(std::size_t idx, int q, int nqubits) {
    return static_cast<int>((idx >> (nqubits - q)) & 1u);
}

struct PureState {
    int nqubits = 0;
    std::vector<cplx> amplitudes;

    double norm() const { return vec_norm(amplitudes); }
};

struct DensityMatrix {
    int nqubits = 0;
    ComplexMatrix matrix;
};

inline DensityMatrix to_density(const PureState& psi) {
    return DensityMatrix{psi.nqubits, outer(psi.amplitudes, psi.amplitudes)};
}

inline DensityMatrix maximally_mixed(int nqubits) {
    const std::size_t d = dim_for_qubits(nqubits);
    ComplexMatrix m = ComplexMatrix::identity(d);
    m *= cplx(1.0 / static_cast<double>(d), 0.0);
    return DensityMatrix{nqubits, std::move(m)};
}

// Reduced state on the qubits listed in `keep`; output qubit order follows
// the order of `keep` (keep[0] becomes the leftmost factor of the output).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.nqubits;
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::vector<bool> kept(n + 1, false);
    for (int q : keep) {
        if (q < 1 || q > n) throw std::invalid_argument("partial_trace: qubit index out of range");
        if (kept[q]) throw std::invalid_argument("partial_trace: duplicate qubit index");
        kept[q] = true;
    }
    std::vector<int> traced;
    for (int q = 1; q <= n; ++q)
        if (!kept[q]) traced.push_back(q);

    const int k = static_cast<int>(keep.size());
    const std::size_t dout = std::size_t{1} << k;
    const std::size_t dtr = std::size_t{1} << traced.size();
    ComplexMatrix out(dout, dout);

    for (std::size_t r = 0; r < dout; ++r) {
        for (std::size_t c = 0; c < dout; ++c) {
            cplx acc(0.0, 0.0);
            for (std::size_t t = 0; t < dtr; ++t) {
                std::size_t row = 0, col = 0;
                for (int i = 0; i < k; ++i) {
                    const std::size_t shift = std::size_t{1} << (n - keep[i]);
                    if ((r >> (k - 1 - i)) & 1u) row |= shift;
                    if ((c >> (k - 1 - i)) & 1u) col |= shift;
                }
                for (std::size_t i = 0; i < traced.size(); ++i) {
                    if ((t >> i) & 1u) {
                        const std::size_t shift = std::size_t{1} << (n - traced[i]);
                        row |= shift;
                        col |= shift;
                    }
                }
                acc += rho.matrix(row, col);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix{k, std::move(out)};
}

// Transpose w.r.t. the standard basis on the listed tensor factors (1-based).
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& subsys, int n) {
    const std::size_t d = dim_for_qubits(n);
    if (m.rows() != d || m.cols() != d)
        throw std::invalid_argument("partial_transpose: matrix dimension does not match qubit count");
    std::size_t mask = 0;
    for (int q : subsys) {
        if (q < 1 || q > n) throw std::invalid_argument("partial_transpose: qubit index out of range");
        mask |= std::size_t{1} << (n - q);
    }
    ComplexMatrix out(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const std::size_t rp = (r & ~mask) | (c & mask);
            const std::size_t cp = (c & ~mask) | (r & mask);
            out(r, c) = m(rp, cp);
        }
    }
    return out;
}

struct EigResult {
    std::vector<double> eigenvalues;   // ascending
    ComplexMatrix eigenvectors;        // columns, orthonormal, canonical phases
};

namespace detail {

// Canonical phase: first component of largest modulus made real positive.
inline void fix_phase(ComplexMatrix& v, std::size_t col) {
    std::size_t best = 0;
    double bestmod = -1.0;
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const double m = std::abs(v(i, col));
        if (m > bestmod) { bestmod = m; best = i; }
    }
    if (bestmod <= 0.0) return;
    const cplx phase = std::conj(v(best, col)) / bestmod;
    for (std::size_t i = 0; i < v.rows(); ++i) v(i, col) *= phase;
}

}  // namespace detail

// Deterministic cyclic Jacobi diagonalization of a Hermitian matrix.
// Eigenvalues ascending; degenerate subspaces re-based by Gram-Schmidt
// against the standard basis so the output does not depend on rotation order.
inline EigResult hermitian_eig(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw std::invalid_argument("hermitian_eig: matrix not square");
    const double scale = std::max(1e-300, m.frobenius_norm());
    if (!m.is_hermitian(1e-9 * std::max(1.0, scale)))
        throw std::invalid_argument("hermitian_eig: input not Hermitian");

    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double conv = 1e-13 * scale;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * std::norm(a(i, j));
        if (std::sqrt(off) <= conv) break;
        if (sweep == max_sweeps - 1)
            throw std::runtime_error("hermitian_eig: Jacobi sweep limit reached");

        for (std::size_t p = 0; p < n - 1; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= 1e-2 * conv / static_cast<double>(n)) continue;
                const cplx w = apq / r;  // unit phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                double t;
                if (tau >= 0.0)
                    t = (tau == 0.0) ? 1.0 : -1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx ws = std::conj(w) * s;
                const cplx wc = std::conj(w) * c;

                // A <- G^dag A G with G restricted to columns/rows p,q:
                // G[:,p] = (c, conj(w) s), G[:,q] = (-s, conj(w) c).
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + ws * aiq;
                    a(i, q) = -s * aip + wc * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj + std::conj(ws) * aqj;
                    a(q, j) = -s * apj + std::conj(wc) * aqj;
                }
                a(p, q) = cplx(0.0, 0.0);
                a(q, p) = cplx(0.0, 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip + ws * viq;
                    v(i, q) = -s * vip + wc * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        res.eigenvalues[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, k) = v(i, order[k]);
    }

    // Re-base (near-)degenerate groups on projections of the standard basis.
    const double group_tol = 1e-12 * std::max(1.0, scale);
    std::size_t g0 = 0;
    while (g0 < n) {
        std::size_t g1 = g0 + 1;
        while (g1 < n && res.eigenvalues[g1] - res.eigenvalues[g1 - 1] <= group_tol) ++g1;
        const std::size_t gsz = g1 - g0;
        if (gsz > 1) {
            std::vector<std::vector<cplx>> basis;
            basis.reserve(gsz);
            for (std::size_t e = 0; e < n && basis.size() < gsz; ++e) {
                // u = P e_e with P the projector onto the group subspace
                std::vector<cplx> u(n, cplx(0.0, 0.0));
                for (std::size_t k = g0; k < g1; ++k) {
                    const cplx coef = std::conj(res.eigenvectors(e, k));
                    for (std::size_t i = 0; i < n; ++i) u[i] += coef * res.eigenvectors(i, k);
                }
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& b : basis) {
                        const cplx ov = inner(b, u);
                        for (std::size_t i = 0; i < n; ++i) u[i] -= ov * b[i];
                    }
                const double nu = vec_norm(u);
                if (nu > 1e-6) {
                    for (auto& x : u) x /= nu;
                    basis.push_back(std::move(u));
                }
            }
            if (basis.size() == gsz)
                for (std::size_t k = 0; k < gsz; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        res.eigenvectors(i, g0 + k) = basis[k][i];
        }
        g0 = g1;
    }
    for (std::size_t k = 0; k < n; ++k) detail::fix_phase(res.eigenvectors, k);
    return res;
}

inline double min_eigenvalue(const ComplexMatrix& m) {
    return hermitian_eig(m).eigenvalues.front();
}

inline double fidelity(const DensityMatrix& rho, const PureState& psi) {
    if (rho.nqubits != psi.nqubits)
        throw std::invalid_argument("fidelity: dimension mismatch");
    const std::vector<cplx> rp = rho.matrix * psi.amplitudes;
    const cplx f = inner(psi.amplitudes, rp);
    return f.real();
}

inline long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Orthogonal projector onto the permutation-symmetric subspace (rank n+1),
// assembled from the Dicke basis.
inline ComplexMatrix symmetric_projector(int n) {
    const std::size_t d = dim_for_qubits(n);
    ComplexMatrix p(d, d);
    for (int k = 0; k <= n; ++k) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d; ++i)
            if (std::popcount(static_cast<unsigned long long>(i)) == k) idx.push_back(i);
        const double amp = 1.0 / static_cast<double>(idx.size());
        for (std::size_t a : idx)
            for (std::size_t b : idx) p(a, b) += amp;
    }
    return p;
}

inline bool is_symmetric(const DensityMatrix& rho, double tol) {
    const ComplexMatrix p = symmetric_projector(rho.nqubits);
    const ComplexMatrix prp = p * rho.matrix * p;
    return max_abs_diff(prp, rho.matrix) <= tol;
}

}  // namespace spinwitness
