#pragma once

// Collective spin operators J^0..J^3 (J^0 = (N/2)1), orthonormal measurement
// frames, moment tensors up to third order, the Pauli structure constants f,
// and the standard squeezing parameter xi^2.
//
// Moment computation never materializes products of J matrices: J^i is a sum
// of single-site Paulis, so right-multiplication by J^i costs O(N d^2).

#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "spinwitness/matrix.hpp"
#include "spinwitness/qmat.hpp"

namespace spinwitness {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double vec3_norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
    const double n = vec3_norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return {a[0] / n, a[1] / n, a[2] / n};
}

// Right-handed orthonormal triad (k, l, n); k x l = n.
struct Frame {
    Vec3 k{1.0, 0.0, 0.0};
    Vec3 l{0.0, 1.0, 0.0};
    Vec3 n{0.0, 0.0, 1.0};

    static Frame xyz() { return Frame{}; }

    bool valid(double tol = 1e-12) const {
        const Vec3 c = cross(k, l);
        return std::abs(dot(k, k) - 1.0) <= tol && std::abs(dot(l, l) - 1.0) <= tol &&
               std::abs(dot(n, n) - 1.0) <= tol && std::abs(dot(k, l)) <= tol &&
               std::abs(dot(k, n)) <= tol && std::abs(dot(l, n)) <= tol &&
               std::abs(c[0] - n[0]) <= tol && std::abs(c[1] - n[1]) <= tol &&
               std::abs(c[2] - n[2]) <= tol;
    }

    // Deterministic completion of a unit direction n to a right-handed frame.
    static Frame from_n(const Vec3& n_dir) {
        const Vec3 n = normalized(n_dir);
        Vec3 seed{0.0, 0.0, 1.0};
        if (std::abs(n[2]) > 0.9) seed = Vec3{1.0, 0.0, 0.0};
        Vec3 k = cross(seed, n);
        k = normalized(k);
        const Vec3 l = cross(n, k);
        return Frame{k, l, n};
    }
};

inline void require_valid_frame(const Frame& f, double tol = 1e-9) {
    if (!f.valid(tol)) throw std::invalid_argument("frame is not orthonormal right-handed");
}

// Dense J^0..J^3.
inline std::array<ComplexMatrix, 4> spin_ops(int n) {
    const std::size_t d = dim_for_qubits(n);
    std::array<ComplexMatrix, 4> j{ComplexMatrix(d, d), ComplexMatrix(d, d), ComplexMatrix(d, d),
                                   ComplexMatrix(d, d)};
    for (std::size_t i = 0; i < d; ++i) j[0](i, i) = 0.5 * n;
    for (std::size_t i = 0; i < d; ++i) {
        j[3](i, i) = 0.5 * n - static_cast<double>(std::popcount(static_cast<unsigned long long>(i)));
        for (int a = 0; a < n; ++a) {
            const std::size_t flipped = i ^ (std::size_t{1} << a);
            j[1](i, flipped) += 0.5;
            // sigma^y: <1|s|0> = i, <0|s|1> = -i
            j[2](i, flipped) += ((i >> a) & 1u) ? cplx(0.0, 0.5) : cplx(0.0, -0.5);
        }
    }
    return j;
}

// B = A * J^mu without building J^mu.
inline ComplexMatrix apply_spin_right(const ComplexMatrix& a, int mu, int n) {
    const std::size_t d = dim_for_qubits(n);
    if (a.cols() != d) throw std::invalid_argument("apply_spin_right: shape mismatch");
    ComplexMatrix b(a.rows(), d);
    if (mu == 0) {
        b = a;
        b *= cplx(0.5 * n, 0.0);
        return b;
    }
    if (mu == 3) {
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < d; ++c)
                b(r, c) = a(r, c) *
                          (0.5 * n - static_cast<double>(
                                         std::popcount(static_cast<unsigned long long>(c))));
        return b;
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            cplx acc(0.0, 0.0);
            for (int q = 0; q < n; ++q) {
                const cplx av = a(r, c ^ (std::size_t{1} << q));
                if (mu == 1)
                    acc += av;
                else
                    acc += ((c >> q) & 1u) ? cplx(0.0, -1.0) * av : cplx(0.0, 1.0) * av;
            }
            b(r, c) = 0.5 * acc;
        }
    }
    return b;
}

// tr(A * J^mu) without building the product.
inline cplx trace_with_spin(const ComplexMatrix& a, int mu, int n) {
    const std::size_t d = dim_for_qubits(n);
    if (a.rows() != d || a.cols() != d) throw std::invalid_argument("trace_with_spin: shape mismatch");
    cplx acc(0.0, 0.0);
    if (mu == 0) return cplx(0.5 * n, 0.0) * a.trace();
    if (mu == 3) {
        for (std::size_t r = 0; r < d; ++r)
            acc += a(r, r) *
                   (0.5 * n -
                    static_cast<double>(std::popcount(static_cast<unsigned long long>(r))));
        return acc;
    }
    for (std::size_t r = 0; r < d; ++r) {
        for (int q = 0; q < n; ++q) {
            const cplx av = a(r, r ^ (std::size_t{1} << q));
            if (mu == 1)
                acc += 0.5 * av;
            else
                acc += ((r >> q) & 1u) ? cplx(0.0, -0.5) * av : cplx(0.0, 0.5) * av;
        }
    }
    return acc;
}

inline std::vector<cplx> apply_spin_vec(int mu, const std::vector<cplx>& v, int n) {
    const std::size_t d = dim_for_qubits(n);
    if (v.size() != d) throw std::invalid_argument("apply_spin_vec: shape mismatch");
    std::vector<cplx> out(d, cplx(0.0, 0.0));
    if (mu == 0) {
        for (std::size_t i = 0; i < d; ++i) out[i] = 0.5 * n * v[i];
        return out;
    }
    if (mu == 3) {
        for (std::size_t i = 0; i < d; ++i)
            out[i] = v[i] * (0.5 * n - static_cast<double>(
                                           std::popcount(static_cast<unsigned long long>(i))));
        return out;
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (int q = 0; q < n; ++q) {
            const std::size_t j = i ^ (std::size_t{1} << q);
            // out_i += <i|J|j> v_j ; for sigma^y the matrix element is
            // i/2 when bit q of i is set, -i/2 otherwise.
            if (mu == 1)
                out[i] += 0.5 * v[j];
            else
                out[i] += ((i >> q) & 1u) ? cplx(0.0, 0.5) * v[j] : cplx(0.0, -0.5) * v[j];
        }
    }
    return out;
}

// First, second and third spin moments in operator order,
// m3[a][b][g] = tr(rho J^a J^b J^g). Symmetrization happens at contraction.
struct SpinMoments {
    int nqubits = 0;
    std::array<cplx, 4> m1{};
    std::array<std::array<cplx, 4>, 4> m2{};
    std::array<std::array<std::array<cplx, 4>, 4>, 4> m3{};
};

inline SpinMoments moments(const DensityMatrix& rho) {
    const int n = rho.nqubits;
    SpinMoments mom;
    mom.nqubits = n;
    for (int a = 0; a < 4; ++a) {
        const ComplexMatrix ra = apply_spin_right(rho.matrix, a, n);
        mom.m1[a] = ra.trace();
        for (int b = 0; b < 4; ++b) {
            const ComplexMatrix rab = apply_spin_right(ra, b, n);
            mom.m2[a][b] = rab.trace();
            for (int g = 0; g < 4; ++g) mom.m3[a][b][g] = trace_with_spin(rab, g, n);
        }
    }
    mom.m1[0] = cplx(0.5 * n, 0.0);
    return mom;
}

inline SpinMoments moments(const PureState& psi) {
    const int n = psi.nqubits;
    SpinMoments mom;
    mom.nqubits = n;
    std::array<std::vector<cplx>, 4> jv;
    for (int a = 0; a < 4; ++a) jv[a] = apply_spin_vec(a, psi.amplitudes, n);
    for (int a = 0; a < 4; ++a) {
        mom.m1[a] = inner(psi.amplitudes, jv[a]);
        for (int b = 0; b < 4; ++b) mom.m2[a][b] = inner(jv[a], jv[b]);
    }
    for (int b = 0; b < 4; ++b)
        for (int g = 0; g < 4; ++g) {
            const std::vector<cplx> jbg = apply_spin_vec(b, jv[g], n);
            for (int a = 0; a < 4; ++a) mom.m3[a][b][g] = inner(jv[a], jbg);
        }
    mom.m1[0] = cplx(0.5 * n, 0.0);
    return mom;
}

inline std::array<ComplexMatrix, 3> rotate_spin(const std::array<ComplexMatrix, 4>& j,
                                                const Frame& frame) {
    require_valid_frame(frame);
    auto combine = [&](const Vec3& v) {
        ComplexMatrix m = j[1] * cplx(v[0], 0.0);
        m += j[2] * cplx(v[1], 0.0);
        m += j[3] * cplx(v[2], 0.0);
        return m;
    };
    return {combine(frame.k), combine(frame.l), combine(frame.n)};
}

// Structure constants: sigma^mu sigma^nu = f^{mu nu}_gamma sigma^gamma.
struct FTensor {
    std::array<std::array<std::array<cplx, 4>, 4>, 4> f{};

    const cplx& operator()(int mu, int nu, int gamma) const { return f[mu][nu][gamma]; }
};

inline const FTensor& f_tensor() {
    static const FTensor tensor = [] {
        FTensor t;
        for (int a = 0; a < 4; ++a) {
            t.f[0][a][a] = 1.0;
            t.f[a][0][a] = 1.0;
        }
        for (int i = 1; i <= 3; ++i) t.f[i][i][0] = 1.0;
        // f^{ij}_l = i eps^{ijl}
        const int eps[3][3][3] = {{{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
                                  {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
                                  {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j)
                for (int l = 1; l <= 3; ++l)
                    if (eps[i - 1][j - 1][l - 1] != 0)
                        t.f[i][j][l] = cplx(0.0, static_cast<double>(eps[i - 1][j - 1][l - 1]));
        return t;
    }();
    return tensor;
}

// Rows of the SO(3) image of U under U sigma^i U^dag = R^i_j sigma^j.
inline std::array<Vec3, 3> rotation_from_su2(const ComplexMatrix& u) {
    if (u.rows() != 2 || u.cols() != 2)
        throw std::invalid_argument("rotation_from_su2: need a 2x2 matrix");
    std::array<Vec3, 3> r{};
    const ComplexMatrix ud = u.adjoint();
    for (int i = 1; i <= 3; ++i) {
        const ComplexMatrix m = u * pauli(i) * ud;
        for (int j = 1; j <= 3; ++j) {
            const cplx c = 0.5 * (pauli(j) * m).trace();
            r[i - 1][j - 1] = c.real();
        }
    }
    return r;
}

// Inverse of rotation_from_su2 up to overall sign: the SU(2) element whose
// adjoint action realizes the rotation with the given rows.
inline ComplexMatrix su2_from_rotation(const std::array<Vec3, 3>& rows) {
    // The adjoint action of exp(-i t/2 a.sigma) has rows Rot(a,t)^T, so the
    // quaternion is extracted from the transpose of the requested rows.
    double m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = rows[j][i];
    double w, x, y, z;
    const double tr = m[0][0] + m[1][1] + m[2][2];
    if (tr > 0.0) {
        double s = std::sqrt(tr + 1.0) * 2.0;
        w = 0.25 * s;
        x = (m[2][1] - m[1][2]) / s;
        y = (m[0][2] - m[2][0]) / s;
        z = (m[1][0] - m[0][1]) / s;
    } else if (m[0][0] > m[1][1] && m[0][0] > m[2][2]) {
        double s = std::sqrt(1.0 + m[0][0] - m[1][1] - m[2][2]) * 2.0;
        w = (m[2][1] - m[1][2]) / s;
        x = 0.25 * s;
        y = (m[0][1] + m[1][0]) / s;
        z = (m[0][2] + m[2][0]) / s;
    } else if (m[1][1] > m[2][2]) {
        double s = std::sqrt(1.0 + m[1][1] - m[0][0] - m[2][2]) * 2.0;
        w = (m[0][2] - m[2][0]) / s;
        x = (m[0][1] + m[1][0]) / s;
        y = 0.25 * s;
        z = (m[1][2] + m[2][1]) / s;
    } else {
        double s = std::sqrt(1.0 + m[2][2] - m[0][0] - m[1][1]) * 2.0;
        w = (m[1][0] - m[0][1]) / s;
        x = (m[0][2] + m[2][0]) / s;
        y = (m[1][2] + m[2][1]) / s;
        z = 0.25 * s;
    }
    ComplexMatrix u(2, 2);
    // w 1 - i (x sx + y sy + z sz)
    u(0, 0) = cplx(w, -z);
    u(0, 1) = cplx(-y, -x);
    u(1, 0) = cplx(y, -x);
    u(1, 1) = cplx(w, z);
    return u;
}

inline ComplexMatrix su2_from_frame(const Frame& f) {
    require_valid_frame(f);
    return su2_from_rotation({f.k, f.l, f.n});
}

// xi^2 = 2 <Delta J_n^2> / (N/2)
inline double xi_squared(const DensityMatrix& rho, const Vec3& n_dir) {
    const Vec3 nd = normalized(n_dir);
    const int n = rho.nqubits;
    ComplexMatrix jn = apply_spin_right(rho.matrix, 1, n) * cplx(nd[0], 0.0);
    jn += apply_spin_right(rho.matrix, 2, n) * cplx(nd[1], 0.0);
    jn += apply_spin_right(rho.matrix, 3, n) * cplx(nd[2], 0.0);
    const double mean = jn.trace().real();
    cplx second(0.0, 0.0);
    for (int i = 1; i <= 3; ++i) second += trace_with_spin(jn, i, n) * cplx(nd[i - 1], 0.0);
    const double var = second.real() - mean * mean;
    return 2.0 * var / (0.5 * n);
}

}  // namespace spinwitness
