#pragma once

// Tripartite criterion machinery: SL(2,C) -> Lorentz maps, the K coefficient
// tensors of the GHZ and W witness families, the X parameter contracted from
// third spin moments, Dicke-state closed forms, and brute-force triple-sum
// oracles used to pin every convention.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spinwitness/collective.hpp"
#include "spinwitness/matrix.hpp"
#include "spinwitness/qmat.hpp"
#include "spinwitness/states.hpp"

namespace spinwitness {

struct SL2C {
    ComplexMatrix mat;

    SL2C() : mat(ComplexMatrix::identity(2)) {}
    explicit SL2C(ComplexMatrix m, double det_tol = 1e-10) : mat(std::move(m)) {
        if (mat.rows() != 2 || mat.cols() != 2) throw std::invalid_argument("SL2C: need 2x2");
        if (std::abs(det() - cplx(1.0, 0.0)) > det_tol)
            throw std::invalid_argument("SL2C: determinant is not 1");
    }

    cplx det() const { return mat(0, 0) * mat(1, 1) - mat(0, 1) * mat(1, 0); }
};

struct LorentzMatrix {
    std::array<std::array<double, 4>, 4> m{};

    static LorentzMatrix identity() {
        LorentzMatrix l;
        for (int i = 0; i < 4; ++i) l.m[i][i] = 1.0;
        return l;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    const double& operator()(int i, int j) const { return m[i][j]; }

    // max-norm of Lambda^T g Lambda - g with g = diag(1,-1,-1,-1)
    double minkowski_defect() const {
        const double g[4] = {1.0, -1.0, -1.0, -1.0};
        double worst = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += m[k][i] * g[k] * m[k][j];
                const double target = (i == j) ? g[i] : 0.0;
                worst = std::max(worst, std::abs(acc - target));
            }
        return worst;
    }

    double det() const {
        // expansion by minors is plenty for 4x4
        auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
            return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
                   m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
                   m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
        };
        return m[0][0] * det3(1, 2, 3, 1, 2, 3) - m[0][1] * det3(1, 2, 3, 0, 2, 3) +
               m[0][2] * det3(1, 2, 3, 0, 1, 3) - m[0][3] * det3(1, 2, 3, 0, 1, 2);
    }

    bool is_restricted(double tol = 1e-9) const {
        return minkowski_defect() <= tol && m[0][0] >= 1.0 - tol && det() >= 1.0 - 10.0 * tol;
    }

    bool is_rotation_embedding(double tol = 1e-9) const {
        if (std::abs(m[0][0] - 1.0) > tol) return false;
        for (int i = 1; i < 4; ++i)
            if (std::abs(m[0][i]) > tol || std::abs(m[i][0]) > tol) return false;
        return is_restricted(tol);
    }
};

namespace detail {

inline LorentzMatrix pauli_map(const ComplexMatrix& left, const ComplexMatrix& right,
                               const char* what) {
    LorentzMatrix l;
    for (int mu = 0; mu < 4; ++mu) {
        const ComplexMatrix image = left * pauli(mu) * right;
        for (int nu = 0; nu < 4; ++nu) {
            const cplx c = 0.5 * (pauli(nu) * image).trace();
            if (std::abs(c.imag()) > 1e-9)
                throw std::runtime_error(std::string(what) + ": non-real expansion coefficient");
            l(mu, nu) = c.real();
        }
    }
    return l;
}

}  // namespace detail

// Conjugate map: A* sigma^mu A^T = Lambda^mu_nu sigma^nu.
inline LorentzMatrix lorentz_conjugate(const SL2C& a) {
    return detail::pauli_map(a.mat.conjugate(), a.mat.transpose(), "lorentz_conjugate");
}

// Direct map: B sigma^mu B^dag = L^mu_nu sigma^nu; unitary B gives 1 (+) SO(3).
inline LorentzMatrix lorentz_direct(const SL2C& b) {
    return detail::pauli_map(b.mat, b.mat.adjoint(), "lorentz_direct");
}

enum class WitnessFamily { GHZ, W };

// Real coefficient tensor of a partially transposed witness in the Pauli
// basis: |psi><psi|^T1 = (1/8) K_{abg} sigma^a x sigma^b x sigma^g.
struct KTensor {
    std::array<std::array<std::array<double, 4>, 4>, 4> k{};
    WitnessFamily family = WitnessFamily::W;

    double& operator()(int a, int b, int g) { return k[a][b][g]; }
    const double& operator()(int a, int b, int g) const { return k[a][b][g]; }

    KTensor symmetrized() const {
        KTensor s;
        s.family = family;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int g = 0; g < 4; ++g)
                    s.k[a][b][g] = (k[a][b][g] + k[a][g][b] + k[b][a][g] + k[b][g][a] +
                                    k[g][a][b] + k[g][b][a]) /
                                   6.0;
        return s;
    }

    ComplexMatrix reconstruct() const {
        ComplexMatrix m(8, 8);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                for (int g = 0; g < 4; ++g) {
                    if (k[a][b][g] == 0.0) continue;
                    m += kron(kron(pauli(a), pauli(b)), pauli(g)) * cplx(k[a][b][g] / 8.0, 0.0);
                }
        return m;
    }
};

inline KTensor k_tensor_ghz(const LorentzMatrix& lam, const LorentzMatrix& l) {
    KTensor k;
    k.family = WitnessFamily::GHZ;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int g = 0; g < 4; ++g)
                k(a, b, g) = lam(0, a) * l(0, b) * l(0, g) + lam(0, a) * l(3, b) * l(3, g) +
                             lam(1, a) * l(1, b) * l(1, g) +
                             lam(3, a) * (l(0, b) * l(3, g) + l(3, b) * l(0, g)) -
                             lam(1, a) * l(2, b) * l(2, g) +
                             lam(2, a) * (l(1, b) * l(2, g) + l(2, b) * l(1, g));
    return k;
}

inline KTensor k_tensor_w(const LorentzMatrix& lam, const LorentzMatrix& r) {
    if (!r.is_rotation_embedding(1e-8))
        throw std::invalid_argument("k_tensor_w: R is not a rotation embedding");
    KTensor k;
    k.family = WitnessFamily::W;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int g = 0; g < 4; ++g) {
                double acc = 0.0;
                acc += 3.0 * lam(0, a) * r(0, b) * r(0, g);
                acc -= 3.0 * lam(3, a) * r(3, b) * r(3, g);
                acc += lam(0, a) * (r(0, b) * r(3, g) + r(3, b) * r(0, g));
                acc += lam(3, a) * r(0, b) * r(0, g);
                acc -= lam(0, a) * r(3, b) * r(3, g);
                acc -= lam(3, a) * (r(0, b) * r(3, g) + r(3, b) * r(0, g));
                acc += 2.0 * lam(1, a) * (r(0, b) * r(1, g) + r(1, b) * r(0, g));
                acc += 2.0 * lam(1, a) * (r(1, b) * r(3, g) + r(3, b) * r(1, g));
                acc -= 2.0 * lam(2, a) * (r(0, b) * r(2, g) + r(2, b) * r(0, g));
                acc -= 2.0 * lam(2, a) * (r(2, b) * r(3, g) + r(3, b) * r(2, g));
                acc += 2.0 * lam(0, a) * r(1, b) * r(1, g);
                acc += 2.0 * lam(3, a) * r(1, b) * r(1, g);
                acc += 2.0 * lam(3, a) * r(2, b) * r(2, g);
                acc += 2.0 * lam(0, a) * r(2, b) * r(2, g);
                k(a, b, g) = acc / 3.0;
            }
    return k;
}

// X = K_(abg) { 2<J^a J^b J^g> - 3 f^{ab}_m <J^(g J^m)>
//               + f^{ab}_m f^{(gm)}_n <J^n> - 1/2 f^{ab}_m f^{[gm]}_n <J^n> }.
// Negative X signals tripartite entanglement. X equals 12x the triple sum of
// the generating witness on symmetric states (checked by the oracle tests).
inline double x_parameter(const SpinMoments& mom, const KTensor& kt) {
    const KTensor ks = kt.symmetrized();
    const FTensor& f = f_tensor();
    cplx x(0.0, 0.0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (int g = 0; g < 4; ++g) {
                const double kv = ks(a, b, g);
                if (kv == 0.0) continue;
                cplx term = 2.0 * mom.m3[a][b][g];
                for (int m = 0; m < 4; ++m) {
                    const cplx fab = f(a, b, m);
                    if (fab == cplx(0.0, 0.0)) continue;
                    term -= 3.0 * fab * 0.5 * (mom.m2[g][m] + mom.m2[m][g]);
                    for (int nu = 0; nu < 4; ++nu) {
                        const cplx fsym = 0.5 * (f(g, m, nu) + f(m, g, nu));
                        const cplx fanti = 0.5 * (f(g, m, nu) - f(m, g, nu));
                        term += fab * (fsym - 0.5 * fanti) * mom.m1[nu];
                    }
                }
                x += kv * term;
            }
    if (std::abs(x.imag()) > 1e-6)
        throw std::runtime_error("x_parameter: imaginary residue exceeds tolerance");
    return x.real();
}

inline PureState apply_local_3q(const ComplexMatrix& q1, const ComplexMatrix& q2,
                                const ComplexMatrix& q3, const PureState& psi) {
    if (psi.nqubits != 3) throw std::invalid_argument("apply_local_3q: need 3 qubits");
    const ComplexMatrix op = kron(kron(q1, q2), q3);
    return PureState{3, op * psi.amplitudes};
}

// Brute-force sum over all qubit triples of tr(rho_abc |psi><psi|^T1);
// psi may be unnormalized.
inline double triple_sum_oracle(const DensityMatrix& rho, const PureState& psi) {
    if (rho.nqubits < 3) throw std::invalid_argument("triple_sum_oracle: need N >= 3");
    if (psi.nqubits != 3) throw std::invalid_argument("triple_sum_oracle: psi must be 3-qubit");
    const ComplexMatrix w = partial_transpose(outer(psi.amplitudes, psi.amplitudes), {1}, 3);
    double sum = 0.0;
    const int n = rho.nqubits;
    for (int a = 1; a <= n - 2; ++a)
        for (int b = a + 1; b <= n - 1; ++b)
            for (int c = b + 1; c <= n; ++c) {
                const DensityMatrix red = partial_trace(rho, {a, b, c});
                cplx t(0.0, 0.0);
                for (int i = 0; i < 8; ++i)
                    for (int j = 0; j < 8; ++j) t += red.matrix(i, j) * w(j, i);
                sum += t.real();
            }
    return sum;
}

// Cyclically symmetrized witness of the chosen family: the average of the
// three partial transposes of (A,S,S)-, (S,A,S)- and (S,S,A)-decorated
// reference states, summed over all qubit triples. Valid as an entanglement
// witness sum on arbitrary (not necessarily symmetric) states.
inline double symmetrized_witness_avg(const DensityMatrix& rho, WitnessFamily family,
                                      const SL2C& a, const SL2C& s) {
    if (rho.nqubits < 3) throw std::invalid_argument("symmetrized_witness_avg: need N >= 3");
    const PureState ref = (family == WitnessFamily::GHZ) ? ghz(3) : w_state(3);
    const PureState p1 = apply_local_3q(a.mat, s.mat, s.mat, ref);
    const PureState p2 = apply_local_3q(s.mat, a.mat, s.mat, ref);
    const PureState p3 = apply_local_3q(s.mat, s.mat, a.mat, ref);
    ComplexMatrix w = partial_transpose(outer(p1.amplitudes, p1.amplitudes), {1}, 3);
    w += partial_transpose(outer(p2.amplitudes, p2.amplitudes), {2}, 3);
    w += partial_transpose(outer(p3.amplitudes, p3.amplitudes), {3}, 3);
    w *= cplx(1.0 / 3.0, 0.0);

    double sum = 0.0;
    const int n = rho.nqubits;
    for (int qa = 1; qa <= n - 2; ++qa)
        for (int qb = qa + 1; qb <= n - 1; ++qb)
            for (int qc = qb + 1; qc <= n; ++qc) {
                const DensityMatrix red = partial_trace(rho, {qa, qb, qc});
                cplx t(0.0, 0.0);
                for (int i = 0; i < 8; ++i)
                    for (int j = 0; j < 8; ++j) t += red.matrix(i, j) * w(j, i);
                sum += t.real();
            }
    return sum;
}

// Closed-form data for the tripartite analysis of |Psi_{N,k}>. Generic k
// yields two negative eigenvalues of rho_3^T1 and hence two independent
// witnesses; k = 1 leaves only the first branch, k = 0 none.
struct DickeTripleBranch {
    double mu_minus = 0.0;   // negative eigenvalue of rho_3^T1
    double alpha = 0.0;      // eigenvector parameter
    double psi_norm2 = 0.0;  // |psi|^2 = (2 alpha^2 + 1) / (3 alpha)
    SL2C a;
    LorentzMatrix lambda;
    LorentzMatrix rotation;
    KTensor k;
    PureState psi;  // unnormalized SL(2,C)-form eigenvector (oracle input)
};

struct DickeTripleData {
    long long kappa0 = 0, kappa1 = 0, omega = 0, omega_prime = 0;
    LorentzMatrix r_trivial;
    LorentzMatrix r_sigma_x;
    std::optional<DickeTripleBranch> first;   // from mu_-, A, Lambda(A), R = 1
    std::optional<DickeTripleBranch> second;  // from mu_-', A', Lambda(A'), R(sigma^x)
};

inline DickeTripleData dicke_triple_data(int n, int k) {
    if (n < 3 || k < 0 || k > n) throw std::invalid_argument("dicke_triple_data: bad parameters");
    DickeTripleData d;
    d.kappa0 = binomial(n - 3, k);
    d.kappa1 = binomial(n - 3, k - 3);
    d.omega = binomial(n - 3, k - 1);
    d.omega_prime = binomial(n - 3, k - 2);
    d.r_trivial = LorentzMatrix::identity();

    ComplexMatrix isx = pauli(1) * cplx(0.0, 1.0);
    d.r_sigma_x = lorentz_direct(SL2C(isx));

    const double norm = static_cast<double>(binomial(n, k));
    const double k0 = static_cast<double>(d.kappa0), k1 = static_cast<double>(d.kappa1);
    const double om = static_cast<double>(d.omega), op = static_cast<double>(d.omega_prime);

    if (d.omega > 0 && k0 * op < om * om) {
        DickeTripleBranch b;
        b.mu_minus =
            0.5 / norm * (k0 + 2.0 * op - std::sqrt((k0 - 2.0 * op) * (k0 - 2.0 * op) + 8.0 * om * om));
        const double q = (k0 - 2.0 * op) / (4.0 * om);
        b.alpha = q + std::sqrt(q * q + 0.5);
        b.psi_norm2 = (2.0 * b.alpha * b.alpha + 1.0) / (3.0 * b.alpha);
        ComplexMatrix am(2, 2);
        am(0, 1) = 1.0 / std::sqrt(b.alpha);
        am(1, 0) = -std::sqrt(b.alpha);
        b.a = SL2C(am);
        b.lambda = lorentz_conjugate(b.a);
        b.rotation = d.r_trivial;
        b.k = k_tensor_w(b.lambda, b.rotation);
        b.psi = apply_local_3q(b.a.mat, ComplexMatrix::identity(2), ComplexMatrix::identity(2),
                               w_state(3));
        d.first = std::move(b);
    }
    if (d.omega_prime > 0 && k1 * om < op * op) {
        DickeTripleBranch b;
        b.mu_minus =
            0.5 / norm * (k1 + 2.0 * om - std::sqrt((k1 - 2.0 * om) * (k1 - 2.0 * om) + 8.0 * op * op));
        const double q = (k1 - 2.0 * om) / (4.0 * op);
        b.alpha = q + std::sqrt(q * q + 0.5);
        b.psi_norm2 = (2.0 * b.alpha * b.alpha + 1.0) / (3.0 * b.alpha);
        ComplexMatrix am(2, 2);
        am(0, 0) = cplx(0.0, std::sqrt(b.alpha));
        am(1, 1) = cplx(0.0, -1.0 / std::sqrt(b.alpha));
        b.a = SL2C(am);
        b.lambda = lorentz_conjugate(b.a);
        b.rotation = d.r_sigma_x;
        b.k = k_tensor_w(b.lambda, b.rotation);
        b.psi = apply_local_3q(b.a.mat, isx, isx, w_state(3));
        d.second = std::move(b);
    }
    return d;
}

// alpha for |W_N>: (N-3)/4 + sqrt(((N-3)/4)^2 + 1/2).
inline double w_state_alpha(int n) {
    const double q = (static_cast<double>(n) - 3.0) / 4.0;
    return q + std::sqrt(q * q + 0.5);
}

}  // namespace spinwitness
