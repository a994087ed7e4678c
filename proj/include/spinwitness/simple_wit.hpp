#pragma once

// Simplified three-qubit witnesses built from projectors onto rotated GHZ/W
// states, their symmetric-subspace projections, and the corresponding
// collective-spin polynomial criteria.
//
// The polynomial criteria are normalized so that on symmetric states they
// equal the plain witness sum over unordered qubit triples: the raw
// polynomials carry family-dependent combinatorial factors (2 for the
// GHZ-projector family, 6 for the W-projector family), which the
// oracle-equality tests pin down.

#include <cmath>
#include <stdexcept>

#include "spinwitness/collective.hpp"
#include "spinwitness/matrix.hpp"
#include "spinwitness/pairwise.hpp"
#include "spinwitness/qmat.hpp"
#include "spinwitness/states.hpp"

namespace spinwitness {

enum class SimpleWitnessKind { GHZ, W1, W2 };

enum class SimpleCriterion { SS1, SS2, SS3, SS1P, SS2P, SS3P };

inline const char* simple_criterion_name(SimpleCriterion c) {
    switch (c) {
        case SimpleCriterion::SS1: return "ss1";
        case SimpleCriterion::SS2: return "ss2";
        case SimpleCriterion::SS3: return "ss3";
        case SimpleCriterion::SS1P: return "ss1p";
        case SimpleCriterion::SS2P: return "ss2p";
        case SimpleCriterion::SS3P: return "ss3p";
    }
    return "?";
}

// (3/4)1 - |GHZ><GHZ|, (2/3)1 - |W><W|, (1/2)1 - |GHZ><GHZ|; the projected
// variants replace 1 by P_3 (and 2/3 by 4/9, the maximal overlap between a
// symmetric separable state and |W_3>). The reference states live in the
// rotated frame, the same unitary on all three qubits.
inline ComplexMatrix witness_matrix(SimpleWitnessKind kind, bool projected, const Frame& frame) {
    const ComplexMatrix u = su2_from_frame(frame);
    const ComplexMatrix u3 = kron(kron(u, u), u);
    const PureState ref = (kind == SimpleWitnessKind::W1) ? w_state(3) : ghz(3);
    const std::vector<cplx> rot = u3 * ref.amplitudes;
    const ComplexMatrix proj = outer(rot, rot);

    double c;
    switch (kind) {
        case SimpleWitnessKind::GHZ: c = 0.75; break;
        case SimpleWitnessKind::W1: c = projected ? 4.0 / 9.0 : 2.0 / 3.0; break;
        case SimpleWitnessKind::W2: c = 0.5; break;
        default: throw std::invalid_argument("witness_matrix: bad kind");
    }
    ComplexMatrix base = projected ? symmetric_projector(3) : ComplexMatrix::identity(8);
    base *= cplx(c, 0.0);
    base -= proj;
    return base;
}

// Brute-force sum over unordered qubit triples of tr(rho_abc W).
inline double witness_sum_oracle(const DensityMatrix& rho, const ComplexMatrix& w) {
    if (rho.nqubits < 3) throw std::invalid_argument("witness_sum_oracle: need N >= 3");
    if (w.rows() != 8 || w.cols() != 8)
        throw std::invalid_argument("witness_sum_oracle: witness must be 8x8");
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

namespace detail {

inline double frame_third_moment(const SpinMoments& m, const Vec3& a, const Vec3& b,
                                 const Vec3& c) {
    cplx acc(0.0, 0.0);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j)
            for (int k = 1; k <= 3; ++k)
                acc += a[i - 1] * b[j - 1] * c[k - 1] * m.m3[i][j][k];
    return acc.real();
}

}  // namespace detail

// The six collective-spin polynomials; lhs < 0 flags (GHZ- or W-type)
// three-qubit entanglement. On symmetric states lhs equals
// witness_sum_oracle of the matching witness.
inline CriterionReport criterion_simple(const SpinMoments& m, SimpleCriterion which,
                                        const Frame& frame) {
    require_valid_frame(frame);
    const double n = static_cast<double>(m.nqubits);
    const Vec3 &k = frame.k, &l = frame.l, &nd = frame.n;

    const double jk = detail::frame_first_moment(m, k);
    const double jn = detail::frame_first_moment(m, nd);
    const double jk2 = detail::frame_second_moment(m, k);
    const double jl2 = detail::frame_second_moment(m, l);
    const double jn2 = detail::frame_second_moment(m, nd);
    const double jk3 = detail::frame_third_moment(m, k, k, k);
    const double jn3 = detail::frame_third_moment(m, nd, nd, nd);
    const double jlkl = detail::frame_third_moment(m, l, k, l);
    const double jlnl = detail::frame_third_moment(m, l, nd, l);
    const double jknk = detail::frame_third_moment(m, k, nd, k);

    double poly = 0.0;
    double scale = 1.0;
    switch (which) {
        case SimpleCriterion::SS1:
            poly = -jk3 / 3.0 + jlkl - (n - 2.0) / 2.0 * jn2 + jk / 3.0 +
                   n * (n - 2.0) * (5.0 * n - 2.0) / 24.0;
            scale = 2.0;
            break;
        case SimpleCriterion::SS2:
            poly = jn3 - 2.0 * jlnl - 2.0 * jknk -
                   (n - 2.0) / 2.0 * (2.0 * jk2 + 2.0 * jl2 - jn2) -
                   (n * n - 4.0 * n + 8.0) / 4.0 * jn +
                   n * (n - 2.0) * (13.0 * n - 4.0) / 24.0;
            scale = 6.0;
            break;
        case SimpleCriterion::SS3:
            poly = -jk3 / 3.0 + jlkl - (n - 2.0) / 2.0 * jn2 + jk / 3.0 +
                   n * n * (n - 2.0) / 8.0;
            scale = 2.0;
            break;
        case SimpleCriterion::SS1P:
            poly = -jk3 / 3.0 + jlkl + (n - 2.0) / 2.0 * (jk2 + jl2) + jk / 3.0 +
                   n * (n - 2.0) * (n - 4.0) / 12.0;
            scale = 2.0;
            break;
        case SimpleCriterion::SS2P:
            poly = jn3 - 2.0 * jlnl - 2.0 * jknk +
                   (n - 2.0) / 9.0 * (12.5 * jn2 - (jl2 + jk2)) -
                   (n * n - 4.0 * n + 8.0) / 4.0 * jn +
                   7.0 * n * (n - 2.0) * (n - 4.0) / 72.0;
            scale = 6.0;
            break;
        case SimpleCriterion::SS3P:
            // Coefficients re-derived from W_W2 + (1/2)(P_3 - 1); the second-
            // moment and constant terms are twice the commonly printed ones,
            // which fail the witness-sum equality on symmetric states.
            poly = -jk3 / 3.0 + jlkl + (n - 2.0) / 6.0 * (2.0 * (jk2 + jl2) - jn2) + jk / 3.0 +
                   n * (n - 2.0) * (n - 4.0) / 24.0;
            scale = 2.0;
            break;
    }
    CriterionReport rep = make_report(std::string("simple:") + simple_criterion_name(which),
                                      poly / scale, 0.0);
    rep.params["nqubits"] = n;
    return rep;
}

inline SimpleWitnessKind simple_criterion_witness(SimpleCriterion c) {
    switch (c) {
        case SimpleCriterion::SS1:
        case SimpleCriterion::SS1P: return SimpleWitnessKind::GHZ;
        case SimpleCriterion::SS2:
        case SimpleCriterion::SS2P: return SimpleWitnessKind::W1;
        case SimpleCriterion::SS3:
        case SimpleCriterion::SS3P: return SimpleWitnessKind::W2;
    }
    return SimpleWitnessKind::GHZ;
}

inline bool simple_criterion_projected(SimpleCriterion c) {
    return c == SimpleCriterion::SS1P || c == SimpleCriterion::SS2P || c == SimpleCriterion::SS3P;
}

}  // namespace spinwitness
