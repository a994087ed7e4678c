#pragma once

// Bipartite entanglement criterion from collective second moments: witness
// extraction from two-qubit reductions, the phi-minimized inequality, its
// symmetric-state simplification, and Dicke-state closed forms.

#include <cmath>
#include <map>
#include <optional>
#include <string>

#include "spinwitness/collective.hpp"
#include "spinwitness/matrix.hpp"
#include "spinwitness/parallel.hpp"
#include "spinwitness/qmat.hpp"

namespace spinwitness {

// margin = rhs - lhs; margin > 0 means the inequality fired, i.e. the
// criterion detected entanglement. Raw margins are reported; thresholds are
// the caller's business.
struct CriterionReport {
    std::string criterion_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool violated = false;
    std::map<std::string, double> params;
    std::optional<double> error_bar;
};

inline CriterionReport make_report(std::string id, double lhs, double rhs) {
    CriterionReport r;
    r.criterion_id = std::move(id);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.violated = lhs < rhs;
    return r;
}

enum class PairWitnessStatus { Found, NoWitness };

struct PairWitness {
    PairWitnessStatus status = PairWitnessStatus::NoWitness;
    Frame frame;
    double phi = 0.0;
    double lambda_min = 0.0;
};

// Witness extraction from a two-qubit reduction: take the negative-eigenvalue
// eigenvector of rho^T1, re-phase it into Hermitian coefficient form,
// diagonalize, and read off the frame (adjoint image of U) and the angle phi.
inline PairWitness extract_pair_witness(const DensityMatrix& rho_ab, double npt_tol = 1e-10) {
    if (rho_ab.nqubits != 2)
        throw std::invalid_argument("extract_pair_witness: need a two-qubit state");
    const ComplexMatrix pt = partial_transpose(rho_ab.matrix, {1}, 2);
    const EigResult eig = hermitian_eig(pt);
    PairWitness out;
    out.lambda_min = eig.eigenvalues.front();
    if (out.lambda_min >= -npt_tol) {
        out.status = PairWitnessStatus::NoWitness;
        return out;
    }

    std::array<cplx, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = eig.eigenvectors(i, 0);

    // Global phase so that [psi] = [[v0, v1], [v2, v3]] is Hermitian. For a
    // Hermitian-form vector, arg(v0) and arg(v3) equal the phase mod pi and
    // arg(v1 v2) equals twice the phase; use the best-conditioned estimate.
    const double m00 = std::norm(v[0]), m11 = std::norm(v[3]);
    const double moff = std::abs(v[1] * v[2]);
    double theta;
    if (m00 >= m11 && m00 >= moff)
        theta = std::arg(v[0]);
    else if (m11 >= moff)
        theta = std::arg(v[3]);
    else
        theta = 0.5 * std::arg(v[1] * v[2]);
    const cplx w = std::polar(1.0, -theta);
    for (auto& x : v) x *= w;

    ComplexMatrix coeff(2, 2);
    coeff(0, 0) = v[0];
    coeff(0, 1) = v[1];
    coeff(1, 0) = v[2];
    coeff(1, 1) = v[3];
    if (!coeff.is_hermitian(1e-8))
        throw std::runtime_error(
            "extract_pair_witness: eigenvector is not symmetric-reducible");

    const EigResult ceig = hermitian_eig(coeff);
    // Column order: put the eigenvector dominated by |0> first, so that a
    // coefficient matrix that is already diagonal yields U = 1.
    int first = 0;
    const double a0 = std::abs(ceig.eigenvectors(0, 0));
    const double a1 = std::abs(ceig.eigenvectors(0, 1));
    if (a1 > a0 + 1e-12) first = 1;
    const int second = 1 - first;

    ComplexMatrix vord(2, 2);
    for (int i = 0; i < 2; ++i) {
        vord(i, 0) = ceig.eigenvectors(i, first);
        vord(i, 1) = ceig.eigenvectors(i, second);
    }
    const double d0 = ceig.eigenvalues[first];   // |00> slot of Delta
    const double d1 = ceig.eigenvalues[second];  // |11> slot

    // [psi] = Utilde^dag Delta Utilde with Utilde = Vord^dag; U = Utilde^T.
    ComplexMatrix u = vord.conjugate();
    const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    const cplx root = std::sqrt(det);
    if (std::abs(root) > 1e-12) u *= cplx(1.0, 0.0) / root;

    const auto rows = rotation_from_su2(u);
    out.frame = Frame{rows[0], rows[1], rows[2]};
    // Delta = diag(sin(phi/2), cos(phi/2)) up to a global sign of psi, which
    // is folded into phi's branch so that cos(phi/2) >= 0.
    const double sign = (d1 < 0.0) ? -1.0 : 1.0;
    out.phi = 2.0 * std::atan2(sign * d0, sign * d1);
    out.status = PairWitnessStatus::Found;
    return out;
}

namespace detail {

inline double frame_second_moment(const SpinMoments& m, const Vec3& v) {
    cplx acc(0.0, 0.0);
    for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) acc += v[i - 1] * v[j - 1] * m.m2[i][j];
    return acc.real();
}

inline double frame_first_moment(const SpinMoments& m, const Vec3& v) {
    cplx acc(0.0, 0.0);
    for (int i = 1; i <= 3; ++i) acc += v[i - 1] * m.m1[i];
    return acc.real();
}

}  // namespace detail

// <J_n^2> + N(N-2)/4 < sqrt([<J_k^2>+<J_l^2>-N/2]^2 + (N-1)^2 <J_n>^2),
// the phi-minimized form; phi0 of the minimizer is reported in params.
inline CriterionReport criterion2(const SpinMoments& m, const Frame& frame) {
    require_valid_frame(frame);
    const double n = static_cast<double>(m.nqubits);
    const double jn2 = detail::frame_second_moment(m, frame.n);
    const double jk2 = detail::frame_second_moment(m, frame.k);
    const double jl2 = detail::frame_second_moment(m, frame.l);
    const double jn = detail::frame_first_moment(m, frame.n);

    const double a = jk2 + jl2 - 0.5 * n;
    const double b = (n - 1.0) * jn;
    const double lhs = jn2 + n * (n - 2.0) / 4.0;
    const double rhs = std::sqrt(a * a + b * b);
    CriterionReport rep = make_report("pair", lhs, rhs);
    rep.params["phi0"] = std::atan2(-a, b);
    rep.params["nqubits"] = n;
    return rep;
}

// Symmetric-state form: 4 <Delta J_n^2> / N < 1 - 4 <J_n>^2 / N^2.
inline CriterionReport criterion2_symmetric(const SpinMoments& m, const Vec3& n_dir) {
    const Vec3 nd = normalized(n_dir);
    const double n = static_cast<double>(m.nqubits);
    const double jn2 = detail::frame_second_moment(m, nd);
    const double jn = detail::frame_first_moment(m, nd);
    const double lhs = 4.0 * (jn2 - jn * jn) / n;
    const double rhs = 1.0 - 4.0 * jn * jn / (n * n);
    CriterionReport rep = make_report("pair-sym", lhs, rhs);
    rep.params["nqubits"] = n;
    return rep;
}

// Closed forms for Dicke states |Psi_{N,k}>: reduction coefficients,
// the negative eigenvalue of rho_2^T1, the Schmidt parameter t, and the
// criterion sides evaluated on the ideal state.
struct DickePairData {
    long long c0 = 0, c1 = 0, cplus = 0;
    double lambda_minus = 0.0;
    std::optional<double> t;  // absent for degenerate parameters (no witness)
    double lhs = 0.0;
    double rhs = 0.0;
    bool npt = false;
};

inline DickePairData dicke_pair_data(int n, int k) {
    if (n < 2 || k < 0 || k > n) throw std::invalid_argument("dicke_pair_data: bad parameters");
    DickePairData d;
    d.c0 = binomial(n - 2, k);
    d.c1 = binomial(n - 2, k - 2);
    d.cplus = binomial(n - 2, k - 1);
    const double norm = static_cast<double>(binomial(n, k));
    const double c0 = static_cast<double>(d.c0), c1 = static_cast<double>(d.c1),
                 cp = static_cast<double>(d.cplus);
    d.lambda_minus = 0.5 / norm * (c0 + c1 - std::sqrt((c0 - c1) * (c0 - c1) + 4.0 * cp * cp));
    d.npt = c0 * c1 < cp * cp;
    if (d.cplus > 0) {
        const double q = (c0 - c1) / (2.0 * cp);
        d.t = q + std::sqrt(q * q + 1.0);
    }
    const double nn = static_cast<double>(n), kk = static_cast<double>(k);
    d.lhs = nn * (nn - 1.0) / 2.0 - nn * kk + kk * kk;
    d.rhs = std::sqrt((nn * kk - kk * kk) * (nn * kk - kk * kk) +
                      (nn - 1.0) * (nn - 1.0) * (nn - 2.0 * kk) * (nn - 2.0 * kk) / 4.0);
    return d;
}

// Deterministic frame search: 64x64 grid over the two angles of the squeezing
// direction, followed by coordinate descent. Only the n direction matters for
// the phi-minimized criterion (k, l enter through <J_k^2 + J_l^2> which is
// frame-rotation invariant about n).
struct FrameSearchResult {
    Frame frame;
    CriterionReport report;
};

inline FrameSearchResult best_frame_grid(const SpinMoments& m, int grid = 64) {
    const double pi = 3.14159265358979323846;
    auto eval_dir = [&](double theta, double phi) {
        const Vec3 nd{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                      std::cos(theta)};
        return criterion2(m, Frame::from_n(nd));
    };

    std::vector<double> margins(static_cast<std::size_t>(grid) * grid);
    parallel_for_index(margins.size(), [&](std::size_t idx) {
        const int a = static_cast<int>(idx) / grid;
        const int b = static_cast<int>(idx) % grid;
        const double theta = pi * (a + 0.5) / grid;
        const double phi = 2.0 * pi * b / grid;
        margins[idx] = eval_dir(theta, phi).margin;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < margins.size(); ++i)
        if (margins[i] > margins[best]) best = i;

    double theta = pi * (static_cast<int>(best) / grid + 0.5) / grid;
    double phi = 2.0 * pi * (static_cast<int>(best) % grid) / grid;
    double bestmargin = margins[best];
    double step = pi / grid;
    for (int iter = 0; iter < 60 && step > 1e-10; ++iter) {
        bool improved = false;
        for (const auto& [dt, dp] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
            const double mt = eval_dir(theta + dt, phi + dp).margin;
            if (mt > bestmargin + 1e-15) {
                bestmargin = mt;
                theta += dt;
                phi += dp;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    const Vec3 nd{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                  std::cos(theta)};
    FrameSearchResult res{Frame::from_n(nd), eval_dir(theta, phi)};
    res.report.params["theta"] = theta;
    res.report.params["phi_dir"] = phi;
    return res;
}

}  // namespace spinwitness
