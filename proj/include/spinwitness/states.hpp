#pragma once

// State-family constructors: Dicke / W / GHZ states, white-noise admixtures,
// and the ideal trapped-ion pulse sequence creating |0>_m|W_N> through a
// motional bus mode.

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinwitness/matrix.hpp"
#include "spinwitness/qmat.hpp"

namespace spinwitness {

// Equal superposition of all computational states with k excitations,
// i.e. the |N/2, N/2-k> eigenstate of the total angular momentum.
inline PureState dicke(int n, int k) {
    const std::size_t d = dim_for_qubits(n);
    if (k < 0 || k > n) throw std::invalid_argument("dicke: excitation count out of range");
    PureState psi{n, std::vector<cplx>(d, cplx(0.0, 0.0))};
    const double amp = 1.0 / std::sqrt(static_cast<double>(binomial(n, k)));
    for (std::size_t i = 0; i < d; ++i)
        if (std::popcount(static_cast<unsigned long long>(i)) == k) psi.amplitudes[i] = amp;
    return psi;
}

inline PureState w_state(int n) {
    if (n < 2) throw std::invalid_argument("w_state: need at least 2 qubits");
    return dicke(n, 1);
}

inline PureState ghz(int n) {
    if (n < 2) throw std::invalid_argument("ghz: need at least 2 qubits");
    const std::size_t d = dim_for_qubits(n);
    PureState psi{n, std::vector<cplx>(d, cplx(0.0, 0.0))};
    psi.amplitudes[0] = 1.0 / std::sqrt(2.0);
    psi.amplitudes[d - 1] = 1.0 / std::sqrt(2.0);
    return psi;
}

// p |psi><psi| + (1-p) 1/2^N
inline DensityMatrix noisy(const PureState& psi, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("noisy: p outside [0,1]");
    DensityMatrix rho = to_density(psi);
    const std::size_t d = rho.matrix.rows();
    rho.matrix *= cplx(p, 0.0);
    const double fill = (1.0 - p) / static_cast<double>(d);
    for (std::size_t i = 0; i < d; ++i) rho.matrix(i, i) += fill;
    return rho;
}

inline PureState reverse_qubits(const PureState& psi) {
    const int n = psi.nqubits;
    const std::size_t d = psi.amplitudes.size();
    PureState out{n, std::vector<cplx>(d)};
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t rev = 0;
        for (int b = 0; b < n; ++b)
            if ((i >> b) & 1u) rev |= std::size_t{1} << (n - 1 - b);
        out.amplitudes[rev] = psi.amplitudes[i];
    }
    return out;
}

// Qubit register plus a truncated motional bus mode. The motional quantum
// number is the slowest-varying index; within the qubit part, ion j sits at
// bit j-1 from the least significant end (ions counted from the right,
// |x_N ... x_1>, as trapped-ion setups label them).
struct MotionalRegister {
    int nqubits = 0;
    int motional_levels = 2;
    std::vector<cplx> amplitudes;  // size motional_levels * 2^nqubits

    std::size_t qubit_dim() const { return std::size_t{1} << nqubits; }

    cplx& amp(int motional, std::size_t qidx) { return amplitudes[motional * qubit_dim() + qidx]; }
    const cplx& amp(int motional, std::size_t qidx) const {
        return amplitudes[motional * qubit_dim() + qidx];
    }
};

inline MotionalRegister make_register(int nqubits, int motional_levels, std::size_t basis_qidx,
                                      int motional = 0) {
    if (motional_levels < 2) throw std::invalid_argument("make_register: need >= 2 motional levels");
    const std::size_t d = dim_for_qubits(nqubits);
    MotionalRegister reg{nqubits, motional_levels,
                         std::vector<cplx>(motional_levels * d, cplx(0.0, 0.0))};
    reg.amp(motional, basis_qidx) = 1.0;
    return reg;
}

// Carrier pulse R^C_ion(theta, phi): |n>|1> <-> |n>|0> on the addressed ion,
//   |0> -> cos(t/2)|0> + e^{i phi} sin(t/2)|1>
//   |1> -> -e^{-i phi} sin(t/2)|0> + cos(t/2)|1>
inline void carrier_pulse(MotionalRegister& reg, int ion, double theta, double phi = 0.0) {
    if (ion < 1 || ion > reg.nqubits) throw std::invalid_argument("carrier_pulse: ion out of range");
    const std::size_t bit = std::size_t{1} << (ion - 1);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx up = std::polar(s, phi), down = -std::polar(s, -phi);
    const std::size_t d = reg.qubit_dim();
    for (int m = 0; m < reg.motional_levels; ++m) {
        for (std::size_t i = 0; i < d; ++i) {
            if (i & bit) continue;
            cplx& a0 = reg.amp(m, i);
            cplx& a1 = reg.amp(m, i | bit);
            const cplx n0 = c * a0 + down * a1;
            const cplx n1 = up * a0 + c * a1;
            a0 = n0;
            a1 = n1;
        }
    }
}

// Blue sideband pulse R^+_ion(theta, phi): couples |n>|1> <-> |n+1>|0>; the
// |0>_m|0> level does not couple. Within each coupled pair,
//   |n>|1>   -> cos(t/2)|n>|1> + e^{i phi} sin(t/2)|n+1>|0>
//   |n+1>|0> -> -e^{-i phi} sin(t/2)|n>|1> + cos(t/2)|n+1>|0>
inline void blue_sideband_pulse(MotionalRegister& reg, int ion, double theta, double phi = 0.0) {
    if (ion < 1 || ion > reg.nqubits)
        throw std::invalid_argument("blue_sideband_pulse: ion out of range");
    const std::size_t bit = std::size_t{1} << (ion - 1);
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    const cplx up = std::polar(s, phi), down = -std::polar(s, -phi);
    const std::size_t d = reg.qubit_dim();
    for (int m = 0; m + 1 < reg.motional_levels; ++m) {
        for (std::size_t i = 0; i < d; ++i) {
            if (!(i & bit)) continue;  // pair anchor: ion excited, motional m
            cplx& ae = reg.amp(m, i);            // |m>|1>
            cplx& ag = reg.amp(m + 1, i & ~bit); // |m+1>|0>
            const cplx ne = c * ae + down * ag;
            const cplx ng = up * ae + c * ag;
            ae = ne;
            ag = ng;
        }
    }
}

namespace detail {

inline void require_register_is(const MotionalRegister& reg, std::size_t qidx, int motional,
                                const char* stage) {
    const std::size_t d = reg.qubit_dim();
    for (int m = 0; m < reg.motional_levels; ++m)
        for (std::size_t i = 0; i < d; ++i) {
            const cplx expect = (m == motional && i == qidx) ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
            if (std::abs(reg.amp(m, i) - expect) > 1e-12)
                throw std::runtime_error(std::string("pulse_sequence_w: state check failed at ") +
                                         stage);
        }
}

}  // namespace detail

// Ideal W-state creation sequence: initialization to |0>_m|0...0> (checked),
// one carrier pi-pulse on ion N, then N blue-sideband pulses distributing a
// single excitation through the bus mode. Pulse phases are chosen per pulse
// so that every intermediate amplitude is real positive.
inline MotionalRegister pulse_sequence_w(int n) {
    if (n < 2) throw std::invalid_argument("pulse_sequence_w: need at least 2 ions");
    const double pi = 3.14159265358979323846;
    MotionalRegister reg = make_register(n, 2, (std::size_t{1} << n) - 1);  // |0>_m|11...1>

    // (i1) carrier pi-pulses on every ion, |1> -> |0|
    for (int ion = n; ion >= 1; --ion) carrier_pulse(reg, ion, pi, pi);
    detail::require_register_is(reg, 0, 0, "(i1) fluorescence check");
    // (i2) blue sideband pi-pulse on ion 1 has no effect on |0>_m|0...0>
    blue_sideband_pulse(reg, 1, pi, 0.0);
    detail::require_register_is(reg, 0, 0, "(i2) fluorescence check");
    // (i3) carrier pi-pulse on ion N, |0> -> |1>
    carrier_pulse(reg, n, pi, 0.0);
    // (1) move sqrt((N-1)/N) of the amplitude onto |1>_m|0...0>
    blue_sideband_pulse(reg, n, 2.0 * std::acos(1.0 / std::sqrt(static_cast<double>(n))), 0.0);
    // (2)..(N) deposit 1/sqrt(N) on each remaining ion
    for (int i = 2; i <= n; ++i) {
        const int ion = n - i + 1;
        blue_sideband_pulse(reg, ion, 2.0 * std::asin(1.0 / std::sqrt(static_cast<double>(ion))),
                            pi);
    }
    return reg;
}

// Motional-ground-state projection, reordered to the qubit-1-leftmost
// convention used everywhere else (module boundary reversal).
inline PureState register_qubit_state(const MotionalRegister& reg) {
    PureState raw{reg.nqubits,
                  std::vector<cplx>(reg.amplitudes.begin(),
                                    reg.amplitudes.begin() + reg.qubit_dim())};
    return reverse_qubits(raw);
}

}  // namespace spinwitness
