#pragma once

// Pauli-basis tomography simulation: setting enumeration, multinomial count
// sampling with splittable seeded streams, linear inversion, iterative
// maximum-likelihood reconstruction, and Monte-Carlo error bars for any
// criterion functional.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwitness/matrix.hpp"
#include "spinwitness/parallel.hpp"
#include "spinwitness/qmat.hpp"
#include "spinwitness/rng.hpp"

namespace spinwitness::tomo {

enum class Basis : char { X = 'X', Y = 'Y', Z = 'Z' };

using MeasurementSetting = std::vector<Basis>;

// 3^n settings, lexicographic with X < Y < Z, qubit 1 most significant.
inline std::vector<MeasurementSetting> settings(int n) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("settings: bad qubit count");
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    std::vector<MeasurementSetting> out(total, MeasurementSetting(n));
    for (std::size_t s = 0; s < total; ++s) {
        std::size_t rem = s;
        for (int q = n - 1; q >= 0; --q) {
            const int digit = static_cast<int>(rem % 3);
            rem /= 3;
            out[s][q] = digit == 0 ? Basis::X : (digit == 1 ? Basis::Y : Basis::Z);
        }
    }
    return out;
}

inline std::string setting_label(const MeasurementSetting& s) {
    std::string lab;
    for (Basis b : s) lab.push_back(static_cast<char>(b));
    return lab;
}

// Single-qubit rotation into the measurement basis: V sigma^b V^dag = sigma^z.
inline const ComplexMatrix& basis_rotation(Basis b) {
    static const ComplexMatrix vx = [] {
        ComplexMatrix m(2, 2);
        const double r = 1.0 / std::sqrt(2.0);
        m(0, 0) = r; m(0, 1) = r; m(1, 0) = r; m(1, 1) = -r;
        return m;
    }();
    static const ComplexMatrix vy = [] {
        ComplexMatrix m(2, 2);
        const double r = 1.0 / std::sqrt(2.0);
        m(0, 0) = r; m(0, 1) = cplx(0.0, -r); m(1, 0) = r; m(1, 1) = cplx(0.0, r);
        return m;
    }();
    static const ComplexMatrix vz = ComplexMatrix::identity(2);
    switch (b) {
        case Basis::X: return vx;
        case Basis::Y: return vy;
        default: return vz;
    }
}

inline ComplexMatrix setting_rotation(const MeasurementSetting& s) {
    ComplexMatrix v = basis_rotation(s[0]);
    for (std::size_t q = 1; q < s.size(); ++q) v = kron(v, basis_rotation(s[q]));
    return v;
}

// Outcome probabilities for one setting: the diagonal of V rho V^dag.
inline std::vector<double> outcome_probabilities(const DensityMatrix& rho,
                                                 const MeasurementSetting& s) {
    if (static_cast<int>(s.size()) != rho.nqubits)
        throw std::invalid_argument("outcome_probabilities: setting length mismatch");
    const ComplexMatrix v = setting_rotation(s);
    const ComplexMatrix w = v * rho.matrix;
    const std::size_t d = w.rows();
    std::vector<double> p(d);
    for (std::size_t o = 0; o < d; ++o) {
        cplx acc(0.0, 0.0);
        for (std::size_t j = 0; j < d; ++j) acc += w(o, j) * std::conj(v(o, j));
        p[o] = std::max(0.0, acc.real());
    }
    double total = 0.0;
    for (double x : p) total += x;
    if (total > 0.0)
        for (double& x : p) x /= total;
    return p;
}

// Counts are stored as doubles so expected (non-integer) counts can be fed to
// the estimator; simulated tables hold integers. counts[s][outcome].
struct CountTable {
    int nqubits = 0;
    double shots = 0.0;
    std::vector<MeasurementSetting> measurement_settings;
    std::vector<std::vector<double>> counts;
};

inline CountTable simulate_counts(const DensityMatrix& rho,
                                  const std::vector<MeasurementSetting>& setts,
                                  long long shots, std::uint64_t seed) {
    CountTable table;
    table.nqubits = rho.nqubits;
    table.shots = static_cast<double>(shots);
    table.measurement_settings = setts;
    table.counts.assign(setts.size(), {});
    parallel_for_index(setts.size(), [&](std::size_t s) {
        const std::vector<double> p = outcome_probabilities(rho, setts[s]);
        std::vector<double> c(p.size(), 0.0);
        SplitMix64 rng = stream_rng(seed, s);
        for (long long shot = 0; shot < shots; ++shot) {
            const double u = rng.uniform01();
            double acc = 0.0;
            std::size_t pick = p.size() - 1;
            for (std::size_t o = 0; o < p.size(); ++o) {
                acc += p[o];
                if (u < acc) { pick = o; break; }
            }
            c[pick] += 1.0;
        }
        table.counts[s] = std::move(c);
    });
    return table;
}

inline CountTable expected_counts(const DensityMatrix& rho,
                                  const std::vector<MeasurementSetting>& setts, double shots) {
    CountTable table;
    table.nqubits = rho.nqubits;
    table.shots = shots;
    table.measurement_settings = setts;
    table.counts.reserve(setts.size());
    for (const auto& s : setts) {
        std::vector<double> p = outcome_probabilities(rho, s);
        for (double& x : p) x *= shots;
        table.counts.push_back(std::move(p));
    }
    return table;
}

inline std::vector<std::vector<double>> exact_probabilities(const DensityMatrix& rho) {
    const auto setts = settings(rho.nqubits);
    std::vector<std::vector<double>> probs;
    probs.reserve(setts.size());
    for (const auto& s : setts) probs.push_back(outcome_probabilities(rho, s));
    return probs;
}

// rho = (1/2^N) sum_s <sigma-string> sigma-string, with each string's
// expectation read from the first compatible setting (identity slots filled
// with X). Exact on exact probabilities.
inline ComplexMatrix linear_inversion(int nqubits, const std::vector<std::vector<double>>& probs) {
    const auto setts = settings(nqubits);
    if (probs.size() != setts.size())
        throw std::invalid_argument("linear_inversion: incomplete setting set");
    const std::size_t d = dim_for_qubits(nqubits);

    std::size_t nstrings = 1;
    for (int i = 0; i < nqubits; ++i) nstrings *= 4;

    ComplexMatrix rho(d, d);
    for (std::size_t str = 0; str < nstrings; ++str) {
        // digits base 4, qubit 1 most significant: 0=I,1=X,2=Y,3=Z
        std::vector<int> digit(nqubits);
        std::size_t rem = str;
        for (int q = nqubits - 1; q >= 0; --q) {
            digit[q] = static_cast<int>(rem % 4);
            rem /= 4;
        }
        // first compatible setting: I -> X
        std::size_t sidx = 0;
        for (int q = 0; q < nqubits; ++q)
            sidx = sidx * 3 + (digit[q] == 0 ? 0 : digit[q] - 1);
        const std::vector<double>& p = probs[sidx];
        double expect = 0.0;
        for (std::size_t o = 0; o < d; ++o) {
            int sign = 1;
            for (int q = 0; q < nqubits; ++q)
                if (digit[q] != 0 && qubit_bit(o, q + 1, nqubits)) sign = -sign;
            expect += sign * p[o];
        }
        if (expect == 0.0) continue;
        ComplexMatrix op = pauli(digit[0] == 0 ? 0 : digit[0]);
        for (int q = 1; q < nqubits; ++q) op = kron(op, pauli(digit[q] == 0 ? 0 : digit[q]));
        rho += op * cplx(expect / static_cast<double>(d), 0.0);
    }
    return rho;
}

// Iterative R rho R maximum-likelihood reconstruction with a diluted step
// (mixing parameter 0.5) whenever the log-likelihood would decrease.
// Positivity and unit trace hold at every iterate by construction.
inline DensityMatrix mle_reconstruct(const CountTable& table, int max_iterations = 5000,
                                     double change_tol = 1e-10,
                                     std::vector<double>* likelihood_trace = nullptr) {
    const int n = table.nqubits;
    const std::size_t d = dim_for_qubits(n);
    const auto setts = settings(n);
    if (table.counts.empty()) throw std::invalid_argument("mle_reconstruct: empty counts");
    if (table.measurement_settings.size() != setts.size())
        throw std::invalid_argument("mle_reconstruct: incomplete setting set");

    std::vector<ComplexMatrix> rot;
    rot.reserve(setts.size());
    for (const auto& s : table.measurement_settings) rot.push_back(setting_rotation(s));

    double total = 0.0;
    for (const auto& c : table.counts)
        for (double x : c) total += x;
    if (total <= 0.0) throw std::invalid_argument("mle_reconstruct: no counts");

    ComplexMatrix rho = ComplexMatrix::identity(d);
    rho *= cplx(1.0 / static_cast<double>(d), 0.0);

    const double ptiny = 1e-300;
    auto log_likelihood = [&](const ComplexMatrix& r) {
        double ll = 0.0;
        for (std::size_t s = 0; s < rot.size(); ++s) {
            const ComplexMatrix w = rot[s] * r;
            for (std::size_t o = 0; o < d; ++o) {
                const double cnt = table.counts[s][o];
                if (cnt <= 0.0) continue;
                cplx acc(0.0, 0.0);
                for (std::size_t j = 0; j < d; ++j) acc += w(o, j) * std::conj(rot[s](o, j));
                ll += cnt * std::log(std::max(acc.real(), ptiny));
            }
        }
        return ll;
    };

    double ll = log_likelihood(rho);
    for (int iter = 0; iter < max_iterations; ++iter) {
        // R = sum_{s,o} (f_{so} / p_{so}) Pi_{so} accumulated as V^dag D V
        ComplexMatrix r(d, d);
        for (std::size_t s = 0; s < rot.size(); ++s) {
            const ComplexMatrix w = rot[s] * rho;
            std::vector<double> diag(d);
            for (std::size_t o = 0; o < d; ++o) {
                cplx acc(0.0, 0.0);
                for (std::size_t j = 0; j < d; ++j) acc += w(o, j) * std::conj(rot[s](o, j));
                const double p = std::max(acc.real(), ptiny);
                diag[o] = (table.counts[s][o] / total) / p;
            }
            // r += V^dag diag V
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    cplx acc(0.0, 0.0);
                    for (std::size_t o = 0; o < d; ++o)
                        acc += std::conj(rot[s](o, i)) * diag[o] * rot[s](o, j);
                    r(i, j) += acc;
                }
        }

        auto step = [&](const ComplexMatrix& rop) {
            ComplexMatrix next = rop * rho * rop;
            const double tr = next.trace().real();
            next *= cplx(1.0 / tr, 0.0);
            return next;
        };

        ComplexMatrix cand = step(r);
        double llc = log_likelihood(cand);
        if (llc < ll) {
            ComplexMatrix diluted = r;
            diluted *= cplx(0.5, 0.0);
            for (std::size_t i = 0; i < d; ++i) diluted(i, i) += 0.5;
            cand = step(diluted);
            llc = log_likelihood(cand);
        }
        if (llc < ll - 1e-12 * (1.0 + std::abs(ll))) break;  // cannot improve further
        const double change = max_abs_diff(cand, rho);
        rho = std::move(cand);
        ll = std::max(ll, llc);
        if (likelihood_trace) likelihood_trace->push_back(ll);
        if (change < change_tol) break;
    }

    // symmetrize away roundoff
    ComplexMatrix herm(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) herm(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
    return DensityMatrix{n, std::move(herm)};
}

// Sample mean and unbiased standard deviation of `functional` over
// reconstructions of simulated measurements; deterministic under `seed`.
inline std::pair<double, double> mc_error(const DensityMatrix& rho,
                                          const std::function<double(const DensityMatrix&)>& functional,
                                          int samples, long long shots, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("mc_error: need at least 2 samples");
    const auto setts = settings(rho.nqubits);
    std::vector<double> values(samples);
    parallel_for_index(static_cast<std::size_t>(samples), [&](std::size_t i) {
        const std::uint64_t sample_seed = derive_stream_seed(seed, i + 1);
        const CountTable table = simulate_counts(rho, setts, shots, sample_seed);
        const DensityMatrix rec = mle_reconstruct(table);
        values[i] = functional(rec);
    });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (samples - 1);
    return {mean, std::sqrt(var)};
}

}  // namespace spinwitness::tomo
