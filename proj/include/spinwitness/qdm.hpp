#pragma once

// QDM density-matrix file format.
//
//   line 1:  QDM 1 <N>
//   then exactly 4^N data lines, row-major:  <row> <col> <re> <im>
//
// 0-based indices, '#' lines are comments, UTF-8, LF endings. Writes carry 17
// significant digits so a round trip is bit-exact for binary64.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "spinwitness/matrix.hpp"
#include "spinwitness/qmat.hpp"

namespace spinwitness::qdm {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, long line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

inline std::string format_entry(std::size_t r, std::size_t c, cplx v) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g\n", r, c, v.real(), v.imag());
    return buf;
}

inline std::string serialize(const DensityMatrix& rho) {
    std::string out = "QDM 1 " + std::to_string(rho.nqubits) + "\n";
    const std::size_t d = rho.matrix.rows();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) out += format_entry(r, c, rho.matrix(r, c));
    return out;
}

inline void write_qdm(const DensityMatrix& rho, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("write_qdm: cannot open " + path);
    f << serialize(rho);
    if (!f) throw std::invalid_argument("write_qdm: write failed for " + path);
}

// Parses and validates: header shape, exact row-major entry sequence, finite
// values, Hermiticity and trace within `tol` (trace renormalized when inside
// tolerance).
inline DensityMatrix parse_qdm_text(std::istream& in, const std::string& path, double tol = 1e-6) {
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line)) throw ParseError(path, 1, "empty file, missing QDM header");
    ++lineno;
    int version = 0, nqubits = 0;
    {
        std::istringstream hs(line);
        std::string magic;
        if (!(hs >> magic >> version >> nqubits) || magic != "QDM")
            throw ParseError(path, lineno, "malformed header, expected 'QDM 1 <N>'");
        std::string extra;
        if (hs >> extra) throw ParseError(path, lineno, "malformed header, trailing tokens");
        if (version != 1) throw ParseError(path, lineno, "unsupported QDM version");
        if (nqubits < 1 || nqubits > kMaxQubits)
            throw ParseError(path, lineno, "qubit count out of supported range 1..10");
    }

    const std::size_t d = std::size_t{1} << nqubits;
    ComplexMatrix m(d, d);
    std::size_t expected = 0;               // row-major entry counter
    const std::size_t total = d * d;

    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        if (expected >= total)
            throw ParseError(path, lineno, "too many data lines, expected " +
                                               std::to_string(total));
        // strtod-based field parsing: lossless for 17-significant-digit input
        // (stream extraction is not guaranteed correctly rounded everywhere)
        long long r = -1, c = -1;
        double re = 0.0, im = 0.0;
        {
            const char* p = line.c_str();
            char* end = nullptr;
            auto bad = [&] {
                return ParseError(path, lineno,
                                  "malformed data line, expected '<row> <col> <re> <im>'");
            };
            r = std::strtoll(p, &end, 10);
            if (end == p) throw bad();
            p = end;
            c = std::strtoll(p, &end, 10);
            if (end == p) throw bad();
            p = end;
            re = std::strtod(p, &end);
            if (end == p) throw bad();
            p = end;
            im = std::strtod(p, &end);
            if (end == p) throw bad();
            p = end;
            while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
            if (*p != '\0') throw ParseError(path, lineno, "trailing tokens on data line");
        }
        const long long er = static_cast<long long>(expected / d);
        const long long ec = static_cast<long long>(expected % d);
        if (r != er || c != ec)
            throw ParseError(path, lineno,
                             "entry out of row-major order, expected (" + std::to_string(er) +
                                 ", " + std::to_string(ec) + ") got (" + std::to_string(r) + ", " +
                                 std::to_string(c) + ")");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ParseError(path, lineno, "non-finite matrix entry");
        m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = cplx(re, im);
        ++expected;
    }
    if (expected != total)
        throw ParseError(path, lineno + 1,
                         "missing data: got " + std::to_string(expected) + " of " +
                             std::to_string(total) + " entries");

    double herm_defect = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j)
            herm_defect = std::max(herm_defect, std::abs(m(i, j) - std::conj(m(j, i))));
    if (herm_defect > tol)
        throw ParseError(path, 1, "matrix is not Hermitian within tolerance (defect " +
                                      std::to_string(herm_defect) + ")");

    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol)
        throw ParseError(path, 1,
                         "trace deviates from 1 beyond tolerance (trace " + std::to_string(tr) + ")");
    // renormalize only past float-noise level, keeping round trips bit-exact
    if (std::abs(tr - 1.0) > 64.0 * std::numeric_limits<double>::epsilon())
        m *= cplx(1.0 / tr, 0.0);

    return DensityMatrix{nqubits, std::move(m)};
}

inline DensityMatrix parse_qdm(const std::string& path, double tol = 1e-6) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return parse_qdm_text(f, path, tol);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string digest_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, fnv1a64(bytes));
    return buf;
}

}  // namespace spinwitness::qdm
