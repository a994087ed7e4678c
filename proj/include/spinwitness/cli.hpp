#pragma once

// Command-line interface: state generation, criterion evaluation, noise
// scans, PPT oracles and tomography simulation, reporting as single JSON
// documents with a stable field order and 17-significant-digit numbers.
//
// Exit codes: 0 = ran, 2 = invalid input, 3 = internal numerical assertion.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spinwitness/collective.hpp"
#include "spinwitness/matrix.hpp"
#include "spinwitness/pairwise.hpp"
#include "spinwitness/qdm.hpp"
#include "spinwitness/qmat.hpp"
#include "spinwitness/simple_wit.hpp"
#include "spinwitness/states.hpp"
#include "spinwitness/tomo.hpp"
#include "spinwitness/triple.hpp"

namespace spinwitness::cli {

constexpr const char* kToolName = "spinwitness";
constexpr const char* kToolVersion = "1.0.0";

// Insertion-ordered JSON emitter; doubles carry 17 significant digits.
class JsonWriter {
public:
    JsonWriter& begin_object() { return open('{', '}'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('[', ']'); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(const std::string& k) {
        separator();
        append_string(k);
        buf_ += ':';
        expect_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        separator();
        if (std::isfinite(v)) {
            char num[40];
            std::snprintf(num, sizeof(num), "%.17g", v);
            buf_ += num;
        } else {
            buf_ += "null";
        }
        return *this;
    }
    JsonWriter& value(long long v) {
        separator();
        buf_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
    JsonWriter& value(std::uint64_t v) {
        separator();
        buf_ += std::to_string(v);
        return *this;
    }
    JsonWriter& value(bool v) {
        separator();
        buf_ += v ? "true" : "false";
        return *this;
    }
    JsonWriter& value(const std::string& v) {
        separator();
        append_string(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string(v)); }

    const std::string& str() const { return buf_; }

private:
    JsonWriter& open(char o, char) {
        separator();
        buf_ += o;
        first_.push_back(true);
        return *this;
    }
    JsonWriter& close(char c) {
        buf_ += c;
        first_.pop_back();
        return *this;
    }
    void separator() {
        if (expect_value_) {
            expect_value_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) buf_ += ',';
            first_.back() = false;
        }
    }
    void append_string(const std::string& s) {
        buf_ += '"';
        for (char ch : s) {
            switch (ch) {
                case '"': buf_ += "\\\""; break;
                case '\\': buf_ += "\\\\"; break;
                case '\n': buf_ += "\\n"; break;
                case '\t': buf_ += "\\t"; break;
                case '\r': buf_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char esc[8];
                        std::snprintf(esc, sizeof(esc), "\\u%04x", ch);
                        buf_ += esc;
                    } else {
                        buf_ += ch;
                    }
            }
        }
        buf_ += '"';
    }

    std::string buf_;
    std::vector<bool> first_;
    bool expect_value_ = false;
};

struct CliError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// State specifications
//   dicke:N:k | w:N | ghz:N | pulseseq:N | noisy:<inner>:<p>
// ---------------------------------------------------------------------------

struct StateSpec {
    DensityMatrix rho;
    std::string canonical;
    std::optional<std::pair<int, int>> dicke_ref;  // (N, k) for Dicke-like states
    std::optional<PureState> pure;                 // set when the state is pure
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

inline int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw CliError(std::string("invalid integer for ") + what + ": '" + s + "'");
    }
}

inline double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw CliError(std::string("invalid number for ") + what + ": '" + s + "'");
    }
}

}  // namespace detail

inline StateSpec parse_state_spec(const std::string& spec) {
    const auto parts = detail::split(spec, ':');
    if (parts.empty()) throw CliError("empty state spec");
    const std::string& kind = parts[0];
    StateSpec out;
    auto wrap_pure = [&](PureState psi, std::string canonical,
                         std::optional<std::pair<int, int>> ref) {
        out.rho = to_density(psi);
        out.pure = std::move(psi);
        out.canonical = std::move(canonical);
        out.dicke_ref = ref;
    };
    try {
        if (kind == "dicke" && parts.size() == 3) {
            const int n = detail::parse_int(parts[1], "dicke N");
            const int k = detail::parse_int(parts[2], "dicke k");
            wrap_pure(dicke(n, k), "dicke:" + std::to_string(n) + ":" + std::to_string(k),
                      std::pair{n, k});
        } else if (kind == "w" && parts.size() == 2) {
            const int n = detail::parse_int(parts[1], "w N");
            wrap_pure(w_state(n), "w:" + std::to_string(n), std::pair{n, 1});
        } else if (kind == "ghz" && parts.size() == 2) {
            const int n = detail::parse_int(parts[1], "ghz N");
            wrap_pure(ghz(n), "ghz:" + std::to_string(n), std::nullopt);
        } else if (kind == "pulseseq" && parts.size() == 2) {
            const int n = detail::parse_int(parts[1], "pulseseq N");
            wrap_pure(register_qubit_state(pulse_sequence_w(n)), "pulseseq:" + std::to_string(n),
                      std::pair{n, 1});
        } else if (kind == "noisy" && parts.size() >= 3) {
            const std::string inner(spec.begin() + 6, spec.begin() + spec.rfind(':'));
            const double p = detail::parse_double(parts.back(), "noise weight p");
            StateSpec base = parse_state_spec(inner);
            if (!base.pure) throw CliError("noisy:<spec>:<p> requires a pure inner state");
            out.rho = noisy(*base.pure, p);
            out.canonical = "noisy:" + base.canonical + ":" + parts.back();
            out.dicke_ref = base.dicke_ref;
        } else {
            throw CliError("unknown state spec '" + spec + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw CliError(std::string("invalid state spec '") + spec + "': " + e.what());
    }
    return out;
}

// Reference spec for ideal-state witness parameters: dicke:N:k, w:N, pulseseq:N.
inline std::pair<int, int> parse_ref_spec(const std::string& spec) {
    const auto parts = detail::split(spec, ':');
    if (parts[0] == "dicke" && parts.size() == 3)
        return {detail::parse_int(parts[1], "ref N"), detail::parse_int(parts[2], "ref k")};
    if ((parts[0] == "w" || parts[0] == "pulseseq") && parts.size() == 2)
        return {detail::parse_int(parts[1], "ref N"), 1};
    throw CliError("reference spec must be dicke:N:k, w:N or pulseseq:N, got '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Report helpers
// ---------------------------------------------------------------------------

namespace detail {

inline void report_header(JsonWriter& j, const char* command, std::uint64_t seed,
                          const std::string& input_label, const std::string& digest, int nqubits) {
    j.key("tool").value(kToolName);
    j.key("version").value(kToolVersion);
    j.key("command").value(command);
    j.key("seed").value(seed);
    j.key("input").begin_object();
    j.key("source").value(input_label);
    j.key("digest").value(digest);
    j.key("nqubits").value(nqubits);
    j.end_object();
}

inline void write_frame(JsonWriter& j, const Frame& f) {
    j.begin_object();
    auto vec = [&](const char* name, const Vec3& v) {
        j.key(name).begin_array().value(v[0]).value(v[1]).value(v[2]).end_array();
    };
    vec("k", f.k);
    vec("l", f.l);
    vec("n", f.n);
    j.end_object();
}

// What a fired criterion certifies: the pair criteria certify bipartite
// entanglement; the moment-contracted X certifies general 3-qubit
// entanglement (genuine only on symmetric states); the projector witnesses
// certify genuine 3-qubit entanglement, with the projected variants valid in
// a symmetric vicinity only.
inline const char* detection_class(const std::string& id) {
    if (id == "pair" || id == "pair-sym") return "bipartite";
    if (id.rfind("triple", 0) == 0) return "3-qubit (genuine for symmetric states)";
    if (id == "simple:ss1" || id == "simple:ss2" || id == "simple:ss3") return "genuine 3-qubit";
    if (id.rfind("simple:", 0) == 0) return "genuine 3-qubit (symmetric-vicinity)";
    return "";
}

inline void write_report_fields(JsonWriter& j, const CriterionReport& rep) {
    j.key("criterion").value(rep.criterion_id);
    j.key("detects").value(detection_class(rep.criterion_id));
    j.key("lhs").value(rep.lhs);
    j.key("rhs").value(rep.rhs);
    j.key("margin").value(rep.margin);
    j.key("violated").value(rep.violated);
    for (const auto& [k, v] : rep.params) j.key(k).value(v);
    if (rep.error_bar) j.key("error_bar").value(*rep.error_bar);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string input_path;
    std::vector<std::string> criteria;
    std::string frame = "xyz";
    std::string ref;
    int mc_samples = 0;
    long long shots = 100;
    std::uint64_t seed = 0;
    double tol = 1e-6;  // Hermiticity/trace validation tolerance for parsing
};

inline std::string run_eval(const EvalOptions& opt) {
    const DensityMatrix rho = qdm::parse_qdm(opt.input_path, opt.tol);
    std::ifstream in(opt.input_path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const SpinMoments mom = moments(rho);
    const int n = rho.nqubits;

    std::optional<std::pair<int, int>> ref;
    if (!opt.ref.empty()) ref = parse_ref_spec(opt.ref);

    Frame frame = Frame::xyz();
    std::optional<CriterionReport> grid_report;
    if (opt.frame == "grid") {
        FrameSearchResult search = best_frame_grid(mom);
        frame = search.frame;
        grid_report = search.report;
    } else if (opt.frame != "xyz") {
        throw CliError("--frame must be xyz or grid");
    }

    const bool want_mc = opt.mc_samples > 0;
    if (want_mc && n > 6)
        throw CliError("Monte-Carlo error bars are limited to 6 qubits at desk scale");

    auto mc_bar = [&](const std::function<double(const DensityMatrix&)>& fn) {
        return tomo::mc_error(rho, fn, opt.mc_samples, opt.shots, opt.seed);
    };

    std::vector<CriterionReport> results;
    for (const std::string& c : opt.criteria) {
        if (c == "pair") {
            if (n < 2) throw CliError("criterion 'pair' needs at least 2 qubits");
            CriterionReport rep = criterion2(mom, frame);
            if (want_mc) {
                auto [mean, sd] =
                    mc_bar([&](const DensityMatrix& r) { return criterion2(moments(r), frame).margin; });
                rep.params["mc_margin_mean"] = mean;
                rep.error_bar = sd;
            }
            results.push_back(std::move(rep));
        } else if (c == "pair-sym") {
            CriterionReport rep = criterion2_symmetric(mom, frame.n);
            if (want_mc) {
                auto [mean, sd] = mc_bar([&](const DensityMatrix& r) {
                    return criterion2_symmetric(moments(r), frame.n).margin;
                });
                rep.params["mc_margin_mean"] = mean;
                rep.error_bar = sd;
            }
            results.push_back(std::move(rep));
        } else if (c == "triple") {
            if (!ref) throw CliError("criterion 'triple' needs --ref <ideal-state-spec>");
            if (n < 3) throw CliError("criterion 'triple' needs at least 3 qubits");
            const DickeTripleData data = dicke_triple_data(ref->first, ref->second);
            if (!data.first && !data.second)
                throw CliError("reference state '" + opt.ref + "' has no tripartite witness branch");
            int branch_no = 0;
            for (const auto* branch : {&data.first, &data.second}) {
                ++branch_no;
                if (!branch->has_value()) continue;
                const DickeTripleBranch& b = **branch;
                const double x = x_parameter(mom, b.k);
                CriterionReport rep =
                    make_report("triple:" + std::to_string(branch_no), x, 0.0);
                rep.params["x"] = x;
                rep.params["alpha"] = b.alpha;
                rep.params["mu_minus"] = b.mu_minus;
                if (want_mc) {
                    const KTensor kt = b.k;
                    auto [mean, sd] = mc_bar(
                        [kt](const DensityMatrix& r) { return x_parameter(moments(r), kt); });
                    rep.params["mc_x_mean"] = mean;
                    rep.error_bar = sd;
                }
                results.push_back(std::move(rep));
            }
        } else if (c.rfind("simple:", 0) == 0) {
            const std::string id = c.substr(7);
            SimpleCriterion which;
            if (id == "ss1") which = SimpleCriterion::SS1;
            else if (id == "ss2") which = SimpleCriterion::SS2;
            else if (id == "ss3") which = SimpleCriterion::SS3;
            else if (id == "ss1p") which = SimpleCriterion::SS1P;
            else if (id == "ss2p") which = SimpleCriterion::SS2P;
            else if (id == "ss3p") which = SimpleCriterion::SS3P;
            else throw CliError("unknown simple criterion '" + id + "'");
            if (n < 3) throw CliError("simple criteria need at least 3 qubits");
            CriterionReport rep = criterion_simple(mom, which, frame);
            if (want_mc) {
                auto [mean, sd] = mc_bar([&, which](const DensityMatrix& r) {
                    return criterion_simple(moments(r), which, frame).lhs;
                });
                rep.params["mc_lhs_mean"] = mean;
                rep.error_bar = sd;
            }
            results.push_back(std::move(rep));
        } else {
            throw CliError("unknown criterion '" + c + "'");
        }
    }

    JsonWriter j;
    j.begin_object();
    detail::report_header(j, "eval", opt.seed, opt.input_path, qdm::digest_hex(bytes), n);
    j.key("params").begin_object();
    j.key("frame_mode").value(opt.frame);
    j.key("frame");
    detail::write_frame(j, frame);
    j.key("ref").value(opt.ref);
    j.key("mc_samples").value(opt.mc_samples);
    j.key("shots").value(opt.shots);
    j.end_object();
    j.key("results").begin_array();
    for (const auto& rep : results) {
        j.begin_object();
        detail::write_report_fields(j, rep);
        j.end_object();
    }
    j.end_array();
    j.end_object();
    return j.str();
}

struct GenOptions {
    std::string state;
    std::string out_path;
};

inline std::string run_gen(const GenOptions& opt) {
    const StateSpec spec = parse_state_spec(opt.state);
    qdm::write_qdm(spec.rho, opt.out_path);
    const std::string bytes = qdm::serialize(spec.rho);
    JsonWriter j;
    j.begin_object();
    detail::report_header(j, "gen", 0, spec.canonical, qdm::digest_hex(bytes), spec.rho.nqubits);
    j.key("out").value(opt.out_path);
    j.end_object();
    return j.str();
}

struct ScanNoiseOptions {
    std::string state;
    int steps = 101;
};

inline std::string run_scan_noise(const ScanNoiseOptions& opt) {
    if (opt.steps < 2) throw CliError("--steps must be at least 2");
    const StateSpec spec = parse_state_spec(opt.state);
    if (!spec.pure || !spec.dicke_ref)
        throw CliError("scan-noise needs a pure Dicke-like state (dicke:N:k, w:N, pulseseq:N)");
    const auto [n, k] = *spec.dicke_ref;
    if (n < 3) throw CliError("scan-noise needs at least 3 qubits");
    const DickeTripleData data = dicke_triple_data(n, k);
    std::vector<const DickeTripleBranch*> branches;
    if (data.first) branches.push_back(&*data.first);
    if (data.second) branches.push_back(&*data.second);
    if (branches.empty()) throw CliError("reference state has no tripartite witness branch");

    std::vector<std::vector<double>> rows(opt.steps);
    for (int i = 0; i < opt.steps; ++i) {
        const double p = static_cast<double>(i) / (opt.steps - 1);
        const DensityMatrix mixed = noisy(*spec.pure, p);
        const SpinMoments mom = moments(mixed);
        std::vector<double> row{p};
        for (const auto* b : branches) row.push_back(x_parameter(mom, b->k));
        rows[i] = std::move(row);
    }

    JsonWriter j;
    j.begin_object();
    detail::report_header(j, "scan-noise", 0, spec.canonical,
                          qdm::digest_hex(qdm::serialize(spec.rho)), spec.rho.nqubits);
    j.key("steps").value(opt.steps);
    j.key("branches").begin_array();
    for (std::size_t bi = 0; bi < branches.size(); ++bi) {
        const double x_mixed = rows.front()[bi + 1];  // p = 0
        const double x_pure = rows.back()[bi + 1];    // p = 1
        j.begin_object();
        j.key("branch").value(static_cast<long long>(bi + 1));
        j.key("alpha").value(branches[bi]->alpha);
        j.key("x_pure").value(x_pure);
        j.key("x_mixed").value(x_mixed);
        if (x_mixed != x_pure)
            j.key("zero_crossing").value(x_mixed / (x_mixed - x_pure));
        j.end_object();
    }
    j.end_array();
    j.key("rows").begin_array();
    for (const auto& row : rows) {
        j.begin_array();
        for (double v : row) j.value(v);
        j.end_array();
    }
    j.end_array();
    j.end_object();
    return j.str();
}

struct OracleOptions {
    std::string input_path;
    double tol = 1e-6;
};

inline std::string run_oracle(const OracleOptions& opt) {
    const DensityMatrix rho = qdm::parse_qdm(opt.input_path, opt.tol);
    std::ifstream in(opt.input_path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const int n = rho.nqubits;

    JsonWriter j;
    j.begin_object();
    detail::report_header(j, "oracle", 0, opt.input_path, qdm::digest_hex(bytes), n);
    j.key("pairs").begin_array();
    for (int a = 1; a <= n - 1; ++a)
        for (int b = a + 1; b <= n; ++b) {
            const DensityMatrix red = partial_trace(rho, {a, b});
            const double lam = min_eigenvalue(partial_transpose(red.matrix, {1}, 2));
            j.begin_object();
            j.key("qubits").begin_array().value(a).value(b).end_array();
            j.key("min_eigenvalue").value(lam);
            j.end_object();
        }
    j.end_array();
    if (n >= 3) {
        j.key("triples").begin_array();
        for (int a = 1; a <= n - 2; ++a)
            for (int b = a + 1; b <= n - 1; ++b)
                for (int c = b + 1; c <= n; ++c) {
                    const DensityMatrix red = partial_trace(rho, {a, b, c});
                    const double lam = min_eigenvalue(partial_transpose(red.matrix, {1}, 3));
                    j.begin_object();
                    j.key("qubits").begin_array().value(a).value(b).value(c).end_array();
                    j.key("min_eigenvalue").value(lam);
                    j.end_object();
                }
        j.end_array();
    }
    j.end_object();
    return j.str();
}

struct TomoSimOptions {
    std::string state;
    long long shots = 100;
    std::uint64_t seed = 0;
    bool mle = false;
};

inline std::string run_tomo_sim(const TomoSimOptions& opt) {
    const StateSpec spec = parse_state_spec(opt.state);
    const int n = spec.rho.nqubits;
    if (n > 6) throw CliError("tomo-sim is limited to 6 qubits at desk scale");
    if (opt.shots < 1) throw CliError("--shots must be positive");

    const auto setts = tomo::settings(n);
    const tomo::CountTable table = tomo::simulate_counts(spec.rho, setts, opt.shots, opt.seed);

    JsonWriter j;
    j.begin_object();
    detail::report_header(j, "tomo-sim", opt.seed, spec.canonical,
                          qdm::digest_hex(qdm::serialize(spec.rho)), n);
    j.key("shots").value(opt.shots);
    j.key("mle").value(opt.mle);
    if (opt.mle) {
        const DensityMatrix rec = tomo::mle_reconstruct(table);
        j.key("reconstruction").begin_object();
        j.key("purity").value((rec.matrix * rec.matrix).trace().real());
        j.key("max_abs_diff_to_input").value(max_abs_diff(rec.matrix, spec.rho.matrix));
        if (spec.pure) j.key("fidelity").value(fidelity(rec, *spec.pure));
        j.end_object();
    }
    j.key("counts").begin_array();
    for (std::size_t s = 0; s < setts.size(); ++s) {
        j.begin_object();
        j.key("setting").value(tomo::setting_label(setts[s]));
        j.key("outcomes").begin_array();
        for (double c : table.counts[s]) j.value(static_cast<long long>(c));
        j.end_array();
        j.end_object();
    }
    j.end_array();
    j.end_object();
    return j.str();
}

// ---------------------------------------------------------------------------
// Argument parsing (long-form flags only) and dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline std::string take_value(const std::vector<std::string>& args, std::size_t& i,
                              const std::string& flag) {
    if (i + 1 >= args.size()) throw CliError("missing value for " + flag);
    return args[++i];
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty() || args[0] == "--help") {
            out << "usage: spinwitness <gen|eval|scan-noise|oracle|tomo-sim> [--flags]\n"
                   "  gen        --state SPEC --out FILE\n"
                   "  eval       --in FILE --criteria LIST [--frame xyz|grid] [--ref SPEC]\n"
                   "             [--mc-samples M --shots S --seed SEED] [--tol T]\n"
                   "  scan-noise --state SPEC [--steps K]\n"
                   "  oracle     --in FILE [--tol T]\n"
                   "  tomo-sim   --state SPEC [--shots S --seed SEED --mle]\n"
                   "states: dicke:N:k | w:N | ghz:N | pulseseq:N | noisy:<spec>:<p>\n"
                   "criteria: pair | pair-sym | triple | simple:<ss1|ss2|ss3|ss1p|ss2p|ss3p>\n";
            return args.empty() ? 2 : 0;
        }
        const std::string& cmd = args[0];
        auto unknown = [&](const std::string& flag) {
            throw CliError("unknown flag '" + flag + "' for subcommand " + cmd);
        };

        if (cmd == "gen") {
            GenOptions opt;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--state") opt.state = detail::take_value(args, i, args[i]);
                else if (args[i] == "--out") opt.out_path = detail::take_value(args, i, args[i]);
                else unknown(args[i]);
            }
            if (opt.state.empty() || opt.out_path.empty())
                throw CliError("gen needs --state and --out");
            out << run_gen(opt) << "\n";
            return 0;
        }
        if (cmd == "eval") {
            EvalOptions opt;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--in") opt.input_path = detail::take_value(args, i, args[i]);
                else if (args[i] == "--criteria")
                    opt.criteria = detail::split(detail::take_value(args, i, "--criteria"), ',');
                else if (args[i] == "--frame") opt.frame = detail::take_value(args, i, args[i]);
                else if (args[i] == "--ref") opt.ref = detail::take_value(args, i, args[i]);
                else if (args[i] == "--mc-samples")
                    opt.mc_samples = detail::parse_int(detail::take_value(args, i, args[i]), "--mc-samples");
                else if (args[i] == "--shots")
                    opt.shots = detail::parse_int(detail::take_value(args, i, args[i]), "--shots");
                else if (args[i] == "--seed")
                    opt.seed = std::stoull(detail::take_value(args, i, args[i]));
                else if (args[i] == "--tol")
                    opt.tol = detail::parse_double(detail::take_value(args, i, args[i]), "--tol");
                else unknown(args[i]);
            }
            if (opt.input_path.empty() || opt.criteria.empty())
                throw CliError("eval needs --in and --criteria");
            out << run_eval(opt) << "\n";
            return 0;
        }
        if (cmd == "scan-noise") {
            ScanNoiseOptions opt;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--state") opt.state = detail::take_value(args, i, args[i]);
                else if (args[i] == "--steps")
                    opt.steps = detail::parse_int(detail::take_value(args, i, args[i]), "--steps");
                else unknown(args[i]);
            }
            if (opt.state.empty()) throw CliError("scan-noise needs --state");
            out << run_scan_noise(opt) << "\n";
            return 0;
        }
        if (cmd == "oracle") {
            OracleOptions opt;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--in") opt.input_path = detail::take_value(args, i, args[i]);
                else if (args[i] == "--tol")
                    opt.tol = detail::parse_double(detail::take_value(args, i, args[i]), "--tol");
                else unknown(args[i]);
            }
            if (opt.input_path.empty()) throw CliError("oracle needs --in");
            out << run_oracle(opt) << "\n";
            return 0;
        }
        if (cmd == "tomo-sim") {
            TomoSimOptions opt;
            for (std::size_t i = 1; i < args.size(); ++i) {
                if (args[i] == "--state") opt.state = detail::take_value(args, i, args[i]);
                else if (args[i] == "--shots")
                    opt.shots = detail::parse_int(detail::take_value(args, i, args[i]), "--shots");
                else if (args[i] == "--seed")
                    opt.seed = std::stoull(detail::take_value(args, i, args[i]));
                else if (args[i] == "--mle") opt.mle = true;
                else unknown(args[i]);
            }
            if (opt.state.empty()) throw CliError("tomo-sim needs --state");
            out << run_tomo_sim(opt) << "\n";
            return 0;
        }
        throw CliError("unknown subcommand '" + cmd + "'");
    } catch (const CliError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const qdm::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace spinwitness::cli
