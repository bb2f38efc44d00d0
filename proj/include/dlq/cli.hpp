#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dlq/dlp_transform.hpp"
#include "dlq/gf2_poly.hpp"
#include "dlq/normal_basis.hpp"
#include "dlq/qubo_solver.hpp"
#include "dlq/verify_stats.hpp"

namespace dlq::cli {

/// Fixed default seed so identical invocations produce identical bytes.
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// A QUBO is handed to the exhaustive solver by default up to this size.
inline constexpr std::size_t kAutoExhaustiveLimit = 24;

struct RunConfig {
    enum class Command { FieldInfo, Transform, Solve, Decode, E2e, Report, StatsTail, StatsRate };
    Command command = Command::FieldInfo;

    unsigned n = 0;
    std::string h_nb;   // normal-basis bits, most significant coordinate first
    std::string h_hex;  // polynomial-basis coefficient mask

    std::string method = "auto";  // auto | exhaustive | sa
    std::uint64_t reads = 1000;
    std::uint32_t sweeps = 200;
    double beta_start = 0.5;
    double beta_end = 5.0;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;

    std::string in_path;        // solve: QUBO file
    std::string out_path;       // transform: QUBO file; solve: solution file
    std::string meta_path;      // transform/decode: sidecar metadata
    std::string solution_path;  // decode: solution file from solve
    std::string assignment;     // decode: inline assignment bits

    std::vector<unsigned> n_list;  // report

    std::uint64_t trials = 0;
    std::uint64_t threshold = 0;
    std::uint64_t successes = 0;
    unsigned space_bits = 0;
    std::string p_spec;  // "a/b" or decimal
};

namespace detail {

inline std::string hex_mask(std::uint64_t mask) {
    std::ostringstream os;
    os << "0x" << std::hex << mask;
    return os.str();
}

inline NbElement parse_target(const RunConfig& cfg, const FieldParams& fp) {
    if (cfg.h_nb.empty() == cfg.h_hex.empty())
        throw std::invalid_argument("give the target as exactly one of --h-nb or --h-hex");
    if (!cfg.h_nb.empty()) return NbElement::from_display(fp.n, cfg.h_nb);
    return poly_to_nb(Gf2Poly::parse(cfg.h_hex), fp);
}

inline Rational parse_probability(const std::string& spec) {
    auto slash = spec.find('/');
    if (slash != std::string::npos) {
        return Rational(std::stoll(spec.substr(0, slash)), std::stoll(spec.substr(slash + 1)));
    }
    // Decimal like 0.25: scale to a power of ten.
    auto dot = spec.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(spec), 1);
    std::string digits = spec.substr(0, dot) + spec.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < spec.size() - dot - 1; ++i) den *= 10;
    return Rational(std::stoll(digits), den);
}

inline std::string matrix_row(const BitMatrix& m, unsigned i) {
    std::string s;
    for (unsigned j = 0; j < m.n; ++j) s.push_back(m.at(i, j) ? '1' : '0');
    return s;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline std::string metadata_text(const TransformResult& tr, const FieldParams& fp) {
    std::ostringstream os;
    os << "format=dlq-meta-1\n";
    os << "n=" << tr.n << "\n";
    os << "h_nb=" << tr.h.display() << "\n";
    os << "h_hex=" << hex_mask(nb_to_poly(tr.h, fp).mask()) << "\n";
    os << "group_order=" << fp.group_order() << "\n";
    os << "num_vars=" << tr.qubo.num_vars() << "\n";
    for (unsigned i = 0; i < tr.n; ++i)
        os << "exponent." << i << "=" << tr.qubo_index(tr.exponent_vars[i]) << "\n";
    for (std::size_t idx = 0; idx < tr.qubo_to_var.size(); ++idx) {
        const VarInfo& info = tr.registry[tr.qubo_to_var[idx]];
        const char* role = info.role == VarRole::Exponent      ? "exponent"
                           : info.role == VarRole::Register    ? "register"
                           : info.role == VarRole::Product     ? "product"
                           : info.role == VarRole::Multiplicity ? "multiplicity"
                                                                : "plain";
        os << "var." << idx << "=" << role << ":" << info.name << "\n";
    }
    return os.str();
}

struct Metadata {
    unsigned n = 0;
    std::string h_nb;
    std::size_t num_vars = 0;
    std::vector<std::size_t> exponent_index;
};

inline Metadata parse_metadata(const std::string& text) {
    Metadata meta;
    std::istringstream is(text);
    std::string line;
    std::map<unsigned, std::size_t> exps;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "n") meta.n = static_cast<unsigned>(std::stoul(value));
        else if (key == "h_nb") meta.h_nb = value;
        else if (key == "num_vars") meta.num_vars = std::stoull(value);
        else if (key.rfind("exponent.", 0) == 0)
            exps[static_cast<unsigned>(std::stoul(key.substr(9)))] = std::stoull(value);
    }
    if (meta.n == 0 || meta.h_nb.empty() || exps.size() != meta.n)
        throw std::runtime_error("metadata file is incomplete");
    meta.exponent_index.resize(meta.n);
    for (auto& [i, idx] : exps) meta.exponent_index[i] = idx;
    return meta;
}

inline std::vector<std::uint8_t> parse_assignment_bits(const std::string& bits) {
    std::vector<std::uint8_t> a;
    a.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') throw std::invalid_argument("assignment must be a 0/1 string");
        a.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return a;
}

inline std::string assignment_bits(const std::vector<std::uint8_t>& a) {
    std::string s;
    s.reserve(a.size());
    for (auto b : a) s.push_back(b ? '1' : '0');
    return s;
}

struct SolveOutcome {
    std::string method;
    SolveResult result;
};

inline SolveOutcome dispatch_solve(const Qubo& q, const RunConfig& cfg) {
    std::string method = cfg.method;
    if (method == "auto") method = q.num_vars() <= kAutoExhaustiveLimit ? "exhaustive" : "sa";
    SolveOutcome outcome;
    outcome.method = method;
    if (method == "exhaustive") {
        outcome.result = exhaustive_solve(q);
    } else if (method == "sa") {
        AnnealParams params;
        params.reads = cfg.reads;
        params.sweeps = cfg.sweeps;
        params.beta_start = cfg.beta_start;
        params.beta_end = cfg.beta_end;
        params.seed = cfg.seed;
        params.threads = cfg.threads;
        outcome.result = simulated_annealing(q, params);
    } else {
        throw std::invalid_argument("unknown method '" + method + "'");
    }
    return outcome;
}

inline std::string solution_text(const SolveOutcome& s, std::size_t max_assignments = 64) {
    std::ostringstream os;
    os << "method=" << s.method << "\n";
    os << "best_energy=" << s.result.best_energy << "\n";
    os << "num_best=" << s.result.num_best << "\n";
    os << "reads=" << s.result.reads << "\n";
    os << "successes_at_best=" << s.result.successes_at_best << "\n";
    std::size_t shown = std::min(max_assignments, s.result.best_assignments.size());
    for (std::size_t i = 0; i < shown; ++i)
        os << "assignment." << i << "=" << assignment_bits(s.result.best_assignments[i]) << "\n";
    return os.str();
}

struct Solution {
    std::int64_t best_energy = 0;
    std::vector<std::vector<std::uint8_t>> assignments;
};

inline Solution parse_solution(const std::string& text) {
    Solution sol;
    std::istringstream is(text);
    std::string line;
    std::map<std::size_t, std::vector<std::uint8_t>> rows;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "best_energy") sol.best_energy = std::stoll(value);
        else if (key.rfind("assignment.", 0) == 0)
            rows[std::stoull(key.substr(11))] = parse_assignment_bits(value);
    }
    for (auto& [i, a] : rows) sol.assignments.push_back(std::move(a));
    if (sol.assignments.empty()) throw std::runtime_error("solution file has no assignments");
    return sol;
}

inline std::uint64_t decode_with_meta(const Metadata& meta, const std::vector<std::uint8_t>& a) {
    if (a.size() != meta.num_vars)
        throw std::invalid_argument("assignment length does not match num_vars");
    std::uint64_t y = 0;
    for (unsigned i = 0; i < meta.n; ++i)
        if (a.at(meta.exponent_index[i])) y |= std::uint64_t{1} << i;
    return y;
}

/// Prints one `y=… verified=…` line per distinct decoded exponent.
/// Returns 0 when every line verified, 1 otherwise.
inline int report_exponents(const std::vector<std::uint64_t>& ys, const DlpInstance& inst,
                            std::ostream& out) {
    std::set<std::uint64_t> distinct(ys.begin(), ys.end());
    bool all_ok = !distinct.empty();
    for (std::uint64_t y : distinct) {
        bool ok = verify_exponent(y, inst);
        out << "y=" << y << " verified=" << (ok ? "true" : "false") << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}

}  // namespace detail

inline int run_field_info(const RunConfig& cfg, std::ostream& out) {
    FieldParams fp = build_field(cfg.n);
    out << "n=" << fp.n << "\n";
    out << "f=" << fp.f.to_string() << "\n";
    out << "f_hex=" << detail::hex_mask(fp.f.mask()) << "\n";
    out << "optimal=" << (fp.optimal ? "true" : "false") << "\n";
    out << "t0_nonzeros=" << fp.t0.popcount() << "\n";
    BitMatrix n2p = fp.m_n2p.display_order();
    BitMatrix p2n = fp.m_p2n.display_order();
    for (unsigned i = 0; i < fp.n; ++i)
        out << "m_n2p." << i << "=" << detail::matrix_row(n2p, i) << "\n";
    for (unsigned i = 0; i < fp.n; ++i)
        out << "m_p2n." << i << "=" << detail::matrix_row(p2n, i) << "\n";
    for (unsigned i = 0; i < fp.n; ++i)
        out << "t0." << i << "=" << detail::matrix_row(fp.t0, i) << "\n";
    return 0;
}

inline int run_transform(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    FieldParams fp = build_field(cfg.n);
    NbElement h = detail::parse_target(cfg, fp);
    TransformResult tr = transform(make_instance(fp, h));
    if (!tr.optimal_basis)
        err << "warning: basis is not optimal; variable counts exceed the 3n^2 estimate\n";

    out << "n=" << tr.n << "\n";
    out << "h_nb=" << h.display() << "\n";
    out << "h_hex=" << detail::hex_mask(nb_to_poly(h, fp).mask()) << "\n";
    out << "num_vars=" << tr.stats.logical_variable_count << "\n";
    out << "constraints=" << tr.stats.constraint_count << "\n";
    out << "penalties=" << tr.stats.penalty_count << "\n";
    out << "est_3n2=" << variable_count_estimate(cfg.n, true) << "\n";
    out << "est_4n2=" << variable_count_estimate(cfg.n, false) << "\n";

    if (cfg.out_path.empty()) throw std::invalid_argument("transform requires --out");
    std::string meta_path = cfg.meta_path.empty() ? cfg.out_path + ".meta" : cfg.meta_path;
    detail::write_file(cfg.out_path, tr.qubo.write_string());
    detail::write_file(meta_path, detail::metadata_text(tr, fp));
    out << "qubo_file=" << cfg.out_path << "\n";
    out << "meta_file=" << meta_path << "\n";
    return 0;
}

inline int run_solve(const RunConfig& cfg, std::ostream& out) {
    if (cfg.in_path.empty()) throw std::invalid_argument("solve requires --in");
    Qubo q = Qubo::read_string(detail::read_file(cfg.in_path));
    detail::SolveOutcome outcome = detail::dispatch_solve(q, cfg);
    std::string text = detail::solution_text(outcome);
    out << text;
    if (!cfg.out_path.empty()) detail::write_file(cfg.out_path, text);
    return 0;
}

inline int run_decode(const RunConfig& cfg, std::ostream& out) {
    if (cfg.meta_path.empty()) throw std::invalid_argument("decode requires --meta");
    detail::Metadata meta = detail::parse_metadata(detail::read_file(cfg.meta_path));
    FieldParams fp = build_field(meta.n);
    DlpInstance inst = make_instance(fp, NbElement::from_display(meta.n, meta.h_nb));

    std::vector<std::vector<std::uint8_t>> assignments;
    if (!cfg.assignment.empty()) {
        assignments.push_back(detail::parse_assignment_bits(cfg.assignment));
    } else if (!cfg.solution_path.empty()) {
        assignments = detail::parse_solution(detail::read_file(cfg.solution_path)).assignments;
    } else {
        throw std::invalid_argument("decode requires --solution or --assignment");
    }

    std::vector<std::uint64_t> ys;
    for (auto& a : assignments) ys.push_back(detail::decode_with_meta(meta, a));
    return detail::report_exponents(ys, inst, out);
}

inline int run_e2e(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    FieldParams fp = build_field(cfg.n);
    NbElement h = detail::parse_target(cfg, fp);
    DlpInstance inst = make_instance(fp, h);
    TransformResult tr = transform(inst);
    if (!tr.optimal_basis)
        err << "warning: basis is not optimal; variable counts exceed the 3n^2 estimate\n";

    detail::SolveOutcome outcome = detail::dispatch_solve(tr.qubo, cfg);

    out << "n=" << tr.n << "\n";
    out << "h_nb=" << h.display() << "\n";
    out << "h_hex=" << detail::hex_mask(nb_to_poly(h, fp).mask()) << "\n";
    out << "num_vars=" << tr.stats.logical_variable_count << "\n";
    out << "method=" << outcome.method << "\n";
    out << "best_energy=" << outcome.result.best_energy << "\n";

    std::vector<std::uint64_t> ys;
    for (auto& a : outcome.result.best_assignments) ys.push_back(decode_solution(a, tr));
    return detail::report_exponents(ys, inst, out);
}

inline int run_report(const RunConfig& cfg, std::ostream& out) {
    if (cfg.n_list.empty()) throw std::invalid_argument("report requires --n-list");
    for (unsigned n : cfg.n_list) {
        FieldParams fp = build_field(n);
        NbElement h = nb_pow(NbElement::generator(n), fp.group_order() / 2 + 1, fp);
        TransformResult tr = transform(make_instance(fp, h));
        std::size_t bound = 3 * static_cast<std::size_t>(n) * n + n;
        out << "n=" << n << " measured=" << tr.stats.logical_variable_count
            << " est_3n2=" << variable_count_estimate(n, true)
            << " est_4n2=" << variable_count_estimate(n, false)
            << " within_bound=" << (tr.stats.logical_variable_count <= bound ? "true" : "false")
            << "\n";
    }
    return 0;
}

inline int run_stats_tail(const RunConfig& cfg, std::ostream& out) {
    Rational p = !cfg.p_spec.empty()
                     ? detail::parse_probability(cfg.p_spec)
                     : Rational(1, static_cast<std::int64_t>(1) << cfg.space_bits);
    if (cfg.p_spec.empty() && cfg.space_bits == 0)
        throw std::invalid_argument("stats tail requires --p or --space-bits");
    double lt = binomial_tail_log10(cfg.trials, cfg.threshold, p);
    out << "trials=" << cfg.trials << "\n";
    out << "threshold=" << cfg.threshold << "\n";
    out << "p=" << p.num << "/" << p.den << "\n";
    out << "log10_tail=" << lt << "\n";
    out << "verdict=a uniform sampler reaches " << cfg.threshold << "/" << cfg.trials
        << " successes with probability 10^" << lt
        << "; a solver at or above the 0.5 success rate is not sampling at random\n";
    return 0;
}

inline int run_stats_rate(const RunConfig& cfg, std::ostream& out) {
    Rational r = success_rate(cfg.trials, cfg.successes);
    out << "trials=" << cfg.trials << "\n";
    out << "successes=" << cfg.successes << "\n";
    out << "rate=" << r.decimal_string() << "\n";
    out << "rate_exact=" << r.num << "/" << r.den << "\n";
    return 0;
}

/// Dispatches a parsed configuration. Exit status: 0 success,
/// 1 verification failure, 2 malformed input or unsupported field.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
            case RunConfig::Command::FieldInfo: return run_field_info(cfg, out);
            case RunConfig::Command::Transform: return run_transform(cfg, out, err);
            case RunConfig::Command::Solve: return run_solve(cfg, out);
            case RunConfig::Command::Decode: return run_decode(cfg, out);
            case RunConfig::Command::E2e: return run_e2e(cfg, out, err);
            case RunConfig::Command::Report: return run_report(cfg, out);
            case RunConfig::Command::StatsTail: return run_stats_tail(cfg, out);
            case RunConfig::Command::StatsRate: return run_stats_rate(cfg, out);
        }
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace dlq::cli
