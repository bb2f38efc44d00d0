#include <catch2/catch.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "dlq/cli.hpp"

using dlq::cli::RunConfig;
namespace fs = std::filesystem;

namespace {

struct RunOutput {
    int status;
    std::string out;
    std::string err;
};

RunOutput run_cli(const RunConfig& cfg) {
    std::ostringstream out, err;
    int status = dlq::cli::run(cfg, out, err);
    return {status, out.str(), err.str()};
}

std::vector<std::string> exponent_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind("y=", 0) == 0) lines.push_back(line);
    return lines;
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "dlq_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("e2e solves the worked example", "[cli]") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::E2e;
    cfg.n = 3;
    cfg.h_nb = "110";
    cfg.method = "exhaustive";
    RunOutput r = run_cli(cfg);
    CHECK(r.status == 0);
    CHECK(r.out.find("num_vars=11") != std::string::npos);
    CHECK(r.out.find("h_hex=0x3") != std::string::npos);
    CHECK(exponent_lines(r.out) == std::vector<std::string>{"y=5 verified=true"});
}

TEST_CASE("hex and bit-string targets are interchangeable", "[cli]") {
    RunConfig nb;
    nb.command = RunConfig::Command::E2e;
    nb.n = 3;
    nb.h_nb = "110";
    RunConfig hex;
    hex.command = RunConfig::Command::E2e;
    hex.n = 3;
    hex.h_hex = "0x3";  // t+1 = t^4+t^2 in the normal basis
    RunOutput a = run_cli(nb);
    RunOutput b = run_cli(hex);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("e2e reports both exponents for the identity target", "[cli]") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::E2e;
    cfg.n = 3;
    cfg.h_nb = "111";
    RunOutput r = run_cli(cfg);
    CHECK(r.status == 0);
    CHECK(exponent_lines(r.out) ==
          std::vector<std::string>{"y=0 verified=true", "y=7 verified=true"});
}

TEST_CASE("e2e output is byte-identical across runs", "[cli]") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::E2e;
    cfg.n = 5;
    cfg.h_nb = "10011";
    cfg.method = "sa";
    cfg.reads = 200;
    RunOutput a = run_cli(cfg);
    RunOutput b = run_cli(cfg);
    CHECK(a.status == b.status);
    CHECK(a.out == b.out);

    RunConfig parallel = cfg;
    parallel.threads = 4;
    RunOutput c = run_cli(parallel);
    CHECK(c.out == a.out);
}

TEST_CASE("transform, solve, decode round trip matches e2e", "[cli]") {
    fs::path dir = temp_dir();
    std::string qubo_path = (dir / "instance.qubo").string();
    std::string meta_path = (dir / "instance.meta").string();
    std::string sol_path = (dir / "instance.sol").string();

    RunConfig t;
    t.command = RunConfig::Command::Transform;
    t.n = 3;
    t.h_nb = "110";
    t.out_path = qubo_path;
    t.meta_path = meta_path;
    RunOutput rt = run_cli(t);
    REQUIRE(rt.status == 0);
    CHECK(rt.out.find("num_vars=11") != std::string::npos);

    RunConfig s;
    s.command = RunConfig::Command::Solve;
    s.in_path = qubo_path;
    s.out_path = sol_path;
    s.method = "exhaustive";
    RunOutput rs = run_cli(s);
    REQUIRE(rs.status == 0);
    CHECK(rs.out.find("best_energy=0") != std::string::npos);
    CHECK(rs.out.find("num_best=1") != std::string::npos);

    RunConfig d;
    d.command = RunConfig::Command::Decode;
    d.meta_path = meta_path;
    d.solution_path = sol_path;
    RunOutput rd = run_cli(d);
    CHECK(rd.status == 0);

    RunConfig e;
    e.command = RunConfig::Command::E2e;
    e.n = 3;
    e.h_nb = "110";
    e.method = "exhaustive";
    RunOutput re = run_cli(e);
    CHECK(exponent_lines(rd.out) == exponent_lines(re.out));
}

TEST_CASE("decode flags assignments that do not verify", "[cli]") {
    fs::path dir = temp_dir();
    std::string qubo_path = (dir / "bad.qubo").string();
    std::string meta_path = (dir / "bad.meta").string();

    RunConfig t;
    t.command = RunConfig::Command::Transform;
    t.n = 3;
    t.h_nb = "110";
    t.out_path = qubo_path;
    t.meta_path = meta_path;
    REQUIRE(run_cli(t).status == 0);

    RunConfig d;
    d.command = RunConfig::Command::Decode;
    d.meta_path = meta_path;
    d.assignment = std::string(11, '0');  // decodes to y=0, which is wrong here
    RunOutput rd = run_cli(d);
    CHECK(rd.status == 1);
    CHECK(exponent_lines(rd.out) == std::vector<std::string>{"y=0 verified=false"});
}

TEST_CASE("field-info prints the golden grids", "[cli]") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::FieldInfo;
    cfg.n = 3;
    RunOutput r = run_cli(cfg);
    CHECK(r.status == 0);
    CHECK(r.out.find("f=t^3+t^2+1") != std::string::npos);
    CHECK(r.out.find("optimal=true") != std::string::npos);
    CHECK(r.out.find("m_n2p.0=111\nm_n2p.1=100\nm_n2p.2=010\n") != std::string::npos);
    CHECK(r.out.find("m_p2n.0=010\nm_p2n.1=001\nm_p2n.2=111\n") != std::string::npos);
    CHECK(r.out.find("t0.0=010\nt0.1=101\nt0.2=011\n") != std::string::npos);
}

TEST_CASE("report stays within the variable budget", "[cli]") {
    RunConfig cfg;
    cfg.command = RunConfig::Command::Report;
    cfg.n_list = {2, 3, 5, 6};
    RunOutput r = run_cli(cfg);
    CHECK(r.status == 0);
    CHECK(r.out.find("within_bound=false") == std::string::npos);
    CHECK(r.out.find("n=5") != std::string::npos);
    CHECK(r.out.find("est_3n2=75") != std::string::npos);
}

TEST_CASE("stats subcommands", "[cli]") {
    RunConfig tail;
    tail.command = RunConfig::Command::StatsTail;
    tail.trials = 10000;
    tail.threshold = 5000;
    tail.space_bits = 11;
    RunOutput rt = run_cli(tail);
    CHECK(rt.status == 0);
    CHECK(rt.out.find("p=1/2048") != std::string::npos);
    CHECK(rt.out.find("log10_tail=-13549.5") != std::string::npos);
    CHECK(rt.out.find("verdict=") != std::string::npos);

    RunConfig rate;
    rate.command = RunConfig::Command::StatsRate;
    rate.trials = 10000;
    rate.successes = 7415;
    RunOutput rr = run_cli(rate);
    CHECK(rr.status == 0);
    CHECK(rr.out.find("rate=0.7415\n") != std::string::npos);
    CHECK(rr.out.find("rate_exact=1483/2000") != std::string::npos);
}

TEST_CASE("input errors exit with status 2", "[cli]") {
    RunConfig both;
    both.command = RunConfig::Command::E2e;
    both.n = 3;
    both.h_nb = "110";
    both.h_hex = "0x3";
    CHECK(run_cli(both).status == 2);

    RunConfig unsupported;
    unsupported.command = RunConfig::Command::Transform;
    unsupported.n = 4;  // Dickson polynomial reducible
    unsupported.h_nb = "1000";
    unsupported.out_path = (temp_dir() / "never.qubo").string();
    RunOutput ru = run_cli(unsupported);
    CHECK(ru.status == 2);
    CHECK(ru.err.find("no type-II construction") != std::string::npos);

    RunConfig missing;
    missing.command = RunConfig::Command::Solve;
    missing.in_path = (temp_dir() / "does_not_exist.qubo").string();
    CHECK(run_cli(missing).status == 2);

    RunConfig badbits;
    badbits.command = RunConfig::Command::E2e;
    badbits.n = 3;
    badbits.h_nb = "10";  // wrong length
    CHECK(run_cli(badbits).status == 2);
}
