// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "test_util.hpp"

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QAOASIM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    CliResult r;
    r.output = std::move(out);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    REQUIRE(f.good());
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

const char* kTriangle = "0 1\n1 2\n0 2\n";
const char* kEdge = "0 1\n";

}  // namespace

TEST_CASE("simulate emits a complete json document") {
    testutil::TempPath g("cli-k3");
    write_file(g.str(), kTriangle);
    CliResult r = run_cli("simulate --problem maxcut --n 3 --graph " + g.str() +
                          " --betas 0 --gammas 0");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.output);

    CHECK(doc["exp_value"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(doc["ground_state_probability"].get<double>() ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(doc["approx_ratio"].get<double>() == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(doc["problem"]["dim"].get<int>() == 8);
    CHECK(doc["problem"]["best_value"].get<double>() == 2.0);
    CHECK(doc["mixer"].get<std::string>() == "x:1");
    CHECK(doc["angles"]["betas"].size() == 1);
    CHECK(doc["provenance"]["command"].get<std::string>() == "simulate");
    const std::string flags = doc["provenance"]["flags"].dump();
    CHECK(flags.find("--graph") != std::string::npos);
    CHECK(!doc["provenance"]["backend"].get<std::string>().empty());
}

TEST_CASE("simulate csv lists every basis state with its probability") {
    testutil::TempPath g("cli-k3csv");
    write_file(g.str(), kTriangle);
    CliResult r = run_cli("simulate --problem maxcut --n 3 --graph " + g.str() +
                          " --betas 0.3 --gammas 0.7 --format csv");
    REQUIRE(r.exit_code == 0);
    std::vector<std::string> lines = split_lines(r.output);
    REQUIRE(lines.size() == 9);
    CHECK(lines[0] == "index,bitstring,probability");
    CHECK(lines[1].rfind("0,000,", 0) == 0);
    CHECK(lines[8].rfind("7,111,", 0) == 0);
    double total = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        total += std::stod(lines[i].substr(lines[i].rfind(',') + 1));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("usage mistakes exit with code 2") {
    testutil::TempPath g("cli-usage");
    write_file(g.str(), kTriangle);
    const std::string base =
        "simulate --problem maxcut --n 3 --graph " + g.str() + " --betas 0 --gammas 0";

    CHECK(run_cli("").exit_code == 2);            // no subcommand
    CHECK(run_cli("simulate --problem maxcut --betas 0 --gammas 0").exit_code == 2);
    CHECK(run_cli(base + " --bogus-flag").exit_code == 2);
    CHECK(run_cli(base + " --mixer clique").exit_code == 2);       // clique needs --k
    CHECK(run_cli(base + " --format yaml").exit_code == 2);
    CHECK(run_cli("simulate --problem maxcut --n 3 --graph " + g.str() +
                  " --betas 0,0 --gammas 0")
              .exit_code == 2);  // length mismatch
    CHECK(run_cli("simulate --problem maxcut --n 3 --graph " + g.str()).exit_code == 2);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("data problems exit with code 3") {
    testutil::TempPath g("cli-badgraph");
    write_file(g.str(), "0 0\n");  // self-loop
    CHECK(run_cli("simulate --problem maxcut --n 3 --graph " + g.str() +
                  " --betas 0 --gammas 0")
              .exit_code == 3);
    CHECK(run_cli("simulate --problem maxcut --n 3 --graph /nonexistent/file.g"
                  " --betas 0 --gammas 0")
              .exit_code == 3);
}

TEST_CASE("capacity limits exit with code 4") {
    testutil::TempPath g("cli-cap");
    write_file(g.str(), kTriangle);
    CHECK(run_cli("grover-count --problem maxcut --n 31 --graph " + g.str()).exit_code == 4);
    CHECK(run_cli("simulate --problem maxcut --n 31 --graph " + g.str() +
                  " --betas 0 --gammas 0")
              .exit_code == 4);
}

TEST_CASE("optimize reaches the single-edge optimum and is reproducible") {
    testutil::TempPath g("cli-edge");
    write_file(g.str(), kEdge);
    const std::string cmd = "optimize --problem maxcut --n 2 --graph " + g.str() +
                            " --rounds 1 --hops 5";
    CliResult first = run_cli(cmd);
    REQUIRE(first.exit_code == 0);
    std::vector<std::string> lines = split_lines(first.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "p,exp_value,approx_ratio");
    CHECK(lines[1].rfind("1,", 0) == 0);
    const std::string exp_field = lines[1].substr(2, lines[1].rfind(',') - 2);
    CHECK(std::stod(exp_field) == doctest::Approx(1.0).epsilon(1e-6));

    CliResult second = run_cli(cmd);
    CHECK(second.exit_code == 0);
    CHECK(second.output == first.output);
}

TEST_CASE("optimize with restarts is thread-count invariant") {
    testutil::TempPath g("cli-restarts");
    write_file(g.str(), kEdge);
    const std::string base = "optimize --problem maxcut --n 2 --graph " + g.str() +
                             " --rounds 1 --method restarts --restarts 6";
    CliResult serial = run_cli(base + " --threads 1");
    CliResult parallel = run_cli(base + " --threads 4");
    REQUIRE(serial.exit_code == 0);
    REQUIRE(parallel.exit_code == 0);
    CHECK(serial.output == parallel.output);
}

TEST_CASE("optimize checkpoints resume from completed rounds") {
    testutil::TempPath g("cli-ckpt-g");
    testutil::TempPath ckpt("cli-ckpt-f");
    write_file(g.str(), kTriangle);
    const std::string base = "optimize --problem maxcut --n 3 --graph " + g.str() +
                             " --hops 2 --checkpoint " + ckpt.str();

    REQUIRE(run_cli(base + " --rounds 2").exit_code == 0);
    std::vector<std::string> before = split_lines(read_file(ckpt.str()));
    REQUIRE(before.size() == 2);

    CliResult resumed = run_cli(base + " --rounds 4");
    REQUIRE(resumed.exit_code == 0);
    std::vector<std::string> after = split_lines(read_file(ckpt.str()));
    REQUIRE(after.size() == 4);
    CHECK(after[0] == before[0]);
    CHECK(after[1] == before[1]);
    CHECK(split_lines(resumed.output).size() == 5);  // header + 4 rounds

    // checkpoints only make sense for the iterative method
    CHECK(run_cli(base + " --rounds 1 --method restarts").exit_code == 2);
}

TEST_CASE("grover-count writes the exact histogram file") {
    testutil::TempPath g("cli-grv-g");
    testutil::TempPath h1("cli-grv-h1");
    testutil::TempPath h4("cli-grv-h4");
    write_file(g.str(), kTriangle);

    CliResult r = run_cli("grover-count --problem maxcut --n 3 --graph " + g.str() +
                          " --out " + h1.str());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output == "classes=2\ntotal=8\n");
    CHECK(read_file(h1.str()) == "# n=3 k=full total=8\n0\t2\n2\t6\n");

    REQUIRE(run_cli("grover-count --problem maxcut --n 3 --graph " + g.str() + " --out " +
                    h4.str() + " --threads 4")
                .exit_code == 0);
    CHECK(read_file(h4.str()) == read_file(h1.str()));
}

TEST_CASE("simulate accepts angles from an optimizer checkpoint") {
    testutil::TempPath g("cli-angles-g");
    testutil::TempPath angles("cli-angles-f");
    write_file(g.str(), kEdge);
    // The deepest record extends the known p=1 optimum (beta = pi/8, gamma =
    // pi/2) with an identity round; only that record should be used.
    write_file(angles.str(),
               "p=1\texp=0.5\tbetas=0.1\tgammas=0.1\n"
               "p=2\texp=1\tbetas=0.39269908169872414,0\tgammas=1.5707963267948966,0\n");

    CliResult r = run_cli("simulate --problem maxcut --n 2 --graph " + g.str() +
                          " --angles-file " + angles.str());
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.output);
    CHECK(doc["exp_value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(run_cli("simulate --problem maxcut --n 2 --graph " + g.str() + " --angles-file " +
                  angles.str() + " --betas 0 --gammas 0")
              .exit_code == 2);
}

TEST_CASE("explicit cost tables drive the full pipeline") {
    testutil::TempPath t("cli-table");
    write_file(t.str(), "3\n7\n7\n3\n");
    CliResult r = run_cli("simulate --problem table --n 2 --cost-table " + t.str() +
                          " --betas 0 --gammas 0");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.output);
    CHECK(doc["exp_value"].get<double>() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(doc["approx_ratio"].get<double>() == doctest::Approx(5.0 / 7.0).epsilon(1e-12));

    testutil::TempPath short_table("cli-table-short");
    write_file(short_table.str(), "3\n7\n");
    CHECK(run_cli("simulate --problem table --n 2 --cost-table " + short_table.str() +
                  " --betas 0 --gammas 0")
              .exit_code == 3);
}

TEST_CASE("explicit initial states are loaded and validated") {
    testutil::TempPath g("cli-init-g");
    testutil::TempPath st("cli-init-s");
    write_file(g.str(), kEdge);
    write_file(st.str(), "0 0\n1 0\n0 0\n0 0\n");  // one-hot on the cut state 01

    CliResult r = run_cli("simulate --problem maxcut --n 2 --graph " + g.str() +
                          " --initial-state " + st.str() + " --betas 0 --gammas 0.5");
    REQUIRE(r.exit_code == 0);
    json doc = json::parse(r.output);
    CHECK(doc["exp_value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(doc["ground_state_probability"].get<double>() ==
          doctest::Approx(1.0).epsilon(1e-12));

    testutil::TempPath bad("cli-init-bad");
    write_file(bad.str(), "0 0\n0.5 0\n0 0\n0 0\n");  // norm != 1
    CHECK(run_cli("simulate --problem maxcut --n 2 --graph " + g.str() + " --initial-state " +
                  bad.str() + " --betas 0 --gammas 0")
              .exit_code == 3);
}

TEST_CASE("mixer caches are created, reused, and integrity-checked") {
    testutil::TempPath g("cli-cache-g");
    testutil::TempPath cache("cli-cache-m");
    write_file(g.str(), "0 1\n1 2\n2 3\n0 3\n");
    const std::string base = "simulate --problem dks --n 4 --k 2 --graph " + g.str() +
                             " --betas 0.3 --gammas 0.4";

    CliResult direct = run_cli(base + " --mixer clique --mixer-cache " + cache.str());
    REQUIRE(direct.exit_code == 0);
    REQUIRE(std::filesystem::exists(cache.str()));
    const double want = json::parse(direct.output)["exp_value"].get<double>();

    CliResult cached = run_cli(base + " --mixer clique --mixer-cache " + cache.str());
    REQUIRE(cached.exit_code == 0);
    CHECK(json::parse(cached.output)["exp_value"].get<double>() == want);

    CliResult custom = run_cli(base + " --mixer custom:" + cache.str());
    REQUIRE(custom.exit_code == 0);
    CHECK(json::parse(custom.output)["exp_value"].get<double>() == want);

    // flip one payload byte: the checksum must catch it
    {
        std::fstream f(cache.str(), std::ios::in | std::ios::out | std::ios::binary);
        f.seekg(30, std::ios::beg);
        char c = 0;
        f.read(&c, 1);
        c = static_cast<char>(c ^ 0x20);
        f.seekp(30, std::ios::beg);
        f.write(&c, 1);
    }
    CHECK(run_cli(base + " --mixer custom:" + cache.str()).exit_code == 3);

    // the x mixer takes no cache
    CHECK(run_cli(base + " --mixer x:1 --mixer-cache " + cache.str()).exit_code == 2);
}

TEST_CASE("random instances require an explicit seed and reproduce exactly") {
    const std::string base = "simulate --problem maxcut --n 5 --random-instance"
                             " --betas 0.2 --gammas 0.4";
    CHECK(run_cli(base).exit_code == 2);

    CliResult a = run_cli(base + " --seed 11");
    CliResult b = run_cli(base + " --seed 11");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);

    CliResult c = run_cli(base + " --seed 12");
    REQUIRE(c.exit_code == 0);
    CHECK(json::parse(a.output)["problem"]["instance_seed"] !=
          json::parse(c.output)["problem"]["instance_seed"]);

    // a random clause set drives ksat the same way
    CliResult sat = run_cli("simulate --problem ksat --n 4 --random-instance --seed 3"
                            " --clause-density 4 --mixer grover --betas 0.3 --gammas 0.9");
    REQUIRE(sat.exit_code == 0);
    json doc = json::parse(sat.output);
    CHECK(doc["problem"]["clauses"].get<int>() == 16);  // round(density * n)
}

TEST_CASE("median aggregation optimizes instance draws and reports a held-out result") {
    CliResult r = run_cli("optimize --problem maxcut --n 4 --random-instance --seed 9"
                          " --rounds 1 --method median --instances 3 --restarts 3");
    REQUIRE(r.exit_code == 0);
    std::vector<std::string> lines = split_lines(r.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "p,exp_value,approx_ratio");
    CHECK(lines[1].rfind("1,", 0) == 0);

    // median aggregation needs random instances to draw from
    testutil::TempPath g("cli-median-g");
    write_file(g.str(), kTriangle);
    CHECK(run_cli("optimize --problem maxcut --n 3 --graph " + g.str() +
                  " --rounds 1 --method median")
              .exit_code == 2);
}

TEST_CASE("output files are written when --out is given") {
    testutil::TempPath g("cli-out-g");
    testutil::TempPath out("cli-out-f");
    write_file(g.str(), kTriangle);
    CliResult r = run_cli("simulate --problem maxcut --n 3 --graph " + g.str() +
                          " --betas 0 --gammas 0 --out " + out.str());
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.empty());
    json doc = json::parse(read_file(out.str()));
    CHECK(doc["exp_value"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
}
