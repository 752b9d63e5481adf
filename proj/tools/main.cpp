// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver. Three subcommands:
//
//   simulate      run a fixed-angle circuit and report expectation,
//                 ground-state probability, and (optionally) probabilities
//   optimize      layer-by-layer angle finding with checkpoint/resume,
//                 or random restarts / median-angle transfer
//   grover-count  build and store the compressed cost histogram
//
// Exit codes: 0 success, 2 usage error, 3 data/format error, 4 capacity.
// Configuration comes from flags only; a fixed --seed makes every output
// file bit-reproducible.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qaoasim/angles.hpp"
#include "qaoasim/basis.hpp"
#include "qaoasim/cost.hpp"
#include "qaoasim/errors.hpp"
#include "qaoasim/grad.hpp"
#include "qaoasim/grover_fast.hpp"
#include "qaoasim/kernels.hpp"
#include "qaoasim/mixer.hpp"
#include "qaoasim/sim.hpp"

namespace {

using nlohmann::json;

// Usage mistakes that CLI11's declarative checks cannot express (flag
// combinations, values that depend on other flags). Mapped to exit 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Option bundles
// ---------------------------------------------------------------------------

struct ProblemOpts {
    int n = 0;
    int k = -1;  // -1 = unconstrained
    std::string problem;
    std::string graph_path;
    std::string cnf_path;
    std::string table_path;
    bool random_instance = false;
    double clause_density = 4.0;
    std::uint64_t seed = 1;
    bool seed_given = false;
    unsigned threads = 1;
};

struct MixerOpts {
    std::string mixer = "x:1";
    std::string cache_path;
};

struct SimulateOpts {
    std::string betas;
    std::string gammas;
    std::string angles_file;
    std::string initial_state;
    std::string out;
    std::string format = "json";
    bool probabilities = false;
};

struct OptimizeOpts {
    int rounds = 1;
    std::string method = "iterative";
    std::string checkpoint;
    std::string out;
    int hops = 50;
    int restarts = 100;
    int instances = 3;
    double step_size = 0.3;
    double temperature = 1.0;
    int max_iters = 1000;
    double tolerance = 1e-8;
};

struct GroverCountOpts {
    std::string out;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

// splitmix64 finisher; decorrelates instance streams drawn from one seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_double_list(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::string token;
    std::istringstream ss(text);
    while (std::getline(ss, token, ',')) {
        try {
            std::size_t pos = 0;
            double v = std::stod(token, &pos);
            while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) {
                ++pos;
            }
            if (pos != token.size()) throw std::invalid_argument("trailing characters");
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": cannot parse '" + token + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(std::string(flag) + ": empty list");
    return out;
}

// Strips '#' comments and surrounding whitespace; empty result = skip line.
std::string strip_line(const std::string& raw) {
    std::string line = raw.substr(0, raw.find('#'));
    const char* ws = " \t\r\n";
    std::size_t a = line.find_first_not_of(ws);
    if (a == std::string::npos) return {};
    std::size_t b = line.find_last_not_of(ws);
    return line.substr(a, b - a + 1);
}

// ---------------------------------------------------------------------------
// Random instance generation (documented generators; fixed draw order)
// ---------------------------------------------------------------------------

// G(n, 1/2): every unordered pair independently present with probability 1/2.
// Pairs are visited in lexicographic order so a seed pins the instance.
qaoa::Graph random_gnp_graph(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (unit(rng) < 0.5) edges.emplace_back(u, v);
        }
    }
    return qaoa::Graph::from_edges(n, std::move(edges));
}

// Random 3-SAT at the given clause density: round(density * n) clauses, each
// a uniform 3-subset of variables (rejection sampling keeps subsets uniform)
// with independent uniform negations. Duplicate clauses are allowed.
qaoa::CnfFormula random_3sat(int n, double density, std::uint64_t seed) {
    if (n < 3) throw UsageError("--random-instance ksat needs --n >= 3");
    if (!(density > 0.0)) throw UsageError("--clause-density must be positive");
    auto m = static_cast<long long>(std::llround(density * n));
    if (m < 1) m = 1;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> var(1, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<int>> clauses;
    clauses.reserve(static_cast<std::size_t>(m));
    for (long long c = 0; c < m; ++c) {
        int a = var(rng);
        int b = var(rng);
        while (b == a) b = var(rng);
        int d = var(rng);
        while (d == a || d == b) d = var(rng);
        std::vector<int> clause{a, b, d};
        for (int& lit : clause) {
            if (unit(rng) < 0.5) lit = -lit;
        }
        clauses.push_back(std::move(clause));
    }
    return qaoa::CnfFormula::from_clauses(n, std::move(clauses));
}

// ---------------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------------

qaoa::BasisSet make_basis(const ProblemOpts& p) {
    if (p.k >= 0) return qaoa::BasisSet::dicke(p.n, p.k);
    return qaoa::BasisSet::full(p.n);
}

// Semantic problems inside an input file (self-loops, duplicate edges,
// contradictory clauses) are data errors (exit 3), not usage errors, even
// though the library reports them as domain violations.
template <typename Fn>
auto load_as_data(Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const qaoa::DomainError& e) {
        throw qaoa::DataError(e.what());
    }
}

std::vector<double> load_cost_values(const std::string& path, std::uint64_t dim) {
    std::ifstream in(path);
    if (!in) throw qaoa::DataError("cannot open cost table file: " + path);
    std::vector<double> values;
    values.reserve(dim);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v = 0.0;
        std::string rest;
        if (!(ss >> v) || (ss >> rest)) {
            throw qaoa::FormatError(path + ":" + std::to_string(lineno) +
                                    ": expected one number per line");
        }
        if (!std::isfinite(v)) {
            throw qaoa::DataError(path + ":" + std::to_string(lineno) + ": non-finite value");
        }
        values.push_back(v);
    }
    if (values.size() != dim) {
        throw qaoa::FormatError(path + ": expected " + std::to_string(dim) + " values, found " +
                                std::to_string(values.size()));
    }
    return values;
}

struct Problem {
    qaoa::CostTable table;
    json desc;
};

qaoa::CostFn make_graph_fn(const std::string& problem, const qaoa::Graph& g) {
    if (problem == "maxcut") {
        return [g](qaoa::Bits x) { return qaoa::maxcut(g, x); };
    }
    if (problem == "dks") {
        return [g](qaoa::Bits x) { return qaoa::densest_subgraph(g, x); };
    }
    return [g](qaoa::Bits x) { return qaoa::k_vertex_cover(g, x); };
}

// Builds the cost table named by the problem flags. `salt` shifts the
// instance stream so median-angle runs can draw an instance family from
// one seed.
Problem build_problem(const ProblemOpts& p, std::uint64_t salt = 0) {
    const qaoa::BasisSet basis = make_basis(p);
    Problem out;
    out.desc["name"] = p.problem;
    out.desc["n"] = p.n;
    if (p.k >= 0) out.desc["k"] = p.k;

    const bool graph_problem =
        p.problem == "maxcut" || p.problem == "dks" || p.problem == "kvc";

    if (p.random_instance) {
        std::uint64_t inst_seed = mix_seed(p.seed, salt);
        out.desc["random_instance"] = true;
        out.desc["instance_seed"] = inst_seed;
        if (graph_problem) {
            qaoa::Graph g = random_gnp_graph(p.n, inst_seed);
            out.desc["edges"] = g.edges.size();
            auto fn = make_graph_fn(p.problem, g);
            out.table = qaoa::build_cost_table(fn, basis, qaoa::Orientation::Maximize, p.threads);
        } else if (p.problem == "ksat") {
            qaoa::CnfFormula f = random_3sat(p.n, p.clause_density, inst_seed);
            out.desc["clauses"] = f.clauses.size();
            out.table = qaoa::build_cost_table(
                [&f](qaoa::Bits x) { return qaoa::ksat(f, x); }, basis,
                qaoa::Orientation::Maximize, p.threads);
        } else {
            throw UsageError("--random-instance supports maxcut, dks, kvc, ksat");
        }
        return out;
    }

    if (graph_problem) {
        if (p.graph_path.empty()) throw UsageError("--problem " + p.problem + " needs --graph");
        qaoa::Graph g = load_as_data([&] { return qaoa::load_graph(p.graph_path, p.n); });
        out.desc["graph"] = p.graph_path;
        out.desc["edges"] = g.edges.size();
        auto fn = make_graph_fn(p.problem, g);
        out.table = qaoa::build_cost_table(fn, basis, qaoa::Orientation::Maximize, p.threads);
    } else if (p.problem == "ksat") {
        if (p.cnf_path.empty()) throw UsageError("--problem ksat needs --cnf");
        qaoa::CnfFormula f = load_as_data([&] { return qaoa::load_cnf(p.cnf_path); });
        if (f.n_vars != p.n) {
            throw UsageError("--n " + std::to_string(p.n) + " does not match the formula's " +
                             std::to_string(f.n_vars) + " variables");
        }
        out.desc["cnf"] = p.cnf_path;
        out.desc["clauses"] = f.clauses.size();
        out.table =
            qaoa::build_cost_table([&f](qaoa::Bits x) { return qaoa::ksat(f, x); }, basis,
                                   qaoa::Orientation::Maximize, p.threads);
    } else if (p.problem == "table") {
        if (p.table_path.empty()) throw UsageError("--problem table needs --cost-table");
        out.desc["cost_table"] = p.table_path;
        std::vector<double> values = load_cost_values(p.table_path, basis.dim());
        qaoa::CostTable t;
        t.basis = basis;
        t.values = std::move(values);
        t.orientation = qaoa::Orientation::Maximize;
        t.best_value = t.max_value();
        out.table = std::move(t);
    } else {
        throw UsageError("unknown --problem '" + p.problem + "'");
    }
    return out;
}

// The bare objective, for the compressed-histogram path which evaluates
// lazily instead of through a table.
qaoa::CostFn build_cost_fn(const ProblemOpts& p, json& desc) {
    const bool graph_problem =
        p.problem == "maxcut" || p.problem == "dks" || p.problem == "kvc";
    desc["name"] = p.problem;
    desc["n"] = p.n;
    if (p.k >= 0) desc["k"] = p.k;

    if (p.random_instance) {
        std::uint64_t inst_seed = mix_seed(p.seed, 0);
        desc["random_instance"] = true;
        desc["instance_seed"] = inst_seed;
        if (graph_problem) return make_graph_fn(p.problem, random_gnp_graph(p.n, inst_seed));
        if (p.problem == "ksat") {
            qaoa::CnfFormula f = random_3sat(p.n, p.clause_density, inst_seed);
            return [f](qaoa::Bits x) { return qaoa::ksat(f, x); };
        }
        throw UsageError("--random-instance supports maxcut, dks, kvc, ksat");
    }
    if (graph_problem) {
        if (p.graph_path.empty()) throw UsageError("--problem " + p.problem + " needs --graph");
        return make_graph_fn(p.problem,
                             load_as_data([&] { return qaoa::load_graph(p.graph_path, p.n); }));
    }
    if (p.problem == "ksat") {
        if (p.cnf_path.empty()) throw UsageError("--problem ksat needs --cnf");
        qaoa::CnfFormula f = load_as_data([&] { return qaoa::load_cnf(p.cnf_path); });
        if (f.n_vars != p.n) {
            throw UsageError("--n " + std::to_string(p.n) + " does not match the formula's " +
                             std::to_string(f.n_vars) + " variables");
        }
        return [f](qaoa::Bits x) { return qaoa::ksat(f, x); };
    }
    if (p.problem == "table") {
        if (p.table_path.empty()) throw UsageError("--problem table needs --cost-table");
        qaoa::BasisSet basis = make_basis(p);
        auto values = std::make_shared<std::vector<double>>(
            load_cost_values(p.table_path, basis.dim()));
        return [values, basis](qaoa::Bits x) { return (*values)[basis.rank(x.word)]; };
    }
    throw UsageError("unknown --problem '" + p.problem + "'");
}

// ---------------------------------------------------------------------------
// Mixer assembly
// ---------------------------------------------------------------------------

qaoa::Mixer make_mixer(const MixerOpts& m, const ProblemOpts& p, const qaoa::BasisSet& basis) {
    std::optional<std::string> cache;
    if (!m.cache_path.empty()) cache = m.cache_path;

    const std::string& spec = m.mixer;
    if (spec == "x" || spec.rfind("x:", 0) == 0) {
        if (p.k >= 0) {
            throw UsageError("--mixer x acts on the unconstrained basis; drop --k or pick "
                             "clique/ring/grover");
        }
        if (cache) throw UsageError("--mixer-cache applies to clique and ring mixers only");
        std::vector<int> orders{1};
        if (spec.size() > 2) {
            orders.clear();
            for (double v : parse_double_list(spec.substr(2), "--mixer x:")) {
                if (v != std::floor(v)) throw UsageError("--mixer x: orders must be integers");
                orders.push_back(static_cast<int>(v));
            }
        }
        return qaoa::mixer_x(orders, p.n);
    }
    if (spec == "clique" || spec == "ring") {
        if (p.k < 0) throw UsageError("--mixer " + spec + " requires --k");
        if (spec == "clique") return qaoa::mixer_clique(p.n, p.k, cache);
        return qaoa::mixer_ring(p.n, p.k, cache);
    }
    if (spec == "grover") {
        if (cache) throw UsageError("--mixer-cache applies to clique and ring mixers only");
        return qaoa::mixer_grover(basis);
    }
    if (spec.rfind("custom:", 0) == 0) {
        if (cache) throw UsageError("--mixer-cache applies to clique and ring mixers only");
        std::string path = spec.substr(7);
        if (path.empty()) throw UsageError("--mixer custom: needs a file path");
        return qaoa::load_mixer_checked(path, basis);
    }
    throw UsageError("unknown --mixer '" + spec + "'");
}

// ---------------------------------------------------------------------------
// I/O helpers
// ---------------------------------------------------------------------------

qaoa::StateVector load_initial_state(const std::string& path, const qaoa::BasisSet& basis) {
    std::ifstream in(path);
    if (!in) throw qaoa::DataError("cannot open initial state file: " + path);
    std::vector<std::complex<double>> amps;
    amps.reserve(basis.dim());
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        double re = 0.0;
        double im = 0.0;
        std::string rest;
        if (!(ss >> re >> im) || (ss >> rest)) {
            throw qaoa::FormatError(path + ":" + std::to_string(lineno) +
                                    ": expected 're im' per line");
        }
        amps.emplace_back(re, im);
    }
    if (amps.size() != basis.dim()) {
        throw qaoa::FormatError(path + ": expected " + std::to_string(basis.dim()) +
                                " amplitudes, found " + std::to_string(amps.size()));
    }
    qaoa::StateVector st{basis, std::move(amps)};
    if (std::abs(st.norm_sq() - 1.0) > 1e-10) {
        throw qaoa::DataError(path + ": initial state is not normalized");
    }
    return st;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qaoa::DataError("cannot open output file: " + path);
    out << content;
    out.flush();
    if (!out) throw qaoa::DataError("failed writing output file: " + path);
}

// Defined when the table is nonnegative with a positive best value.
std::optional<double> approx_ratio(const qaoa::CostTable& t, double exp_value) {
    if (t.orientation != qaoa::Orientation::Maximize) return std::nullopt;
    if (t.min_value() < 0.0 || t.best_value <= 0.0) return std::nullopt;
    return exp_value / t.best_value;
}

json provenance_block(const std::string& command, int argc, char** argv) {
    json flags = json::array();
    for (int i = 2; i < argc; ++i) flags.push_back(argv[i]);
    return json{{"command", command},
                {"flags", flags},
                {"backend", qaoa::kernels::backend_name()}};
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

qaoa::AngleSchedule resolve_angles(const SimulateOpts& s) {
    const bool inline_angles = !s.betas.empty() || !s.gammas.empty();
    if (inline_angles && !s.angles_file.empty()) {
        throw UsageError("--betas/--gammas and --angles-file are mutually exclusive");
    }
    if (inline_angles) {
        if (s.betas.empty() || s.gammas.empty()) {
            throw UsageError("--betas and --gammas must be given together");
        }
        std::vector<double> betas = parse_double_list(s.betas, "--betas");
        std::vector<double> gammas = parse_double_list(s.gammas, "--gammas");
        if (betas.size() != gammas.size()) {
            throw UsageError("--betas and --gammas must have the same length");
        }
        return qaoa::AngleSchedule::flat(std::move(betas), std::move(gammas));
    }
    if (s.angles_file.empty()) {
        throw UsageError("pass --betas/--gammas or --angles-file");
    }
    std::vector<qaoa::RoundRecord> records = qaoa::read_checkpoint(s.angles_file);
    if (records.empty()) {
        throw qaoa::DataError(s.angles_file + ": no completed rounds");
    }
    const qaoa::RoundRecord& last = records.back();
    return qaoa::AngleSchedule::flat(last.betas, last.gammas);
}

int run_simulate(const ProblemOpts& p, const MixerOpts& m, const SimulateOpts& s,
                 int argc, char** argv) {
    if (s.format != "json" && s.format != "csv") {
        throw UsageError("--format must be json or csv");
    }
    Problem prob = build_problem(p);
    qaoa::Mixer mixer = make_mixer(m, p, prob.table.basis);
    qaoa::AngleSchedule angles = resolve_angles(s);

    std::optional<qaoa::StateVector> initial;
    if (!s.initial_state.empty()) {
        initial = load_initial_state(s.initial_state, prob.table.basis);
    }
    qaoa::SimResult result =
        qaoa::simulate(angles, mixer, prob.table, initial ? &*initial : nullptr);
    const double exp = qaoa::exp_value(result);
    const double gsp = qaoa::ground_state_probability(result);
    const std::optional<double> ar = approx_ratio(prob.table, exp);

    if (s.format == "csv") {
        std::vector<double> probs = qaoa::probabilities(result);
        std::string csv = "index,bitstring,probability\n";
        for (std::size_t i = 0; i < probs.size(); ++i) {
            csv += std::to_string(i);
            csv += ',';
            csv += qaoa::to_bitstring(prob.table.basis.state(i));
            csv += ',';
            csv += fmt_double(probs[i]);
            csv += '\n';
        }
        write_output(s.out, csv);
        return 0;
    }

    json doc;
    doc["provenance"] = provenance_block("simulate", argc, argv);
    doc["problem"] = prob.desc;
    doc["problem"]["dim"] = prob.table.basis.dim();
    doc["problem"]["best_value"] = prob.table.best_value;
    doc["mixer"] = m.mixer;
    doc["angles"] = {{"betas", angles.flat_betas()}, {"gammas", angles.gammas}};
    doc["exp_value"] = exp;
    doc["ground_state_probability"] = gsp;
    if (ar) doc["approx_ratio"] = *ar;
    if (s.probabilities) doc["probabilities"] = qaoa::probabilities(result);
    write_output(s.out, doc.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

std::string summary_csv(const qaoa::CostTable& table,
                        const std::vector<qaoa::RoundRecord>& records) {
    std::string csv = "p,exp_value,approx_ratio\n";
    for (const qaoa::RoundRecord& r : records) {
        csv += std::to_string(r.p);
        csv += ',';
        csv += fmt_double(r.expectation);
        csv += ',';
        if (auto ar = approx_ratio(table, r.expectation)) csv += fmt_double(*ar);
        csv += '\n';
    }
    return csv;
}

int run_optimize(const ProblemOpts& p, const MixerOpts& m, const OptimizeOpts& o) {
    if (o.rounds < 1) throw UsageError("--rounds must be >= 1");
    qaoa::OptimizerConfig cfg;
    cfg.hops = o.hops;
    cfg.restarts = o.restarts;
    cfg.rng_seed = p.seed;
    cfg.step_size = o.step_size;
    cfg.temperature = o.temperature;
    cfg.max_local_iters = o.max_iters;
    cfg.tolerance = o.tolerance;
    cfg.workers = p.threads;

    if (o.method == "iterative") {
        Problem prob = build_problem(p);
        qaoa::Mixer mixer = make_mixer(m, p, prob.table.basis);
        std::optional<std::string> ckpt;
        if (!o.checkpoint.empty()) ckpt = o.checkpoint;
        std::vector<qaoa::RoundRecord> records =
            qaoa::find_angles(o.rounds, mixer, prob.table, cfg, ckpt);
        write_output(o.out, summary_csv(prob.table, records));
        return 0;
    }
    if (!o.checkpoint.empty()) {
        throw UsageError("--checkpoint applies to --method iterative only");
    }
    if (o.method == "restarts") {
        Problem prob = build_problem(p);
        qaoa::Mixer mixer = make_mixer(m, p, prob.table.basis);
        qaoa::RoundRecord best = qaoa::find_angles_random_restarts(o.rounds, mixer, prob.table, cfg);
        write_output(o.out, summary_csv(prob.table, {best}));
        return 0;
    }
    if (o.method == "median") {
        // Angle transfer: optimize a family of random instances drawn from the
        // seed, take per-coordinate median angles, and score them on a held-out
        // instance (salt = instances).
        if (!p.random_instance) throw UsageError("--method median requires --random-instance");
        if (o.instances < 1) throw UsageError("--instances must be >= 1");
        std::vector<qaoa::RoundRecord> per_instance;
        per_instance.reserve(static_cast<std::size_t>(o.instances));
        for (int i = 0; i < o.instances; ++i) {
            Problem inst = build_problem(p, static_cast<std::uint64_t>(i) + 1);
            qaoa::Mixer mixer = make_mixer(m, p, inst.table.basis);
            qaoa::OptimizerConfig icfg = cfg;
            icfg.rng_seed = mix_seed(p.seed, 0x5EEDull + static_cast<std::uint64_t>(i));
            per_instance.push_back(
                qaoa::find_angles_random_restarts(o.rounds, mixer, inst.table, icfg));
        }
        qaoa::AngleSchedule median = qaoa::median_angles(per_instance);
        Problem held_out = build_problem(p, 0);
        qaoa::Mixer mixer = make_mixer(m, p, held_out.table.basis);
        qaoa::SimResult result = qaoa::simulate(median, mixer, held_out.table);
        qaoa::RoundRecord rec;
        rec.p = o.rounds;
        rec.betas = median.flat_betas();
        rec.gammas = median.gammas;
        rec.expectation = qaoa::exp_value(result);
        write_output(o.out, summary_csv(held_out.table, {rec}));
        return 0;
    }
    throw UsageError("--method must be iterative, restarts, or median");
}

// ---------------------------------------------------------------------------
// grover-count
// ---------------------------------------------------------------------------

int run_grover_count(const ProblemOpts& p, const GroverCountOpts& g) {
    json desc;
    qaoa::CostFn fn = build_cost_fn(p, desc);
    std::optional<int> k;
    if (p.k >= 0) k = p.k;
    qaoa::CompressedCost cc = qaoa::compress_cost(fn, p.n, k, p.threads);
    if (!g.out.empty()) qaoa::save_histogram(cc, g.out);
    std::cout << "classes=" << cc.classes() << "\n";
    std::cout << "total=" << cc.total << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Flag wiring
// ---------------------------------------------------------------------------

void add_problem_flags(CLI::App* cmd, ProblemOpts& p, CLI::Option** seed_out = nullptr) {
    cmd->add_option("--n", p.n, "Register width in qubits")
        ->required()
        ->check(CLI::Range(1, 62));
    cmd->add_option("--k", p.k, "Hamming-weight constraint (Dicke basis)")
        ->check(CLI::Range(0, 62));
    cmd->add_option("--problem", p.problem, "maxcut | ksat | dks | kvc | table")->required();
    cmd->add_option("--graph", p.graph_path, "Edge-list file ('u v' per line)");
    cmd->add_option("--cnf", p.cnf_path, "DIMACS CNF file");
    cmd->add_option("--cost-table", p.table_path, "Objective values, one per basis state");
    cmd->add_flag("--random-instance", p.random_instance,
                  "Generate the instance from --seed: G(n,1/2) graphs, random 3-SAT");
    cmd->add_option("--clause-density", p.clause_density,
                    "Clauses per variable for random 3-SAT (default 4.0)");
    auto* seed = cmd->add_option("--seed", p.seed, "RNG seed; fixes every random choice");
    cmd->add_option("--threads", p.threads, "Worker threads for table/histogram builds")
        ->check(CLI::Range(1u, 256u));
    cmd->callback([&p, seed] { p.seed_given = seed->count() > 0; });
    if (seed_out) *seed_out = seed;
}

void add_mixer_flags(CLI::App* cmd, MixerOpts& m) {
    cmd->add_option("--mixer", m.mixer,
                    "x[:orders] | clique | ring | grover | custom:<path> (default x:1)");
    cmd->add_option("--mixer-cache", m.cache_path,
                    "Cache file for clique/ring eigendecompositions");
}

void require_seed_for_random(const ProblemOpts& p) {
    if (p.random_instance && !p.seed_given) {
        throw UsageError("--random-instance requires an explicit --seed");
    }
    if (p.random_instance &&
        (!p.graph_path.empty() || !p.cnf_path.empty() || !p.table_path.empty())) {
        throw UsageError("--random-instance conflicts with --graph/--cnf/--cost-table");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact statevector simulator for alternating-operator circuits"};
    app.require_subcommand(1);

    ProblemOpts prob;
    MixerOpts mix;
    SimulateOpts sim;
    OptimizeOpts opt;
    GroverCountOpts grv;

    CLI::App* c_sim = app.add_subcommand("simulate", "Run a fixed-angle circuit");
    add_problem_flags(c_sim, prob);
    add_mixer_flags(c_sim, mix);
    c_sim->add_option("--betas", sim.betas, "Comma-separated mixer angles");
    c_sim->add_option("--gammas", sim.gammas, "Comma-separated phase angles");
    c_sim->add_option("--angles-file", sim.angles_file,
                      "Checkpoint file; uses its deepest round");
    c_sim->add_option("--initial-state", sim.initial_state,
                      "Amplitude file ('re im' per line) replacing the uniform start");
    c_sim->add_option("--out", sim.out, "Output file (default stdout)");
    c_sim->add_option("--format", sim.format, "json | csv (default json)");
    c_sim->add_flag("--probabilities", sim.probabilities,
                    "Include the full probability vector in JSON output");

    CLI::App* c_opt = app.add_subcommand("optimize", "Find angles layer by layer");
    add_problem_flags(c_opt, prob);
    add_mixer_flags(c_opt, mix);
    c_opt->add_option("--rounds", opt.rounds, "Target circuit depth p")->required();
    c_opt->add_option("--method", opt.method, "iterative | restarts | median");
    c_opt->add_option("--checkpoint", opt.checkpoint, "Resumable per-round angle store");
    c_opt->add_option("--hops", opt.hops, "Basin hops per round");
    c_opt->add_option("--restarts", opt.restarts, "Restarts for --method restarts/median");
    c_opt->add_option("--instances", opt.instances, "Instance count for --method median");
    c_opt->add_option("--step-size", opt.step_size, "Basin-hop perturbation half-width");
    c_opt->add_option("--temperature", opt.temperature, "Metropolis temperature");
    c_opt->add_option("--max-iters", opt.max_iters, "Local optimizer iteration cap");
    c_opt->add_option("--tolerance", opt.tolerance, "Gradient-norm convergence threshold");
    c_opt->add_option("--out", opt.out, "Summary CSV file (default stdout)");

    CLI::App* c_grv = app.add_subcommand("grover-count", "Build the compressed cost histogram");
    add_problem_flags(c_grv, prob);
    c_grv->add_option("--out", grv.out, "Histogram file to write");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        require_seed_for_random(prob);
        if (c_sim->parsed()) return run_simulate(prob, mix, sim, argc, argv);
        if (c_opt->parsed()) return run_optimize(prob, mix, opt);
        return run_grover_count(prob, grv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qaoa::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const qaoa::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qaoa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
