// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qaoasim/errors.hpp"

namespace qaoa {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
    throw FormatError(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Graph Graph::from_edges(int n_vertices, std::vector<std::pair<int, int>> edges) {
    if (n_vertices < 1) throw DomainError("graph needs at least one vertex");
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n_vertices || v < 0 || v >= n_vertices) {
            throw DomainError("edge endpoint out of range: (" + std::to_string(u) + ", " +
                              std::to_string(v) + ") with " + std::to_string(n_vertices) +
                              " vertices");
        }
        if (u == v) throw DomainError("self-loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
        if (!seen.insert({u, v}).second) {
            throw DomainError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ")");
        }
    }
    Graph g;
    g.n_vertices = n_vertices;
    g.edges = std::move(edges);
    return g;
}

Graph Graph::complete(int n_vertices) {
    if (n_vertices < 1) throw DomainError("graph needs at least one vertex");
    Graph g;
    g.n_vertices = n_vertices;
    for (int u = 0; u < n_vertices; ++u) {
        for (int v = u + 1; v < n_vertices; ++v) g.edges.emplace_back(u, v);
    }
    return g;
}

CnfFormula CnfFormula::from_clauses(int n_vars, std::vector<std::vector<int>> clauses) {
    if (n_vars < 1) throw DomainError("formula needs at least one variable");
    for (const auto& clause : clauses) {
        if (clause.empty()) throw DomainError("empty clause");
        std::set<int> literals;
        for (int lit : clause) {
            if (lit == 0 || std::abs(lit) > n_vars) {
                throw DomainError("literal " + std::to_string(lit) + " out of range for " +
                                  std::to_string(n_vars) + " variables");
            }
            literals.insert(lit);
        }
        for (int lit : literals) {
            if (lit > 0 && literals.count(-lit)) {
                throw DomainError("clause contains both " + std::to_string(lit) + " and -" +
                                  std::to_string(lit));
            }
        }
    }
    CnfFormula f;
    f.n_vars = n_vars;
    f.clauses = std::move(clauses);
    return f;
}

Graph load_graph(const std::string& path, int n_vertices) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open graph file: " + path);

    std::vector<std::pair<int, int>> edges;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        int u = 0, v = 0;
        if (!(ss >> u) || !(ss >> v)) {
            parse_fail(path, line_no, "expected two vertex indices");
        }
        std::string extra;
        if (ss >> extra) parse_fail(path, line_no, "trailing token '" + extra + "'");
        edges.emplace_back(u, v);
    }

    try {
        return Graph::from_edges(n_vertices, std::move(edges));
    } catch (const DomainError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

CnfFormula load_cnf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cnf file: " + path);

    int n_vars = 0;
    std::size_t n_clauses = 0;
    bool have_header = false;
    std::vector<std::vector<int>> clauses;
    std::vector<int> current;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
        std::istringstream ss(line);
        if (!have_header) {
            std::string p, fmt;
            if (!(ss >> p) ) continue;
            if (p != "p") parse_fail(path, line_no, "expected 'p cnf <vars> <clauses>' header");
            if (!(ss >> fmt >> n_vars >> n_clauses) || fmt != "cnf") {
                parse_fail(path, line_no, "malformed problem header");
            }
            if (n_vars < 1) parse_fail(path, line_no, "header declares no variables");
            have_header = true;
            continue;
        }
        int lit = 0;
        while (ss >> lit) {
            if (lit == 0) {
                if (current.empty()) parse_fail(path, line_no, "empty clause");
                clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (std::abs(lit) > n_vars) {
                parse_fail(path, line_no, "literal " + std::to_string(lit) +
                                              " exceeds declared variable count");
            }
            current.push_back(lit);
        }
        if (!ss.eof()) parse_fail(path, line_no, "non-integer token in clause");
    }

    if (!have_header) throw FormatError(path + ": missing problem header");
    if (!current.empty()) throw FormatError(path + ": unterminated final clause");
    if (clauses.size() != n_clauses) {
        throw FormatError(path + ": header declares " + std::to_string(n_clauses) +
                          " clauses but file has " + std::to_string(clauses.size()));
    }
    try {
        return CnfFormula::from_clauses(n_vars, std::move(clauses));
    } catch (const DomainError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

double maxcut(const Graph& g, Bits x) {
    if (g.n_vertices != x.n) throw DomainError("graph size does not match register width");
    int cut = 0;
    for (const auto& [u, v] : g.edges) cut += x.test(u) != x.test(v);
    return cut;
}

double ksat(const CnfFormula& f, Bits x) {
    if (f.n_vars != x.n) throw DomainError("variable count does not match register width");
    int satisfied = 0;
    for (const auto& clause : f.clauses) {
        for (int lit : clause) {
            if (x.test(std::abs(lit) - 1) == (lit > 0)) {
                ++satisfied;
                break;
            }
        }
    }
    return satisfied;
}

double densest_subgraph(const Graph& g, Bits x) {
    if (g.n_vertices != x.n) throw DomainError("graph size does not match register width");
    int inside = 0;
    for (const auto& [u, v] : g.edges) inside += x.test(u) && x.test(v);
    return inside;
}

double k_vertex_cover(const Graph& g, Bits x) {
    if (g.n_vertices != x.n) throw DomainError("graph size does not match register width");
    int covered = 0;
    for (const auto& [u, v] : g.edges) covered += x.test(u) || x.test(v);
    return covered;
}

double CostTable::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

double CostTable::max_value() const {
    return *std::max_element(values.begin(), values.end());
}

CostTable build_cost_table(const CostFn& f, const BasisSet& basis, Orientation orientation,
                           unsigned n_threads) {
    const std::uint64_t dim = basis.dim();
    std::vector<double> values(dim);

    // Each worker fills a disjoint index block of the shared vector, so the
    // result is bitwise identical for any thread count.
    auto fill_block = [&](std::uint64_t lo, std::uint64_t hi,
                          std::optional<std::uint64_t>& first_bad) {
        if (lo >= hi) return;
        const int n = basis.n();
        if (basis.is_explicit()) {
            const auto& list = *basis.explicit_states();
            for (std::uint64_t i = lo; i < hi; ++i) {
                values[i] = f(Bits{list[i], n});
            }
        } else if (basis.unconstrained()) {
            for (std::uint64_t i = lo; i < hi; ++i) {
                values[i] = f(Bits{i, n});
            }
        } else {
            std::uint64_t word = basis.unrank(lo);
            for (std::uint64_t i = lo; i < hi; ++i) {
                values[i] = f(Bits{word, n});
                if (i + 1 < hi) word = gosper_next(word);
            }
        }
        for (std::uint64_t i = lo; i < hi; ++i) {
            if (!std::isfinite(values[i])) {
                first_bad = i;
                return;
            }
        }
    };

    unsigned workers = std::max(1u, n_threads);
    if (workers > 1 && dim < 2 * workers) workers = 1;

    std::vector<std::optional<std::uint64_t>> bad(workers);
    if (workers == 1) {
        fill_block(0, dim, bad[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (dim + workers - 1) / workers;
        for (unsigned t = 0; t < workers; ++t) {
            const std::uint64_t lo = chunk * t;
            const std::uint64_t hi = std::min(dim, lo + chunk);
            pool.emplace_back([&, lo, hi, t] { fill_block(lo, hi, bad[t]); });
        }
        for (auto& th : pool) th.join();
    }

    std::optional<std::uint64_t> first_bad;
    for (const auto& b : bad) {
        if (b && (!first_bad || *b < *first_bad)) first_bad = b;
    }
    if (first_bad) {
        throw DataError("objective returned a non-finite value at state " +
                        to_bitstring(basis.state(*first_bad)));
    }

    CostTable table;
    table.basis = basis;
    table.values = std::move(values);
    table.orientation = orientation;
    table.best_value =
        orientation == Orientation::Maximize ? table.max_value() : table.min_value();
    return table;
}

CostTable threshold_transform(const CostTable& table, double t, bool strict) {
    CostTable marked;
    marked.basis = table.basis;
    marked.orientation = Orientation::Maximize;
    marked.values.resize(table.values.size());
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        const bool above = strict ? table.values[i] > t : table.values[i] >= t;
        marked.values[i] = above ? 1.0 : 0.0;
    }
    marked.best_value = marked.max_value();
    return marked;
}

}  // namespace qaoa
