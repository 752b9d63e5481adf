// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qaoasim/basis.hpp"

namespace qaoa {

/// Simple undirected graph: 0-indexed vertices, no self-loops, no duplicate
/// edges.
struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;

    static Graph from_edges(int n_vertices, std::vector<std::pair<int, int>> edges);
    /// Complete graph K_n.
    static Graph complete(int n_vertices);
};

/// CNF formula with 1-based signed literals (DIMACS convention).
struct CnfFormula {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;

    static CnfFormula from_clauses(int n_vars, std::vector<std::vector<int>> clauses);
};

/// Parse a text edge list ("u v" per line, '#' comments).
Graph load_graph(const std::string& path, int n_vertices);

/// Parse a DIMACS CNF file.
CnfFormula load_cnf(const std::string& path);

// Built-in objective functions. Each takes a basis state of matching width
// and returns a count. Variable b+1 of a formula is qubit b.

/// Number of edges cut by the bipartition x.
double maxcut(const Graph& g, Bits x);

/// Number of satisfied clauses.
double ksat(const CnfFormula& f, Bits x);

/// Number of edges with both endpoints selected.
double densest_subgraph(const Graph& g, Bits x);

/// Number of edges with at least one selected endpoint.
double k_vertex_cover(const Graph& g, Bits x);

using CostFn = std::function<double(Bits)>;

enum class Orientation { Maximize, Minimize };

/// Precomputed objective values over a basis: values[i] = C(unrank(i)).
struct CostTable {
    BasisSet basis;
    std::vector<double> values;
    Orientation orientation = Orientation::Maximize;
    double best_value = 0.0;

    double min_value() const;
    double max_value() const;
};

/// Evaluate f across the whole basis, fanned out over n_threads workers.
/// The result is identical for any thread count. Non-finite values raise
/// DataError naming the offending state.
CostTable build_cost_table(const CostFn& f, const BasisSet& basis,
                           Orientation orientation = Orientation::Maximize,
                           unsigned n_threads = 1);

/// Binary marking table: 1 where C(x) > t (strict) or C(x) >= t, else 0.
CostTable threshold_transform(const CostTable& table, double t, bool strict = true);

}  // namespace qaoa
