// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qaoasim/cost.hpp"

namespace qaoa {

/// Exact histogram of an objective over the feasible set: the distinct values
/// and how many states attain each. This is all a Grover-mixer QAOA needs.
struct CompressedCost {
    std::vector<double> values;          // strictly increasing
    std::vector<std::uint64_t> degeneracies;
    std::uint64_t total = 0;             // 2^n or C(n,k)
    int n = 0;
    std::optional<int> k;

    std::size_t classes() const noexcept { return values.size(); }
};

/// One amplitude per distinct objective value; amps[j] is shared by every
/// state with value values[j].
struct CompressedState {
    std::vector<std::complex<double>> amps;
    const CompressedCost* cost = nullptr;

    /// sum_j g_j |amps[j]|^2
    double norm_sq() const;
};

/// Count objective values across all feasible states, split over workers.
/// Unconstrained work is partitioned by integer ranges; weight-k work by
/// Gosper-chain segments seeded with dicke_unrank. The merged histogram is
/// identical for any worker count. Distinct built-in (integer) values are
/// matched exactly; nearby float values are coalesced within 1e-12.
/// Capacity: 2^n (or C(n,k)) <= 2^30.
CompressedCost compress_cost(const CostFn& f, int n, std::optional<int> k = {},
                             unsigned workers = 1);

/// Grover-mixer QAOA in the compressed representation. Per round:
/// amps[j] *= exp(-i gamma_r c_j), then amps[j] += (e^{-i beta_r} - 1) * s
/// with s = (1/total) sum_j g_j amps[j]. O(m) per round.
CompressedState simulate_compressed(const std::vector<double>& betas,
                                    const std::vector<double>& gammas,
                                    const CompressedCost& cost);

double exp_value_compressed(const CompressedState& st);
double ground_state_probability_compressed(const CompressedState& st,
                                           Orientation orientation = Orientation::Maximize);

/// Histogram cache: header "# n=<n> k=<k|full> total=<total>", then
/// "<value>\t<degeneracy>" lines sorted by value.
void save_histogram(const CompressedCost& cc, const std::string& path);
CompressedCost load_histogram(const std::string& path);

}  // namespace qaoa
