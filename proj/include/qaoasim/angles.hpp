// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qaoasim/grad.hpp"
#include "qaoasim/sim.hpp"

namespace qaoa {

struct OptimizerConfig {
    int hops = 50;               // basinhopping iterations
    double step_size = 0.3;      // perturbation scale, radians
    double temperature = 1.0;    // Metropolis acceptance temperature
    int restarts = 100;          // for random-restart mode
    std::uint64_t rng_seed = 1;
    int max_local_iters = 1000;  // BFGS cap
    double tolerance = 1e-8;     // gradient-norm stop
    unsigned workers = 1;        // parallel restarts
};

/// Best angles found for one round count.
struct RoundRecord {
    int p = 0;
    std::vector<double> betas;
    std::vector<double> gammas;
    double expectation = 0.0;
    std::uint64_t evaluations = 0;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;
using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct LocalMinResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    std::uint64_t f_evals = 0;
    std::uint64_t g_evals = 0;
    bool converged = false;
};

/// BFGS with a strong-Wolfe line search. Deterministic given x0. Non-finite
/// objective values raise OptimizerError.
LocalMinResult bfgs_minimize(const ObjectiveFn& f, const GradientFn& grad,
                             std::vector<double> x0, const OptimizerConfig& cfg = {});

/// Monotone best-ever basinhopping: perturb the accepted point uniformly in
/// [-step_size, step_size] per coordinate, descend with BFGS, Metropolis-
/// accept with exp(-df/temperature). Seeded, reproducible.
LocalMinResult basinhopping(const ObjectiveFn& f, const GradientFn& grad,
                            std::vector<double> x0, const OptimizerConfig& cfg = {});

/// Iterative round-by-round angle finding (maximization): round 1 basinhops
/// from all angles 0.1; round p seeds from round p-1 (the zero-extension seed
/// is always evaluated, so expectations never decrease). Completed rounds are
/// appended to the checkpoint file before the next starts; a rerun loads them
/// and resumes at the first missing round.
std::vector<RoundRecord> find_angles(int p_target, const Mixer& mixer, const CostTable& cost,
                                     const OptimizerConfig& cfg = {},
                                     const std::optional<std::string>& checkpoint_path = {});

/// Per-round mixer form; mixers[r] is used in round r+1 for every p.
std::vector<RoundRecord> find_angles(int p_target, const std::vector<const Mixer*>& mixers,
                                     const CostTable& cost, const OptimizerConfig& cfg = {},
                                     const std::optional<std::string>& checkpoint_path = {});

/// cfg.restarts independent BFGS descents from uniform-random points in
/// [0, 2pi)^{2p}; best kept. Restart i draws from a stream derived from
/// (rng_seed, i), so results are reproducible and prefix-stable.
RoundRecord find_angles_random_restarts(int p, const Mixer& mixer, const CostTable& cost,
                                        const OptimizerConfig& cfg = {});

/// Coordinate-wise lower median after folding every angle into [0, 2pi).
AngleSchedule median_angles(const std::vector<RoundRecord>& records);

/// Checkpoint file: one line per completed round,
///   p=<int>\texp=<float17>\tbetas=<comma-floats17>\tgammas=<comma-floats17>
/// rewritten atomically (temp file + rename) after each round.
std::vector<RoundRecord> read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const std::vector<RoundRecord>& records);

}  // namespace qaoa
