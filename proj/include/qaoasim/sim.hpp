// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <vector>

#include "qaoasim/basis.hpp"
#include "qaoasim/cost.hpp"
#include "qaoasim/mixer.hpp"

namespace qaoa {

/// Complex amplitudes over a basis. Unit norm at every API boundary.
struct StateVector {
    BasisSet basis;
    std::vector<std::complex<double>> amps;

    double norm_sq() const;
};

/// Uniform superposition over the feasible set (the Dicke state |D^n_k> for
/// weight-constrained bases).
StateVector initial_state(const BasisSet& basis);

/// Per-round QAOA parameters. gammas has one entry per round; betas[r] has
/// one entry per mixer applied in round r (length 1 in the flat form).
struct AngleSchedule {
    std::vector<std::vector<double>> betas;
    std::vector<double> gammas;

    static AngleSchedule flat(std::vector<double> betas, std::vector<double> gammas);

    std::size_t rounds() const noexcept { return gammas.size(); }
    bool flat_form() const;
    /// Requires flat_form().
    std::vector<double> flat_betas() const;
};

/// Per-round mixer assignment, parallel in shape to AngleSchedule::betas.
struct MixerSchedule {
    std::vector<std::vector<const Mixer*>> rounds;

    /// The same mixer in every round.
    static MixerSchedule uniform(const Mixer& m, std::size_t p);
    /// One mixer per round.
    static MixerSchedule per_round(std::vector<const Mixer*> mixers);
    /// Fully nested multi-angle form.
    static MixerSchedule nested(std::vector<std::vector<const Mixer*>> mixers);
};

struct SimResult {
    StateVector state;
    const CostTable* cost = nullptr;
};

/// amps[i] *= exp(-i * gamma * values[i])
void apply_phase_separator(StateVector& state, double gamma, const CostTable& cost);

/// In-place H^{(x)n}; unconstrained bases only.
void walsh_hadamard(StateVector& state);

/// One mixer evolution exp(-i * beta * H_M).
void apply_mixer(StateVector& state, double beta, const Mixer& m);

/// Full p-round evolution: each round applies the phase separator with
/// gamma_r, then that round's mixer(s) left to right with their betas.
/// Starts from `initial` if given, otherwise the uniform state. Allocates
/// one working array plus one scratch array, once.
SimResult simulate(const AngleSchedule& angles, const MixerSchedule& mixers,
                   const CostTable& cost, const StateVector* initial = nullptr);

/// Single mixer used for every round.
SimResult simulate(const AngleSchedule& angles, const Mixer& mixer, const CostTable& cost,
                   const StateVector* initial = nullptr);

double exp_value(const SimResult& r);
const std::vector<std::complex<double>>& amplitudes(const SimResult& r);
std::vector<double> probabilities(const SimResult& r);
/// Total probability of the states attaining best_value (ties included).
double ground_state_probability(const SimResult& r);

}  // namespace qaoa
