// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qaoasim/sim.hpp"

namespace qaoa {

struct Gradient {
    std::vector<double> d_beta;
    std::vector<double> d_gamma;
};

/// Exact gradient of <C> with respect to all 2p angles by a reverse (adjoint)
/// sweep: one forward pass, then per round one H_M application and inverse
/// unitaries applied to both the state and the adjoint vector. Cost is a
/// constant multiple of one expectation evaluation, independent of p.
/// Flat schedules only (one beta per round).
Gradient gradient(const AngleSchedule& angles, const MixerSchedule& mixers,
                  const CostTable& cost, const StateVector* initial = nullptr);
Gradient gradient(const AngleSchedule& angles, const Mixer& mixer, const CostTable& cost,
                  const StateVector* initial = nullptr);

/// Central finite differences; 4p simulate calls. Kept as the oracle and
/// fallback.
Gradient finite_difference_gradient(const AngleSchedule& angles, const MixerSchedule& mixers,
                                    const CostTable& cost, double h,
                                    const StateVector* initial = nullptr);
Gradient finite_difference_gradient(const AngleSchedule& angles, const Mixer& mixer,
                                    const CostTable& cost, double h,
                                    const StateVector* initial = nullptr);

}  // namespace qaoa
