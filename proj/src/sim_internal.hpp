// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

// Workspace-passing variants shared by the simulator and the gradient sweep,
// so p-round loops allocate their buffers exactly once.

#pragma once

#include <complex>
#include <vector>

#include "qaoasim/mixer.hpp"

namespace qaoa::detail {

using cplx = std::complex<double>;

/// exp(-i beta H_M) applied in place. `scratch` must match amps in length;
/// only eigendecomposed kinds touch it.
void apply_mixer_ws(std::vector<cplx>& amps, double beta, const Mixer& m,
                    std::vector<cplx>& scratch);

/// out = H_M * in (the Hamiltonian itself, not its exponential). `aux` is
/// needed by eigendecomposed kinds; XDiagonal works in `out` alone.
void hamiltonian_apply(const std::vector<cplx>& in, const Mixer& m, std::vector<cplx>& out,
                       std::vector<cplx>& aux);

}  // namespace qaoa::detail
