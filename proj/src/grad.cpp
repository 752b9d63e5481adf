// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/grad.hpp"

#include <cmath>
#include <vector>

#include "qaoasim/errors.hpp"
#include "qaoasim/kernels.hpp"
#include "sim_internal.hpp"

namespace qaoa {

using detail::cplx;

namespace {

void require_flat(const AngleSchedule& angles, const MixerSchedule& mixers) {
    if (!angles.flat_form()) {
        throw DomainError("gradients need the flat one-beta-per-round schedule");
    }
    for (const auto& round : mixers.rounds) {
        if (round.size() != 1) {
            throw DomainError("gradients need the flat one-mixer-per-round schedule");
        }
    }
}

}  // namespace

Gradient gradient(const AngleSchedule& angles, const MixerSchedule& mixers,
                  const CostTable& cost, const StateVector* initial) {
    require_flat(angles, mixers);
    const std::size_t p = angles.rounds();

    // Forward pass, then walk the circuit backwards: un-apply each unitary
    // from both the state and the adjoint vector diag(C)|psi>, reading off
    // d<C>/dtheta = 2 Im <lambda|H_theta|psi> at each parameter. The mixer
    // derivative uses <lambda|H_M|psi>, which commutes with the mixer
    // unitary, so it is taken right before the un-apply.
    SimResult fwd = simulate(angles, mixers, cost, initial);
    std::vector<cplx>& psi = fwd.state.amps;
    const std::size_t dim = psi.size();

    std::vector<cplx> lambda = psi;
    kernels::diag_mul(lambda.data(), cost.values.data(), dim);

    std::vector<cplx> s1(dim), s2(dim);
    Gradient g;
    g.d_beta.resize(p);
    g.d_gamma.resize(p);

    for (std::size_t r = p; r-- > 0;) {
        const Mixer& m = *mixers.rounds[r][0];
        const double beta = angles.betas[r][0];

        detail::hamiltonian_apply(psi, m, s1, s2);
        g.d_beta[r] = 2.0 * kernels::conj_dot(lambda.data(), s1.data(), dim).imag();

        detail::apply_mixer_ws(psi, -beta, m, s1);
        detail::apply_mixer_ws(lambda, -beta, m, s1);

        g.d_gamma[r] =
            2.0 *
            kernels::weighted_conj_dot(lambda.data(), cost.values.data(), psi.data(), dim).imag();

        kernels::phase_rotate(psi.data(), cost.values.data(), -angles.gammas[r], dim);
        kernels::phase_rotate(lambda.data(), cost.values.data(), -angles.gammas[r], dim);
    }
    return g;
}

Gradient gradient(const AngleSchedule& angles, const Mixer& mixer, const CostTable& cost,
                  const StateVector* initial) {
    return gradient(angles, MixerSchedule::uniform(mixer, angles.rounds()), cost, initial);
}

Gradient finite_difference_gradient(const AngleSchedule& angles, const MixerSchedule& mixers,
                                    const CostTable& cost, double h,
                                    const StateVector* initial) {
    if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("finite-difference step must be > 0");
    require_flat(angles, mixers);
    const std::size_t p = angles.rounds();

    auto value_at = [&](const AngleSchedule& a) {
        return exp_value(simulate(a, mixers, cost, initial));
    };

    Gradient g;
    g.d_beta.resize(p);
    g.d_gamma.resize(p);
    AngleSchedule probe = angles;
    for (std::size_t r = 0; r < p; ++r) {
        probe.betas[r][0] = angles.betas[r][0] + h;
        const double up = value_at(probe);
        probe.betas[r][0] = angles.betas[r][0] - h;
        const double down = value_at(probe);
        probe.betas[r][0] = angles.betas[r][0];
        g.d_beta[r] = (up - down) / (2.0 * h);

        probe.gammas[r] = angles.gammas[r] + h;
        const double gup = value_at(probe);
        probe.gammas[r] = angles.gammas[r] - h;
        const double gdown = value_at(probe);
        probe.gammas[r] = angles.gammas[r];
        g.d_gamma[r] = (gup - gdown) / (2.0 * h);
    }
    return g;
}

Gradient finite_difference_gradient(const AngleSchedule& angles, const Mixer& mixer,
                                    const CostTable& cost, double h,
                                    const StateVector* initial) {
    return finite_difference_gradient(angles, MixerSchedule::uniform(mixer, angles.rounds()),
                                      cost, h, initial);
}

}  // namespace qaoa
