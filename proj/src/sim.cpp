// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/sim.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <utility>
#include <vector>

#include "qaoasim/errors.hpp"
#include "qaoasim/kernels.hpp"
#include "sim_internal.hpp"

namespace qaoa {

using detail::cplx;

namespace {

constexpr double kNormTolerance = 1e-10;

// Interleaved re/im view of a complex vector as a 2 x dim real matrix, so a
// real orthogonal V acts through two fused real products: V^T a = A * V and
// V s = S * V^T, both read column-wise.
using Packed2 = ::Eigen::Matrix<double, 2, ::Eigen::Dynamic>;

void real_gemv_adjoint(const ::Eigen::MatrixXd& v, const std::vector<cplx>& in,
                       std::vector<cplx>& out) {
    const auto dim = static_cast<::Eigen::Index>(in.size());
    ::Eigen::Map<const Packed2> a(reinterpret_cast<const double*>(in.data()), 2, dim);
    ::Eigen::Map<Packed2> s(reinterpret_cast<double*>(out.data()), 2, dim);
    s.noalias() = a * v;
}

void real_gemv(const ::Eigen::MatrixXd& v, const std::vector<cplx>& in, std::vector<cplx>& out) {
    const auto dim = static_cast<::Eigen::Index>(in.size());
    ::Eigen::Map<const Packed2> s(reinterpret_cast<const double*>(in.data()), 2, dim);
    ::Eigen::Map<Packed2> a(reinterpret_cast<double*>(out.data()), 2, dim);
    a.noalias() = s * v.transpose();
}

}  // namespace

namespace detail {

void apply_mixer_ws(std::vector<cplx>& amps, double beta, const Mixer& m,
                    std::vector<cplx>& scratch) {
    const std::size_t dim = amps.size();
    switch (m.kind) {
        case MixerKind::XDiagonal:
            kernels::fwht(amps.data(), m.basis.n());
            kernels::phase_rotate(amps.data(), m.zdiag.data(), beta, dim);
            kernels::fwht(amps.data(), m.basis.n());
            return;
        case MixerKind::Eigen:
        case MixerKind::CustomEigen:
            if (m.real_vectors) {
                real_gemv_adjoint(m.v_real, amps, scratch);
                kernels::phase_rotate(scratch.data(), m.eigenvalues.data(), beta, dim);
                real_gemv(m.v_real, scratch, amps);
            } else {
                ::Eigen::Map<::Eigen::VectorXcd> a(amps.data(),
                                                   static_cast<::Eigen::Index>(dim));
                ::Eigen::Map<::Eigen::VectorXcd> s(scratch.data(),
                                                   static_cast<::Eigen::Index>(dim));
                s.noalias() = m.v_cplx.adjoint() * a;
                kernels::phase_rotate(scratch.data(), m.eigenvalues.data(), beta, dim);
                a.noalias() = m.v_cplx * s;
            }
            return;
        case MixerKind::Grover: {
            // I + (e^{-i beta} - 1)|psi_0><psi_0| needs only the amplitude sum.
            const cplx sum = kernels::vec_sum(amps.data(), dim);
            const cplx phase = std::polar(1.0, -beta) - 1.0;
            kernels::add_constant(amps.data(), phase * sum / static_cast<double>(dim), dim);
            return;
        }
    }
    throw DomainError("unknown mixer kind");
}

void hamiltonian_apply(const std::vector<cplx>& in, const Mixer& m, std::vector<cplx>& out,
                       std::vector<cplx>& aux) {
    const std::size_t dim = in.size();
    switch (m.kind) {
        case MixerKind::XDiagonal:
            out = in;
            kernels::fwht(out.data(), m.basis.n());
            kernels::diag_mul(out.data(), m.zdiag.data(), dim);
            kernels::fwht(out.data(), m.basis.n());
            return;
        case MixerKind::Eigen:
        case MixerKind::CustomEigen:
            if (m.real_vectors) {
                real_gemv_adjoint(m.v_real, in, aux);
                kernels::diag_mul(aux.data(), m.eigenvalues.data(), dim);
                real_gemv(m.v_real, aux, out);
            } else {
                ::Eigen::Map<const ::Eigen::VectorXcd> a(in.data(),
                                                         static_cast<::Eigen::Index>(dim));
                ::Eigen::Map<::Eigen::VectorXcd> t(aux.data(), static_cast<::Eigen::Index>(dim));
                ::Eigen::Map<::Eigen::VectorXcd> o(out.data(), static_cast<::Eigen::Index>(dim));
                t.noalias() = m.v_cplx.adjoint() * a;
                kernels::diag_mul(aux.data(), m.eigenvalues.data(), dim);
                o.noalias() = m.v_cplx * t;
            }
            return;
        case MixerKind::Grover: {
            const cplx sum = kernels::vec_sum(in.data(), dim);
            out.assign(dim, sum / static_cast<double>(dim));
            return;
        }
    }
    throw DomainError("unknown mixer kind");
}

}  // namespace detail

double StateVector::norm_sq() const { return kernels::norm_sq(amps.data(), amps.size()); }

StateVector initial_state(const BasisSet& basis) {
    if (basis.dim() == 0) throw DomainError("empty basis");
    StateVector st;
    st.basis = basis;
    st.amps.assign(basis.dim(), 1.0 / std::sqrt(static_cast<double>(basis.dim())));
    return st;
}

AngleSchedule AngleSchedule::flat(std::vector<double> betas, std::vector<double> gammas) {
    if (betas.size() != gammas.size()) {
        throw DomainError("betas and gammas must have the same length");
    }
    AngleSchedule s;
    s.betas.reserve(betas.size());
    for (double b : betas) s.betas.push_back({b});
    s.gammas = std::move(gammas);
    return s;
}

bool AngleSchedule::flat_form() const {
    for (const auto& round : betas) {
        if (round.size() != 1) return false;
    }
    return betas.size() == gammas.size();
}

std::vector<double> AngleSchedule::flat_betas() const {
    if (!flat_form()) throw DomainError("angle schedule is not in flat form");
    std::vector<double> out;
    out.reserve(betas.size());
    for (const auto& round : betas) out.push_back(round[0]);
    return out;
}

MixerSchedule MixerSchedule::uniform(const Mixer& m, std::size_t p) {
    MixerSchedule s;
    s.rounds.assign(p, {&m});
    return s;
}

MixerSchedule MixerSchedule::per_round(std::vector<const Mixer*> mixers) {
    MixerSchedule s;
    s.rounds.reserve(mixers.size());
    for (const Mixer* m : mixers) s.rounds.push_back({m});
    return s;
}

MixerSchedule MixerSchedule::nested(std::vector<std::vector<const Mixer*>> mixers) {
    MixerSchedule s;
    s.rounds = std::move(mixers);
    return s;
}

void apply_phase_separator(StateVector& state, double gamma, const CostTable& cost) {
    if (state.basis != cost.basis) throw DomainError("state and cost table bases differ");
    kernels::phase_rotate(state.amps.data(), cost.values.data(), gamma, state.amps.size());
}

void walsh_hadamard(StateVector& state) {
    if (!state.basis.unconstrained()) {
        throw DomainError("Walsh-Hadamard transform needs the unconstrained basis");
    }
    kernels::fwht(state.amps.data(), state.basis.n());
}

void apply_mixer(StateVector& state, double beta, const Mixer& m) {
    if (state.basis != m.basis) throw DomainError("state and mixer bases differ");
    std::vector<cplx> scratch;
    if (m.kind == MixerKind::Eigen || m.kind == MixerKind::CustomEigen) {
        scratch.resize(state.amps.size());
    }
    detail::apply_mixer_ws(state.amps, beta, m, scratch);
}

namespace {

void validate_schedules(const AngleSchedule& angles, const MixerSchedule& mixers,
                        const CostTable& cost) {
    const std::size_t p = angles.rounds();
    if (p == 0) throw DomainError("schedule needs at least one round");
    if (angles.betas.size() != p) {
        throw DomainError("betas and gammas disagree on the number of rounds");
    }
    if (mixers.rounds.size() != p) {
        throw DomainError("mixer schedule has " + std::to_string(mixers.rounds.size()) +
                          " rounds but angles have " + std::to_string(p));
    }
    for (std::size_t r = 0; r < p; ++r) {
        if (!std::isfinite(angles.gammas[r])) throw DomainError("non-finite gamma");
        if (angles.betas[r].empty() || angles.betas[r].size() != mixers.rounds[r].size()) {
            throw DomainError("round " + std::to_string(r + 1) +
                              ": beta count does not match mixer count");
        }
        for (double b : angles.betas[r]) {
            if (!std::isfinite(b)) throw DomainError("non-finite beta");
        }
        for (const Mixer* m : mixers.rounds[r]) {
            if (m == nullptr) throw DomainError("null mixer in schedule");
            if (m->basis != cost.basis) {
                throw DomainError("round " + std::to_string(r + 1) +
                                  ": mixer basis does not match the cost table basis");
            }
        }
    }
}

}  // namespace

SimResult simulate(const AngleSchedule& angles, const MixerSchedule& mixers,
                   const CostTable& cost, const StateVector* initial) {
    validate_schedules(angles, mixers, cost);

    SimResult result;
    result.cost = &cost;
    if (initial != nullptr) {
        if (initial->basis != cost.basis || initial->amps.size() != cost.basis.dim()) {
            throw DomainError("initial state basis does not match the cost table");
        }
        if (std::abs(initial->norm_sq() - 1.0) > kNormTolerance) {
            throw DomainError("initial state is not normalized");
        }
        result.state = *initial;
    } else {
        result.state = initial_state(cost.basis);
    }

    std::vector<cplx> scratch(result.state.amps.size());
    for (std::size_t r = 0; r < angles.rounds(); ++r) {
        kernels::phase_rotate(result.state.amps.data(), cost.values.data(), angles.gammas[r],
                              result.state.amps.size());
        for (std::size_t j = 0; j < mixers.rounds[r].size(); ++j) {
            detail::apply_mixer_ws(result.state.amps, angles.betas[r][j], *mixers.rounds[r][j],
                                   scratch);
        }
    }
    return result;
}

SimResult simulate(const AngleSchedule& angles, const Mixer& mixer, const CostTable& cost,
                   const StateVector* initial) {
    return simulate(angles, MixerSchedule::uniform(mixer, angles.rounds()), cost, initial);
}

double exp_value(const SimResult& r) {
    return kernels::expectation_dot(r.state.amps.data(), r.cost->values.data(),
                                    r.state.amps.size());
}

const std::vector<std::complex<double>>& amplitudes(const SimResult& r) { return r.state.amps; }

std::vector<double> probabilities(const SimResult& r) {
    std::vector<double> p(r.state.amps.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(r.state.amps[i]);
    return p;
}

double ground_state_probability(const SimResult& r) {
    const double best = r.cost->best_value;
    double total = 0.0;
    for (std::size_t i = 0; i < r.state.amps.size(); ++i) {
        if (r.cost->values[i] == best) total += std::norm(r.state.amps[i]);
    }
    return total;
}

}  // namespace qaoa
