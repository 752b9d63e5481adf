// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qaoasim/basis.hpp"
#include "qaoasim/cost.hpp"
#include "qaoasim/errors.hpp"
#include "qaoasim/mixer.hpp"
#include "qaoasim/sim.hpp"
#include "test_util.hpp"

using qaoa::AngleSchedule;
using qaoa::BasisSet;
using qaoa::CostTable;
using qaoa::Mixer;
using qaoa::MixerSchedule;
using qaoa::SimResult;
using qaoa::StateVector;

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};
const double kPi = std::acos(-1.0);

CostTable triangle_cut() {
    return testutil::make_table(BasisSet::full(3), {0, 2, 2, 2, 2, 2, 2, 0});
}

StateVector random_state(const BasisSet& basis, std::mt19937_64& rng) {
    StateVector s;
    s.basis = basis;
    s.amps.resize(basis.dim());
    std::normal_distribution<double> g;
    double norm = 0.0;
    for (auto& a : s.amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : s.amps) a /= norm;
    return s;
}

Eigen::VectorXcd to_eigen(const std::vector<std::complex<double>>& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double max_abs_diff(const std::vector<std::complex<double>>& a, const Eigen::VectorXcd& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b(static_cast<Eigen::Index>(i))));
    }
    return m;
}

}  // namespace

TEST_CASE("initial_state is uniform over the feasible set") {
    StateVector full = qaoa::initial_state(BasisSet::full(2));
    REQUIRE(full.amps.size() == 4);
    for (const auto& a : full.amps) CHECK(a == std::complex<double>(0.5, 0.0));

    StateVector dicke = qaoa::initial_state(BasisSet::dicke(4, 2));
    REQUIRE(dicke.amps.size() == 6);
    for (const auto& a : dicke.amps) {
        CHECK(std::abs(a - 1.0 / std::sqrt(6.0)) < 1e-15);
    }
    CHECK(dicke.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("phase separator is a cost-weighted diagonal rotation") {
    BasisSet basis = BasisSet::full(1);
    CostTable cost = testutil::make_table(basis, {0, 1});
    StateVector s = qaoa::initial_state(basis);

    SUBCASE("gamma = 0 is the identity") {
        auto before = s.amps;
        qaoa::apply_phase_separator(s, 0.0, cost);
        CHECK(s.amps == before);
    }
    SUBCASE("gamma = pi negates the value-1 amplitude") {
        qaoa::apply_phase_separator(s, kPi, cost);
        CHECK(std::abs(s.amps[0] - std::complex<double>(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
        CHECK(std::abs(s.amps[1] + std::complex<double>(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
    }
    SUBCASE("matches the dense diagonal on random input") {
        std::mt19937_64 rng(11);
        BasisSet b6 = BasisSet::full(6);
        CostTable t = testutil::random_int_table(b6, rng);
        StateVector v = random_state(b6, rng);
        const double gamma = 0.7321;
        Eigen::VectorXcd want = to_eigen(v.amps);
        for (Eigen::Index i = 0; i < want.size(); ++i) {
            want(i) *= std::exp(-kImag * gamma * t.values[static_cast<std::size_t>(i)]);
        }
        qaoa::apply_phase_separator(v, gamma, t);
        CHECK(max_abs_diff(v.amps, want) < 1e-12);
    }
    SUBCASE("basis mismatch is rejected") {
        StateVector wide = qaoa::initial_state(BasisSet::full(2));
        CHECK_THROWS_AS(qaoa::apply_phase_separator(wide, 0.5, cost), qaoa::DomainError);
    }
}

TEST_CASE("walsh_hadamard transforms and inverts") {
    SUBCASE("one-hot becomes uniform") {
        StateVector s;
        s.basis = BasisSet::full(2);
        s.amps = {1, 0, 0, 0};
        qaoa::walsh_hadamard(s);
        for (const auto& a : s.amps) CHECK(std::abs(a - 0.5) < 1e-15);
    }
    SUBCASE("self-inverse on random states") {
        std::mt19937_64 rng(3);
        for (int n : {1, 4, 9}) {
            StateVector s = random_state(BasisSet::full(n), rng);
            auto before = s.amps;
            qaoa::walsh_hadamard(s);
            qaoa::walsh_hadamard(s);
            double m = 0.0;
            for (std::size_t i = 0; i < before.size(); ++i) {
                m = std::max(m, std::abs(s.amps[i] - before[i]));
            }
            CHECK(m < 1e-12);
        }
    }
    SUBCASE("constrained bases are rejected") {
        StateVector s = qaoa::initial_state(BasisSet::dicke(4, 2));
        CHECK_THROWS_AS(qaoa::walsh_hadamard(s), qaoa::DomainError);
    }
}

TEST_CASE("apply_mixer at beta = 0 is the identity for every kind") {
    std::mt19937_64 rng(17);

    StateVector full = random_state(BasisSet::full(3), rng);
    for (const Mixer& m : {qaoa::mixer_x({1}, 3), qaoa::mixer_grover(BasisSet::full(3))}) {
        StateVector s = full;
        qaoa::apply_mixer(s, 0.0, m);
        double diff = 0.0;
        for (std::size_t i = 0; i < s.amps.size(); ++i) {
            diff = std::max(diff, std::abs(s.amps[i] - full.amps[i]));
        }
        CHECK(diff < 1e-15);
    }

    StateVector dicke = random_state(BasisSet::dicke(4, 2), rng);
    for (const Mixer& m : {qaoa::mixer_clique(4, 2), qaoa::mixer_ring(4, 2),
                           qaoa::mixer_grover(BasisSet::dicke(4, 2))}) {
        StateVector s = dicke;
        qaoa::apply_mixer(s, 0.0, m);
        double diff = 0.0;
        for (std::size_t i = 0; i < s.amps.size(); ++i) {
            diff = std::max(diff, std::abs(s.amps[i] - dicke.amps[i]));
        }
        CHECK(diff < 1e-12);
    }
}

TEST_CASE("grover mixer at beta = pi flips the uniform state") {
    BasisSet basis = BasisSet::dicke(5, 2);
    StateVector s = qaoa::initial_state(basis);
    qaoa::apply_mixer(s, kPi, qaoa::mixer_grover(basis));
    const double want = -1.0 / std::sqrt(static_cast<double>(basis.dim()));
    for (const auto& a : s.amps) CHECK(std::abs(a - want) < 1e-12);
}

TEST_CASE("mixer evolutions match dense matrix exponentials") {
    std::mt19937_64 rng(23);
    const double beta = 0.4177;

    SUBCASE("transverse field") {
        StateVector s = random_state(BasisSet::full(3), rng);
        Eigen::MatrixXcd u = oracle::expm(-kImag * beta * oracle::x_mixer_hamiltonian({1}, 3));
        Eigen::VectorXcd want = u * to_eigen(s.amps);
        qaoa::apply_mixer(s, beta, qaoa::mixer_x({1}, 3));
        CHECK(max_abs_diff(s.amps, want) < 1e-10);
    }
    SUBCASE("clique") {
        StateVector s = random_state(BasisSet::dicke(5, 2), rng);
        Eigen::MatrixXcd h = oracle::xxyy_hamiltonian(5, 2, oracle::clique_pairs(5));
        Eigen::VectorXcd want = oracle::expm(-kImag * beta * h) * to_eigen(s.amps);
        qaoa::apply_mixer(s, beta, qaoa::mixer_clique(5, 2));
        CHECK(max_abs_diff(s.amps, want) < 1e-10);
    }
    SUBCASE("ring") {
        StateVector s = random_state(BasisSet::dicke(5, 2), rng);
        Eigen::MatrixXcd h = oracle::xxyy_hamiltonian(5, 2, oracle::ring_pairs(5));
        Eigen::VectorXcd want = oracle::expm(-kImag * beta * h) * to_eigen(s.amps);
        qaoa::apply_mixer(s, beta, qaoa::mixer_ring(5, 2));
        CHECK(max_abs_diff(s.amps, want) < 1e-10);
    }
    SUBCASE("grover") {
        StateVector s = random_state(BasisSet::full(4), rng);
        Eigen::MatrixXcd h = oracle::grover_hamiltonian(16);
        Eigen::VectorXcd want = oracle::expm(-kImag * beta * h) * to_eigen(s.amps);
        qaoa::apply_mixer(s, beta, qaoa::mixer_grover(BasisSet::full(4)));
        CHECK(max_abs_diff(s.amps, want) < 1e-10);
    }
}

TEST_CASE("simulate with zero mixing angle keeps the uniform expectation") {
    CostTable cost = triangle_cut();
    Mixer m = qaoa::mixer_x({1}, 3);
    SimResult r = qaoa::simulate(AngleSchedule::flat({0.0}, {0.9}), m, cost);
    CHECK(qaoa::exp_value(r) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("single-edge cut at the known optimum") {
    CostTable cost = testutil::make_table(BasisSet::full(2), {0, 1, 1, 0});
    Mixer m = qaoa::mixer_x({1}, 2);
    SimResult r = qaoa::simulate(AngleSchedule::flat({kPi / 8}, {kPi / 2}), m, cost);
    CHECK(qaoa::exp_value(r) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("observables over explicit states") {
    CostTable cost = triangle_cut();
    SimResult uniform;
    uniform.state = qaoa::initial_state(cost.basis);
    uniform.cost = &cost;
    CHECK(qaoa::exp_value(uniform) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(qaoa::ground_state_probability(uniform) == doctest::Approx(0.75).epsilon(1e-12));

    SimResult onehot;
    onehot.state.basis = cost.basis;
    onehot.state.amps.assign(8, {0, 0});
    onehot.state.amps[1] = {1, 0};  // a maximum-cut assignment
    onehot.cost = &cost;
    CHECK(qaoa::exp_value(onehot) == doctest::Approx(cost.best_value).epsilon(1e-14));
    CHECK(qaoa::ground_state_probability(onehot) == doctest::Approx(1.0).epsilon(1e-14));

    std::vector<double> probs = qaoa::probabilities(uniform);
    CHECK(std::accumulate(probs.begin(), probs.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evolution preserves the norm over long schedules") {
    std::mt19937_64 rng(31);
    struct Case {
        BasisSet basis;
        Mixer mixer;
    };
    std::vector<Case> cases;
    cases.push_back({BasisSet::full(10), qaoa::mixer_x({1}, 10)});
    cases.push_back({BasisSet::full(6), qaoa::mixer_grover(BasisSet::full(6))});
    cases.push_back({BasisSet::dicke(8, 4), qaoa::mixer_clique(8, 4)});
    cases.push_back({BasisSet::dicke(9, 3), qaoa::mixer_ring(9, 3)});

    for (const Case& c : cases) {
        CostTable cost = testutil::random_int_table(c.basis, rng);
        const std::size_t p = 20;
        AngleSchedule angles =
            AngleSchedule::flat(testutil::random_angles(rng, p), testutil::random_angles(rng, p));
        SimResult r = qaoa::simulate(angles, c.mixer, cost);
        CHECK(std::abs(r.state.norm_sq() - 1.0) < 1e-10);
    }
}

TEST_CASE("uniform mixer schedule reproduces the single-mixer overload") {
    std::mt19937_64 rng(37);
    BasisSet basis = BasisSet::dicke(6, 3);
    CostTable cost = testutil::random_int_table(basis, rng);
    Mixer m = qaoa::mixer_clique(6, 3);
    AngleSchedule angles =
        AngleSchedule::flat(testutil::random_angles(rng, 4), testutil::random_angles(rng, 4));

    SimResult single = qaoa::simulate(angles, m, cost);
    SimResult scheduled = qaoa::simulate(angles, MixerSchedule::uniform(m, 4), cost);
    CHECK(single.state.amps == scheduled.state.amps);

    std::vector<const Mixer*> per_round{&m, &m, &m, &m};
    SimResult listed = qaoa::simulate(angles, MixerSchedule::per_round(per_round), cost);
    CHECK(single.state.amps == listed.state.amps);
}

TEST_CASE("nested schedules apply mixers left to right inside a round") {
    std::mt19937_64 rng(41);
    BasisSet basis = BasisSet::dicke(5, 2);
    CostTable cost = testutil::random_int_table(basis, rng);
    Mixer ring = qaoa::mixer_ring(5, 2);
    Mixer grover = qaoa::mixer_grover(basis);

    AngleSchedule angles;
    angles.betas = {{0.3, 1.1}, {0.7}};
    angles.gammas = {0.5, 0.9};
    MixerSchedule mixers = MixerSchedule::nested({{&ring, &grover}, {&ring}});

    SimResult r = qaoa::simulate(angles, mixers, cost);

    StateVector manual = qaoa::initial_state(basis);
    qaoa::apply_phase_separator(manual, 0.5, cost);
    qaoa::apply_mixer(manual, 0.3, ring);
    qaoa::apply_mixer(manual, 1.1, grover);
    qaoa::apply_phase_separator(manual, 0.9, cost);
    qaoa::apply_mixer(manual, 0.7, ring);

    double diff = 0.0;
    for (std::size_t i = 0; i < manual.amps.size(); ++i) {
        diff = std::max(diff, std::abs(r.state.amps[i] - manual.amps[i]));
    }
    CHECK(diff < 1e-13);
}

TEST_CASE("explicit initial states are honored and validated") {
    std::mt19937_64 rng(43);
    BasisSet basis = BasisSet::full(4);
    CostTable cost = testutil::random_int_table(basis, rng);
    Mixer m = qaoa::mixer_x({1}, 4);
    AngleSchedule angles = AngleSchedule::flat({0.4}, {0.8});

    StateVector init = qaoa::initial_state(basis);
    SimResult with_default = qaoa::simulate(angles, m, cost);
    SimResult with_explicit = qaoa::simulate(angles, m, cost, &init);
    CHECK(with_default.state.amps == with_explicit.state.amps);

    StateVector skewed = random_state(basis, rng);
    SimResult from_skewed = qaoa::simulate(angles, m, cost, &skewed);
    CHECK(std::abs(from_skewed.state.norm_sq() - 1.0) < 1e-12);
    CHECK(from_skewed.state.amps != with_default.state.amps);

    StateVector unnormalized = init;
    unnormalized.amps[0] *= 3.0;
    CHECK_THROWS_AS(qaoa::simulate(angles, m, cost, &unnormalized), qaoa::DomainError);
}

TEST_CASE("schedule shape errors are rejected") {
    std::mt19937_64 rng(47);
    BasisSet basis = BasisSet::full(3);
    CostTable cost = testutil::random_int_table(basis, rng);
    Mixer m = qaoa::mixer_x({1}, 3);

    AngleSchedule ragged;
    ragged.betas = {{0.1}};
    ragged.gammas = {0.2, 0.3};
    CHECK_THROWS_AS(qaoa::simulate(ragged, m, cost), qaoa::DomainError);

    AngleSchedule ok = AngleSchedule::flat({0.1, 0.2}, {0.3, 0.4});
    MixerSchedule short_schedule = MixerSchedule::uniform(m, 1);
    CHECK_THROWS_AS(qaoa::simulate(ok, short_schedule, cost), qaoa::DomainError);

    AngleSchedule nested;
    nested.betas = {{0.1, 0.2}};
    nested.gammas = {0.3};
    MixerSchedule single = MixerSchedule::nested({{&m}});
    CHECK_THROWS_AS(qaoa::simulate(nested, single, cost), qaoa::DomainError);
}

TEST_CASE("mixer and state feasible sets must agree") {
    std::mt19937_64 rng(53);
    StateVector dicke = random_state(BasisSet::dicke(4, 2), rng);
    CHECK_THROWS_AS(qaoa::apply_mixer(dicke, 0.3, qaoa::mixer_x({1}, 4)), qaoa::DomainError);

    StateVector full = random_state(BasisSet::full(4), rng);
    CHECK_THROWS_AS(qaoa::apply_mixer(full, 0.3, qaoa::mixer_clique(4, 2)), qaoa::DomainError);
    CHECK_THROWS_AS(qaoa::apply_mixer(full, 0.3, qaoa::mixer_grover(BasisSet::dicke(4, 2))),
                    qaoa::DomainError);
}

TEST_CASE("flat-form helpers expose the schedule shape") {
    AngleSchedule flat = AngleSchedule::flat({0.1, 0.2}, {0.3, 0.4});
    CHECK(flat.rounds() == 2);
    CHECK(flat.flat_form());
    CHECK(flat.flat_betas() == std::vector<double>{0.1, 0.2});

    AngleSchedule nested;
    nested.betas = {{0.1, 0.5}, {0.2}};
    nested.gammas = {0.3, 0.4};
    CHECK(!nested.flat_form());
    CHECK_THROWS_AS(nested.flat_betas(), qaoa::DomainError);
}
