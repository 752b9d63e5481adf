// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/angles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qaoasim/errors.hpp"

namespace qaoa {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void validate_config(const OptimizerConfig& cfg) {
    if (cfg.hops < 0) throw DomainError("hops must be >= 0");
    if (!(cfg.step_size > 0.0)) throw DomainError("step_size must be > 0");
    if (!(cfg.temperature > 0.0)) throw DomainError("temperature must be > 0");
    if (cfg.restarts < 1) throw DomainError("restarts must be >= 1");
    if (cfg.max_local_iters < 1) throw DomainError("max_local_iters must be >= 1");
    if (!(cfg.tolerance > 0.0)) throw DomainError("tolerance must be > 0");
    if (cfg.workers < 1) throw DomainError("workers must be >= 1");
}

// splitmix64 finalizer: decorrelated per-round / per-restart RNG streams, so
// resumed or reordered work reproduces the original draws.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<double> to_std(const ::Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

// Counts evaluations and rejects non-finite values on behalf of the solvers.
struct Evaluator {
    const ObjectiveFn& f;
    const GradientFn& grad;
    std::uint64_t f_evals = 0;
    std::uint64_t g_evals = 0;

    double value(const ::Eigen::VectorXd& x) {
        ++f_evals;
        const double v = f(to_std(x));
        if (!std::isfinite(v)) throw OptimizerError("objective returned a non-finite value");
        return v;
    }

    ::Eigen::VectorXd gradient(const ::Eigen::VectorXd& x) {
        ++g_evals;
        const std::vector<double> g = grad(to_std(x));
        if (g.size() != static_cast<std::size_t>(x.size())) {
            throw OptimizerError("gradient length does not match the point");
        }
        for (double v : g) {
            if (!std::isfinite(v)) throw OptimizerError("gradient returned a non-finite value");
        }
        return ::Eigen::Map<const ::Eigen::VectorXd>(g.data(),
                                                     static_cast<::Eigen::Index>(g.size()));
    }
};

struct Probe {
    double alpha = 0.0;
    double phi = 0.0;
    double dphi = 0.0;
    ::Eigen::VectorXd x;
    ::Eigen::VectorXd g;
};

// Strong-Wolfe line search (bracket then bisection zoom). Returns a probe
// with alpha > 0 on success; alpha == 0 means no acceptable step existed.
Probe line_search(Evaluator& ev, const ::Eigen::VectorXd& x0, double phi0,
                  const ::Eigen::VectorXd& g0, const ::Eigen::VectorXd& d) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    constexpr int kBracketIters = 20;
    constexpr int kZoomIters = 50;

    const double dphi0 = g0.dot(d);
    Probe fail;
    fail.x = x0;
    if (dphi0 >= 0.0) return fail;

    auto probe_at = [&](double a) {
        Probe p;
        p.alpha = a;
        p.x = x0 + a * d;
        p.phi = ev.value(p.x);
        p.g = ev.gradient(p.x);
        p.dphi = p.g.dot(d);
        return p;
    };

    auto zoom = [&](Probe lo, Probe hi) {
        for (int i = 0; i < kZoomIters; ++i) {
            if (std::abs(hi.alpha - lo.alpha) < 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
            Probe mid = probe_at(0.5 * (lo.alpha + hi.alpha));
            if (mid.phi > phi0 + c1 * mid.alpha * dphi0 || mid.phi >= lo.phi) {
                hi = std::move(mid);
                continue;
            }
            if (std::abs(mid.dphi) <= -c2 * dphi0) return mid;
            if (mid.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = std::move(lo);
            lo = std::move(mid);
        }
        // No strong-Wolfe point resolved; a plain decrease is still usable.
        if (lo.alpha > 0.0 && lo.phi < phi0) return lo;
        return fail;
    };

    Probe prev;
    prev.alpha = 0.0;
    prev.phi = phi0;
    prev.dphi = dphi0;
    prev.x = x0;
    prev.g = g0;

    double alpha = 1.0;
    for (int i = 0; i < kBracketIters; ++i) {
        Probe cur = probe_at(alpha);
        if (cur.phi > phi0 + c1 * alpha * dphi0 || (i > 0 && cur.phi >= prev.phi)) {
            return zoom(std::move(prev), std::move(cur));
        }
        if (std::abs(cur.dphi) <= -c2 * dphi0) return cur;
        if (cur.dphi >= 0.0) return zoom(std::move(cur), std::move(prev));
        prev = std::move(cur);
        alpha *= 2.0;
    }
    if (prev.alpha > 0.0 && prev.phi < phi0) return prev;
    return fail;
}

LocalMinResult bfgs_impl(Evaluator& ev, std::vector<double> x0, const OptimizerConfig& cfg) {
    const auto n = static_cast<::Eigen::Index>(x0.size());
    if (n == 0) throw DomainError("optimization start point is empty");

    ::Eigen::VectorXd x = ::Eigen::Map<const ::Eigen::VectorXd>(x0.data(), n);
    double fx = ev.value(x);
    ::Eigen::VectorXd g = ev.gradient(x);

    ::Eigen::MatrixXd h = ::Eigen::MatrixXd::Identity(n, n);
    LocalMinResult res;
    res.converged = g.norm() <= cfg.tolerance;
    bool scaled = false;

    while (!res.converged && res.iterations < cfg.max_local_iters) {
        ::Eigen::VectorXd d = -(h * g);
        if (d.dot(g) >= 0.0) {
            h.setIdentity();
            d = -g;
        }

        Probe step = line_search(ev, x, fx, g, d);
        if (step.alpha == 0.0) break;  // no usable step; x is as good as it gets

        const ::Eigen::VectorXd s = step.x - x;
        const ::Eigen::VectorXd y = step.g - g;
        x = std::move(step.x);
        fx = step.phi;
        g = std::move(step.g);
        ++res.iterations;

        if (g.norm() <= cfg.tolerance) {
            res.converged = true;
            break;
        }

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                h *= sy / y.squaredNorm();
                scaled = true;
            }
            // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded; the
            // + sy term folds the trailing rho s s^T into one rank-1 update.
            const double rho = 1.0 / sy;
            const ::Eigen::VectorXd hy = h * y;
            h.noalias() -= rho * (s * hy.transpose());
            h.noalias() -= rho * (hy * s.transpose());
            h.noalias() += (rho * rho * (y.dot(hy) + sy)) * (s * s.transpose());
        }
    }

    res.x = to_std(x);
    res.f = fx;
    res.f_evals = ev.f_evals;
    res.g_evals = ev.g_evals;
    return res;
}

}  // namespace

LocalMinResult bfgs_minimize(const ObjectiveFn& f, const GradientFn& grad,
                             std::vector<double> x0, const OptimizerConfig& cfg) {
    validate_config(cfg);
    Evaluator ev{f, grad};
    return bfgs_impl(ev, std::move(x0), cfg);
}

LocalMinResult basinhopping(const ObjectiveFn& f, const GradientFn& grad, std::vector<double> x0,
                            const OptimizerConfig& cfg) {
    validate_config(cfg);
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> kick(-cfg.step_size, cfg.step_size);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Evaluator ev0{f, grad};
    LocalMinResult current = bfgs_impl(ev0, std::move(x0), cfg);
    LocalMinResult best = current;
    std::uint64_t f_total = current.f_evals;
    std::uint64_t g_total = current.g_evals;
    int iter_total = current.iterations;

    for (int hop = 0; hop < cfg.hops; ++hop) {
        std::vector<double> trial_x = current.x;
        for (double& v : trial_x) v += kick(rng);

        Evaluator ev{f, grad};
        LocalMinResult trial = bfgs_impl(ev, std::move(trial_x), cfg);
        f_total += trial.f_evals;
        g_total += trial.g_evals;
        iter_total += trial.iterations;

        const double df = trial.f - current.f;
        if (df < 0.0 || unit(rng) < std::exp(-df / cfg.temperature)) {
            current = trial;
        }
        if (trial.f < best.f) best = std::move(trial);
    }

    best.f_evals = f_total;
    best.g_evals = g_total;
    best.iterations = iter_total;
    return best;
}

namespace {

AngleSchedule unpack_angles(const std::vector<double>& x, int p) {
    std::vector<double> betas(x.begin(), x.begin() + p);
    std::vector<double> gammas(x.begin() + p, x.end());
    return AngleSchedule::flat(std::move(betas), std::move(gammas));
}

void check_optimizable(const CostTable& cost) {
    if (cost.orientation != Orientation::Maximize) {
        throw DomainError(
            "angle finding maximizes; build the cost table with the Maximize orientation "
            "(negate the objective to minimize)");
    }
    if (cost.min_value() < 0.0 && cost.max_value() > 0.0) {
        throw DomainError(
            "objective values are mixed-sign; add a constant offset so they share one sign");
    }
}

std::vector<RoundRecord> find_angles_impl(int p_target, const std::vector<const Mixer*>& mixers,
                                          const CostTable& cost, const OptimizerConfig& cfg,
                                          const std::optional<std::string>& checkpoint_path) {
    validate_config(cfg);
    if (p_target < 1) throw DomainError("p_target must be >= 1");
    if (mixers.size() < static_cast<std::size_t>(p_target)) {
        throw DomainError("need one mixer per round");
    }
    for (const Mixer* m : mixers) {
        if (m == nullptr) throw DomainError("null mixer");
        if (m->basis != cost.basis) {
            throw DomainError("mixer basis does not match the cost table basis");
        }
    }
    check_optimizable(cost);

    std::vector<RoundRecord> records;
    if (checkpoint_path && std::filesystem::exists(*checkpoint_path)) {
        records = read_checkpoint(*checkpoint_path);
    }
    if (records.size() > static_cast<std::size_t>(p_target)) records.resize(p_target);

    for (int p = static_cast<int>(records.size()) + 1; p <= p_target; ++p) {
        MixerSchedule schedule = MixerSchedule::per_round(
            std::vector<const Mixer*>(mixers.begin(), mixers.begin() + p));

        std::uint64_t seed_evals = 0;
        auto objective = [&](const std::vector<double>& x) {
            return -exp_value(simulate(unpack_angles(x, p), schedule, cost));
        };
        auto objective_grad = [&](const std::vector<double>& x) {
            const Gradient g = gradient(unpack_angles(x, p), schedule, cost);
            std::vector<double> out;
            out.reserve(2 * static_cast<std::size_t>(p));
            for (double v : g.d_beta) out.push_back(-v);
            for (double v : g.d_gamma) out.push_back(-v);
            return out;
        };

        // Candidate seeds: the zero-extension of the previous round's best
        // (keeps expectations monotone), a copy of its final angle pair, and
        // for p >= 3 a linear extrapolation of the final angles across the
        // last two rounds. Basinhopping starts from the best candidate.
        std::vector<std::vector<double>> seeds;
        if (p == 1) {
            seeds.push_back({0.1, 0.1});
        } else {
            const RoundRecord& prev = records[static_cast<std::size_t>(p - 2)];
            auto extend = [&](double beta_new, double gamma_new) {
                std::vector<double> x;
                x.reserve(2 * static_cast<std::size_t>(p));
                x.insert(x.end(), prev.betas.begin(), prev.betas.end());
                x.push_back(beta_new);
                x.insert(x.end(), prev.gammas.begin(), prev.gammas.end());
                x.push_back(gamma_new);
                return x;
            };
            seeds.push_back(extend(0.0, 0.0));
            seeds.push_back(extend(prev.betas.back(), prev.gammas.back()));
            if (p >= 3) {
                const RoundRecord& prev2 = records[static_cast<std::size_t>(p - 3)];
                seeds.push_back(extend(2.0 * prev.betas.back() - prev2.betas.back(),
                                       2.0 * prev.gammas.back() - prev2.gammas.back()));
            }
        }

        std::size_t pick = 0;
        double pick_f = 0.0;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const double fi = objective(seeds[i]);
            ++seed_evals;
            if (!std::isfinite(fi)) throw OptimizerError("objective returned a non-finite value");
            if (i == 0 || fi < pick_f) {
                pick = i;
                pick_f = fi;
            }
        }

        OptimizerConfig round_cfg = cfg;
        round_cfg.rng_seed = mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(p));
        LocalMinResult out = basinhopping(objective, objective_grad, seeds[pick], round_cfg);

        RoundRecord rec;
        rec.p = p;
        rec.betas.assign(out.x.begin(), out.x.begin() + p);
        rec.gammas.assign(out.x.begin() + p, out.x.end());
        rec.expectation = -out.f;
        rec.evaluations = out.f_evals + seed_evals;
        records.push_back(std::move(rec));

        if (checkpoint_path) write_checkpoint(*checkpoint_path, records);
    }
    return records;
}

}  // namespace

std::vector<RoundRecord> find_angles(int p_target, const Mixer& mixer, const CostTable& cost,
                                     const OptimizerConfig& cfg,
                                     const std::optional<std::string>& checkpoint_path) {
    if (p_target < 1) throw DomainError("p_target must be >= 1");
    std::vector<const Mixer*> mixers(static_cast<std::size_t>(p_target), &mixer);
    return find_angles_impl(p_target, mixers, cost, cfg, checkpoint_path);
}

std::vector<RoundRecord> find_angles(int p_target, const std::vector<const Mixer*>& mixers,
                                     const CostTable& cost, const OptimizerConfig& cfg,
                                     const std::optional<std::string>& checkpoint_path) {
    return find_angles_impl(p_target, mixers, cost, cfg, checkpoint_path);
}

RoundRecord find_angles_random_restarts(int p, const Mixer& mixer, const CostTable& cost,
                                        const OptimizerConfig& cfg) {
    validate_config(cfg);
    if (p < 1) throw DomainError("p must be >= 1");
    if (mixer.basis != cost.basis) {
        throw DomainError("mixer basis does not match the cost table basis");
    }
    check_optimizable(cost);

    const MixerSchedule schedule = MixerSchedule::uniform(mixer, static_cast<std::size_t>(p));
    auto objective = [&](const std::vector<double>& x) {
        return -exp_value(simulate(unpack_angles(x, p), schedule, cost));
    };
    auto objective_grad = [&](const std::vector<double>& x) {
        const Gradient g = gradient(unpack_angles(x, p), schedule, cost);
        std::vector<double> out;
        out.reserve(2 * static_cast<std::size_t>(p));
        for (double v : g.d_beta) out.push_back(-v);
        for (double v : g.d_gamma) out.push_back(-v);
        return out;
    };

    const int restarts = cfg.restarts;
    std::vector<LocalMinResult> results(static_cast<std::size_t>(restarts));
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(restarts));

    // Restart i draws from its own (rng_seed, i) stream, so the outcome is
    // independent of the worker count and stable under growing `restarts`.
    auto run_range = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            try {
                std::mt19937_64 rng(mix_seed(cfg.rng_seed, static_cast<std::uint64_t>(i)));
                std::uniform_real_distribution<double> angle(0.0, kTwoPi);
                std::vector<double> x0(2 * static_cast<std::size_t>(p));
                for (double& v : x0) v = angle(rng);
                Evaluator ev{objective, objective_grad};
                results[static_cast<std::size_t>(i)] = bfgs_impl(ev, std::move(x0), cfg);
            } catch (...) {
                failures[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };

    const unsigned workers =
        std::min<unsigned>(std::max(1u, cfg.workers), static_cast<unsigned>(restarts));
    if (workers == 1) {
        run_range(0, restarts);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const int chunk = (restarts + static_cast<int>(workers) - 1) / static_cast<int>(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(w) * chunk;
            const int hi = std::min(restarts, lo + chunk);
            pool.emplace_back([&, lo, hi] { run_range(lo, hi); });
        }
        for (auto& t : pool) t.join();
    }

    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }

    std::size_t best = 0;
    std::uint64_t evals = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        evals += results[i].f_evals;
        if (results[i].f < results[best].f) best = i;
    }

    RoundRecord rec;
    rec.p = p;
    rec.betas.assign(results[best].x.begin(), results[best].x.begin() + p);
    rec.gammas.assign(results[best].x.begin() + p, results[best].x.end());
    rec.expectation = -results[best].f;
    rec.evaluations = evals;
    return rec;
}

AngleSchedule median_angles(const std::vector<RoundRecord>& records) {
    if (records.empty()) throw DomainError("median of an empty record list");
    const int p = records[0].p;
    for (const RoundRecord& r : records) {
        if (r.p != p || r.betas.size() != static_cast<std::size_t>(p) ||
            r.gammas.size() != static_cast<std::size_t>(p)) {
            throw DomainError("records disagree on the number of rounds");
        }
    }

    auto fold = [](double x) {
        double y = x - kTwoPi * std::floor(x / kTwoPi);
        if (y >= kTwoPi) y = 0.0;  // guard the x = -eps rounding corner
        return y;
    };
    auto lower_median = [&](auto select) {
        std::vector<double> out(static_cast<std::size_t>(p));
        std::vector<double> column(records.size());
        for (int j = 0; j < p; ++j) {
            for (std::size_t i = 0; i < records.size(); ++i) {
                column[i] = fold(select(records[i], j));
            }
            auto mid = column.begin() + static_cast<std::ptrdiff_t>((column.size() - 1) / 2);
            std::nth_element(column.begin(), mid, column.end());
            out[static_cast<std::size_t>(j)] = *mid;
        }
        return out;
    };

    return AngleSchedule::flat(
        lower_median([](const RoundRecord& r, int j) { return r.betas[j]; }),
        lower_median([](const RoundRecord& r, int j) { return r.gammas[j]; }));
}

namespace {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i > 0) out += ',';
        out += format_float(vs[i]);
    }
    return out;
}

[[noreturn]] void checkpoint_fail(const std::string& path, std::size_t line,
                                  const std::string& msg) {
    throw FormatError(path + ":" + std::to_string(line) + ": " + msg);
}

double parse_float(const std::string& tok, const std::string& path, std::size_t line) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || tok.empty() || !std::isfinite(v)) {
        checkpoint_fail(path, line, "bad float '" + tok + "'");
    }
    return v;
}

std::vector<double> parse_float_list(const std::string& tok, const std::string& path,
                                     std::size_t line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= tok.size()) {
        const std::size_t comma = tok.find(',', start);
        const std::string piece =
            tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.push_back(parse_float(piece, path, line));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<RoundRecord> read_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint: " + path);

    std::vector<RoundRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t tab = line.find('\t', start);
            fields.push_back(
                line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 4 || fields[0].rfind("p=", 0) != 0 ||
            fields[1].rfind("exp=", 0) != 0 || fields[2].rfind("betas=", 0) != 0 ||
            fields[3].rfind("gammas=", 0) != 0) {
            checkpoint_fail(path, line_no, "expected p=\\texp=\\tbetas=\\tgammas=");
        }

        RoundRecord rec;
        const std::string p_tok = fields[0].substr(2);
        char* end = nullptr;
        const long p = std::strtol(p_tok.c_str(), &end, 10);
        if (end != p_tok.c_str() + p_tok.size() || p_tok.empty() || p < 1 || p > 1000000) {
            checkpoint_fail(path, line_no, "bad round count '" + p_tok + "'");
        }
        rec.p = static_cast<int>(p);
        rec.expectation = parse_float(fields[1].substr(4), path, line_no);
        rec.betas = parse_float_list(fields[2].substr(6), path, line_no);
        rec.gammas = parse_float_list(fields[3].substr(7), path, line_no);
        if (rec.betas.size() != static_cast<std::size_t>(rec.p) ||
            rec.gammas.size() != static_cast<std::size_t>(rec.p)) {
            checkpoint_fail(path, line_no, "angle counts do not match p");
        }
        if (rec.p != static_cast<int>(records.size()) + 1) {
            checkpoint_fail(path, line_no, "rounds must be contiguous from p=1");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_checkpoint(const std::string& path, const std::vector<RoundRecord>& records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const RoundRecord& r = records[i];
        if (r.p != static_cast<int>(i) + 1 ||
            r.betas.size() != static_cast<std::size_t>(r.p) ||
            r.gammas.size() != static_cast<std::size_t>(r.p)) {
            throw DomainError("checkpoint records must be contiguous rounds with p angles each");
        }
    }

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write checkpoint: " + path);
        for (const RoundRecord& r : records) {
            out << "p=" << r.p << "\texp=" << format_float(r.expectation)
                << "\tbetas=" << format_list(r.betas) << "\tgammas=" << format_list(r.gammas)
                << "\n";
        }
        out.close();
        if (!out) throw DataError("cannot write checkpoint: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move checkpoint into place: " + path);
    }
}

}  // namespace qaoa
