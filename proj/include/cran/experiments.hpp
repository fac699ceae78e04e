// Copyright 2026 The hybrid-fronthaul C-RAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Experiment runners behind the command-line tool. Each runner produces a
// table; write_csv prefixes it with a '#' metadata block holding the resolved
// configuration and seed. Rates are serialized in Mbps.

#include "channel.hpp"
#include "gss.hpp"
#include "oracles.hpp"
#include "rates.hpp"
#include "scheme.hpp"
#include "sysmodel.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#ifndef CRAN_BUILD_ID
#define CRAN_BUILD_ID "unknown"
#endif

namespace cran {

enum class ExperimentKind { SweepAlpha, RateRegion, SumRateVsPower, OracleCheck };

inline std::string_view to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::SweepAlpha: return "sweep-alpha";
    case ExperimentKind::RateRegion: return "rate-region";
    case ExperimentKind::SumRateVsPower: return "sum-rate";
    case ExperimentKind::OracleCheck: return "oracle-check";
    }
    return "?";
}

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SweepAlpha;
    SystemConfig cfg;
    std::vector<SchemePair> pairs{std::begin(kAllSchemePairs), std::end(kAllSchemePairs)};
    std::vector<double> kappas;          // empty: use cfg.kappa_db_per_m
    int blocks = 100;
    std::vector<double> mu_grid;         // first-user weights (rate region)
    std::vector<double> power_dbm;       // user transmit powers (sum rate)
    std::vector<int> antennas;           // antennas per RU (sum rate); empty: cfg.N
    AcoVariant variant = AcoVariant::MACO;
    std::uint64_t seed = 1;
    int threads = 0;                     // 0: hardware concurrency
    oracle::Fault fault = oracle::Fault::None;
};

/// Throws std::invalid_argument naming the first violated requirement.
inline void validate_spec(const ExperimentSpec &s) {
    require_valid(s.cfg);
    if (s.blocks < 1) throw std::invalid_argument("block count must be >= 1");
    if (s.pairs.empty()) throw std::invalid_argument("at least one scheme pair is required");
    for (double k : s.kappas)
        if (!(k > 0.0)) throw std::invalid_argument("kappa values must be > 0");
    for (double m : s.mu_grid)
        if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("weights must lie in [0, 1]");
    for (int n : s.antennas)
        if (n < 1) throw std::invalid_argument("antenna counts must be >= 1");
    if (s.kind == ExperimentKind::RateRegion && s.cfg.K != 2)
        throw std::invalid_argument("rate-region requires K = 2");
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;      // extra metadata lines
};

inline std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

inline std::string fmt_general(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::string mbps(double bps) { return fmt(bps / 1e6); }

inline void write_csv(std::ostream &os, const ExperimentSpec &spec, const Table &t) {
    os << "# cran experiment: " << to_string(spec.kind) << "\n";
    os << "# build: " << CRAN_BUILD_ID << "\n";
    os << "# seed: " << spec.seed << "\n";
    os << "# blocks: " << spec.blocks << "\n";
    os << "# variant: " << to_string(spec.variant) << "\n";
    os << "# rates: Mbps\n";
    for (const auto &n : t.notes) os << "# " << n << "\n";
    os << config_to_text(spec.cfg, "# config.");
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto &r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
}

inline void write_csv(const std::string &path, const ExperimentSpec &spec, const Table &t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    write_csv(f, spec, t);
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Runs body(i) for i in [0, n) on a small thread pool. Results must go to
/// per-index slots; the first exception is rethrown after all workers stop.
inline void parallel_for(int n, int threads, const std::function<void(int)> &body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(n, 1));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) th.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

inline std::vector<double> kappa_list(const ExperimentSpec &s) {
    return s.kappas.empty() ? std::vector<double>{s.cfg.kappa_db_per_m} : s.kappas;
}

inline double sum_of(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// ---------- sweep-alpha ----------

/// One realization per kappa; T(alpha0) on a 21-point grid per scheme pair
/// plus the GSS optimum. Rates are sum rates with equal weights.
inline Table run_sweep_alpha(const ExperimentSpec &spec) {
    validate_spec(spec);
    Table t;
    t.columns = {"kappa_db_per_m", "quantizer", "detector", "kind", "alpha0", "sum_rate_mbps", "aco_iterations"};
    const auto kappas = kappa_list(spec);
    const SolverOptions base = solver_options(spec.cfg, spec.variant);
    struct Job {
        std::size_t kappa, pair;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < kappas.size(); ++k)
        for (std::size_t p = 0; p < spec.pairs.size(); ++p) jobs.push_back({k, p});
    std::vector<std::vector<std::vector<std::string>>> out(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), spec.threads, [&](int j) {
        SystemConfig cfg = spec.cfg;
        cfg.kappa_db_per_m = kappas[jobs[j].kappa];
        const SchemePair pair = spec.pairs[jobs[j].pair];
        const ChannelRealization ch = draw_realization(cfg, spec.seed, 0);
        const CapacityVector cap = capacities(ch, cfg);
        const UnifiedProblem up = build_unified(cfg, ch.H, cap, pair, Weights::uniform(cfg.K));
        const TransformedConstraints tc = lemma1_transform(cap.C_fso, cap.C_rf);
        auto row = [&](std::string_view kind, double a, const AcoResult &r) {
            return std::vector<std::string>{fmt_general(cfg.kappa_db_per_m), std::string(to_string(pair.quantizer)),
                                            std::string(to_string(pair.detector)), std::string(kind), fmt(a),
                                            mbps(sum_of(user_rates(a, r.D, up))), std::to_string(r.iterations)};
        };
        for (int i = 0; i <= 20; ++i) {
            const double a = i / 20.0;
            out[j].push_back(row("grid", a, aco_inner(a, up, tc, base)));
        }
        const SolveResult s = gss_outer(up, tc, base);
        AcoResult fin;
        fin.D = s.D_star;
        fin.iterations = s.aco_iterations.back();
        out[j].push_back(row("gss", s.alpha_star.alpha0, fin));
    });
    for (auto &rows : out)
        for (auto &r : rows) t.rows.push_back(std::move(r));
    return t;
}

// ---------- rate-region ----------

inline std::vector<double> default_mu_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
    return g;
}

/// Block-averaged per-user rates of the weighted-sum-rate optimum for each
/// first-user weight, with the matching V-MAC bound point.
inline Table run_rate_region(const ExperimentSpec &spec) {
    validate_spec(spec);
    Table t;
    t.columns = {"quantizer", "detector", "mu1", "kind", "rate1_mbps", "rate2_mbps", "sum_mbps"};
    const auto mus = spec.mu_grid.empty() ? default_mu_grid() : spec.mu_grid;
    const SolverOptions base = solver_options(spec.cfg, spec.variant);
    const int nb = spec.blocks;
    const std::size_t np = spec.pairs.size(), nm = mus.size();
    // [block][pair][mu] -> rates; [block][mu] -> V-MAC point
    std::vector<std::vector<std::vector<std::vector<double>>>> got(
        static_cast<std::size_t>(nb), std::vector<std::vector<std::vector<double>>>(np, std::vector<std::vector<double>>(nm)));
    std::vector<std::vector<std::vector<double>>> bound(static_cast<std::size_t>(nb), std::vector<std::vector<double>>(nm));
    const int jobs = nb * static_cast<int>(nm);
    parallel_for(jobs, spec.threads, [&](int j) {
        const int b = j / static_cast<int>(nm);
        const std::size_t mi = static_cast<std::size_t>(j % static_cast<int>(nm));
        const ChannelRealization ch = draw_realization(spec.cfg, spec.seed, static_cast<std::uint64_t>(b));
        const CapacityVector cap = capacities(ch, spec.cfg);
        const Weights w = Weights::pair(mus[mi]);
        for (std::size_t p = 0; p < np; ++p) {
            const UnifiedProblem up = build_unified(spec.cfg, ch.H, cap, spec.pairs[p], w);
            const TransformedConstraints tc = lemma1_transform(cap.C_fso, cap.C_rf);
            got[b][p][mi] = gss_outer(up, tc, base).user_rates;
        }
        const UnifiedProblem up0 = build_unified(spec.cfg, ch.H, cap, spec.pairs[0], w);
        const auto corners = oracle::vmac_corners(oracle::vmac_region(up0));
        // the weighted optimum decodes the heavier user last
        bound[b][mi] = mus[mi] >= 0.5 ? corners[0] : corners[1];
    });
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t mi = 0; mi < nm; ++mi) {
            double r1 = 0.0, r2 = 0.0;
            for (int b = 0; b < nb; ++b) {
                r1 += got[b][p][mi][0];
                r2 += got[b][p][mi][1];
            }
            r1 /= nb;
            r2 /= nb;
            t.rows.push_back({std::string(to_string(spec.pairs[p].quantizer)),
                              std::string(to_string(spec.pairs[p].detector)), fmt(mus[mi]), "achieved", mbps(r1),
                              mbps(r2), mbps(r1 + r2)});
        }
    for (std::size_t mi = 0; mi < nm; ++mi) {
        double r1 = 0.0, r2 = 0.0;
        for (int b = 0; b < nb; ++b) {
            r1 += bound[b][mi][0];
            r2 += bound[b][mi][1];
        }
        r1 /= nb;
        r2 /= nb;
        t.rows.push_back({"none", "sic", fmt(mus[mi]), "vmac", mbps(r1), mbps(r2), mbps(r1 + r2)});
    }
    return t;
}

// ---------- sum-rate vs power ----------

inline std::vector<double> default_power_grid() { return {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0}; }

/// Block-averaged sum rate per (scheme pair, antennas per RU, power).
inline Table run_sum_rate_vs_power(const ExperimentSpec &spec) {
    validate_spec(spec);
    Table t;
    t.columns = {"quantizer", "detector", "antennas_per_ru", "power_dbm", "sum_rate_mbps"};
    const auto powers = spec.power_dbm.empty() ? default_power_grid() : spec.power_dbm;
    const auto ns = spec.antennas.empty() ? std::vector<int>{spec.cfg.N} : spec.antennas;
    const std::size_t np = spec.pairs.size(), nn = ns.size(), npw = powers.size();
    const int nb = spec.blocks;
    std::vector<double> acc(np * nn * npw * static_cast<std::size_t>(nb), 0.0);
    auto slot = [&](std::size_t p, std::size_t n, std::size_t w, int b) {
        return ((p * nn + n) * npw + w) * static_cast<std::size_t>(nb) + static_cast<std::size_t>(b);
    };
    const int jobs = nb * static_cast<int>(nn);
    parallel_for(jobs, spec.threads, [&](int j) {
        const int b = j / static_cast<int>(nn);
        const std::size_t ni = static_cast<std::size_t>(j % static_cast<int>(nn));
        SystemConfig cfg = spec.cfg;
        cfg.N = ns[ni];
        const ChannelRealization ch = draw_realization(cfg, spec.seed, static_cast<std::uint64_t>(b));
        const CapacityVector cap = capacities(ch, cfg);
        const TransformedConstraints tc = lemma1_transform(cap.C_fso, cap.C_rf);
        const SolverOptions base = solver_options(cfg, spec.variant);
        for (std::size_t w = 0; w < npw; ++w) {
            cfg.P_k_dbm = powers[w];
            for (std::size_t p = 0; p < np; ++p) {
                const UnifiedProblem up = build_unified(cfg, ch.H, cap, spec.pairs[p], Weights::uniform(cfg.K));
                acc[slot(p, ni, w, b)] = sum_of(gss_outer(up, tc, base).user_rates);
            }
        }
    });
    for (std::size_t p = 0; p < np; ++p)
        for (std::size_t n = 0; n < nn; ++n)
            for (std::size_t w = 0; w < npw; ++w) {
                double s = 0.0;
                for (int b = 0; b < nb; ++b) s += acc[slot(p, n, w, b)];
                t.rows.push_back({std::string(to_string(spec.pairs[p].quantizer)),
                                  std::string(to_string(spec.pairs[p].detector)), std::to_string(ns[n]),
                                  fmt(powers[w], 2), mbps(s / nb)});
            }
    return t;
}

// ---------- oracle-check ----------

struct OracleCheckReport {
    Table table;
    bool passed = true;
    std::vector<std::string> failed;
};

/// Scalar oracle vs. pipeline, brute force vs. pipeline, and the lemma sweeps.
inline OracleCheckReport run_oracle_check(const ExperimentSpec &spec) {
    validate_spec(spec);
    OracleCheckReport rep;
    rep.table.columns = {"check", "trials", "failures", "tolerance", "max_error", "status"};
    auto add = [&](const std::string &name, long trials, long failures, double tol, double max_err) {
        const bool ok = failures == 0;
        rep.table.rows.push_back({name, std::to_string(trials), std::to_string(failures), fmt_general(tol),
                                  fmt_general(max_err), ok ? "pass" : "FAIL"});
        if (!ok) {
            rep.passed = false;
            rep.failed.push_back(name);
        }
    };
    const int nb = std::min(spec.blocks, 50);

    // scalar problem
    {
        SystemConfig cfg = spec.cfg;
        cfg.K = cfg.M = cfg.N = cfg.L = 1;
        const SolverOptions opts = solver_options(cfg, spec.variant);
        std::vector<double> err(static_cast<std::size_t>(nb));
        parallel_for(nb, spec.threads, [&](int b) {
            const ChannelRealization ch = draw_realization(cfg, spec.seed, static_cast<std::uint64_t>(b));
            const auto o = oracle::scalar_oracle(cfg, ch);
            const SolveResult s = solve_block(cfg, ch, {Quantizer::AVQ, Detector::MMSE}, Weights::uniform(1), opts);
            err[b] = o.R_star > 0.0 ? std::abs(s.T - o.R_star) / o.R_star : std::abs(s.T);
        });
        long bad = 0;
        double worst = 0.0;
        for (double e : err) {
            worst = std::max(worst, e);
            if (e > 0.01) ++bad;
        }
        add("scalar-oracle-vs-pipeline", nb, bad, 0.01, worst);
    }

    // exhaustive small problem
    {
        SystemConfig cfg = spec.cfg;
        cfg.K = 2;
        cfg.M = 1;
        cfg.N = 2;
        const SolverOptions opts = solver_options(cfg, spec.variant);
        const int n = std::min(nb, 20);
        std::vector<double> below(static_cast<std::size_t>(n)), above(static_cast<std::size_t>(n));
        parallel_for(n, spec.threads, [&](int b) {
            const ChannelRealization ch = draw_realization(cfg, spec.seed, static_cast<std::uint64_t>(b));
            const CapacityVector cap = capacities(ch, cfg);
            const UnifiedProblem up =
                build_unified(cfg, ch.H, cap, {Quantizer::AVQ, Detector::MMSE}, Weights::uniform(2));
            const auto bf = oracle::brute_force_small(up, oracle::BruteForceGrids::standard(up.MN));
            const SolveResult s = gss_outer(up, lemma1_transform(cap.C_fso, cap.C_rf), opts);
            below[b] = (bf.T - s.T) / bf.T;                        // pipeline shortfall
            above[b] = (s.T - bf.T - bf.grid_slack) / bf.T;        // excess beyond grid slack
        });
        long bad_lo = 0, bad_hi = 0;
        double worst_lo = 0.0, worst_hi = 0.0;
        for (int b = 0; b < n; ++b) {
            worst_lo = std::max(worst_lo, below[b]);
            worst_hi = std::max(worst_hi, above[b]);
            if (below[b] > 0.02) ++bad_lo;
            if (above[b] > 0.0) ++bad_hi;
        }
        add("brute-force-lower", n, bad_lo, 0.02, worst_lo);
        add("brute-force-upper", n, bad_hi, 0.0, worst_hi);
    }

    // lemma sweeps
    {
        std::mt19937_64 rng(stream_seed(spec.seed, {0, LinkType::Auxiliary, 0}));
        const auto lr = oracle::lemma_checkers(rng, 10000, 1000, spec.fault);
        for (const auto &c : lr.checks) add(c.name, c.trials, c.failures, c.tolerance, c.max_error);
    }
    return rep;
}

} // namespace cran
