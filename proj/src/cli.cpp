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

#include "cli.hpp"

#include <cran/experiments.hpp>
#include <cran/subproblem.hpp>
#include <cran/transforms.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cran::cli {
namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    int blocks = 100;
    std::string scheme = "all";
    std::string detector = "all";
    std::vector<double> kappa;
    std::string variant = "maco";
    std::string out = "-";
    std::vector<double> mu;
    std::vector<double> power_dbm;
    std::vector<int> antennas;
    int threads = 0;
    std::string fault = "none";
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<SchemePair> select_pairs(const std::string &scheme, const std::string &detector) {
    std::vector<Quantizer> qs;
    std::vector<Detector> ds;
    if (scheme == "all") {
        qs = {Quantizer::AVQ, Quantizer::RVQ, Quantizer::DSC};
    } else if (auto q = parse_quantizer(scheme)) {
        qs = {*q};
    } else {
        throw UsageError("unknown scheme: " + scheme);
    }
    if (detector == "all") {
        ds = {Detector::MMSE, Detector::SIC};
    } else if (auto d = parse_detector(detector)) {
        ds = {*d};
    } else {
        throw UsageError("unknown detector: " + detector);
    }
    std::vector<SchemePair> out;
    for (auto q : qs)
        for (auto d : ds) out.push_back({q, d});
    return out;
}

ExperimentSpec make_spec(ExperimentKind kind, const Options &o) {
    ExperimentSpec s;
    s.kind = kind;
    if (!o.config.empty()) s.cfg = load_config(o.config);
    if (o.seed) s.cfg.rng_seed = *o.seed;
    s.seed = s.cfg.rng_seed;
    s.blocks = o.blocks;
    s.pairs = select_pairs(o.scheme, o.detector);
    s.kappas = o.kappa;
    if (o.variant == "aco")
        s.variant = AcoVariant::ACO;
    else if (o.variant == "maco")
        s.variant = AcoVariant::MACO;
    else
        throw UsageError("unknown variant: " + o.variant);
    s.mu_grid = o.mu;
    s.power_dbm = o.power_dbm;
    s.antennas = o.antennas;
    s.threads = o.threads;
    if (o.fault == "lemma1-sign")
        s.fault = oracle::Fault::Lemma1SignFlip;
    else if (o.fault != "none")
        throw UsageError("unknown fault: " + o.fault);
    for (const auto &p : s.pairs) {
        const auto bad = validate(s.cfg, p.quantizer);
        if (!bad.empty()) throw UsageError("invalid configuration: " + bad.front());
    }
    validate_spec(s);
    return s;
}

void emit(const Options &o, const ExperimentSpec &spec, const Table &t, std::ostream &out) {
    if (o.out == "-")
        write_csv(out, spec, t);
    else
        write_csv(o.out, spec, t);
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Hybrid RF/FSO fronthaul C-RAN experiments"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "JSON configuration file");
        sub->add_option("--seed", o.seed, "master random seed");
        sub->add_option("--blocks", o.blocks, "fading blocks")->check(CLI::PositiveNumber);
        sub->add_option("--scheme", o.scheme, "avq|rvq|dsc|all");
        sub->add_option("--detector", o.detector, "mmse|sic|all");
        sub->add_option("--kappa", o.kappa, "FSO attenuation values, dB/m")->delimiter(',');
        sub->add_option("--variant", o.variant, "aco|maco");
        sub->add_option("--out", o.out, "output CSV path ('-' for stdout)");
        sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
    };
    auto *sweep = app.add_subcommand("sweep-alpha", "weighted sum rate versus alpha0");
    common(sweep);
    auto *region = app.add_subcommand("rate-region", "two-user achievable rate region");
    common(region);
    region->add_option("--mu", o.mu, "first-user weights")->delimiter(',');
    auto *sum = app.add_subcommand("sum-rate", "average sum rate versus user transmit power");
    common(sum);
    sum->add_option("--power-dbm", o.power_dbm, "transmit powers, dBm")->delimiter(',');
    sum->add_option("--antennas", o.antennas, "antennas per RU")->delimiter(',');
    auto *check = app.add_subcommand("oracle-check", "compare the optimizer against reference oracles");
    common(check);
    check->add_option("--inject-fault", o.fault, "none|lemma1-sign")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sweep->parsed()) {
            const auto spec = make_spec(ExperimentKind::SweepAlpha, o);
            emit(o, spec, run_sweep_alpha(spec), out);
        } else if (region->parsed()) {
            const auto spec = make_spec(ExperimentKind::RateRegion, o);
            emit(o, spec, run_rate_region(spec), out);
        } else if (sum->parsed()) {
            const auto spec = make_spec(ExperimentKind::SumRateVsPower, o);
            emit(o, spec, run_sum_rate_vs_power(spec), out);
        } else {
            const auto spec = make_spec(ExperimentKind::OracleCheck, o);
            const auto rep = run_oracle_check(spec);
            emit(o, spec, rep.table, out);
            if (!rep.passed) {
                for (const auto &name : rep.failed) err << "check failed: " << name << "\n";
                return 2;
            }
        }
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const SubproblemError &e) {
        err << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const InfeasibleAllocation &e) {
        err << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const NotPositiveDefinite &e) {
        err << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

} // namespace cran::cli
