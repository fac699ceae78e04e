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

// System configuration, unit conversions, noise powers and the seeding
// contract for every random draw in the simulator.

#include "scheme.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace cran {

/// Physical and algorithmic parameters. Defaults reproduce the reference
/// simulation table at a desk-scale network size (M = N = K = L = 2).
struct SystemConfig {
    int K = 2;
    int M = 2;
    int N = 2;
    int L = 2;

    double P_k_dbm = 16.0;
    double Pbar_m_dbm = 33.0;
    double Pfso_m_dbm = 13.0;

    double W_rf_hz = 40e6;
    double W_fso_hz = 1e9;
    double f_s_hz = 40e6;

    double N0_dbm_per_mhz = -114.0;
    double NF_db = 5.0;
    double delta2_a2 = 1e-14;

    double d_ac_m = 100.0;
    double d_fr_m = 500.0;
    double d_ref_m = 5.0;
    double nu = 3.5;
    double lambda_rf_m = 85.7e-3;
    double lambda_fso_m = 1550e-9;

    double G_mu_tx_dbi = 0.0;
    double G_ru_rx_dbi = 10.0;
    double G_ru_tx_dbi = 10.0;
    double G_cu_rx_dbi = 10.0;

    double Omega_db = 6.0;
    double Theta = 2.23;
    double Phi = 1.54;
    double kappa_db_per_m = 50e-3;

    double R_responsivity = 0.5;
    double r_aperture_m = 0.1;
    double phi_divergence_rad = 2e-3;

    double gss_epsilon = 0.01;
    double aco_epsilon_bps = 0.01e6;
    int n_max = 50;
    double d0_scale = 1.0;
    double barrier_t0 = 1.0;
    double barrier_mu = 10.0;
    double subproblem_tol = 1e-7;
    std::uint64_t rng_seed = 1;
};

/// Visits every configuration field as (key, member reference) in a fixed order.
template <class Cfg, class F>
void visit_fields(Cfg &c, F &&f) {
    f("K", c.K);
    f("M", c.M);
    f("N", c.N);
    f("L", c.L);
    f("P_k_dbm", c.P_k_dbm);
    f("Pbar_m_dbm", c.Pbar_m_dbm);
    f("Pfso_m_dbm", c.Pfso_m_dbm);
    f("W_rf_hz", c.W_rf_hz);
    f("W_fso_hz", c.W_fso_hz);
    f("f_s_hz", c.f_s_hz);
    f("N0_dbm_per_mhz", c.N0_dbm_per_mhz);
    f("NF_db", c.NF_db);
    f("delta2_a2", c.delta2_a2);
    f("d_ac_m", c.d_ac_m);
    f("d_fr_m", c.d_fr_m);
    f("d_ref_m", c.d_ref_m);
    f("nu", c.nu);
    f("lambda_rf_m", c.lambda_rf_m);
    f("lambda_fso_m", c.lambda_fso_m);
    f("G_mu_tx_dbi", c.G_mu_tx_dbi);
    f("G_ru_rx_dbi", c.G_ru_rx_dbi);
    f("G_ru_tx_dbi", c.G_ru_tx_dbi);
    f("G_cu_rx_dbi", c.G_cu_rx_dbi);
    f("Omega_db", c.Omega_db);
    f("Theta", c.Theta);
    f("Phi", c.Phi);
    f("kappa_db_per_m", c.kappa_db_per_m);
    f("R_responsivity", c.R_responsivity);
    f("r_aperture_m", c.r_aperture_m);
    f("phi_divergence_rad", c.phi_divergence_rad);
    f("gss_epsilon", c.gss_epsilon);
    f("aco_epsilon_bps", c.aco_epsilon_bps);
    f("n_max", c.n_max);
    f("d0_scale", c.d0_scale);
    f("barrier_t0", c.barrier_t0);
    f("barrier_mu", c.barrier_mu);
    f("subproblem_tol", c.subproblem_tol);
    f("rng_seed", c.rng_seed);
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct NoisePowers {
    double sigma2;  // RU receivers
    double varrho2; // CU RF receivers
};

/// Thermal noise over the RF bandwidth plus noise figure, both receivers alike.
inline NoisePowers noise_powers(const SystemConfig &cfg) {
    const double dbm = cfg.N0_dbm_per_mhz + 10.0 * std::log10(cfg.W_rf_hz / 1e6) + cfg.NF_db;
    const double w = dbm_to_watt(dbm);
    return {w, w};
}

/// Returns the names of all violated invariants; empty means valid. Pass the
/// quantizer to also check the DSC subset-enumeration bound.
inline std::vector<std::string> validate(const SystemConfig &c,
                                         std::optional<Quantizer> q = std::nullopt) {
    std::vector<std::string> v;
    if (c.K < 1) v.emplace_back("K >= 1");
    if (c.M < 1) v.emplace_back("M >= 1");
    if (c.N < 1) v.emplace_back("N >= 1");
    if (c.L < 1) v.emplace_back("L >= 1");
    auto positive = [&](const char *name, double x) {
        if (!(x > 0.0) || !std::isfinite(x)) v.emplace_back(std::string(name) + " > 0");
    };
    positive("W_rf_hz", c.W_rf_hz);
    positive("W_fso_hz", c.W_fso_hz);
    positive("f_s_hz", c.f_s_hz);
    positive("delta2_a2", c.delta2_a2);
    positive("d_ac_m", c.d_ac_m);
    positive("d_fr_m", c.d_fr_m);
    positive("d_ref_m", c.d_ref_m);
    positive("lambda_rf_m", c.lambda_rf_m);
    positive("lambda_fso_m", c.lambda_fso_m);
    positive("R_responsivity", c.R_responsivity);
    positive("r_aperture_m", c.r_aperture_m);
    positive("phi_divergence_rad", c.phi_divergence_rad);
    positive("nu", c.nu);
    positive("Theta", c.Theta);
    positive("Phi", c.Phi);
    positive("gss_epsilon", c.gss_epsilon);
    positive("aco_epsilon_bps", c.aco_epsilon_bps);
    positive("d0_scale", c.d0_scale);
    positive("barrier_t0", c.barrier_t0);
    positive("subproblem_tol", c.subproblem_tol);
    if (!(c.barrier_mu > 1.0)) v.emplace_back("barrier_mu > 1");
    if (!(c.kappa_db_per_m >= 0.0)) v.emplace_back("kappa_db_per_m >= 0");
    for (double dbm : {c.P_k_dbm, c.Pbar_m_dbm, c.Pfso_m_dbm, c.N0_dbm_per_mhz, c.NF_db})
        if (!std::isfinite(dbm)) v.emplace_back("power levels finite");
    if (c.f_s_hz < c.W_rf_hz) v.emplace_back("f_s_hz >= W_rf_hz");
    if (c.n_max < 1) v.emplace_back("n_max >= 1");
    if (q == Quantizer::DSC && c.M > 8) v.emplace_back("DSC subset bound");
    return v;
}

/// Throws std::invalid_argument listing every violation.
inline void require_valid(const SystemConfig &c, std::optional<Quantizer> q = std::nullopt) {
    const auto v = validate(c, q);
    if (v.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto &s : v) msg += " [" + s + "]";
    throw std::invalid_argument(msg);
}

// ---------- configuration files ----------

/// Parses a JSON object with one key per field. Unknown keys are errors;
/// missing keys keep their defaults.
inline SystemConfig config_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    SystemConfig c;
    std::vector<std::string> known;
    visit_fields(c, [&](const char *name, auto &) { known.emplace_back(name); });
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("unknown configuration key: " + it.key());
    }
    visit_fields(c, [&](const char *name, auto &member) {
        auto it = j.find(name);
        if (it == j.end()) return;
        using T = std::decay_t<decltype(member)>;
        if (!it->is_number())
            throw std::invalid_argument(std::string("configuration key is not a number: ") + name);
        if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer())
                throw std::invalid_argument(std::string("configuration key must be an integer: ") + name);
        }
        member = it->template get<T>();
    });
    return c;
}

inline SystemConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open configuration file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("malformed configuration file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

inline nlohmann::ordered_json config_to_json(const SystemConfig &cfg) {
    nlohmann::ordered_json j;
    SystemConfig c = cfg;
    visit_fields(c, [&](const char *name, auto &member) { j[name] = member; });
    return j;
}

/// "key = value" lines with round-trip precision, in field order.
inline std::string config_to_text(const SystemConfig &cfg, std::string_view prefix = "") {
    std::ostringstream os;
    os << std::setprecision(17);
    SystemConfig c = cfg;
    visit_fields(c, [&](const char *name, auto &member) {
        os << prefix << name << " = " << member << '\n';
    });
    return os.str();
}

// ---------- seeding ----------

enum class LinkType : std::uint64_t { Access = 1, FronthaulRf = 2, Fso = 3, Auxiliary = 4 };

/// Identifies one independent random stream: (fading block, link type, RU index).
struct StreamId {
    std::uint64_t block = 0;
    LinkType link = LinkType::Access;
    std::uint64_t ru = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based key derivation: the stream seed is a pure function of the
/// master seed and the stream id, so blocks can be drawn in any order.
inline std::uint64_t stream_seed(std::uint64_t master, const StreamId &id) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ splitmix64(id.block + 0x100000001B3ULL));
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(id.link) << 56));
    h = splitmix64(h ^ splitmix64(id.ru * 0xD6E8FEB86659FD93ULL + 7));
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t master, const StreamId &id) {
    return Rng(stream_seed(master, id));
}

} // namespace cran
