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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cran {

enum class Quantizer { AVQ, RVQ, DSC };
enum class Detector { MMSE, SIC };

struct SchemePair {
    Quantizer quantizer = Quantizer::RVQ;
    Detector detector = Detector::SIC;

    friend bool operator==(const SchemePair &, const SchemePair &) = default;
};

inline constexpr SchemePair kAllSchemePairs[] = {
    {Quantizer::AVQ, Detector::MMSE}, {Quantizer::AVQ, Detector::SIC},
    {Quantizer::RVQ, Detector::MMSE}, {Quantizer::RVQ, Detector::SIC},
    {Quantizer::DSC, Detector::MMSE}, {Quantizer::DSC, Detector::SIC},
};

inline std::string_view to_string(Quantizer q) {
    switch (q) {
    case Quantizer::AVQ: return "avq";
    case Quantizer::RVQ: return "rvq";
    case Quantizer::DSC: return "dsc";
    }
    return "?";
}

inline std::string_view to_string(Detector d) {
    return d == Detector::MMSE ? "mmse" : "sic";
}

inline std::optional<Quantizer> parse_quantizer(std::string_view s) {
    if (s == "avq") return Quantizer::AVQ;
    if (s == "rvq") return Quantizer::RVQ;
    if (s == "dsc") return Quantizer::DSC;
    return std::nullopt;
}

inline std::optional<Detector> parse_detector(std::string_view s) {
    if (s == "mmse") return Detector::MMSE;
    if (s == "sic") return Detector::SIC;
    return std::nullopt;
}

/// Inner-loop flavour: exact log-det source-coding constraint, or its
/// linearized surrogate with auxiliary matrices.
enum class AcoVariant { ACO, MACO };

inline std::string_view to_string(AcoVariant v) {
    return v == AcoVariant::ACO ? "aco" : "maco";
}

} // namespace cran
