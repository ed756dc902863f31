// Copyright 2026 The oplab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oplab/spectral.hpp"

namespace oplab {

inline constexpr double kRelationTolerance = 1e-9;

/// Operational relations a system declares between its observables. Labels
/// refer to LabSystem observables.
struct AlgebraicRelations {
    struct Power {
        std::string base;
        int exponent;
        std::string result;
    };
    struct Binary {
        std::string first;
        std::string second;
        std::string result;
    };
    struct Scaling {
        std::string base;
        double factor;
        std::string result;
    };

    std::vector<std::pair<std::string, std::string>> compatible;
    std::vector<Power> powers;
    std::vector<Binary> sums;
    std::vector<Scaling> scalings;
    std::vector<Binary> products;
    /// (state, observable) -> declared mean; pairs not listed fall back to
    /// tr(rho A) of the system's own matrices
    std::map<std::pair<std::string, std::string>, double> expectations;
    std::vector<std::string> extremal_states;
};

/// Images J(a) of observables and J#(w) of states.
class Algebraization {
public:
    /// Throws InvalidArgument for an unmapped label and DimMismatch when an
    /// image has the wrong size.
    Algebraization(const LabSystem& system, std::map<std::string, HermitianObservable> j,
                   std::map<std::string, DensityState> j_states);

    static Algebraization identity(const LabSystem& system);

    const LabSystem& system() const { return system_; }
    const HermitianObservable& j(const std::string& observable) const;
    const DensityState& j_state(const std::string& state) const;
    double mean(const std::string& state, const std::string& observable) const;

private:
    LabSystem system_;
    std::map<std::string, HermitianObservable> j_;
    std::map<std::string, DensityState> j_states_;
};

struct ConditionResult {
    std::string name;
    bool pass;
    /// what produced the worst residual, empty when nothing was checked
    std::string witness;
    double residual;
};

struct ValidationReport {
    std::vector<ConditionResult> conditions;
    /// extremal states whose image is not pure; informational only
    std::vector<std::string> purity_losses;
    bool pass() const;
};

/// polynomial, additivity, homogeneity, expectation and multiplicative
/// conditions.
std::vector<ConditionResult> arba_validate(const Algebraization& alg, const AlgebraicRelations& rel);

struct EmbeddingEntry {
    std::string observable;
    double spectral_radius;
    double family_norm;
    std::string attained_by;
    bool embedding;
    /// every eigenvalue of the system observable is an eigenvalue of J(a)
    bool point_spectrum_preserved;
};

struct EmbeddingReport {
    std::vector<EmbeddingEntry> entries;
    ConditionResult embedding;
    ConditionResult point_spectrum;
};

/// `families` maps observable labels to state labels; observables without an
/// entry use their suitable states.
EmbeddingReport embedding_check(const Algebraization& alg,
                                const std::map<std::string, std::vector<std::string>>& families = {});

std::vector<ConditionResult> center_check(const Algebraization& alg, const AlgebraicRelations& rel,
                                          const std::vector<std::string>& center);

std::vector<std::string> purity_losses(const Algebraization& alg, const std::vector<std::string>& extremal);

}  // namespace oplab
