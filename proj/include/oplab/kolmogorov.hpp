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

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "oplab/rational.hpp"

namespace oplab {

/// A classical random variable with a finite outcome list.
struct OutcomeSpace {
    std::string name;
    std::vector<Rational> outcomes;
};

/// Partial assignment of outcome values to observables, e.g. {X1 = 1, X3 = -1}.
using Event = std::vector<std::pair<std::size_t, Rational>>;

/// P(event) = probability
struct MarginalConstraint {
    Event event;
    Rational probability;
};

/// P(event | given) = probability, linearized as nu(event and given) = p nu(given)
struct ConditionalConstraint {
    Event event;
    Event given;
    Rational probability;
};

/// E[prod of the listed observables] = value
struct ExpectationConstraint {
    std::vector<std::size_t> observables;
    Rational value;
};

struct ProbabilityConstraint {
    std::string label;
    std::variant<MarginalConstraint, ConditionalConstraint, ExpectationConstraint> body;
};

/// Joint probability vector over the product space, indexed row-major with
/// the last observable varying fastest.
struct ProductSpaceMeasure {
    std::vector<OutcomeSpace> spaces;
    std::vector<Rational> weights;

    std::size_t size() const { return weights.size(); }
    /// Outcome index of each observable for flat cell `cell`.
    std::vector<std::size_t> unflatten(std::size_t cell) const;
};

struct KolmogorovResult {
    bool feasible = false;
    /// Exact joint when feasible.
    ProductSpaceMeasure joint;
    /// When infeasible: labels of constraints carrying a nonzero Farkas
    /// multiplier ("normalization" is the total-mass row).
    std::vector<std::string> infeasible_subset;
    /// Multiplier per constraint row, normalization row last.
    std::vector<Rational> certificate;
    /// Each constraint's coefficient row and rhs, normalization last, as
    /// passed to the solver (lets callers re-verify the certificate).
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    std::vector<std::string> row_labels;
};

inline constexpr std::size_t kDefaultKolmogorovCapacity = 10000;

/// Searches for a single joint distribution reproducing every constraint.
/// Throws CapacityError when the product space exceeds `capacity` cells.
KolmogorovResult kolmogorov_check(const std::vector<OutcomeSpace>& spaces,
                                  const std::vector<ProbabilityConstraint>& constraints,
                                  std::size_t capacity = kDefaultKolmogorovCapacity);

/// Residual of a constraint at a joint vector (zero means satisfied).
Rational constraint_residual(const ProductSpaceMeasure& joint, const ProbabilityConstraint& constraint);

}  // namespace oplab
