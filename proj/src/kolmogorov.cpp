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

#include "oplab/kolmogorov.hpp"

#include "oplab/errors.hpp"
#include "oplab/simplex.hpp"

namespace oplab {

std::vector<std::size_t> ProductSpaceMeasure::unflatten(std::size_t cell) const {
    std::vector<std::size_t> idx(spaces.size());
    for (std::size_t k = spaces.size(); k-- > 0;) {
        idx[k] = cell % spaces[k].outcomes.size();
        cell /= spaces[k].outcomes.size();
    }
    return idx;
}

namespace {

bool matches(const ProductSpaceMeasure& space, const std::vector<std::size_t>& idx, const Event& event) {
    for (const auto& [obs, value] : event)
        if (space.spaces[obs].outcomes[idx[obs]] != value) return false;
    return true;
}

void check_event(const std::vector<OutcomeSpace>& spaces, const Event& event, const std::string& label) {
    for (const auto& [obs, value] : event) {
        require(obs < spaces.size(), ErrorCode::InvalidArgument, label + ": observable index out of range");
        bool found = false;
        for (const auto& o : spaces[obs].outcomes) found = found || o == value;
        require(found, ErrorCode::InvalidArgument,
                label + ": " + to_string(value) + " is not an outcome of " + spaces[obs].name);
    }
}

// Coefficient row and rhs of the linear form of a constraint.
std::pair<std::vector<Rational>, Rational> linearize(const ProductSpaceMeasure& space,
                                                     const ProbabilityConstraint& c) {
    std::vector<Rational> row(space.size(), Rational(0));
    Rational rhs(0);
    for (std::size_t cell = 0; cell < space.size(); ++cell) {
        auto idx = space.unflatten(cell);
        std::visit(
            [&](const auto& body) {
                using B = std::decay_t<decltype(body)>;
                if constexpr (std::is_same_v<B, MarginalConstraint>) {
                    if (matches(space, idx, body.event)) row[cell] = 1;
                } else if constexpr (std::is_same_v<B, ConditionalConstraint>) {
                    if (matches(space, idx, body.given)) {
                        row[cell] = matches(space, idx, body.event) ? Rational(1 - body.probability)
                                                                    : Rational(-body.probability);
                    }
                } else {
                    Rational prod(1);
                    for (auto obs : body.observables) prod *= space.spaces[obs].outcomes[idx[obs]];
                    row[cell] = prod;
                }
            },
            c.body);
    }
    std::visit(
        [&](const auto& body) {
            using B = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<B, MarginalConstraint>) {
                rhs = body.probability;
            } else if constexpr (std::is_same_v<B, ExpectationConstraint>) {
                rhs = body.value;
            }
        },
        c.body);
    return {std::move(row), rhs};
}

}  // namespace

Rational constraint_residual(const ProductSpaceMeasure& joint, const ProbabilityConstraint& constraint) {
    auto [row, rhs] = linearize(joint, constraint);
    Rational lhs(0);
    for (std::size_t j = 0; j < row.size(); ++j) lhs += row[j] * joint.weights[j];
    return lhs - rhs;
}

KolmogorovResult kolmogorov_check(const std::vector<OutcomeSpace>& spaces,
                                  const std::vector<ProbabilityConstraint>& constraints, std::size_t capacity) {
    require(!spaces.empty(), ErrorCode::InvalidArgument, "at least one observable is required");
    std::size_t cells = 1;
    for (const auto& s : spaces) {
        require(!s.outcomes.empty(), ErrorCode::InvalidArgument, "observable " + s.name + " has no outcomes");
        require(s.outcomes.size() <= capacity / cells, ErrorCode::CapacityError,
                "product outcome space exceeds capacity " + std::to_string(capacity));
        cells *= s.outcomes.size();
    }

    KolmogorovResult result;
    ProductSpaceMeasure space{spaces, std::vector<Rational>(cells, Rational(0))};

    EqualitySystem system;
    system.columns = cells;
    for (const auto& c : constraints) {
        std::visit(
            [&](const auto& body) {
                using B = std::decay_t<decltype(body)>;
                if constexpr (std::is_same_v<B, MarginalConstraint>) {
                    check_event(spaces, body.event, c.label);
                } else if constexpr (std::is_same_v<B, ConditionalConstraint>) {
                    check_event(spaces, body.event, c.label);
                    check_event(spaces, body.given, c.label);
                } else {
                    for (auto obs : body.observables)
                        require(obs < spaces.size(), ErrorCode::InvalidArgument, c.label + ": observable index out of range");
                }
            },
            c.body);
        auto [row, rhs] = linearize(space, c);
        system.rows.push_back(std::move(row));
        system.rhs.push_back(std::move(rhs));
        result.row_labels.push_back(c.label);
    }
    system.rows.emplace_back(cells, Rational(1));
    system.rhs.emplace_back(1);
    result.row_labels.emplace_back("normalization");

    PhaseOneResult lp = phase_one(system);
    result.feasible = lp.feasible;
    result.rows = system.rows;
    result.rhs = system.rhs;
    if (lp.feasible) {
        space.weights = std::move(lp.x);
        result.joint = std::move(space);
    } else {
        result.joint = std::move(space);
        result.certificate = lp.farkas;
        for (std::size_t i = 0; i < lp.farkas.size(); ++i)
            if (sgn(lp.farkas[i]) != 0) result.infeasible_subset.push_back(result.row_labels[i]);
    }
    return result;
}

}  // namespace oplab
