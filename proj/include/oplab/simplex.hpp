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
#include <vector>

#include "oplab/rational.hpp"

namespace oplab {

/// Equality-form feasibility problem  A x = b,  x >= 0  over the rationals.
struct EqualitySystem {
    std::size_t columns = 0;
    std::vector<std::vector<Rational>> rows;  // each of length `columns`
    std::vector<Rational> rhs;
};

struct PhaseOneResult {
    bool feasible = false;
    /// A feasible point when `feasible`.
    std::vector<Rational> x;
    /// When infeasible: y with y^T A <= 0 componentwise and y^T b > 0.
    std::vector<Rational> farkas;
    /// Optimal phase-one objective (sum of artificials); zero iff feasible.
    Rational infeasibility;
    std::size_t pivots = 0;
};

/// Exact phase-one simplex with Bland's rule. The returned certificate is
/// read off the final tableau's reduced costs on the artificial columns.
PhaseOneResult phase_one(const EqualitySystem& system);

}  // namespace oplab
