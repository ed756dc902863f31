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

#include "oplab/simplex.hpp"

#include "oplab/errors.hpp"

namespace oplab {

PhaseOneResult phase_one(const EqualitySystem& system) {
    const std::size_t m = system.rows.size();
    const std::size_t n = system.columns;
    require(system.rhs.size() == m, ErrorCode::InvalidArgument, "rhs length differs from row count");
    for (const auto& r : system.rows) require(r.size() == n, ErrorCode::InvalidArgument, "ragged constraint row");

    // Tableau columns: n structural, m artificial, then the rhs. Rows with a
    // negative rhs are negated so the artificial basis starts feasible.
    const std::size_t width = n + m + 1;
    std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(width, Rational(0)));
    std::vector<int> sign(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
        sign[i] = sgn(system.rhs[i]) < 0 ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) tab[i][j] = sign[i] * system.rows[i][j];
        tab[i][n + i] = 1;
        tab[i][width - 1] = sign[i] * system.rhs[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    // cost row holds reduced costs c_j - c_B B^-1 A_j; last entry is -objective
    std::vector<Rational> cost(width, Rational(0));
    for (std::size_t j = n; j < n + m; ++j) cost[j] = 1;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < width; ++j) cost[j] -= tab[i][j];

    PhaseOneResult result;
    for (;;) {
        std::size_t entering = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (sgn(cost[j]) < 0) {
                entering = j;
                break;
            }
        }
        if (entering == width) break;

        std::size_t leaving = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (sgn(tab[i][entering]) <= 0) continue;
            Rational ratio = tab[i][width - 1] / tab[i][entering];
            if (leaving == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        // phase one is bounded below by zero, so some row always limits the step
        require(leaving != m, ErrorCode::InvalidArgument, "unbounded phase-one direction");

        Rational pivot = tab[leaving][entering];
        for (auto& v : tab[leaving]) v /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leaving || sgn(tab[i][entering]) == 0) continue;
            Rational factor = tab[i][entering];
            for (std::size_t j = 0; j < width; ++j) tab[i][j] -= factor * tab[leaving][j];
        }
        if (sgn(cost[entering]) != 0) {
            Rational factor = cost[entering];
            for (std::size_t j = 0; j < width; ++j) cost[j] -= factor * tab[leaving][j];
        }
        basis[leaving] = entering;
        ++result.pivots;
    }

    result.infeasibility = -cost[width - 1];
    result.feasible = sgn(result.infeasibility) == 0;
    if (result.feasible) {
        result.x.assign(n, Rational(0));
        for (std::size_t i = 0; i < m; ++i)
            if (basis[i] < n) result.x[basis[i]] = tab[i][width - 1];
    } else {
        // y_i for the sign-adjusted rows is 1 - reduced cost of artificial i;
        // undo the row negation to express it against the original system.
        result.farkas.resize(m);
        for (std::size_t i = 0; i < m; ++i) result.farkas[i] = sign[i] * (1 - cost[n + i]);
    }
    return result;
}

}  // namespace oplab
