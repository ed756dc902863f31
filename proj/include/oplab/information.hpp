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

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oplab/borel_set.hpp"
#include "oplab/measure.hpp"
#include "oplab/spectral.hpp"

namespace oplab {

/// -sum p log2 p with 0 log 0 = 0.
double shannon_bits(std::span<const double> probabilities);

struct EntropyReport {
    std::vector<std::string> cells;
    std::vector<double> probabilities;
    /// bits
    double entropy;
};

/// Cell probabilities of mu under a partition; throws PartitionDoesNotCover
/// when an atom falls outside every cell.
template <class T>
std::vector<T> cell_probabilities(const DiscreteMeasure<T>& mu, const Partition<T>& partition) {
    std::vector<T> probs(partition.cells.size(), ScalarTraits<T>::zero());
    for (const auto& a : mu.atoms()) {
        auto cell = partition.cell_of(a.point);
        require(cell.has_value(), ErrorCode::PartitionDoesNotCover, "atom " + to_string(a.point) + " lies in no cell");
        probs[*cell] += a.weight;
    }
    return probs;
}

template <class T>
EntropyReport shannon_entropy(const DiscreteMeasure<T>& mu, const Partition<T>& partition) {
    require_probability(mu, "shannon_entropy: measure");
    auto probs = cell_probabilities(mu, partition);
    EntropyReport r;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        r.cells.push_back(partition.cells[i].describe());
        r.probabilities.push_back(to_double(probs[i]));
    }
    r.entropy = shannon_bits(r.probabilities);
    return r;
}

/// Outcome of one Khinchin property over the generated corpus.
struct AxiomResult {
    std::string axiom;
    std::size_t cases;
    std::size_t failures;
    double worst_residual;
    bool pass() const { return failures == 0; }
};

struct KhinchinReport {
    std::vector<AxiomResult> axioms;
    bool all_pass() const;
};

using EntropyFunction = std::function<double(std::span<const double>)>;

/// Evaluates K1-K6 for `h` on `cases` generated schemas per axiom. K3 is
/// checked in its grouping form h(split) = h(xi) + xi(1) h(uniform_k).
KhinchinReport khinchin_validate(const EntropyFunction& h, std::size_t cases = 100, std::uint64_t seed = 1);

enum class Informativity { MoreInformative, Equal, LessInformative, Incomparable };

const char* to_string(Informativity v);

struct InformativityVerdict {
    Informativity verdict;
    /// description of the partition family the verdict is restricted to
    std::string family;
    std::size_t partitions;
};

/// Dyadic refinements of the joint support window to `depth`, plus the
/// partition separating every atom of either measure.
template <class T>
std::vector<Partition<T>> default_partition_family(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b,
                                                   unsigned depth = 10) {
    std::vector<T> points = a.support();
    auto more = b.support();
    points.insert(points.end(), more.begin(), more.end());
    require(!points.empty(), ErrorCode::InvalidArgument, "partition family needs atoms");
    std::vector<Partition<T>> family;
    auto [lo, hi] = std::minmax_element(points.begin(), points.end());
    if (*lo < *hi) {
        for (unsigned k = 1; k <= depth; ++k) family.push_back(Partition<T>::dyadic(*lo, *hi, k));
    }
    family.push_back(Partition<T>::separating(points));
    return family;
}

template <class T>
InformativityVerdict informativity_compare(const DiscreteMeasure<T>& first, const DiscreteMeasure<T>& second,
                                           const std::vector<Partition<T>>& family, std::string family_name) {
    constexpr double slack = 1e-12;
    bool le = true, ge = true;
    for (const auto& p : family) {
        double h1 = shannon_entropy(first, p).entropy;
        double h2 = shannon_entropy(second, p).entropy;
        if (h1 > h2 + slack) le = false;
        if (h2 > h1 + slack) ge = false;
    }
    Informativity v = le && ge ? Informativity::Equal
                    : le       ? Informativity::MoreInformative
                    : ge       ? Informativity::LessInformative
                               : Informativity::Incomparable;
    return {v, std::move(family_name), family.size()};
}

template <class T>
InformativityVerdict informativity_compare(const DiscreteMeasure<T>& first, const DiscreteMeasure<T>& second) {
    return informativity_compare(first, second, default_partition_family(first, second),
                                 "dyadic depth 1..10 on the support window + atom-separating");
}

struct EntropyPurity {
    /// nats
    double entropy;
    double purity;
};

EntropyPurity vn_entropy_and_purity(const DensityState& rho);

struct PartitionDensity {
    DensityState rho;
    /// Shannon entropy of the cell schema, bits
    double shannon_bits;
    /// von Neumann entropy of rho, nats; equals shannon_bits * ln 2
    double vn_nats;
};

/// diag(mu(cell_1), ..., mu(cell_k)) in the standard basis.
template <class T>
PartitionDensity partition_density_matrix(const DiscreteMeasure<T>& mu, const Partition<T>& partition) {
    require_probability(mu, "partition_density_matrix: measure");
    auto probs = cell_probabilities(mu, partition);
    std::vector<double> diag;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        require(!ScalarTraits<T>::is_zero(probs[i]), ErrorCode::ZeroCell, "cell " + std::to_string(i) + " has zero mass");
        diag.push_back(to_double(probs[i]));
    }
    double bits = shannon_bits(diag);
    DensityState rho = DensityState::diagonal(diag);
    double nats = vn_entropy_and_purity(rho).entropy;
    return {std::move(rho), bits, nats};
}

/// Bisection on [lo, hi]: keep the half carrying all the mass. Returns the
/// final lower end, or nullopt as soon as both halves carry mass.
template <class T>
std::optional<T> dirac_detect(const DiscreteMeasure<T>& mu, const T& window_lo, const T& window_hi, unsigned depth) {
    require(!mu.empty(), ErrorCode::InvalidArgument, "dirac_detect on the zero measure");
    require(!(window_hi < window_lo), ErrorCode::InvalidArgument, "window requires lo <= hi");
    for (const auto& a : mu.atoms())
        require(!(a.point < window_lo) && !(window_hi < a.point), ErrorCode::InvalidArgument,
                "support leaves the window at " + to_string(a.point));
    T lo = window_lo, hi = window_hi;
    const T total = mu.mass();
    for (unsigned i = 0; i < depth && lo < hi; ++i) {
        T mid = (lo + hi) / T(2);
        T left = mu.measure_of(BorelSet<T>::half_open(lo, mid));
        if (ScalarTraits<T>::equal_mass(left, total)) {
            hi = mid;
        } else if (ScalarTraits<T>::is_zero(left)) {
            lo = mid;
        } else {
            return std::nullopt;
        }
    }
    return lo;
}

}  // namespace oplab
