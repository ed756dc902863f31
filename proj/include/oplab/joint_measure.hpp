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

#include <algorithm>
#include <tuple>
#include <utility>
#include <vector>

#include "oplab/measure.hpp"

namespace oplab {

template <class T>
struct JointAtom {
    T s;
    T t;
    T weight;
    bool operator==(const JointAtom&) const = default;
};

/// Finite-support nonnegative measure on the plane. Atoms are sorted
/// lexicographically by (s, t) with positive weights.
template <class T>
class JointMeasure {
public:
    using Traits = ScalarTraits<T>;

    JointMeasure() : mass_(Traits::zero()) {}

    explicit JointMeasure(std::vector<JointAtom<T>> atoms) : atoms_(std::move(atoms)), mass_(Traits::zero()) {
        for (auto& a : atoms_) {
            Traits::canonicalize(a.s);
            Traits::canonicalize(a.t);
            Traits::canonicalize(a.weight);
            if constexpr (!Traits::exact) {
                require(std::isfinite(a.s) && std::isfinite(a.t) && std::isfinite(a.weight), ErrorCode::InvalidArgument,
                        "non-finite joint atom");
                if (a.weight < 0 && a.weight >= -Traits::mass_tolerance) a.weight = 0;
            }
            require(!(a.weight < 0), ErrorCode::InvalidArgument, "negative joint atom weight");
        }
        std::stable_sort(atoms_.begin(), atoms_.end(), [](const JointAtom<T>& x, const JointAtom<T>& y) {
            return std::tie(x.s, x.t) < std::tie(y.s, y.t);
        });
        std::vector<JointAtom<T>> merged;
        for (auto& a : atoms_) {
            bool same = false;
            // in double mode nearby points need not be adjacent after sorting
            for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
                if (!Traits::same_point(it->s, a.s)) break;
                if (Traits::same_point(it->t, a.t)) {
                    it->weight += a.weight;
                    same = true;
                    break;
                }
            }
            if (!same) merged.push_back(std::move(a));
        }
        std::erase_if(merged, [](const JointAtom<T>& a) { return Traits::is_zero(a.weight); });
        atoms_ = std::move(merged);
        for (const auto& a : atoms_) mass_ += a.weight;
    }

    const std::vector<JointAtom<T>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    const T& mass() const { return mass_; }
    bool is_probability() const { return Traits::is_one(mass_); }

    T measure_of(const BorelSet<T>& first, const BorelSet<T>& second) const {
        T total = Traits::zero();
        for (const auto& a : atoms_)
            if (first.contains(a.s) && second.contains(a.t)) total += a.weight;
        return total;
    }

    T weight_at(const T& s, const T& t) const {
        for (const auto& a : atoms_)
            if (Traits::same_point(a.s, s) && Traits::same_point(a.t, t)) return a.weight;
        return Traits::zero();
    }

    bool operator==(const JointMeasure& other) const { return atoms_ == other.atoms_; }

private:
    std::vector<JointAtom<T>> atoms_;
    T mass_;
};

template <class T>
bool approx_equal(const JointMeasure<T>& a, const JointMeasure<T>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.atoms()[i];
        const auto& y = b.atoms()[i];
        if (std::abs(to_double(x.s) - to_double(y.s)) > tol || std::abs(to_double(x.t) - to_double(y.t)) > tol ||
            std::abs(to_double(x.weight) - to_double(y.weight)) > tol)
            return false;
    }
    return true;
}

/// Conditional distributions P_s of the second coordinate, one probability
/// measure per point s. Rows are kept sorted by s.
template <class T>
class MarkovKernel {
public:
    MarkovKernel() = default;

    explicit MarkovKernel(std::vector<std::pair<T, DiscreteMeasure<T>>> rows) : rows_(std::move(rows)) {
        std::sort(rows_.begin(), rows_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            require_probability(rows_[i].second, "kernel row");
            require(i == 0 || !ScalarTraits<T>::same_point(rows_[i - 1].first, rows_[i].first), ErrorCode::InvalidArgument,
                    "duplicate kernel row " + to_string(rows_[i].first));
        }
    }

    /// The same distribution for every point of `domain`.
    static MarkovKernel constant(const std::vector<T>& domain, const DiscreteMeasure<T>& row) {
        std::vector<std::pair<T, DiscreteMeasure<T>>> rows;
        for (const auto& s : domain) rows.emplace_back(s, row);
        return MarkovKernel(std::move(rows));
    }

    const std::vector<std::pair<T, DiscreteMeasure<T>>>& rows() const { return rows_; }

    const DiscreteMeasure<T>* row(const T& s) const {
        auto it = std::lower_bound(rows_.begin(), rows_.end(), s, [](const auto& r, const T& v) { return r.first < v; });
        if (it != rows_.end() && ScalarTraits<T>::same_point(it->first, s)) return &it->second;
        if (it != rows_.begin() && ScalarTraits<T>::same_point(std::prev(it)->first, s)) return &std::prev(it)->second;
        return nullptr;
    }

    bool operator==(const MarkovKernel& other) const { return rows_ == other.rows_; }

private:
    std::vector<std::pair<T, DiscreteMeasure<T>>> rows_;
};

template <class T>
JointMeasure<T> product_measure(const DiscreteMeasure<T>& marginal, const MarkovKernel<T>& kernel) {
    std::vector<JointAtom<T>> out;
    for (const auto& a : marginal.atoms()) {
        const auto* row = kernel.row(a.point);
        require(row != nullptr, ErrorCode::KernelDomainError, "kernel has no row at " + to_string(a.point));
        for (const auto& b : row->atoms()) out.push_back({a.point, b.point, T(a.weight * b.weight)});
    }
    return JointMeasure<T>(std::move(out));
}

template <class T>
std::pair<DiscreteMeasure<T>, DiscreteMeasure<T>> marginals(const JointMeasure<T>& joint) {
    std::vector<Atom<T>> first, second;
    for (const auto& a : joint.atoms()) {
        first.push_back({a.s, a.weight});
        second.push_back({a.t, a.weight});
    }
    return {DiscreteMeasure<T>(std::move(first)), DiscreteMeasure<T>(std::move(second))};
}

template <class T>
struct Disintegration {
    DiscreteMeasure<T> marginal;
    MarkovKernel<T> kernel;
};

/// First marginal plus the fiberwise conditionals. Rows exist only where the
/// marginal is positive.
template <class T>
Disintegration<T> disintegrate(const JointMeasure<T>& joint) {
    require(joint.is_probability(), ErrorCode::NotProbability, "disintegrate: joint measure must be a probability");
    auto first = marginals(joint).first;
    std::vector<std::pair<T, DiscreteMeasure<T>>> rows;
    for (const auto& m : first.atoms()) {
        std::vector<Atom<T>> fiber;
        for (const auto& a : joint.atoms())
            if (ScalarTraits<T>::same_point(a.s, m.point)) fiber.push_back({a.t, T(a.weight / m.weight)});
        rows.emplace_back(m.point, DiscreteMeasure<T>(std::move(fiber)));
    }
    if constexpr (!ScalarTraits<T>::exact) {
        // fiber sums drift from 1 by roundoff in double mode
        for (auto& [s, row] : rows) row = row.scaled(1.0 / row.mass());
    }
    return {std::move(first), MarkovKernel<T>(std::move(rows))};
}

/// Image of a joint measure under g(s, t).
template <class T, class F>
DiscreteMeasure<T> pushforward_joint(const JointMeasure<T>& joint, F&& g) {
    std::vector<Atom<T>> out;
    for (const auto& a : joint.atoms()) out.push_back({T(g(a.s, a.t)), a.weight});
    return DiscreteMeasure<T>(std::move(out));
}

}  // namespace oplab
