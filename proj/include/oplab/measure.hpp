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
#include <functional>
#include <map>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include "oplab/borel_set.hpp"
#include "oplab/errors.hpp"
#include "oplab/rational.hpp"

namespace oplab {

template <class T>
struct Atom {
    T point;
    T weight;
    bool operator==(const Atom&) const = default;
};

/// Finite-support nonnegative measure on the real line.
///
/// Atoms are kept sorted by point with strictly positive weights; zero-weight
/// atoms are dropped at construction, so `support()` is the atom list. In
/// double mode points within ScalarTraits<double>::point_tolerance of the
/// first point of a run are merged into it.
template <class T>
class DiscreteMeasure {
public:
    using Traits = ScalarTraits<T>;

    DiscreteMeasure() : mass_(Traits::zero()) {}

    explicit DiscreteMeasure(std::vector<Atom<T>> atoms) : atoms_(std::move(atoms)), mass_(Traits::zero()) {
        normalize_atoms();
    }

    static DiscreteMeasure dirac(T point, T weight = Traits::one()) {
        return DiscreteMeasure({Atom<T>{std::move(point), std::move(weight)}});
    }

    const std::vector<Atom<T>>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const T& mass() const { return mass_; }
    bool is_probability() const { return Traits::is_one(mass_); }

    std::vector<T> support() const {
        std::vector<T> pts;
        pts.reserve(atoms_.size());
        for (const auto& a : atoms_) pts.push_back(a.point);
        return pts;
    }

    /// Position of the atom matching `x` under the mode's point equality.
    std::optional<std::size_t> find(const T& x) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                   [](const Atom<T>& a, const T& v) { return a.point < v; });
        if (it != atoms_.end() && Traits::same_point(it->point, x)) return static_cast<std::size_t>(it - atoms_.begin());
        if (it != atoms_.begin() && Traits::same_point(std::prev(it)->point, x))
            return static_cast<std::size_t>(std::prev(it) - atoms_.begin());
        return std::nullopt;
    }

    bool in_support(const T& x) const { return find(x).has_value(); }

    T weight_at(const T& x) const {
        auto i = find(x);
        return i ? atoms_[*i].weight : Traits::zero();
    }

    T measure_of(const BorelSet<T>& set) const {
        T total = Traits::zero();
        for (const auto& a : atoms_)
            if (set.contains(a.point)) total += a.weight;
        return total;
    }

    DiscreteMeasure restricted(const BorelSet<T>& set) const {
        std::vector<Atom<T>> kept;
        for (const auto& a : atoms_)
            if (set.contains(a.point)) kept.push_back(a);
        return DiscreteMeasure(std::move(kept));
    }

    DiscreteMeasure scaled(const T& factor) const {
        std::vector<Atom<T>> out;
        out.reserve(atoms_.size());
        for (const auto& a : atoms_) out.push_back({a.point, T(a.weight * factor)});
        return DiscreteMeasure(std::move(out));
    }

    /// Integral of f against the measure.
    T integrate(const std::function<T(const T&)>& f) const {
        T total = Traits::zero();
        for (const auto& a : atoms_) total += f(a.point) * a.weight;
        return total;
    }

    friend DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b) {
        std::vector<Atom<T>> all = a.atoms_;
        all.insert(all.end(), b.atoms_.begin(), b.atoms_.end());
        return DiscreteMeasure(std::move(all));
    }

    bool operator==(const DiscreteMeasure& other) const { return atoms_ == other.atoms_; }

private:
    void normalize_atoms() {
        for (auto& a : atoms_) {
            Traits::canonicalize(a.point);
            Traits::canonicalize(a.weight);
            if constexpr (!Traits::exact) {
                require(std::isfinite(a.point) && std::isfinite(a.weight), ErrorCode::InvalidArgument,
                        "non-finite atom");
                if (a.weight < 0 && a.weight >= -Traits::mass_tolerance) a.weight = 0;
            }
            require(!(a.weight < 0), ErrorCode::InvalidArgument, "negative atom weight " + to_string(a.weight));
        }
        std::stable_sort(atoms_.begin(), atoms_.end(), [](const Atom<T>& x, const Atom<T>& y) { return x.point < y.point; });
        std::vector<Atom<T>> merged;
        merged.reserve(atoms_.size());
        for (auto& a : atoms_) {
            if (!merged.empty() && Traits::same_point(merged.back().point, a.point)) {
                merged.back().weight += a.weight;
            } else {
                merged.push_back(std::move(a));
            }
        }
        std::erase_if(merged, [](const Atom<T>& a) { return Traits::is_zero(a.weight); });
        atoms_ = std::move(merged);
        mass_ = Traits::zero();
        for (const auto& a : atoms_) mass_ += a.weight;
    }

    std::vector<Atom<T>> atoms_;
    T mass_;
};

using RationalMeasure = DiscreteMeasure<Rational>;
using RealMeasure = DiscreteMeasure<double>;

template <class To, class From>
DiscreteMeasure<To> convert(const DiscreteMeasure<From>& m) {
    std::vector<Atom<To>> out;
    for (const auto& a : m.atoms()) {
        if constexpr (std::is_same_v<To, double>) {
            out.push_back({to_double(a.point), to_double(a.weight)});
        } else {
            out.push_back({ScalarTraits<To>::from_double(to_double(a.point)), ScalarTraits<To>::from_double(to_double(a.weight))});
        }
    }
    return DiscreteMeasure<To>(std::move(out));
}

/// Atomwise comparison with absolute tolerance on points and weights.
template <class T>
bool approx_equal(const DiscreteMeasure<T>& a, const DiscreteMeasure<T>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(to_double(a.atoms()[i].point) - to_double(b.atoms()[i].point)) > tol) return false;
        if (std::abs(to_double(a.atoms()[i].weight) - to_double(b.atoms()[i].weight)) > tol) return false;
    }
    return true;
}

template <class T>
T measure_of(const DiscreteMeasure<T>& mu, const BorelSet<T>& set) {
    return mu.measure_of(set);
}

template <class T>
void require_probability(const DiscreteMeasure<T>& mu, const char* what) {
    require(mu.is_probability(), ErrorCode::NotProbability,
            std::string(what) + " must be a probability measure (mass " + to_string(mu.mass()) + ")");
}

/// Image measure under a partial map; nullopt marks a point outside the
/// map's domain.
template <class T>
DiscreteMeasure<T> pushforward(const DiscreteMeasure<T>& mu,
                               const std::type_identity_t<std::function<std::optional<T>(const T&)>>& f) {
    std::vector<Atom<T>> out;
    out.reserve(mu.size());
    for (const auto& a : mu.atoms()) {
        auto image = f(a.point);
        require(image.has_value(), ErrorCode::DomainError, "map undefined at atom " + to_string(a.point));
        out.push_back({std::move(*image), a.weight});
    }
    return DiscreteMeasure<T>(std::move(out));
}

template <class T, class F>
    requires std::is_invocable_r_v<T, F, const T&>
DiscreteMeasure<T> pushforward(const DiscreteMeasure<T>& mu, F&& f) {
    return pushforward<T>(mu, std::function<std::optional<T>(const T&)>(
                                  [&f](const T& x) -> std::optional<T> { return T(f(x)); }));
}

/// Lookup-table map; points missing from the table are outside the domain.
template <class T>
DiscreteMeasure<T> pushforward(const DiscreteMeasure<T>& mu, const std::map<T, T>& table) {
    return pushforward<T>(mu, std::function<std::optional<T>(const T&)>([&table](const T& x) -> std::optional<T> {
                               auto it = table.find(x);
                               if (it == table.end()) return std::nullopt;
                               return it->second;
                           }));
}

template <class T>
T mean(const DiscreteMeasure<T>& mu) {
    require_probability(mu, "mean: measure");
    T total = ScalarTraits<T>::zero();
    for (const auto& a : mu.atoms()) total += a.point * a.weight;
    return total;
}

template <class T>
T variance(const DiscreteMeasure<T>& mu) {
    T m = mean(mu);
    T total = ScalarTraits<T>::zero();
    for (const auto& a : mu.atoms()) total += (a.point - m) * (a.point - m) * a.weight;
    return total;
}

template <class T>
DiscreteMeasure<T> convolve(const DiscreteMeasure<T>& mu, const DiscreteMeasure<T>& nu) {
    require_probability(mu, "convolve: left measure");
    require_probability(nu, "convolve: right measure");
    std::vector<Atom<T>> out;
    out.reserve(mu.size() * nu.size());
    for (const auto& a : mu.atoms())
        for (const auto& b : nu.atoms()) out.push_back({T(a.point + b.point), T(a.weight * b.weight)});
    return DiscreteMeasure<T>(std::move(out));
}

template <class T>
struct LebesgueDecomposition {
    DiscreteMeasure<T> absolutely_continuous;
    DiscreteMeasure<T> singular;
    /// mass of the absolutely continuous part
    T chi;
    /// Radon-Nikodym derivative of the absolutely continuous part, one entry
    /// per atom of the reference measure.
    std::vector<std::pair<T, T>> density;
};

/// Splits nu into a part carried by supp(reference) and a part carried off it.
template <class T>
LebesgueDecomposition<T> lebesgue_decompose(const DiscreteMeasure<T>& nu, const DiscreteMeasure<T>& reference) {
    std::vector<Atom<T>> ac, sing;
    for (const auto& a : nu.atoms()) {
        if (reference.in_support(a.point)) {
            ac.push_back(a);
        } else {
            sing.push_back(a);
        }
    }
    LebesgueDecomposition<T> out{DiscreteMeasure<T>(std::move(ac)), DiscreteMeasure<T>(std::move(sing)),
                                 ScalarTraits<T>::zero(), {}};
    out.chi = out.absolutely_continuous.mass();
    for (const auto& r : reference.atoms())
        out.density.emplace_back(r.point, T(out.absolutely_continuous.weight_at(r.point) / r.weight));
    return out;
}

/// Conditional measure given the event `given`.
template <class T>
DiscreteMeasure<T> bayes_condition(const DiscreteMeasure<T>& mu, const BorelSet<T>& given) {
    T denom = mu.measure_of(given);
    require(!ScalarTraits<T>::is_zero(denom), ErrorCode::ConditioningOnNull, "conditioning event has zero measure");
    return mu.restricted(given).scaled(T(ScalarTraits<T>::one() / denom));
}

}  // namespace oplab
