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
#include <optional>
#include <string>
#include <vector>

#include "oplab/errors.hpp"
#include "oplab/rational.hpp"

namespace oplab {

/// Half-open interval [lo, hi). An absent bound is infinite.
template <class T>
struct Interval {
    std::optional<T> lo;
    std::optional<T> hi;

    bool contains(const T& x) const { return (!lo || !(x < *lo)) && (!hi || x < *hi); }
    bool operator==(const Interval&) const = default;
};

namespace detail {

// Ordering helpers for optional bounds: an absent lower bound is -inf and an
// absent upper bound is +inf.
template <class T>
bool lo_less(const std::optional<T>& a, const std::optional<T>& b) {
    if (!a) return static_cast<bool>(b);
    if (!b) return false;
    return *a < *b;
}

template <class T>
bool hi_less(const std::optional<T>& a, const std::optional<T>& b) {
    if (!b) return static_cast<bool>(a);
    if (!a) return false;
    return *a < *b;
}

// lower bound `lo` lies at or before upper bound `hi`
template <class T>
bool lo_le_hi(const std::optional<T>& lo, const std::optional<T>& hi) {
    if (!lo || !hi) return true;
    return !(*hi < *lo);
}

}  // namespace detail

/// A finite union of half-open intervals and isolated points, held in a
/// canonical form: intervals sorted, disjoint and non-touching, points sorted
/// and outside every interval. Two sets with the same points compare equal.
template <class T>
class BorelSet {
public:
    BorelSet() = default;

    BorelSet(std::vector<Interval<T>> intervals, std::vector<T> points)
        : intervals_(std::move(intervals)), points_(std::move(points)) {
        canonicalize();
    }

    static BorelSet real_line() { return BorelSet({Interval<T>{std::nullopt, std::nullopt}}, {}); }
    static BorelSet point(T x) { return BorelSet({}, {std::move(x)}); }
    static BorelSet points(std::vector<T> xs) { return BorelSet({}, std::move(xs)); }
    static BorelSet half_open(T lo, T hi) { return BorelSet({Interval<T>{std::move(lo), std::move(hi)}}, {}); }
    static BorelSet at_least(T lo) { return BorelSet({Interval<T>{std::move(lo), std::nullopt}}, {}); }
    static BorelSet below(T hi) { return BorelSet({Interval<T>{std::nullopt, std::move(hi)}}, {}); }
    /// [lo, hi]
    static BorelSet closed(T lo, T hi) {
        T top = hi;
        return BorelSet({Interval<T>{std::move(lo), std::move(hi)}}, {std::move(top)});
    }

    const std::vector<Interval<T>>& intervals() const { return intervals_; }
    const std::vector<T>& isolated_points() const { return points_; }

    bool empty() const { return intervals_.empty() && points_.empty(); }

    bool contains(const T& x) const {
        for (const auto& iv : intervals_)
            if (iv.contains(x)) return true;
        return std::binary_search(points_.begin(), points_.end(), x);
    }

    BorelSet unite(const BorelSet& other) const {
        auto ivs = intervals_;
        ivs.insert(ivs.end(), other.intervals_.begin(), other.intervals_.end());
        auto pts = points_;
        pts.insert(pts.end(), other.points_.begin(), other.points_.end());
        return BorelSet(std::move(ivs), std::move(pts));
    }

    BorelSet intersect(const BorelSet& other) const {
        std::vector<Interval<T>> ivs;
        for (const auto& a : intervals_) {
            for (const auto& b : other.intervals_) {
                Interval<T> c{detail::lo_less(a.lo, b.lo) ? b.lo : a.lo, detail::hi_less(a.hi, b.hi) ? a.hi : b.hi};
                if (c.lo && c.hi && !(*c.lo < *c.hi)) continue;
                ivs.push_back(std::move(c));
            }
        }
        std::vector<T> pts;
        for (const auto& p : points_)
            if (other.contains(p)) pts.push_back(p);
        for (const auto& p : other.points_)
            if (contains(p)) pts.push_back(p);
        return BorelSet(std::move(ivs), std::move(pts));
    }

    bool disjoint_from(const BorelSet& other) const { return intersect(other).empty(); }

    bool operator==(const BorelSet&) const = default;

    std::string describe() const {
        std::string out;
        auto bound = [](const std::optional<T>& b, const char* inf) { return b ? to_string(*b) : std::string(inf); };
        for (const auto& iv : intervals_) {
            if (!out.empty()) out += " U ";
            out += "[" + bound(iv.lo, "-inf") + ", " + bound(iv.hi, "inf") + ")";
        }
        if (!points_.empty()) {
            if (!out.empty()) out += " U ";
            out += "{";
            for (std::size_t i = 0; i < points_.size(); ++i) {
                if (i) out += ", ";
                out += to_string(points_[i]);
            }
            out += "}";
        }
        return out.empty() ? "{}" : out;
    }

private:
    void canonicalize() {
        for (const auto& iv : intervals_)
            require(!(iv.lo && iv.hi && !(*iv.lo < *iv.hi)), ErrorCode::InvalidArgument, "interval requires lo < hi");
        std::sort(intervals_.begin(), intervals_.end(),
                  [](const Interval<T>& a, const Interval<T>& b) { return detail::lo_less(a.lo, b.lo); });
        std::vector<Interval<T>> merged;
        for (auto& iv : intervals_) {
            if (!merged.empty() && detail::lo_le_hi(iv.lo, merged.back().hi)) {
                if (detail::hi_less(merged.back().hi, iv.hi)) merged.back().hi = iv.hi;
            } else {
                merged.push_back(std::move(iv));
            }
        }
        intervals_ = std::move(merged);
        std::sort(points_.begin(), points_.end());
        points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
        std::erase_if(points_, [this](const T& p) {
            for (const auto& iv : intervals_)
                if (iv.contains(p)) return true;
            return false;
        });
    }

    std::vector<Interval<T>> intervals_;
    std::vector<T> points_;
};

/// Finite family of disjoint Borel sets together with the reference window
/// [lo, hi] it was built for.
template <class T>
struct Partition {
    T window_lo;
    T window_hi;
    std::vector<BorelSet<T>> cells;

    Partition(T lo, T hi, std::vector<BorelSet<T>> cs)
        : Partition(std::move(lo), std::move(hi), std::move(cs), Disjoint{}) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j)
                require(cells[i].disjoint_from(cells[j]), ErrorCode::InvalidArgument,
                        "partition cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
    }

    struct Disjoint {};

    /// Skips the pairwise overlap check; for constructions disjoint by design.
    Partition(T lo, T hi, std::vector<BorelSet<T>> cs, Disjoint)
        : window_lo(std::move(lo)), window_hi(std::move(hi)), cells(std::move(cs)) {
        require(!cells.empty(), ErrorCode::InvalidArgument, "partition needs at least one cell");
        require(!(window_hi < window_lo), ErrorCode::InvalidArgument, "partition window requires lo <= hi");
    }

    /// Index of the cell containing x, if any.
    std::optional<std::size_t> cell_of(const T& x) const {
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].contains(x)) return i;
        return std::nullopt;
    }

    /// 2^depth equal cells over [lo, hi]; the last cell is closed on the right.
    static Partition dyadic(const T& lo, const T& hi, unsigned depth) {
        require(lo < hi, ErrorCode::InvalidArgument, "dyadic partition requires lo < hi");
        require(depth <= 20, ErrorCode::InvalidArgument, "dyadic depth limited to 20");
        const std::size_t count = std::size_t{1} << depth;
        T width = (hi - lo) / T(static_cast<long>(count));
        std::vector<BorelSet<T>> cells;
        cells.reserve(count);
        T left = lo;
        for (std::size_t j = 0; j < count; ++j) {
            T right = (j + 1 == count) ? hi : T(lo + width * T(static_cast<long>(j + 1)));
            cells.push_back(j + 1 == count ? BorelSet<T>::closed(left, right) : BorelSet<T>::half_open(left, right));
            left = right;
        }
        return Partition(lo, hi, std::move(cells), Disjoint{});
    }

    /// One singleton cell per point.
    static Partition separating(std::vector<T> points) {
        require(!points.empty(), ErrorCode::InvalidArgument, "separating partition needs points");
        std::sort(points.begin(), points.end());
        points.erase(std::unique(points.begin(), points.end()), points.end());
        std::vector<BorelSet<T>> cells;
        for (const auto& p : points) cells.push_back(BorelSet<T>::point(p));
        return Partition(points.front(), points.back(), std::move(cells), Disjoint{});
    }
};

}  // namespace oplab
