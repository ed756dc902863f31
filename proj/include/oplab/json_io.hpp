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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oplab/algebra_bridge.hpp"
#include "oplab/borel_set.hpp"
#include "oplab/kolmogorov.hpp"
#include "oplab/measure.hpp"
#include "oplab/spectral.hpp"
#include "oplab/tomography.hpp"

namespace oplab::io {

using nlohmann::json;

/// Parses JSON text; syntax errors become ParseError "name:line:col: ...".
json parse_json(const std::string& text, const std::string& name);
json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

[[noreturn]] void schema_error(const std::string& path, const std::string& what);

/// Child lookup with a path-qualified error when missing.
const json& field(const json& j, const std::string& key, const std::string& path);
const json* optional_field(const json& j, const std::string& key);
std::string child_path(const std::string& path, const std::string& key);
std::string child_path(const std::string& path, std::size_t index);

std::string get_string(const json& j, const std::string& path);
double get_double(const json& j, const std::string& path);
std::uint64_t get_uint(const json& j, const std::string& path);
std::int64_t get_int(const json& j, const std::string& path);
const json& get_array(const json& j, const std::string& path);
const json& get_object(const json& j, const std::string& path);

/// Numbers, decimal strings and "p/q" strings. In rational mode JSON numbers
/// are read through their shortest decimal form, so 0.1 is exactly 1/10.
template <class T>
T get_scalar(const json& j, const std::string& path) {
    if (j.is_number_integer()) return T(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number()) return ScalarTraits<T>::from_double(j.get<double>());
    if (j.is_string()) {
        try {
            Rational r = parse_rational(j.get<std::string>());
            if constexpr (ScalarTraits<T>::exact) {
                return r;
            } else {
                return r.get_d();
            }
        } catch (const Error& e) {
            schema_error(path, e.detail());
        }
    }
    schema_error(path, "expected a number or a numeric string");
}

/// A scalar, or "-inf"/"inf"/null for an unbounded end.
template <class T>
std::optional<T> get_bound(const json& j, const std::string& path) {
    if (j.is_null()) return std::nullopt;
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "inf" || s == "-inf" || s == "+inf") return std::nullopt;
    }
    return get_scalar<T>(j, path);
}

/// {"atoms": [[point, weight], ...]}
template <class T>
DiscreteMeasure<T> measure_from_json(const json& j, const std::string& path) {
    const auto& atoms = get_array(field(j, "atoms", path), child_path(path, "atoms"));
    std::vector<Atom<T>> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        auto p = child_path(child_path(path, "atoms"), i);
        if (!atoms[i].is_array() || atoms[i].size() != 2) schema_error(p, "expected [point, weight]");
        out.push_back({get_scalar<T>(atoms[i][0], child_path(p, 0)), get_scalar<T>(atoms[i][1], child_path(p, 1))});
    }
    try {
        return DiscreteMeasure<T>(std::move(out));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) schema_error(path, e.detail());
        throw;
    }
}

template <class T>
json measure_to_json(const DiscreteMeasure<T>& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms()) atoms.push_back({to_string(a.point), to_string(a.weight)});
    return {{"atoms", atoms}};
}

/// {"intervals": [[lo, hi], ...], "closed": [[lo, hi], ...], "points": [...]}
/// with half-open intervals [lo, hi).
template <class T>
BorelSet<T> borel_set_from_json(const json& j, const std::string& path) {
    get_object(j, path);
    std::vector<Interval<T>> intervals;
    std::vector<T> points;
    BorelSet<T> extra;
    if (const auto* iv = optional_field(j, "intervals")) {
        const auto& arr = get_array(*iv, child_path(path, "intervals"));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto p = child_path(child_path(path, "intervals"), i);
            if (!arr[i].is_array() || arr[i].size() != 2) schema_error(p, "expected [lo, hi]");
            Interval<T> in{get_bound<T>(arr[i][0], child_path(p, 0)), get_bound<T>(arr[i][1], child_path(p, 1))};
            if (in.lo && in.hi && !(*in.lo < *in.hi)) schema_error(p, "interval requires lo < hi");
            intervals.push_back(in);
        }
    }
    if (const auto* cl = optional_field(j, "closed")) {
        const auto& arr = get_array(*cl, child_path(path, "closed"));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto p = child_path(child_path(path, "closed"), i);
            if (!arr[i].is_array() || arr[i].size() != 2) schema_error(p, "expected [lo, hi]");
            T lo = get_scalar<T>(arr[i][0], child_path(p, 0)), hi = get_scalar<T>(arr[i][1], child_path(p, 1));
            if (hi < lo) schema_error(p, "closed interval requires lo <= hi");
            extra = extra.unite(BorelSet<T>::closed(lo, hi));
        }
    }
    if (const auto* pts = optional_field(j, "points")) {
        const auto& arr = get_array(*pts, child_path(path, "points"));
        for (std::size_t i = 0; i < arr.size(); ++i)
            points.push_back(get_scalar<T>(arr[i], child_path(child_path(path, "points"), i)));
    }
    return BorelSet<T>(std::move(intervals), std::move(points)).unite(extra);
}

/// {"window": [a, b], "cells": [set, ...]}, {"dyadic": {"window": [a, b],
/// "depth": k}} or {"separating": [points]}.
template <class T>
Partition<T> partition_from_json(const json& j, const std::string& path) {
    get_object(j, path);
    auto window = [&](const json& w, const std::string& p) {
        if (!w.is_array() || w.size() != 2) schema_error(p, "expected [lo, hi]");
        return std::pair<T, T>{get_scalar<T>(w[0], child_path(p, 0)), get_scalar<T>(w[1], child_path(p, 1))};
    };
    try {
        if (const auto* d = optional_field(j, "dyadic")) {
            auto p = child_path(path, "dyadic");
            auto [lo, hi] = window(field(*d, "window", p), child_path(p, "window"));
            return Partition<T>::dyadic(lo, hi, static_cast<unsigned>(get_uint(field(*d, "depth", p), child_path(p, "depth"))));
        }
        if (const auto* s = optional_field(j, "separating")) {
            auto p = child_path(path, "separating");
            const auto& arr = get_array(*s, p);
            std::vector<T> pts;
            for (std::size_t i = 0; i < arr.size(); ++i) pts.push_back(get_scalar<T>(arr[i], child_path(p, i)));
            return Partition<T>::separating(std::move(pts));
        }
        auto [lo, hi] = window(field(j, "window", path), child_path(path, "window"));
        const auto& arr = get_array(field(j, "cells", path), child_path(path, "cells"));
        std::vector<BorelSet<T>> cells;
        for (std::size_t i = 0; i < arr.size(); ++i)
            cells.push_back(borel_set_from_json<T>(arr[i], child_path(child_path(path, "cells"), i)));
        return Partition<T>(lo, hi, std::move(cells));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) schema_error(path, e.detail());
        throw;
    }
}

/// Rows of entries; an entry is a real number or [re, im].
ComplexMatrix matrix_from_json(const json& j, const std::string& path);
ComplexVector vector_from_json(const json& j, const std::string& path);
json matrix_to_json(const ComplexMatrix& m);

HermitianObservable observable_from_json(const json& j, const std::string& path);
DensityState state_from_json(const json& j, const std::string& path);

/// {"observables": {label: matrix}, "states": {label: matrix},
///  "suitability": "all" | [[state, observable], ...]}
LabSystem lab_system_from_json(const json& j, const std::string& path);
AlgebraicRelations relations_from_json(const json& j, const std::string& path);
/// {"identity": true} or {"observables": {...}, "states": {...}}
Algebraization algebraization_from_json(const json& j, const LabSystem& system, const std::string& path);

json validation_to_json(const ValidationReport& report);

struct KolmogorovProblem {
    std::vector<OutcomeSpace> spaces;
    std::vector<ProbabilityConstraint> constraints;
};

/// {"spaces": [{"name", "outcomes"}], "constraints": [{"type": "marginal" |
/// "conditional" | "expectation", ...}]}
KolmogorovProblem kolmogorov_problem_from_json(const json& in, const std::string& path);

/// {"dim", "observables", "expectations" | "true_state", "frame" | "frame_from"}
ReconstructionProblem reconstruction_problem_from_json(const json& in, const std::string& path);

/// Maps a JSON value that may be a file reference to the object it names.
using JsonResolver = std::function<json(const json&)>;

/// {"system", "algebraization", "relations"?, "center"?, "embedding"?}
ValidationReport validation_from_json(const json& in, const std::string& path, const JsonResolver& resolve);

}  // namespace oplab::io
