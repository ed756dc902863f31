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

#include "oplab/json_io.hpp"

#include "oplab/tomography.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace oplab::io {

json parse_json(const std::string& text, const std::string& name) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        auto pos = what.find("]: ");
        fail(ErrorCode::ParseError, name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                                        (pos == std::string::npos ? what : what.substr(pos + 3)));
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::filesystem::path& path) { return parse_json(read_text_file(path), path.string()); }

void schema_error(const std::string& path, const std::string& what) {
    fail(ErrorCode::ParseError, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

std::string child_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string child_path(const std::string& path, std::size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema_error(child_path(path, key), "missing field");
    return *it;
}

const json* optional_field(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

double get_double(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>()).get_d();
        } catch (const Error& e) {
            schema_error(path, e.detail());
        }
    }
    schema_error(path, "expected a number");
}

std::uint64_t get_uint(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    schema_error(path, "expected a nonnegative integer");
}

std::int64_t get_int(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    schema_error(path, "expected an integer");
}

const json& get_array(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array");
    return j;
}

const json& get_object(const json& j, const std::string& path) {
    if (!j.is_object()) schema_error(path, "expected an object");
    return j;
}

namespace {

Complex entry(const json& e, const std::string& path) {
    if (e.is_array()) {
        if (e.size() != 2) schema_error(path, "expected [re, im]");
        return {get_double(e[0], child_path(path, 0)), get_double(e[1], child_path(path, 1))};
    }
    return {get_double(e, path), 0.0};
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
    const auto& rows = get_array(j, path);
    if (rows.empty()) schema_error(path, "empty matrix");
    const std::size_t n = rows.size();
    ComplexMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        auto rp = child_path(path, r);
        const auto& row = get_array(rows[r], rp);
        if (row.size() != n) schema_error(rp, "expected " + std::to_string(n) + " entries (square matrix)");
        for (std::size_t c = 0; c < n; ++c) m(r, c) = entry(row[c], child_path(rp, c));
    }
    return m;
}

ComplexVector vector_from_json(const json& j, const std::string& path) {
    const auto& arr = get_array(j, path);
    ComplexVector v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v(i) = entry(arr[i], child_path(path, i));
    return v;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (m(r, c).imag() == 0.0) {
                row.push_back(m(r, c).real());
            } else {
                row.push_back({m(r, c).real(), m(r, c).imag()});
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

// Library validation errors surface with the JSON path attached. Other codes
// (DimMismatch, ...) keep their own meaning.
template <class F>
auto at_path(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::DimMismatch) throw;
        fail(e.code(), path + ": " + e.detail());
    }
}

}  // namespace

HermitianObservable observable_from_json(const json& j, const std::string& path) {
    auto m = matrix_from_json(j, path);
    return at_path(path, [&] { return HermitianObservable(m); });
}

DensityState state_from_json(const json& j, const std::string& path) {
    auto m = matrix_from_json(j, path);
    return at_path(path, [&] { return DensityState(m); });
}

LabSystem lab_system_from_json(const json& j, const std::string& path) {
    std::map<std::string, HermitianObservable> obs;
    std::map<std::string, DensityState> states;
    auto op = child_path(path, "observables");
    for (const auto& [label, m] : get_object(field(j, "observables", path), op).items())
        obs.emplace(label, observable_from_json(m, child_path(op, label)));
    auto sp = child_path(path, "states");
    for (const auto& [label, m] : get_object(field(j, "states", path), sp).items())
        states.emplace(label, state_from_json(m, child_path(sp, label)));
    std::set<std::pair<std::string, std::string>> suit;
    const json* s = optional_field(j, "suitability");
    auto up = child_path(path, "suitability");
    if (s == nullptr || (s->is_string() && s->get<std::string>() == "all")) {
        for (const auto& [sl, _] : states)
            for (const auto& [ol, __] : obs) suit.emplace(sl, ol);
    } else {
        const auto& arr = get_array(*s, up);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto p = child_path(up, i);
            if (!arr[i].is_array() || arr[i].size() != 2) schema_error(p, "expected [state, observable]");
            suit.emplace(get_string(arr[i][0], child_path(p, 0)), get_string(arr[i][1], child_path(p, 1)));
        }
    }
    return at_path(path, [&] { return LabSystem(std::move(obs), std::move(states), std::move(suit)); });
}

AlgebraicRelations relations_from_json(const json& j, const std::string& path) {
    AlgebraicRelations rel;
    if (j.is_null()) return rel;
    get_object(j, path);
    auto triples = [&](const char* key, auto&& take) {
        const json* a = optional_field(j, key);
        if (!a) return;
        auto p = child_path(path, key);
        const auto& arr = get_array(*a, p);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto ip = child_path(p, i);
            if (!arr[i].is_array() || arr[i].size() != 3) schema_error(ip, "expected a 3-element array");
            take(arr[i], ip);
        }
    };
    if (const json* c = optional_field(j, "compatible")) {
        auto p = child_path(path, "compatible");
        const auto& arr = get_array(*c, p);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto ip = child_path(p, i);
            if (!arr[i].is_array() || arr[i].size() != 2) schema_error(ip, "expected [a, b]");
            rel.compatible.emplace_back(get_string(arr[i][0], child_path(ip, 0)),
                                        get_string(arr[i][1], child_path(ip, 1)));
        }
    }
    triples("powers", [&](const json& t, const std::string& p) {
        rel.powers.push_back({get_string(t[0], child_path(p, 0)), static_cast<int>(get_int(t[1], child_path(p, 1))),
                              get_string(t[2], child_path(p, 2))});
    });
    triples("sums", [&](const json& t, const std::string& p) {
        rel.sums.push_back({get_string(t[0], child_path(p, 0)), get_string(t[1], child_path(p, 1)),
                            get_string(t[2], child_path(p, 2))});
    });
    triples("scalings", [&](const json& t, const std::string& p) {
        rel.scalings.push_back({get_string(t[0], child_path(p, 0)), get_double(t[1], child_path(p, 1)),
                                get_string(t[2], child_path(p, 2))});
    });
    triples("products", [&](const json& t, const std::string& p) {
        rel.products.push_back({get_string(t[0], child_path(p, 0)), get_string(t[1], child_path(p, 1)),
                                get_string(t[2], child_path(p, 2))});
    });
    triples("expectations", [&](const json& t, const std::string& p) {
        rel.expectations[{get_string(t[0], child_path(p, 0)), get_string(t[1], child_path(p, 1))}] =
            get_double(t[2], child_path(p, 2));
    });
    if (const json* e = optional_field(j, "extremal_states")) {
        auto p = child_path(path, "extremal_states");
        const auto& arr = get_array(*e, p);
        for (std::size_t i = 0; i < arr.size(); ++i) rel.extremal_states.push_back(get_string(arr[i], child_path(p, i)));
    }
    return rel;
}

Algebraization algebraization_from_json(const json& j, const LabSystem& system, const std::string& path) {
    get_object(j, path);
    if (const json* id = optional_field(j, "identity"); id && id->is_boolean() && id->get<bool>())
        return Algebraization::identity(system);
    std::map<std::string, HermitianObservable> obs;
    std::map<std::string, DensityState> states;
    auto op = child_path(path, "observables");
    if (const json* o = optional_field(j, "observables"))
        for (const auto& [label, m] : get_object(*o, op).items())
            obs.emplace(label, observable_from_json(m, child_path(op, label)));
    auto sp = child_path(path, "states");
    if (const json* s = optional_field(j, "states"))
        for (const auto& [label, m] : get_object(*s, sp).items())
            states.emplace(label, state_from_json(m, child_path(sp, label)));
    return at_path(path, [&] { return Algebraization(system, std::move(obs), std::move(states)); });
}

json validation_to_json(const ValidationReport& report) {
    json conds = json::array();
    for (const auto& c : report.conditions)
        conds.push_back({{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}, {"residual", c.residual}});
    return {{"conditions", conds}, {"pass", report.pass()}, {"purity_losses", report.purity_losses}};
}

static Event event_from_json(const json& j, const std::string& path, const std::vector<OutcomeSpace>& spaces) {
    Event e;
    for (const auto& [name, v] : get_object(j, path).items()) {
        auto it = std::find_if(spaces.begin(), spaces.end(), [&](const OutcomeSpace& s) { return s.name == name; });
        if (it == spaces.end()) schema_error(child_path(path, name), "unknown observable");
        e.emplace_back(static_cast<std::size_t>(it - spaces.begin()), get_scalar<Rational>(v, child_path(path, name)));
    }
    return e;
}

KolmogorovProblem kolmogorov_problem_from_json(const json& in, const std::string& path) {
    std::vector<OutcomeSpace> spaces;
    const auto& sj = get_array(field(in, "spaces", path), child_path(path, "spaces"));
    for (std::size_t i = 0; i < sj.size(); ++i) {
        auto p = child_path(child_path(path, "spaces"), i);
        OutcomeSpace s{get_string(field(sj[i], "name", p), child_path(p, "name")), {}};
        const auto& oc = get_array(field(sj[i], "outcomes", p), child_path(p, "outcomes"));
        for (std::size_t k = 0; k < oc.size(); ++k)
            s.outcomes.push_back(get_scalar<Rational>(oc[k], child_path(child_path(p, "outcomes"), k)));
        spaces.push_back(std::move(s));
    }
    std::vector<ProbabilityConstraint> constraints;
    const auto& cj = get_array(field(in, "constraints", path), child_path(path, "constraints"));
    for (std::size_t i = 0; i < cj.size(); ++i) {
        auto p = child_path(child_path(path, "constraints"), i);
        std::string label = "c" + std::to_string(i + 1);
        if (const json* l = optional_field(cj[i], "label")) label = get_string(*l, child_path(p, "label"));
        auto type = get_string(field(cj[i], "type", p), child_path(p, "type"));
        if (type == "marginal") {
            constraints.push_back({label, MarginalConstraint{
                event_from_json(field(cj[i], "event", p), child_path(p, "event"), spaces),
                get_scalar<Rational>(field(cj[i], "probability", p), child_path(p, "probability"))}});
        } else if (type == "conditional") {
            constraints.push_back({label, ConditionalConstraint{
                event_from_json(field(cj[i], "event", p), child_path(p, "event"), spaces),
                event_from_json(field(cj[i], "given", p), child_path(p, "given"), spaces),
                get_scalar<Rational>(field(cj[i], "probability", p), child_path(p, "probability"))}});
        } else if (type == "expectation") {
            ExpectationConstraint ec;
            auto op = child_path(p, "observables");
            const auto& names = get_array(field(cj[i], "observables", p), op);
            for (std::size_t k = 0; k < names.size(); ++k) {
                auto nm = get_string(names[k], child_path(op, k));
                auto it = std::find_if(spaces.begin(), spaces.end(), [&](const OutcomeSpace& s) { return s.name == nm; });
                if (it == spaces.end()) schema_error(child_path(op, k), "unknown observable '" + nm + "'");
                ec.observables.push_back(static_cast<std::size_t>(it - spaces.begin()));
            }
            ec.value = get_scalar<Rational>(field(cj[i], "value", p), child_path(p, "value"));
            constraints.push_back({label, ec});
        } else {
            schema_error(child_path(p, "type"), "expected marginal, conditional or expectation");
        }
    }
    return {std::move(spaces), std::move(constraints)};
}

ReconstructionProblem reconstruction_problem_from_json(const json& in, const std::string& path) {
    ReconstructionProblem prob;
    prob.dim = get_uint(field(in, "dim", path), child_path(path, "dim"));
    const auto& oj = get_array(field(in, "observables", path), child_path(path, "observables"));
    for (std::size_t i = 0; i < oj.size(); ++i)
        prob.observables.push_back(observable_from_json(oj[i], child_path(child_path(path, "observables"), i)));
    if (const json* y = optional_field(in, "expectations")) {
        const auto& arr = get_array(*y, child_path(path, "expectations"));
        for (std::size_t i = 0; i < arr.size(); ++i)
            prob.expectations.push_back(get_double(arr[i], child_path(child_path(path, "expectations"), i)));
    } else {
        auto truth = state_from_json(field(in, "true_state", path), child_path(path, "true_state"));
        require(truth.dim() == prob.dim, ErrorCode::DimMismatch, "true_state dimension differs from dim");
        for (const auto& x : prob.observables) {
            require(x.dim() == prob.dim, ErrorCode::DimMismatch, "observable dimension differs from dim");
            prob.expectations.push_back(x.expectation(truth));
        }
    }
    if (const json* f = optional_field(in, "frame")) {
        const auto& arr = get_array(*f, child_path(path, "frame"));
        for (std::size_t i = 0; i < arr.size(); ++i)
            prob.frame.push_back(vector_from_json(arr[i], child_path(child_path(path, "frame"), i)));
    } else {
        auto p = child_path(path, "frame_from");
        const auto& arr = get_array(field(in, "frame_from", path), p);
        std::vector<HermitianObservable> family;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto k = get_uint(arr[i], child_path(p, i));
            if (k >= prob.observables.size()) schema_error(child_path(p, i), "observable index out of range");
            family.push_back(prob.observables[k]);
        }
        auto basis = joint_eigenbasis(family);
        for (Eigen::Index c = 0; c < basis.cols(); ++c) prob.frame.push_back(basis.col(c));
    }
    return prob;
}

ValidationReport validation_from_json(const json& in, const std::string& path, const JsonResolver& resolve) {
    json sys_json = resolve(field(in, "system", path));
    json alg_json = resolve(field(in, "algebraization", path));
    auto system = lab_system_from_json(sys_json, child_path(path, "system"));
    auto alg = algebraization_from_json(alg_json, system, child_path(path, "algebraization"));
    AlgebraicRelations rel;
    if (const json* r = optional_field(sys_json, "relations")) rel = relations_from_json(*r, child_path(child_path(path, "system"), "relations"));
    if (const json* r = optional_field(in, "relations")) rel = relations_from_json(resolve(*r), child_path(path, "relations"));

    ValidationReport report;
    report.conditions = arba_validate(alg, rel);
    if (const json* c = optional_field(in, "center")) {
        std::vector<std::string> center;
        const auto& arr = get_array(*c, child_path(path, "center"));
        for (std::size_t i = 0; i < arr.size(); ++i) center.push_back(get_string(arr[i], child_path(child_path(path, "center"), i)));
        for (auto& cr : center_check(alg, rel, center)) report.conditions.push_back(std::move(cr));
    }
    if (const json* e = optional_field(in, "embedding")) {
        std::map<std::string, std::vector<std::string>> families;
        if (e->is_object()) {
            for (const auto& [label, states] : e->items()) {
                auto p = child_path(child_path(path, "embedding"), label);
                const auto& arr = get_array(states, p);
                for (std::size_t i = 0; i < arr.size(); ++i) families[label].push_back(get_string(arr[i], child_path(p, i)));
            }
        }
        if (!e->is_boolean() || e->get<bool>()) {
            auto emb = embedding_check(alg, families);
            report.conditions.push_back(emb.embedding);
            report.conditions.push_back(emb.point_spectrum);
        }
    }
    report.purity_losses = purity_losses(alg, rel.extremal_states);

    return report;
}

}  // namespace oplab::io
