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

#include "oplab/oplab.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <variant>

#include "oplab/ensembles.hpp"
#include "oplab/harness.hpp"
#include "oplab/information.hpp"
#include "oplab/json_io.hpp"
#include "oplab/kolmogorov.hpp"
#include "oplab/measure.hpp"
#include "oplab/spectral.hpp"
#include "oplab/tomography.hpp"

using oplab::io::json;

struct oplab_measure {
    std::variant<oplab::RationalMeasure, oplab::RealMeasure> m;
};
struct oplab_observable {
    oplab::HermitianObservable a;
};
struct oplab_state {
    oplab::DensityState rho;
};

namespace {

thread_local std::string last_error;

// Runs f, translating exceptions into a status and the thread's last error.
template <class F>
oplab_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return OPLAB_OK;
    } catch (const oplab::Error& e) {
        last_error = e.what();
        return static_cast<oplab_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return OPLAB_INTERNAL_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return OPLAB_INTERNAL_ERROR;
    }
}

void need(const void* p, const char* what) {
    oplab::require(p != nullptr, oplab::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

oplab::ComplexMatrix read_matrix(size_t dim, const double* re, const double* im) {
    need(re, "re");
    oplab::require(dim > 0, oplab::ErrorCode::InvalidArgument, "dimension must be positive");
    oplab::ComplexMatrix m(dim, dim);
    for (size_t r = 0; r < dim; ++r)
        for (size_t c = 0; c < dim; ++c) m(r, c) = {re[r * dim + c], im ? im[r * dim + c] : 0.0};
    return m;
}

// Same arithmetic on both operands, or InvalidArgument.
template <class F>
void with_pair(const oplab_measure* a, const oplab_measure* b, F&& f) {
    need(a, "measure");
    need(b, "measure");
    oplab::require(a->m.index() == b->m.index(), oplab::ErrorCode::InvalidArgument,
                   "cannot mix rational and double measures");
    std::visit([&](const auto& x) { f(x, std::get<std::decay_t<decltype(x)>>(b->m)); }, a->m);
}

json parse(const char* text, const char* name) {
    need(text, name);
    return oplab::io::parse_json(text, name);
}

}  // namespace

extern "C" {

const char* oplab_version(void) { return oplab::version_string(); }

const char* oplab_status_name(oplab_status status) {
    if (status == OPLAB_OK) return "Ok";
    if (status == OPLAB_INTERNAL_ERROR) return "InternalError";
    return oplab::error_code_name(static_cast<oplab::ErrorCode>(static_cast<int>(status)));
}

const char* oplab_last_error(void) { return last_error.c_str(); }

void oplab_string_free(char* s) { std::free(s); }

oplab_status oplab_measure_from_json(const char* text, int rational, oplab_measure** out) {
    return guarded([&] {
        need(out, "out");
        json j = parse(text, "measure");
        if (rational) {
            *out = new oplab_measure{oplab::io::measure_from_json<oplab::Rational>(j, "")};
        } else {
            *out = new oplab_measure{oplab::io::measure_from_json<double>(j, "")};
        }
    });
}

oplab_status oplab_measure_from_arrays(const double* points, const double* weights, size_t n, int rational,
                                       oplab_measure** out) {
    return guarded([&] {
        need(out, "out");
        if (n > 0) {
            need(points, "points");
            need(weights, "weights");
        }
        if (rational) {
            std::vector<oplab::Atom<oplab::Rational>> atoms;
            for (size_t i = 0; i < n; ++i)
                atoms.push_back({oplab::rational_from_double(points[i]), oplab::rational_from_double(weights[i])});
            *out = new oplab_measure{oplab::RationalMeasure(std::move(atoms))};
        } else {
            std::vector<oplab::Atom<double>> atoms;
            for (size_t i = 0; i < n; ++i) atoms.push_back({points[i], weights[i]});
            *out = new oplab_measure{oplab::RealMeasure(std::move(atoms))};
        }
    });
}

void oplab_measure_free(oplab_measure* m) { delete m; }

int oplab_measure_is_rational(const oplab_measure* m) { return m && m->m.index() == 0; }

size_t oplab_measure_size(const oplab_measure* m) {
    if (!m) return 0;
    return std::visit([](const auto& x) { return x.size(); }, m->m);
}

oplab_status oplab_measure_atom(const oplab_measure* m, size_t i, double* point, double* weight) {
    return guarded([&] {
        need(m, "measure");
        std::visit(
            [&](const auto& x) {
                oplab::require(i < x.size(), oplab::ErrorCode::InvalidArgument, "atom index out of range");
                if (point) *point = oplab::to_double(x.atoms()[i].point);
                if (weight) *weight = oplab::to_double(x.atoms()[i].weight);
            },
            m->m);
    });
}

oplab_status oplab_measure_to_json(const oplab_measure* m, char** out) {
    return guarded([&] {
        need(m, "measure");
        need(out, "out");
        *out = dup_string(std::visit([](const auto& x) { return oplab::io::measure_to_json(x).dump(); }, m->m));
    });
}

oplab_status oplab_measure_of(const oplab_measure* m, const char* set_json, double* value, char** exact) {
    return guarded([&] {
        need(m, "measure");
        json j = parse(set_json, "set");
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x.atoms()[0].point)>;
                T v = x.measure_of(oplab::io::borel_set_from_json<T>(j, ""));
                if (value) *value = oplab::to_double(v);
                if (exact) *exact = dup_string(oplab::to_string(v));
            },
            m->m);
    });
}

oplab_status oplab_measure_mean(const oplab_measure* m, double* value, char** exact) {
    return guarded([&] {
        need(m, "measure");
        std::visit(
            [&](const auto& x) {
                auto v = oplab::mean(x);
                if (value) *value = oplab::to_double(v);
                if (exact) *exact = dup_string(oplab::to_string(v));
            },
            m->m);
    });
}

oplab_status oplab_measure_convolve(const oplab_measure* a, const oplab_measure* b, oplab_measure** out) {
    return guarded([&] {
        need(out, "out");
        with_pair(a, b, [&](const auto& x, const auto& y) { *out = new oplab_measure{oplab::convolve(x, y)}; });
    });
}

oplab_status oplab_measure_lebesgue(const oplab_measure* nu, const oplab_measure* reference,
                                    oplab_measure** continuous, oplab_measure** singular, double* chi) {
    return guarded([&] {
        with_pair(nu, reference, [&](const auto& x, const auto& y) {
            auto d = oplab::lebesgue_decompose(x, y);
            if (chi) *chi = oplab::to_double(d.chi);
            if (continuous) *continuous = new oplab_measure{d.absolutely_continuous};
            if (singular) *singular = new oplab_measure{d.singular};
        });
    });
}

oplab_status oplab_measure_bayes(const oplab_measure* m, const char* set_json, oplab_measure** out) {
    return guarded([&] {
        need(m, "measure");
        need(out, "out");
        json j = parse(set_json, "set");
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x.atoms()[0].point)>;
                *out = new oplab_measure{oplab::bayes_condition(x, oplab::io::borel_set_from_json<T>(j, ""))};
            },
            m->m);
    });
}

oplab_status oplab_shannon_entropy(const oplab_measure* m, const char* partition_json, double* bits) {
    return guarded([&] {
        need(m, "measure");
        need(bits, "bits");
        json j = parse(partition_json, "partition");
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x.atoms()[0].point)>;
                *bits = oplab::shannon_entropy(x, oplab::io::partition_from_json<T>(j, "")).entropy;
            },
            m->m);
    });
}

oplab_status oplab_observable_create(size_t dim, const double* re, const double* im, oplab_observable** out) {
    return guarded([&] {
        need(out, "out");
        *out = new oplab_observable{oplab::HermitianObservable(read_matrix(dim, re, im))};
    });
}

void oplab_observable_free(oplab_observable* a) { delete a; }

oplab_status oplab_state_create(size_t dim, const double* re, const double* im, oplab_state** out) {
    return guarded([&] {
        need(out, "out");
        *out = new oplab_state{oplab::DensityState(read_matrix(dim, re, im))};
    });
}

void oplab_state_free(oplab_state* rho) { delete rho; }

oplab_status oplab_expectation(const oplab_observable* a, const oplab_state* rho, double* value) {
    return guarded([&] {
        need(a, "observable");
        need(rho, "state");
        need(value, "value");
        oplab::require(a->a.dim() == rho->rho.dim(), oplab::ErrorCode::DimMismatch, "dimensions differ");
        *value = a->a.expectation(rho->rho);
    });
}

oplab_status oplab_spectral_measure(const oplab_observable* a, const oplab_state* rho, oplab_measure** out) {
    return guarded([&] {
        need(a, "observable");
        need(rho, "state");
        need(out, "out");
        *out = new oplab_measure{oplab::spectral_measure(a->a, rho->rho)};
    });
}

oplab_status oplab_entropy_purity(const oplab_state* rho, double* entropy, double* purity) {
    return guarded([&] {
        need(rho, "state");
        auto ep = oplab::vn_entropy_and_purity(rho->rho);
        if (entropy) *entropy = ep.entropy;
        if (purity) *purity = ep.purity;
    });
}

oplab_status oplab_bernoulli_trace(double p, size_t n, uint64_t seed, double* f, double* w) {
    return guarded([&] {
        oplab::FrequencyTrace trace(oplab::run_bernoulli(p, n, seed));
        for (size_t i = 0; i < n; ++i) {
            if (f) f[i] = trace.frequencies()[i];
            if (w) w[i] = trace.cesaro()[i];
        }
    });
}

oplab_status oplab_estimate_probability(const double* f, size_t n, double* p_hat) {
    return guarded([&] {
        need(f, "f");
        need(p_hat, "p_hat");
        *p_hat = oplab::estimate_probability(oplab::FrequencyTrace(std::vector<double>(f, f + n))).p_hat;
    });
}

oplab_status oplab_kolmogorov_json(const char* inputs_json, char** result_json) {
    return guarded([&] {
        need(result_json, "result_json");
        auto prob = oplab::io::kolmogorov_problem_from_json(parse(inputs_json, "inputs"), "inputs");
        auto r = oplab::kolmogorov_check(prob.spaces, prob.constraints);
        json out{{"feasible", r.feasible}};
        if (r.feasible) {
            json w = json::array();
            for (const auto& x : r.joint.weights) w.push_back(oplab::to_string(x));
            out["joint"] = w;
        } else {
            json cert = json::array();
            for (std::size_t i = 0; i < r.certificate.size(); ++i)
                cert.push_back({{"label", r.row_labels[i]}, {"multiplier", oplab::to_string(r.certificate[i])}});
            out["certificate"] = cert;
            out["infeasible_subset"] = r.infeasible_subset;
        }
        *result_json = dup_string(out.dump());
    });
}

oplab_status oplab_tomography_json(const char* inputs_json, char** result_json) {
    return guarded([&] {
        need(result_json, "result_json");
        auto prob = oplab::io::reconstruction_problem_from_json(parse(inputs_json, "inputs"), "inputs");
        auto r = oplab::tomography_reconstruct(prob);
        *result_json = dup_string(json{{"lambda", r.lambda},
                                       {"residuals", r.residuals},
                                       {"rho", oplab::io::matrix_to_json(r.rho.matrix())},
                                       {"trace_row_used", r.trace_row_used}}
                                      .dump());
    });
}

oplab_status oplab_validate_json(const char* inputs_json, char** result_json) {
    return guarded([&] {
        need(result_json, "result_json");
        auto report = oplab::io::validation_from_json(parse(inputs_json, "inputs"), "inputs",
                                                      [](const json& j) { return j; });
        *result_json = dup_string(oplab::io::validation_to_json(report).dump());
    });
}

int oplab_run_experiment(const char* command, const char* config_path, const char* out_dir, const uint64_t* seed,
                         const char* mode) {
    if (!command || !config_path || !out_dir) {
        last_error = "command, config_path and out_dir are required";
        return oplab::kExitError;
    }
    oplab::RunOptions o{command, config_path, out_dir, std::nullopt, std::nullopt};
    if (seed) o.seed = *seed;
    if (mode) o.mode = mode;
    auto r = oplab::run_experiment(o);
    last_error = r.message;
    return r.exit_code;
}

int oplab_report(const char* const* inputs, size_t n, const char* out_dir) {
    if ((n > 0 && !inputs) || !out_dir) {
        last_error = "inputs and out_dir are required";
        return oplab::kExitError;
    }
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < n; ++i) paths.emplace_back(inputs[i]);
    auto r = oplab::run_report(paths, out_dir);
    last_error = r.message;
    return r.exit_code;
}

}  // extern "C"
