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

#include "oplab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "oplab/algebra_bridge.hpp"
#include "oplab/dynamics.hpp"
#include "oplab/ensembles.hpp"
#include "oplab/information.hpp"
#include "oplab/json_io.hpp"
#include "oplab/kolmogorov.hpp"
#include "oplab/result_table.hpp"
#include "oplab/spectral.hpp"
#include "oplab/tomography.hpp"

#ifndef OPLAB_VERSION_STRING
#define OPLAB_VERSION_STRING "0.0.0"
#endif

namespace oplab {

using io::json;
namespace fs = std::filesystem;

const char* version_string() { return OPLAB_VERSION_STRING; }

namespace {

std::optional<std::uint64_t> parse_seed_text(const std::string& s, const std::string& what) {
    require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos, ErrorCode::InvalidArgument,
            what + " must be a nonnegative integer, got '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, what + " is out of range: '" + s + "'");
    }
}

}  // namespace

std::optional<std::uint64_t> resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config) {
    if (flag) return flag;
    if (const char* env = std::getenv("OPLAB_SEED"); env && *env) return parse_seed_text(env, "OPLAB_SEED");
    return config;
}

namespace {

struct Context {
    json inputs;
    fs::path config_dir;
    fs::path out;
    Provenance provenance;
    std::optional<std::uint64_t> seed;
    RunOutcome outcome;

    void write(const std::string& name, ResultTable table) {
        table.set_provenance(provenance);
        auto path = out / name;
        table.write(path);
        outcome.written.push_back(path);
    }

    void write_text(const std::string& name, const std::string& text) {
        auto path = out / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(f), ErrorCode::IoError, "cannot write " + path.string());
        f << text;
        outcome.written.push_back(path);
    }

    void flag(const std::string& why) {
        outcome.exit_code = kExitValidationFailed;
        if (!outcome.message.empty()) outcome.message += "; ";
        outcome.message += why;
    }

    std::uint64_t require_seed() const {
        require(seed.has_value(), ErrorCode::InvalidArgument,
                "no seed: pass --seed, set OPLAB_SEED or add \"seed\" to the config");
        return *seed;
    }

    /// Inline object, or a string naming a JSON file relative to the config.
    json resolve(const json& j) const {
        if (j.is_string()) return io::read_json_file(config_dir / j.get<std::string>());
        return j;
    }
};

const std::string kIn = "inputs";

std::string in_path(const std::string& key) { return io::child_path(kIn, key); }

ResultTable kv_table() { return ResultTable({"quantity", "value"}); }

// ----------------------------------------------------------------- simulate

template <class T>
TrialLog simulate_log(Context& ctx) {
    const auto& in = ctx.inputs;
    auto truth = io::measure_from_json<T>(io::field(in, "truth", kIn), in_path("truth"));
    auto target = io::borel_set_from_json<T>(io::field(in, "target", kIn), in_path("target"));
    auto n = io::get_uint(io::field(in, "n", kIn), in_path("n"));
    require(n >= 1, ErrorCode::InvalidArgument, "inputs.n must be at least 1");
    return run_ensemble(truth, target, n, ctx.require_seed());
}

ResultTable trial_table(const TrialLog& log) {
    FrequencyTrace trace(log);
    ResultTable t({"i", "X_i", "xi_i", "f_i", "w_i"});
    for (std::size_t i = 1; i <= log.outcomes.size(); ++i)
        t.add_row({cell(i), cell(static_cast<std::size_t>(log.outcomes[i - 1])), cell(static_cast<std::size_t>(log.successes[i - 1])),
                   cell(trace.f(i)), cell(trace.w(i))});
    return t;
}

template <class T>
void cmd_simulate(Context& ctx) {
    auto log = simulate_log<T>(ctx);
    ctx.write("trial_log.csv", trial_table(log));
}

// ----------------------------------------------------------------- estimate

template <class T>
void cmd_estimate(Context& ctx) {
    const auto& in = ctx.inputs;
    std::optional<FrequencyTrace> trace;
    if (const json* f = io::optional_field(in, "frequencies")) {
        const auto& arr = io::get_array(*f, in_path("frequencies"));
        std::vector<double> v;
        for (std::size_t i = 0; i < arr.size(); ++i) v.push_back(io::get_double(arr[i], io::child_path(in_path("frequencies"), i)));
        trace.emplace(std::move(v));
    } else if (const json* o = io::optional_field(in, "outcomes")) {
        const auto& arr = io::get_array(*o, in_path("outcomes"));
        TrialLog log;
        std::uint64_t s = 0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto x = io::get_uint(arr[i], io::child_path(in_path("outcomes"), i));
            if (x > 1) io::schema_error(io::child_path(in_path("outcomes"), i), "outcomes are 0 or 1");
            s += x;
            log.outcomes.push_back(static_cast<std::uint8_t>(x));
            log.successes.push_back(s);
        }
        trace.emplace(log);
    } else {
        auto log = simulate_log<T>(ctx);
        ctx.write("trial_log.csv", trial_table(log));
        trace.emplace(log);
    }
    double alpha = 0.01;
    if (const json* a = io::optional_field(in, "alpha")) alpha = io::get_double(*a, in_path("alpha"));

    auto est = estimate_probability(*trace);
    auto mt = min_trials(*trace, alpha);

    ResultTable s = kv_table();
    s.add_row({"n", cell(trace->size())});
    s.add_row({"p_hat", cell(est.p_hat)});
    s.add_row({"deviation_cesaro_mean", cell(est.deviation_density.cesaro_mean)});
    s.add_row({"deviation_verdict", to_string(est.deviation_density.verdict)});
    for (const auto& [a, d] : est.deviation_density.exceedance) s.add_row({"exceedance_density@" + cell(a), cell(d)});
    for (const auto& p : est.weak_star)
        s.add_row({"weak_star_deviation[" + p.name + "]", cell(p.deviations.empty() ? 0.0 : p.deviations.front().second)});
    if (est.place_selection) {
        s.add_row({"place_selection_f_all", cell(est.place_selection->f_all)});
        s.add_row({"place_selection_f_even", cell(est.place_selection->f_even)});
        s.add_row({"place_selection_sigma", cell(est.place_selection->sigma)});
        s.add_row({"place_selection_pass", cell(est.place_selection->pass)});
    }
    s.add_row({"alpha", cell(alpha)});
    s.add_row({"first_candidate", mt.first_candidate ? cell(*mt.first_candidate) : "none"});
    s.add_row({"n_o", mt.n_o ? cell(*mt.n_o) : "none"});
    s.add_row({"lower_bound", cell(mt.lower_bound)});
    s.add_row({"w_n", cell(mt.w_n)});
    s.add_row({"bound_holds", cell(mt.bound_holds)});
    ctx.write("estimate.csv", std::move(s));

    ResultTable l({"m", "f_m", "w_m", "in_lambda"});
    for (std::size_t m = 1; m <= trace->size(); ++m)
        l.add_row({cell(m), cell(trace->f(m)), cell(trace->w(m)), cell(static_cast<bool>(mt.in_lambda[m - 1]))});
    ctx.write("lambda.csv", std::move(l));
    if (!mt.bound_holds) ctx.flag("Cesaro lower bound violated");
}

// ------------------------------------------------------------------ entropy

template <class T>
EvolutionTrace<T> trace_from_json(const json& j, const std::string& path) {
    const auto& times = io::get_array(io::field(j, "times", path), io::child_path(path, "times"));
    const auto& ms = io::get_array(io::field(j, "measures", path), io::child_path(path, "measures"));
    std::vector<T> ts;
    std::vector<DiscreteMeasure<T>> measures;
    for (std::size_t i = 0; i < times.size(); ++i)
        ts.push_back(io::get_scalar<T>(times[i], io::child_path(io::child_path(path, "times"), i)));
    for (std::size_t i = 0; i < ms.size(); ++i)
        measures.push_back(io::measure_from_json<T>(ms[i], io::child_path(io::child_path(path, "measures"), i)));
    try {
        return EvolutionTrace<T>(std::move(ts), std::move(measures));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument) io::schema_error(path, e.detail());
        throw;
    }
}

template <class T>
void cmd_entropy(Context& ctx) {
    const auto& in = ctx.inputs;
    auto partition = io::partition_from_json<T>(io::field(in, "partition", kIn), in_path("partition"));
    ResultTable summary = kv_table();
    if (const json* m = io::optional_field(in, "measure")) {
        auto mu = io::measure_from_json<T>(*m, in_path("measure"));
        require_probability(mu, "inputs.measure");
        auto probs = cell_probabilities(mu, partition);
        ResultTable t({"cell", "description", "probability", "contribution_bits"});
        std::vector<double> pd;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            double p = to_double(probs[i]);
            pd.push_back(p);
            t.add_row({cell(i), partition.cells[i].describe(), cell(probs[i]), cell(p > 0.0 ? -p * std::log2(p) : 0.0)});
        }
        ctx.write("entropy.csv", std::move(t));
        summary.add_row({"entropy_bits", cell(shannon_bits(pd))});
        if (const json* c = io::optional_field(in, "compare")) {
            auto nu = io::measure_from_json<T>(*c, in_path("compare"));
            auto v = informativity_compare(mu, nu);
            summary.add_row({"informativity", to_string(v.verdict)});
            summary.add_row({"informativity_family", v.family});
        }
    }
    if (const json* tr = io::optional_field(in, "trace")) {
        auto trace = trace_from_json<T>(*tr, in_path("trace"));
        ResultTable t({"t", "H"});
        for (std::size_t j = 0; j < trace.size(); ++j)
            t.add_row({cell(trace.times()[j]), cell(shannon_entropy(trace.measures()[j], partition).entropy)});
        ctx.write("entropy_trace.csv", std::move(t));
    }
    if (const json* k = io::optional_field(in, "khinchin"); k && k->is_boolean() && k->get<bool>()) {
        auto rep = khinchin_validate([](std::span<const double> p) { return shannon_bits(p); }, 100,
                                     ctx.seed.value_or(1));
        ResultTable t({"axiom", "cases", "failures", "worst_residual", "pass"});
        for (const auto& a : rep.axioms)
            t.add_row({a.axiom, cell(a.cases), cell(a.failures), cell(a.worst_residual), cell(a.pass())});
        ctx.write("khinchin.csv", std::move(t));
        if (!rep.all_pass()) ctx.flag("Khinchin axiom failed");
    }
    ctx.write("entropy_summary.csv", std::move(summary));
}

// -------------------------------------------------------------- dissipation

template <class T>
void cmd_dissipation(Context& ctx) {
    const auto& in = ctx.inputs;
    auto trace = trace_from_json<T>(in, kIn);
    auto ref = io::partition_from_json<T>(io::field(in, "partition", kIn), in_path("partition"));
    std::vector<Partition<T>> partitions{ref};
    if (const json* ps = io::optional_field(in, "partitions")) {
        const auto& arr = io::get_array(*ps, in_path("partitions"));
        for (std::size_t i = 0; i < arr.size(); ++i)
            partitions.push_back(io::partition_from_json<T>(arr[i], io::child_path(in_path("partitions"), i)));
    }
    auto report = decompose_evolution(trace);

    ResultTable d({"t", "chi", "H_ref", "mass_escaped"});
    ResultTable k({"t", "s", "K"});
    for (std::size_t j = 0; j < trace.size(); ++j) {
        const auto& st = report.steps[j];
        d.add_row({cell(st.time), cell(st.chi), cell(shannon_entropy(trace.measures()[j], ref).entropy),
                   cell(T(ScalarTraits<T>::one() - st.chi))});
        for (const auto& [s, kv] : st.kernel) k.add_row({cell(st.time), cell(s), cell(kv)});
    }
    ctx.write("dissipation.csv", std::move(d));
    ctx.write("kernel.csv", std::move(k));

    auto checks = entropy_checks(trace, partitions);
    ResultTable e({"t", "partition", "H_initial", "H_t", "monotone"});
    for (const auto& r : checks.rows)
        e.add_row({cell(trace.times()[r.time_index]), cell(r.partition), cell(r.initial), cell(r.current),
                   cell(!(r.current < r.initial - 1e-12))});
    ctx.write("entropy_checks.csv", std::move(e));

    ResultTable s = kv_table();
    s.add_row({"monotone", cell(checks.monotone)});
    s.add_row({"dissipation_free", cell(checks.dissipation_free)});
    if (!checks.monotone) ctx.flag("entropy decreased along the trace");

    if (const json* l = io::optional_field(in, "lipschitz")) {
        auto p = in_path("lipschitz");
        double L = io::get_double(io::field(*l, "L", p), io::child_path(p, "L"));
        std::vector<BorelSet<T>> sets;
        if (const json* ss = io::optional_field(*l, "sets")) {
            const auto& arr = io::get_array(*ss, io::child_path(p, "sets"));
            for (std::size_t i = 0; i < arr.size(); ++i)
                sets.push_back(io::borel_set_from_json<T>(arr[i], io::child_path(io::child_path(p, "sets"), i)));
        } else {
            sets = ref.cells;
        }
        auto diag = lipschitz_diagnostic(trace, sets, L);
        s.add_row({"lipschitz_declared", cell(diag.declared)});
        s.add_row({"lipschitz_max_rate", cell(diag.max_rate)});
        s.add_row({"lipschitz_violations", cell(diag.violations.size())});
    }
    if (const json* a = io::optional_field(in, "affine")) {
        auto p = in_path("affine");
        auto first = trace_from_json<T>(io::field(*a, "first", p), io::child_path(p, "first"));
        auto second = trace_from_json<T>(io::field(*a, "second", p), io::child_path(p, "second"));
        T r = io::get_scalar<T>(io::field(*a, "r", p), io::child_path(p, "r"));
        auto split = affine_split_check(first, second, trace, r);
        ResultTable at({"t", "residual", "chi"});
        for (std::size_t j = 0; j < trace.size(); ++j)
            at.add_row({cell(trace.times()[j]), cell(split.residuals[j]),
                        split.affine ? cell(split.split[j].chi) : std::string("")});
        ctx.write("affine.csv", std::move(at));
        s.add_row({"affine", cell(split.affine)});
        if (!split.affine) ctx.flag("evolution is not affine");
    }
    ctx.write("dissipation_summary.csv", std::move(s));
}

// --------------------------------------------------------------- kolmogorov

void cmd_kolmogorov(Context& ctx) {
    const auto& in = ctx.inputs;
    auto [spaces, constraints] = io::kolmogorov_problem_from_json(in, kIn);
    std::size_t capacity = kDefaultKolmogorovCapacity;
    if (const json* c = io::optional_field(in, "capacity")) capacity = io::get_uint(*c, in_path("capacity"));

    auto r = kolmogorov_check(spaces, constraints, capacity);
    if (r.feasible) {
        std::vector<std::string> header;
        for (const auto& s : spaces) header.push_back(s.name);
        header.push_back("weight");
        ResultTable j(header);
        for (std::size_t c = 0; c < r.joint.size(); ++c) {
            auto idx = r.joint.unflatten(c);
            std::vector<std::string> row;
            for (std::size_t v = 0; v < idx.size(); ++v) row.push_back(cell(spaces[v].outcomes[idx[v]]));
            row.push_back(cell(r.joint.weights[c]));
            j.add_row(std::move(row));
        }
        ctx.write("joint.csv", std::move(j));
        ResultTable res({"label", "residual"});
        for (const auto& c : constraints) res.add_row({c.label, cell(constraint_residual(r.joint, c))});
        ctx.write("residuals.csv", std::move(res));
    } else {
        ResultTable cert({"label", "multiplier", "in_subset"});
        for (std::size_t i = 0; i < r.certificate.size(); ++i)
            cert.add_row({r.row_labels[i], cell(r.certificate[i]), cell(sgn(r.certificate[i]) != 0)});
        ctx.write("certificate.csv", std::move(cert));
        std::string subset;
        for (const auto& l : r.infeasible_subset) subset += (subset.empty() ? "" : ", ") + l;
        ctx.flag("no joint distribution reproduces {" + subset + "}");
    }
}

// ----------------------------------------------------------------- spectral

void cmd_spectral(Context& ctx) {
    const auto& in = ctx.inputs;
    auto a = io::observable_from_json(io::field(in, "observable", kIn), in_path("observable"));
    auto rho = io::state_from_json(io::field(in, "state", kIn), in_path("state"));
    require(a.dim() == rho.dim(), ErrorCode::DimMismatch, "observable and state dimensions differ");
    auto mu = spectral_measure(a, rho);
    ResultTable t({"value", "multiplicity", "weight"});
    for (const auto& sp : a.spectrum()) t.add_row({cell(sp.value), cell(sp.multiplicity), cell(mu.weight_at(sp.value))});
    ctx.write("spectrum.csv", std::move(t));

    ResultTable s = kv_table();
    s.add_row({"mean", cell(a.expectation(rho))});
    s.add_row({"variance", cell(variance(a, rho))});
    s.add_row({"spectral_radius", cell(a.spectral_radius())});
    if (const json* pj = io::optional_field(in, "polynomial")) {
        auto pp = in_path("polynomial");
        const auto& arr = io::get_array(*pj, pp);
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < arr.size(); ++i) coeffs.push_back(io::get_double(arr[i], io::child_path(pp, i)));
        auto f = [coeffs](double x) {
            double acc = 0.0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
            return acc;
        };
        auto fa = functional_calc(a, f);
        ResultTable ft({"value", "multiplicity", "weight"});
        auto fmu = spectral_measure(fa, rho);
        for (const auto& sp : fa.spectrum()) ft.add_row({cell(sp.value), cell(sp.multiplicity), cell(fmu.weight_at(sp.value))});
        ctx.write("function_spectrum.csv", std::move(ft));
        s.add_row({"function_mean", cell(fa.expectation(rho))});
        if (const json* ej = io::optional_field(in, "epsilon")) {
            double eps = io::get_double(*ej, in_path("epsilon"));
            auto dec = epsilon_decomposition(a, f, eps);
            s.add_row({"epsilon", cell(eps)});
            s.add_row({"epsilon_cells", cell(dec.cells.size())});
            s.add_row({"epsilon_error_bound", cell(dec.error_bound)});
            s.add_row({"epsilon_operator_norm_error", cell(dec.operator_norm_error)});
        }
    }
    if (const json* bj = io::optional_field(in, "second")) {
        auto b = io::observable_from_json(*bj, in_path("second"));
        require(b.dim() == a.dim(), ErrorCode::DimMismatch, "second observable dimension differs");
        auto u = variance_and_uncertainty(a, b, rho);
        bool holds = u.variance_a * u.variance_b >= u.lower_bound - 1e-9;
        s.add_row({"variance_second", cell(u.variance_b)});
        s.add_row({"uncertainty_lower_bound", cell(u.lower_bound)});
        s.add_row({"uncertainty_holds", cell(holds)});
        s.add_row({"commutator_norm", cell(commutator_norm(a, b))});
        if (!holds) ctx.flag("uncertainty relation violated");
        if (commute(a, b)) {
            auto joint = joint_spectral_measure(a, b, rho);
            ResultTable jt({"a", "b", "weight"});
            for (const auto& atom : joint.atoms()) jt.add_row({cell(atom.s), cell(atom.t), cell(atom.weight)});
            ctx.write("joint_spectrum.csv", std::move(jt));
        }
    }
    ctx.write("spectral.csv", std::move(s));
}

// --------------------------------------------------------------- tomography

void cmd_tomography(Context& ctx) {
    const auto& in = ctx.inputs;
    ReconstructionProblem prob = io::reconstruction_problem_from_json(in, kIn);

    bool staged = false;
    if (const json* s = io::optional_field(in, "staged")) staged = s->is_boolean() && s->get<bool>();
    if (staged) {
        TomographyStager stager(prob.dim);
        ResultTable st({"stage", "observables", "frame_vectors", "status", "max_residual"});
        for (std::size_t k = 0; k < prob.observables.size(); ++k) {
            std::optional<ComplexVector> v;
            if (k < prob.frame.size()) v = prob.frame[k];
            const auto& stage = stager.add(prob.observables[k], prob.expectations[k], v);
            double worst = 0.0;
            if (stage.result)
                for (double r : stage.result->residuals) worst = std::max(worst, std::abs(r));
            st.add_row({cell(k + 1), cell(stage.observables), cell(stage.frame_vectors),
                        stage.result ? "ok" : error_code_name(*stage.error), stage.result ? cell(worst) : ""});
        }
        ctx.write("stages.csv", std::move(st));
        if (!stager.prefix_stable()) ctx.flag("staged expectations changed between stages");
        // the full problem is reconstructed below as usual
    }

    ResultTable status = kv_table();
    std::optional<Reconstruction> solved;
    try {
        solved = tomography_reconstruct(prob);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoRealizableFrame) throw;
        status.add_row({"status", "NoRealizableFrame"});
        status.add_row({"message", e.detail()});
        ctx.write("tomography_status.csv", std::move(status));
        ctx.flag(e.what());
        return;
    }
    const Reconstruction& rec = *solved;
    ResultTable lt({"h", "lambda"});
    for (std::size_t h = 0; h < rec.lambda.size(); ++h) lt.add_row({cell(h + 1), cell(rec.lambda[h])});
    ctx.write("tomography.csv", std::move(lt));
    ResultTable rt({"k", "y", "residual"});
    for (std::size_t k = 0; k < rec.residuals.size(); ++k)
        rt.add_row({cell(k + 1), cell(prob.expectations[k]), cell(rec.residuals[k])});
    ctx.write("residuals.csv", std::move(rt));
    ResultTable mt({"row", "col", "re", "im"});
    for (Eigen::Index r = 0; r < rec.rho.matrix().rows(); ++r)
        for (Eigen::Index c = 0; c < rec.rho.matrix().cols(); ++c)
            mt.add_row({cell(static_cast<std::size_t>(r)), cell(static_cast<std::size_t>(c)),
                        cell(rec.rho.matrix()(r, c).real()), cell(rec.rho.matrix()(r, c).imag())});
    ctx.write("rho.csv", std::move(mt));

    std::vector<Candidate> candidates{{rec.lambda, rec.rho}};
    if (const json* cj = io::optional_field(in, "candidates")) {
        const auto& arr = io::get_array(*cj, in_path("candidates"));
        for (std::size_t i = 0; i < arr.size(); ++i) {
            auto rho = io::state_from_json(arr[i], io::child_path(in_path("candidates"), i));
            std::vector<double> ev(rho.eigenvalues().data(), rho.eigenvalues().data() + rho.eigenvalues().size());
            std::sort(ev.rbegin(), ev.rend());
            candidates.push_back({std::move(ev), std::move(rho)});
        }
    }
    std::optional<double> pt, et;
    if (const json* p = io::optional_field(in, "purity_target")) pt = io::get_double(*p, in_path("purity_target"));
    if (const json* e = io::optional_field(in, "entropy_target")) et = io::get_double(*e, in_path("entropy_target"));
    auto sel = purity_selection(candidates, pt, et);
    status.add_row({"status", "ok"});
    status.add_row({"trace_row_used", cell(rec.trace_row_used)});
    status.add_row({"selected_candidate", cell(sel.index)});
    status.add_row({"selected_purity", cell(sel.purity)});
    status.add_row({"selected_entropy_nats", cell(sel.entropy)});
    status.add_row({"selection_rule", pt || et ? "nearest purity, then entropy" : "maximum entropy (no targets)"});
    status.add_row({"note", "finite-stage solution; no limit is taken"});
    ctx.write("tomography_status.csv", std::move(status));
}

// ----------------------------------------------------------------- validate

void cmd_validate(Context& ctx) {
    const auto& in = ctx.inputs;
    auto resolve = [&](const json& j) { return ctx.resolve(j); };
    ValidationReport report = io::validation_from_json(in, kIn, resolve);

    ctx.write_text("validation.json", io::validation_to_json(report).dump(2) + "\n");
    ResultTable t({"name", "pass", "witness", "residual"});
    for (const auto& c : report.conditions) t.add_row({c.name, cell(c.pass), c.witness, cell(c.residual)});
    for (const auto& s : report.purity_losses) t.add_row({"purity_loss", "info", s, ""});
    ctx.write("validation.csv", std::move(t));
    if (!report.pass()) {
        std::string failed;
        for (const auto& c : report.conditions)
            if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
        ctx.flag("conditions failed: " + failed);
    }
}

// ----------------------------------------------------------------- dispatch

const std::set<std::string> kCommands = {"simulate", "estimate", "entropy", "dissipation", "tomography",
                                         "kolmogorov", "spectral", "validate"};

bool uses_measure_mode(const std::string& c) {
    return c == "simulate" || c == "estimate" || c == "entropy" || c == "dissipation";
}

void dispatch(const std::string& command, bool rational, Context& ctx) {
    if (command == "simulate") return rational ? cmd_simulate<Rational>(ctx) : cmd_simulate<double>(ctx);
    if (command == "estimate") return rational ? cmd_estimate<Rational>(ctx) : cmd_estimate<double>(ctx);
    if (command == "entropy") return rational ? cmd_entropy<Rational>(ctx) : cmd_entropy<double>(ctx);
    if (command == "dissipation") return rational ? cmd_dissipation<Rational>(ctx) : cmd_dissipation<double>(ctx);
    if (command == "kolmogorov") return cmd_kolmogorov(ctx);
    if (command == "spectral") return cmd_spectral(ctx);
    if (command == "tomography") return cmd_tomography(ctx);
    if (command == "validate") return cmd_validate(ctx);
    fail(ErrorCode::InvalidArgument, "unknown command '" + command + "'");
}

RunOutcome error_outcome(const std::string& message, RunOutcome partial = {}) {
    partial.exit_code = kExitError;
    partial.message = message;
    return partial;
}

}  // namespace

RunOutcome run_experiment(const RunOptions& options) {
    Context ctx;
    try {
        std::string text = io::read_text_file(options.config);
        json config = io::parse_json(text, options.config.string());
        io::get_object(config, "");
        std::string command = options.command;
        if (const json* k = io::optional_field(config, "kind")) {
            auto kind = io::get_string(*k, "kind");
            if (!kCommands.count(kind)) io::schema_error("kind", "unrecognized kind '" + kind + "'");
            if (command == "run") command = kind;
            require(command == kind, ErrorCode::InvalidArgument,
                    "config kind '" + kind + "' does not match command '" + command + "'");
        }
        require(kCommands.count(command) > 0, ErrorCode::InvalidArgument,
                command == "run" ? "config has no \"kind\"" : "unknown command '" + command + "'");

        std::optional<std::uint64_t> config_seed;
        if (const json* s = io::optional_field(config, "seed"); s && !s->is_null()) config_seed = io::get_uint(*s, "seed");
        ctx.seed = resolve_seed(options.seed, config_seed);

        std::string mode = "rational";
        if (const json* m = io::optional_field(config, "mode")) mode = io::get_string(*m, "mode");
        if (options.mode) mode = *options.mode;
        require(mode == "rational" || mode == "float", ErrorCode::InvalidArgument,
                "mode must be rational or float, got '" + mode + "'");
        if (!uses_measure_mode(command)) mode = command == "kolmogorov" ? "rational" : "float";

        ctx.inputs = io::field(config, "inputs", "");
        io::get_object(ctx.inputs, "inputs");
        ctx.config_dir = options.config.parent_path();
        ctx.out = options.out_dir;
        ctx.provenance = {"fnv1a64:" + fnv1a64(text), ctx.seed, version_string(), mode};
        fs::create_directories(ctx.out);
        dispatch(command, mode == "rational", ctx);
        return ctx.outcome;
    } catch (const Error& e) {
        return error_outcome(e.what(), ctx.outcome);
    } catch (const std::exception& e) {
        return error_outcome(e.what(), ctx.outcome);
    }
}

// ------------------------------------------------------------------- report

namespace {

struct Artifact {
    std::string name;
    ResultTable table;
};

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

void md_table(std::string& out, const ResultTable& t) {
    out += "|";
    for (const auto& h : t.header()) out += " " + md_escape(h) + " |";
    out += "\n|";
    for (std::size_t i = 0; i < t.header().size(); ++i) out += " --- |";
    out += "\n";
    for (const auto& r : t.rows()) {
        out += "|";
        for (const auto& c : r) out += " " + md_escape(c) + " |";
        out += "\n";
    }
}

bool unique_t(const ResultTable& t) {
    auto col = t.column("t");
    if (!col) return false;
    std::set<std::string> seen;
    for (const auto& r : t.rows())
        if (!seen.insert(r[*col]).second) return false;
    return !t.rows().empty();
}

}  // namespace

RunOutcome run_report(const std::vector<fs::path>& inputs, const fs::path& out_dir) {
    RunOutcome outcome;
    try {
        std::vector<fs::path> files;
        for (const auto& in : inputs) {
            require(fs::exists(in), ErrorCode::IoError, "missing artifact " + in.string());
            if (fs::is_directory(in)) {
                for (const auto& e : fs::directory_iterator(in))
                    if (e.is_regular_file() && e.path().extension() == ".csv" && e.path().stem() != "summary")
                        files.push_back(e.path());
            } else {
                files.push_back(in);
            }
        }
        std::sort(files.begin(), files.end());
        files.erase(std::unique(files.begin(), files.end()), files.end());
        require(!files.empty(), ErrorCode::IoError, "no artifacts to report on");

        std::vector<Artifact> artifacts;
        std::string all_bytes;
        for (const auto& f : files) {
            all_bytes += io::read_text_file(f);
            artifacts.push_back({f.stem().string(), ResultTable::read(f)});
        }

        std::vector<const Artifact*> joinable;
        for (const auto& a : artifacts)
            if (unique_t(a.table)) joinable.push_back(&a);

        ResultTable summary;
        std::string how;
        if (artifacts.size() == 1) {
            summary = ResultTable(artifacts[0].table.header());
            for (const auto& r : artifacts[0].table.rows()) summary.add_row(r);
            how = "pass-through of " + artifacts[0].name;
        } else if (joinable.size() >= 2) {
            std::vector<std::string> header{"t"};
            for (const auto* a : joinable)
                for (const auto& h : a->table.header())
                    if (h != "t") header.push_back(a->name + "." + h);
            summary = ResultTable(header);
            const auto& base = joinable[0]->table;
            auto bt = *base.column("t");
            for (const auto& br : base.rows()) {
                std::vector<std::string> row{br[bt]};
                bool complete = true;
                for (const auto* a : joinable) {
                    auto tc = *a->table.column("t");
                    auto it = std::find_if(a->table.rows().begin(), a->table.rows().end(),
                                           [&](const std::vector<std::string>& r) { return r[tc] == br[bt]; });
                    if (it == a->table.rows().end()) {
                        complete = false;
                        break;
                    }
                    for (std::size_t c = 0; c < it->size(); ++c)
                        if (c != tc) row.push_back((*it)[c]);
                }
                if (complete) summary.add_row(std::move(row));
            }
            how = "join on t of";
            for (const auto* a : joinable) how += " " + a->name;
        } else {
            summary = ResultTable({"artifact", "rows", "columns"});
            for (const auto& a : artifacts)
                summary.add_row({a.name, cell(a.table.rows().size()), cell(a.table.header().size())});
            how = "artifact inventory";
        }
        summary.footer.emplace_back("inputs_hash", "fnv1a64:" + fnv1a64(all_bytes));
        summary.footer.emplace_back("summary", how);
        summary.footer.emplace_back("version", version_string());

        fs::create_directories(out_dir);
        summary.write(out_dir / "summary.csv");
        outcome.written.push_back(out_dir / "summary.csv");

        std::string md = "# Summary\n\n" + how + "\n\n## Artifacts\n\n";
        for (const auto& a : artifacts) {
            md += "- " + a.name + ": " + std::to_string(a.table.rows().size()) + " rows";
            for (const auto& [k, v] : a.table.footer)
                if (k == "seed" || k == "mode") md += ", " + k + " " + v;
            md += "\n";
        }
        md += "\n## Table\n\n";
        md_table(md, summary);
        std::ofstream f(out_dir / "summary.md", std::ios::binary | std::ios::trunc);
        require(static_cast<bool>(f), ErrorCode::IoError, "cannot write summary.md");
        f << md;
        outcome.written.push_back(out_dir / "summary.md");
        return outcome;
    } catch (const Error& e) {
        return error_outcome(e.what(), outcome);
    } catch (const std::exception& e) {
        return error_outcome(e.what(), outcome);
    }
}

}  // namespace oplab
