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

#include "oplab/algebra_bridge.hpp"

#include <algorithm>
#include <cmath>

#include "oplab/information.hpp"

namespace oplab {

Algebraization::Algebraization(const LabSystem& system, std::map<std::string, HermitianObservable> j,
                               std::map<std::string, DensityState> j_states)
    : system_(system), j_(std::move(j)), j_states_(std::move(j_states)) {
    std::size_t dim = 0;
    auto check_dim = [&](std::size_t d, const std::string& label) {
        if (dim == 0) dim = d;
        require(d == dim, ErrorCode::DimMismatch, "image of '" + label + "' has dimension " + std::to_string(d) +
                                                      ", expected " + std::to_string(dim));
    };
    for (const auto& [label, _] : system_.observables()) {
        auto it = j_.find(label);
        require(it != j_.end(), ErrorCode::InvalidArgument, "observable '" + label + "' has no image");
        check_dim(it->second.dim(), label);
    }
    for (const auto& [label, _] : system_.states()) {
        auto it = j_states_.find(label);
        require(it != j_states_.end(), ErrorCode::InvalidArgument, "state '" + label + "' has no image");
        check_dim(it->second.dim(), label);
    }
    for (const auto& [label, _] : j_)
        require(system_.observables().count(label), ErrorCode::InvalidArgument,
                "image given for unknown observable '" + label + "'");
    for (const auto& [label, _] : j_states_)
        require(system_.states().count(label), ErrorCode::InvalidArgument,
                "image given for unknown state '" + label + "'");
}

Algebraization Algebraization::identity(const LabSystem& system) {
    return Algebraization(system, system.observables(), system.states());
}

const HermitianObservable& Algebraization::j(const std::string& observable) const {
    auto it = j_.find(observable);
    require(it != j_.end(), ErrorCode::InvalidArgument, "unknown observable '" + observable + "'");
    return it->second;
}

const DensityState& Algebraization::j_state(const std::string& state) const {
    auto it = j_states_.find(state);
    require(it != j_states_.end(), ErrorCode::InvalidArgument, "unknown state '" + state + "'");
    return it->second;
}

double Algebraization::mean(const std::string& state, const std::string& observable) const {
    return j(observable).expectation(j_state(state));
}

bool ValidationReport::pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionResult& c) { return c.pass; });
}

namespace {

// Running worst residual for one condition.
struct Condition {
    ConditionResult r;
    double tol;
    Condition(std::string name, double tol_) : r{std::move(name), true, "", 0.0}, tol(tol_) {}
    void record(double residual, const std::string& witness) {
        if (r.witness.empty() || residual > r.residual) {
            r.residual = residual;
            r.witness = witness;
        }
        if (!(residual <= tol)) r.pass = false;
    }
};

ComplexMatrix matrix_power(const ComplexMatrix& m, int n) {
    ComplexMatrix out = ComplexMatrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < n; ++i) out = out * m;
    return out;
}

}  // namespace

std::vector<ConditionResult> arba_validate(const Algebraization& alg, const AlgebraicRelations& rel) {
    Condition poly("polynomial", kRelationTolerance), add("additivity", kRelationTolerance),
        hom("homogeneity", kRelationTolerance), expect("expectation", kRelationTolerance),
        mult("multiplicative", kCommutationTolerance);

    for (const auto& p : rel.powers) {
        require(p.exponent >= 0 && p.exponent <= 4, ErrorCode::InvalidArgument,
                "power relations support exponents 0..4, got " + std::to_string(p.exponent));
        poly.record(max_norm(alg.j(p.result).matrix() - matrix_power(alg.j(p.base).matrix(), p.exponent)),
                    p.result + " = " + p.base + "^" + std::to_string(p.exponent));
    }
    for (const auto& s : rel.sums)
        add.record(max_norm(alg.j(s.result).matrix() - alg.j(s.first).matrix() - alg.j(s.second).matrix()),
                   s.result + " = " + s.first + " + " + s.second);
    for (const auto& s : rel.scalings)
        hom.record(max_norm(alg.j(s.result).matrix() - s.factor * alg.j(s.base).matrix()),
                   s.result + " = " + to_string(s.factor) + " " + s.base);
    for (const auto& [state, obs] : alg.system().suitability()) {
        auto it = rel.expectations.find({state, obs});
        double declared = it != rel.expectations.end()
                              ? it->second
                              : alg.system().observable(obs).expectation(alg.system().state(state));
        expect.record(std::abs(alg.mean(state, obs) - declared), "<" + obs + ">_" + state);
    }
    for (const auto& [a, b] : rel.compatible)
        mult.record(commutator_norm(alg.j(a), alg.j(b)), "[" + a + ", " + b + "]");
    return {poly.r, add.r, hom.r, expect.r, mult.r};
}

EmbeddingReport embedding_check(const Algebraization& alg,
                                const std::map<std::string, std::vector<std::string>>& families) {
    EmbeddingReport out;
    Condition emb("embedding", kRelationTolerance), pp("point_spectrum", kRelationTolerance);
    for (const auto& [label, obs] : alg.system().observables()) {
        const auto& image = alg.j(label);
        auto fam_it = families.find(label);
        std::vector<std::string> family =
            fam_it != families.end() ? fam_it->second : alg.system().states_suitable_for(label);
        EmbeddingEntry e{label, image.spectral_radius(), 0.0, "", false, true};
        for (const auto& s : family) {
            double v = std::abs(alg.mean(s, label));
            if (v > e.family_norm || e.attained_by.empty()) {
                e.family_norm = std::max(e.family_norm, v);
                e.attained_by = s;
            }
        }
        double gap = e.spectral_radius - e.family_norm;
        e.embedding = std::abs(gap) <= kRelationTolerance;
        emb.record(std::abs(gap), label);

        double worst = 0.0;
        const double tol = kSpectrumDedupTolerance * std::max(1.0, image.spectral_radius());
        for (double lambda : obs.spectrum_values()) {
            double nearest = INFINITY;
            for (double mu : image.spectrum_values()) nearest = std::min(nearest, std::abs(lambda - mu));
            worst = std::max(worst, nearest);
        }
        e.point_spectrum_preserved = worst <= std::max(tol, kRelationTolerance);
        pp.record(worst, label);
        out.entries.push_back(std::move(e));
    }
    out.embedding = emb.r;
    out.point_spectrum = pp.r;
    return out;
}

std::vector<ConditionResult> center_check(const Algebraization& alg, const AlgebraicRelations& rel,
                                          const std::vector<std::string>& center) {
    Condition central("center", kCommutationTolerance), prod("center_products", kRelationTolerance);
    for (const auto& z : center) {
        require(alg.system().observables().count(z), ErrorCode::InvalidArgument,
                "center label '" + z + "' is not an observable");
        for (const auto& [a, _] : alg.system().observables())
            central.record(commutator_norm(alg.j(z), alg.j(a)), "[" + z + ", " + a + "]");
    }
    for (const auto& p : rel.products) {
        bool involves_center = std::find(center.begin(), center.end(), p.first) != center.end() ||
                               std::find(center.begin(), center.end(), p.second) != center.end();
        if (!involves_center) continue;
        prod.record(max_norm(alg.j(p.result).matrix() - alg.j(p.first).matrix() * alg.j(p.second).matrix()),
                    p.result + " = " + p.first + " " + p.second);
    }
    return {central.r, prod.r};
}

std::vector<std::string> purity_losses(const Algebraization& alg, const std::vector<std::string>& extremal) {
    std::vector<std::string> out;
    for (const auto& s : extremal)
        if (vn_entropy_and_purity(alg.j_state(s)).purity < 1.0 - kRelationTolerance) out.push_back(s);
    return out;
}

}  // namespace oplab
