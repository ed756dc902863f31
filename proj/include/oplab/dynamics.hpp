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

#include <functional>
#include <string>
#include <vector>

#include "oplab/borel_set.hpp"
#include "oplab/information.hpp"
#include "oplab/measure.hpp"

namespace oplab {

/// Probability measures sampled on a strictly increasing time grid starting
/// at 0.
template <class T>
class EvolutionTrace {
public:
    EvolutionTrace(std::vector<T> times, std::vector<DiscreteMeasure<T>> measures)
        : times_(std::move(times)), measures_(std::move(measures)) {
        require(!times_.empty(), ErrorCode::InvalidArgument, "evolution trace needs mu^0");
        require(times_.size() == measures_.size(), ErrorCode::InvalidArgument, "one measure per time");
        require(ScalarTraits<T>::is_zero(times_.front()), ErrorCode::InvalidArgument, "first time must be 0");
        for (std::size_t j = 1; j < times_.size(); ++j)
            require(times_[j - 1] < times_[j], ErrorCode::InvalidArgument, "times must be strictly increasing");
        for (std::size_t j = 0; j < measures_.size(); ++j)
            require_probability(measures_[j], "evolution trace measure");
    }

    std::size_t size() const { return times_.size(); }
    const std::vector<T>& times() const { return times_; }
    const std::vector<DiscreteMeasure<T>>& measures() const { return measures_; }
    const DiscreteMeasure<T>& initial() const { return measures_.front(); }

    std::size_t index_of(const T& t) const {
        for (std::size_t j = 0; j < times_.size(); ++j)
            if (ScalarTraits<T>::same_point(times_[j], t)) return j;
        fail(ErrorCode::InvalidArgument, "time " + to_string(t) + " is not on the grid");
    }

private:
    std::vector<T> times_;
    std::vector<DiscreteMeasure<T>> measures_;
};

struct LipschitzViolation {
    std::size_t step;  // between times[step] and times[step + 1]
    std::size_t set;
    double rate;
};

struct LipschitzDiagnostic {
    double declared;
    double max_rate;
    std::vector<LipschitzViolation> violations;
    bool holds() const { return violations.empty(); }
};

/// |mu^{t_{j+1}}(D) - mu^{t_j}(D)| / (t_{j+1} - t_j) against the declared
/// constant, for each D in `sets`. Violations are reported, not thrown.
template <class T>
LipschitzDiagnostic lipschitz_diagnostic(const EvolutionTrace<T>& trace, const std::vector<BorelSet<T>>& sets,
                                         double declared) {
    LipschitzDiagnostic d{declared, 0.0, {}};
    for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
        double dt = to_double(T(trace.times()[j + 1] - trace.times()[j]));
        for (std::size_t k = 0; k < sets.size(); ++k) {
            double a = to_double(trace.measures()[j].measure_of(sets[k]));
            double b = to_double(trace.measures()[j + 1].measure_of(sets[k]));
            double rate = std::abs(b - a) / dt;
            d.max_rate = std::max(d.max_rate, rate);
            if (rate > declared * (1.0 + 1e-12)) d.violations.push_back({j, k, rate});
        }
    }
    return d;
}

template <class T>
struct DissipationStep {
    T time;
    T chi;
    /// absolutely continuous part against mu^0 before normalization
    DiscreteMeasure<T> continuous_part;
    DiscreteMeasure<T> singular_part;
    /// normalized parts; empty when the corresponding mass is zero
    DiscreteMeasure<T> mu1;
    DiscreteMeasure<T> mu2;
    /// (s, K(s, t)) for s in supp mu^0; empty when chi = 0
    std::vector<std::pair<T, T>> kernel;
};

template <class T>
struct DissipationReport {
    DiscreteMeasure<T> initial;
    std::vector<DissipationStep<T>> steps;

    const DissipationStep<T>& at(const T& t) const {
        for (const auto& s : steps)
            if (ScalarTraits<T>::same_point(s.time, t)) return s;
        fail(ErrorCode::InvalidArgument, "time " + to_string(t) + " is not in the report");
    }
};

template <class T>
DissipationReport<T> decompose_evolution(const EvolutionTrace<T>& trace) {
    DissipationReport<T> r{trace.initial(), {}};
    const auto& mu0 = trace.initial();
    for (std::size_t j = 0; j < trace.size(); ++j) {
        auto lb = lebesgue_decompose(trace.measures()[j], mu0);
        DissipationStep<T> s{trace.times()[j], lb.chi, lb.absolutely_continuous, lb.singular, {}, {}, {}};
        if (!ScalarTraits<T>::is_zero(lb.chi)) {
            s.mu1 = lb.absolutely_continuous.scaled(T(ScalarTraits<T>::one() / lb.chi));
            for (const auto& a : mu0.atoms())
                s.kernel.emplace_back(a.point, T(lb.absolutely_continuous.weight_at(a.point) / (lb.chi * a.weight)));
        }
        if (!lb.singular.empty())
            s.mu2 = lb.singular.scaled(T(ScalarTraits<T>::one() / lb.singular.mass()));
        r.steps.push_back(std::move(s));
    }
    return r;
}

/// chi mu1 + (1 - chi) mu2, for checking against mu^t.
template <class T>
DiscreteMeasure<T> reconstruct(const DissipationStep<T>& s) {
    T rest = ScalarTraits<T>::one() - s.chi;
    DiscreteMeasure<T> out = s.mu1.scaled(s.chi);
    if (!s.mu2.empty()) out = out + s.mu2.scaled(rest);
    return out;
}

/// sum_s f(s) K(s, t) mu^0({s}), i.e. the mu1^t expectation of f.
template <class T>
T koopman_apply(const DissipationReport<T>& report, const std::function<T(const T&)>& f, const T& t) {
    const auto& step = report.at(t);
    require(!ScalarTraits<T>::is_zero(step.chi), ErrorCode::NoAbsolutelyContinuousPart,
            "chi is 0 at t = " + to_string(t));
    T sum = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < step.kernel.size(); ++i)
        sum += f(step.kernel[i].first) * step.kernel[i].second * report.initial.atoms()[i].weight;
    return sum;
}

struct EntropyCheckRow {
    std::size_t time_index;
    std::size_t partition;
    double initial;
    double current;
};

struct EntropyChecks {
    std::vector<EntropyCheckRow> rows;
    bool monotone;
    bool dissipation_free;
    /// rows where H(mu^t, P) < H(mu^0, P) - slack
    std::vector<std::size_t> dips;
};

template <class T>
EntropyChecks entropy_checks(const EvolutionTrace<T>& trace, const std::vector<Partition<T>>& partitions) {
    constexpr double slack = 1e-12;
    EntropyChecks out{{}, true, true, {}};
    for (std::size_t p = 0; p < partitions.size(); ++p) {
        double h0 = shannon_entropy(trace.initial(), partitions[p]).entropy;
        for (std::size_t j = 0; j < trace.size(); ++j) {
            double ht = shannon_entropy(trace.measures()[j], partitions[p]).entropy;
            out.rows.push_back({j, p, h0, ht});
            if (ht < h0 - slack) {
                out.monotone = false;
                out.dips.push_back(out.rows.size() - 1);
            }
            if (std::abs(ht - h0) > slack) out.dissipation_free = false;
        }
    }
    return out;
}

template <class T>
struct AffineSplit {
    bool affine;
    /// per time: largest atomwise |evolved mixture - mixture of evolved|
    std::vector<double> residuals;
    /// decomposition of the evolved mixture; filled only when affine
    std::vector<DissipationStep<T>> split;
};

template <class T>
AffineSplit<T> affine_split_check(const EvolutionTrace<T>& first, const EvolutionTrace<T>& second,
                                  const EvolutionTrace<T>& mixture, const T& r) {
    require(first.size() == second.size() && first.size() == mixture.size(), ErrorCode::GridMismatch,
            "traces have different lengths");
    for (std::size_t j = 0; j < first.size(); ++j)
        require(first.times()[j] == second.times()[j] && first.times()[j] == mixture.times()[j],
                ErrorCode::GridMismatch, "time grids differ at index " + std::to_string(j));
    require(!(r < ScalarTraits<T>::zero()) && !(ScalarTraits<T>::one() < r), ErrorCode::InvalidArgument,
            "mixing weight must lie in [0, 1]");
    AffineSplit<T> out{true, {}, {}};
    const T rest = ScalarTraits<T>::one() - r;
    for (std::size_t j = 0; j < first.size(); ++j) {
        auto expected = first.measures()[j].scaled(r) + second.measures()[j].scaled(rest);
        const auto& got = mixture.measures()[j];
        double worst = 0.0;
        bool equal = ScalarTraits<T>::exact ? expected == got : approx_equal(expected, got, 1e-12);
        for (const auto& a : expected.atoms())
            worst = std::max(worst, std::abs(to_double(T(a.weight - got.weight_at(a.point)))));
        for (const auto& a : got.atoms())
            worst = std::max(worst, std::abs(to_double(T(a.weight - expected.weight_at(a.point)))));
        out.residuals.push_back(worst);
        if (!equal) out.affine = false;
    }
    if (out.affine) out.split = decompose_evolution(mixture).steps;
    return out;
}

}  // namespace oplab
