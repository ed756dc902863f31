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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oplab/measure.hpp"

namespace oplab {

/// Uniform double in [0, 1) determined by (seed, index) alone, so any trial
/// can be regenerated without replaying its predecessors.
double counter_uniform(std::uint64_t seed, std::uint64_t index);

/// Outcomes X(1..n) of repeated yes/no trials of the event "value in target".
struct TrialLog {
    std::uint64_t seed = 0;
    double probability = 0.0;
    std::string target;
    std::vector<std::uint8_t> outcomes;
    /// xi(i) = X(1) + ... + X(i)
    std::vector<std::uint64_t> successes;

    std::size_t size() const { return outcomes.size(); }
    TrialLog prefix(std::size_t m) const;
};

/// Bernoulli(probability) trials; X(i) = 1 iff counter_uniform(seed, i) < p.
TrialLog run_bernoulli(double probability, std::size_t n, std::uint64_t seed);

template <class T>
TrialLog run_ensemble(const DiscreteMeasure<T>& truth, const BorelSet<T>& target, std::size_t n, std::uint64_t seed) {
    require_probability(truth, "run_ensemble: truth");
    TrialLog log = run_bernoulli(to_double(truth.measure_of(target)), n, seed);
    log.target = target.describe();
    return log;
}

/// Relative frequencies f_n = xi(n)/n and their running Cesaro means
/// w_n = (1/n) sum_{k<=n} f_k.
class FrequencyTrace {
public:
    explicit FrequencyTrace(const TrialLog& log);
    /// Arbitrary frequency sequence in [0, 1] (not necessarily from trials).
    explicit FrequencyTrace(std::vector<double> frequencies);

    std::size_t size() const { return f_.size(); }
    /// 1-based accessors
    double f(std::size_t n) const { return f_.at(n - 1); }
    double w(std::size_t n) const { return w_.at(n - 1); }
    const std::vector<double>& frequencies() const { return f_; }
    const std::vector<double>& cesaro() const { return w_; }
    const std::optional<std::vector<std::uint8_t>>& outcomes() const { return outcomes_; }
    /// (n+1) f_{n+1} >= n f_n throughout
    bool copy_added() const;

private:
    void build_cesaro();

    std::vector<double> f_;
    std::vector<double> w_;
    std::optional<std::vector<std::uint8_t>> outcomes_;
};

/// A subset of the positive integers up to a horizon.
class NaturalSubset {
public:
    enum class Rule { Explicit, All, Squares, Primes, Arithmetic };

    static NaturalSubset all(std::size_t horizon);
    static NaturalSubset squares(std::size_t horizon);
    static NaturalSubset primes(std::size_t horizon);
    /// start, start + step, start + 2 step, ...
    static NaturalSubset arithmetic(std::size_t start, std::size_t step, std::size_t horizon);
    static NaturalSubset explicit_members(std::vector<std::size_t> members, std::size_t horizon);

    std::size_t horizon() const { return horizon_; }
    Rule rule() const { return rule_; }
    /// membership flags for 1..n (index k-1 for k)
    std::vector<bool> indicator(std::size_t n) const;

private:
    NaturalSubset(Rule rule, std::size_t horizon) : rule_(rule), horizon_(horizon) {}

    Rule rule_;
    std::size_t horizon_;
    std::size_t start_ = 0;
    std::size_t step_ = 0;
    std::vector<std::size_t> members_;
};

struct DensityEstimate {
    std::size_t n;
    std::size_t count;
    /// m_n(E) = Card(E ∩ {1..n}) / n
    Rational relative;
    /// max and min of m_k over k in [ceil(n/2), n]
    Rational upper;
    Rational lower;
};

DensityEstimate natural_density(const NaturalSubset& set, std::size_t n);

struct KvnThresholds {
    double epsilon = 1e-2;
    double delta = 1e-2;
};

enum class KvnVerdict { ConvergentInDensity, NotConvergent };

const char* to_string(KvnVerdict v);

struct KvnReport {
    std::size_t n;
    double cesaro_mean;
    /// (alpha, density of {k <= n : x_k > alpha})
    std::vector<std::pair<double, double>> exceedance;
    bool cesaro_small;
    bool densities_small;
    /// both diagnostics agree
    bool consistent;
    KvnVerdict verdict;
    /// (m, Cesaro mean at m) for m = ..., n/4, n/2, n (ascending, m >= 16)
    std::vector<std::pair<std::size_t, double>> checkpoints;
    /// no checkpoint exceeds the previous (smaller m) one by more than 5%
    bool decreasing_trend;
};

std::vector<double> default_alpha_grid();

KvnReport kvn_equivalence(std::span<const double> x, const std::vector<double>& alphas = default_alpha_grid(),
                          KvnThresholds thresholds = {});

struct Probe {
    std::string name;
    std::function<double(double)> g;
};

/// {1_(-inf,0], 1_(-inf,1], t, t^2} for a yes/no trace supported on {0, 1}.
std::vector<Probe> default_probes();

struct ProbeCheck {
    std::string name;
    /// (m, |w_m(g) - P_hat(g)|) at dyadic checkpoints
    std::vector<std::pair<std::size_t, double>> deviations;
};

/// Even-index place selection compared to the full sequence.
struct PlaceSelection {
    double f_all;
    double f_even;
    double sigma;
    bool pass;
};

struct ProbabilityEstimate {
    double p_hat;
    KvnReport deviation_density;
    std::vector<ProbeCheck> weak_star;
    std::optional<PlaceSelection> place_selection;
};

inline constexpr std::size_t kMinimumTraceLength = 100;

ProbabilityEstimate estimate_probability(const FrequencyTrace& trace, const std::vector<Probe>& probes = default_probes(),
                                         const std::vector<double>& alphas = default_alpha_grid());

struct MinTrialsReport {
    double alpha;
    /// flag for m = 1..n: (1/m)|f_m - w_{m-1}| < 2 alpha, with w_0 := f_1
    std::vector<bool> in_lambda;
    std::optional<std::size_t> first_candidate;
    /// largest n with f_{n-1} = 0 (f_0 := 0); nullopt if no success occurred
    std::optional<std::size_t> n_o;
    double lower_bound;
    double w_n;
    bool bound_holds;
};

MinTrialsReport min_trials(const FrequencyTrace& trace, double alpha);

}  // namespace oplab
