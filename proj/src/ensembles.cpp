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

#include "oplab/ensembles.hpp"

#include <algorithm>
#include <cmath>

namespace oplab {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<std::size_t> dyadic_checkpoints(std::size_t n, std::size_t floor) {
    std::vector<std::size_t> out;
    for (std::size_t m = n; m >= floor && m > 0; m /= 2) out.push_back(m);
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t bits = mix64(seed ^ mix64(index));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

TrialLog TrialLog::prefix(std::size_t m) const {
    require(m <= size(), ErrorCode::InvalidArgument, "prefix longer than log");
    TrialLog out{seed, probability, target, {outcomes.begin(), outcomes.begin() + static_cast<std::ptrdiff_t>(m)},
                 {successes.begin(), successes.begin() + static_cast<std::ptrdiff_t>(m)}};
    return out;
}

TrialLog run_bernoulli(double probability, std::size_t n, std::uint64_t seed) {
    require(n >= 1, ErrorCode::InvalidArgument, "ensemble needs at least one trial");
    require(probability >= 0.0 && probability <= 1.0, ErrorCode::NotProbability, "success probability outside [0, 1]");
    TrialLog log;
    log.seed = seed;
    log.probability = probability;
    log.outcomes.resize(n);
    log.successes.resize(n);
    std::uint64_t xi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        // trial i+1 is keyed by its 1-based index
        std::uint8_t x = counter_uniform(seed, i + 1) < probability ? 1 : 0;
        xi += x;
        log.outcomes[i] = x;
        log.successes[i] = xi;
    }
    return log;
}

FrequencyTrace::FrequencyTrace(const TrialLog& log) : outcomes_(log.outcomes) {
    f_.resize(log.size());
    for (std::size_t i = 0; i < log.size(); ++i)
        f_[i] = static_cast<double>(log.successes[i]) / static_cast<double>(i + 1);
    build_cesaro();
}

FrequencyTrace::FrequencyTrace(std::vector<double> frequencies) : f_(std::move(frequencies)) {
    for (double v : f_) require(v >= 0.0 && v <= 1.0, ErrorCode::InvalidArgument, "frequency outside [0, 1]");
    build_cesaro();
}

void FrequencyTrace::build_cesaro() {
    w_.resize(f_.size());
    double running = 0.0;
    for (std::size_t i = 0; i < f_.size(); ++i) {
        running += f_[i];
        w_[i] = running / static_cast<double>(i + 1);
    }
}

bool FrequencyTrace::copy_added() const {
    // compare the integer counts n f_n to avoid rounding noise
    for (std::size_t i = 1; i < f_.size(); ++i) {
        double prev = std::round(f_[i - 1] * static_cast<double>(i));
        double next = std::round(f_[i] * static_cast<double>(i + 1));
        if (next < prev) return false;
    }
    return true;
}

NaturalSubset NaturalSubset::all(std::size_t horizon) { return NaturalSubset(Rule::All, horizon); }
NaturalSubset NaturalSubset::squares(std::size_t horizon) { return NaturalSubset(Rule::Squares, horizon); }
NaturalSubset NaturalSubset::primes(std::size_t horizon) { return NaturalSubset(Rule::Primes, horizon); }

NaturalSubset NaturalSubset::arithmetic(std::size_t start, std::size_t step, std::size_t horizon) {
    require(start >= 1 && step >= 1, ErrorCode::InvalidArgument, "arithmetic progression needs start, step >= 1");
    NaturalSubset s(Rule::Arithmetic, horizon);
    s.start_ = start;
    s.step_ = step;
    return s;
}

NaturalSubset NaturalSubset::explicit_members(std::vector<std::size_t> members, std::size_t horizon) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members)
        require(m >= 1 && m <= horizon, ErrorCode::InvalidArgument, "member " + std::to_string(m) + " outside 1..horizon");
    NaturalSubset s(Rule::Explicit, horizon);
    s.members_ = std::move(members);
    return s;
}

std::vector<bool> NaturalSubset::indicator(std::size_t n) const {
    require(n <= horizon_, ErrorCode::HorizonExceeded,
            "n = " + std::to_string(n) + " exceeds horizon " + std::to_string(horizon_));
    std::vector<bool> in(n, false);
    switch (rule_) {
        case Rule::All:
            in.assign(n, true);
            break;
        case Rule::Squares:
            for (std::size_t k = 1; k * k <= n; ++k) in[k * k - 1] = true;
            break;
        case Rule::Primes: {
            std::vector<bool> composite(n + 1, false);
            for (std::size_t p = 2; p <= n; ++p) {
                if (composite[p]) continue;
                in[p - 1] = true;
                for (std::size_t q = p * p; q <= n; q += p) composite[q] = true;
            }
            break;
        }
        case Rule::Arithmetic:
            for (std::size_t k = start_; k <= n; k += step_) in[k - 1] = true;
            break;
        case Rule::Explicit:
            for (auto m : members_)
                if (m <= n) in[m - 1] = true;
            break;
    }
    return in;
}

DensityEstimate natural_density(const NaturalSubset& set, std::size_t n) {
    require(n >= 1, ErrorCode::InvalidArgument, "density needs n >= 1");
    auto in = set.indicator(n);
    const std::size_t from = (n + 1) / 2;
    std::size_t count = 0;
    // track extremes as (count, k) pairs compared by cross-multiplication
    std::size_t up_c = 0, up_k = 0, lo_c = 0, lo_k = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (in[k - 1]) ++count;
        if (k < std::max<std::size_t>(from, 1)) continue;
        if (up_k == 0 || count * up_k > up_c * k) {
            up_c = count;
            up_k = k;
        }
        if (lo_k == 0 || count * lo_k < lo_c * k) {
            lo_c = count;
            lo_k = k;
        }
    }
    auto frac = [](std::size_t c, std::size_t k) {
        Rational r(static_cast<unsigned long>(c), static_cast<unsigned long>(k));
        r.canonicalize();
        return r;
    };
    return {n, count, frac(count, n), frac(up_c, up_k), frac(lo_c, lo_k)};
}

const char* to_string(KvnVerdict v) {
    return v == KvnVerdict::ConvergentInDensity ? "CONVERGENT-IN-DENSITY" : "NOT-CONVERGENT";
}

std::vector<double> default_alpha_grid() { return {0.5, 0.25, 0.1, 0.05, 0.01}; }

KvnReport kvn_equivalence(std::span<const double> x, const std::vector<double>& alphas, KvnThresholds thresholds) {
    require(!x.empty(), ErrorCode::InvalidArgument, "kvn_equivalence needs a nonempty sequence");
    for (double v : x) require(v >= 0.0 && std::isfinite(v), ErrorCode::InvalidArgument, "sequence must be finite and nonnegative");
    const std::size_t n = x.size();
    KvnReport r{};
    r.n = n;

    std::vector<double> prefix(n);
    double running = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        running += x[k];
        prefix[k] = running;
    }
    r.cesaro_mean = prefix[n - 1] / static_cast<double>(n);
    for (double a : alphas) {
        std::size_t count = static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [a](double v) { return v > a; }));
        r.exceedance.emplace_back(a, static_cast<double>(count) / static_cast<double>(n));
    }
    r.cesaro_small = r.cesaro_mean < thresholds.epsilon;
    r.densities_small = std::all_of(r.exceedance.begin(), r.exceedance.end(),
                                    [&](const auto& e) { return e.second < thresholds.delta; });
    r.consistent = r.cesaro_small == r.densities_small;
    r.verdict = r.cesaro_small && r.densities_small ? KvnVerdict::ConvergentInDensity : KvnVerdict::NotConvergent;

    for (auto m : dyadic_checkpoints(n, 16)) r.checkpoints.emplace_back(m, prefix[m - 1] / static_cast<double>(m));
    r.decreasing_trend = true;
    for (std::size_t i = 1; i < r.checkpoints.size(); ++i)
        if (r.checkpoints[i].second > 1.05 * r.checkpoints[i - 1].second) r.decreasing_trend = false;
    return r;
}

std::vector<Probe> default_probes() {
    return {
        {"1(-inf,0]", [](double t) { return t <= 0.0 ? 1.0 : 0.0; }},
        {"1(-inf,1]", [](double t) { return t <= 1.0 ? 1.0 : 0.0; }},
        {"t", [](double t) { return t; }},
        {"t^2", [](double t) { return t * t; }},
    };
}

ProbabilityEstimate estimate_probability(const FrequencyTrace& trace, const std::vector<Probe>& probes,
                                         const std::vector<double>& alphas) {
    const std::size_t n = trace.size();
    require(n >= kMinimumTraceLength, ErrorCode::TooShort,
            "trace has " + std::to_string(n) + " entries, at least " + std::to_string(kMinimumTraceLength) + " required");
    ProbabilityEstimate out{};
    out.p_hat = trace.w(n);

    std::vector<double> deviation(n);
    for (std::size_t k = 0; k < n; ++k) deviation[k] = std::abs(trace.frequencies()[k] - out.p_hat);
    out.deviation_density = kvn_equivalence(deviation, alphas);

    // w_m viewed as the law (1 - w_m) delta_0 + w_m delta_1
    for (const auto& probe : probes) {
        ProbeCheck check{probe.name, {}};
        double target = (1.0 - out.p_hat) * probe.g(0.0) + out.p_hat * probe.g(1.0);
        for (auto m : dyadic_checkpoints(n, 1)) {
            double wm = trace.w(m);
            double value = (1.0 - wm) * probe.g(0.0) + wm * probe.g(1.0);
            check.deviations.emplace_back(m, std::abs(value - target));
        }
        out.weak_star.push_back(std::move(check));
    }

    if (trace.outcomes()) {
        const auto& x = *trace.outcomes();
        std::size_t even_count = 0, even_hits = 0, hits = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            hits += x[i];
            if ((i + 1) % 2 == 0) {
                ++even_count;
                even_hits += x[i];
            }
        }
        PlaceSelection ps{};
        ps.f_all = static_cast<double>(hits) / static_cast<double>(x.size());
        ps.f_even = even_count ? static_cast<double>(even_hits) / static_cast<double>(even_count) : 0.0;
        ps.sigma = even_count ? std::sqrt(ps.f_all * (1.0 - ps.f_all) / static_cast<double>(even_count)) : 0.0;
        ps.pass = std::abs(ps.f_even - ps.f_all) <= 2.0 * ps.sigma;
        out.place_selection = ps;
    }
    return out;
}

MinTrialsReport min_trials(const FrequencyTrace& trace, double alpha) {
    require(alpha > 0.0, ErrorCode::InvalidArgument, "alpha must be positive");
    const std::size_t n = trace.size();
    require(n >= 1, ErrorCode::InvalidArgument, "empty trace");
    MinTrialsReport r{};
    r.alpha = alpha;
    r.in_lambda.resize(n);
    for (std::size_t m = 1; m <= n; ++m) {
        double prev_w = m == 1 ? trace.f(1) : trace.w(m - 1);
        bool in = std::abs(trace.f(m) - prev_w) / static_cast<double>(m) < 2.0 * alpha;
        r.in_lambda[m - 1] = in;
        if (in && !r.first_candidate) r.first_candidate = m;
    }

    r.w_n = trace.w(n);
    for (std::size_t k = n; k >= 1; --k) {
        double f_prev = k == 1 ? 0.0 : trace.f(k - 1);
        if (f_prev == 0.0) {
            r.n_o = k;
            break;
        }
    }
    r.lower_bound = 0.0;
    if (r.n_o && *r.n_o <= n) {
        double harmonic = 0.0;
        for (std::size_t k = 1; k + *r.n_o <= n; ++k) harmonic += 1.0 / static_cast<double>(k);
        r.lower_bound = trace.f(*r.n_o) * harmonic / static_cast<double>(n);
    }
    if (r.n_o && trace.f(*r.n_o) == 0.0) r.n_o.reset();
    r.bound_holds = r.w_n + 1e-15 >= r.lower_bound;
    return r;
}

}  // namespace oplab
