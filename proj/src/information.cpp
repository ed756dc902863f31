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

#include "oplab/information.hpp"

#include <algorithm>
#include <random>

namespace oplab {

double shannon_bits(std::span<const double> probabilities) {
    double h = 0.0;
    for (double p : probabilities)
        if (p > 0.0) h -= p * std::log2(p);
    return std::max(h, 0.0);
}

bool KhinchinReport::all_pass() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass(); });
}

namespace {

constexpr double kAxiomSlack = 1e-10;

class SchemaGenerator {
public:
    explicit SchemaGenerator(std::uint64_t seed) : rng_(seed) {}

    std::size_t length(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }

    /// Strictly positive weights summing to one.
    std::vector<double> schema(std::size_t k) {
        std::exponential_distribution<double> e(1.0);
        std::vector<double> xi(k);
        double total = 0.0;
        for (auto& v : xi) {
            v = e(rng_) + 1e-6;
            total += v;
        }
        for (auto& v : xi) v /= total;
        return xi;
    }

private:
    std::mt19937_64 rng_;
};

struct Tally {
    AxiomResult result;
    void record(double residual) {
        ++result.cases;
        result.worst_residual = std::max(result.worst_residual, residual);
        if (residual > kAxiomSlack) ++result.failures;
    }
};

// Fannes-Audenaert style modulus for classical k-outcome schemas:
// |H(p) - H(q)| <= T log2(k - 1) + h2(T) with T = ||p - q||_1 / 2.
double continuity_modulus(double l1, std::size_t k) {
    double t = std::min(l1 / 2.0, 0.5);
    double h2 = t > 0.0 ? -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t) : 0.0;
    return t * std::log2(static_cast<double>(std::max<std::size_t>(k, 2) - 1)) + h2;
}

}  // namespace

KhinchinReport khinchin_validate(const EntropyFunction& h, std::size_t cases, std::uint64_t seed) {
    SchemaGenerator gen(seed);
    Tally k1{{"K1", 0, 0, 0.0}}, k2{{"K2", 0, 0, 0.0}}, k3{{"K3", 0, 0, 0.0}}, k4{{"K4", 0, 0, 0.0}},
        k5{{"K5", 0, 0, 0.0}}, k6{{"K6", 0, 0, 0.0}};

    for (std::size_t c = 0; c < cases; ++c) {
        // K1: nonnegative, zero exactly on Dirac schemas
        {
            std::size_t k = gen.length(2, 8);
            auto xi = gen.schema(k);
            double hv = h(xi);
            k1.record(hv < 0.0 ? -hv : (hv <= kAxiomSlack ? 1.0 : 0.0));
            std::vector<double> dirac(k, 0.0);
            dirac[gen.length(0, k - 1)] = 1.0;
            k1.record(std::abs(h(dirac)));
        }
        // K2: a leading zero changes nothing
        {
            auto xi = gen.schema(gen.length(1, 8));
            std::vector<double> shifted{0.0};
            shifted.insert(shifted.end(), xi.begin(), xi.end());
            k2.record(std::abs(h(xi) - h(shifted)));
        }
        // K3: splitting xi(1) into k equal parts adds xi(1) h(uniform_k)
        {
            auto xi = gen.schema(gen.length(1, 6));
            std::size_t k = gen.length(2, 5);
            std::vector<double> split(k, xi[0] / static_cast<double>(k));
            split.insert(split.end(), xi.begin() + 1, xi.end());
            std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
            k3.record(std::abs(h(split) - h(xi) - xi[0] * h(uniform)));
        }
        // K4: the uniform k-schema dominates every k-schema
        {
            std::size_t k = gen.length(2, 8);
            std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
            double top = h(uniform);
            auto xi = gen.schema(k);
            k4.record(std::max(0.0, h(xi) - top));
        }
        // K5: concavity along a random mixture
        {
            std::size_t k = gen.length(2, 8);
            auto xi = gen.schema(k);
            auto eta = gen.schema(k);
            double r = gen.unit();
            std::vector<double> mix(k);
            for (std::size_t i = 0; i < k; ++i) mix[i] = (1.0 - r) * xi[i] + r * eta[i];
            k5.record(std::max(0.0, (1.0 - r) * h(xi) + r * h(eta) - h(mix)));
        }
        // K6: perturbations within theta stay within epsilon
        {
            constexpr double epsilon = 0.01;
            std::size_t k = gen.length(2, 8);
            auto xi = gen.schema(k);
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                double mid = (lo + hi) / 2.0;
                (continuity_modulus(mid, k) < epsilon ? lo : hi) = mid;
            }
            double theta = lo;
            auto zeta = gen.schema(k);
            double s = 0.99 * gen.unit() * theta / 2.0;
            std::vector<double> eta(k);
            double l1 = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                eta[i] = (1.0 - s) * xi[i] + s * zeta[i];
                l1 += std::abs(xi[i] - eta[i]);
            }
            double gap = std::abs(h(xi) - h(eta));
            k6.record(l1 < theta && gap < epsilon ? 0.0 : gap);
        }
    }
    return {{k1.result, k2.result, k3.result, k4.result, k5.result, k6.result}};
}

const char* to_string(Informativity v) {
    switch (v) {
        case Informativity::MoreInformative: return "MoreInformative";
        case Informativity::Equal: return "Equal";
        case Informativity::LessInformative: return "LessInformative";
        case Informativity::Incomparable: return "Incomparable";
    }
    return "Unknown";
}

EntropyPurity vn_entropy_and_purity(const DensityState& rho) {
    double s = 0.0, p = 0.0;
    for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
        double l = rho.eigenvalues()(i);
        if (l > 0.0) s -= l * std::log(l);
        p += l * l;
    }
    return {std::max(s, 0.0), p};
}

}  // namespace oplab
