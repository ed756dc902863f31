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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oplab/errors.hpp"
#include "oplab/information.hpp"
#include "test_util.hpp"

namespace oplab {
namespace {

using Q = Rational;
using BS = BorelSet<Q>;
using P = Partition<Q>;

Q q(long p, long r = 1) {
    Q x(p, r);
    x.canonicalize();
    return x;
}

RationalMeasure m(std::vector<std::pair<Q, Q>> atoms) {
    std::vector<Atom<Q>> out;
    for (auto& [p, w] : atoms) out.push_back({p, w});
    return RationalMeasure(std::move(out));
}

double direct_bits(const std::vector<double>& p) {
    double h = 0;
    for (double x : p)
        if (x > 0) h -= x * std::log2(x);
    return h;
}

TEST(shannon, examples) {
    auto dirac = RationalMeasure::dirac(q(3, 10));
    EXPECT_EQ(shannon_entropy(dirac, P::dyadic(q(0), q(1), 4)).entropy, 0.0);
    EXPECT_EQ(shannon_entropy(dirac, P::separating({q(3, 10)})).entropy, 0.0);

    auto half = m({{q(0), q(1, 2)}, {q(1), q(1, 2)}});
    EXPECT_DOUBLE_EQ(shannon_entropy(half, P::separating({q(0), q(1)})).entropy, 1.0);
    auto quarter = m({{q(0), q(1, 4)}, {q(1), q(1, 4)}, {q(2), q(1, 4)}, {q(3), q(1, 4)}});
    auto r = shannon_entropy(quarter, P::separating({q(0), q(1), q(2), q(3)}));
    EXPECT_DOUBLE_EQ(r.entropy, 2.0);
    EXPECT_EQ(r.cells.size(), 4u);

    // a coarser partition merges cells
    EXPECT_DOUBLE_EQ(shannon_entropy(quarter, P(q(0), q(3), {BS::half_open(q(0), q(2)), BS::closed(q(2), q(3))})).entropy, 1.0);

    try {
        shannon_entropy(half, P::separating({q(0)}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PartitionDoesNotCover);
    }
}

TEST(shannon, bounds_and_mixing_on_random_measures) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        auto a = testing::random_rational_measure(rng, 6, 4);
        auto b = testing::random_rational_measure(rng, 6, 4);
        auto part = P::dyadic(q(-4), q(4), 3);
        auto ra = shannon_entropy(a, part);
        EXPECT_GE(ra.entropy, 0.0);
        EXPECT_LE(ra.entropy, std::log2(static_cast<double>(part.cells.size())) + 1e-12);
        EXPECT_NEAR(ra.entropy, direct_bits(ra.probabilities), 1e-12);

        Q t = q(static_cast<long>(i % 9) + 1, 10);
        std::vector<Atom<Q>> mix;
        for (const auto& x : a.atoms()) mix.push_back({x.point, x.weight * t});
        for (const auto& x : b.atoms()) mix.push_back({x.point, x.weight * (1 - t)});
        double hm = shannon_entropy(RationalMeasure(std::move(mix)), part).entropy;
        double td = t.get_d();
        EXPECT_GE(hm + 1e-12, td * ra.entropy + (1 - td) * shannon_entropy(b, part).entropy);
    }
}

TEST(shannon, dispersion_free_iff_dirac_iff_zero_entropy) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 100; ++i) {
        auto mu = testing::random_rational_measure(rng, i % 3 == 0 ? 1 : 4, 4);
        bool zero_var = variance(mu) == 0;
        bool detected = dirac_detect(mu, q(-4), q(4), 30).has_value();
        bool zero_h = shannon_entropy(mu, P::separating(mu.support())).entropy == 0.0;
        EXPECT_EQ(zero_var, detected);
        EXPECT_EQ(zero_var, zero_h);
    }
}

TEST(khinchin, shannon_passes_every_axiom) {
    auto r = khinchin_validate([](std::span<const double> p) { return shannon_bits(p); }, 200, 5);
    ASSERT_EQ(r.axioms.size(), 6u);
    for (const auto& a : r.axioms) {
        EXPECT_TRUE(a.pass()) << a.axiom << " worst " << a.worst_residual;
        EXPECT_GE(a.cases, 100u) << a.axiom;
    }
    EXPECT_TRUE(r.all_pass());
}

TEST(khinchin, renyi_two_fails_grouping_only) {
    auto renyi = [](std::span<const double> p) {
        double s = 0;
        for (double x : p) s += x * x;
        return -std::log2(s);
    };
    auto r = khinchin_validate(renyi, 100, 5);
    std::map<std::string, bool> pass;
    for (const auto& a : r.axioms) pass[a.axiom] = a.pass();
    EXPECT_TRUE(pass["K1"]);
    EXPECT_TRUE(pass["K2"]);
    EXPECT_FALSE(pass["K3"]);
    EXPECT_TRUE(pass["K4"]);
    EXPECT_FALSE(r.all_pass());

    // the six properties fix h only up to a positive factor
    auto scaled = [](std::span<const double> p) { return 2.0 * shannon_bits(p); };
    EXPECT_TRUE(khinchin_validate(scaled, 100, 5).all_pass());
    auto negated = [](std::span<const double> p) { return -shannon_bits(p); };
    EXPECT_FALSE(khinchin_validate(negated, 100, 5).all_pass());
}

TEST(khinchin, splitting_one_weight_in_half_adds_that_weight) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> xi(5);
        double s = 0;
        for (auto& x : xi) s += (x = u(rng));
        for (auto& x : xi) x /= s;
        std::vector<double> split{xi[0] / 2, xi[0] / 2};
        split.insert(split.end(), xi.begin() + 1, xi.end());
        double gap = shannon_bits(split) - shannon_bits(xi);
        EXPECT_NEAR(gap, xi[0], 1e-12);
        EXPECT_GT(gap, 0.0);
    }
}

TEST(khinchin, uniform_dominates_random_schemas) {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 2; k <= 6; ++k) {
        std::vector<double> uni(k, 1.0 / static_cast<double>(k));
        for (int i = 0; i < 50; ++i) {
            std::vector<double> xi(k);
            double s = 0;
            for (auto& x : xi) s += (x = u(rng));
            for (auto& x : xi) x /= s;
            EXPECT_LE(shannon_bits(xi), shannon_bits(uni) + 1e-12);
        }
    }
}

TEST(informativity, examples) {
    auto dirac = RationalMeasure::dirac(q(1, 2));
    auto spread = m({{q(0), q(1, 2)}, {q(1), q(1, 2)}});
    EXPECT_EQ(informativity_compare(dirac, spread).verdict, Informativity::MoreInformative);
    EXPECT_EQ(informativity_compare(spread, dirac).verdict, Informativity::LessInformative);
    EXPECT_EQ(informativity_compare(spread, spread).verdict, Informativity::Equal);

    auto skew = m({{q(0), q(9, 10)}, {q(1), q(1, 10)}});
    auto v = informativity_compare(skew, spread);
    EXPECT_EQ(v.verdict, Informativity::MoreInformative);
    EXPECT_EQ(v.partitions, 11u);
    EXPECT_FALSE(v.family.empty());

    // one measure concentrated in a dyadic half, the other split across it
    auto a = m({{q(0), q(1, 2)}, {q(1, 4), q(1, 2)}});
    auto b = m({{q(0), q(9, 10)}, {q(1), q(1, 10)}});
    std::vector<P> fam{P::dyadic(q(0), q(1), 1), P::separating({q(0), q(1, 4), q(1)})};
    EXPECT_EQ(informativity_compare(a, b, fam, "two").verdict, Informativity::Incomparable);
    EXPECT_STREQ(to_string(Informativity::Incomparable), "Incomparable");
}

TEST(von_neumann, examples) {
    ComplexVector psi(3);
    psi << Complex(1, 1), 2, Complex(0, -1);
    auto pure = vn_entropy_and_purity(DensityState::pure(psi));
    EXPECT_NEAR(pure.entropy, 0.0, 1e-10);
    EXPECT_NEAR(pure.purity, 1.0, 1e-10);

    for (std::size_t d : {2u, 3u, 5u}) {
        auto mm = vn_entropy_and_purity(DensityState::maximally_mixed(d));
        EXPECT_NEAR(mm.entropy, std::log(static_cast<double>(d)), 1e-12);
        EXPECT_NEAR(mm.purity, 1.0 / static_cast<double>(d), 1e-12);
    }
    EXPECT_NEAR(vn_entropy_and_purity(DensityState::diagonal({0.75, 0.25})).purity, 0.625, 1e-15);
}

TEST(von_neumann, purity_one_iff_entropy_zero_iff_rank_one) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 50; ++i) {
        bool make_pure = i % 2 == 0;
        DensityState rho = make_pure ? DensityState::pure(testing::random_unitary(rng, 3).col(0)) : testing::random_density(rng, 3);
        auto ep = vn_entropy_and_purity(rho);
        double top = rho.eigenvalues()(2);
        Eigen::MatrixXcd sq = rho.matrix() * rho.matrix();
        EXPECT_NEAR(ep.purity, sq.trace().real(), 1e-12);
        EXPECT_GT(ep.purity, 0.0);
        EXPECT_LE(ep.purity, 1.0 + 1e-12);
        EXPECT_GE(ep.entropy, 0.0);
        EXPECT_EQ(std::abs(ep.purity - 1) <= 1e-10, make_pure);
        EXPECT_EQ(std::abs(ep.entropy) <= 1e-10, make_pure);
        EXPECT_EQ(std::abs(top - 1) <= 1e-10, make_pure);
    }
}

TEST(partition_density, examples_and_cross_check) {
    auto mu = m({{q(0), q(1, 4)}, {q(1), q(1, 4)}, {q(2), q(1, 2)}});
    auto single = partition_density_matrix(mu, P(q(0), q(2), {BS::closed(q(0), q(2))}));
    EXPECT_NEAR(single.vn_nats, 0.0, 1e-12);
    EXPECT_NEAR(vn_entropy_and_purity(single.rho).purity, 1.0, 1e-12);

    auto half = partition_density_matrix(mu, P(q(0), q(2), {BS::half_open(q(0), q(2)), BS::point(q(2))}));
    EXPECT_LE(max_norm(half.rho.matrix() - DensityState::maximally_mixed(2).matrix()), 1e-15);
    EXPECT_NEAR(half.vn_nats, std::numbers::ln2, 1e-12);

    auto three = partition_density_matrix(mu, P::separating({q(0), q(1), q(2)}));
    EXPECT_NEAR(three.vn_nats, three.shannon_bits * std::numbers::ln2, 1e-9);
    EXPECT_NEAR(three.shannon_bits, 1.5, 1e-12);
    EXPECT_NEAR(vn_entropy_and_purity(three.rho).entropy, shannon_entropy(mu, P::separating({q(0), q(1), q(2)})).entropy * std::numbers::ln2, 1e-9);

    try {
        partition_density_matrix(mu, P::separating({q(0), q(1), q(2), q(3)}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroCell);
    }

    std::mt19937_64 rng(26);
    for (int i = 0; i < 100; ++i) {
        auto r = testing::random_rational_measure(rng, 5, 3);
        auto pd = partition_density_matrix(r, P::separating(r.support()));
        EXPECT_NEAR(pd.vn_nats, shannon_entropy(r, P::separating(r.support())).entropy * std::numbers::ln2, 1e-9);
    }
}

TEST(dirac_detect, examples) {
    auto d = RationalMeasure::dirac(q(3, 10));
    auto lam = dirac_detect(d, q(0), q(1), 20);
    ASSERT_TRUE(lam.has_value());
    EXPECT_LE(abs(*lam - q(3, 10)), Q(1, 1 << 20));
    EXPECT_LE(*lam, q(3, 10));

    EXPECT_FALSE(dirac_detect(m({{q(0), q(1, 2)}, {q(1), q(1, 2)}}), q(0), q(1), 20).has_value());

    auto edge = dirac_detect(RationalMeasure::dirac(q(0)), q(0), q(1), 25);
    ASSERT_TRUE(edge.has_value());
    EXPECT_EQ(*edge, q(0));
    auto right = dirac_detect(RationalMeasure::dirac(q(1)), q(0), q(1), 25);
    ASSERT_TRUE(right.has_value());
    EXPECT_LE(abs(*right - q(1)), Q(1, 1 << 25));

    auto dd = dirac_detect(RealMeasure::dirac(0.3), 0.0, 1.0, 20);
    ASSERT_TRUE(dd.has_value());
    EXPECT_LE(std::abs(*dd - 0.3), std::ldexp(1.0, -20));
}

}  // namespace
}  // namespace oplab
