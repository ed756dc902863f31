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

#include "oplab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "oplab/information.hpp"

namespace oplab {

void ReconstructionProblem::validate() const {
    require(dim > 0, ErrorCode::InvalidArgument, "dimension must be positive");
    require(!frame.empty(), ErrorCode::InvalidArgument, "frame is empty");
    require(observables.size() == expectations.size(), ErrorCode::InvalidArgument,
            "one expectation per observable");
    require(observables.size() >= frame.size(), ErrorCode::InvalidArgument,
            "need at least as many observables as frame vectors");
    require(frame.size() <= dim, ErrorCode::InvalidArgument, "more frame vectors than the dimension");
    for (const auto& x : observables)
        require(x.dim() == dim, ErrorCode::DimMismatch, "observable dimension differs from " + std::to_string(dim));
    for (const auto& v : frame)
        require(static_cast<std::size_t>(v.size()) == dim, ErrorCode::DimMismatch,
                "frame vector dimension differs from " + std::to_string(dim));
    for (std::size_t i = 0; i < frame.size(); ++i)
        for (std::size_t j = i; j < frame.size(); ++j) {
            Complex g = frame[i].dot(frame[j]);
            double target = i == j ? 1.0 : 0.0;
            require(std::abs(g - target) <= kFrameTolerance, ErrorCode::InvalidArgument,
                    "frame is not orthonormal at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
}

Eigen::MatrixXd frame_matrix(const ReconstructionProblem& problem) {
    Eigen::MatrixXd c(problem.frame.size(), problem.observables.size());
    for (std::size_t h = 0; h < problem.frame.size(); ++h)
        for (std::size_t k = 0; k < problem.observables.size(); ++k)
            c(h, k) = problem.frame[h].dot(problem.observables[k].matrix() * problem.frame[h]).real();
    return c;
}

namespace {

// Clamp [-tol, 0) to 0 and scale to sum 1, then fix the last weight so the
// left-to-right double sum is exactly 1: fl(h + fl(1 - h)) == 1 for any
// head sum h in [0, 1].
void normalize_weights(std::vector<double>& lambda) {
    for (std::size_t h = 0; h < lambda.size(); ++h) {
        require(lambda[h] >= -kNegativeWeightTolerance, ErrorCode::NoRealizableFrame,
                "lambda_" + std::to_string(h + 1) + " = " + to_string(lambda[h]) + " is negative");
        if (lambda[h] < 0.0) lambda[h] = 0.0;
    }
    double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    require(total > 0.0, ErrorCode::NoRealizableFrame, "weights sum to zero");
    for (auto& l : lambda) l /= total;
    double head = std::accumulate(lambda.begin(), lambda.end() - 1, 0.0);
    if (head <= 1.0) {
        lambda.back() = 1.0 - head;
        return;
    }
    // head overshoots only when the last weight is ~0; walk the largest by ulps
    lambda.back() = 0.0;
    auto largest = std::max_element(lambda.begin(), lambda.end());
    for (int i = 0; i < 256; ++i) {
        double s = std::accumulate(lambda.begin(), lambda.end(), 0.0);
        if (s == 1.0) break;
        *largest = std::nextafter(*largest, s < 1.0 ? 2.0 : -1.0);
    }
}

}  // namespace

Reconstruction tomography_reconstruct(const ReconstructionProblem& problem) {
    problem.validate();
    const auto n = static_cast<Eigen::Index>(problem.frame.size());
    const auto k = static_cast<Eigen::Index>(problem.observables.size());
    Eigen::MatrixXd c = frame_matrix(problem);
    Eigen::MatrixXd a = c.transpose();
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(problem.expectations.data(), k);

    Eigen::VectorXd sol;
    bool trace_row = true;
    if (k == n) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        lu.setThreshold(1e-12);
        if (lu.isInvertible()) {
            sol = lu.solve(y);
            trace_row = false;
        }
    }
    if (trace_row) {
        Eigen::MatrixXd aug(k + 1, n);
        aug << a, Eigen::RowVectorXd::Ones(n);
        Eigen::VectorXd rhs(k + 1);
        rhs << y, 1.0;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(aug);
        qr.setThreshold(1e-12);
        require(qr.rank() == n, ErrorCode::SingularFrame,
                "frame matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(n) +
                    " even with the trace row");
        sol = qr.solve(rhs);
    }

    std::vector<double> lambda(sol.data(), sol.data() + n);
    normalize_weights(lambda);
    ComplexMatrix m = ComplexMatrix::Zero(problem.dim, problem.dim);
    for (Eigen::Index h = 0; h < n; ++h) m += lambda[h] * problem.frame[h] * problem.frame[h].adjoint();
    DensityState rho(m);
    std::vector<double> residuals;
    for (Eigen::Index j = 0; j < k; ++j)
        residuals.push_back(problem.observables[j].expectation(rho) - problem.expectations[j]);
    return {std::move(lambda), std::move(rho), std::move(residuals), std::move(c), trace_row};
}

const TomographyStage& TomographyStager::add(HermitianObservable x, double y,
                                             std::optional<ComplexVector> frame_vector) {
    problem_.observables.push_back(std::move(x));
    problem_.expectations.push_back(y);
    if (frame_vector) problem_.frame.push_back(std::move(*frame_vector));

    for (std::size_t i = 0; i < last_y_.size(); ++i)
        if (problem_.expectations[i] != last_y_[i]) prefix_stable_ = false;
    Eigen::MatrixXd c = frame_matrix(problem_);
    for (Eigen::Index h = 0; h < last_c_.rows(); ++h)
        for (Eigen::Index j = 0; j < last_c_.cols(); ++j)
            if (c(h, j) != last_c_(h, j)) prefix_stable_ = false;
    last_y_ = problem_.expectations;
    last_c_ = c;

    TomographyStage stage{problem_.observables.size(), problem_.frame.size(), std::nullopt, std::nullopt};
    try {
        stage.result = tomography_reconstruct(problem_);
    } catch (const Error& e) {
        stage.error = e.code();
    }
    stages_.push_back(std::move(stage));
    return stages_.back();
}

Selection purity_selection(const std::vector<Candidate>& candidates, std::optional<double> purity_target,
                           std::optional<double> entropy_target) {
    require(!candidates.empty(), ErrorCode::InvalidArgument, "no candidates to select from");
    std::vector<EntropyPurity> ep;
    for (const auto& c : candidates) ep.push_back(vn_entropy_and_purity(c.rho));
    auto key = [&](std::size_t i) {
        double first = purity_target ? std::abs(ep[i].purity - *purity_target) : 0.0;
        double second = entropy_target ? std::abs(ep[i].entropy - *entropy_target)
                        : purity_target ? 0.0
                                        : -ep[i].entropy;
        return std::make_tuple(first, second, std::cref(candidates[i].lambda));
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (key(i) < key(best)) best = i;
    return {best, ep[best].purity, ep[best].entropy};
}

ComplexMatrix joint_eigenbasis(const std::vector<HermitianObservable>& family) {
    require(!family.empty(), ErrorCode::InvalidArgument, "empty commuting family");
    for (std::size_t i = 0; i < family.size(); ++i) {
        require(family[i].dim() == family[0].dim(), ErrorCode::DimMismatch, "family dimensions differ");
        for (std::size_t j = i + 1; j < family.size(); ++j)
            require(commute(family[i], family[j]), ErrorCode::NotCommuting,
                    "members " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
    }
    // A generic combination separates the joint eigenspaces; retry with other
    // weights if one happens to merge two of them.
    const double weights[] = {0.6180339887498949, 0.4142135623730951, 0.7320508075688772};
    ComplexMatrix basis;
    for (double w : weights) {
        ComplexMatrix combo = ComplexMatrix::Zero(family[0].dim(), family[0].dim());
        double coeff = 1.0;
        for (const auto& a : family) {
            combo += coeff * a.matrix();
            coeff += w;
        }
        basis = HermitianObservable(combo).eigenvectors();
        bool diagonal = true;
        for (const auto& a : family) {
            ComplexMatrix d = basis.adjoint() * a.matrix() * basis;
            d.diagonal().setZero();
            if (max_norm(d) > 1e-8 * std::max(1.0, a.spectral_radius())) diagonal = false;
        }
        if (diagonal) return basis;
    }
    fail(ErrorCode::NotCommuting, "could not separate the joint eigenspaces");
}

}  // namespace oplab
