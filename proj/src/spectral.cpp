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

#include "oplab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace oplab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
    require(m.rows() > 0 && m.rows() == m.cols(), ErrorCode::InvalidArgument, std::string(what) + " must be a non-empty square matrix");
    require(m.allFinite(), ErrorCode::InvalidArgument, std::string(what) + " has non-finite entries");
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    require(a == b, ErrorCode::DimMismatch,
            std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
}

ComplexMatrix from_eigen(const ComplexMatrix& vectors, const Eigen::VectorXd& values) {
    return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

double trace_real(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace

double max_norm(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

HermitianObservable::HermitianObservable(const ComplexMatrix& m) {
    require_square(m, "observable");
    double asym = max_norm(m - m.adjoint());
    require(asym <= kHermitianTolerance, ErrorCode::NotHermitian,
            "||M - M^dagger||_max = " + to_string(asym) + " exceeds tolerance");
    matrix_ = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_);
    require(solver.info() == Eigen::Success, ErrorCode::InvalidArgument, "eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();

    const double radius = std::max(std::abs(eigenvalues_(0)), std::abs(eigenvalues_(eigenvalues_.size() - 1)));
    const double tol = kSpectrumDedupTolerance * std::max(1.0, radius);
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!spectrum_.empty() && eigenvalues_(i) - eigenvalues_(i - 1) <= tol) {
            ++spectrum_.back().multiplicity;
        } else {
            spectrum_.push_back({0.0, i, 1});
        }
    }
    for (auto& p : spectrum_) {
        p.value = eigenvalues_.segment(p.first, p.multiplicity).mean();
    }
}

HermitianObservable HermitianObservable::from_real(const Eigen::MatrixXd& m) { return HermitianObservable(ComplexMatrix(m.cast<Complex>())); }

HermitianObservable HermitianObservable::diagonal(const std::vector<double>& values) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return HermitianObservable(ComplexMatrix(v.cast<Complex>().asDiagonal()));
}

HermitianObservable HermitianObservable::identity(std::size_t dim) {
    return HermitianObservable(ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

std::vector<double> HermitianObservable::spectrum_values() const {
    std::vector<double> out;
    for (const auto& p : spectrum_) out.push_back(p.value);
    return out;
}

double HermitianObservable::spectral_radius() const { return std::max(std::abs(min_eigenvalue()), std::abs(max_eigenvalue())); }

ComplexMatrix HermitianObservable::point_projector(std::size_t k) const {
    const auto& p = spectrum_.at(k);
    auto block = eigenvectors_.middleCols(static_cast<Eigen::Index>(p.first), static_cast<Eigen::Index>(p.multiplicity));
    return block * block.adjoint();
}

ComplexMatrix HermitianObservable::projector(const BorelSet<double>& set) const {
    ComplexMatrix out = ComplexMatrix::Zero(matrix_.rows(), matrix_.cols());
    for (std::size_t k = 0; k < spectrum_.size(); ++k)
        if (set.contains(spectrum_[k].value)) out += point_projector(k);
    return out;
}

double HermitianObservable::expectation(const DensityState& rho) const {
    require_same_dim(dim(), rho.dim(), "expectation");
    return trace_real(rho.matrix() * matrix_);
}

DensityState::DensityState(const ComplexMatrix& m) {
    require_square(m, "density matrix");
    double asym = max_norm(m - m.adjoint());
    require(asym <= kHermitianTolerance, ErrorCode::NotDensity, "density matrix is not Hermitian");
    ComplexMatrix h = (m + m.adjoint()) / 2.0;
    double tr = trace_real(h);
    require(std::abs(tr - 1.0) <= kDensityTolerance, ErrorCode::NotDensity, "trace " + to_string(tr) + " differs from 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    require(solver.info() == Eigen::Success, ErrorCode::NotDensity, "eigendecomposition failed");
    Eigen::VectorXd values = solver.eigenvalues();
    require(values(0) >= -kDensityTolerance, ErrorCode::NotDensity,
            "negative eigenvalue " + to_string(values(0)));
    values = values.cwiseMax(0.0);
    values /= values.sum();
    eigenvalues_ = values;
    eigenvectors_ = solver.eigenvectors();
    matrix_ = from_eigen(eigenvectors_, eigenvalues_);
}

DensityState DensityState::pure(const ComplexVector& psi) {
    require(psi.size() > 0 && psi.norm() > 0, ErrorCode::InvalidArgument, "pure state needs a nonzero vector");
    ComplexVector v = psi / psi.norm();
    return DensityState(ComplexMatrix(v * v.adjoint()));
}

DensityState DensityState::maximally_mixed(std::size_t dim) {
    require(dim > 0, ErrorCode::InvalidArgument, "dimension must be positive");
    auto d = static_cast<Eigen::Index>(dim);
    return DensityState(ComplexMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(dim)));
}

DensityState DensityState::diagonal(const std::vector<double>& probabilities) {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(probabilities.data(), static_cast<Eigen::Index>(probabilities.size()));
    return DensityState(ComplexMatrix(v.cast<Complex>().asDiagonal()));
}

Question::Question(HermitianObservable q) : q_(std::move(q)) {
    for (const auto& p : q_.spectrum()) {
        require(std::abs(p.value) <= kSpectrumDedupTolerance || std::abs(p.value - 1.0) <= kSpectrumDedupTolerance,
                ErrorCode::NotAQuestion, "spectral point " + to_string(p.value) + " is not 0 or 1");
    }
    double idem = max_norm(q_.matrix() * q_.matrix() - q_.matrix());
    require(idem <= kProjectionTolerance, ErrorCode::NotAQuestion, "q^2 != q (residual " + to_string(idem) + ")");
}

Question Question::complement() const {
    auto d = static_cast<Eigen::Index>(q_.dim());
    return Question(HermitianObservable(ComplexMatrix(ComplexMatrix::Identity(d, d) - q_.matrix())));
}

LabSystem::LabSystem(std::map<std::string, HermitianObservable> observables, std::map<std::string, DensityState> states,
                     std::set<std::pair<std::string, std::string>> suitability)
    : observables_(std::move(observables)), states_(std::move(states)), suitability_(std::move(suitability)) {
    require(!observables_.empty() && !states_.empty(), ErrorCode::InvalidArgument,
            "a lab system needs at least one observable and one state");
    dim_ = observables_.begin()->second.dim();
    for (const auto& [label, a] : observables_) require_same_dim(dim_, a.dim(), ("observable " + label).c_str());
    for (const auto& [label, s] : states_) require_same_dim(dim_, s.dim(), ("state " + label).c_str());
    for (const auto& [s, a] : suitability_) {
        require(states_.count(s) > 0, ErrorCode::InvalidArgument, "suitability names unknown state " + s);
        require(observables_.count(a) > 0, ErrorCode::InvalidArgument, "suitability names unknown observable " + a);
    }
    for (const auto& [label, a] : observables_) {
        bool any = std::any_of(suitability_.begin(), suitability_.end(), [&](const auto& p) { return p.second == label; });
        require(any, ErrorCode::InvalidArgument, "observable " + label + " has no suitable state");
    }
    for (const auto& [label, s] : states_) {
        bool any = std::any_of(suitability_.begin(), suitability_.end(), [&](const auto& p) { return p.first == label; });
        require(any, ErrorCode::InvalidArgument, "state " + label + " has no suitable observable");
    }
}

const HermitianObservable& LabSystem::observable(const std::string& label) const {
    auto it = observables_.find(label);
    require(it != observables_.end(), ErrorCode::InvalidArgument, "unknown observable " + label);
    return it->second;
}

const DensityState& LabSystem::state(const std::string& label) const {
    auto it = states_.find(label);
    require(it != states_.end(), ErrorCode::InvalidArgument, "unknown state " + label);
    return it->second;
}

bool LabSystem::suitable(const std::string& state, const std::string& observable) const {
    return suitability_.count({state, observable}) > 0;
}

std::vector<std::string> LabSystem::states_suitable_for(const std::string& observable) const {
    std::vector<std::string> out;
    for (const auto& [s, a] : suitability_)
        if (a == observable) out.push_back(s);
    return out;
}

RealMeasure spectral_measure(const HermitianObservable& a, const DensityState& rho) {
    require_same_dim(a.dim(), rho.dim(), "spectral_measure");
    std::vector<Atom<double>> atoms;
    const auto& vecs = a.eigenvectors();
    for (const auto& p : a.spectrum()) {
        double w = 0.0;
        for (std::size_t i = p.first; i < p.first + p.multiplicity; ++i) {
            auto v = vecs.col(static_cast<Eigen::Index>(i));
            w += (v.adjoint() * rho.matrix() * v)(0, 0).real();
        }
        if (w < kWeightFloor) w = 0.0;
        atoms.push_back({p.value, w});
    }
    return RealMeasure(std::move(atoms));
}

HermitianObservable functional_calc(const HermitianObservable& a, const std::function<double(double)>& f) {
    Eigen::VectorXd values(a.eigenvalues().size());
    for (const auto& p : a.spectrum()) {
        double fv = f(p.value);
        require(std::isfinite(fv), ErrorCode::DomainError, "function undefined at spectral point " + to_string(p.value));
        values.segment(static_cast<Eigen::Index>(p.first), static_cast<Eigen::Index>(p.multiplicity)).setConstant(fv);
    }
    return HermitianObservable(from_eigen(a.eigenvectors(), values));
}

SpectrumAndNorm spectrum_and_norm(const HermitianObservable& a, const std::vector<DensityState>* family) {
    SpectrumAndNorm out{a.spectrum_values(), a.spectral_radius(), a.spectral_radius()};
    if (family != nullptr) {
        double best = 0.0;
        for (const auto& rho : *family) best = std::max(best, std::abs(a.expectation(rho)));
        out.norm = best;
    }
    return out;
}

DensityState sps_witness(const HermitianObservable& a, double s) {
    const double lo = a.min_eigenvalue();
    const double hi = a.max_eigenvalue();
    const double slack = 1e-12 * std::max(1.0, a.spectral_radius());
    require(s >= lo - slack && s <= hi + slack, ErrorCode::OutOfSpectralRange,
            to_string(s) + " lies outside [" + to_string(lo) + ", " + to_string(hi) + "]");
    const auto& bottom = a.spectrum().front();
    const auto& top = a.spectrum().back();
    ComplexMatrix p_top = a.point_projector(a.spectrum().size() - 1) / static_cast<double>(top.multiplicity);
    if (a.spectrum().size() == 1) return DensityState(p_top);
    ComplexMatrix p_bottom = a.point_projector(0) / static_cast<double>(bottom.multiplicity);
    double t = std::clamp((s - bottom.value) / (top.value - bottom.value), 0.0, 1.0);
    return DensityState(ComplexMatrix((1.0 - t) * p_bottom + t * p_top));
}

PositiveParts positive_parts(const HermitianObservable& a) {
    Eigen::VectorXd pos = a.eigenvalues().cwiseMax(0.0);
    Eigen::VectorXd neg = (-a.eigenvalues()).cwiseMax(0.0);
    return {HermitianObservable(from_eigen(a.eigenvectors(), pos)), HermitianObservable(from_eigen(a.eigenvectors(), neg))};
}

HermitianObservable jordan_product(const HermitianObservable& a, const HermitianObservable& b) {
    require_same_dim(a.dim(), b.dim(), "jordan_product");
    return HermitianObservable(ComplexMatrix((a.matrix() * b.matrix() + b.matrix() * a.matrix()) / 2.0));
}

double commutator_norm(const HermitianObservable& a, const HermitianObservable& b) {
    require_same_dim(a.dim(), b.dim(), "commutator");
    return max_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

bool commute(const HermitianObservable& a, const HermitianObservable& b, double tol) { return commutator_norm(a, b) <= tol; }

QuestionReport question_ops(const Question& q) { return {q.complement(), q.observable().spectrum_values()}; }

QuestionTimes question_times(const Question& p, const HermitianObservable& a, const DensityState& rho) {
    const auto& pm = p.observable();
    require_same_dim(pm.dim(), a.dim(), "question_times");
    require_same_dim(a.dim(), rho.dim(), "question_times");
    double comm = commutator_norm(pm, a);
    require(comm <= kCommutationTolerance, ErrorCode::NotCommuting, "[p, A] has max-norm " + to_string(comm));
    HermitianObservable product(ComplexMatrix(pm.matrix() * a.matrix()));
    double r1 = pm.expectation(rho);
    double r0 = 1.0 - r1;
    std::vector<Atom<double>> cond;
    if (r1 > kWeightFloor) {
        for (std::size_t k = 0; k < a.spectrum().size(); ++k) {
            double w = trace_real(rho.matrix() * pm.matrix() * a.point_projector(k)) / r1;
            if (w < kWeightFloor) w = 0.0;
            cond.push_back({a.spectrum()[k].value, w});
        }
    }
    return {product, spectral_measure(product, rho), r0, r1, RealMeasure(std::move(cond))};
}

JointMeasure<double> joint_spectral_measure(const HermitianObservable& a, const HermitianObservable& b,
                                            const DensityState& rho) {
    require_same_dim(a.dim(), b.dim(), "joint_spectral_measure");
    require_same_dim(a.dim(), rho.dim(), "joint_spectral_measure");
    double comm = commutator_norm(a, b);
    require(comm <= kCommutationTolerance, ErrorCode::NotCommuting,
            "incompatible observables: [A, B] has max-norm " + to_string(comm));
    std::vector<JointAtom<double>> atoms;
    for (std::size_t k = 0; k < a.spectrum().size(); ++k) {
        ComplexMatrix pk = a.point_projector(k);
        for (std::size_t l = 0; l < b.spectrum().size(); ++l) {
            double w = trace_real(rho.matrix() * pk * b.point_projector(l));
            if (w < kWeightFloor) continue;
            atoms.push_back({a.spectrum()[k].value, b.spectrum()[l].value, w});
        }
    }
    return JointMeasure<double>(std::move(atoms));
}

std::vector<std::pair<double, double>> joint_spectrum(const HermitianObservable& a, const HermitianObservable& b) {
    require_same_dim(a.dim(), b.dim(), "joint_spectrum");
    double comm = commutator_norm(a, b);
    require(comm <= kCommutationTolerance, ErrorCode::NotCommuting, "[A, B] has max-norm " + to_string(comm));
    std::vector<std::pair<double, double>> out;
    for (std::size_t k = 0; k < a.spectrum().size(); ++k) {
        ComplexMatrix pk = a.point_projector(k);
        for (std::size_t l = 0; l < b.spectrum().size(); ++l) {
            // a product of commuting projectors is a projector: norm 0 or 1
            if ((pk * b.point_projector(l)).norm() > 0.5) out.emplace_back(a.spectrum()[k].value, b.spectrum()[l].value);
        }
    }
    return out;
}

ComplexMatrix joint_operator(const HermitianObservable& a, const HermitianObservable& b) {
    require_same_dim(a.dim(), b.dim(), "joint_operator");
    auto d = static_cast<Eigen::Index>(a.dim());
    ComplexMatrix out = ComplexMatrix::Zero(2 * d, 2 * d);
    out.topRightCorner(d, d) = a.matrix();
    out.bottomLeftCorner(d, d) = b.matrix();
    return out;
}

std::pair<double, double> pair_expectation(const HermitianObservable& a, const HermitianObservable& b,
                                           const DensityState& rho) {
    return {a.expectation(rho), b.expectation(rho)};
}

EpsilonDecomposition epsilon_decomposition(const HermitianObservable& a, const std::function<double(double)>& f,
                                           double epsilon) {
    require(epsilon > 0, ErrorCode::InvalidArgument, "epsilon must be positive");
    const auto& points = a.spectrum();
    std::vector<double> fv(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        fv[k] = f(points[k].value);
        require(std::isfinite(fv[k]), ErrorCode::DomainError, "function undefined at spectral point " + to_string(points[k].value));
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return fv[i] < fv[j]; });

    EpsilonDecomposition out{{}, {}, 0.0, 0.0};
    ComplexMatrix approx = ComplexMatrix::Zero(a.matrix().rows(), a.matrix().cols());
    std::size_t start = 0;
    while (start < order.size()) {
        std::size_t end = start + 1;
        while (end < order.size() && fv[order[end]] - fv[order[start]] < epsilon) ++end;
        // sample at the member whose value is closest to the middle of the cell's range
        double mid = (fv[order[start]] + fv[order[end - 1]]) / 2.0;
        std::size_t sample = order[start];
        std::vector<double> members;
        for (std::size_t i = start; i < end; ++i) {
            members.push_back(points[order[i]].value);
            if (std::abs(fv[order[i]] - mid) < std::abs(fv[sample] - mid)) sample = order[i];
        }
        for (std::size_t i = start; i < end; ++i) out.error_bound = std::max(out.error_bound, std::abs(fv[order[i]] - fv[sample]));
        BorelSet<double> cell = BorelSet<double>::points(members);
        approx += fv[sample] * a.projector(cell);
        out.cells.push_back(std::move(cell));
        out.sample_points.push_back(points[sample].value);
        start = end;
    }
    HermitianObservable exact = functional_calc(a, f);
    out.operator_norm_error = operator_norm(exact.matrix() - approx);
    return out;
}

double variance(const HermitianObservable& a, const DensityState& rho) {
    RealMeasure mu = spectral_measure(a, rho);
    double m = 0.0;
    for (const auto& atom : mu.atoms()) m += atom.point * atom.weight;
    double v = 0.0;
    for (const auto& atom : mu.atoms()) v += (atom.point - m) * (atom.point - m) * atom.weight;
    return v;
}

Uncertainty variance_and_uncertainty(const HermitianObservable& a, const HermitianObservable& b,
                                     const DensityState& rho) {
    require_same_dim(a.dim(), b.dim(), "variance_and_uncertainty");
    require_same_dim(a.dim(), rho.dim(), "variance_and_uncertainty");
    Complex c = (rho.matrix() * (a.matrix() * b.matrix() - b.matrix() * a.matrix())).trace();
    return {variance(a, rho), variance(b, rho), std::norm(c) / 4.0};
}

}  // namespace oplab
