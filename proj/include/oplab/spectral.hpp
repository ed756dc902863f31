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

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oplab/borel_set.hpp"
#include "oplab/joint_measure.hpp"
#include "oplab/measure.hpp"

namespace oplab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-10;
/// Eigenvalues closer than this (times max(1, spectral radius)) are one
/// spectral point.
inline constexpr double kSpectrumDedupTolerance = 1e-8;
inline constexpr double kCommutationTolerance = 1e-10;
inline constexpr double kDensityTolerance = 1e-10;
inline constexpr double kProjectionTolerance = 1e-9;
/// Spectral weights below this are treated as roundoff and dropped.
inline constexpr double kWeightFloor = 1e-13;

double max_norm(const ComplexMatrix& m);
/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

class DensityState;

/// A distinct eigenvalue and the contiguous block of (ascending) eigenvector
/// columns spanning its eigenspace.
struct SpectralPoint {
    double value;
    std::size_t first;
    std::size_t multiplicity;
};

/// d x d Hermitian matrix with its eigendecomposition computed once.
class HermitianObservable {
public:
    /// Symmetrizes (M + M^†)/2; throws NotHermitian when ||M - M^†||_max
    /// exceeds kHermitianTolerance.
    explicit HermitianObservable(const ComplexMatrix& m);

    static HermitianObservable from_real(const Eigen::MatrixXd& m);
    static HermitianObservable diagonal(const std::vector<double>& values);
    static HermitianObservable identity(std::size_t dim);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix& eigenvectors() const { return eigenvectors_; }
    const std::vector<SpectralPoint>& spectrum() const { return spectrum_; }
    std::vector<double> spectrum_values() const;
    double spectral_radius() const;
    double min_eigenvalue() const { return eigenvalues_(0); }
    double max_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }

    /// Orthogonal projector onto the eigenspace of spectrum()[k].
    ComplexMatrix point_projector(std::size_t k) const;
    /// Spectral projector 1_set(A): sum of eigenspace projectors whose
    /// spectral point lies in `set`.
    ComplexMatrix projector(const BorelSet<double>& set) const;

    double expectation(const DensityState& rho) const;

private:
    ComplexMatrix matrix_;
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
    std::vector<SpectralPoint> spectrum_;
};

/// Positive semidefinite, trace-one matrix. Eigenvalues within
/// kDensityTolerance below zero are clamped and the trace renormalized.
class DensityState {
public:
    explicit DensityState(const ComplexMatrix& m);

    static DensityState pure(const ComplexVector& psi);
    static DensityState maximally_mixed(std::size_t dim);
    static DensityState diagonal(const std::vector<double>& probabilities);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    /// ascending
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

private:
    ComplexMatrix matrix_;
    Eigen::VectorXd eigenvalues_;
    ComplexMatrix eigenvectors_;
};

/// A Hermitian projection: spectrum inside {0, 1} and q^2 = q.
class Question {
public:
    explicit Question(HermitianObservable q);
    explicit Question(const ComplexMatrix& m) : Question(HermitianObservable(m)) {}

    const HermitianObservable& observable() const { return q_; }
    Question complement() const;
    /// Spectrum is a single point (q = 0 or q = I).
    bool is_trivial() const { return q_.spectrum().size() == 1; }

private:
    HermitianObservable q_;
};

/// Observables, states and the explicit suitability relation between them.
class LabSystem {
public:
    LabSystem(std::map<std::string, HermitianObservable> observables, std::map<std::string, DensityState> states,
              std::set<std::pair<std::string, std::string>> suitability);

    const std::map<std::string, HermitianObservable>& observables() const { return observables_; }
    const std::map<std::string, DensityState>& states() const { return states_; }
    /// (state label, observable label) pairs
    const std::set<std::pair<std::string, std::string>>& suitability() const { return suitability_; }

    const HermitianObservable& observable(const std::string& label) const;
    const DensityState& state(const std::string& label) const;
    bool suitable(const std::string& state, const std::string& observable) const;
    std::vector<std::string> states_suitable_for(const std::string& observable) const;
    std::size_t dim() const { return dim_; }

private:
    std::map<std::string, HermitianObservable> observables_;
    std::map<std::string, DensityState> states_;
    std::set<std::pair<std::string, std::string>> suitability_;
    std::size_t dim_ = 0;
};

RealMeasure spectral_measure(const HermitianObservable& a, const DensityState& rho);

/// f applied to the eigenvalues; throws DomainError when f is not finite on
/// the spectrum.
HermitianObservable functional_calc(const HermitianObservable& a, const std::function<double(double)>& f);

struct SpectrumAndNorm {
    std::vector<double> spectrum;
    double spectral_radius;
    /// max |tr(rho A)| over the supplied family, or the full-state-space value
    /// (equal to the spectral radius) when no family is given
    double norm;
};

SpectrumAndNorm spectrum_and_norm(const HermitianObservable& a, const std::vector<DensityState>* family = nullptr);

/// A state with tr(rho A) = s, mixed from the extreme eigenprojectors.
DensityState sps_witness(const HermitianObservable& a, double s);

struct PositiveParts {
    HermitianObservable positive;
    HermitianObservable negative;
};

PositiveParts positive_parts(const HermitianObservable& a);

HermitianObservable jordan_product(const HermitianObservable& a, const HermitianObservable& b);

/// ||AB - BA||_max
double commutator_norm(const HermitianObservable& a, const HermitianObservable& b);
bool commute(const HermitianObservable& a, const HermitianObservable& b, double tol = kCommutationTolerance);

struct QuestionReport {
    Question complement;
    std::vector<double> spectrum;
};

QuestionReport question_ops(const Question& q);

struct QuestionTimes {
    HermitianObservable product;
    /// r0 delta_0 + r1 P1
    RealMeasure measure;
    double r0;
    double r1;
    /// conditional law of A on the range of p; empty when r1 = 0
    RealMeasure conditional;
};

/// Spectral measure of p·A for a question p commuting with A.
QuestionTimes question_times(const Question& p, const HermitianObservable& a, const DensityState& rho);

JointMeasure<double> joint_spectral_measure(const HermitianObservable& a, const HermitianObservable& b,
                                            const DensityState& rho);
/// Pairs (lambda, mu) of spectral points whose eigenspaces intersect.
std::vector<std::pair<double, double>> joint_spectrum(const HermitianObservable& a, const HermitianObservable& b);

/// Block matrix [[0, A], [B, 0]].
ComplexMatrix joint_operator(const HermitianObservable& a, const HermitianObservable& b);
std::pair<double, double> pair_expectation(const HermitianObservable& a, const HermitianObservable& b,
                                           const DensityState& rho);

struct EpsilonDecomposition {
    std::vector<BorelSet<double>> cells;
    std::vector<double> sample_points;
    /// max over spectral points of |f(lambda) - f(t_k)| for its cell
    double error_bound;
    /// ||f(A) - sum_k f(t_k) 1_{cell_k}(A)||_op computed directly
    double operator_norm_error;
};

EpsilonDecomposition epsilon_decomposition(const HermitianObservable& a, const std::function<double(double)>& f,
                                           double epsilon);

struct Uncertainty {
    double variance_a;
    double variance_b;
    /// (1/4)|tr(rho [A, B])|^2
    double lower_bound;
};

Uncertainty variance_and_uncertainty(const HermitianObservable& a, const HermitianObservable& b,
                                     const DensityState& rho);

double variance(const HermitianObservable& a, const DensityState& rho);

}  // namespace oplab
