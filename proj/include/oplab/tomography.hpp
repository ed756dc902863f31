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

#include <optional>
#include <vector>

#include "oplab/spectral.hpp"

namespace oplab {

inline constexpr double kFrameTolerance = 1e-10;
inline constexpr double kNegativeWeightTolerance = 1e-9;

/// Expectations y_k of observables X_k and an orthonormal frame Psi_h. There
/// may be more observables than frame vectors; the square case is the usual
/// one.
struct ReconstructionProblem {
    std::size_t dim = 0;
    std::vector<HermitianObservable> observables;
    std::vector<double> expectations;
    std::vector<ComplexVector> frame;

    /// Throws DimMismatch, InvalidArgument (counts, non-orthonormal frame).
    void validate() const;
};

struct Reconstruction {
    std::vector<double> lambda;
    DensityState rho;
    /// tr(rho X_k) - y_k
    std::vector<double> residuals;
    /// c_{h,k} = <Psi_h | X_k Psi_h>
    Eigen::MatrixXd c;
    /// true when C^T was not square and invertible and the trace row
    /// sum lambda = 1 was added to the system
    bool trace_row_used;
};

/// c_{h,k} = <Psi_h | X_k Psi_h>, frame vectors by row.
Eigen::MatrixXd frame_matrix(const ReconstructionProblem& problem);

/// Solves C^T lambda = y. Throws SingularFrame when lambda is not determined
/// even with the trace row, NoRealizableFrame when some lambda_h < -1e-9.
Reconstruction tomography_reconstruct(const ReconstructionProblem& problem);

/// One stage of the n -> n+1 iteration: the result or the error it raised.
struct TomographyStage {
    std::size_t observables;
    std::size_t frame_vectors;
    std::optional<Reconstruction> result;
    std::optional<ErrorCode> error;
};

/// Grows a problem one observable (and optionally one frame vector) at a
/// time, re-solving at each stage. Earlier expectations and C entries are
/// checked to stay bit-identical.
class TomographyStager {
public:
    explicit TomographyStager(std::size_t dim) { problem_.dim = dim; }

    const TomographyStage& add(HermitianObservable x, double y, std::optional<ComplexVector> frame_vector);
    const std::vector<TomographyStage>& stages() const { return stages_; }
    const ReconstructionProblem& problem() const { return problem_; }
    /// false once a stage changed an earlier y or C entry
    bool prefix_stable() const { return prefix_stable_; }

private:
    ReconstructionProblem problem_;
    std::vector<TomographyStage> stages_;
    std::vector<double> last_y_;
    Eigen::MatrixXd last_c_;
    bool prefix_stable_ = true;
};

struct Candidate {
    std::vector<double> lambda;
    DensityState rho;
};

struct Selection {
    std::size_t index;
    double purity;
    /// nats
    double entropy;
};

/// Nearest purity to p*, then nearest entropy to s*, then lexicographically
/// smallest lambda. Without targets the maximum-entropy candidate wins.
Selection purity_selection(const std::vector<Candidate>& candidates, std::optional<double> purity_target,
                           std::optional<double> entropy_target);

/// Orthonormal basis diagonalizing every member of a commuting family
/// (columns). Throws NotCommuting.
ComplexMatrix joint_eigenbasis(const std::vector<HermitianObservable>& family);

}  // namespace oplab
