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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace oplab {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitValidationFailed = 2;

const char* version_string();

struct RunOptions {
    /// simulate, estimate, entropy, dissipation, tomography, kolmogorov,
    /// spectral, validate; "run" dispatches on the config's "kind"
    std::string command;
    std::filesystem::path config;
    std::filesystem::path out_dir;
    std::optional<std::uint64_t> seed;
    /// "rational" or "float"
    std::optional<std::string> mode;
};

struct RunOutcome {
    int exit_code = kExitSuccess;
    /// diagnostic for exit codes 1 and 2
    std::string message;
    std::vector<std::filesystem::path> written;
};

/// Runs one experiment. Never throws; errors map to exit code 1.
RunOutcome run_experiment(const RunOptions& options);

/// Consolidates CSV artifacts (files, or directories scanned for *.csv)
/// into summary.csv and summary.md. Tables with a unique "t" column are
/// joined on it.
RunOutcome run_report(const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& out_dir);

/// Seed precedence: explicit flag, then OPLAB_SEED, then the config value.
std::optional<std::uint64_t> resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config);

}  // namespace oplab
