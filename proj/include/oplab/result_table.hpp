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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oplab/rational.hpp"

namespace oplab {

/// Provenance written as `# key=value` lines after the rows.
struct Provenance {
    std::string config_hash;
    std::optional<std::uint64_t> seed;
    std::string version;
    std::string mode;
};

/// A CSV table with a fixed header.
class ResultTable {
public:
    ResultTable() = default;
    explicit ResultTable(std::vector<std::string> header) : header_(std::move(header)) {}

    /// Throws InvalidArgument when the width differs from the header.
    void add_row(std::vector<std::string> row);

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::optional<std::size_t> column(const std::string& name) const;

    /// Footer lines in insertion order, `key=value` without the '#'.
    std::vector<std::pair<std::string, std::string>> footer;
    void set_provenance(const Provenance& p);

    std::string to_csv() const;
    void write(const std::filesystem::path& path) const;
    /// Inverse of to_csv; throws ParseError.
    static ResultTable parse(const std::string& text, const std::string& name);
    static ResultTable read(const std::filesystem::path& path);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(const Rational& v);
std::string cell(std::size_t v);
std::string cell(bool v);
inline std::string cell(std::string v) { return v; }
inline std::string cell(const char* v) { return v; }

/// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a64(const std::string& bytes);

}  // namespace oplab
