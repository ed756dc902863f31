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

#include "oplab/result_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "oplab/errors.hpp"

namespace oplab {

void ResultTable::add_row(std::vector<std::string> row) {
    require(row.size() == header_.size(), ErrorCode::InvalidArgument,
            "row has " + std::to_string(row.size()) + " cells, header has " + std::to_string(header_.size()));
    rows_.push_back(std::move(row));
}

std::optional<std::size_t> ResultTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

void ResultTable::set_provenance(const Provenance& p) {
    footer.clear();
    footer.emplace_back("config_hash", p.config_hash);
    footer.emplace_back("seed", p.seed ? std::to_string(*p.seed) : "none");
    footer.emplace_back("version", p.version);
    footer.emplace_back("mode", p.mode);
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && (s.empty() || s[0] != '#')) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += quote(cells[i]);
    }
    out += '\n';
}

// Splits one logical record starting at `pos`; quoted fields may span lines.
std::vector<std::string> split_record(const std::string& text, std::size_t& pos, const std::string& name,
                                      std::size_t line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false, was_quoted = false;
    while (pos < text.size()) {
        char c = text[pos++];
        if (quoted) {
            if (c == '"') {
                if (pos < text.size() && text[pos] == '"') {
                    cur += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty() && !was_quoted) {
            quoted = was_quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else if (c == '\n') {
            break;
        } else if (c != '\r') {
            cur += c;
        }
    }
    require(!quoted, ErrorCode::ParseError, name + ":" + std::to_string(line) + ": unterminated quote");
    cells.push_back(std::move(cur));
    return cells;
}

}  // namespace

std::string ResultTable::to_csv() const {
    std::string out;
    append_line(out, header_);
    for (const auto& r : rows_) append_line(out, r);
    for (const auto& [k, v] : footer) out += "# " + k + "=" + v + "\n";
    return out;
}

void ResultTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorCode::IoError, "cannot write " + path.string());
    out << to_csv();
    require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

ResultTable ResultTable::parse(const std::string& text, const std::string& name) {
    ResultTable t;
    std::size_t pos = 0, line = 0;
    bool have_header = false;
    while (pos < text.size()) {
        ++line;
        if (text[pos] == '#') {
            auto end = text.find('\n', pos);
            std::string l = text.substr(pos + 1, end == std::string::npos ? std::string::npos : end - pos - 1);
            if (!l.empty() && l.back() == '\r') l.pop_back();
            if (!l.empty() && l[0] == ' ') l.erase(0, 1);
            auto eq = l.find('=');
            t.footer.emplace_back(l.substr(0, eq), eq == std::string::npos ? "" : l.substr(eq + 1));
            pos = end == std::string::npos ? text.size() : end + 1;
            continue;
        }
        if (text[pos] == '\n') {
            ++pos;
            continue;
        }
        auto cells = split_record(text, pos, name, line);
        if (!have_header) {
            t.header_ = std::move(cells);
            have_header = true;
        } else {
            require(cells.size() == t.header_.size(), ErrorCode::ParseError,
                    name + ":" + std::to_string(line) + ": expected " + std::to_string(t.header_.size()) +
                        " cells, found " + std::to_string(cells.size()));
            t.rows_.push_back(std::move(cells));
        }
    }
    require(have_header, ErrorCode::ParseError, name + ": no header row");
    return t;
}

ResultTable ResultTable::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::string cell(double v) { return to_string(v); }
std::string cell(const Rational& v) { return to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace oplab
