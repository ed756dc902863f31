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

#include <filesystem>

#include "oplab/errors.hpp"
#include "oplab/json_io.hpp"
#include "oplab/result_table.hpp"

namespace oplab {
namespace {

using io::json;
using Q = Rational;

std::string message_of(const std::function<void()>& f, ErrorCode expect) {
    try {
        f();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), expect) << e.what();
        return e.what();
    }
    ADD_FAILURE() << "no error raised";
    return {};
}

TEST(json, syntax_errors_carry_location) {
    auto msg = message_of([] { io::parse_json("{\n  \"a\": 1,\n  \"b\" 2\n}", "cfg.json"); }, ErrorCode::ParseError);
    EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
    message_of([] { io::read_json_file("/nonexistent/x.json"); }, ErrorCode::IoError);
}

TEST(json, measure_parsing_and_paths) {
    auto j = json::parse(R"({"atoms": [[0, "1/3"], ["0.5", "2/3"]]})");
    auto mu = io::measure_from_json<Q>(j, "inputs.truth");
    ASSERT_EQ(mu.size(), 2u);
    EXPECT_EQ(mu.atoms()[1].point, Q(1, 2));
    EXPECT_EQ(mu.atoms()[0].weight, Q(1, 3));

    auto d = io::measure_from_json<double>(j, "m");
    EXPECT_NEAR(d.atoms()[0].weight, 1.0 / 3, 1e-15);

    // decimal literals read as their shortest decimal value
    auto tenth = io::measure_from_json<Q>(json::parse(R"({"atoms": [[0.1, 1]]})"), "m");
    EXPECT_EQ(tenth.atoms()[0].point, Q(1, 10));

    auto bad = json::parse(R"({"atoms": [[0, 1], [2]]})");
    auto msg = message_of([&] { io::measure_from_json<Q>(bad, "inputs.truth"); }, ErrorCode::ParseError);
    EXPECT_NE(msg.find("inputs.truth.atoms[1]"), std::string::npos) << msg;
    message_of([] { io::measure_from_json<Q>(json::parse(R"({"atoms": [[0, "x/y"]]})"), "m"); }, ErrorCode::ParseError);
    message_of([] { io::measure_from_json<Q>(json::parse(R"({"points": []})"), "m"); }, ErrorCode::ParseError);
}

TEST(json, measure_round_trip) {
    RationalMeasure mu({{Q(-3), Q(1, 7)}, {Q(5, 2), Q(6, 7)}});
    auto back = io::measure_from_json<Q>(io::measure_to_json(mu), "m");
    EXPECT_EQ(back, mu);
}

TEST(json, borel_sets_and_partitions) {
    auto s = io::borel_set_from_json<Q>(
        json::parse(R"({"intervals": [[0, "1/2"], ["2", "inf"]], "closed": [[-2, -1]], "points": [7]})"), "s");
    EXPECT_TRUE(s.contains(Q(0)));
    EXPECT_FALSE(s.contains(Q(1, 2)));
    EXPECT_TRUE(s.contains(Q(1000)));
    EXPECT_TRUE(s.contains(Q(-1)));
    EXPECT_TRUE(s.contains(Q(7)));
    EXPECT_FALSE(s.contains(Q(3, 2)));

    auto dy = io::partition_from_json<Q>(json::parse(R"({"dyadic": {"window": [0, 1], "depth": 3}})"), "p");
    EXPECT_EQ(dy.cells.size(), 8u);
    auto sep = io::partition_from_json<Q>(json::parse(R"({"separating": [2, 0, 1]})"), "p");
    EXPECT_EQ(sep.cells.size(), 3u);
    auto explicit_cells = io::partition_from_json<Q>(
        json::parse(R"({"window": [0, 2], "cells": [{"intervals": [[0, 1]]}, {"closed": [[1, 2]]}]})"), "p");
    EXPECT_EQ(explicit_cells.cells.size(), 2u);
    message_of([] {
        io::partition_from_json<Q>(json::parse(R"({"window": [0, 2], "cells": [{"closed": [[0, 1]]}, {"closed": [[1, 2]]}]})"),
                                   "p");
    }, ErrorCode::ParseError);
}

TEST(json, matrices) {
    auto m = io::matrix_from_json(json::parse(R"([[1, [0, -1]], [[0, 1], 2]])"), "m");
    EXPECT_EQ(m(0, 1), Complex(0, -1));
    EXPECT_EQ(m(1, 1), Complex(2, 0));
    auto back = io::matrix_from_json(io::matrix_to_json(m), "m");
    EXPECT_EQ(back, m);
    message_of([] { io::matrix_from_json(json::parse(R"([[1, 2], [3]])"), "m"); }, ErrorCode::ParseError);
    message_of([] { io::observable_from_json(json::parse(R"([[0, 1], [2, 0]])"), "o"); }, ErrorCode::NotHermitian);
    message_of([] { io::state_from_json(json::parse(R"([[1, 0], [0, 1]])"), "s"); }, ErrorCode::NotDensity);
}

TEST(json, kolmogorov_problem) {
    auto j = json::parse(R"({
      "spaces": [{"name": "A", "outcomes": [0, 1]}, {"name": "B", "outcomes": [0, 1]}],
      "constraints": [
        {"type": "marginal", "event": {"A": 1}, "probability": "1/2"},
        {"label": "e", "type": "expectation", "observables": ["A", "B"], "value": "1/4"}
      ]})");
    auto p = io::kolmogorov_problem_from_json(j, "inputs");
    EXPECT_EQ(p.spaces.size(), 2u);
    ASSERT_EQ(p.constraints.size(), 2u);
    EXPECT_EQ(p.constraints[0].label, "c1");
    EXPECT_EQ(p.constraints[1].label, "e");
    j["constraints"][0]["type"] = "bogus";
    message_of([&] { io::kolmogorov_problem_from_json(j, "inputs"); }, ErrorCode::ParseError);
}

TEST(json, reconstruction_problem_from_true_state) {
    auto j = json::parse(R"({"dim": 2, "observables": [[[1, 0], [0, -1]], [[0, 1], [1, 0]]],
                              "true_state": [[0.7, 0], [0, 0.3]], "frame": [[1, 0], [0, 1]]})");
    auto p = io::reconstruction_problem_from_json(j, "inputs");
    ASSERT_EQ(p.expectations.size(), 2u);
    EXPECT_NEAR(p.expectations[0], 0.4, 1e-15);
    EXPECT_NEAR(p.expectations[1], 0.0, 1e-15);
    auto k = json::parse(R"({"dim": 2, "observables": [[[1, 0], [0, -1]], [[0, 1], [1, 0]]],
                              "expectations": [0.4, 0], "frame_from": [0]})");
    auto q = io::reconstruction_problem_from_json(k, "inputs");
    EXPECT_EQ(q.frame.size(), 2u);
}

TEST(csv, round_trip_with_quoting_and_footer) {
    ResultTable t({"name", "value"});
    t.add_row({"plain", cell(0.5)});
    t.add_row({"has,comma", cell(Q(1, 3))});
    t.add_row({"has \"quote\"", cell(std::size_t{7})});
    t.add_row({"#hash", cell(true)});
    t.add_row({"multi\nline", "x"});
    t.set_provenance({"fnv1a64:0123456789abcdef", 42, "0.1.0", "rational"});
    std::string text = t.to_csv();
    EXPECT_NE(text.find("# seed=42\n"), std::string::npos);
    EXPECT_NE(text.find("# config_hash=fnv1a64:0123456789abcdef\n"), std::string::npos);
    auto back = ResultTable::parse(text, "t.csv");
    EXPECT_EQ(back.header(), t.header());
    EXPECT_EQ(back.rows(), t.rows());
    EXPECT_EQ(back.footer, t.footer);
    EXPECT_EQ(back.to_csv(), text);
    EXPECT_EQ(back.column("value"), 1u);
    EXPECT_FALSE(back.column("nope").has_value());

    EXPECT_THROW(t.add_row({"short"}), Error);
    ResultTable none({"a"});
    none.set_provenance({"fnv1a64:0000000000000000", std::nullopt, "0.1.0", "float"});
    EXPECT_NE(none.to_csv().find("# seed=none"), std::string::npos);
    message_of([] { ResultTable::parse("a,b\n1\n", "bad.csv"); }, ErrorCode::ParseError);
}

TEST(csv, cells) {
    EXPECT_EQ(cell(Q(1, 4)), "0.25");
    EXPECT_EQ(cell(Q(1, 3)), "1/3");
    EXPECT_EQ(cell(0.1), "0.1");
    EXPECT_EQ(cell(false), "false");
}

TEST(csv, fnv_reference_values) {
    EXPECT_EQ(fnv1a64(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a64("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a64("foobar"), "85944171f73967e8");
}

}  // namespace
}  // namespace oplab
