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

#include <cmath>
#include <compare>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace oplab {

using Rational = mpq_class;

/// Parses "3", "-0.125", "1.5e-3" or "2/7" into an exact rational.
Rational parse_rational(std::string_view text);

/// Exact value of a finite double.
Rational rational_from_double(double value);

/// Shortest decimal that round-trips to `value` read as an exact rational,
/// so 0.1 becomes 1/10 rather than the binary expansion of 0.1.
Rational rational_from_shortest_double(double value);

/// Terminating decimal when the denominator is 2^a 5^b, else "p/q".
std::string to_string(const Rational& value);

/// Shortest round-trip representation.
std::string to_string(double value);

/// Arithmetic policy shared by every templated measure routine. Rational
/// arithmetic is exact; double arithmetic merges points closer than
/// `point_tolerance` and treats masses within `mass_tolerance` as equal.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static bool same_point(const Rational& a, const Rational& b) { return a == b; }
    static bool is_zero(const Rational& a) { return sgn(a) == 0; }
    static bool is_one(const Rational& a) { return a == 1; }
    static bool equal_mass(const Rational& a, const Rational& b) { return a == b; }
    static double to_double(const Rational& a) { return a.get_d(); }
    static Rational from_double(double v) { return rational_from_shortest_double(v); }
    static void canonicalize(Rational& a) { a.canonicalize(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr double point_tolerance = 1e-9;
    static constexpr double mass_tolerance = 1e-12;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static bool same_point(double a, double b) { return std::abs(a - b) <= point_tolerance; }
    static bool is_zero(double a) { return a == 0.0; }
    static bool is_one(double a) { return std::abs(a - 1.0) <= mass_tolerance; }
    static bool equal_mass(double a, double b) { return std::abs(a - b) <= mass_tolerance; }
    static double to_double(double a) { return a; }
    static double from_double(double v) { return v; }
    static void canonicalize(double&) {}
};

inline double to_double(const Rational& a) { return a.get_d(); }
inline double to_double(double a) { return a; }

}  // namespace oplab
