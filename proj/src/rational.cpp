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

#include "oplab/rational.hpp"

#include <charconv>
#include <system_error>

#include "oplab/errors.hpp"

namespace oplab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

mpz_class pow10(unsigned long k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto bad = [&]() -> Rational { fail(ErrorCode::ParseError, "not a rational number: '" + std::string(text) + "'"); };
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return bad();

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        bool negative = false;
        if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
            negative = num.front() == '-';
            num.remove_prefix(1);
        }
        if (!all_digits(num) || !all_digits(den)) return bad();
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) return bad();
        Rational r(negative ? mpz_class(-n) : n, d);
        r.canonicalize();
        return r;
    }

    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp = s.substr(e + 1);
        s = s.substr(0, e);
        bool exp_negative = false;
        if (!exp.empty() && (exp.front() == '-' || exp.front() == '+')) {
            exp_negative = exp.front() == '-';
            exp.remove_prefix(1);
        }
        if (!all_digits(exp) || exp.size() > 6) return bad();
        exponent = std::stol(std::string(exp));
        if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    long frac_len = 0;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) return bad();
        digits = std::string(ip) + std::string(fp);
        frac_len = static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) return bad();
        digits = std::string(s);
    }
    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    long scale = exponent - frac_len;
    Rational r;
    if (scale >= 0) {
        r = Rational(mantissa * pow10(static_cast<unsigned long>(scale)));
    } else {
        r = Rational(mantissa, pow10(static_cast<unsigned long>(-scale)));
    }
    r.canonicalize();
    return r;
}

Rational rational_from_double(double value) {
    require(std::isfinite(value), ErrorCode::InvalidArgument, "non-finite scalar");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

Rational rational_from_shortest_double(double value) {
    require(std::isfinite(value), ErrorCode::InvalidArgument, "non-finite scalar");
    return parse_rational(to_string(value));
}

std::string to_string(const Rational& value) {
    mpz_class den = value.get_den();
    unsigned long twos = 0, fives = 0;
    while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
        den /= 2;
        ++twos;
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return value.get_str();

    unsigned long places = std::max(twos, fives);
    mpz_class scaled = value.get_num() * pow10(places) / value.get_den();
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.get_str();
    if (places > 0) {
        if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
        digits.insert(digits.size() - places, ".");
    }
    return negative ? "-" + digits : digits;
}

std::string to_string(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) fail(ErrorCode::InvalidArgument, "unformattable double");
    return std::string(buf, end);
}

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::NotProbability: return "NotProbability";
        case ErrorCode::KernelDomainError: return "KernelDomainError";
        case ErrorCode::ConditioningOnNull: return "ConditioningOnNull";
        case ErrorCode::CapacityError: return "CapacityError";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::OutOfSpectralRange: return "OutOfSpectralRange";
        case ErrorCode::NotAQuestion: return "NotAQuestion";
        case ErrorCode::NotCommuting: return "NotCommuting";
        case ErrorCode::HorizonExceeded: return "HorizonExceeded";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::PartitionDoesNotCover: return "PartitionDoesNotCover";
        case ErrorCode::ZeroCell: return "ZeroCell";
        case ErrorCode::NoAbsolutelyContinuousPart: return "NoAbsolutelyContinuousPart";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::SingularFrame: return "SingularFrame";
        case ErrorCode::NoRealizableFrame: return "NoRealizableFrame";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotDensity: return "NotDensity";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace oplab
