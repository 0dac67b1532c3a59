#include "gsm/rational.hpp"

#include <cctype>
#include <cmath>

#include "gsm/errors.hpp"

namespace gsm {

Rational exact_rational(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("non-finite value has no rational form");
    }
    Rational q(x);  // mpq_set_d is exact
    q.canonicalize();
    return q;
}

namespace {

BigInt parse_digits(std::string_view s, std::string_view whole) {
    if (s.empty()) {
        throw DomainError("malformed number: '" + std::string(whole) + "'");
    }
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw DomainError("malformed number: '" + std::string(whole) + "'");
        }
    }
    return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw DomainError("empty number");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_digits(s.substr(0, slash), text);
        BigInt den = parse_digits(s.substr(slash + 1), text);
        if (den == 0) throw DomainError("zero denominator: '" + std::string(text) + "'");
        out = Rational(num, den);
    } else {
        long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            std::string_view exp_part = s.substr(e + 1);
            bool exp_negative = false;
            if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
                exp_negative = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            if (exp_part.empty() || exp_part.size() > 6) {
                throw DomainError("malformed exponent: '" + std::string(text) + "'");
            }
            exponent = parse_digits(exp_part, text).get_si();
            if (exp_negative) exponent = -exponent;
            s = s.substr(0, e);
        }
        std::string digits;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            std::string_view int_part = s.substr(0, dot);
            std::string_view frac_part = s.substr(dot + 1);
            if (int_part.empty() && frac_part.empty()) {
                throw DomainError("malformed number: '" + std::string(text) + "'");
            }
            digits = std::string(int_part) + std::string(frac_part);
            exponent -= static_cast<long>(frac_part.size());
        } else {
            digits = std::string(s);
        }
        BigInt mantissa = parse_digits(digits, text);
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
        out = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    }
    out.canonicalize();
    return negative ? Rational(-out) : out;
}

double to_double(const Rational& q) { return q.get_d(); }

long double to_long_double(const Rational& q) {
    mpf_class f(q, 128);
    double hi = f.get_d();
    mpf_class rest(f - hi, 128);
    return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational clamp01(const Rational& q) {
    if (q < 0) return Rational(0);
    if (q > 1) return Rational(1);
    return q;
}

}  // namespace gsm
