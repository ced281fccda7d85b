#include "polyton/rational.hpp"

#include "polyton/errors.hpp"

#include <cctype>
#include <sstream>

namespace polyton {

namespace {

bool is_integer_literal(std::string_view s)
{
    if (s.empty()) return false;
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (start == s.size()) return false;
    for (std::size_t i = start; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Integer parse_integer(std::string_view s)
{
    std::string buf(s.front() == '+' ? s.substr(1) : s);
    return Integer(buf, 10);
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!is_integer_literal(text))
            throw ValidationError("not a rational literal: '" + std::string(text) + "'");
        return Rational(parse_integer(text));
    }
    const auto num_text = text.substr(0, slash);
    const auto den_text = text.substr(slash + 1);
    if (!is_integer_literal(num_text) || !is_integer_literal(den_text) || den_text[0] == '-' ||
        den_text[0] == '+')
        throw ValidationError("not a rational literal: '" + std::string(text) + "'");
    Integer num = parse_integer(num_text);
    Integer den = parse_integer(den_text);
    if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
    Integer g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1 && num != 0)
        throw ValidationError("rational not in lowest terms: '" + std::string(text) + "'");
    if (num == 0 && den != 1)
        throw ValidationError("rational not in lowest terms: '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Rational parse_decimal(std::string_view text)
{
    if (text.find('/') != std::string_view::npos || is_integer_literal(text))
        return parse_rational(text);

    std::string s(text);
    bool negative = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
        negative = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    long exponent = 0;
    bool seen_point = false;
    bool any_digit = false;
    for (; pos < s.size(); ++pos) {
        const char ch = s[pos];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            any_digit = true;
            if (seen_point) --exponent;
        } else if (ch == '.' && !seen_point) {
            seen_point = true;
        } else if (ch == 'e' || ch == 'E') {
            const auto rest = std::string_view(s).substr(pos + 1);
            if (!is_integer_literal(rest)) throw ValidationError("bad exponent in '" + s + "'");
            exponent += std::stol(std::string(rest));
            pos = s.size();
            break;
        } else {
            throw ValidationError("not a decimal literal: '" + s + "'");
        }
    }
    if (!any_digit) throw ValidationError("not a decimal literal: '" + s + "'");

    Rational value{Integer(digits, 10)};
    Integer ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0)
        value /= ten_pow;
    else
        value *= ten_pow;
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value)
{
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_decimal(const Rational& value, int digits)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Rational scaled = abs(value) * scale;
    // round half up on the magnitude
    Integer q = (scaled.get_num() * 2 + scaled.get_den()) / (scaled.get_den() * 2);
    std::string body = q.get_str();
    if (digits > 0) {
        if (body.size() <= static_cast<std::size_t>(digits))
            body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
        body.insert(body.size() - static_cast<std::size_t>(digits), ".");
    }
    if (value < 0 && q != 0) body.insert(0, "-");
    return body;
}

std::optional<Rational> exact_sqrt(const Rational& value)
{
    if (value < 0) return std::nullopt;
    const Integer& num = value.get_num();
    const Integer& den = value.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

Rational sqrt_floor(const Rational& value, int digits)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    // floor(sqrt(x) * 10^d) = isqrt(floor(x * 10^2d))
    Rational scaled = value * scale * scale;
    Integer floor_scaled = scaled.get_num() / scaled.get_den();
    Integer root;
    mpz_sqrt(root.get_mpz_t(), floor_scaled.get_mpz_t());
    Rational r(root, scale);
    r.canonicalize();
    return r;
}

Rational abs(const Rational& value)
{
    return value < 0 ? Rational(-value) : value;
}

Rational make_rational(long p, long q)
{
    Rational r{Integer(p), Integer(q)};
    r.canonicalize();
    return r;
}

Integer common_denominator(const std::vector<Rational>& values)
{
    Integer l = 1;
    for (const auto& v : values) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den().get_mpz_t());
    return l;
}

}  // namespace polyton
