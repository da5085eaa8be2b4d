#include "circlerm/rational.hpp"
#include "circlerm/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <utility>

namespace circlerm {

double to_double(const Rational& q)
{
    if (sgn(q) == 0)
        return 0.0;
    // 200 bits, then a 40-digit decimal string that strtod rounds once more;
    // the two roundings only disagree within 1e-40 of a halfway point.
    const mpf_class f(q, 200);
    mp_exp_t exp = 0;
    std::string digits = f.get_str(exp, 10, 40);
    const bool negative = digits.front() == '-';
    if (negative)
        digits.erase(0, 1);
    const std::string text = (negative ? "-0." : "0.") + digits + "e" + std::to_string(exp);
    return std::strtod(text.c_str(), nullptr);
}

std::string to_string(const Integer& z) { return z.get_str(); }

std::string to_string(const Rational& q)
{
    if (q.get_den() == 1)
        return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

static bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

Integer parse_integer(std::string_view text)
{
    std::string_view body = text;
    if (!body.empty() && (body.front() == '-' || body.front() == '+'))
        body.remove_prefix(1);
    if (!all_digits(body))
        throw InputError("malformed integer '" + std::string(text) + "'");
    Integer z;
    std::string s(text.front() == '+' ? text.substr(1) : text);
    z.set_str(s, 10);
    return z;
}

Rational parse_rational(std::string_view text)
{
    auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text));
    auto den_text = text.substr(slash + 1);
    if (!all_digits(den_text))
        throw InputError("malformed rational '" + std::string(text) + "'");
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(den_text);
    if (den == 0)
        throw InputError("zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Integer floor(const Rational& q)
{
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil(const Rational& q)
{
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

bool is_multiple_of_unit(const Rational& q, const Integer& n)
{
    Rational s = q * n;
    return s.get_den() == 1;
}

Integer lcm(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

bool lex_less(const RationalVector& a, const RationalVector& b)
{
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0)
            return c < 0;
    }
    return a.size() < b.size();
}

std::size_t rank(std::vector<RationalVector> rows)
{
    if (rows.empty())
        return 0;
    const std::size_t n = rows.size();
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < n; ++c) {
        std::size_t piv = r;
        while (piv < n && sgn(rows[piv][c]) == 0)
            ++piv;
        if (piv == n)
            continue;
        std::swap(rows[piv], rows[r]);
        for (std::size_t i = r + 1; i < n; ++i) {
            if (sgn(rows[i][c]) == 0)
                continue;
            Rational f = rows[i][c] / rows[r][c];
            for (std::size_t k = c; k < cols; ++k)
                rows[i][k] -= f * rows[r][k];
        }
        ++r;
    }
    return r;
}

bool solve_square(std::vector<RationalVector> a, RationalVector b,
                  RationalVector& x)
{
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(a[piv][c]) == 0)
            ++piv;
        if (piv == n)
            return false;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            std::swap(b[piv], b[c]);
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0)
                continue;
            Rational f = a[i][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[i][k] -= f * a[c][k];
            b[i] -= f * b[c];
        }
    }
    x.assign(n, Rational(0));
    for (std::size_t i = n; i-- > 0;) {
        Rational s = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return true;
}

Rational determinant(std::vector<RationalVector> a)
{
    const std::size_t n = a.size();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(a[piv][c]) == 0)
            ++piv;
        if (piv == n)
            return Rational(0);
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0)
                continue;
            Rational f = a[i][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k)
                a[i][k] -= f * a[c][k];
        }
    }
    return det;
}

} // namespace circlerm
