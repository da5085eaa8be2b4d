#include "circlerm/intmat.hpp"
#include "circlerm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

namespace circlerm {

namespace {

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    if (k > n)
        return out;
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

std::vector<RationalVector> to_rational(const std::vector<IntVector>& rows)
{
    std::vector<RationalVector> out;
    out.reserve(rows.size());
    for (const auto& row : rows) {
        RationalVector q;
        q.reserve(row.size());
        for (const auto& z : row)
            q.emplace_back(z);
        out.push_back(std::move(q));
    }
    return out;
}

// Basis of {x : rows * x = 0} over Q.
std::vector<RationalVector> null_space(std::vector<RationalVector> rows,
                                       std::size_t ncols)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && sgn(rows[piv][c]) == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[piv], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r])
            v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0)
                continue;
            Rational f = rows[i][c];
            for (std::size_t k = 0; k < ncols; ++k)
                rows[i][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end())
            continue;
        RationalVector v(ncols, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -rows[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Scales a rational vector to a primitive integer vector (content 1).
IntVector primitive(const RationalVector& v)
{
    Integer den = 1;
    for (const auto& q : v)
        den = lcm(den, q.get_den());
    IntVector out;
    Integer content = 0;
    for (const auto& q : v) {
        Rational s = q * den;
        out.push_back(s.get_num());
        content = gcd(content, s.get_num());
    }
    if (content > 1)
        for (auto& z : out)
            z /= content;
    return out;
}

// Column operation on (A, U) combining columns a and b so that row `row`
// of column b becomes zero while the transform stays unimodular.
void eliminate_column(std::vector<IntVector>& cols, std::size_t a,
                      std::size_t b, std::size_t row,
                      std::vector<IntVector>* track)
{
    const Integer x = cols[a][row];
    const Integer y = cols[b][row];
    if (y == 0)
        return;
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(),
               y.get_mpz_t());
    const Integer xa = x / g;
    const Integer yb = y / g;
    auto combine = [&](std::vector<IntVector>& m) {
        IntVector& ca = m[a];
        IntVector& cb = m[b];
        for (std::size_t i = 0; i < ca.size(); ++i) {
            Integer na = s * ca[i] + t * cb[i];
            Integer nb = xa * cb[i] - yb * ca[i];
            ca[i] = std::move(na);
            cb[i] = std::move(nb);
        }
    };
    combine(cols);
    if (track)
        combine(*track);
}

// Returns (columns of L U, columns of U) with L U = [H | 0].
std::pair<std::vector<IntVector>, std::vector<IntVector>>
column_reduce(const IntMatrix& L)
{
    const std::size_t r = L.rows(), m = L.cols();
    std::vector<IntVector> cols(m, IntVector(r));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < r; ++i)
            cols[j][i] = L(i, j);
    std::vector<IntVector> unimod(m, IntVector(m, Integer(0)));
    for (std::size_t j = 0; j < m; ++j)
        unimod[j][j] = 1;
    for (std::size_t k = 0; k < r; ++k) {
        // bring a non-zero entry of row k to column k
        if (cols[k][k] == 0) {
            for (std::size_t c = k + 1; c < m; ++c) {
                if (cols[c][k] != 0) {
                    std::swap(cols[k], cols[c]);
                    std::swap(unimod[k], unimod[c]);
                    break;
                }
            }
        }
        for (std::size_t c = k + 1; c < m; ++c)
            eliminate_column(cols, k, c, k, &unimod);
    }
    return {std::move(cols), std::move(unimod)};
}

} // namespace

IntMatrix::IntMatrix(std::vector<IntVector> rows)
{
    if (rows.empty())
        throw InputError("matrix must have at least one row");
    r_ = rows.size();
    m_ = rows.front().size();
    for (std::size_t i = 0; i < r_; ++i) {
        if (rows[i].size() != m_) {
            std::ostringstream os;
            os << "row " << i << " has " << rows[i].size()
               << " entries, expected " << m_;
            throw InputError(os.str());
        }
    }
    if (m_ <= r_) {
        std::ostringstream os;
        os << "matrix must have more columns than rows (got " << r_ << "x"
           << m_ << ")";
        throw InputError(os.str());
    }
    const std::size_t rk = rational_rank(rows);
    if (rk < r_) {
        std::ostringstream os;
        os << "matrix has rank " << rk << " < " << r_
           << ": every " << r_ << "x" << r_ << " minor vanishes (column sets";
        auto all = subsets(m_, r_);
        const std::size_t shown = std::min<std::size_t>(all.size(), 6);
        for (std::size_t s = 0; s < shown; ++s) {
            os << (s ? ", " : " ") << "{";
            for (std::size_t t = 0; t < all[s].size(); ++t)
                os << (t ? "," : "") << all[s][t];
            os << "}";
        }
        if (shown < all.size())
            os << ", ... " << all.size() << " in total";
        os << ")";
        throw InputError(os.str());
    }
    entries_.reserve(r_ * m_);
    for (auto& row : rows)
        for (auto& z : row)
            entries_.push_back(std::move(z));
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix([&] {
          std::vector<IntVector> v;
          for (const auto& row : rows) {
              IntVector r;
              for (long x : row)
                  r.emplace_back(x);
              v.push_back(std::move(r));
          }
          return v;
      }())
{
}

IntVector IntMatrix::row(std::size_t i) const
{
    return IntVector(entries_.begin() + static_cast<std::ptrdiff_t>(i * m_),
                     entries_.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_));
}

IntVector IntMatrix::apply(const IntVector& x) const
{
    IntVector out(r_, Integer(0));
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            out[i] += (*this)(i, j) * x[j];
    return out;
}

RationalVector IntMatrix::apply(const RationalVector& x) const
{
    RationalVector out(r_, Rational(0));
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            out[i] += (*this)(i, j) * x[j];
    return out;
}

std::vector<std::int64_t> IntMatrix::apply_mod(const std::vector<std::int64_t>& x,
                                               std::int64_t p) const
{
    std::vector<std::int64_t> out(r_, 0);
    for (std::size_t i = 0; i < r_; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < m_; ++j)
            s += (*this)(i, j) * Integer(static_cast<long>(x[j]));
        Integer red;
        mpz_fdiv_r(red.get_mpz_t(), s.get_mpz_t(), Integer(static_cast<long>(p)).get_mpz_t());
        out[i] = red.get_si();
    }
    return out;
}

Integer IntMatrix::max_row_abs_sum() const
{
    Integer best = 0;
    for (std::size_t i = 0; i < r_; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < m_; ++j)
            s += abs((*this)(i, j));
        if (s > best)
            best = s;
    }
    return best;
}

Integer MatrixProfile::component_count() const
{
    Integer prod = 1;
    for (const auto& d : smith_invariants)
        prod *= d;
    return prod;
}

std::size_t rational_rank(const std::vector<IntVector>& rows)
{
    return rank(to_rational(rows));
}

std::size_t rank_mod_p(const IntMatrix& L, std::uint64_t p)
{
    using u128 = unsigned __int128;
    const std::size_t r = L.rows(), m = L.cols();
    std::vector<std::vector<std::uint64_t>> a(r, std::vector<std::uint64_t>(m));
    const Integer pz(static_cast<unsigned long>(p));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            Integer red;
            mpz_fdiv_r(red.get_mpz_t(), L(i, j).get_mpz_t(), pz.get_mpz_t());
            a[i][j] = red.get_ui();
        }
    auto mulmod = [p](std::uint64_t x, std::uint64_t y) {
        return static_cast<std::uint64_t>(static_cast<u128>(x) * y % p);
    };
    auto inverse = [&](std::uint64_t x) {
        std::uint64_t result = 1, base = x, e = p - 2;
        while (e) {
            if (e & 1)
                result = mulmod(result, base);
            base = mulmod(base, base);
            e >>= 1;
        }
        return result;
    };
    std::size_t rk = 0;
    for (std::size_t c = 0; c < m && rk < r; ++c) {
        std::size_t piv = rk;
        while (piv < r && a[piv][c] == 0)
            ++piv;
        if (piv == r)
            continue;
        std::swap(a[piv], a[rk]);
        const std::uint64_t inv = inverse(a[rk][c]);
        for (std::size_t i = rk + 1; i < r; ++i) {
            if (a[i][c] == 0)
                continue;
            const std::uint64_t f = mulmod(a[i][c], inv);
            for (std::size_t k = c; k < m; ++k)
                a[i][k] = (a[i][k] + p - mulmod(f, a[rk][k])) % p;
        }
        ++rk;
    }
    return rk;
}

std::vector<IntVector> column_hermite_form(std::vector<IntVector> columns)
{
    if (columns.empty())
        return columns;
    const std::size_t m = columns.front().size();
    const std::size_t d = columns.size();
    std::size_t k = 0;
    for (std::size_t i = 0; i < m && k < d; ++i) {
        std::size_t nz = k;
        while (nz < d && columns[nz][i] == 0)
            ++nz;
        if (nz == d)
            continue;
        std::swap(columns[k], columns[nz]);
        for (std::size_t c = k + 1; c < d; ++c)
            eliminate_column(columns, k, c, i, nullptr);
        if (columns[k][i] < 0)
            for (auto& z : columns[k])
                z = -z;
        const Integer& pivot = columns[k][i];
        for (std::size_t l = 0; l < k; ++l) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), columns[l][i].get_mpz_t(), pivot.get_mpz_t());
            if (q != 0)
                for (std::size_t t = 0; t < m; ++t)
                    columns[l][t] -= q * columns[k][t];
        }
        ++k;
    }
    return columns;
}

std::vector<IntVector> integer_kernel_basis(const IntMatrix& L)
{
    auto [reduced, unimod] = column_reduce(L);
    std::vector<IntVector> kernel(unimod.begin() + static_cast<std::ptrdiff_t>(L.rows()),
                                  unimod.end());
    return column_hermite_form(std::move(kernel));
}

Integer lattice_index(const IntMatrix& L)
{
    auto [reduced, unimod] = column_reduce(L);
    Integer det = 1;
    for (std::size_t k = 0; k < L.rows(); ++k)
        det *= reduced[k][k];
    return abs(det);
}

std::vector<Integer> smith_invariants(std::vector<IntVector> a)
{
    std::vector<Integer> out;
    if (a.empty())
        return out;
    const std::size_t r = a.size(), m = a.front().size();
    for (std::size_t t = 0; t < std::min(r, m); ++t) {
        while (true) {
            // smallest non-zero magnitude in the trailing block
            std::size_t bi = r, bj = m;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < m; ++j)
                    if (a[i][j] != 0 &&
                        (bi == r || abs(a[i][j]) < abs(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == r)
                return out;
            std::swap(a[t], a[bi]);
            for (auto& row : a)
                std::swap(row[t], row[bj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0)
                    for (std::size_t j = t; j < m; ++j)
                        a[i][j] -= q * a[t][j];
                if (a[i][t] != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < m; ++j) {
                Integer q;
                mpz_tdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                if (q != 0)
                    for (std::size_t i = t; i < r; ++i)
                        a[i][j] -= q * a[i][t];
                if (a[t][j] != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // divisibility of the trailing block
            bool divides = true;
            for (std::size_t i = t + 1; i < r && divides; ++i)
                for (std::size_t j = t + 1; j < m; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        for (std::size_t k = t; k < m; ++k)
                            a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides)
                break;
        }
        out.push_back(abs(a[t][t]));
    }
    return out;
}

MatrixProfile analyze_matrix(const IntMatrix& L)
{
    const std::size_t r = L.rows(), m = L.cols();
    MatrixProfile prof;
    prof.rank = r;
    prof.kernel_basis = integer_kernel_basis(L);

    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < r; ++i)
        rows.push_back(L.row(i));
    prof.smith_invariants = smith_invariants(rows);

    prof.is_invariant = true;
    for (std::size_t i = 0; i < r; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < m; ++j)
            s += L(i, j);
        if (s != 0)
            prof.is_invariant = false;
    }

    for (std::size_t j = 0; j < m; ++j) {
        std::vector<IntVector> reduced;
        for (std::size_t i = 0; i < r; ++i) {
            IntVector row;
            for (std::size_t c = 0; c < m; ++c)
                if (c != j)
                    row.push_back(L(i, c));
            reduced.push_back(std::move(row));
        }
        if (rational_rank(reduced) == r)
            continue;
        // left kernel of the reduced matrix: solve reduced^T v = 0
        std::vector<RationalVector> transposed(m - 1, RationalVector(r));
        for (std::size_t c = 0; c + 1 < m; ++c)
            for (std::size_t i = 0; i < r; ++i)
                transposed[c][i] = reduced[i][c];
        auto left = null_space(std::move(transposed), r);
        IntVector v = primitive(left.front());
        Integer ell = 0;
        for (std::size_t i = 0; i < r; ++i)
            ell += v[i] * L(i, j);
        if (ell < 0) {
            ell = -ell;
            for (auto& z : v)
                z = -z;
        }
        prof.degenerate_columns.push_back({j, std::move(v), std::move(ell)});
    }
    return prof;
}

std::vector<Rational> reduce_degenerate(const DegenerateColumn& column)
{
    std::vector<Rational> points;
    const Integer& ell = column.multiplier;
    for (Integer k = 0; k < ell; ++k) {
        Rational q(k, ell);
        q.canonicalize();
        points.push_back(q);
    }
    return points;
}

} // namespace circlerm
