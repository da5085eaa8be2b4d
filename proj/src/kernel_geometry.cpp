#include "circlerm/kernel_geometry.hpp"
#include "circlerm/discrete.hpp"
#include "circlerm/errors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace circlerm {

RationalVector particular_solution(const IntMatrix& L, const IntVector& b)
{
    const std::size_t r = L.rows(), m = L.cols();
    std::vector<RationalVector> a(r, RationalVector(m + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = L(i, j);
        a[i][m] = b[i];
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < m && row < r; ++c) {
        std::size_t piv = row;
        while (piv < r && sgn(a[piv][c]) == 0)
            ++piv;
        if (piv == r)
            continue;
        std::swap(a[piv], a[row]);
        Rational inv = 1 / a[row][c];
        for (auto& q : a[row])
            q *= inv;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == row || sgn(a[i][c]) == 0)
                continue;
            Rational f = a[i][c];
            for (std::size_t k = 0; k <= m; ++k)
                a[i][k] -= f * a[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    RationalVector x(m, Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        x[pivots[i]] = a[i][m];
    return x;
}

KernelDecomposition::KernelDecomposition(const IntMatrix& L)
    : L_(L), profile_(analyze_matrix(L))
{
    const std::size_t r = L_.rows(), m = L_.cols(), d = L_.kernel_dim();
    const auto& B = profile_.kernel_basis;
    basis_rows_.assign(m, RationalVector(d));
    constant_.assign(m, 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            basis_rows_[i][k] = B[k][i];
            if (B[k][i] != 0)
                constant_[i] = 0;
        }

    IntVector lo(r, Integer(0)), hi(r, Integer(0));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t i = 0; i < m; ++i) {
            if (L_(k, i) < 0)
                lo[k] += L_(k, i);
            else
                hi[k] += L_(k, i);
        }

    auto cube_section = [&](const RationalVector& x0) {
        HPolytope poly(d);
        for (std::size_t i = 0; i < m; ++i)
            poly.add_range(basis_rows_[i], -x0[i], 1 - x0[i]);
        return poly;
    };

    IntVector b = lo;
    while (true) {
        RationalVector x0 = particular_solution(L_, b);
        auto tverts = enumerate_vertices(cube_section(x0));
        if (!tverts.empty()) {
            closed_levels_.push_back(b);
            std::vector<RationalVector> xverts;
            for (const auto& t : tverts) {
                RationalVector x = x0;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t k = 0; k < d; ++k)
                        x[i] += basis_rows_[i][k] * t[k];
                xverts.push_back(std::move(x));
            }
            std::sort(xverts.begin(), xverts.end(), lex_less);
            // the half-open cube [0,1)^m meets the level iff every coordinate
            // drops below 1 at some vertex
            std::vector<const RationalVector*> below(m, nullptr);
            for (const auto& x : xverts)
                for (std::size_t i = 0; i < m; ++i)
                    if (!below[i] && x[i] < 1)
                        below[i] = &x;
            const bool half_open = std::all_of(below.begin(), below.end(),
                                               [](const RationalVector* v) { return v != nullptr; });
            if (half_open) {
                const auto& first = xverts.front();
                RationalVector rep;
                if (std::all_of(first.begin(), first.end(), [](const Rational& q) { return q < 1; })) {
                    rep = first;
                } else {
                    rep.assign(m, Rational(0));
                    for (const auto* v : below)
                        for (std::size_t i = 0; i < m; ++i)
                            rep[i] += (*v)[i];
                    for (auto& q : rep)
                        q /= static_cast<unsigned long>(m);
                }
                KernelComponent comp;
                comp.level = b;
                comp.volume_param = volume(cube_section(rep)).volume;
                comp.representative = std::move(rep);
                components_.push_back(std::move(comp));
            }
        }
        bool done = true;
        for (std::size_t k = r; k-- > 0;) {
            if (b[k] < hi[k]) {
                ++b[k];
                done = false;
                break;
            }
            b[k] = lo[k];
        }
        if (done)
            break;
    }

    total_ = 0;
    for (const auto& c : components_)
        total_ += c.volume_param;
    if (total_ != Rational(profile_.component_count()))
        throw std::logic_error("component volumes sum to " + to_string(total_) +
                               " but the Smith invariants give " +
                               to_string(profile_.component_count()) + " components");
    c_param_ = 1 / total_;
}

bool KernelDecomposition::may_meet(std::size_t c, std::span<const Rational> lo,
                                   std::span<const Rational> hi) const
{
    const auto& level = components_[c].level;
    const std::size_t m = L_.cols();
    for (std::size_t k = 0; k < L_.rows(); ++k) {
        Rational mn = 0, mx = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const Integer& a = L_(k, i);
            const int s = sgn(a);
            if (s > 0) {
                mn += a * lo[i];
                mx += a * hi[i];
            } else if (s < 0) {
                mn += a * hi[i];
                mx += a * lo[i];
            }
        }
        if (level[k] < mn || level[k] > mx)
            return false;
    }
    return true;
}

bool KernelDecomposition::slice_polytope(std::size_t c, std::span<const Rational> lo,
                                         std::span<const Rational> hi, HPolytope& out) const
{
    const auto& x = components_[c].representative;
    const std::size_t m = L_.cols();
    HPolytope poly(L_.kernel_dim());
    for (std::size_t i = 0; i < m; ++i) {
        if (constant_[i]) {
            if (x[i] < lo[i] || x[i] >= hi[i])
                return false;
            continue;
        }
        poly.add_range(basis_rows_[i], lo[i] - x[i], hi[i] - x[i]);
    }
    out = std::move(poly);
    return true;
}

Rational KernelDecomposition::slice_volume(std::size_t c, std::span<const Rational> lo,
                                           std::span<const Rational> hi) const
{
    if (components_[c].zero_volume() || !may_meet(c, lo, hi))
        return 0;
    HPolytope poly(L_.kernel_dim());
    if (!slice_polytope(c, lo, hi, poly))
        return 0;
    return volume(poly).volume;
}

RationalVector KernelDecomposition::point(std::size_t c, const RationalVector& t) const
{
    RationalVector x = components_[c].representative;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t k = 0; k < t.size(); ++k)
            x[i] += basis_rows_[i][k] * t[k];
    return x;
}

Rational KernelDecomposition::lambda_star() const
{
    Rational best = 0;
    for (const auto& c : components_)
        if (!c.zero_volume() && (sgn(best) == 0 || c.volume_param < best))
            best = c.volume_param;
    return best * c_param_;
}

Rational box_measure(const KernelDecomposition& K, std::span<const std::uint64_t> j,
                     std::uint64_t p)
{
    const std::size_t m = K.matrix().cols();
    if (j.size() != m)
        throw InputError("box index must have " + std::to_string(m) + " entries");
    const Integer pz(static_cast<unsigned long>(p));
    RationalVector lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = Rational(Integer(static_cast<unsigned long>(j[i])), pz);
        hi[i] = Rational(Integer(static_cast<unsigned long>(j[i] + 1)), pz);
        lo[i].canonicalize();
        hi[i].canonicalize();
    }
    Rational total = 0;
    for (std::size_t c = 0; c < K.components().size(); ++c)
        total += K.slice_volume(c, lo, hi);
    return total * K.c_param();
}

Rational weight(const KernelDecomposition& K, std::span<const std::uint64_t> j,
                std::uint64_t p)
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), p, K.kernel_dim());
    return box_measure(K, j, p) * scale;
}

std::vector<WeightedShift> shift_cover(const KernelDecomposition& K, std::uint64_t p)
{
    const IntMatrix& L = K.matrix();
    require_kernel_prime(L, p);
    const Integer pz(static_cast<unsigned long>(p));
    std::set<IntVector> residues;
    for (const auto& b : K.closed_levels()) {
        IntVector res(b.size());
        for (std::size_t k = 0; k < b.size(); ++k)
            mpz_fdiv_r(res[k].get_mpz_t(), Integer(-b[k]).get_mpz_t(), pz.get_mpz_t());
        residues.insert(std::move(res));
    }
    std::vector<WeightedShift> out;
    for (const auto& res : residues) {
        auto j = lex_smallest_solution(L, res, p);
        Rational lambda = weight(K, j, p);
        if (sgn(lambda) <= 0)
            continue;
        WeightedShift ws;
        ws.p = p;
        ws.lambda = std::move(lambda);
        for (const auto& z : res)
            ws.residue.push_back(z.get_ui());
        ws.j = std::move(j);
        out.push_back(std::move(ws));
    }
    std::sort(out.begin(), out.end(),
              [](const WeightedShift& a, const WeightedShift& b) { return a.j < b.j; });
    Rational sum = 0;
    for (const auto& ws : out)
        sum += ws.lambda;
    if (sum != 1)
        throw std::logic_error("shift weights sum to " + to_string(sum) + ", expected 1");
    return out;
}

} // namespace circlerm
