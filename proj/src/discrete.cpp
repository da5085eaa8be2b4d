#include "circlerm/discrete.hpp"
#include "circlerm/errors.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace circlerm {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 inverse(u64 a, u64 p) { return powmod(a, p - 2, p); }

u64 reduce(const Integer& z, u64 p)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), z.get_mpz_t(), Integer(static_cast<unsigned long>(p)).get_mpz_t());
    return r.get_ui();
}

using ModMatrix = std::vector<std::vector<u64>>;

// In-place reduced row echelon form; returns pivot columns among the first
// `ncols` columns.
std::vector<std::size_t> rref(ModMatrix& a, std::size_t ncols, u64 p)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0)
            ++piv;
        if (piv == a.size())
            continue;
        std::swap(a[piv], a[r]);
        const u64 inv = inverse(a[r][c], p);
        for (auto& v : a[r])
            v = mulmod(v, inv, p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            const u64 f = a[i][c];
            for (std::size_t k = 0; k < a[i].size(); ++k)
                a[i][k] = (a[i][k] + p - mulmod(f, a[r][k], p)) % p;
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

} // namespace

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0)
            return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

void require_kernel_prime(const IntMatrix& L, std::uint64_t p)
{
    if (!is_prime(p))
        throw PreconditionError("p = " + std::to_string(p) + " is not prime");
    if (p >= (1ULL << 31))
        throw PreconditionError("p = " + std::to_string(p) + " exceeds the supported range (< 2^31)");
    const std::size_t rk = rank_mod_p(L, p);
    if (rk != L.rows())
        throw PreconditionError("L has rank " + std::to_string(rk) + " < " +
                                std::to_string(L.rows()) + " modulo p = " + std::to_string(p));
}

std::vector<std::uint64_t> lex_smallest_solution(const IntMatrix& L, const IntVector& rhs,
                                                 std::uint64_t p)
{
    const std::size_t r = L.rows(), m = L.cols();
    ModMatrix a(r, std::vector<u64>(m + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = reduce(L(i, j), p);
        a[i][m] = reduce(rhs[i], p);
    }
    auto pivots = rref(a, m, p);
    if (pivots.size() != r)
        throw PreconditionError("L loses rank modulo p = " + std::to_string(p));
    std::vector<u64> x(m, 0);
    for (std::size_t i = 0; i < r; ++i)
        x[pivots[i]] = a[i][m];
    std::vector<std::vector<u64>> dirs;
    for (std::size_t f = 0; f < m; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end())
            continue;
        std::vector<u64> v(m, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < r; ++i)
            v[pivots[i]] = (p - a[i][f]) % p;
        dirs.push_back(std::move(v));
    }
    // greedily zero each leading coordinate that is still free to move
    for (std::size_t i = 0; i < m && !dirs.empty(); ++i) {
        auto it = std::find_if(dirs.begin(), dirs.end(), [&](const auto& v) { return v[i] != 0; });
        if (it == dirs.end())
            continue;
        std::vector<u64> dir = *it;
        dirs.erase(it);
        const u64 inv = inverse(dir[i], p);
        const u64 c = mulmod(x[i], inv, p);
        for (std::size_t k = 0; k < m; ++k)
            x[k] = (x[k] + p - mulmod(c, dir[k], p)) % p;
        for (auto& other : dirs) {
            const u64 f = mulmod(other[i], inv, p);
            if (f == 0)
                continue;
            for (std::size_t k = 0; k < m; ++k)
                other[k] = (other[k] + p - mulmod(f, dir[k], p)) % p;
        }
    }
    return x;
}

KernelParametrization::KernelParametrization(const IntMatrix& L, std::uint64_t p)
    : p_(p), m_(L.cols())
{
    require_kernel_prime(L, p);
    const std::size_t r = L.rows();
    ModMatrix full(r, std::vector<u64>(m_));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < m_; ++j)
            full[i][j] = reduce(L(i, j), p);

    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    bool found = false;
    while (!found) {
        ModMatrix minor(r, std::vector<u64>(r));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < r; ++k)
                minor[i][k] = full[i][idx[k]];
        if (rref(minor, r, p).size() == r) {
            found = true;
            break;
        }
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == m_ - r + i - 1)
            --i;
        if (i == 0)
            break;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    if (!found)
        throw PreconditionError("no invertible minor modulo p");
    dependent_ = idx;
    for (std::size_t j = 0; j < m_; ++j)
        if (std::find(dependent_.begin(), dependent_.end(), j) == dependent_.end())
            free_.push_back(j);

    // [M_D | -M_F] -> [I | coefficients]
    const std::size_t d = free_.size();
    ModMatrix aug(r, std::vector<u64>(r + d));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t k = 0; k < r; ++k)
            aug[i][k] = full[i][dependent_[k]];
        for (std::size_t f = 0; f < d; ++f)
            aug[i][r + f] = (p - full[i][free_[f]]) % p;
    }
    rref(aug, r, p);
    coeff_.assign(r, std::vector<u64>(d));
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t f = 0; f < d; ++f)
            coeff_[k][f] = aug[k][r + f];
}

std::uint64_t KernelParametrization::kernel_size() const
{
    u64 n = 1;
    for (std::size_t f = 0; f < free_.size(); ++f)
        n *= p_;
    return n;
}

namespace {

struct Counter {
    const KernelParametrization& kp;
    std::vector<const char*> member; // indexed by coordinate
    std::vector<u64> shift;
    std::vector<u64> partial;        // (level+1) * r slots

    bool in(std::size_t coord, u64 v) const
    {
        const u64 p = kp.modulus();
        return member[coord][(v + shift[coord]) % p] != 0;
    }

    u64 run(std::size_t level, u64 first, u64 stride)
    {
        const auto& fr = kp.free_columns();
        const auto& dep = kp.dependent_columns();
        const auto& co = kp.coefficients();
        const std::size_t r = dep.size();
        const u64 p = kp.modulus();
        u64 total = 0;
        if (level + 1 == fr.size()) {
            // innermost free coordinate: dependents advance by a fixed step
            std::vector<u64> cur(r);
            for (std::size_t k = 0; k < r; ++k)
                cur[k] = (partial[level * r + k] + co[k][level] * first) % p;
            std::vector<u64> step(r);
            for (std::size_t k = 0; k < r; ++k)
                step[k] = co[k][level] * stride % p;
            for (u64 v = first; v < p; v += stride) {
                if (in(fr[level], v)) {
                    bool ok = true;
                    for (std::size_t k = 0; k < r && ok; ++k)
                        ok = in(dep[k], cur[k]);
                    total += ok;
                }
                for (std::size_t k = 0; k < r; ++k) {
                    cur[k] += step[k];
                    if (cur[k] >= p)
                        cur[k] -= p;
                }
            }
            return total;
        }
        for (u64 v = first; v < p; v += stride) {
            if (!in(fr[level], v))
                continue;
            for (std::size_t k = 0; k < r; ++k)
                partial[(level + 1) * r + k] = (partial[level * r + k] + co[k][level] * v) % p;
            total += run(level + 1, 0, 1);
        }
        return total;
    }
};

} // namespace

std::uint64_t KernelParametrization::count(std::span<const DiscreteSet> sets,
                                           std::span<const std::uint64_t> shifts,
                                           unsigned workers) const
{
    if (sets.size() != m_ || shifts.size() != m_)
        throw InputError("expected " + std::to_string(m_) + " sets and shifts");
    for (const auto& s : sets)
        if (s.modulus() != p_)
            throw InputError("discrete set has modulus " + std::to_string(s.modulus()) +
                             ", expected " + std::to_string(p_));
    auto make = [&] {
        Counter c{*this, {}, {}, {}};
        for (std::size_t i = 0; i < m_; ++i) {
            c.member.push_back(sets[i].members().data());
            c.shift.push_back(shifts[i] % p_);
        }
        c.partial.assign((free_.size() + 1) * dependent_.size(), 0);
        return c;
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(p_)));
    if (workers == 1) {
        Counter c = make();
        return c.run(0, 0, 1);
    }
    std::vector<u64> partial_counts(workers, 0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            Counter c = make();
            partial_counts[w] = c.run(0, w, workers);
        });
    for (auto& t : pool)
        t.join();
    return std::accumulate(partial_counts.begin(), partial_counts.end(), u64{0});
}

Rational solution_density(const IntMatrix& L, std::uint64_t p,
                          std::span<const DiscreteSet> sets,
                          std::span<const std::uint64_t> shifts, unsigned workers)
{
    KernelParametrization kp(L, p);
    const u64 n = kp.count(sets, shifts, workers);
    Rational q(Integer(static_cast<unsigned long>(n)), Integer(static_cast<unsigned long>(kp.kernel_size())));
    q.canonicalize();
    return q;
}

std::vector<std::vector<std::uint64_t>>
list_solutions(const IntMatrix& L, std::uint64_t p, std::span<const DiscreteSet> sets,
               std::span<const std::uint64_t> shifts, std::size_t limit)
{
    KernelParametrization kp(L, p);
    const std::size_t m = L.cols();
    if (sets.size() != m || shifts.size() != m)
        throw InputError("expected " + std::to_string(m) + " sets and shifts");
    std::vector<std::vector<u64>> found;
    if (limit == 0)
        return found;
    kp.for_each([&](const std::vector<u64>& x) {
        for (std::size_t i = 0; i < m; ++i)
            if (!sets[i].contains((x[i] + shifts[i]) % p))
                return true;
        found.push_back(x);
        // keep memory bounded: trim back to the `limit` smallest periodically
        if (found.size() >= 4 * limit + 64) {
            std::sort(found.begin(), found.end());
            found.resize(limit);
        }
        return true;
    });
    std::sort(found.begin(), found.end());
    if (found.size() > limit)
        found.resize(limit);
    return found;
}

} // namespace circlerm
