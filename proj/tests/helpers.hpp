#pragma once

#include "circlerm/intmat.hpp"
#include "circlerm/rational.hpp"
#include "circlerm/torus_sets.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace circlerm;

inline Rational q(const std::string& s) { return parse_rational(s); }

inline IntervalUnion interval(const std::string& lo, const std::string& hi)
{
    return IntervalUnion({{q(lo), q(hi)}});
}

inline std::vector<IntervalUnion> same(std::size_t m, const IntervalUnion& a)
{
    return std::vector<IntervalUnion>(m, a);
}

inline IntMatrix sum_matrix() { return IntMatrix{{1, 1, -1}}; }
inline IntMatrix ap3_matrix() { return IntMatrix{{1, -2, 1}}; }
inline IntMatrix ap4_matrix() { return IntMatrix{{1, -2, 1, 0}, {0, 1, -2, 1}}; }
inline IntMatrix degenerate_matrix() { return IntMatrix{{1, 1, 0}, {0, 0, 2}}; }

// The three matrices the decomposition identity is checked on.
inline std::vector<IntMatrix> core_matrices()
{
    return {sum_matrix(), ap3_matrix(), ap4_matrix()};
}

// Further non-degenerate test matrices with kernel dimension <= 2.
inline std::vector<IntMatrix> extra_matrices()
{
    return {IntMatrix{{1, 1, 1}}, IntMatrix{{1, 2, -3}}, IntMatrix{{2, -1, -1}},
            IntMatrix{{1, 1, -2}}, IntMatrix{{3, -1, 1}}, IntMatrix{{1, 2, -1, 0}, {1, 0, 1, -1}},
            IntMatrix{{1, 1, -1, 0}, {0, 1, 1, -1}}};
}

// Random full-rank matrix with entries in [-bound, bound].
inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t m, long bound)
{
    for (;;) {
        std::vector<IntVector> rows(r, IntVector(m));
        for (auto& row : rows)
            for (auto& v : row)
                v = static_cast<long>(uniform_below(rng, 2 * bound + 1)) - bound;
        if (rational_rank(rows) == r)
            return IntMatrix(rows);
    }
}

// Random p-measurable tuple: cell sets or a few runs, never empty.
inline std::vector<IntervalUnion> random_family(std::mt19937_64& rng, std::size_t m,
                                                std::uint64_t p, bool cells)
{
    std::vector<IntervalUnion> out;
    for (std::size_t i = 0; i < m; ++i) {
        IntervalUnion a;
        do {
            a = cells ? random_cell_set(rng, p) : random_grid_set(rng, p, 3);
        } while (a.is_empty());
        out.push_back(a);
    }
    return out;
}

} // namespace testing
