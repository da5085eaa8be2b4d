#pragma once

#include "intmat.hpp"
#include "rational.hpp"
#include "torus_sets.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace circlerm {

bool is_prime(std::uint64_t p);

// p prime, p < 2^31, and rank_mod_p(L, p) = r; throws PreconditionError.
void require_kernel_prime(const IntMatrix& L, std::uint64_t p);

// Lexicographically smallest j in [0,p)^m with L j = rhs (mod p).
// Caller guarantees rank_mod_p(L, p) = r.
std::vector<std::uint64_t> lex_smallest_solution(const IntMatrix& L,
                                                 const IntVector& rhs,
                                                 std::uint64_t p);

// ker_{Z_p} L written as dependent coordinates that are linear functions of
// the free ones. Dependent columns are the first r columns (in lexicographic
// order of column subsets) whose minor is invertible mod p.
class KernelParametrization {
public:
    KernelParametrization(const IntMatrix& L, std::uint64_t p);

    std::uint64_t modulus() const noexcept { return p_; }
    std::size_t cols() const noexcept { return m_; }
    const std::vector<std::size_t>& free_columns() const noexcept { return free_; }
    const std::vector<std::size_t>& dependent_columns() const noexcept { return dependent_; }
    // coefficients[k][f]: dependent_columns()[k] = sum_f coefficients[k][f] * x[free[f]]
    const std::vector<std::vector<std::uint64_t>>& coefficients() const noexcept { return coeff_; }

    // p^(m-r)
    std::uint64_t kernel_size() const;

    // Calls visit(x) for every x in ker_{Z_p} L, free tuples in lexicographic
    // order. Returning false from visit stops the walk.
    template <class Visit>
    void for_each(Visit&& visit) const;

    // Number of x in the kernel with (x_i + shift_i) mod p in sets[i] for all
    // i. The walk is split across `workers` threads by the first free value.
    std::uint64_t count(std::span<const DiscreteSet> sets,
                        std::span<const std::uint64_t> shifts,
                        unsigned workers = 1) const;

private:
    template <class Visit>
    bool walk(std::size_t level, std::vector<std::uint64_t>& x,
              std::vector<std::uint64_t>& partial, Visit& visit) const;

    std::uint64_t p_;
    std::size_t m_;
    std::vector<std::size_t> free_;
    std::vector<std::size_t> dependent_;
    std::vector<std::vector<std::uint64_t>> coeff_;
};

// |{x in ker_{Z_p} L : x_i + shift_i in A'_i}| / p^(m-r)
Rational solution_density(const IntMatrix& L, std::uint64_t p,
                          std::span<const DiscreteSet> sets,
                          std::span<const std::uint64_t> shifts,
                          unsigned workers = 1);

// The lexicographically smallest `limit` solutions x (as full m-vectors).
std::vector<std::vector<std::uint64_t>>
list_solutions(const IntMatrix& L, std::uint64_t p, std::span<const DiscreteSet> sets,
               std::span<const std::uint64_t> shifts, std::size_t limit);

template <class Visit>
bool KernelParametrization::walk(std::size_t level, std::vector<std::uint64_t>& x,
                                 std::vector<std::uint64_t>& partial, Visit& visit) const
{
    const std::size_t r = dependent_.size();
    if (level == free_.size()) {
        for (std::size_t k = 0; k < r; ++k)
            x[dependent_[k]] = partial[level * r + k];
        return visit(static_cast<const std::vector<std::uint64_t>&>(x));
    }
    for (std::uint64_t v = 0; v < p_; ++v) {
        x[free_[level]] = v;
        for (std::size_t k = 0; k < r; ++k)
            partial[(level + 1) * r + k] =
                (partial[level * r + k] + coeff_[k][level] * v) % p_;
        if (!walk(level + 1, x, partial, visit))
            return false;
    }
    return true;
}

template <class Visit>
void KernelParametrization::for_each(Visit&& visit) const
{
    std::vector<std::uint64_t> x(m_, 0);
    std::vector<std::uint64_t> partial((free_.size() + 1) * dependent_.size(), 0);
    walk(0, x, partial, visit);
}

} // namespace circlerm
