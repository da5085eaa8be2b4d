#pragma once

#include "rational.hpp"

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace circlerm {

// An r x m integer coefficient matrix of full row rank r with m > r.
// Construction validates both conditions; instances are immutable.
class IntMatrix {
public:
    explicit IntMatrix(std::vector<IntVector> rows);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    std::size_t rows() const noexcept { return r_; }
    std::size_t cols() const noexcept { return m_; }
    // dimension of ker_R L
    std::size_t kernel_dim() const noexcept { return m_ - r_; }

    const Integer& operator()(std::size_t i, std::size_t j) const
    {
        return entries_[i * m_ + j];
    }
    IntVector row(std::size_t i) const;

    // L * x for an integer vector of length m.
    IntVector apply(const IntVector& x) const;
    RationalVector apply(const RationalVector& x) const;
    std::vector<std::int64_t> apply_mod(const std::vector<std::int64_t>& x,
                                        std::int64_t p) const;

    // max_k sum_i |L_{k,i}|
    Integer max_row_abs_sum() const;

    bool operator==(const IntMatrix& other) const = default;

private:
    std::size_t r_ = 0;
    std::size_t m_ = 0;
    std::vector<Integer> entries_;
};

struct DegenerateColumn {
    std::size_t column;   // 0-based
    IntVector witness;    // v with v^T L = multiplier * e_column
    Integer multiplier;   // the non-zero entry, normalised positive
};

struct MatrixProfile {
    std::size_t rank = 0;
    // m-vectors; a basis of ker_Z L in column Hermite normal form
    std::vector<IntVector> kernel_basis;
    std::vector<Integer> smith_invariants;
    bool is_invariant = false;
    std::vector<DegenerateColumn> degenerate_columns;

    // Number of connected components of ker_T L.
    Integer component_count() const;
};

MatrixProfile analyze_matrix(const IntMatrix& L);

// Rank of L with entries reduced mod p (p prime).
std::size_t rank_mod_p(const IntMatrix& L, std::uint64_t p);

// Rank of an arbitrary integer matrix over Q.
std::size_t rational_rank(const std::vector<IntVector>& rows);

// Saturated integer kernel basis via unimodular column reduction, then put
// into column Hermite normal form.
std::vector<IntVector> integer_kernel_basis(const IntMatrix& L);

// Column Hermite normal form of the lattice spanned by the given m-vectors
// (assumed linearly independent). Pivot rows strictly increase, pivots are
// positive and entries left of a pivot lie in [0, pivot).
std::vector<IntVector> column_hermite_form(std::vector<IntVector> columns);

// Elementary divisors of an integer matrix (non-zero ones only).
std::vector<Integer> smith_invariants(std::vector<IntVector> rows);

// |det| of the pivot block of L U = [H | 0]; equals the product of the
// Smith invariants and is used as an independent cross-check.
Integer lattice_index(const IntMatrix& L);

// Points a in T with multiplier * a = 0; removing them from A_column kills
// every solution of a degenerate system.
std::vector<Rational> reduce_degenerate(const DegenerateColumn& column);

} // namespace circlerm
