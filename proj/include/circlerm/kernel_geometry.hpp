#pragma once

#include "intmat.hpp"
#include "polytope.hpp"
#include "rational.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace circlerm {

// One affine piece (x_b + ker_R L) of ker_T L inside the unit cube.
struct KernelComponent {
    IntVector level;               // b = L x_b
    RationalVector representative; // x_b in [0,1)^m
    Rational volume_param;         // vol of {t : x_b + B t in [0,1]^m}

    bool zero_volume() const { return sgn(volume_param) == 0; }
};

// ker_T L = {x in [0,1)^m : L x in Z^r} decomposed into level components.
// All volumes are in the coordinates t of the canonical kernel basis B, so
// mu_L(A) = c_param * sum_b vol_param({t : x_b + B t in A}).
class KernelDecomposition {
public:
    explicit KernelDecomposition(const IntMatrix& L);

    const IntMatrix& matrix() const noexcept { return L_; }
    const MatrixProfile& profile() const noexcept { return profile_; }
    const std::vector<IntVector>& basis() const noexcept { return profile_.kernel_basis; }
    std::size_t kernel_dim() const noexcept { return L_.kernel_dim(); }

    const std::vector<KernelComponent>& components() const noexcept { return components_; }
    const Rational& total_volume_param() const noexcept { return total_; }
    const Rational& c_param() const noexcept { return c_param_; }

    // Every integer point of L([0,1]^m) (closed cube); K_L = its size.
    const std::vector<IntVector>& closed_levels() const noexcept { return closed_levels_; }

    // Coordinates constant on each component (zero row of B). They are
    // exactly the degenerate columns of L; membership in half-open sets is
    // decided on the constant value instead of through a closed constraint.
    bool is_constant_coordinate(std::size_t i) const { return constant_[i] != 0; }
    const RationalVector& basis_row(std::size_t i) const { return basis_rows_[i]; }

    // Cheap necessary test: the level of component c is reachable by L on
    // the box prod [lo_i, hi_i].
    bool may_meet(std::size_t c, std::span<const Rational> lo,
                  std::span<const Rational> hi) const;

    // Parameter polytope of component c inside prod [lo_i, hi_i]. Returns
    // false (and leaves `out` untouched) when a constant coordinate falls
    // outside its half-open range [lo_i, hi_i).
    bool slice_polytope(std::size_t c, std::span<const Rational> lo,
                        std::span<const Rational> hi, HPolytope& out) const;

    // vol_param of component c inside the box (0 when it misses).
    Rational slice_volume(std::size_t c, std::span<const Rational> lo,
                          std::span<const Rational> hi) const;

    // x_b + B t
    RationalVector point(std::size_t c, const RationalVector& t) const;

    // c_param times the smallest positive component volume.
    Rational lambda_star() const;

private:
    IntMatrix L_;
    MatrixProfile profile_;
    std::vector<KernelComponent> components_;
    std::vector<IntVector> closed_levels_;
    std::vector<char> constant_;
    std::vector<RationalVector> basis_rows_; // row i of B as a d-vector
    Rational total_;
    Rational c_param_;
};

inline KernelDecomposition enumerate_components(const IntMatrix& L)
{
    return KernelDecomposition(L);
}

// mu_L of the box j/p + [0,1/p)^m intersected with ker_T L; any p >= 1.
Rational box_measure(const KernelDecomposition& K, std::span<const std::uint64_t> j,
                     std::uint64_t p);

// lambda(j) = p^(m-r) * box_measure(K, j, p)
Rational weight(const KernelDecomposition& K, std::span<const std::uint64_t> j,
                std::uint64_t p);

// A coset representative j_k of ker_{Z_p} L with its weight lambda_k.
struct WeightedShift {
    std::uint64_t p = 0;
    std::vector<std::uint64_t> j;
    Rational lambda;
    std::vector<std::uint64_t> residue; // L j_k mod p
};

// The positive-weight cosets covering J(L,p), one per residue class of
// -b mod p over closed levels b, sorted by j. Requires p prime with
// rank_mod_p(L, p) = r (PreconditionError otherwise). Weights sum to 1.
std::vector<WeightedShift> shift_cover(const KernelDecomposition& K, std::uint64_t p);

// A rational solution of L x = b (free coordinates set to zero).
RationalVector particular_solution(const IntMatrix& L, const IntVector& b);

} // namespace circlerm
