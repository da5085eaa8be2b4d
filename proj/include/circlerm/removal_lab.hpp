#pragma once

#include "discrete.hpp"
#include "kernel_geometry.hpp"
#include "torus_sets.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace circlerm {

// A grid box j/p + [0,1/p)^m of the product that carries solution measure.
struct ViolatingBox {
    std::vector<std::uint64_t> j;
    Rational lambda;   // weight of the coset j belongs to
};

struct ViolationReport {
    std::uint64_t p = 0;
    std::vector<ViolatingBox> boxes;      // sorted by j
    std::optional<RationalVector> witness; // a solution in boxes.front()
};

// Boxes j in prod A'_i lying in some positive-weight coset j_k + ker_{Z_p} L.
// These are exactly the boxes with box_measure > 0.
ViolationReport find_violating_boxes(const KernelDecomposition& K, std::uint64_t p,
                                     std::span<const IntervalUnion> sets);

// Interior point of box j/p + [0,1/p)^m on ker_T L, if the box has positive measure.
std::optional<RationalVector> witness_in_box(const KernelDecomposition& K,
                                             std::span<const std::uint64_t> j,
                                             std::uint64_t p);

struct RemovedCell {
    std::size_t coordinate = 0;
    std::uint64_t cell = 0;   // [cell/p, (cell+1)/p) removed from A_coordinate
};

struct RemovalOutcome {
    std::uint64_t p = 0;
    std::vector<RemovedCell> removed;          // in removal order
    std::vector<IntervalUnion> removed_sets;   // E_i
    std::vector<Rational> removed_measures;    // mu(E_i)
    Rational total_removed;
    std::vector<IntervalUnion> remaining;      // A_i \ E_i
    bool verified_free = false;                // S_L(remaining) == 0
    std::size_t iterations = 0;
};

// Repeatedly removes the cell (i, x) that meets the most violating boxes
// (ties: smallest i, then smallest x) until no violating box is left.
RemovalOutcome greedy_removal(const KernelDecomposition& K, std::uint64_t p,
                              std::span<const IntervalUnion> sets);

struct ZeroMeasureReport {
    std::vector<DensityPoints> density;
    // no solution with x_i a density point of A_i for every i
    bool empty_intersection = false;
};

// For a family with S_L(A) = 0: checks that no solution has all coordinates
// at density points. Throws SolutionExists (with a witness) when S_L(A) > 0.
ZeroMeasureReport zero_measure_check(const KernelDecomposition& K,
                                     std::span<const IntervalUnion> sets);

struct ProbeResult {
    Rational alpha;
    std::size_t trials = 0;
    Rational min_value;
    IntervalUnion argmin;
    bool all_positive = false;
    std::vector<Rational> values;
};

// Evaluates S_L(A, ..., A) for A = [0, alpha) and random sets of measure at
// least alpha. Requires L 1 = 0.
ProbeResult szemeredi_probe(const KernelDecomposition& K, const Rational& alpha,
                            std::size_t trials, std::uint64_t seed);

enum class SearchMode { exhaustive, local };

struct DensityResult {
    std::uint64_t p = 0;
    SearchMode mode = SearchMode::exhaustive;
    Rational density;                 // |best| / p
    std::vector<std::uint64_t> best;  // a solution-free subset of Z_p
    bool invariant_warning = false;   // L 1 = 0 forces density 0
};

// Largest A' subset Z_p with no x in ker_{Z_p} L having every x_i in A'.
// Exhaustive search needs p <= 22; local search is a seeded hill climb.
DensityResult density_search(const IntMatrix& L, std::uint64_t p, SearchMode mode,
                             std::uint64_t seed = 1);

inline constexpr std::uint64_t kMaxExhaustivePrime = 22;

} // namespace circlerm
