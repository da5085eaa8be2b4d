#pragma once

#include "kernel_geometry.hpp"
#include "torus_sets.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace circlerm {

enum class Route { geometric, decomposition, monte_carlo };

std::string_view route_name(Route route);

struct ShiftTerm {
    std::vector<std::uint64_t> j;
    Rational lambda;
    Rational density; // S_{L,Z_p}(A'_1 - j(1), ..., A'_m - j(m))
};

struct MeasureReport {
    Route route = Route::geometric;
    Rational value;              // exact routes
    double estimate = 0;         // Monte Carlo mean
    double std_error = 0;
    double half_width = 0;       // 99% confidence half-width
    std::uint64_t samples = 0;
    std::uint64_t p_used = 0;    // grid (geometric) or prime (decomposition)
    std::vector<ShiftTerm> per_shift;

    double decimal() const { return route == Route::monte_carlo ? estimate : to_double(value); }
};

struct MeasureOptions {
    // also sum box_measure over every box of the lcm grid and require equality
    bool cross_check_boxes = false;
    unsigned workers = 1;
};

// Exact S_L(A_1, ..., A_m), summed component by component over products of
// the sets' intervals.
MeasureReport solution_measure(const KernelDecomposition& K,
                               std::span<const IntervalUnion> sets,
                               const MeasureOptions& options = {});

// The same quantity as a sum of box_measure over the q-grid boxes of the
// product, q = lcm of all endpoint denominators. Cost grows like q^m.
Rational solution_measure_by_boxes(const KernelDecomposition& K,
                                   std::span<const IntervalUnion> sets);

// sum_k lambda_k S_{L,Z_p}(A' - j_k) for p-measurable sets.
MeasureReport decompose(const KernelDecomposition& K, std::uint64_t p,
                        std::span<const IntervalUnion> sets, unsigned workers = 1);

// Samples x ~ mu_L by picking a component in proportion to its volume and
// rejection-sampling its parameter polytope from the bounding box.
// Deterministic for fixed (n_samples, seed, workers).
MeasureReport monte_carlo_estimate(const KernelDecomposition& K,
                                   std::span<const IntervalUnion> sets,
                                   std::uint64_t n_samples, std::uint64_t seed,
                                   unsigned workers = 1);

// Minimum acceptance rate tolerated by the rejection sampler.
inline constexpr double kMinAcceptance = 1e-3;

// sum_i mu(C_i delta A_i), an upper bound on |S_L(C) - S_L(A)| when every
// coordinate projection of ker_T L is onto. Throws PreconditionError when L
// has degenerate columns.
Rational approximation_bound(const MatrixProfile& profile,
                             std::span<const IntervalUnion> originals,
                             std::span<const IntervalUnion> approximants);

} // namespace circlerm
