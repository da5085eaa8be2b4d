#pragma once

#include "rational.hpp"

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace circlerm {

// [lo, hi) with 0 <= lo < hi <= 1
struct Interval {
    Rational lo;
    Rational hi;
    bool operator==(const Interval&) const = default;
};

// A measurable subset of T = R/Z: a finite union of half-open rational
// intervals, kept sorted, disjoint and non-adjacent.
class IntervalUnion {
public:
    IntervalUnion() = default;
    // Intervals may overlap or touch; empty ones (lo == hi) are dropped.
    // Throws InputError unless 0 <= lo <= hi <= 1 for each.
    explicit IntervalUnion(std::vector<Interval> intervals);

    static IntervalUnion full();
    static IntervalUnion empty() { return {}; }
    // [lo, hi) read modulo 1; hi may exceed 1 to wrap through 0.
    static IntervalUnion arc(const Rational& lo, const Rational& hi);

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    bool is_empty() const noexcept { return intervals_.empty(); }
    std::size_t size() const noexcept { return intervals_.size(); }

    bool contains(const Rational& x) const;  // x in [0,1)
    bool contains(double x) const;

    // lcm of all endpoint denominators (1 for the empty set)
    Integer grid_denominator() const;
    bool is_grid_measurable(const Integer& n) const;

    bool operator==(const IntervalUnion&) const = default;

private:
    std::vector<Interval> intervals_;
};

Rational measure(const IntervalUnion& a);
IntervalUnion complement(const IntervalUnion& a);
IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersection(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion difference(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion symmetric_difference(const IntervalUnion& a, const IntervalUnion& b);
// {x + t mod 1 : x in a}
IntervalUnion shift(const IntervalUnion& a, const Rational& t);

// Union of the N-grid cells [x/N, (x+1)/N) contained in a.
IntervalUnion snap_to_grid(const IntervalUnion& a, const Integer& n);

// A' subset of Z_p with 1_{A'}(x) = 1_A(x/p).
class DiscreteSet {
public:
    explicit DiscreteSet(std::uint64_t p) : members_(p, 0) {}
    DiscreteSet(std::uint64_t p, const std::vector<std::uint64_t>& elements);

    std::uint64_t modulus() const noexcept { return members_.size(); }
    bool contains(std::uint64_t x) const { return members_[x % members_.size()] != 0; }
    void insert(std::uint64_t x) { members_[x % members_.size()] = 1; }
    void erase(std::uint64_t x) { members_[x % members_.size()] = 0; }
    std::uint64_t count() const;
    std::vector<std::uint64_t> elements() const;
    const std::vector<char>& members() const noexcept { return members_; }

    static DiscreteSet full(std::uint64_t p);

    bool operator==(const DiscreteSet&) const = default;

private:
    std::vector<char> members_;
};

// Throws InputError naming the first endpoint that is not a multiple of 1/p.
DiscreteSet to_discrete(const IntervalUnion& a, std::uint64_t p);
IntervalUnion from_discrete(const DiscreteSet& d);

// Open arc (start, end) of T; end may exceed 1 for arcs through 0.
struct OpenArc {
    Rational start;
    Rational end;
    bool operator==(const OpenArc&) const = default;
};

struct DensityPoints {
    std::vector<OpenArc> arcs;
    bool full_circle = false;

    bool contains(const Rational& x) const;  // x in [0,1)
};

// Lebesgue density points of a finite interval union: the interior of its
// closure in T.
DensityPoints density_points(const IntervalUnion& a);

// Random N-measurable set made of up to `max_runs` runs of consecutive cells
// (runs may merge). Used by property tests, probes and `verify`.
IntervalUnion random_grid_set(std::mt19937_64& rng, std::uint64_t n,
                              std::size_t max_runs);
// Random subset of the N-grid cells, each kept with probability 1/2.
IntervalUnion random_cell_set(std::mt19937_64& rng, std::uint64_t n);

// Uniform integer in [0, n) without distribution-implementation variance.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

} // namespace circlerm
