#include "helpers.hpp"
#include "oracles.hpp"

#include "circlerm/errors.hpp"
#include "circlerm/measures.hpp"

#include <doctest.h>

#include <cmath>

using namespace testing;

TEST_CASE("benchmark values")
{
    const KernelDecomposition S(sum_matrix()), A(ap3_matrix());
    const auto half = same(3, interval("0", "1/2"));
    CHECK(solution_measure(S, half).value == q("1/8"));
    CHECK(solution_measure(A, half).value == q("1/8"));
    CHECK(solution_measure(S, same(3, interval("1/3", "2/3"))).value == 0);
    const auto fifths = same(3, interval("0", "2/5"));
    CHECK(solution_measure(S, fifths).value == q("2/25"));
    const auto d = decompose(S, 5, fifths);
    CHECK(d.value == q("2/25"));
    REQUIRE(d.per_shift.size() == 2);
    CHECK(d.per_shift[0].density == q("3/25"));
    CHECK(d.per_shift[1].density == q("1/25"));
    CHECK(solution_measure(S, same(3, IntervalUnion::full())).value == 1);
    CHECK(solution_measure(S, same(3, IntervalUnion::empty())).value == 0);
}

TEST_CASE("geometric route agrees with the oracle and the box sum")
{
    std::mt19937_64 rng(53);
    auto matrices = core_matrices();
    for (auto& L : extra_matrices())
        matrices.push_back(L);
    for (const auto& L : matrices) {
        const KernelDecomposition K(L);
        for (int trial = 0; trial < 6; ++trial) {
            // one grid per tuple keeps the box sum small
            const std::uint64_t n = 2 + uniform_below(rng, 5);
            std::vector<IntervalUnion> sets;
            for (std::size_t i = 0; i < L.cols(); ++i)
                sets.push_back(random_grid_set(rng, n, 2));
            const auto exact = solution_measure(K, sets, {true, 2});
            CHECK(exact.value == oracle::solution_measure(L, sets));
            CHECK(exact.value == solution_measure_by_boxes(K, sets));
        }
    }
}

TEST_CASE("worker count does not change exact values")
{
    std::mt19937_64 rng(59);
    const KernelDecomposition K(ap4_matrix());
    for (int trial = 0; trial < 5; ++trial) {
        auto sets = random_family(rng, 4, 7, true);
        const auto one = solution_measure(K, sets, {false, 1}).value;
        CHECK(solution_measure(K, sets, {false, 3}).value == one);
        CHECK(decompose(K, 7, sets, 4).value == one);
    }
}

TEST_CASE("monotone and additive")
{
    std::mt19937_64 rng(61);
    const KernelDecomposition K(sum_matrix());
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_family(rng, 3, 6, true);
        auto b = a;
        b[0] = set_union(b[0], random_cell_set(rng, 6));
        CHECK(solution_measure(K, a).value <= solution_measure(K, b).value);
        // split coordinate 0 into two disjoint parts
        auto left = a, right = a;
        left[0] = intersection(a[0], interval("0", "1/2"));
        right[0] = difference(a[0], interval("0", "1/2"));
        CHECK(solution_measure(K, left).value + solution_measure(K, right).value ==
              solution_measure(K, a).value);
    }
}

TEST_CASE("Monte Carlo is reproducible and close")
{
    const KernelDecomposition K(ap4_matrix());
    const auto sets = same(4, interval("0", "1/2"));
    const auto exact = to_double(solution_measure(K, sets).value);
    const auto a = monte_carlo_estimate(K, sets, 20000, 9, 2);
    const auto b = monte_carlo_estimate(K, sets, 20000, 9, 2);
    CHECK(a.estimate == b.estimate);
    const double sigma = std::sqrt(exact * (1 - exact) / 20000);
    CHECK(std::abs(a.estimate - exact) <= 4 * sigma);
    CHECK(a.half_width == doctest::Approx(2.5758293035489 * a.std_error));
    CHECK_THROWS_AS(monte_carlo_estimate(K, sets, 0, 1), InputError);
    CHECK(monte_carlo_estimate(K, same(4, IntervalUnion::full()), 1000, 1).estimate == 1);

    const KernelDecomposition A(ap3_matrix());
    const auto third = same(3, interval("1/3", "2/3"));
    const double s = to_double(solution_measure(A, third).value);
    const auto mc = monte_carlo_estimate(A, third, 100000, 5);
    CHECK(std::abs(mc.estimate - s) <= 3 * std::sqrt(s * (1 - s) / 100000));
}

TEST_CASE("approximation bound")
{
    const auto prof = analyze_matrix(sum_matrix());
    const auto a = same(3, interval("0", "1/3"));
    const auto c = same(3, interval("0", "3/10"));
    const Rational bound = approximation_bound(prof, a, c);
    CHECK(bound == q("1/10"));
    CHECK(approximation_bound(prof, a, same(3, interval("0", "2/7"))) == q("1/7"));
    CHECK(approximation_bound(prof, a, a) == 0);
    const KernelDecomposition K(sum_matrix());
    CHECK(abs(solution_measure(K, a).value - solution_measure(K, c).value) <= bound);

    const auto deg = analyze_matrix(degenerate_matrix());
    try {
        approximation_bound(deg, a, c);
        FAIL("expected PreconditionError");
    } catch (const PreconditionError& e) {
        CHECK(std::string(e.what()).find("reduce_degenerate") != std::string::npos);
    }
}

TEST_CASE("approximation bound holds on random pairs")
{
    std::mt19937_64 rng(67);
    const KernelDecomposition K(ap3_matrix());
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_family(rng, 3, 5, true);
        std::vector<IntervalUnion> c;
        for (const auto& s : a)
            c.push_back(snap_to_grid(shift(s, q("1/35")), 7));
        const Rational gap = abs(solution_measure(K, a).value - solution_measure(K, c).value);
        CHECK(gap <= approximation_bound(K.profile(), a, c));
    }
}
