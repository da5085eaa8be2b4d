#include "helpers.hpp"
#include "oracles.hpp"

#include "circlerm/errors.hpp"
#include "circlerm/intmat.hpp"

#include <doctest.h>

using namespace testing;

TEST_CASE("rational text round trip")
{
    CHECK(to_string(q("6/8")) == "3/4");
    CHECK(to_string(q("-2/4")) == "-1/2");
    CHECK(to_string(q("4/2")) == "2");
    CHECK(to_string(q("0")) == "0");
    CHECK_THROWS_AS(q(" 1/3"), InputError);
    CHECK(q("+2/6") == Rational(1, 3));
    CHECK_THROWS_AS(q("1/0"), InputError);
    CHECK_THROWS_AS(q("1/2x"), InputError);
    CHECK_THROWS_AS(q(""), InputError);
    CHECK_THROWS_AS(q("0.5"), InputError);
    CHECK(to_double(q("2/5")) == 0.4);
    CHECK(to_double(q("1/3")) == 1.0 / 3.0);
    CHECK(to_double(q("-7/10")) == -0.7);
}

TEST_CASE("floor, ceil and grid alignment")
{
    CHECK(circlerm::floor(q("-1/2")) == -1);
    CHECK(circlerm::ceil(q("-1/2")) == 0);
    CHECK(circlerm::floor(q("7/2")) == 3);
    CHECK(is_multiple_of_unit(q("2/5"), 5));
    CHECK_FALSE(is_multiple_of_unit(q("1/2"), 5));
    CHECK(lcm(Integer(4), Integer(6)) == 12);
}

TEST_CASE("construction rejects bad shapes")
{
    CHECK_THROWS_AS((IntMatrix{{1, 1}, {2, 2}}), InputError);     // m = r
    CHECK_THROWS_AS((IntMatrix{{1, 2, 3}, {2, 4, 6}}), InputError); // rank 1
    CHECK_THROWS_AS((IntMatrix{{1, 2, 3}, {1, 2}}), InputError);  // ragged
    try {
        IntMatrix bad{{1, 2, 3}, {2, 4, 6}};
        FAIL("expected a rank error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("{0,1}") != std::string::npos);
    }
}

TEST_CASE("profile of x + y = z")
{
    const auto prof = analyze_matrix(sum_matrix());
    CHECK(prof.rank == 1);
    REQUIRE(prof.kernel_basis.size() == 2);
    CHECK(prof.kernel_basis[0] == IntVector{1, 0, 1});
    CHECK(prof.kernel_basis[1] == IntVector{0, 1, 1});
    CHECK(prof.smith_invariants == std::vector<Integer>{1});
    CHECK_FALSE(prof.is_invariant);
    CHECK(prof.degenerate_columns.empty());
    CHECK(prof.component_count() == 1);
}

TEST_CASE("profile of 3-term progressions")
{
    const auto prof = analyze_matrix(ap3_matrix());
    CHECK(prof.is_invariant);
    CHECK(prof.kernel_basis[0] == IntVector{1, 0, -1});
    CHECK(prof.kernel_basis[1] == IntVector{0, 1, 2});
    CHECK(analyze_matrix(ap4_matrix()).is_invariant);
}

TEST_CASE("non-trivial Smith invariants")
{
    const auto prof = analyze_matrix(IntMatrix{{2, 2}});
    CHECK(prof.smith_invariants == std::vector<Integer>{2});
    CHECK(prof.component_count() == 2);
    CHECK(prof.kernel_basis[0] == IntVector{1, -1});
    CHECK(smith_invariants({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) ==
          std::vector<Integer>{2, 6, 12});
}

TEST_CASE("degenerate column detection")
{
    const auto prof = analyze_matrix(degenerate_matrix());
    REQUIRE(prof.degenerate_columns.size() == 1);
    const auto& dc = prof.degenerate_columns[0];
    CHECK(dc.column == 2);
    CHECK(dc.multiplier == 2);
    CHECK(dc.witness == IntVector{0, 1});
    CHECK(reduce_degenerate(dc) == std::vector<Rational>{q("0"), q("1/2")});
    CHECK(prof.smith_invariants == std::vector<Integer>{1, 2});
}

TEST_CASE("rank modulo p")
{
    CHECK(rank_mod_p(IntMatrix{{1, 1, 3}, {0, 1, 1}}, 3) == 2);
    CHECK(rank_mod_p(IntMatrix{{3, 6, 9}}, 3) == 0);
    CHECK(rank_mod_p(IntMatrix{{1, 2, 0}, {2, 4, 1}}, 5) == 2);
    CHECK(rank_mod_p(IntMatrix{{1, 2, 3}, {2, 4, 1}}, 5) == 1);
}

TEST_CASE("kernel basis is saturated and in Hermite form on random matrices")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t r = 1 + uniform_below(rng, 2);
        const std::size_t m = r + 1 + uniform_below(rng, 3);
        const IntMatrix L = random_matrix(rng, r, m, 4);
        const auto prof = analyze_matrix(L);
        REQUIRE(prof.kernel_basis.size() == m - r);
        for (const auto& b : prof.kernel_basis) {
            const auto image = L.apply(b);
            for (const auto& v : image)
                CHECK(v == 0);
        }
        CHECK(oracle::maximal_minor_gcd(prof.kernel_basis) == 1);
        CHECK(column_hermite_form(prof.kernel_basis) == prof.kernel_basis);

        Integer smith = 1;
        for (const auto& s : prof.smith_invariants)
            smith *= s;
        std::vector<IntVector> rows;
        for (std::size_t i = 0; i < r; ++i)
            rows.push_back(L.row(i));
        CHECK(smith == oracle::maximal_minor_gcd(rows));
        CHECK(smith == lattice_index(L));
        for (std::size_t k = 1; k < prof.smith_invariants.size(); ++k)
            CHECK(prof.smith_invariants[k] % prof.smith_invariants[k - 1] == 0);
    }
}

TEST_CASE("degenerate columns are exactly the constant coordinates")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const IntMatrix L = random_matrix(rng, 2, 3 + uniform_below(rng, 2), 2);
        const auto prof = analyze_matrix(L);
        for (std::size_t j = 0; j < L.cols(); ++j) {
            bool zero_row = true;
            for (const auto& b : prof.kernel_basis)
                zero_row = zero_row && b[j] == 0;
            const bool listed = std::any_of(prof.degenerate_columns.begin(),
                                            prof.degenerate_columns.end(),
                                            [&](const auto& d) { return d.column == j; });
            CHECK(zero_row == listed);
        }
        for (const auto& d : prof.degenerate_columns) {
            // v^T L = ell e_j
            for (std::size_t k = 0; k < L.cols(); ++k) {
                Integer s = 0;
                for (std::size_t i = 0; i < L.rows(); ++i)
                    s += d.witness[i] * L(i, k);
                CHECK(s == (k == d.column ? d.multiplier : Integer(0)));
            }
            CHECK(d.multiplier > 0);
        }
    }
}
