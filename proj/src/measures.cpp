#include "circlerm/measures.hpp"

#include "circlerm/discrete.hpp"
#include "circlerm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

namespace circlerm {

namespace {

void check_arity(const KernelDecomposition& K, std::span<const IntervalUnion> sets)
{
    if (sets.size() != K.matrix().cols())
        throw InputError("expected " + std::to_string(K.matrix().cols()) +
                         " sets, got " + std::to_string(sets.size()));
}

unsigned clamp_workers(unsigned workers)
{
    return std::max(1u, workers);
}

// Runs body(w) for w in [0, workers) and rethrows the first exception.
template <class Body>
void run_workers(unsigned workers, Body body)
{
    if (workers == 1) {
        body(0u);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex guard;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                body(w);
            } catch (...) {
                std::lock_guard lock(guard);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace

std::string_view route_name(Route route)
{
    switch (route) {
    case Route::geometric: return "geometric";
    case Route::decomposition: return "decomposition";
    case Route::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

MeasureReport solution_measure(const KernelDecomposition& K,
                               std::span<const IntervalUnion> sets,
                               const MeasureOptions& options)
{
    check_arity(K, sets);
    const std::size_t m = sets.size();

    MeasureReport report;
    report.route = Route::geometric;
    Integer q = 1;
    for (const auto& a : sets)
        q = lcm(q, a.grid_denominator());
    report.p_used = q.fits_ulong_p() ? q.get_ui() : 0;

    if (std::any_of(sets.begin(), sets.end(), [](const auto& a) { return a.is_empty(); })) {
        report.value = 0;
        return report;
    }

    // Blocks are (component, interval product) pairs, numbered so that
    // workers can take every w-th one.
    std::vector<std::size_t> positive;
    for (std::size_t c = 0; c < K.components().size(); ++c)
        if (!K.components()[c].zero_volume())
            positive.push_back(c);
    std::uint64_t products = 1;
    for (const auto& a : sets)
        products *= a.size();

    const unsigned workers = clamp_workers(options.workers);
    std::vector<Rational> partial(workers, Rational(0));
    run_workers(workers, [&](unsigned w) {
        RationalVector lo(m), hi(m);
        std::vector<std::size_t> idx(m, 0);
        std::uint64_t block = 0;
        for (std::uint64_t prod = 0; prod < products; ++prod) {
            for (std::size_t i = 0; i < m; ++i) {
                lo[i] = sets[i].intervals()[idx[i]].lo;
                hi[i] = sets[i].intervals()[idx[i]].hi;
            }
            for (std::size_t c : positive)
                if (block++ % workers == w)
                    partial[w] += K.slice_volume(c, lo, hi);
            for (std::size_t i = m; i-- > 0;) {
                if (++idx[i] < sets[i].size())
                    break;
                idx[i] = 0;
            }
        }
    });
    Rational total = 0;
    for (const auto& v : partial)
        total += v;
    report.value = total * K.c_param();

    if (options.cross_check_boxes) {
        const Rational boxes = solution_measure_by_boxes(K, sets);
        if (boxes != report.value)
            throw std::logic_error("box sum " + to_string(boxes) +
                                   " disagrees with block sum " + to_string(report.value));
    }
    return report;
}

Rational solution_measure_by_boxes(const KernelDecomposition& K,
                                   std::span<const IntervalUnion> sets)
{
    check_arity(K, sets);
    Integer q = 1;
    for (const auto& a : sets)
        q = lcm(q, a.grid_denominator());
    if (!q.fits_uint_p())
        throw InputError("grid " + q.get_str() + " is too fine for the box sum");
    const std::uint64_t n = q.get_ui();

    std::vector<std::vector<std::uint64_t>> cells;
    for (const auto& a : sets) {
        cells.push_back(to_discrete(a, n).elements());
        if (cells.back().empty())
            return 0;
    }
    const std::size_t m = sets.size();
    std::vector<std::size_t> idx(m, 0);
    std::vector<std::uint64_t> j(m);
    Rational total = 0;
    for (;;) {
        for (std::size_t i = 0; i < m; ++i)
            j[i] = cells[i][idx[i]];
        total += box_measure(K, j, n);
        std::size_t i = m;
        while (i-- > 0) {
            if (++idx[i] < cells[i].size())
                break;
            idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1))
            break;
    }
    return total;
}

MeasureReport decompose(const KernelDecomposition& K, std::uint64_t p,
                        std::span<const IntervalUnion> sets, unsigned workers)
{
    check_arity(K, sets);
    require_kernel_prime(K.matrix(), p);
    std::vector<DiscreteSet> discrete;
    for (const auto& a : sets)
        discrete.push_back(to_discrete(a, p));

    MeasureReport report;
    report.route = Route::decomposition;
    report.p_used = p;
    report.value = 0;
    for (auto& s : shift_cover(K, p)) {
        ShiftTerm term;
        term.density = solution_density(K.matrix(), p, discrete, s.j, workers);
        term.lambda = s.lambda;
        term.j = std::move(s.j);
        report.value += term.lambda * term.density;
        report.per_shift.push_back(std::move(term));
    }
    return report;
}

namespace {

struct SamplerComponent {
    std::vector<double> lo, hi;  // bounding box of the parameter polytope
    std::vector<double> base;    // x_b
};

struct DoubleSet {
    std::vector<double> lo, hi;
    bool contains(double x) const
    {
        auto it = std::upper_bound(lo.begin(), lo.end(), x);
        if (it == lo.begin())
            return false;
        return x < hi[static_cast<std::size_t>(it - lo.begin()) - 1];
    }
};

} // namespace

MeasureReport monte_carlo_estimate(const KernelDecomposition& K,
                                   std::span<const IntervalUnion> sets,
                                   std::uint64_t n_samples, std::uint64_t seed,
                                   unsigned workers)
{
    check_arity(K, sets);
    if (n_samples == 0)
        throw InputError("sample count must be positive");
    const std::size_t m = sets.size();
    const std::size_t d = K.kernel_dim();

    std::vector<SamplerComponent> comps;
    std::vector<double> cumulative;
    double running = 0;
    const RationalVector zero(m, Rational(0)), one(m, Rational(1));
    for (std::size_t c = 0; c < K.components().size(); ++c) {
        const auto& comp = K.components()[c];
        if (comp.zero_volume())
            continue;
        HPolytope poly(d);
        K.slice_polytope(c, zero, one, poly);
        const auto verts = enumerate_vertices(poly);
        SamplerComponent s;
        s.lo.assign(d, INFINITY);
        s.hi.assign(d, -INFINITY);
        for (const auto& v : verts)
            for (std::size_t k = 0; k < d; ++k) {
                s.lo[k] = std::min(s.lo[k], v[k].get_d());
                s.hi[k] = std::max(s.hi[k], v[k].get_d());
            }
        for (const auto& x : comp.representative)
            s.base.push_back(x.get_d());
        comps.push_back(std::move(s));
        running += comp.volume_param.get_d();
        cumulative.push_back(running);
    }
    std::vector<std::vector<double>> basis(m, std::vector<double>(d));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < d; ++k)
            basis[i][k] = K.basis_row(i)[k].get_d();
    std::vector<DoubleSet> targets(m);
    for (std::size_t i = 0; i < m; ++i)
        for (const auto& iv : sets[i].intervals()) {
            targets[i].lo.push_back(iv.lo.get_d());
            targets[i].hi.push_back(iv.hi.get_d());
        }

    workers = clamp_workers(workers);
    std::vector<std::uint64_t> hits(workers, 0);
    run_workers(workers, [&](unsigned w) {
        const std::uint64_t quota = n_samples / workers + (w < n_samples % workers ? 1 : 0);
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(w)};
        std::mt19937_64 rng(seq);
        auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        std::vector<double> t(d), x(m);
        std::uint64_t attempts = 0, accepted = 0;
        for (std::uint64_t s = 0; s < quota; ++s) {
            const double u = unit() * running;
            std::size_t c = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            c = std::min(c, comps.size() - 1);
            const auto& comp = comps[c];
            for (;;) {
                ++attempts;
                if (attempts > 10000 && static_cast<double>(accepted) <
                                            kMinAcceptance * static_cast<double>(attempts))
                    throw PreconditionError(
                        "rejection sampler acceptance fell below " + std::to_string(kMinAcceptance) +
                        "; the component bounding boxes need refining (split the parameter "
                        "polytopes) before sampling this system");
                for (std::size_t k = 0; k < d; ++k)
                    t[k] = comp.lo[k] + unit() * (comp.hi[k] - comp.lo[k]);
                bool inside = true;
                for (std::size_t i = 0; i < m && inside; ++i) {
                    double v = comp.base[i];
                    for (std::size_t k = 0; k < d; ++k)
                        v += basis[i][k] * t[k];
                    inside = v >= 0.0 && v <= 1.0;
                    x[i] = v >= 1.0 ? 0.0 : v;
                }
                if (inside)
                    break;
            }
            ++accepted;
            bool hit = true;
            for (std::size_t i = 0; i < m && hit; ++i)
                hit = targets[i].contains(x[i]);
            hits[w] += hit ? 1 : 0;
        }
    });

    std::uint64_t total_hits = 0;
    for (auto h : hits)
        total_hits += h;
    MeasureReport report;
    report.route = Route::monte_carlo;
    report.samples = n_samples;
    report.estimate = static_cast<double>(total_hits) / static_cast<double>(n_samples);
    report.std_error = std::sqrt(report.estimate * (1.0 - report.estimate) /
                                 static_cast<double>(n_samples));
    report.half_width = 2.5758293035489 * report.std_error;
    return report;
}

Rational approximation_bound(const MatrixProfile& profile,
                             std::span<const IntervalUnion> originals,
                             std::span<const IntervalUnion> approximants)
{
    if (originals.size() != approximants.size())
        throw InputError("original and approximating families differ in length");
    if (!profile.degenerate_columns.empty()) {
        std::string cols;
        for (const auto& dc : profile.degenerate_columns)
            cols += (cols.empty() ? "" : ", ") + std::to_string(dc.column + 1);
        throw PreconditionError("degenerate column(s) " + cols +
                                ": the bound needs every coordinate to map onto T; "
                                "reduce with reduce_degenerate first");
    }
    Rational total = 0;
    for (std::size_t i = 0; i < originals.size(); ++i)
        total += measure(symmetric_difference(originals[i], approximants[i]));
    return total;
}

} // namespace circlerm
