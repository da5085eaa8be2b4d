#include "circlerm/removal_lab.hpp"

#include "circlerm/errors.hpp"
#include "circlerm/measures.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace circlerm {

namespace {

std::vector<DiscreteSet> discretize(const KernelDecomposition& K, std::uint64_t p,
                                    std::span<const IntervalUnion> sets)
{
    if (sets.size() != K.matrix().cols())
        throw InputError("expected " + std::to_string(K.matrix().cols()) +
                         " sets, got " + std::to_string(sets.size()));
    std::vector<DiscreteSet> out;
    for (const auto& a : sets)
        out.push_back(to_discrete(a, p));
    return out;
}

// Every box of prod A'_i inside a positive-weight coset, sorted by j.
std::vector<ViolatingBox> collect_boxes(const KernelDecomposition& K, std::uint64_t p,
                                        const std::vector<DiscreteSet>& discrete)
{
    const KernelParametrization kp(K.matrix(), p);
    const std::size_t m = K.matrix().cols();
    std::vector<ViolatingBox> boxes;
    std::vector<std::uint64_t> j(m);
    for (const auto& shift : shift_cover(K, p)) {
        kp.for_each([&](const std::vector<std::uint64_t>& x) {
            for (std::size_t i = 0; i < m; ++i) {
                j[i] = (x[i] + shift.j[i]) % p;
                if (!discrete[i].contains(j[i]))
                    return true;
            }
            boxes.push_back({j, shift.lambda});
            return true;
        });
    }
    std::sort(boxes.begin(), boxes.end(),
              [](const auto& a, const auto& b) { return a.j < b.j; });
    return boxes;
}

std::optional<RationalVector> full_dimensional_point(const KernelDecomposition& K,
                                                     std::size_t c,
                                                     std::span<const Rational> lo,
                                                     std::span<const Rational> hi)
{
    if (K.components()[c].zero_volume() || !K.may_meet(c, lo, hi))
        return std::nullopt;
    HPolytope poly(K.kernel_dim());
    if (!K.slice_polytope(c, lo, hi, poly))
        return std::nullopt;
    const auto vol = volume(poly);
    if (!vol.is_full_dimensional)
        return std::nullopt;
    return K.point(c, vertex_centroid(vol.vertices));
}

} // namespace

std::optional<RationalVector> witness_in_box(const KernelDecomposition& K,
                                             std::span<const std::uint64_t> j,
                                             std::uint64_t p)
{
    const std::size_t m = K.matrix().cols();
    const Integer pz(static_cast<unsigned long>(p));
    RationalVector lo(m), hi(m);
    for (std::size_t i = 0; i < m; ++i) {
        lo[i] = Rational(Integer(static_cast<unsigned long>(j[i])), pz);
        hi[i] = Rational(Integer(static_cast<unsigned long>(j[i] + 1)), pz);
        lo[i].canonicalize();
        hi[i].canonicalize();
    }
    for (std::size_t c = 0; c < K.components().size(); ++c)
        if (auto x = full_dimensional_point(K, c, lo, hi))
            return x;
    return std::nullopt;
}

ViolationReport find_violating_boxes(const KernelDecomposition& K, std::uint64_t p,
                                     std::span<const IntervalUnion> sets)
{
    require_kernel_prime(K.matrix(), p);
    ViolationReport report;
    report.p = p;
    report.boxes = collect_boxes(K, p, discretize(K, p, sets));
    if (!report.boxes.empty())
        report.witness = witness_in_box(K, report.boxes.front().j, p);
    return report;
}

RemovalOutcome greedy_removal(const KernelDecomposition& K, std::uint64_t p,
                              std::span<const IntervalUnion> sets)
{
    require_kernel_prime(K.matrix(), p);
    auto discrete = discretize(K, p, sets);
    auto boxes = collect_boxes(K, p, discrete);
    const std::size_t m = K.matrix().cols();

    RemovalOutcome out;
    out.p = p;
    std::vector<DiscreteSet> removed(m, DiscreteSet(p));
    std::vector<std::vector<std::uint64_t>> hits(m, std::vector<std::uint64_t>(p));
    while (!boxes.empty()) {
        for (auto& row : hits)
            std::fill(row.begin(), row.end(), 0);
        for (const auto& b : boxes)
            for (std::size_t i = 0; i < m; ++i)
                ++hits[i][b.j[i]];
        RemovedCell best;
        std::uint64_t most = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::uint64_t x = 0; x < p; ++x)
                if (hits[i][x] > most) {
                    most = hits[i][x];
                    best = {i, x};
                }
        removed[best.coordinate].insert(best.cell);
        discrete[best.coordinate].erase(best.cell);
        out.removed.push_back(best);
        std::erase_if(boxes, [&](const auto& b) { return b.j[best.coordinate] == best.cell; });
    }
    out.iterations = out.removed.size();
    out.total_removed = 0;
    for (std::size_t i = 0; i < m; ++i) {
        out.removed_sets.push_back(from_discrete(removed[i]));
        out.removed_measures.push_back(measure(out.removed_sets.back()));
        out.total_removed += out.removed_measures.back();
        out.remaining.push_back(difference(sets[i], out.removed_sets.back()));
    }
    out.verified_free = sgn(solution_measure(K, out.remaining).value) == 0;
    return out;
}

ZeroMeasureReport zero_measure_check(const KernelDecomposition& K,
                                     std::span<const IntervalUnion> sets)
{
    const std::size_t m = K.matrix().cols();
    if (sets.size() != m)
        throw InputError("expected " + std::to_string(m) + " sets, got " +
                         std::to_string(sets.size()));

    // Positive measure: exhibit a full-dimensional block.
    if (sgn(solution_measure(K, sets).value) > 0) {
        std::vector<std::size_t> idx(m, 0);
        RationalVector lo(m), hi(m);
        for (;;) {
            for (std::size_t i = 0; i < m; ++i) {
                lo[i] = sets[i].intervals()[idx[i]].lo;
                hi[i] = sets[i].intervals()[idx[i]].hi;
            }
            for (std::size_t c = 0; c < K.components().size(); ++c)
                if (auto x = full_dimensional_point(K, c, lo, hi))
                    throw SolutionExists("solution measure is positive", *x);
            std::size_t i = m;
            while (i-- > 0) {
                if (++idx[i] < sets[i].size())
                    break;
                idx[i] = 0;
            }
            if (i == static_cast<std::size_t>(-1))
                throw std::logic_error("positive measure without a full-dimensional block");
        }
    }

    ZeroMeasureReport report;
    for (const auto& a : sets)
        report.density.push_back(density_points(a));

    // Closed pieces covering the closure of each density set within [0,1].
    std::vector<std::vector<std::pair<Rational, Rational>>> pieces(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& dp = report.density[i];
        if (dp.full_circle) {
            pieces[i].push_back({Rational(0), Rational(1)});
            continue;
        }
        for (const auto& arc : dp.arcs) {
            if (arc.end <= 1) {
                pieces[i].push_back({arc.start, arc.end});
            } else {
                pieces[i].push_back({arc.start, Rational(1)});
                pieces[i].push_back({Rational(0), arc.end - 1});
            }
        }
        if (pieces[i].empty()) {
            report.empty_intersection = true;
            return report;
        }
    }

    // The set of solutions with all x_i density points is relatively open in
    // ker_T L, so it is nonempty iff some piece product cuts a component in a
    // full-dimensional polytope. Constant coordinates must sit in the open arcs.
    const std::size_t d = K.kernel_dim();
    for (std::size_t c = 0; c < K.components().size(); ++c) {
        const auto& comp = K.components()[c];
        if (comp.zero_volume())
            continue;
        bool constants_ok = true;
        for (std::size_t i = 0; i < m && constants_ok; ++i)
            if (K.is_constant_coordinate(i))
                constants_ok = report.density[i].contains(comp.representative[i]);
        if (!constants_ok)
            continue;
        std::vector<std::size_t> idx(m, 0);
        for (;;) {
            HPolytope poly(d);
            for (std::size_t i = 0; i < m; ++i) {
                if (K.is_constant_coordinate(i))
                    continue;
                const auto& [lo, hi] = pieces[i][idx[i]];
                poly.add_range(K.basis_row(i), lo - comp.representative[i],
                               hi - comp.representative[i]);
            }
            if (volume(poly).is_full_dimensional) {
                report.empty_intersection = false;
                return report;
            }
            std::size_t i = m;
            while (i-- > 0) {
                if (K.is_constant_coordinate(i))
                    continue;
                if (++idx[i] < pieces[i].size())
                    break;
                idx[i] = 0;
            }
            if (i == static_cast<std::size_t>(-1))
                break;
        }
    }
    report.empty_intersection = true;
    return report;
}

namespace {

// A random grid set with at most four runs (plus up to two isolated cells)
// and measure at least alpha.
IntervalUnion probe_set(std::mt19937_64& rng, const Rational& alpha)
{
    static constexpr std::uint64_t grids[] = {7, 11, 13, 17, 19, 23, 29};
    const std::uint64_t n = grids[uniform_below(rng, std::size(grids))];
    Rational needed_q = alpha * Rational(Integer(static_cast<unsigned long>(n)));
    const std::uint64_t needed = ceil(needed_q).get_ui();
    if (needed >= n)
        return IntervalUnion::full();

    DiscreteSet cells(n);
    const std::size_t runs = 1 + uniform_below(rng, 4);
    std::vector<std::uint64_t> ends;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::uint64_t s = uniform_below(rng, n);
        cells.insert(s);
        ends.push_back(s);
    }
    while (cells.count() < needed) {
        auto& e = ends[uniform_below(rng, ends.size())];
        e = (e + 1) % n;
        cells.insert(e);
    }
    const std::uint64_t extra = uniform_below(rng, 3);
    for (std::uint64_t k = 0; k < extra; ++k)
        cells.insert(uniform_below(rng, n));
    return from_discrete(cells);
}

} // namespace

ProbeResult szemeredi_probe(const KernelDecomposition& K, const Rational& alpha,
                            std::size_t trials, std::uint64_t seed)
{
    if (!K.profile().is_invariant)
        throw PreconditionError("the probe needs an invariant matrix (every row summing to 0)");
    if (sgn(alpha) <= 0 || alpha > 1)
        throw InputError("alpha must lie in (0, 1], got " + to_string(alpha));
    if (trials == 0)
        throw InputError("at least one trial is required");

    const std::size_t m = K.matrix().cols();
    std::mt19937_64 rng(seed);
    ProbeResult result;
    result.alpha = alpha;
    result.trials = trials;
    result.all_positive = true;
    for (std::size_t t = 0; t < trials; ++t) {
        IntervalUnion a = t == 0 ? IntervalUnion({{Rational(0), alpha}}) : probe_set(rng, alpha);
        const std::vector<IntervalUnion> family(m, a);
        const Rational value = solution_measure(K, family).value;
        if (t == 0 || value < result.min_value) {
            result.min_value = value;
            result.argmin = a;
        }
        result.all_positive = result.all_positive && sgn(value) > 0;
        result.values.push_back(value);
    }
    return result;
}

namespace {

// Supports of kernel vectors as sorted, deduplicated element lists.
std::vector<std::vector<std::uint32_t>> solution_supports(const IntMatrix& L, std::uint64_t p)
{
    const KernelParametrization kp(L, p);
    std::set<std::vector<std::uint32_t>> edges;
    std::vector<std::uint32_t> e;
    kp.for_each([&](const std::vector<std::uint64_t>& x) {
        e.assign(x.begin(), x.end());
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        edges.insert(e);
        return true;
    });
    return {edges.begin(), edges.end()};
}

class ExhaustiveSearch {
public:
    ExhaustiveSearch(const std::vector<std::vector<std::uint32_t>>& edges, std::uint64_t p)
        : p_(static_cast<unsigned>(p)), by_max_(p)
    {
        for (const auto& e : edges) {
            std::uint32_t mask = 0;
            for (auto x : e)
                mask |= 1u << x;
            by_max_[e.back()].push_back(mask);
        }
    }

    std::uint32_t run()
    {
        dfs(0, 0, 0);
        return best_mask_;
    }

private:
    void dfs(unsigned x, std::uint32_t cur, unsigned size)
    {
        if (size + (p_ - x) <= best_)
            return;
        if (x == p_) {
            if (size > best_) {
                best_ = size;
                best_mask_ = cur;
            }
            return;
        }
        const std::uint32_t with = cur | (1u << x);
        bool ok = true;
        for (auto mask : by_max_[x])
            if ((mask & with) == mask) {
                ok = false;
                break;
            }
        if (ok)
            dfs(x + 1, with, size + 1);
        dfs(x + 1, cur, size);
    }

    unsigned p_;
    std::vector<std::vector<std::uint32_t>> by_max_;
    unsigned best_ = 0;
    std::uint32_t best_mask_ = 0;
};

std::vector<std::uint64_t> local_search(const std::vector<std::vector<std::uint32_t>>& edges,
                                        std::uint64_t p, std::uint64_t seed)
{
    std::vector<std::vector<std::size_t>> incident(p);
    for (std::size_t k = 0; k < edges.size(); ++k)
        for (auto x : edges[k])
            incident[x].push_back(k);

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> best;
    const std::size_t restarts = 24;
    const std::size_t patience = 20 * p;
    for (std::size_t r = 0; r < restarts; ++r) {
        std::vector<char> in(p, 0);
        std::vector<std::size_t> covered(edges.size(), 0);
        std::size_t size = 0, best_here = 0, stale = 0;
        auto addable = [&](std::uint64_t y) {
            if (in[y])
                return false;
            for (auto k : incident[y])
                if (covered[k] + 1 == edges[k].size())
                    return false;
            return true;
        };
        auto toggle = [&](std::uint64_t y, bool on) {
            in[y] = on;
            for (auto k : incident[y])
                covered[k] += on ? 1 : std::size_t(-1);
            size += on ? 1 : std::size_t(-1);
        };
        auto record = [&] {
            if (size > best.size()) {
                best.clear();
                for (std::uint64_t x = 0; x < p; ++x)
                    if (in[x])
                        best.push_back(x);
            }
        };
        std::vector<std::uint64_t> candidates;
        while (stale < patience) {
            candidates.clear();
            for (std::uint64_t y = 0; y < p; ++y)
                if (addable(y))
                    candidates.push_back(y);
            if (!candidates.empty()) {
                toggle(candidates[uniform_below(rng, candidates.size())], true);
                record();
                if (size > best_here) {
                    best_here = size;
                    stale = 0;
                    continue;
                }
            } else if (size > 0) {
                // swap: trade a random member for another admissible element
                std::uint64_t k = uniform_below(rng, size), out = 0;
                for (std::uint64_t x = 0; x < p; ++x)
                    if (in[x] && k-- == 0) {
                        out = x;
                        break;
                    }
                toggle(out, false);
                candidates.clear();
                for (std::uint64_t y = 0; y < p; ++y)
                    if (y != out && addable(y))
                        candidates.push_back(y);
                toggle(candidates.empty() ? out : candidates[uniform_below(rng, candidates.size())],
                       true);
            } else {
                break;
            }
            ++stale;
        }
    }
    return best;
}

} // namespace

DensityResult density_search(const IntMatrix& L, std::uint64_t p, SearchMode mode,
                             std::uint64_t seed)
{
    require_kernel_prime(L, p);
    if (mode == SearchMode::exhaustive && p > kMaxExhaustivePrime)
        throw PreconditionError("exhaustive search is limited to p <= " +
                                std::to_string(kMaxExhaustivePrime));
    DensityResult result;
    result.p = p;
    result.mode = mode;
    result.density = 0;

    bool invariant = true;
    for (std::size_t i = 0; i < L.rows() && invariant; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < L.cols(); ++j)
            s += L(i, j);
        invariant = s == 0;
    }
    if (invariant) {
        result.invariant_warning = true;
        return result;
    }

    const auto edges = solution_supports(L, p);
    if (mode == SearchMode::exhaustive) {
        const std::uint32_t mask = ExhaustiveSearch(edges, p).run();
        for (std::uint64_t x = 0; x < p; ++x)
            if (mask >> x & 1u)
                result.best.push_back(x);
    } else {
        result.best = local_search(edges, p, seed);
    }
    result.density = Rational(Integer(static_cast<unsigned long>(result.best.size())),
                              Integer(static_cast<unsigned long>(p)));
    result.density.canonicalize();
    return result;
}

} // namespace circlerm
