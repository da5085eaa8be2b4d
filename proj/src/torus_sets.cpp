#include "circlerm/torus_sets.hpp"
#include "circlerm/errors.hpp"

#include <algorithm>
#include <limits>

namespace circlerm {

namespace {

std::vector<Interval> normalize(std::vector<Interval> v)
{
    v.erase(std::remove_if(v.begin(), v.end(),
                           [](const Interval& i) { return i.lo >= i.hi; }),
            v.end());
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (auto& i : v) {
        if (!out.empty() && i.lo <= out.back().hi) {
            if (i.hi > out.back().hi)
                out.back().hi = i.hi;
        } else {
            out.push_back(std::move(i));
        }
    }
    return out;
}

IntervalUnion from_normalized(std::vector<Interval> v)
{
    // endpoints are already validated by the caller
    return IntervalUnion(std::move(v));
}

Rational frac(const Rational& t) { return t - Rational(floor(t)); }

} // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> intervals)
{
    for (const auto& i : intervals) {
        if (sgn(i.lo) < 0 || i.hi > 1 || i.lo > i.hi)
            throw InputError("interval [" + to_string(i.lo) + ", " + to_string(i.hi) +
                             ") must satisfy 0 <= a <= b <= 1");
    }
    intervals_ = normalize(std::move(intervals));
}

IntervalUnion IntervalUnion::full()
{
    return IntervalUnion({{Rational(0), Rational(1)}});
}

IntervalUnion IntervalUnion::arc(const Rational& lo, const Rational& hi)
{
    if (hi - lo >= 1)
        return full();
    if (hi <= lo)
        return {};
    Rational a = frac(lo);
    Rational b = a + (hi - lo);
    if (b <= 1)
        return IntervalUnion({{a, b}});
    return IntervalUnion({{a, Rational(1)}, {Rational(0), b - 1}});
}

bool IntervalUnion::contains(const Rational& x) const
{
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const Rational& v, const Interval& i) { return v < i.lo; });
    if (it == intervals_.begin())
        return false;
    --it;
    return x < it->hi;
}

bool IntervalUnion::contains(double x) const
{
    for (const auto& i : intervals_)
        if (x >= i.lo.get_d() && x < i.hi.get_d())
            return true;
    return false;
}

Integer IntervalUnion::grid_denominator() const
{
    Integer q = 1;
    for (const auto& i : intervals_) {
        q = lcm(q, i.lo.get_den());
        q = lcm(q, i.hi.get_den());
    }
    return q;
}

bool IntervalUnion::is_grid_measurable(const Integer& n) const
{
    return std::all_of(intervals_.begin(), intervals_.end(), [&](const Interval& i) {
        return is_multiple_of_unit(i.lo, n) && is_multiple_of_unit(i.hi, n);
    });
}

Rational measure(const IntervalUnion& a)
{
    Rational s = 0;
    for (const auto& i : a.intervals())
        s += i.hi - i.lo;
    return s;
}

IntervalUnion complement(const IntervalUnion& a)
{
    std::vector<Interval> out;
    Rational cursor = 0;
    for (const auto& i : a.intervals()) {
        if (cursor < i.lo)
            out.push_back({cursor, i.lo});
        cursor = i.hi;
    }
    if (cursor < 1)
        out.push_back({cursor, Rational(1)});
    return from_normalized(std::move(out));
}

IntervalUnion set_union(const IntervalUnion& a, const IntervalUnion& b)
{
    std::vector<Interval> v = a.intervals();
    v.insert(v.end(), b.intervals().begin(), b.intervals().end());
    return from_normalized(std::move(v));
}

IntervalUnion intersection(const IntervalUnion& a, const IntervalUnion& b)
{
    std::vector<Interval> out;
    const auto& x = a.intervals();
    const auto& y = b.intervals();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const Rational& lo = x[i].lo > y[j].lo ? x[i].lo : y[j].lo;
        const Rational& hi = x[i].hi < y[j].hi ? x[i].hi : y[j].hi;
        if (lo < hi)
            out.push_back({lo, hi});
        if (x[i].hi < y[j].hi)
            ++i;
        else
            ++j;
    }
    return from_normalized(std::move(out));
}

IntervalUnion difference(const IntervalUnion& a, const IntervalUnion& b)
{
    return intersection(a, complement(b));
}

IntervalUnion symmetric_difference(const IntervalUnion& a, const IntervalUnion& b)
{
    return set_union(difference(a, b), difference(b, a));
}

IntervalUnion shift(const IntervalUnion& a, const Rational& t)
{
    const Rational s = frac(t);
    std::vector<Interval> out;
    for (const auto& i : a.intervals()) {
        Rational lo = i.lo + s, hi = i.hi + s;
        if (hi <= 1) {
            out.push_back({lo, hi});
        } else if (lo >= 1) {
            out.push_back({lo - 1, hi - 1});
        } else {
            out.push_back({lo, Rational(1)});
            out.push_back({Rational(0), hi - 1});
        }
    }
    return from_normalized(std::move(out));
}

IntervalUnion snap_to_grid(const IntervalUnion& a, const Integer& n)
{
    std::vector<Interval> out;
    for (const auto& i : a.intervals()) {
        Integer first = ceil(i.lo * n);
        Integer last = floor(i.hi * n); // exclusive cell bound
        if (first < last)
            out.push_back({Rational(first, n), Rational(last, n)});
    }
    for (auto& i : out) {
        i.lo.canonicalize();
        i.hi.canonicalize();
    }
    return from_normalized(std::move(out));
}

DiscreteSet::DiscreteSet(std::uint64_t p, const std::vector<std::uint64_t>& elements)
    : members_(p, 0)
{
    for (auto x : elements)
        insert(x);
}

std::uint64_t DiscreteSet::count() const
{
    return static_cast<std::uint64_t>(std::count(members_.begin(), members_.end(), 1));
}

std::vector<std::uint64_t> DiscreteSet::elements() const
{
    std::vector<std::uint64_t> out;
    for (std::uint64_t x = 0; x < members_.size(); ++x)
        if (members_[x])
            out.push_back(x);
    return out;
}

DiscreteSet DiscreteSet::full(std::uint64_t p)
{
    DiscreteSet d(p);
    std::fill(d.members_.begin(), d.members_.end(), 1);
    return d;
}

DiscreteSet to_discrete(const IntervalUnion& a, std::uint64_t p)
{
    const Integer pz(static_cast<unsigned long>(p));
    DiscreteSet d(p);
    for (const auto& i : a.intervals()) {
        for (const Rational* e : {&i.lo, &i.hi})
            if (!is_multiple_of_unit(*e, pz))
                throw InputError("set is not " + std::to_string(p) +
                                 "-measurable: endpoint " + to_string(*e) +
                                 " is not a multiple of 1/" + std::to_string(p));
        Rational lo = i.lo * pz, hi = i.hi * pz;
        for (Integer x = lo.get_num(); x < hi.get_num(); ++x)
            d.insert(x.get_ui());
    }
    return d;
}

IntervalUnion from_discrete(const DiscreteSet& d)
{
    const std::uint64_t p = d.modulus();
    const Integer pz(static_cast<unsigned long>(p));
    std::vector<Interval> out;
    std::uint64_t x = 0;
    while (x < p) {
        if (!d.contains(x)) {
            ++x;
            continue;
        }
        std::uint64_t y = x;
        while (y < p && d.contains(y))
            ++y;
        Rational lo(Integer(static_cast<unsigned long>(x)), pz);
        Rational hi(Integer(static_cast<unsigned long>(y)), pz);
        lo.canonicalize();
        hi.canonicalize();
        out.push_back({lo, hi});
        x = y;
    }
    return IntervalUnion(std::move(out));
}

bool DensityPoints::contains(const Rational& x) const
{
    if (full_circle)
        return true;
    for (const auto& a : arcs) {
        if (a.start < x && x < a.end)
            return true;
        Rational y = x + 1;
        if (a.start < y && y < a.end)
            return true;
    }
    return false;
}

DensityPoints density_points(const IntervalUnion& a)
{
    DensityPoints out;
    const auto& iv = a.intervals();
    if (iv.empty())
        return out;
    if (iv.size() == 1 && sgn(iv.front().lo) == 0 && iv.front().hi == 1) {
        out.full_circle = true;
        out.arcs.push_back({Rational(0), Rational(1)});
        return out;
    }
    const bool wraps = iv.size() > 1 && sgn(iv.front().lo) == 0 && iv.back().hi == 1;
    const std::size_t begin = wraps ? 1 : 0;
    const std::size_t end = wraps ? iv.size() - 1 : iv.size();
    for (std::size_t i = begin; i < end; ++i)
        out.arcs.push_back({iv[i].lo, iv[i].hi});
    if (wraps)
        out.arcs.push_back({iv.back().lo, 1 + iv.front().hi});
    return out;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n)
{
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

IntervalUnion random_grid_set(std::mt19937_64& rng, std::uint64_t n,
                              std::size_t max_runs)
{
    DiscreteSet cells(n);
    const std::size_t runs = 1 + uniform_below(rng, max_runs);
    const std::uint64_t max_len = std::max<std::uint64_t>(1, n / (runs + 1));
    for (std::size_t r = 0; r < runs; ++r) {
        const std::uint64_t start = uniform_below(rng, n);
        const std::uint64_t len = 1 + uniform_below(rng, max_len);
        for (std::uint64_t k = 0; k < len; ++k)
            cells.insert((start + k) % n);
    }
    return from_discrete(cells);
}

IntervalUnion random_cell_set(std::mt19937_64& rng, std::uint64_t n)
{
    DiscreteSet cells(n);
    for (std::uint64_t x = 0; x < n; ++x)
        if (rng() & 1)
            cells.insert(x);
    return from_discrete(cells);
}

} // namespace circlerm
