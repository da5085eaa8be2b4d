#include "circlerm/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace circlerm {

namespace {

bool is_zero(const RationalVector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Rational dot(const RationalVector& a, const RationalVector& b)
{
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0)
            s += a[i] * b[i];
    return s;
}

RationalVector negated(const RationalVector& v)
{
    RationalVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = -v[i];
    return out;
}

// Some non-zero vector orthogonal to every row; rows must have rank < dim.
RationalVector orthogonal_vector(std::vector<RationalVector> rows, std::size_t dim)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && sgn(rows[piv][c]) == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[piv], rows[r]);
        Rational inv = 1 / rows[r][c];
        for (auto& q : rows[r])
            q *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || sgn(rows[i][c]) == 0)
                continue;
            Rational f = rows[i][c];
            for (std::size_t k = 0; k < dim; ++k)
                rows[i][k] -= f * rows[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    for (std::size_t f = 0; f < dim; ++f) {
        if (std::find(pivots.begin(), pivots.end(), f) != pivots.end())
            continue;
        RationalVector v(dim, Rational(0));
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -rows[i][f];
        return v;
    }
    return {};
}

template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& visit)
{
    if (k > n)
        return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        visit(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

std::string format_vector(const RationalVector& v)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? ", " : "") << to_string(v[i]);
    os << ")";
    return os.str();
}

// Throws UnboundedPolytope if the recession cone {y : A y <= 0} is non-trivial.
void require_bounded(const std::vector<HalfSpace>& cons, std::size_t dim)
{
    // fast path: paired range constraints whose normals span the space
    std::vector<RationalVector> paired;
    for (std::size_t a = 0; a < cons.size(); ++a)
        for (std::size_t b = a + 1; b < cons.size(); ++b) {
            bool opposite = true;
            for (std::size_t k = 0; k < dim && opposite; ++k)
                opposite = cons[a].normal[k] == -cons[b].normal[k];
            if (opposite) {
                paired.push_back(cons[a].normal);
                break;
            }
        }
    if (rank(paired) == dim)
        return;

    std::vector<RationalVector> normals;
    for (const auto& h : cons)
        normals.push_back(h.normal);
    auto fail = [&](const RationalVector& dir) {
        throw UnboundedPolytope("polytope is unbounded along recession direction " +
                                    format_vector(dir),
                                dir);
    };
    if (rank(normals) < dim)
        fail(orthogonal_vector(normals, dim));
    for_each_subset(normals.size(), dim - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<RationalVector> sub;
        for (auto i : idx)
            sub.push_back(normals[i]);
        if (rank(sub) != dim - 1)
            return;
        RationalVector y = orthogonal_vector(sub, dim);
        for (int sign : {1, -1}) {
            RationalVector dir = sign > 0 ? y : negated(y);
            bool recedes = std::all_of(normals.begin(), normals.end(),
                                       [&](const RationalVector& a) { return sgn(dot(a, dir)) <= 0; });
            if (recedes)
                fail(dir);
        }
    });
}

std::size_t affine_dim(const std::vector<RationalVector>& verts,
                       const std::vector<std::size_t>& idx)
{
    if (idx.size() <= 1)
        return 0;
    std::vector<RationalVector> diffs;
    const auto& base = verts[idx.front()];
    for (std::size_t i = 1; i < idx.size(); ++i) {
        RationalVector d(base.size());
        for (std::size_t k = 0; k < base.size(); ++k)
            d[k] = verts[idx[i]][k] - base[k];
        diffs.push_back(std::move(d));
    }
    return rank(std::move(diffs));
}

struct Triangulator {
    const std::vector<RationalVector>& verts;
    const std::vector<std::vector<char>>& tight; // [constraint][vertex]

    // Simplices (each k+1 vertex indices) of a pulling triangulation of the
    // k-dimensional face whose vertex indices are `face` (ascending).
    std::vector<std::vector<std::size_t>> run(const std::vector<std::size_t>& face,
                                              std::size_t k) const
    {
        if (k == 0)
            return {{face.front()}};
        const std::size_t apex = face.front();
        std::set<std::vector<std::size_t>> facets;
        for (const auto& row : tight) {
            if (row[apex])
                continue;
            std::vector<std::size_t> sub;
            for (auto v : face)
                if (row[v])
                    sub.push_back(v);
            if (sub.size() < k)
                continue;
            if (facets.count(sub))
                continue;
            if (affine_dim(verts, sub) == k - 1)
                facets.insert(std::move(sub));
        }
        std::vector<std::vector<std::size_t>> out;
        for (const auto& f : facets)
            for (auto& simplex : run(f, k - 1)) {
                simplex.insert(simplex.begin(), apex);
                out.push_back(std::move(simplex));
            }
        return out;
    }
};

Rational factorial(std::size_t n)
{
    Rational f = 1;
    for (std::size_t i = 2; i <= n; ++i)
        f *= static_cast<unsigned long>(i);
    return f;
}

} // namespace

HPolytope::HPolytope(std::size_t dim, std::vector<HalfSpace> constraints)
    : dim_(dim), constraints_(std::move(constraints))
{
    for (const auto& h : constraints_)
        if (h.normal.size() != dim_)
            throw InputError("constraint normal has wrong dimension");
}

void HPolytope::add(RationalVector normal, Rational bound)
{
    if (normal.size() != dim_)
        throw InputError("constraint normal has wrong dimension");
    constraints_.push_back({std::move(normal), std::move(bound)});
}

void HPolytope::add_range(const RationalVector& normal, const Rational& lo,
                          const Rational& hi)
{
    add(normal, hi);
    add(negated(normal), -lo);
}

bool HPolytope::contains(const RationalVector& t) const
{
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const HalfSpace& h) { return dot(h.normal, t) <= h.bound; });
}

std::vector<RationalVector> enumerate_vertices(const HPolytope& poly)
{
    const std::size_t d = poly.dim();
    std::vector<HalfSpace> cons;
    bool infeasible = false;
    for (const auto& h : poly.constraints()) {
        if (is_zero(h.normal)) {
            if (sgn(h.bound) < 0)
                infeasible = true;
            continue;
        }
        cons.push_back(h);
    }
    require_bounded(cons, d);
    if (infeasible)
        return {};

    std::vector<RationalVector> verts;
    std::vector<RationalVector> a(d);
    RationalVector b(d), t;
    for_each_subset(cons.size(), d, [&](const std::vector<std::size_t>& idx) {
        for (std::size_t i = 0; i < d; ++i) {
            a[i] = cons[idx[i]].normal;
            b[i] = cons[idx[i]].bound;
        }
        if (!solve_square(a, b, t))
            return;
        for (const auto& h : cons)
            if (dot(h.normal, t) > h.bound)
                return;
        verts.push_back(t);
    });
    std::sort(verts.begin(), verts.end(), lex_less);
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

VolumeResult volume(const HPolytope& poly)
{
    VolumeResult res;
    res.vertices = enumerate_vertices(poly);
    res.volume = 0;
    const std::size_t d = poly.dim();
    const auto& verts = res.vertices;
    if (verts.size() < d + 1)
        return res;
    std::vector<std::size_t> all(verts.size());
    std::iota(all.begin(), all.end(), 0);
    if (affine_dim(verts, all) < d)
        return res;
    res.is_full_dimensional = true;

    if (d == 1) {
        res.volume = verts.back()[0] - verts.front()[0];
        return res;
    }

    std::vector<std::vector<char>> tight;
    for (const auto& h : poly.constraints()) {
        if (is_zero(h.normal))
            continue;
        std::vector<char> row(verts.size());
        for (std::size_t v = 0; v < verts.size(); ++v)
            row[v] = dot(h.normal, verts[v]) == h.bound;
        tight.push_back(std::move(row));
    }
    Triangulator tri{verts, tight};
    Rational total = 0;
    std::vector<RationalVector> edges(d, RationalVector(d));
    for (const auto& simplex : tri.run(all, d)) {
        const auto& base = verts[simplex[0]];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t k = 0; k < d; ++k)
                edges[i][k] = verts[simplex[i + 1]][k] - base[k];
        total += abs(determinant(edges));
    }
    res.volume = total / factorial(d);
    return res;
}

RationalVector vertex_centroid(const std::vector<RationalVector>& vertices)
{
    if (vertices.empty())
        return {};
    RationalVector c(vertices.front().size(), Rational(0));
    for (const auto& v : vertices)
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] += v[k];
    const Rational n(static_cast<unsigned long>(vertices.size()));
    for (auto& q : c)
        q /= n;
    return c;
}

SectionCheck central_section_check(const IntMatrix& L,
                                   const std::vector<IntVector>& basis)
{
    const std::size_t m = L.cols();
    const std::size_t d = basis.size();
    if (d != L.kernel_dim())
        throw InputError("kernel basis has the wrong number of vectors");
    for (const auto& col : basis) {
        if (col.size() != m)
            throw InputError("kernel basis vector has the wrong length");
        for (const auto& z : L.apply(col))
            if (z != 0)
                throw InputError("supplied basis vector is not in the kernel");
    }
    HPolytope poly(d);
    const Rational half(1, 2);
    for (std::size_t i = 0; i < m; ++i) {
        RationalVector row(d);
        for (std::size_t k = 0; k < d; ++k)
            row[k] = basis[k][i];
        poly.add_range(row, -half, half);
    }
    SectionCheck out;
    out.vol_param = volume(poly).volume;
    std::vector<RationalVector> gram(d, RationalVector(d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            Integer s = 0;
            for (std::size_t i = 0; i < m; ++i)
                s += basis[a][i] * basis[b][i];
            gram[a][b] = s;
        }
    out.gram_det = determinant(gram).get_num();
    out.passes = out.vol_param * out.vol_param * out.gram_det >= 1;
    return out;
}

} // namespace circlerm
