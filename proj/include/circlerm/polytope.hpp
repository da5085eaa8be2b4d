#pragma once

#include "errors.hpp"
#include "intmat.hpp"
#include "rational.hpp"

#include <cstddef>
#include <vector>

namespace circlerm {

// normal . t <= bound
struct HalfSpace {
    RationalVector normal;
    Rational bound;
};

// A bounded polytope {t in Q^d : a_k . t <= c_k for all k}.
class HPolytope {
public:
    explicit HPolytope(std::size_t dim) : dim_(dim) {}
    HPolytope(std::size_t dim, std::vector<HalfSpace> constraints);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<HalfSpace>& constraints() const noexcept { return constraints_; }

    void add(RationalVector normal, Rational bound);
    // lo <= a . t <= hi
    void add_range(const RationalVector& normal, const Rational& lo,
                   const Rational& hi);

    bool contains(const RationalVector& t) const;

private:
    std::size_t dim_;
    std::vector<HalfSpace> constraints_;
};

class UnboundedPolytope : public InputError {
public:
    UnboundedPolytope(const std::string& what, RationalVector direction)
        : InputError(what), direction_(std::move(direction)) {}
    const RationalVector& direction() const noexcept { return direction_; }

private:
    RationalVector direction_;
};

struct VolumeResult {
    Rational volume;
    std::vector<RationalVector> vertices;
    bool is_full_dimensional = false;
};

// Exact vertex set, deduplicated and sorted lexicographically. Empty iff the
// polytope is empty. Throws UnboundedPolytope.
std::vector<RationalVector> enumerate_vertices(const HPolytope& poly);

// Exact d-volume via a pulling triangulation of the vertex hull.
VolumeResult volume(const HPolytope& poly);

// Average of the vertices; an interior point of a full-dimensional polytope.
RationalVector vertex_centroid(const std::vector<RationalVector>& vertices);

struct SectionCheck {
    Rational vol_param;
    Integer gram_det;
    bool passes = false;
};

// Volume of {t : -1/2 <= (B t)_i <= 1/2} and the Gram determinant det(B^T B);
// passes iff vol^2 * gram >= 1 (the squared intrinsic-volume bound).
SectionCheck central_section_check(const IntMatrix& L,
                                   const std::vector<IntVector>& basis);

} // namespace circlerm
