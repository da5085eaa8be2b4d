#pragma once

#include "intmat.hpp"
#include "kernel_geometry.hpp"
#include "measures.hpp"
#include "removal_lab.hpp"
#include "torus_sets.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace circlerm {

using Json = nlohmann::ordered_json;

// {"rows": r, "cols": m, "entries": [[...], ...]}; entries are JSON
// integers or decimal strings. Unknown keys are rejected.
IntMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const IntMatrix& L);

// [[["a","b"], ...], ...]: one list of [lo, hi) pairs per coordinate.
std::vector<IntervalUnion> sets_from_json(const Json& j);
Json sets_to_json(std::span<const IntervalUnion> sets);

Json read_json_file(const std::filesystem::path& path);
IntMatrix load_matrix(const std::filesystem::path& path);
std::vector<IntervalUnion> load_sets(const std::filesystem::path& path);

Json rational_json(const Rational& q);   // "n/d" or "n"
Json integer_json(const Integer& n);     // number when it fits, else string
Json vector_json(const IntVector& v);
Json vector_json(const RationalVector& v);

Json profile_json(const MatrixProfile& profile);
Json decomposition_json(const KernelDecomposition& K);
Json shifts_json(const KernelDecomposition& K, std::uint64_t p,
                 const std::vector<WeightedShift>& shifts);
Json measure_json(const MeasureReport& report);
Json violation_json(const ViolationReport& report);
Json removal_json(const RemovalOutcome& outcome);
Json density_json(const DensityResult& result);

} // namespace circlerm
