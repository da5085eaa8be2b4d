#include "circlerm/json_io.hpp"

#include "circlerm/errors.hpp"

#include <fstream>
#include <limits>

namespace circlerm {

namespace {

Integer integer_value(const Json& v)
{
    if (v.is_number_integer())
        return Integer(std::to_string(v.get<long long>()));
    if (v.is_number_unsigned())
        return Integer(std::to_string(v.get<unsigned long long>()));
    if (v.is_string())
        return parse_integer(v.get<std::string>());
    throw InputError("matrix entry must be an integer or a decimal string, got " + v.dump());
}

Rational rational_value(const Json& v)
{
    if (v.is_string())
        return parse_rational(v.get<std::string>());
    if (v.is_number_integer())
        return Rational(integer_value(v));
    throw InputError("interval endpoint must be a rational string, got " + v.dump());
}

} // namespace

IntMatrix matrix_from_json(const Json& j)
{
    if (!j.is_object())
        throw InputError("matrix JSON must be an object");
    for (const auto& [key, _] : j.items())
        if (key != "rows" && key != "cols" && key != "entries")
            throw InputError("unknown matrix field \"" + key + "\"");
    if (!j.contains("entries") || !j["entries"].is_array())
        throw InputError("matrix JSON needs an \"entries\" array");
    std::vector<IntVector> rows;
    for (const auto& row : j["entries"]) {
        if (!row.is_array())
            throw InputError("each matrix row must be an array");
        IntVector r;
        for (const auto& v : row)
            r.push_back(integer_value(v));
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw InputError("matrix has no rows");
    auto check = [&](const char* key, std::size_t actual) {
        if (!j.contains(key))
            return;
        if (!j[key].is_number_unsigned() || j[key].get<std::size_t>() != actual)
            throw InputError(std::string("\"") + key + "\" is " + j[key].dump() +
                             " but the entries give " + std::to_string(actual));
    };
    check("rows", rows.size());
    check("cols", rows.front().size());
    return IntMatrix(std::move(rows));
}

Json matrix_to_json(const IntMatrix& L)
{
    Json entries = Json::array();
    for (std::size_t i = 0; i < L.rows(); ++i)
        entries.push_back(vector_json(L.row(i)));
    return Json{{"rows", L.rows()}, {"cols", L.cols()}, {"entries", entries}};
}

std::vector<IntervalUnion> sets_from_json(const Json& j)
{
    if (!j.is_array())
        throw InputError("set JSON must be a list of sets");
    std::vector<IntervalUnion> sets;
    for (const auto& s : j) {
        if (!s.is_array())
            throw InputError("each set must be a list of [lo, hi] pairs");
        std::vector<Interval> parts;
        for (const auto& pair : s) {
            if (!pair.is_array() || pair.size() != 2)
                throw InputError("interval must be a pair [lo, hi], got " + pair.dump());
            Rational lo = rational_value(pair[0]);
            Rational hi = rational_value(pair[1]);
            parts.push_back({std::move(lo), std::move(hi)});
        }
        sets.emplace_back(std::move(parts));
    }
    return sets;
}

Json sets_to_json(std::span<const IntervalUnion> sets)
{
    Json out = Json::array();
    for (const auto& a : sets) {
        Json s = Json::array();
        for (const auto& iv : a.intervals())
            s.push_back(Json::array({rational_json(iv.lo), rational_json(iv.hi)}));
        out.push_back(std::move(s));
    }
    return out;
}

Json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

IntMatrix load_matrix(const std::filesystem::path& path)
{
    return matrix_from_json(read_json_file(path));
}

std::vector<IntervalUnion> load_sets(const std::filesystem::path& path)
{
    return sets_from_json(read_json_file(path));
}

Json rational_json(const Rational& q)
{
    return to_string(q);
}

Json integer_json(const Integer& n)
{
    if (n.fits_slong_p() && abs(n) <= Integer("9007199254740991"))
        return n.get_si();
    return n.get_str();
}

Json vector_json(const IntVector& v)
{
    Json out = Json::array();
    for (const auto& x : v)
        out.push_back(integer_json(x));
    return out;
}

Json vector_json(const RationalVector& v)
{
    Json out = Json::array();
    for (const auto& x : v)
        out.push_back(rational_json(x));
    return out;
}

Json profile_json(const MatrixProfile& profile)
{
    Json basis = Json::array();
    for (const auto& b : profile.kernel_basis)
        basis.push_back(vector_json(b));
    Json smith = Json::array();
    for (const auto& s : profile.smith_invariants)
        smith.push_back(integer_json(s));
    Json degenerate = Json::array();
    for (const auto& dc : profile.degenerate_columns)
        degenerate.push_back({{"column", dc.column + 1},
                              {"witness", vector_json(dc.witness)},
                              {"ell", integer_json(dc.multiplier)}});
    return Json{{"rank", profile.rank},
                {"kernel_basis", basis},
                {"smith_invariants", smith},
                {"component_count", integer_json(profile.component_count())},
                {"is_invariant", profile.is_invariant},
                {"degenerate_columns", degenerate}};
}

Json decomposition_json(const KernelDecomposition& K)
{
    Json levels = Json::array(), volumes = Json::array(), reps = Json::array();
    for (const auto& c : K.components()) {
        levels.push_back(vector_json(c.level));
        volumes.push_back(rational_json(c.volume_param));
        reps.push_back(vector_json(c.representative));
    }
    return Json{{"kernel_dim", K.kernel_dim()},
                {"levels", levels},
                {"volumes", volumes},
                {"representatives", reps},
                {"total_volume_param", rational_json(K.total_volume_param())},
                {"c_param", rational_json(K.c_param())},
                {"closed_level_count", K.closed_levels().size()},
                {"lambda_star", rational_json(K.lambda_star())}};
}

Json shifts_json(const KernelDecomposition& K, std::uint64_t p,
                 const std::vector<WeightedShift>& shifts)
{
    Json list = Json::array(), lambdas = Json::array();
    Rational sum = 0;
    for (const auto& s : shifts) {
        list.push_back({{"j", s.j}, {"lambda", rational_json(s.lambda)},
                        {"residue", s.residue}});
        lambdas.push_back(rational_json(s.lambda));
        sum += s.lambda;
    }
    return Json{{"p", p},
                {"K", shifts.size()},
                {"closed_level_count", K.closed_levels().size()},
                {"lambdas", lambdas},
                {"lambda_sum", rational_json(sum)},
                {"shifts", list}};
}

Json measure_json(const MeasureReport& report)
{
    Json out;
    if (report.route == Route::monte_carlo) {
        out["estimate"] = report.estimate;
        out["std_error"] = report.std_error;
        out["half_width_99"] = report.half_width;
        out["samples"] = report.samples;
        out["route"] = route_name(report.route);
        return out;
    }
    out["value"] = rational_json(report.value);
    out["decimal"] = to_double(report.value);
    out["route"] = route_name(report.route);
    if (report.route == Route::geometric)
        out["grid"] = report.p_used;
    else
        out["p"] = report.p_used;
    if (report.route == Route::decomposition) {
        Json terms = Json::array();
        for (const auto& t : report.per_shift)
            terms.push_back({{"j", t.j},
                             {"lambda", rational_json(t.lambda)},
                             {"density", rational_json(t.density)}});
        out["per_shift"] = terms;
    }
    return out;
}

Json violation_json(const ViolationReport& report)
{
    Json boxes = Json::array();
    for (const auto& b : report.boxes)
        boxes.push_back({{"j", b.j}, {"lambda", rational_json(b.lambda)}});
    return Json{{"p", report.p},
                {"free", report.boxes.empty()},
                {"box_count", report.boxes.size()},
                {"boxes", boxes},
                {"witness", report.witness ? vector_json(*report.witness) : Json()}};
}

Json removal_json(const RemovalOutcome& outcome)
{
    Json removed = Json::array(), measures = Json::array();
    for (const auto& c : outcome.removed)
        removed.push_back({{"coordinate", c.coordinate + 1}, {"cell", c.cell}});
    for (const auto& q : outcome.removed_measures)
        measures.push_back(rational_json(q));
    return Json{{"p", outcome.p},
                {"iterations", outcome.iterations},
                {"removed_cells", removed},
                {"removed_measures", measures},
                {"total_removed", rational_json(outcome.total_removed)},
                {"total_removed_decimal", to_double(outcome.total_removed)},
                {"removed_sets", sets_to_json(outcome.removed_sets)},
                {"remaining", sets_to_json(outcome.remaining)},
                {"verified_free", outcome.verified_free}};
}

Json density_json(const DensityResult& result)
{
    Json out{{"p", result.p},
             {"mode", result.mode == SearchMode::exhaustive ? "exhaustive" : "local"},
             {"density", rational_json(result.density)},
             {"decimal", to_double(result.density)},
             {"set", result.best}};
    if (result.invariant_warning)
        out["warning"] = "L is invariant: every singleton {a} carries the diagonal solution, "
                         "so only the empty set is solution-free";
    return out;
}

} // namespace circlerm
