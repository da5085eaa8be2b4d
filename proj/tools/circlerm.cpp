// circlerm: solution measures of integer linear systems over R/Z.
#include "circlerm/discrete.hpp"
#include "circlerm/errors.hpp"
#include "circlerm/json_io.hpp"
#include "circlerm/measures.hpp"
#include "circlerm/polytope.hpp"
#include "circlerm/removal_lab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <random>

using namespace circlerm;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitVerify = 4;

struct Job {
    std::string command;
    std::string matrix_path;
    std::string sets_path;
    std::optional<std::uint64_t> p;
    std::vector<std::uint64_t> primes;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string format = "json";
    std::string mode = "exhaustive";
    bool check_boxes = false;
    std::size_t trials = 10;

    Json to_json() const
    {
        Json j{{"command", command}, {"matrix", matrix_path}};
        if (!sets_path.empty())
            j["sets"] = sets_path;
        if (p)
            j["p"] = *p;
        if (!primes.empty())
            j["primes"] = primes;
        if (command == "sample") {
            j["samples"] = samples;
            j["seed"] = seed;
        }
        if (command == "density") {
            j["mode"] = mode;
            j["seed"] = seed;
        }
        if (command == "verify") {
            j["seed"] = seed;
            j["trials"] = trials;
        }
        if (command == "measure")
            j["check_boxes"] = check_boxes;
        j["workers"] = workers;
        j["format"] = format;
        return j;
    }
};

std::uint64_t required_p(const Job& job)
{
    if (!job.p)
        throw InputError("--p is required for " + job.command);
    return *job.p;
}

std::vector<IntervalUnion> job_sets(const Job& job, const IntMatrix& L)
{
    auto sets = load_sets(job.sets_path);
    if (sets.size() != L.cols())
        throw InputError(job.sets_path + " has " + std::to_string(sets.size()) +
                         " sets but the matrix has " + std::to_string(L.cols()) + " columns");
    return sets;
}

// Smallest prime >= from that keeps the rank of L.
std::uint64_t next_kernel_prime(const IntMatrix& L, std::uint64_t from)
{
    for (std::uint64_t q = from;; ++q)
        if (is_prime(q) && rank_mod_p(L, q) == L.rows())
            return q;
}

std::vector<Rational> sorted_weights(const KernelDecomposition& K, std::uint64_t p)
{
    std::vector<Rational> w;
    for (const auto& s : shift_cover(K, p))
        w.push_back(s.lambda);
    std::sort(w.begin(), w.end());
    return w;
}

Json verify(const Job& job, const IntMatrix& L, bool& all_pass)
{
    const KernelDecomposition K(L);
    const std::uint64_t p = job.p ? *job.p : next_kernel_prime(L, 5);
    require_kernel_prime(L, p);
    std::mt19937_64 rng(job.seed);
    Json props = Json::array();
    all_pass = true;
    auto report = [&](const std::string& name, bool ok, Json detail) {
        props.push_back({{"name", name}, {"status", ok ? "pass" : "fail"}, {"detail", detail}});
        all_pass = all_pass && ok;
    };

    const auto shifts = shift_cover(K, p);
    Rational sum = 0;
    for (const auto& s : shifts)
        sum += s.lambda;
    report("lambda_sum", sum == 1, {{"sum", rational_json(sum)}});

    Integer smith = 1;
    for (const auto& s : K.profile().smith_invariants)
        smith *= s;
    report("smith_count", K.total_volume_param() == Rational(smith),
           {{"total_volume_param", rational_json(K.total_volume_param())},
            {"smith_product", integer_json(smith)}});

    const std::uint64_t p2 = next_kernel_prime(L, p + 1);
    const std::uint64_t p3 = next_kernel_prime(L, p2 + 1);
    const auto w1 = sorted_weights(K, p);
    const bool same = w1 == sorted_weights(K, p2) && w1 == sorted_weights(K, p3);
    report("weight_spectrum", same && !w1.empty() && w1.front() >= K.lambda_star(),
           {{"primes", {p, p2, p3}}, {"lambda_star", rational_json(K.lambda_star())}});

    const KernelParametrization kp(L, p);
    bool constant = true;
    std::size_t checked = 0;
    std::vector<std::uint64_t> x(L.cols()), j(L.cols());
    for (const auto& s : shifts) {
        for (std::size_t t = 0; t < job.trials; ++t) {
            std::vector<std::uint64_t> free(kp.free_columns().size());
            for (auto& v : free)
                v = uniform_below(rng, p);
            for (std::size_t f = 0; f < free.size(); ++f)
                x[kp.free_columns()[f]] = free[f];
            for (std::size_t k = 0; k < kp.dependent_columns().size(); ++k) {
                std::uint64_t acc = 0;
                for (std::size_t f = 0; f < free.size(); ++f)
                    acc = (acc + kp.coefficients()[k][f] * free[f]) % p;
                x[kp.dependent_columns()[k]] = acc;
            }
            for (std::size_t i = 0; i < j.size(); ++i)
                j[i] = (s.j[i] + x[i]) % p;
            constant = constant && weight(K, j, p) == s.lambda;
            ++checked;
        }
    }
    report("coset_constancy", constant, {{"samples", checked}});

    const auto section = central_section_check(L, K.basis());
    report("vaaler", section.passes,
           {{"vol_param", rational_json(section.vol_param)},
            {"gram_det", integer_json(section.gram_det)}});

    bool agree = true;
    for (std::size_t t = 0; t < job.trials; ++t) {
        std::vector<IntervalUnion> sets;
        for (std::size_t i = 0; i < L.cols(); ++i)
            sets.push_back(random_grid_set(rng, p, 3));
        const MeasureOptions opts{false, job.workers};
        agree = agree && solution_measure(K, sets, opts).value ==
                             decompose(K, p, sets, job.workers).value;
    }
    report("route_agreement", agree, {{"instances", job.trials}});

    return Json{{"p", p}, {"properties", props}, {"passed", all_pass}};
}

int run(const Job& job)
{
    if (job.format == "csv" && job.command != "density")
        throw InputError("csv output is only available for density");
    const IntMatrix L = load_matrix(job.matrix_path);
    Json out{{"job", job.to_json()}};
    const std::string& cmd = job.command;
    int code = 0;

    if (cmd == "profile") {
        out["profile"] = profile_json(analyze_matrix(L));
    } else if (cmd == "kernel") {
        out["kernel"] = decomposition_json(KernelDecomposition(L));
    } else if (cmd == "weights") {
        const KernelDecomposition K(L);
        const std::uint64_t p = required_p(job);
        out["weights"] = shifts_json(K, p, shift_cover(K, p));
    } else if (cmd == "measure") {
        const KernelDecomposition K(L);
        out["measure"] = measure_json(
            solution_measure(K, job_sets(job, L), {job.check_boxes, job.workers}));
    } else if (cmd == "decompose") {
        const KernelDecomposition K(L);
        out["measure"] = measure_json(decompose(K, required_p(job), job_sets(job, L), job.workers));
    } else if (cmd == "sample") {
        const KernelDecomposition K(L);
        out["measure"] = measure_json(
            monte_carlo_estimate(K, job_sets(job, L), job.samples, job.seed, job.workers));
    } else if (cmd == "check-free") {
        const KernelDecomposition K(L);
        out["violations"] = violation_json(find_violating_boxes(K, required_p(job), job_sets(job, L)));
    } else if (cmd == "remove") {
        const KernelDecomposition K(L);
        out["removal"] = removal_json(greedy_removal(K, required_p(job), job_sets(job, L)));
    } else if (cmd == "density") {
        const SearchMode mode = job.mode == "local" ? SearchMode::local : SearchMode::exhaustive;
        std::vector<std::uint64_t> primes = job.primes;
        if (primes.empty())
            primes.push_back(required_p(job));
        std::vector<DensityResult> results;
        for (auto q : primes)
            results.push_back(density_search(L, q, mode, job.seed));
        if (job.format == "csv") {
            std::cout << "# job " << job.to_json().dump() << "\n";
            std::cout << "p,density_num,density_den,decimal\n";
            for (const auto& r : results)
                std::cout << r.p << ',' << r.density.get_num().get_str() << ','
                          << r.density.get_den().get_str() << ',' << Json(to_double(r.density)).dump()
                          << "\n";
            return 0;
        }
        Json list = Json::array();
        for (const auto& r : results)
            list.push_back(density_json(r));
        out["density"] = list;
    } else if (cmd == "verify") {
        bool pass = false;
        out["verify"] = verify(job, L, pass);
        code = pass ? 0 : kExitVerify;
    }
    std::cout << out.dump(2) << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Solution measures of integer linear systems over the circle group"};
    app.require_subcommand(1);
    Job job;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--matrix", job.matrix_path, "matrix JSON file")->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--workers", job.workers, "parallel workers")
            ->check(CLI::Range(1u, 256u))->capture_default_str();
        sub->add_option("--format", job.format, "output format")
            ->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    };
    auto add_sets = [&](CLI::App* sub) {
        sub->add_option("--sets", job.sets_path, "set JSON file")->required()
            ->check(CLI::ExistingFile);
    };
    auto add_p = [&](CLI::App* sub, const char* help) {
        sub->add_option("--p", job.p, help)->check(CLI::PositiveNumber);
    };

    const std::map<std::string, std::string> commands = {
        {"profile", "rank, kernel basis, Smith invariants, degenerate columns"},
        {"kernel", "components of ker_T L with their volumes"},
        {"weights", "positive-weight cosets of the discretized kernel"},
        {"measure", "exact solution measure (geometric route)"},
        {"decompose", "exact solution measure through Z_p counts"},
        {"sample", "Monte Carlo estimate of the solution measure"},
        {"check-free", "grid boxes of the product carrying solutions"},
        {"remove", "greedy cell removal until solution-free"},
        {"density", "largest solution-free subset of Z_p"},
        {"verify", "invariant suite for a matrix"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        if (name == "measure" || name == "decompose" || name == "sample" ||
            name == "check-free" || name == "remove")
            add_sets(sub);
        if (name == "weights" || name == "decompose" || name == "check-free" ||
            name == "remove")
            add_p(sub, "prime modulus");
        if (name == "measure")
            sub->add_flag("--check-boxes", job.check_boxes,
                          "also sum over every box of the lcm grid");
        if (name == "sample") {
            sub->add_option("--samples", job.samples, "sample count")
                ->check(CLI::PositiveNumber)->capture_default_str();
            sub->add_option("--seed", job.seed, "random seed")->capture_default_str();
        }
        if (name == "density") {
            auto* single = sub->add_option("--p", job.p, "prime modulus")->check(CLI::PositiveNumber);
            sub->add_option("--primes", job.primes, "several primes (trend table)")
                ->excludes(single);
            sub->add_option("--mode", job.mode, "search mode")
                ->check(CLI::IsMember({"exhaustive", "local"}))->capture_default_str();
            sub->add_option("--seed", job.seed, "random seed for local search")
                ->capture_default_str();
        }
        if (name == "verify") {
            add_p(sub, "prime modulus (default: smallest usable prime >= 5)");
            sub->add_option("--seed", job.seed, "random seed")->capture_default_str();
            sub->add_option("--trials", job.trials, "random instances per property")
                ->check(CLI::PositiveNumber)->capture_default_str();
        }
        sub->callback([&job, name = name] { job.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        return run(job);
    } catch (const SolutionExists& e) {
        std::cerr << "error: " << e.what() << "; witness "
                  << vector_json(e.witness()).dump() << "\n";
        return kExitPrecondition;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
