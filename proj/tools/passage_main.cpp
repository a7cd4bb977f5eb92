// Command-line surface: validate chains, run both MFPT routes, list
// in-forests, and Monte Carlo-check the analytic results.
//
// Exit codes: 0 success, 1 input error, 2 numerical-discrepancy error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "passage/analysis.hpp"
#include "passage/chain.hpp"
#include "passage/enumeration.hpp"
#include "passage/forest.hpp"
#include "passage/group_inverse.hpp"
#include "passage/simulate.hpp"

namespace {

struct Options {
    std::string input;
    double tol = 1e-8;
    int precision = 6;
    std::string format = "text";
    std::string diagonal = "recurrence";
    bool dot = false;
    int k = -1;  // forests: default n-1
    int enum_limit = passage::kDefaultEnumLimit;
    std::int64_t trials = 100000;
    std::uint64_t seed = 42;
    std::int64_t step_cap = passage::kDefaultStepCap;
};

passage::DiagonalConvention convention(const Options& opt) {
    return opt.diagonal == "zero" ? passage::DiagonalConvention::Zero
                                  : passage::DiagonalConvention::RecurrenceTime;
}

int run_validate(const Options& opt) {
    const auto t = passage::parse_chain_file(opt.input);
    std::cout << "ok: " << t.n() << "-state irreducible row-stochastic chain\n";
    return 0;
}

int run_analyze(const Options& opt) {
    const auto t = passage::parse_chain_file(opt.input);
    const auto bundle = passage::analyze(t, convention(opt));
    if (opt.format == "json")
        std::cout << passage::bundle_to_json(bundle).dump(2) << "\n";
    else
        passage::render_bundle(std::cout, bundle, opt.precision);
    if (bundle.max_route_discrepancy > opt.tol) {
        std::cerr << "error: route discrepancy " << bundle.max_route_discrepancy
                  << " exceeds tolerance " << opt.tol << "\n";
        return 2;
    }
    return 0;
}

int run_forests(const Options& opt) {
    const auto t = passage::parse_chain_file(opt.input);
    const auto g = passage::digraph_of(t);
    const int k = opt.k >= 0 ? opt.k : g.n - 1;
    const auto forests = passage::enumerate_in_forests(g, k, opt.enum_limit);
    double total = 0.0;
    for (const auto& f : forests) total += f.weight;

    if (opt.dot) {
        for (std::size_t idx = 0; idx < forests.size(); ++idx)
            std::cout << passage::forest_dot(g, forests[idx], static_cast<int>(idx + 1));
        return 0;
    }
    if (opt.format == "json") {
        nlohmann::ordered_json doc;
        doc["n"] = g.n;
        doc["k"] = k;
        doc["count"] = forests.size();
        doc["total_weight"] = total;
        doc["forests"] = nlohmann::ordered_json::array();
        for (const auto& f : forests) {
            nlohmann::ordered_json jf;
            jf["arcs"] = nlohmann::ordered_json::array();
            for (const auto& [tail, head] : f.arcs)
                jf["arcs"].push_back({tail + 1, head + 1});
            jf["roots"] = nlohmann::ordered_json::array();
            for (int r : f.roots) jf["roots"].push_back(r + 1);
            jf["weight"] = f.weight;
            doc["forests"].push_back(std::move(jf));
        }
        std::cout << doc.dump(2) << "\n";
        return 0;
    }
    std::cout << k << "-arc in-forests: " << forests.size() << ", total weight "
              << passage::detail::fmt(total, opt.precision) << "\n";
    for (std::size_t idx = 0; idx < forests.size(); ++idx) {
        const auto& f = forests[idx];
        std::cout << "F" << idx + 1 << "  arcs:";
        if (f.arcs.empty()) std::cout << " (none)";
        for (const auto& [tail, head] : f.arcs) std::cout << " " << tail + 1 << "->" << head + 1;
        std::cout << "  roots:";
        for (int r : f.roots) std::cout << " " << r + 1;
        std::cout << "  weight: " << passage::detail::fmt(f.weight, opt.precision) << "\n";
    }
    return 0;
}

int run_simulate(const Options& opt) {
    const auto t = passage::parse_chain_file(opt.input);
    const auto rep = passage::estimate_mfpt(t, opt.trials, opt.seed, opt.step_cap);
    // Reference M from the group-inverse route (defined for every valid chain,
    // n = 1 included); recurrence-time diagonal matches the p >= 1 sampling.
    const auto pi = passage::stationary_direct(t);
    const auto sharp = passage::group_inverse(passage::laplacian(t), pi);
    const auto m = passage::mfpt_meyer(sharp, pi);
    if (opt.format == "json")
        std::cout << passage::simulation_to_json(rep, m.m).dump(2) << "\n";
    else
        passage::render_simulation(std::cout, rep, m.m, opt.precision);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean first passage times of ergodic Markov chains via spanning forests"};
    app.require_subcommand(1);
    Options opt;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("input", opt.input, "chain-spec file (text or JSON)")->required();
    };
    auto add_render = [&](CLI::App* cmd) {
        cmd->add_option("--precision", opt.precision, "significant digits in text output");
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"text", "json"}));
    };

    auto* validate = app.add_subcommand("validate", "parse and validate a chain");
    add_input(validate);

    auto* analyze = app.add_subcommand("analyze", "run the forest and group-inverse routes");
    add_input(analyze);
    add_render(analyze);
    analyze->add_option("--tol", opt.tol, "max allowed forest-vs-group-inverse discrepancy");
    analyze->add_option("--diagonal", opt.diagonal, "MFPT diagonal convention")
        ->check(CLI::IsMember({"recurrence", "zero"}));

    auto* forests = app.add_subcommand("forests", "enumerate k-arc in-forests");
    add_input(forests);
    add_render(forests);
    forests->add_option("-k,--arcs", opt.k, "arc count (default: n-1, spanning trees)");
    forests->add_flag("--dot", opt.dot, "emit one DOT digraph per forest");
    forests->add_option("--enum-limit", opt.enum_limit, "refuse chains larger than this");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo first passage estimates");
    add_input(simulate);
    add_render(simulate);
    simulate->add_option("--trials", opt.trials, "samples per (i,j) pair");
    simulate->add_option("--seed", opt.seed, "master RNG seed");
    simulate->add_option("--step-cap", opt.step_cap, "per-sample step limit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return run_validate(opt);
        if (analyze->parsed()) return run_analyze(opt);
        if (forests->parsed()) return run_forests(opt);
        if (simulate->parsed()) return run_simulate(opt);
    } catch (const passage::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const passage::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const passage::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
