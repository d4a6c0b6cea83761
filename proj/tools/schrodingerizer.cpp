#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "schro/experiment.hpp"

using namespace schro;

namespace {

int cmd_run(const std::string& config, const std::string& out) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const SchroError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    RunResult r = run_experiment(cfg, out);
    if (r.exit_code != 0) {
        std::cerr << (r.exit_code == 3 ? "blow-up: " : "error: ") << r.message << "\n";
        return r.exit_code;
    }
    std::cout << "wrote " << r.files.size() << " files to " << (out.empty() ? cfg.out_dir : out) << "\n";
    return 0;
}

int cmd_validate(const std::string& config) {
    try {
        ExperimentConfig cfg = load_config(config);
        std::cout << "ok: " << model_kind_name(cfg.kind) << " / " << engine_name(cfg.plan.engine) << "\n";
        return 0;
    } catch (const SchroError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_estimate(const std::string& query, const std::string& out) {
    try {
        std::ifstream in(query);
        if (!in) throw SchemaError("cannot open query '" + query + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("query is not valid JSON: ") + e.what());
        }
        CostQuery q = parse_cost_query(j);
        CostEstimate e = estimate(q);
        std::string csv = "method,count,polylog,total,tau\n";
        csv += std::string(cost_method_name(q.method)) + "," + format_double(e.count) + "," +
               format_double(e.polylog) + "," + format_double(e.total()) + "," + format_double(e.tau) + "\n";
        if (out.empty())
            std::cout << csv;
        else
            write_atomic(out, csv);
        std::cerr << "N = " << e.formula;
        if (!e.polylog_formula.empty()) std::cerr << "; polylog = " << e.polylog_formula;
        if (q.N_A) std::cerr << "; N_A = " << format_double(*q.N_A) << " (not used by the bound)";
        std::cerr << "\n";
        return 0;
    } catch (const SchroError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Schrodingerisation emulator: warped-phase PDE/ODE solvers, dilation and cost estimates"};
    app.require_subcommand(1);

    std::string config, out, query, est_out;
    auto* run = app.add_subcommand("run", "run an experiment and write CSV outputs and a manifest");
    run->add_option("--config", config, "experiment config or run manifest (JSON)")->required();
    run->add_option("--out", out, "output directory (overrides out_dir)");

    auto* val = app.add_subcommand("validate", "check a config against the schema");
    val->add_option("--config", config, "experiment config (JSON)")->required();

    auto* est = app.add_subcommand("estimate", "evaluate a gate-complexity formula");
    est->add_option("--query", query, "cost query (JSON)")->required();
    est->add_option("--out", est_out, "write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    if (*run) return cmd_run(config, out);
    if (*val) return cmd_validate(config);
    return cmd_estimate(query, est_out);
}
