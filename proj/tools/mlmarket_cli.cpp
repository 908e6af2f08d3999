// Command-line front end: equilibrium solving, wealth updates, experiments,
// sweeps and the invariant suite. Exit codes: 0 ok, 2 validation error,
// 3 non-convergence, 4 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlmarket/belief_io.hpp"
#include "mlmarket/equilibrium.hpp"
#include "mlmarket/errors.hpp"
#include "mlmarket/experiment.hpp"
#include "mlmarket/verify.hpp"
#include "mlmarket/wealth.hpp"

namespace {

using mlmarket::BeliefFile;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw mlmarket::IoError("cannot write file: " + path);
    }
    out << content;
}

struct SolverFlags {
    double a_init = 0.1;
    double epsilon = 1e-10;
    std::size_t max_iters = 10000;
    std::string init = "wealth_mixture";

    void attach(CLI::App* cmd) {
        cmd->add_option("--a-init", a_init, "Initial damping parameter in (0,1)");
        cmd->add_option("--epsilon", epsilon, "KL stopping threshold");
        cmd->add_option("--max-iters", max_iters, "Iteration cap");
        cmd->add_option("--init", init, "Cost init: wealth_mixture or uniform")
            ->check(CLI::IsMember({"wealth_mixture", "uniform"}));
    }

    mlmarket::SolverConfig config() const {
        mlmarket::SolverConfig cfg;
        cfg.a_init = a_init;
        cfg.epsilon = epsilon;
        cfg.max_iters = max_iters;
        cfg.c_init_mode = init == "uniform" ? mlmarket::CostInit::Uniform
                                            : mlmarket::CostInit::WealthMixture;
        return cfg;
    }
};

int cmd_equilibrium(const std::string& input, std::size_t instance, const SolverFlags& solver,
                    const std::string& trace_path, const std::string& out_path) {
    const BeliefFile file = mlmarket::load_belief_matrix(input);
    for (const std::string& warning : file.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    const mlmarket::MarketInstance market = file.market_for_instance(instance);
    const mlmarket::EquilibriumResult result = mlmarket::solve_equilibrium(market, solver.config());

    json doc;
    doc["c"] = result.c.entries();
    doc["iterations"] = result.iterations;
    doc["converged"] = result.converged;
    doc["final_kl"] = result.kl_trace.back();
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }

    if (!trace_path.empty()) {
        std::string csv = "iter,value\n";
        for (std::size_t i = 0; i < result.kl_trace.size(); ++i) {
            csv += std::to_string(i) + "," + json(result.kl_trace[i]).dump() + "\n";
        }
        write_text_file(trace_path, csv);
    }
    return kExitOk;
}

int cmd_update(const std::string& input, const std::string& scheme, std::size_t epochs,
               const SolverFlags& solver, const std::string& trace_path,
               const std::string& out_path) {
    const BeliefFile file = mlmarket::load_belief_matrix(input);
    for (const std::string& warning : file.warnings) {
        std::cerr << "warning: " << warning << "\n";
    }
    const mlmarket::LabeledBeliefSet data = file.labeled();
    const mlmarket::SolverConfig config = solver.config();

    // Wealth by epoch (online: by step within the single pass).
    std::vector<std::vector<double>> trajectory;
    mlmarket::SimplexVec wealths(file.wealths);
    trajectory.push_back(wealths.entries());
    if (scheme == "online") {
        for (std::size_t e = 0; e < epochs; ++e) {
            const mlmarket::OnlineEpochResult epoch =
                mlmarket::run_online_epoch(wealths, file.utilities, data, config);
            for (std::size_t t = 1; t < epoch.trajectory.size(); ++t) {
                trajectory.push_back(epoch.trajectory[t].entries());
            }
            wealths = epoch.final_wealths;
        }
    } else {
        for (std::size_t e = 0; e < epochs; ++e) {
            wealths = mlmarket::batch_update_epoch(wealths, file.utilities, data, config);
            trajectory.push_back(wealths.entries());
        }
    }

    json doc;
    doc["final_wealths"] = wealths.entries();
    doc["agent_ids"] = file.agent_ids;
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }

    if (!trace_path.empty()) {
        std::string csv = "epoch,agent_id,wealth\n";
        for (std::size_t e = 0; e < trajectory.size(); ++e) {
            for (std::size_t i = 0; i < file.agent_ids.size(); ++i) {
                csv += std::to_string(e) + "," + file.agent_ids[i] + "," +
                       json(trajectory[e][i]).dump() + "\n";
            }
        }
        write_text_file(trace_path, csv);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Machine learning markets: equilibrium prices as classifier aggregation"};
    app.require_subcommand(1);

    // equilibrium
    auto* eq_cmd = app.add_subcommand("equilibrium", "Solve one instance's equilibrium prices");
    std::string eq_input, eq_trace, eq_out;
    std::size_t eq_instance = 0;
    SolverFlags eq_solver;
    eq_cmd->add_option("-i,--input", eq_input, "Belief interchange JSON file")->required();
    eq_cmd->add_option("--instance", eq_instance, "Instance index (default 0)");
    eq_cmd->add_option("--trace", eq_trace, "Write the KL trace CSV here");
    eq_cmd->add_option("-o,--out", eq_out, "Write the result JSON here (default stdout)");
    eq_solver.attach(eq_cmd);

    // update
    auto* up_cmd = app.add_subcommand("update", "Run wealth updates over labeled beliefs");
    std::string up_input, up_trace, up_out, up_scheme = "batch";
    std::size_t up_epochs = 1;
    SolverFlags up_solver;
    up_cmd->add_option("-i,--input", up_input, "Belief interchange JSON file with targets")
        ->required();
    up_cmd->add_option("--scheme", up_scheme, "Update scheme: batch or online")
        ->check(CLI::IsMember({"batch", "online"}));
    up_cmd->add_option("--epochs", up_epochs, "Number of passes");
    up_cmd->add_option("--trace", up_trace, "Write the wealth trajectory CSV here");
    up_cmd->add_option("-o,--out", up_out, "Write the result JSON here (default stdout)");
    up_solver.attach(up_cmd);

    // experiment
    auto* ex_cmd = app.add_subcommand("experiment", "Run the seeded evaluation protocol");
    std::string ex_config, ex_out;
    std::optional<std::uint64_t> ex_seed;
    std::optional<std::size_t> ex_reps, ex_agents, ex_epochs;
    bool ex_quiet = false;
    ex_cmd->add_option("-c,--config", ex_config, "Experiment config JSON")->required();
    ex_cmd->add_option("-o,--out", ex_out, "Write the report JSON here");
    ex_cmd->add_option("--seed", ex_seed, "Override base_seed");
    ex_cmd->add_option("--repetitions", ex_reps, "Override repetitions");
    ex_cmd->add_option("--agents", ex_agents, "Override num_agents");
    ex_cmd->add_option("--epochs", ex_epochs, "Override training epochs");
    ex_cmd->add_flag("--quiet", ex_quiet, "Suppress the text table");

    // sweep-eta
    auto* se_cmd = app.add_subcommand("sweep-eta", "Homogeneous-eta sweep plus gamma reference");
    std::string se_config, se_out;
    std::vector<double> se_grid;
    std::optional<std::uint64_t> se_seed;
    std::optional<std::size_t> se_reps;
    se_cmd->add_option("-c,--config", se_config, "Experiment config JSON")->required();
    se_cmd->add_option("--grid", se_grid, "Eta values to sweep")->required()->expected(-1);
    se_cmd->add_option("-o,--out", se_out, "Write the sweep JSON here");
    se_cmd->add_option("--seed", se_seed, "Override base_seed");
    se_cmd->add_option("--repetitions", se_reps, "Override repetitions");

    // sweep-epochs
    auto* sp_cmd = app.add_subcommand("sweep-epochs", "Batch-update metrics per training epoch");
    std::string sp_config, sp_out;
    std::size_t sp_epochs = 10;
    std::optional<std::uint64_t> sp_seed;
    std::optional<std::size_t> sp_reps;
    sp_cmd->add_option("-c,--config", sp_config, "Experiment config JSON")->required();
    sp_cmd->add_option("--epochs", sp_epochs, "Maximum epochs")->required();
    sp_cmd->add_option("-o,--out", sp_out, "Write the sweep JSON here");
    sp_cmd->add_option("--seed", sp_seed, "Override base_seed");
    sp_cmd->add_option("--repetitions", sp_reps, "Override repetitions");

    // verify
    auto* ve_cmd = app.add_subcommand("verify", "Run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (eq_cmd->parsed()) {
            return cmd_equilibrium(eq_input, eq_instance, eq_solver, eq_trace, eq_out);
        }
        if (up_cmd->parsed()) {
            return cmd_update(up_input, up_scheme, up_epochs, up_solver, up_trace, up_out);
        }
        if (ex_cmd->parsed()) {
            mlmarket::ExperimentConfig config = mlmarket::load_experiment_config(ex_config);
            if (ex_seed) config.base_seed = *ex_seed;
            if (ex_reps) config.repetitions = *ex_reps;
            if (ex_agents) config.num_agents = *ex_agents;
            if (ex_epochs) config.epochs = *ex_epochs;
            const mlmarket::ExperimentReport report = mlmarket::run_experiment(config);
            if (!ex_quiet) {
                std::cout << mlmarket::report_to_table(report);
            }
            if (!ex_out.empty()) {
                write_text_file(ex_out, mlmarket::report_to_json(report));
            } else if (ex_quiet) {
                std::cout << mlmarket::report_to_json(report);
            }
            return kExitOk;
        }
        if (se_cmd->parsed()) {
            mlmarket::ExperimentConfig config = mlmarket::load_experiment_config(se_config);
            if (se_seed) config.base_seed = *se_seed;
            if (se_reps) config.repetitions = *se_reps;
            const mlmarket::EtaSweepReport report = mlmarket::run_eta_sweep(config, se_grid);
            std::cout << mlmarket::eta_sweep_to_table(report);
            if (!se_out.empty()) {
                write_text_file(se_out, mlmarket::eta_sweep_to_json(report));
            }
            return kExitOk;
        }
        if (sp_cmd->parsed()) {
            mlmarket::ExperimentConfig config = mlmarket::load_experiment_config(sp_config);
            if (sp_seed) config.base_seed = *sp_seed;
            if (sp_reps) config.repetitions = *sp_reps;
            const mlmarket::EpochSweepReport report = mlmarket::run_epoch_sweep(config, sp_epochs);
            std::cout << mlmarket::epoch_sweep_to_table(report);
            if (!sp_out.empty()) {
                write_text_file(sp_out, mlmarket::epoch_sweep_to_json(report));
            }
            return kExitOk;
        }
        if (ve_cmd->parsed()) {
            return mlmarket::run_verification(std::cout) ? kExitOk : 1;
        }
    } catch (const mlmarket::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const mlmarket::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mlmarket::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
