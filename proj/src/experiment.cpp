#include "mlmarket/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mlmarket/belief_io.hpp"
#include "mlmarket/errors.hpp"
#include "mlmarket/learners.hpp"
#include "mlmarket/rng.hpp"
#include "mlmarket/stats.hpp"
#include "mlmarket/wealth.hpp"

namespace mlmarket {

namespace {

using nlohmann::json;

// Seed-stream channels, so adding a consumer never shifts another one.
constexpr std::uint64_t kChannelDataset = 0xD5;
constexpr std::uint64_t kChannelSplit = 1;
constexpr std::uint64_t kChannelEta = 2;
constexpr std::uint64_t kChannelProviders = 1000;

Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed) {
    Dataset out;
    out.feature_names = data.feature_names;
    out.class_names = data.class_names;
    Rng rng(seed);
    out.features.reserve(data.size());
    out.labels.reserve(data.size());
    for (std::size_t n = 0; n < data.size(); ++n) {
        const std::size_t pick = static_cast<std::size_t>(rng.bounded(data.size()));
        out.features.push_back(data.features[pick]);
        out.labels.push_back(data.labels[pick]);
    }
    return out;
}

struct RepetitionData {
    std::uint64_t seed;
    Dataset train;
    Dataset test;
    BeliefMatrix train_beliefs;
    BeliefMatrix test_beliefs;
    std::vector<double> etas;
};

RepetitionData prepare_repetition(const ExperimentConfig& config, const Dataset& data,
                                  std::size_t repetition) {
    const std::uint64_t rep_seed = derive_seed(config.base_seed, repetition);
    auto [train, test] = split_dataset(data, config.train_fraction, config.max_items,
                                       derive_seed(rep_seed, kChannelSplit));

    std::vector<BeliefProviderPtr> providers;
    providers.reserve(config.num_agents);
    for (std::size_t i = 0; i < config.num_agents; ++i) {
        const std::uint64_t provider_seed = derive_seed(rep_seed, kChannelProviders + i);
        switch (config.agent_kind) {
            case AgentKind::BaggedTree:
                providers.push_back(train_bagged_tree(train, config.tree_depth_limit,
                                                      config.tree_min_leaf, provider_seed));
                break;
            case AgentKind::GaussianNB:
                // Naive Bayes is deterministic given its data, so diversity
                // across agents comes from bootstrap resampling.
                providers.push_back(train_gaussian_nb(bootstrap_resample(train, provider_seed),
                                                      config.nb_var_floor));
                break;
        }
    }

    std::vector<double> etas;
    if (config.eta_mode.kind == EtaMode::Kind::Homogeneous) {
        etas.assign(config.num_agents, config.eta_mode.eta);
    } else {
        etas = sample_eta(config.num_agents, config.eta_mode.shape, config.eta_mode.scale,
                          derive_seed(rep_seed, kChannelEta));
    }

    return RepetitionData{rep_seed,
                          train,
                          test,
                          predict_beliefs(providers, train),
                          predict_beliefs(providers, test),
                          std::move(etas)};
}

std::vector<UtilitySpec> isoelastic_roster(const std::vector<double>& etas) {
    std::vector<UtilitySpec> utilities;
    utilities.reserve(etas.size());
    for (double eta : etas) utilities.push_back(UtilitySpec::isoelastic(eta));
    return utilities;
}

SimplexVec adapt_wealths(const SimplexVec& initial, const std::vector<UtilitySpec>& utilities,
                         const LabeledBeliefSet& train_set, UpdateScheme scheme,
                         std::size_t epochs, const SolverConfig& solver) {
    SimplexVec wealths = initial;
    for (std::size_t epoch = 0; epoch < epochs && scheme != UpdateScheme::None; ++epoch) {
        if (scheme == UpdateScheme::Batch) {
            wealths = batch_update_epoch(wealths, utilities, train_set, solver);
        } else {
            wealths = run_online_epoch(wealths, utilities, train_set, solver).final_wealths;
        }
    }
    return wealths;
}

MetricsRecord single_agent_metrics(const BeliefMatrix& beliefs, std::size_t agent,
                                   const std::vector<std::size_t>& targets) {
    MetricsRecord out;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const SimplexVec& row = beliefs.at(agent, t);
        out.test_ll += std::log(row[targets[t]]);
        const auto peak = std::max_element(row.begin(), row.end());
        if (static_cast<std::size_t>(peak - row.begin()) == targets[t]) ++hits;
    }
    out.accuracy = static_cast<double>(hits) / static_cast<double>(targets.size());
    return out;
}

RepetitionResult evaluate_repetition(const ExperimentConfig& config, const RepetitionData& rep) {
    const std::size_t num_agents = config.num_agents;
    const SimplexVec uniform = SimplexVec::uniform(num_agents);
    const std::vector<UtilitySpec> iso_utilities = isoelastic_roster(rep.etas);
    const std::vector<UtilitySpec> log_utilities(num_agents, UtilitySpec::logarithmic());
    const LabeledBeliefSet train_set(rep.train_beliefs, rep.train.labels);

    const SimplexVec iso_wealths = adapt_wealths(uniform, iso_utilities, train_set, config.update,
                                                 config.epochs, config.solver);
    const SimplexVec log_wealths = adapt_wealths(uniform, log_utilities, train_set, config.update,
                                                 config.epochs, config.solver);

    RepetitionResult result;
    result.seed = rep.seed;
    result.methods.push_back(
        {"iso_market", evaluate_market(rep.test_beliefs, iso_wealths, iso_utilities,
                                       rep.test.labels, config.solver)});
    result.methods.push_back(
        {"log_market", evaluate_market(rep.test_beliefs, log_wealths, log_utilities,
                                       rep.test.labels, config.solver)});
    result.methods.push_back(
        {"uniform_mixture", evaluate_market(rep.test_beliefs, uniform, log_utilities,
                                            rep.test.labels, config.solver)});

    MetricsRecord mean_single;
    std::size_t best_agent = 0;
    double best_train_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < num_agents; ++i) {
        const MetricsRecord test_metrics = single_agent_metrics(rep.test_beliefs, i, rep.test.labels);
        mean_single.test_ll += test_metrics.test_ll / static_cast<double>(num_agents);
        mean_single.accuracy += test_metrics.accuracy / static_cast<double>(num_agents);
        // Selection happens on the training split; choosing on test would leak.
        const double train_ll =
            single_agent_metrics(rep.train_beliefs, i, rep.train.labels).test_ll;
        if (train_ll > best_train_ll) {
            best_train_ll = train_ll;
            best_agent = i;
        }
    }
    result.methods.push_back({"mean_single_agent", mean_single});
    result.methods.push_back(
        {"best_single_agent", single_agent_metrics(rep.test_beliefs, best_agent, rep.test.labels)});
    return result;
}

// Runs fn(r) for r in [0, count) across a small thread pool; results land in
// a preallocated slot per index, so assembly is order-independent.
template <typename Fn>
void parallel_repetitions(std::size_t count, Fn&& fn) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
    if (workers == 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t r = next.fetch_add(1);
                if (r >= count) return;
                try {
                    fn(r);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

json metrics_to_json(const MetricsRecord& m) {
    return json{{"test_ll", m.test_ll}, {"accuracy", m.accuracy}};
}

}  // namespace

const std::vector<std::string> kMethodNames = {
    "iso_market", "log_market", "uniform_mixture", "mean_single_agent", "best_single_agent"};

EtaMode EtaMode::homogeneous(double eta) {
    EtaMode mode;
    mode.kind = Kind::Homogeneous;
    mode.eta = eta;
    return mode;
}

EtaMode EtaMode::gamma_sampled(double shape, double scale) {
    EtaMode mode;
    mode.kind = Kind::GammaSampled;
    mode.shape = shape;
    mode.scale = scale;
    return mode;
}

void ExperimentConfig::validate() const {
    if (!data.csv_path && !data.synthetic) {
        throw ValidationError("config needs a csv path or a synthetic spec");
    }
    if (data.csv_path && data.synthetic) {
        throw ValidationError("config must choose csv or synthetic, not both");
    }
    if (num_agents == 0 || repetitions == 0) {
        throw ValidationError("num_agents and repetitions must be positive");
    }
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw ValidationError("train_fraction must lie in (0, 1)");
    }
    if (eta_mode.kind == EtaMode::Kind::Homogeneous) {
        if (!(eta_mode.eta > 0.0)) throw ValidationError("homogeneous eta must be positive");
    } else {
        if (!(eta_mode.shape > 0.0) || !(eta_mode.scale > 0.0)) {
            throw ValidationError("gamma shape and scale must be positive");
        }
    }
    if (std::find(kMethodNames.begin(), kMethodNames.end(), baseline) == kMethodNames.end()) {
        throw ValidationError("unknown baseline method '" + baseline + "'");
    }
}

const MetricsRecord& RepetitionResult::metrics_for(const std::string& method) const {
    for (const MethodMetrics& m : methods) {
        if (m.method == method) return m.metrics;
    }
    throw ValidationError("repetition has no method '" + method + "'");
}

std::vector<double> sample_eta(std::size_t count, double shape, double scale, std::uint64_t seed) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ValidationError("gamma shape and scale must be positive");
    }
    Rng rng(seed);
    std::vector<double> etas(count);
    for (double& eta : etas) {
        eta = 1.0 + rng.gamma(shape, scale);
    }
    return etas;
}

MetricsRecord evaluate_market(const BeliefMatrix& test_beliefs, const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const std::vector<std::size_t>& targets,
                              const SolverConfig& config) {
    if (targets.size() != test_beliefs.num_instances()) {
        throw ValidationError("target count does not match belief instances");
    }
    MetricsRecord out;
    std::size_t hits = 0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        std::vector<Agent> agents;
        agents.reserve(wealths.size());
        for (std::size_t i = 0; i < wealths.size(); ++i) {
            agents.push_back(Agent{"agent_" + std::to_string(i), utilities[i], wealths[i],
                                   test_beliefs.at(i, t)});
        }
        const MarketInstance market(std::move(agents), test_beliefs.num_goods());
        SimplexVec c = [&] {
            try {
                return solve_equilibrium(market, config).c;
            } catch (const EquilibriumConvergenceError& e) {
                throw EquilibriumConvergenceError(
                    "instance " + std::to_string(t) + ": " + e.what(), e.partial());
            }
        }();
        out.test_ll += std::log(c[targets[t]]);
        const auto peak = std::max_element(c.begin(), c.end());
        if (static_cast<std::size_t>(peak - c.begin()) == targets[t]) ++hits;
    }
    out.accuracy = static_cast<double>(hits) / static_cast<double>(targets.size());
    return out;
}

Dataset load_experiment_dataset(const ExperimentConfig& config) {
    config.validate();
    if (config.data.csv_path) {
        return load_csv_dataset(*config.data.csv_path, config.data.label_column).data;
    }
    return make_gaussian_blobs(*config.data.synthetic, derive_seed(config.base_seed, kChannelDataset));
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const Dataset data = load_experiment_dataset(config);

    ExperimentReport report;
    report.config = config;
    report.repetitions.resize(config.repetitions);
    parallel_repetitions(config.repetitions, [&](std::size_t r) {
        const RepetitionData rep = prepare_repetition(config, data, r);
        report.repetitions[r] = evaluate_repetition(config, rep);
    });

    std::vector<double> baseline_ll(config.repetitions);
    for (std::size_t r = 0; r < config.repetitions; ++r) {
        baseline_ll[r] = report.repetitions[r].metrics_for(config.baseline).test_ll;
    }
    for (const std::string& method : kMethodNames) {
        MethodSummary summary;
        summary.method = method;
        std::vector<double> diffs(config.repetitions);
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            const MetricsRecord& m = report.repetitions[r].metrics_for(method);
            summary.mean_ll += m.test_ll / static_cast<double>(config.repetitions);
            summary.mean_accuracy += m.accuracy / static_cast<double>(config.repetitions);
            diffs[r] = m.test_ll - baseline_ll[r];
        }
        const PairedTTest test = paired_t_test(diffs);
        summary.llr_vs_baseline = test.mean_diff;
        summary.sigma_llr = test.stderr_diff;
        summary.t_stat = test.t_stat;
        summary.p_right = test.p_right;
        report.summary.push_back(summary);
    }
    return report;
}

EtaSweepReport run_eta_sweep(const ExperimentConfig& config, const std::vector<double>& eta_grid) {
    config.validate();
    if (eta_grid.empty()) {
        throw ValidationError("eta grid must be nonempty");
    }
    for (double eta : eta_grid) {
        if (!(eta > 0.0)) throw ValidationError("eta grid values must be positive");
    }
    const Dataset data = load_experiment_dataset(config);

    EtaSweepReport report;
    report.eta_grid = eta_grid;
    report.grid_rep_ll.assign(eta_grid.size(), std::vector<double>(config.repetitions, 0.0));
    report.inhomogeneous_rep_ll.assign(config.repetitions, 0.0);

    parallel_repetitions(config.repetitions, [&](std::size_t r) {
        // Force gamma-sampled etas for the inhomogeneous reference market,
        // independent of the configured mode, on identical splits and seeds.
        ExperimentConfig gamma_config = config;
        gamma_config.eta_mode = EtaMode::gamma_sampled(config.eta_mode.shape, config.eta_mode.scale);
        const RepetitionData rep = prepare_repetition(gamma_config, data, r);
        const SimplexVec uniform = SimplexVec::uniform(config.num_agents);
        const LabeledBeliefSet train_set(rep.train_beliefs, rep.train.labels);

        for (std::size_t g = 0; g < eta_grid.size(); ++g) {
            const std::vector<UtilitySpec> utilities(config.num_agents,
                                                     UtilitySpec::isoelastic(eta_grid[g]));
            const SimplexVec wealths = adapt_wealths(uniform, utilities, train_set, config.update,
                                                     config.epochs, config.solver);
            report.grid_rep_ll[g][r] =
                evaluate_market(rep.test_beliefs, wealths, utilities, rep.test.labels,
                                config.solver)
                    .test_ll;
        }
        const std::vector<UtilitySpec> inhomogeneous = isoelastic_roster(rep.etas);
        const SimplexVec wealths = adapt_wealths(uniform, inhomogeneous, train_set, config.update,
                                                 config.epochs, config.solver);
        report.inhomogeneous_rep_ll[r] =
            evaluate_market(rep.test_beliefs, wealths, inhomogeneous, rep.test.labels,
                            config.solver)
                .test_ll;
    });

    report.grid_mean_ll.resize(eta_grid.size());
    for (std::size_t g = 0; g < eta_grid.size(); ++g) {
        report.grid_mean_ll[g] = mean(report.grid_rep_ll[g]);
    }
    report.inhomogeneous_mean_ll = mean(report.inhomogeneous_rep_ll);
    return report;
}

EpochSweepReport run_epoch_sweep(const ExperimentConfig& config, std::size_t max_epochs) {
    config.validate();
    if (max_epochs == 0) {
        throw ValidationError("epoch sweep needs max_epochs >= 1");
    }
    const Dataset data = load_experiment_dataset(config);

    // [epoch][repetition] metrics per utility mode.
    std::vector<std::vector<MetricsRecord>> iso(max_epochs + 1,
                                                std::vector<MetricsRecord>(config.repetitions));
    auto log_metrics = iso;

    parallel_repetitions(config.repetitions, [&](std::size_t r) {
        const RepetitionData rep = prepare_repetition(config, data, r);
        const LabeledBeliefSet train_set(rep.train_beliefs, rep.train.labels);
        const std::vector<UtilitySpec> iso_utilities = isoelastic_roster(rep.etas);
        const std::vector<UtilitySpec> log_utilities(config.num_agents,
                                                     UtilitySpec::logarithmic());
        SimplexVec iso_wealths = SimplexVec::uniform(config.num_agents);
        SimplexVec log_wealths = iso_wealths;
        for (std::size_t epoch = 0; epoch <= max_epochs; ++epoch) {
            if (epoch > 0) {
                iso_wealths = batch_update_epoch(iso_wealths, iso_utilities, train_set,
                                                 config.solver);
                log_wealths = batch_update_epoch(log_wealths, log_utilities, train_set,
                                                 config.solver);
            }
            iso[epoch][r] = evaluate_market(rep.test_beliefs, iso_wealths, iso_utilities,
                                            rep.test.labels, config.solver);
            log_metrics[epoch][r] = evaluate_market(rep.test_beliefs, log_wealths, log_utilities,
                                                    rep.test.labels, config.solver);
        }
    });

    EpochSweepReport report;
    for (std::size_t epoch = 0; epoch <= max_epochs; ++epoch) {
        EpochSweepRow row;
        row.epoch = epoch;
        for (std::size_t r = 0; r < config.repetitions; ++r) {
            const double inv = 1.0 / static_cast<double>(config.repetitions);
            row.iso.test_ll += iso[epoch][r].test_ll * inv;
            row.iso.accuracy += iso[epoch][r].accuracy * inv;
            row.log.test_ll += log_metrics[epoch][r].test_ll * inv;
            row.log.accuracy += log_metrics[epoch][r].accuracy * inv;
        }
        report.rows.push_back(row);
    }
    return report;
}

namespace {

json config_to_json(const ExperimentConfig& config) {
    json dataset;
    if (config.data.csv_path) {
        dataset["csv"] = config.data.csv_path->string();
        dataset["label_column"] = config.data.label_column;
    } else if (config.data.synthetic) {
        dataset["synthetic"] = {{"classes", config.data.synthetic->classes},
                                {"features", config.data.synthetic->features},
                                {"items", config.data.synthetic->items},
                                {"separation", config.data.synthetic->separation},
                                {"noise", config.data.synthetic->noise}};
    }
    json eta;
    if (config.eta_mode.kind == EtaMode::Kind::Homogeneous) {
        eta = {{"mode", "homogeneous"}, {"value", config.eta_mode.eta}};
    } else {
        eta = {{"mode", "gamma"}, {"shape", config.eta_mode.shape},
               {"scale", config.eta_mode.scale}};
    }
    return json{
        {"dataset", dataset},
        {"num_agents", config.num_agents},
        {"agent_kind", config.agent_kind == AgentKind::BaggedTree ? "bagged_tree" : "gaussian_nb"},
        {"train_fraction", config.train_fraction},
        {"max_items", config.max_items},
        {"repetitions", config.repetitions},
        {"epochs", config.epochs},
        {"eta", eta},
        {"update", config.update == UpdateScheme::None
                       ? "none"
                       : (config.update == UpdateScheme::Online ? "online" : "batch")},
        {"base_seed", config.base_seed},
        {"baseline", config.baseline},
        {"solver",
         {{"a_init", config.solver.a_init},
          {"epsilon", config.solver.epsilon},
          {"max_iters", config.solver.max_iters},
          {"init", config.solver.c_init_mode == CostInit::Uniform ? "uniform" : "wealth_mixture"}}},
        {"tree", {{"depth_limit", config.tree_depth_limit}, {"min_leaf", config.tree_min_leaf}}},
        {"nb_var_floor", config.nb_var_floor}};
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
    json doc;
    doc["config"] = config_to_json(report.config);
    doc["methods"] = kMethodNames;
    json reps = json::array();
    for (const RepetitionResult& rep : report.repetitions) {
        json entry;
        entry["seed"] = rep.seed;
        for (const MethodMetrics& m : rep.methods) {
            entry["metrics"][m.method] = metrics_to_json(m.metrics);
        }
        reps.push_back(entry);
    }
    doc["repetitions"] = reps;
    json summary = json::array();
    for (const MethodSummary& s : report.summary) {
        summary.push_back({{"method", s.method},
                           {"mean_ll", s.mean_ll},
                           {"mean_accuracy", s.mean_accuracy},
                           {"llr_vs_baseline", s.llr_vs_baseline},
                           {"sigma_llr", s.sigma_llr},
                           {"t_stat", s.t_stat},
                           {"p_right", s.p_right}});
    }
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
}

std::string report_to_table(const ExperimentReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(20) << "method" << std::right << std::setw(14) << "mean_ll"
        << std::setw(10) << "mean_acc" << std::setw(12) << "llr" << std::setw(12) << "sigma"
        << std::setw(10) << "t" << std::setw(12) << "p_right" << "\n";
    out << std::string(90, '-') << "\n";
    for (const MethodSummary& s : report.summary) {
        out << std::left << std::setw(20) << s.method << std::right << std::fixed
            << std::setprecision(3) << std::setw(14) << s.mean_ll << std::setw(10)
            << s.mean_accuracy << std::setw(12) << s.llr_vs_baseline << std::setw(12)
            << s.sigma_llr << std::setprecision(2) << std::setw(10) << s.t_stat
            << std::scientific << std::setprecision(2) << std::setw(12) << s.p_right
            << std::defaultfloat << "\n";
    }
    out << "baseline: " << report.config.baseline << ", repetitions: "
        << report.repetitions.size() << "\n";
    return out.str();
}

std::string eta_sweep_to_json(const EtaSweepReport& report) {
    json doc;
    doc["eta_grid"] = report.eta_grid;
    doc["grid_mean_ll"] = report.grid_mean_ll;
    doc["grid_rep_ll"] = report.grid_rep_ll;
    doc["inhomogeneous_mean_ll"] = report.inhomogeneous_mean_ll;
    doc["inhomogeneous_rep_ll"] = report.inhomogeneous_rep_ll;
    return doc.dump(2) + "\n";
}

std::string eta_sweep_to_table(const EtaSweepReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "eta" << std::right << std::setw(14) << "mean_ll"
        << "\n" << std::string(30, '-') << "\n";
    for (std::size_t g = 0; g < report.eta_grid.size(); ++g) {
        out << std::left << std::setw(16) << report.eta_grid[g] << std::right << std::fixed
            << std::setprecision(3) << std::setw(14) << report.grid_mean_ll[g]
            << std::defaultfloat << "\n";
    }
    out << std::left << std::setw(16) << "gamma-sampled" << std::right << std::fixed
        << std::setprecision(3) << std::setw(14) << report.inhomogeneous_mean_ll
        << std::defaultfloat << "\n";
    return out.str();
}

std::string epoch_sweep_to_json(const EpochSweepReport& report) {
    json rows = json::array();
    for (const EpochSweepRow& row : report.rows) {
        rows.push_back({{"epoch", row.epoch},
                        {"iso", metrics_to_json(row.iso)},
                        {"log", metrics_to_json(row.log)}});
    }
    return json{{"rows", rows}}.dump(2) + "\n";
}

std::string epoch_sweep_to_table(const EpochSweepReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "epoch" << std::right << std::setw(14) << "iso_ll"
        << std::setw(10) << "iso_acc" << std::setw(14) << "log_ll" << std::setw(10) << "log_acc"
        << "\n" << std::string(56, '-') << "\n";
    for (const EpochSweepRow& row : report.rows) {
        out << std::left << std::setw(8) << row.epoch << std::right << std::fixed
            << std::setprecision(3) << std::setw(14) << row.iso.test_ll << std::setw(10)
            << row.iso.accuracy << std::setw(14) << row.log.test_ll << std::setw(10)
            << row.log.accuracy << std::defaultfloat << "\n";
    }
    return out.str();
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("config file is not valid JSON: " + std::string(e.what()));
    }

    ExperimentConfig config;
    if (doc.contains("dataset")) {
        const json& dataset = doc.at("dataset");
        if (dataset.contains("csv")) {
            config.data.csv_path = dataset.at("csv").get<std::string>();
            if (dataset.contains("label_column")) {
                config.data.label_column = dataset.at("label_column").get<std::string>();
            }
        }
        if (dataset.contains("synthetic")) {
            SyntheticSpec spec;
            const json& synth = dataset.at("synthetic");
            if (synth.contains("classes")) spec.classes = synth.at("classes").get<std::size_t>();
            if (synth.contains("features")) spec.features = synth.at("features").get<std::size_t>();
            if (synth.contains("items")) spec.items = synth.at("items").get<std::size_t>();
            if (synth.contains("separation")) spec.separation = synth.at("separation").get<double>();
            if (synth.contains("noise")) spec.noise = synth.at("noise").get<double>();
            config.data.synthetic = spec;
        }
    }
    if (doc.contains("num_agents")) config.num_agents = doc.at("num_agents").get<std::size_t>();
    if (doc.contains("agent_kind")) {
        const std::string kind = doc.at("agent_kind").get<std::string>();
        if (kind == "bagged_tree") {
            config.agent_kind = AgentKind::BaggedTree;
        } else if (kind == "gaussian_nb") {
            config.agent_kind = AgentKind::GaussianNB;
        } else {
            throw ParseError("unknown agent kind '" + kind + "'");
        }
    }
    if (doc.contains("train_fraction")) config.train_fraction = doc.at("train_fraction").get<double>();
    if (doc.contains("max_items")) config.max_items = doc.at("max_items").get<std::size_t>();
    if (doc.contains("repetitions")) config.repetitions = doc.at("repetitions").get<std::size_t>();
    if (doc.contains("epochs")) config.epochs = doc.at("epochs").get<std::size_t>();
    if (doc.contains("eta")) {
        const json& eta = doc.at("eta");
        const std::string mode = eta.at("mode").get<std::string>();
        if (mode == "homogeneous") {
            config.eta_mode = EtaMode::homogeneous(eta.at("value").get<double>());
        } else if (mode == "gamma") {
            config.eta_mode = EtaMode::gamma_sampled(
                eta.contains("shape") ? eta.at("shape").get<double>() : 3.0,
                eta.contains("scale") ? eta.at("scale").get<double>() : 1.0);
        } else {
            throw ParseError("unknown eta mode '" + mode + "'");
        }
    }
    if (doc.contains("update")) {
        const std::string update = doc.at("update").get<std::string>();
        if (update == "none") {
            config.update = UpdateScheme::None;
        } else if (update == "online") {
            config.update = UpdateScheme::Online;
        } else if (update == "batch") {
            config.update = UpdateScheme::Batch;
        } else {
            throw ParseError("unknown update scheme '" + update + "'");
        }
    }
    if (doc.contains("base_seed")) config.base_seed = doc.at("base_seed").get<std::uint64_t>();
    if (doc.contains("baseline")) config.baseline = doc.at("baseline").get<std::string>();
    if (doc.contains("solver")) {
        const json& solver = doc.at("solver");
        if (solver.contains("a_init")) config.solver.a_init = solver.at("a_init").get<double>();
        if (solver.contains("epsilon")) config.solver.epsilon = solver.at("epsilon").get<double>();
        if (solver.contains("max_iters")) {
            config.solver.max_iters = solver.at("max_iters").get<std::size_t>();
        }
        if (solver.contains("init")) {
            const std::string init = solver.at("init").get<std::string>();
            if (init == "uniform") {
                config.solver.c_init_mode = CostInit::Uniform;
            } else if (init == "wealth_mixture") {
                config.solver.c_init_mode = CostInit::WealthMixture;
            } else {
                throw ParseError("unknown solver init '" + init + "'");
            }
        }
    }
    if (doc.contains("tree")) {
        const json& tree = doc.at("tree");
        if (tree.contains("depth_limit")) {
            config.tree_depth_limit = tree.at("depth_limit").get<std::size_t>();
        }
        if (tree.contains("min_leaf")) config.tree_min_leaf = tree.at("min_leaf").get<std::size_t>();
    }
    if (doc.contains("nb_var_floor")) config.nb_var_floor = doc.at("nb_var_floor").get<double>();
    return config;
}

}  // namespace mlmarket
