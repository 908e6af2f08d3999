#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mlmarket/dataset.hpp"
#include "mlmarket/equilibrium.hpp"
#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

enum class AgentKind { BaggedTree, GaussianNB };
enum class UpdateScheme { None, Online, Batch };

/// How per-agent risk parameters are assigned.
struct EtaMode {
    enum class Kind { Homogeneous, GammaSampled };
    Kind kind = Kind::GammaSampled;
    double eta = 1.0;    // Homogeneous value
    double shape = 3.0;  // GammaSampled: eta - 1 ~ Gamma(shape, scale)
    double scale = 1.0;

    static EtaMode homogeneous(double eta);
    static EtaMode gamma_sampled(double shape = 3.0, double scale = 1.0);
};

/// Where the benchmark data comes from: a CSV on disk or the built-in
/// synthetic generator.
struct DataSource {
    std::optional<std::filesystem::path> csv_path;
    std::string label_column = "label";
    std::optional<SyntheticSpec> synthetic;
};

struct ExperimentConfig {
    DataSource data;
    std::size_t num_agents = 20;
    AgentKind agent_kind = AgentKind::BaggedTree;
    double train_fraction = 2.0 / 3.0;
    std::size_t max_items = 3200;
    std::size_t repetitions = 30;
    std::size_t epochs = 1;
    EtaMode eta_mode;
    UpdateScheme update = UpdateScheme::Batch;
    std::uint64_t base_seed = 1;
    std::string baseline = "mean_single_agent";
    SolverConfig solver;
    std::size_t tree_depth_limit = 32;
    std::size_t tree_min_leaf = 10;
    double nb_var_floor = 1e-6;

    void validate() const;
};

struct MetricsRecord {
    double test_ll = 0.0;   // sum over test instances of log P(target), in nats
    double accuracy = 0.0;  // fraction of argmax hits
};

struct MethodMetrics {
    std::string method;
    MetricsRecord metrics;
};

struct RepetitionResult {
    std::uint64_t seed = 0;
    std::vector<MethodMetrics> methods;  // fixed order, see kMethodNames

    const MetricsRecord& metrics_for(const std::string& method) const;
};

struct MethodSummary {
    std::string method;
    double mean_ll = 0.0;
    double mean_accuracy = 0.0;
    double llr_vs_baseline = 0.0;  // mean per-repetition LL difference vs the baseline
    double sigma_llr = 0.0;        // standard error of that difference
    double t_stat = 0.0;
    double p_right = 0.5;          // right-tail paired t, dof = repetitions - 1
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RepetitionResult> repetitions;
    std::vector<MethodSummary> summary;
};

/// Methods evaluated per repetition, in report order.
extern const std::vector<std::string> kMethodNames;

/// Draws count values of eta with eta - 1 ~ Gamma(shape, scale), so every
/// draw exceeds 1.
std::vector<double> sample_eta(std::size_t count, double shape, double scale, std::uint64_t seed);

/// Test metrics of a market: per instance, the equilibrium cost of the target
/// is the model's predictive probability. Equilibrium failures abort with the
/// failing instance index in the message.
MetricsRecord evaluate_market(const BeliefMatrix& test_beliefs, const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const std::vector<std::size_t>& targets,
                              const SolverConfig& config = {});

/// Runs the full protocol: seeded repeated splits, per-agent training, wealth
/// adaptation, and evaluation of the market and single-agent reference
/// methods on the shared test split. Repetitions run concurrently; the
/// report depends only on config and base_seed.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct EtaSweepReport {
    std::vector<double> eta_grid;
    std::vector<double> grid_mean_ll;               // one per grid eta
    std::vector<std::vector<double>> grid_rep_ll;   // [eta][repetition]
    double inhomogeneous_mean_ll = 0.0;
    std::vector<double> inhomogeneous_rep_ll;
};

/// Homogeneous-market test LL per grid eta, plus the gamma-sampled
/// inhomogeneous market on identical splits, providers and seeds.
EtaSweepReport run_eta_sweep(const ExperimentConfig& config, const std::vector<double>& eta_grid);

struct EpochSweepRow {
    std::size_t epoch = 0;
    MetricsRecord iso;
    MetricsRecord log;
};

struct EpochSweepReport {
    std::vector<EpochSweepRow> rows;  // max_epochs + 1 rows; row 0 is uniform wealths
};

/// Batch-update trace: metrics after each training epoch, averaged over
/// repetitions. Row zero is the unadapted (uniform-wealth) market.
EpochSweepReport run_epoch_sweep(const ExperimentConfig& config, std::size_t max_epochs);

/// Deterministic JSON serialisation (byte-identical for identical reports).
std::string report_to_json(const ExperimentReport& report);
std::string report_to_table(const ExperimentReport& report);
std::string eta_sweep_to_json(const EtaSweepReport& report);
std::string eta_sweep_to_table(const EtaSweepReport& report);
std::string epoch_sweep_to_json(const EpochSweepReport& report);
std::string epoch_sweep_to_table(const EpochSweepReport& report);

/// Reads an ExperimentConfig from JSON. Missing fields keep their defaults.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Resolves the configured data source into a concrete dataset.
Dataset load_experiment_dataset(const ExperimentConfig& config);

}  // namespace mlmarket
