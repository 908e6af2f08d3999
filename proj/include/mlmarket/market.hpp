#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlmarket/simplex.hpp"

namespace mlmarket {

enum class UtilityFamily { Logarithmic, Exponential, Isoelastic };

/// Risk preference of an agent. Isoelastic utilities are parameterised by
/// eta > 0; eta == 1 canonicalises to Logarithmic at construction, so the
/// isoelastic formulas never run with their eta = 1 singularity.
class UtilitySpec {
  public:
    static UtilitySpec logarithmic() { return UtilitySpec(UtilityFamily::Logarithmic, 1.0); }
    static UtilitySpec exponential() { return UtilitySpec(UtilityFamily::Exponential, 0.0); }
    static UtilitySpec isoelastic(double eta);

    UtilityFamily family() const { return family_; }

    /// Risk-aversion parameter. Defined for Logarithmic (1) and Isoelastic
    /// agents; throws UsageError for Exponential.
    double eta() const;

    bool is_exponential() const { return family_ == UtilityFamily::Exponential; }

    bool operator==(const UtilitySpec& other) const = default;

  private:
    UtilitySpec(UtilityFamily family, double eta) : family_(family), eta_(eta) {}

    UtilityFamily family_;
    double eta_;
};

std::string to_string(UtilityFamily family);

/// A market participant: identity, risk preference, wealth share and belief
/// over the goods.
struct Agent {
    std::string id;
    UtilitySpec utility;
    double wealth;      // >= 0; MarketInstance normalises the total to 1
    SimplexVec belief;  // length = number of goods
};

/// An immutable snapshot of one market: the agents and the goods they trade.
/// Construction validates belief lengths and rescales wealths to total 1, so
/// downstream code can rely on the unit-wealth convention.
class MarketInstance {
  public:
    MarketInstance(std::vector<Agent> agents, std::size_t num_goods);

    const std::vector<Agent>& agents() const { return agents_; }
    std::size_t num_agents() const { return agents_.size(); }
    std::size_t num_goods() const { return num_goods_; }

    /// True when every agent shares the given family.
    bool homogeneous(UtilityFamily family) const;

    /// True when all agents are isoelastic/logarithmic with one shared eta;
    /// if so, stores it in `eta_out`.
    bool homogeneous_eta(double& eta_out) const;

  private:
    std::vector<Agent> agents_;
    std::size_t num_goods_;
};

/// Per-agent, per-instance class distributions: the interchange unit between
/// belief providers and the market layer. Rows are stored agent-major.
class BeliefMatrix {
  public:
    BeliefMatrix(std::size_t num_agents, std::size_t num_instances, std::vector<SimplexVec> rows);

    std::size_t num_agents() const { return num_agents_; }
    std::size_t num_instances() const { return num_instances_; }
    std::size_t num_goods() const { return rows_.front().size(); }

    const SimplexVec& at(std::size_t agent, std::size_t instance) const {
        return rows_[agent * num_instances_ + instance];
    }

    /// All agents' beliefs for a single instance, in agent order.
    std::vector<SimplexVec> instance_beliefs(std::size_t instance) const;

  private:
    std::size_t num_agents_;
    std::size_t num_instances_;
    std::vector<SimplexVec> rows_;
};

/// A belief matrix paired with the observed target per instance. Targets are
/// zero-based good indices.
struct LabeledBeliefSet {
    BeliefMatrix beliefs;
    std::vector<std::size_t> targets;

    LabeledBeliefSet(BeliefMatrix beliefs_in, std::vector<std::size_t> targets_in);
};

}  // namespace mlmarket
