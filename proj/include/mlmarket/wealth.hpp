#pragma once

#include <cstddef>
#include <vector>

#include "mlmarket/equilibrium.hpp"
#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

/// Posterior share of each agent in each training instance's payoff:
/// column t is a distribution over agents.
class Responsibilities {
  public:
    Responsibilities(std::size_t num_agents, std::size_t num_instances);

    std::size_t num_agents() const { return num_agents_; }
    std::size_t num_instances() const { return num_instances_; }

    double& at(std::size_t agent, std::size_t instance) {
        return values_[agent * num_instances_ + instance];
    }
    double at(std::size_t agent, std::size_t instance) const {
        return values_[agent * num_instances_ + instance];
    }

    /// One column as a distribution over agents.
    SimplexVec column(std::size_t instance) const;

  private:
    std::size_t num_agents_;
    std::size_t num_instances_;
    std::vector<double> values_;
};

/// One online step: solve the instance market at the current wealths, pay out
/// on the realised target, and renormalise. The new wealth of agent i is
/// proportional to W_i times its effective belief in the target.
SimplexVec online_update_step(const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const std::vector<SimplexVec>& instance_beliefs,
                              std::size_t target, const SolverConfig& config = {});

struct OnlineEpochResult {
    SimplexVec final_wealths;
    std::vector<SimplexVec> trajectory;  // data.size() + 1 entries, starting at the prior
};

/// Applies online_update_step over the dataset in order. For logarithmic
/// agents this computes the sequential Bayesian posterior over agents.
OnlineEpochResult run_online_epoch(const SimplexVec& initial_wealths,
                                   const std::vector<UtilitySpec>& utilities,
                                   const LabeledBeliefSet& data, const SolverConfig& config = {});

/// Payoff shares with wealths frozen across the whole batch: every instance's
/// equilibrium is solved at the same start-of-epoch wealths.
Responsibilities batch_responsibilities(const SimplexVec& wealths,
                                        const std::vector<UtilitySpec>& utilities,
                                        const LabeledBeliefSet& data,
                                        const SolverConfig& config = {});

/// One batch epoch: the new wealth of agent i is the mean of its payoff
/// shares over the instances. For eta = 1 this is exactly one EM update of
/// mixture weights.
SimplexVec batch_update_epoch(const SimplexVec& wealths,
                              const std::vector<UtilitySpec>& utilities,
                              const LabeledBeliefSet& data, const SolverConfig& config = {});

}  // namespace mlmarket
