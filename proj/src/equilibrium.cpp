#include "mlmarket/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlmarket/investment.hpp"

namespace mlmarket {

namespace {

// Aggregate demand R_k = sum_i r_ik at prices c. Throws UnsupportedMarketError
// if any coordinate is nonpositive; the multiplicative update needs R > 0.
std::vector<double> aggregate_demand(const MarketInstance& market, const SimplexVec& c) {
    std::vector<double> total(market.num_goods(), 0.0);
    for (const Agent& agent : market.agents()) {
        if (agent.wealth == 0.0) continue;
        const InvestmentVec r = invest(agent.utility, agent.wealth, agent.belief, c);
        for (std::size_t k = 0; k < total.size(); ++k) {
            total[k] += r[k];
        }
    }
    for (std::size_t k = 0; k < total.size(); ++k) {
        if (total[k] <= 0.0) {
            throw UnsupportedMarketError("aggregate demand is nonpositive in good " +
                                         std::to_string(k));
        }
    }
    return total;
}

SimplexVec initial_costs(const MarketInstance& market, CostInit mode) {
    if (mode == CostInit::Uniform) {
        return SimplexVec::uniform(market.num_goods());
    }
    std::vector<double> mix(market.num_goods(), 0.0);
    for (const Agent& agent : market.agents()) {
        for (std::size_t k = 0; k < mix.size(); ++k) {
            mix[k] += agent.wealth * agent.belief[k];
        }
    }
    return normalize_simplex(mix);
}

double effective_eta(const UtilitySpec& utility) {
    if (utility.is_exponential()) {
        throw UsageError("effective beliefs are defined for logarithmic and isoelastic agents");
    }
    return utility.eta();
}

}  // namespace

double kl_divergence(const SimplexVec& p, const std::vector<double>& q) {
    if (p.size() != q.size()) {
        throw ValidationError("KL arguments differ in length");
    }
    double kl = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] == 0.0) continue;
        if (q[k] <= 0.0) {
            throw DomainError("KL undefined: q has zero mass where p does not (index " +
                              std::to_string(k) + ")");
        }
        kl += p[k] * std::log(p[k] / q[k]);
    }
    return std::max(kl, 0.0);
}

EquilibriumResult solve_equilibrium(const MarketInstance& market, const SolverConfig& config) {
    if (!(config.a_init > 0.0) || !(config.a_init < 1.0)) {
        throw ValidationError("a_init must lie in (0, 1)");
    }
    if (!(config.epsilon > 0.0)) {
        throw ValidationError("epsilon must be positive");
    }
    if (config.max_iters == 0) {
        throw ValidationError("max_iters must be positive");
    }

    // The multiplicative update cannot clear a homogeneous exponential
    // market; its equilibrium is the log opinion pool, taken directly.
    if (market.homogeneous(UtilityFamily::Exponential)) {
        EquilibriumResult result;
        result.c = closed_form_exp_equilibrium(market);
        result.kl_trace = {0.0};
        result.converged = true;
        return result;
    }

    const std::size_t n = market.num_goods();
    SimplexVec c = initial_costs(market, config.c_init_mode);
    std::vector<double> demand = aggregate_demand(market, c);
    double kl = kl_divergence(c, demand);

    EquilibriumResult result;
    result.kl_trace.push_back(kl);

    double a = config.a_init;
    for (std::size_t step = 0; step < config.max_iters && kl >= config.epsilon; ++step) {
        std::vector<double> candidate(n);
        for (std::size_t k = 0; k < n; ++k) {
            candidate[k] = std::pow(demand[k] / c[k], 1.0 - a) * c[k];
        }
        SimplexVec c_new = normalize_simplex(candidate);
        std::vector<double> demand_new = aggregate_demand(market, c_new);
        const double kl_new = kl_divergence(c_new, demand_new);

        if (kl_new < kl) {
            c = std::move(c_new);
            demand = std::move(demand_new);
            kl = kl_new;
            result.kl_trace.push_back(kl);
            ++result.iterations;
        } else {
            a += (1.0 - a) / 2.0;
            if (1.0 - a < 1e-15) {
                result.c = c;
                result.converged = false;
                throw EquilibriumConvergenceError(
                    "equilibrium update stalled: no accepted step is possible", result);
            }
        }
    }

    result.c = c;
    result.converged = kl < config.epsilon;
    if (!result.converged) {
        throw EquilibriumConvergenceError(
            "equilibrium did not reach epsilon within max_iters (KL = " + std::to_string(kl) + ")",
            result);
    }
    return result;
}

SimplexVec closed_form_log_equilibrium(const MarketInstance& market) {
    if (!market.homogeneous(UtilityFamily::Logarithmic)) {
        throw UsageError("closed-form mixture equilibrium requires all-logarithmic agents");
    }
    std::vector<double> c(market.num_goods(), 0.0);
    for (const Agent& agent : market.agents()) {
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] += agent.wealth * agent.belief[k];
        }
    }
    return normalize_simplex(c);
}

SimplexVec closed_form_exp_equilibrium(const MarketInstance& market) {
    if (!market.homogeneous(UtilityFamily::Exponential)) {
        throw UsageError("closed-form opinion-pool equilibrium requires all-exponential agents");
    }
    const double inv_agents = 1.0 / static_cast<double>(market.num_agents());
    std::vector<double> log_pool(market.num_goods(), 0.0);
    for (const Agent& agent : market.agents()) {
        for (std::size_t k = 0; k < log_pool.size(); ++k) {
            if (agent.belief[k] <= 0.0) {
                throw DomainError("opinion pool undefined for zero beliefs (agent '" +
                                  agent.id + "', good " + std::to_string(k) + ")");
            }
            log_pool[k] += inv_agents * std::log(agent.belief[k]);
        }
    }
    const double peak = *std::max_element(log_pool.begin(), log_pool.end());
    std::vector<double> c(log_pool.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = std::exp(log_pool[k] - peak);
    }
    return normalize_simplex(c);
}

std::vector<SimplexVec> effective_beliefs(const MarketInstance& market, const SimplexVec& c) {
    if (c.size() != market.num_goods()) {
        throw ValidationError("cost vector length does not match market goods");
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] <= 0.0) {
            throw DomainError("effective beliefs need strictly positive costs (good " +
                              std::to_string(k) + ")");
        }
    }
    std::vector<SimplexVec> rows;
    rows.reserve(market.num_agents());
    for (const Agent& agent : market.agents()) {
        const double eta = effective_eta(agent.utility);
        if (eta == 1.0) {
            rows.push_back(agent.belief);
            continue;
        }
        std::vector<double> row(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) {
            row[k] = c[k] * std::pow(agent.belief[k] / c[k], 1.0 / eta);
        }
        rows.push_back(normalize_simplex(row));
    }
    return rows;
}

double check_effective_belief_identity(const MarketInstance& market, const SimplexVec& c) {
    const std::vector<SimplexVec> rows = effective_beliefs(market, c);
    double worst = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        double mixed = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            mixed += market.agents()[i].wealth * rows[i][k];
        }
        worst = std::max(worst, std::abs(c[k] - mixed));
    }
    return worst;
}

AlphaMixtureCertificate alpha_mixture_certificate(const MarketInstance& market,
                                                  const SimplexVec& c) {
    double eta = 0.0;
    if (!market.homogeneous_eta(eta)) {
        throw UsageError("alpha-mixture certificate requires a homogeneous-eta market");
    }
    if (c.size() != market.num_goods()) {
        throw ValidationError("cost vector length does not match market goods");
    }

    const std::size_t num_agents = market.num_agents();
    const std::size_t num_goods = market.num_goods();

    // Belief roots P_i(k)^(1/eta), fixed throughout the iteration.
    std::vector<std::vector<double>> roots(num_agents, std::vector<double>(num_goods));
    for (std::size_t i = 0; i < num_agents; ++i) {
        for (std::size_t k = 0; k < num_goods; ++k) {
            roots[i][k] = std::pow(market.agents()[i].belief[k], 1.0 / eta);
        }
    }

    AlphaMixtureCertificate cert;
    cert.z.assign(num_agents, 1.0);

    constexpr std::size_t kMaxIters = 20000;
    constexpr double kRelTol = 1e-10;
    double damping = 1.0;
    double prev_delta = 0.0, prev_prev_delta = 0.0;
    bool converged = eta == 1.0;  // Z_i = 1 is already exact for mixtures

    for (std::size_t iter = 0; iter < kMaxIters && !converged; ++iter) {
        std::vector<double> pooled(num_goods, 0.0);
        for (std::size_t i = 0; i < num_agents; ++i) {
            const double v = market.agents()[i].wealth / cert.z[i];
            for (std::size_t k = 0; k < num_goods; ++k) {
                pooled[k] += v * roots[i][k];
            }
        }
        std::vector<double> z_next(num_agents, 0.0);
        for (std::size_t k = 0; k < num_goods; ++k) {
            const double weight = std::pow(pooled[k], eta - 1.0);
            for (std::size_t i = 0; i < num_agents; ++i) {
                z_next[i] += weight * roots[i][k];
            }
        }

        double max_rel = 0.0;
        double delta_sum = 0.0;
        for (std::size_t i = 0; i < num_agents; ++i) {
            max_rel = std::max(max_rel, std::abs(z_next[i] - cert.z[i]) / cert.z[i]);
            delta_sum += z_next[i] - cert.z[i];
        }
        // Sign-alternating total residual over three consecutive iterations
        // means the plain iteration is oscillating; damp it.
        if (damping == 1.0 && iter >= 2 && delta_sum * prev_delta < 0.0 &&
            prev_delta * prev_prev_delta < 0.0) {
            damping = 0.5;
        }
        prev_prev_delta = prev_delta;
        prev_delta = delta_sum;

        for (std::size_t i = 0; i < num_agents; ++i) {
            cert.z[i] += damping * (z_next[i] - cert.z[i]);
        }
        converged = max_rel <= kRelTol;
    }
    if (!converged) {
        throw ConvergenceError("alpha-mixture weight fixed point did not converge");
    }

    cert.v.resize(num_agents);
    for (std::size_t i = 0; i < num_agents; ++i) {
        cert.v[i] = market.agents()[i].wealth / cert.z[i];
    }

    cert.reconstruction_error = 0.0;
    for (std::size_t k = 0; k < num_goods; ++k) {
        double pooled = 0.0;
        for (std::size_t i = 0; i < num_agents; ++i) {
            pooled += cert.v[i] * roots[i][k];
        }
        const double reconstructed = std::pow(pooled, eta);
        cert.reconstruction_error = std::max(cert.reconstruction_error,
                                             std::abs(reconstructed - c[k]));
    }
    return cert;
}

}  // namespace mlmarket
