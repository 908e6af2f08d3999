#include "mlmarket/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <vector>

#include "mlmarket/equilibrium.hpp"
#include "mlmarket/investment.hpp"
#include "mlmarket/rng.hpp"
#include "mlmarket/simplex.hpp"
#include "mlmarket/wealth.hpp"

namespace mlmarket {

namespace {

SimplexVec random_simplex(Rng& rng, std::size_t n) {
    std::vector<double> raw(n);
    for (double& x : raw) x = rng.uniform(0.05, 1.0);
    return clip_belief(normalize_simplex(raw), kBeliefFloor);
}

MarketInstance random_market(Rng& rng, std::size_t num_agents, std::size_t num_goods,
                             const std::function<UtilitySpec(std::size_t)>& utility_for) {
    std::vector<Agent> agents;
    for (std::size_t i = 0; i < num_agents; ++i) {
        agents.push_back(Agent{"a" + std::to_string(i), utility_for(i), rng.uniform(0.1, 1.0),
                               random_simplex(rng, num_goods)});
    }
    return MarketInstance(std::move(agents), num_goods);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

bool check_budget_identity(Rng& rng) {
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.bounded(6);
        const SimplexVec belief = random_simplex(rng, n);
        const SimplexVec costs = random_simplex(rng, n);
        const double wealth = rng.uniform(0.01, 2.0);
        for (const InvestmentVec& r :
             {invest_logarithmic(wealth, belief),
              invest_isoelastic(wealth, rng.uniform(0.2, 12.0), belief, costs),
              invest_exponential(wealth, belief, costs)}) {
            double total = 0.0;
            for (double x : r) total += x;
            if (std::abs(total - wealth) > 1e-10) return false;
        }
    }
    return true;
}

bool check_wealth_linearity(Rng& rng) {
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.bounded(5);
        const SimplexVec belief = random_simplex(rng, n);
        const SimplexVec costs = random_simplex(rng, n);
        const double eta = rng.uniform(0.3, 9.0);
        const double wealth = rng.uniform(0.05, 1.0);
        const double alpha = rng.uniform(0.1, 5.0);
        const InvestmentVec base = invest_isoelastic(wealth, eta, belief, costs);
        const InvestmentVec scaled = invest_isoelastic(alpha * wealth, eta, belief, costs);
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(scaled[k] - alpha * base[k]) > 1e-12 * std::max(1.0, alpha)) return false;
        }
    }
    return true;
}

bool check_generic_matches_closed_forms(Rng& rng) {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.bounded(5);
        const SimplexVec belief = random_simplex(rng, n);
        const SimplexVec costs = random_simplex(rng, n);
        const double wealth = rng.uniform(0.1, 1.0);

        const InvestmentVec log_direct = invest_logarithmic(wealth, belief);
        const InvestmentVec log_generic =
            invest_generic([](double x) { return 1.0 / x; }, wealth, belief, costs);
        if (max_abs_diff(log_direct, log_generic) > 1e-10) return false;

        const double eta = rng.uniform(0.5, 6.0);
        const InvestmentVec iso_direct = invest_isoelastic(wealth, eta, belief, costs);
        const InvestmentVec iso_generic = invest_generic(
            [eta](double x) { return std::pow(x, -1.0 / eta); }, wealth, belief, costs);
        if (max_abs_diff(iso_direct, iso_generic) > 1e-10) return false;
    }
    return true;
}

bool check_log_oracle_equivalence(Rng& rng) {
    for (int trial = 0; trial < 100; ++trial) {
        const MarketInstance market = random_market(
            rng, 2 + rng.bounded(9), 2 + rng.bounded(7),
            [](std::size_t) { return UtilitySpec::logarithmic(); });
        SolverConfig config;
        config.c_init_mode = trial % 2 == 0 ? CostInit::Uniform : CostInit::WealthMixture;
        const SimplexVec solved = solve_equilibrium(market, config).c;
        const SimplexVec direct = closed_form_log_equilibrium(market);
        if (max_abs_diff(solved.entries(), direct.entries()) > 1e-8) return false;
    }
    return true;
}

bool check_equilibrium_self_consistency(Rng& rng) {
    for (int trial = 0; trial < 100; ++trial) {
        const MarketInstance market = random_market(
            rng, 2 + rng.bounded(7), 2 + rng.bounded(7), [&rng](std::size_t) {
                return UtilitySpec::isoelastic(rng.uniform(1.0, 10.0));
            });
        const EquilibriumResult eq = solve_equilibrium(market);
        if (check_effective_belief_identity(market, eq.c) > 1e-8) return false;
        for (std::size_t step = 1; step < eq.kl_trace.size(); ++step) {
            if (!(eq.kl_trace[step] < eq.kl_trace[step - 1])) return false;
        }
    }
    return true;
}

bool check_alpha_certificate(Rng& rng) {
    for (double eta : {2.0, 5.0, 10.0}) {
        for (int trial = 0; trial < 30; ++trial) {
            const MarketInstance market =
                random_market(rng, 2 + rng.bounded(5), 2 + rng.bounded(6),
                              [eta](std::size_t) { return UtilitySpec::isoelastic(eta); });
            const EquilibriumResult eq = solve_equilibrium(market);
            if (alpha_mixture_certificate(market, eq.c).reconstruction_error > 1e-7) return false;
        }
    }
    return true;
}

bool check_agent_split_invariance(Rng& rng) {
    for (int trial = 0; trial < 50; ++trial) {
        const MarketInstance market = random_market(
            rng, 2 + rng.bounded(4), 2 + rng.bounded(5), [&rng](std::size_t) {
                return UtilitySpec::isoelastic(rng.uniform(1.0, 8.0));
            });
        const SimplexVec base = solve_equilibrium(market).c;
        for (std::size_t victim = 0; victim < market.num_agents(); ++victim) {
            std::vector<Agent> agents = market.agents();
            Agent clone = agents[victim];
            clone.id += "_clone";
            clone.wealth = agents[victim].wealth / 2.0;
            agents[victim].wealth /= 2.0;
            agents.push_back(clone);
            const MarketInstance split(std::move(agents), market.num_goods());
            const SimplexVec with_clone = solve_equilibrium(split).c;
            if (max_abs_diff(base.entries(), with_clone.entries()) > 1e-8) return false;
        }
    }
    return true;
}

bool check_permutation_equivariance(Rng& rng) {
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t goods = 3 + rng.bounded(5);
        const MarketInstance market =
            random_market(rng, 2 + rng.bounded(5), goods, [&rng](std::size_t) {
                return UtilitySpec::isoelastic(rng.uniform(1.0, 6.0));
            });
        std::vector<std::size_t> perm(goods);
        for (std::size_t k = 0; k < goods; ++k) perm[k] = k;
        for (std::size_t k = goods - 1; k > 0; --k) {
            std::swap(perm[k], perm[rng.bounded(k + 1)]);
        }
        std::vector<Agent> permuted;
        for (const Agent& agent : market.agents()) {
            std::vector<double> belief(goods);
            for (std::size_t k = 0; k < goods; ++k) belief[perm[k]] = agent.belief[k];
            permuted.push_back(
                Agent{agent.id, agent.utility, agent.wealth, normalize_simplex(belief)});
        }
        const SimplexVec base = solve_equilibrium(market).c;
        const SimplexVec moved =
            solve_equilibrium(MarketInstance(std::move(permuted), goods)).c;
        for (std::size_t k = 0; k < goods; ++k) {
            if (std::abs(base[k] - moved[perm[k]]) > 1e-9) return false;
        }
    }
    return true;
}

bool check_market_clearing(Rng& rng) {
    SolverConfig config;
    const double bound = 10.0 * std::sqrt(2.0 * config.epsilon);
    for (int trial = 0; trial < 50; ++trial) {
        const MarketInstance market = random_market(
            rng, 2 + rng.bounded(7), 2 + rng.bounded(6), [&rng](std::size_t) {
                return UtilitySpec::isoelastic(rng.uniform(1.0, 10.0));
            });
        const SimplexVec c = solve_equilibrium(market, config).c;
        std::vector<double> demand(market.num_goods(), 0.0);
        for (const Agent& agent : market.agents()) {
            const InvestmentVec r = invest(agent.utility, agent.wealth, agent.belief, c);
            for (std::size_t k = 0; k < demand.size(); ++k) demand[k] += r[k];
        }
        if (max_abs_diff(demand, c.entries()) > bound) return false;
    }
    return true;
}

bool check_online_bayes_equivalence(Rng& rng) {
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t agents = 2 + rng.bounded(9);
        const std::size_t goods = 2 + rng.bounded(4);
        const std::size_t steps = 1 + rng.bounded(50);
        std::vector<SimplexVec> rows;
        std::vector<std::size_t> targets;
        for (std::size_t i = 0; i < agents; ++i) {
            for (std::size_t t = 0; t < steps; ++t) {
                rows.push_back(random_simplex(rng, goods));
            }
        }
        for (std::size_t t = 0; t < steps; ++t) {
            targets.push_back(rng.bounded(goods));
        }
        const LabeledBeliefSet data(BeliefMatrix(agents, steps, rows), targets);
        const std::vector<UtilitySpec> utilities(agents, UtilitySpec::logarithmic());
        const SimplexVec posterior =
            run_online_epoch(SimplexVec::uniform(agents), utilities, data).final_wealths;

        // Direct product-of-likelihoods posterior, in log space.
        std::vector<double> log_post(agents, 0.0);
        for (std::size_t i = 0; i < agents; ++i) {
            for (std::size_t t = 0; t < steps; ++t) {
                log_post[i] += std::log(data.beliefs.at(i, t)[targets[t]]);
            }
        }
        const double peak = *std::max_element(log_post.begin(), log_post.end());
        std::vector<double> direct(agents);
        for (std::size_t i = 0; i < agents; ++i) direct[i] = std::exp(log_post[i] - peak);
        const SimplexVec oracle = normalize_simplex(direct);
        if (max_abs_diff(posterior.entries(), oracle.entries()) > 1e-10) return false;
    }
    return true;
}

bool check_batch_em_equivalence(Rng& rng) {
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t agents = 2 + rng.bounded(9);
        const std::size_t goods = 2 + rng.bounded(4);
        const std::size_t instances = 2 + rng.bounded(49);
        std::vector<SimplexVec> rows;
        std::vector<std::size_t> targets;
        for (std::size_t i = 0; i < agents * instances; ++i) {
            rows.push_back(random_simplex(rng, goods));
        }
        for (std::size_t t = 0; t < instances; ++t) {
            targets.push_back(rng.bounded(goods));
        }
        const LabeledBeliefSet data(BeliefMatrix(agents, instances, rows), targets);
        const std::vector<UtilitySpec> utilities(agents, UtilitySpec::logarithmic());
        std::vector<double> weights(agents);
        for (double& w : weights) w = rng.uniform(0.05, 1.0);
        const SimplexVec prior = normalize_simplex(weights);

        const SimplexVec updated = batch_update_epoch(prior, utilities, data);

        // Classic mixture-weight EM step.
        std::vector<double> em(agents, 0.0);
        for (std::size_t t = 0; t < instances; ++t) {
            double denom = 0.0;
            for (std::size_t i = 0; i < agents; ++i) {
                denom += prior[i] * data.beliefs.at(i, t)[targets[t]];
            }
            for (std::size_t i = 0; i < agents; ++i) {
                em[i] += prior[i] * data.beliefs.at(i, t)[targets[t]] / denom;
            }
        }
        for (double& w : em) w /= static_cast<double>(instances);
        if (max_abs_diff(updated.entries(), em) > 1e-12) return false;
    }
    return true;
}

bool check_wealth_conservation(Rng& rng) {
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t agents = 2 + rng.bounded(5);
        const std::size_t goods = 2 + rng.bounded(4);
        const std::size_t instances = 1 + rng.bounded(10);
        std::vector<SimplexVec> rows;
        for (std::size_t i = 0; i < agents * instances; ++i) {
            rows.push_back(random_simplex(rng, goods));
        }
        std::vector<std::size_t> targets;
        for (std::size_t t = 0; t < instances; ++t) targets.push_back(rng.bounded(goods));
        const LabeledBeliefSet data(BeliefMatrix(agents, instances, rows), targets);
        std::vector<UtilitySpec> utilities;
        for (std::size_t i = 0; i < agents; ++i) {
            utilities.push_back(UtilitySpec::isoelastic(rng.uniform(1.0, 8.0)));
        }
        SimplexVec wealths = SimplexVec::uniform(agents);
        wealths = batch_update_epoch(wealths, utilities, data);
        wealths = run_online_epoch(wealths, utilities, data).final_wealths;
        double total = 0.0;
        for (double w : wealths) {
            if (w < 0.0) return false;
            total += w;
        }
        if (std::abs(total - 1.0) > 1e-12) return false;
    }
    return true;
}

}  // namespace

bool run_verification(std::ostream& out) {
    struct Check {
        const char* name;
        bool (*fn)(Rng&);
    };
    const Check checks[] = {
        {"budget identity (all families)", check_budget_identity},
        {"isoelastic wealth linearity", check_wealth_linearity},
        {"generic solve matches closed forms", check_generic_matches_closed_forms},
        {"solver matches mixture closed form", check_log_oracle_equivalence},
        {"effective-belief identity + KL descent", check_equilibrium_self_consistency},
        {"alpha-mixture certificate", check_alpha_certificate},
        {"agent-split invariance", check_agent_split_invariance},
        {"permutation equivariance", check_permutation_equivariance},
        {"market clearing at convergence", check_market_clearing},
        {"online updates = Bayes posterior (eta 1)", check_online_bayes_equivalence},
        {"batch epoch = EM step (eta 1)", check_batch_em_equivalence},
        {"wealth conservation and nonnegativity", check_wealth_conservation},
    };
    bool all_ok = true;
    std::uint64_t check_index = 0;
    for (const Check& check : checks) {
        Rng rng(derive_seed(0x5eedbea7, check_index++));
        bool ok = false;
        try {
            ok = check.fn(rng);
        } catch (const std::exception& e) {
            out << "[FAIL] " << check.name << " (exception: " << e.what() << ")\n";
            all_ok = false;
            continue;
        }
        out << (ok ? "[PASS] " : "[FAIL] ") << check.name << "\n";
        all_ok = all_ok && ok;
    }
    return all_ok;
}

}  // namespace mlmarket
