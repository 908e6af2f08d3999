#include "mlmarket/investment.hpp"

#include <cmath>
#include <string>

#include "mlmarket/errors.hpp"

namespace mlmarket {

namespace {

constexpr double kBudgetResidualTol = 1e-12;

void require_same_length(const SimplexVec& belief, const SimplexVec& costs) {
    if (belief.size() != costs.size()) {
        throw ValidationError("belief and cost vectors differ in length");
    }
}

void require_strictly_positive(const SimplexVec& v, const char* what) {
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] <= 0.0) {
            throw DomainError(std::string(what) + " has zero entry at index " +
                              std::to_string(k));
        }
    }
}

}  // namespace

InvestmentVec invest_logarithmic(double wealth, const SimplexVec& belief) {
    if (!(wealth >= 0.0)) {
        throw ValidationError("wealth must be nonnegative");
    }
    InvestmentVec amounts(belief.size());
    for (std::size_t k = 0; k < belief.size(); ++k) {
        amounts[k] = wealth * belief[k];
    }
    return amounts;
}

InvestmentVec invest_isoelastic(double wealth, double eta, const SimplexVec& belief,
                                const SimplexVec& costs) {
    if (!(wealth >= 0.0)) {
        throw ValidationError("wealth must be nonnegative");
    }
    if (!(eta > 0.0)) {
        throw ValidationError("eta must be positive");
    }
    if (eta == 1.0) {
        return invest_logarithmic(wealth, belief);
    }
    require_same_length(belief, costs);
    require_strictly_positive(costs, "cost vector");

    const std::size_t n = belief.size();
    const double cost_exp = (eta - 1.0) / eta;
    const double belief_exp = 1.0 / eta;
    InvestmentVec amounts(n);
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        amounts[k] = std::pow(costs[k], cost_exp) * std::pow(belief[k], belief_exp);
        z += amounts[k];
    }
    for (double& a : amounts) {
        a *= wealth / z;
    }
    return amounts;
}

InvestmentVec invest_exponential(double wealth, const SimplexVec& belief,
                                 const SimplexVec& costs) {
    require_same_length(belief, costs);
    require_strictly_positive(belief, "belief vector");
    require_strictly_positive(costs, "cost vector");

    const std::size_t n = belief.size();
    const double uniform_share = wealth / static_cast<double>(n);
    double mean_log_term = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        mean_log_term += costs[k] * std::log(belief[k] / costs[k]);
    }
    mean_log_term /= static_cast<double>(n);

    InvestmentVec amounts(n);
    for (std::size_t k = 0; k < n; ++k) {
        amounts[k] = uniform_share + costs[k] * std::log(belief[k] / costs[k]) - mean_log_term;
    }
    return amounts;
}

InvestmentVec invest_generic(const std::function<double(double)>& marginal_utility_inverse,
                             double wealth, const SimplexVec& belief, const SimplexVec& costs) {
    if (!(wealth > 0.0)) {
        throw ValidationError("generic solve requires positive wealth");
    }
    require_same_length(belief, costs);
    require_strictly_positive(belief, "belief vector");
    require_strictly_positive(costs, "cost vector");

    const std::size_t n = belief.size();
    const auto spend_at = [&](double lambda) {
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            total += costs[k] * marginal_utility_inverse(lambda * costs[k] / belief[k]);
        }
        return total;
    };

    // Total spend is decreasing in lambda for a concave utility, so a sign
    // change of (spend - wealth) brackets the multiplier.
    LagrangeSolveState state;
    state.bracket_lo = 1e-12;
    state.bracket_hi = 1e12;
    double res_lo = spend_at(state.bracket_lo) - wealth;
    double res_hi = spend_at(state.bracket_hi) - wealth;
    int expansions = 0;
    while (res_lo < 0.0 && expansions < 200) {
        state.bracket_lo /= 16.0;
        res_lo = spend_at(state.bracket_lo) - wealth;
        ++expansions;
    }
    while (res_hi > 0.0 && expansions < 200) {
        state.bracket_hi *= 16.0;
        res_hi = spend_at(state.bracket_hi) - wealth;
        ++expansions;
    }
    if (res_lo < 0.0 || res_hi > 0.0) {
        state.lambda = res_lo < 0.0 ? state.bracket_lo : state.bracket_hi;
        state.residual = res_lo < 0.0 ? res_lo : res_hi;
        throw LagrangeConvergenceError("could not bracket the budget multiplier", state);
    }

    double lo = state.bracket_lo;
    double hi = state.bracket_hi;
    state.lambda = 0.5 * (lo + hi);
    state.residual = spend_at(state.lambda) - wealth;
    for (int iter = 0; iter < 2000 && std::abs(state.residual) > kBudgetResidualTol; ++iter) {
        if (state.residual > 0.0) {
            lo = state.lambda;
        } else {
            hi = state.lambda;
        }
        state.lambda = 0.5 * (lo + hi);
        state.residual = spend_at(state.lambda) - wealth;
    }
    if (std::abs(state.residual) > kBudgetResidualTol) {
        state.bracket_lo = lo;
        state.bracket_hi = hi;
        throw LagrangeConvergenceError("budget multiplier bisection stalled", state);
    }

    InvestmentVec amounts(n);
    for (std::size_t k = 0; k < n; ++k) {
        amounts[k] = costs[k] * marginal_utility_inverse(state.lambda * costs[k] / belief[k]);
    }
    return amounts;
}

InvestmentVec invest(const UtilitySpec& utility, double wealth, const SimplexVec& belief,
                     const SimplexVec& costs) {
    switch (utility.family()) {
        case UtilityFamily::Logarithmic: return invest_logarithmic(wealth, belief);
        case UtilityFamily::Exponential: return invest_exponential(wealth, belief, costs);
        case UtilityFamily::Isoelastic:
            return invest_isoelastic(wealth, utility.eta(), belief, costs);
    }
    throw ValidationError("unknown utility family");
}

}  // namespace mlmarket
