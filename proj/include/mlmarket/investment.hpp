#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlmarket/errors.hpp"
#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

/// An agent's spending across the goods, in currency units. Always sums to
/// the agent's wealth; entries can be negative only for exponential agents
/// (short positions).
using InvestmentVec = std::vector<double>;

/// Bracketed solve state for the budget multiplier. Carried by the
/// non-convergence error so callers can see where the search stalled.
struct LagrangeSolveState {
    double lambda = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;  // total spend minus wealth at `lambda`
};

class LagrangeConvergenceError : public ConvergenceError {
  public:
    LagrangeConvergenceError(const std::string& msg, LagrangeSolveState state)
        : ConvergenceError(msg), state_(state) {}
    const LagrangeSolveState& state() const { return state_; }

  private:
    LagrangeSolveState state_;
};

/// Logarithmic agents spend wealth in proportion to belief, independent of
/// prices.
InvestmentVec invest_logarithmic(double wealth, const SimplexVec& belief);

/// Isoelastic spending: amounts_k proportional to c_k^((eta-1)/eta) * P_k^(1/eta),
/// scaled to spend exactly `wealth`. eta == 1 falls back to the logarithmic
/// rule. Requires strictly positive costs.
InvestmentVec invest_isoelastic(double wealth, double eta, const SimplexVec& belief,
                                const SimplexVec& costs);

/// Exponential spending: a uniform wealth share plus price-weighted
/// log-disagreement terms. Entries may be negative. Requires strictly
/// positive beliefs and costs.
InvestmentVec invest_exponential(double wealth, const SimplexVec& belief,
                                 const SimplexVec& costs);

/// Spending for an arbitrary concave utility, supplied as the inverse of its
/// marginal utility (a strictly decreasing map). The budget multiplier is
/// found by bracketed bisection; throws ConvergenceError carrying a
/// LagrangeSolveState if no bracket or no root is found.
InvestmentVec invest_generic(const std::function<double(double)>& marginal_utility_inverse,
                             double wealth, const SimplexVec& belief, const SimplexVec& costs);

/// Dispatch on the agent's utility family.
InvestmentVec invest(const UtilitySpec& utility, double wealth, const SimplexVec& belief,
                     const SimplexVec& costs);

}  // namespace mlmarket
