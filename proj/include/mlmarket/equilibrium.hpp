#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlmarket/errors.hpp"
#include "mlmarket/market.hpp"
#include "mlmarket/simplex.hpp"

namespace mlmarket {

enum class CostInit {
    Uniform,        // c starts at 1/N_G
    WealthMixture,  // c starts at the wealth-weighted belief mixture
};

struct SolverConfig {
    double a_init = 0.1;       // damping exponent: the accepted update is (R/c)^(1-a) c
    double epsilon = 1e-10;    // stop once KL(c || aggregate demand) falls below this
    std::size_t max_iters = 10000;
    CostInit c_init_mode = CostInit::WealthMixture;
};

struct EquilibriumResult {
    SimplexVec c;
    std::size_t iterations = 0;      // accepted steps
    std::vector<double> kl_trace;    // KL at init, then after each accepted step
    bool converged = false;
};

/// Certificate that a homogeneous-eta equilibrium has the alpha-mixture form:
/// c_k = [sum_i V_i P_i(k)^(1/eta)]^eta with V_i = W_i / Z_i, where the Z_i
/// are solved from their fixed-point equation independently of the solver's
/// cost vector. `reconstruction_error` is the max abs gap between the
/// certified c and the cost vector being checked.
struct AlphaMixtureCertificate {
    std::vector<double> z;
    std::vector<double> v;
    double reconstruction_error = 0.0;
};

class EquilibriumConvergenceError : public ConvergenceError {
  public:
    EquilibriumConvergenceError(const std::string& msg, EquilibriumResult partial)
        : ConvergenceError(msg), partial_(std::move(partial)) {}
    const EquilibriumResult& partial() const { return partial_; }

  private:
    EquilibriumResult partial_;
};

/// Market that the iterative solver cannot handle: aggregate demand went
/// nonpositive in some good (possible only with exponential agents present).
class UnsupportedMarketError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// KL(p || q) = sum_k p_k log(p_k / q_k), with 0 log 0 = 0. q may be any
/// nonnegative measure but must be positive wherever p is.
double kl_divergence(const SimplexVec& p, const std::vector<double>& q);

/// Finds the equilibrium cost vector: the fixed point where aggregate demand
/// equals the price of every good.
///
/// Iterates c_k <- (R_k / c_k)^(1-a) * c_k (normalised), accepting a step
/// only when the KL objective evaluated at the candidate decreases, and
/// backing off the exponent otherwise. Homogeneous exponential markets
/// short-circuit to their closed form. Throws EquilibriumConvergenceError
/// (carrying the partial result) when max_iters is exhausted, and
/// UnsupportedMarketError if aggregate demand goes nonpositive.
EquilibriumResult solve_equilibrium(const MarketInstance& market, const SolverConfig& config = {});

/// Equilibrium of an all-logarithmic market: the wealth-weighted mixture of
/// beliefs. Throws UsageError if any agent is not logarithmic.
SimplexVec closed_form_log_equilibrium(const MarketInstance& market);

/// Equilibrium of an all-exponential market: the normalised geometric mean of
/// beliefs (a log opinion pool). Throws UsageError if any agent is not
/// exponential.
SimplexVec closed_form_exp_equilibrium(const MarketInstance& market);

/// The belief each agent effectively contributes after interacting with the
/// market at prices c: row i is c_k (P_i(k)/c_k)^(1/eta_i), normalised over k.
/// An agent's investment is exactly its wealth times its effective belief.
/// Agents must be logarithmic or isoelastic; c must be strictly positive.
std::vector<SimplexVec> effective_beliefs(const MarketInstance& market, const SimplexVec& c);

/// Residual of the wealth-weighted effective-belief identity:
/// max_k |c_k - sum_i W_i P^eta_ik(c)|. Zero exactly at equilibrium; valid
/// for mixed-eta markets.
double check_effective_belief_identity(const MarketInstance& market, const SimplexVec& c);

/// Certifies a homogeneous-eta equilibrium against the alpha-mixture form.
/// Solves the Z fixed point from wealths and beliefs alone (damped iteration,
/// relative tolerance 1e-10), reconstructs c, and reports the max abs
/// deviation from `c`. Throws UsageError for mixed-eta or exponential
/// markets, ConvergenceError if the fixed point stalls.
AlphaMixtureCertificate alpha_mixture_certificate(const MarketInstance& market,
                                                  const SimplexVec& c);

}  // namespace mlmarket
