#pragma once

#include "drmech/market.hpp"

#include <vector>

namespace drmech {

/// Weights of the linear alternative-behavior term: the price estimate for a
/// market without consumer i replaces i's demand by sum_{j != i} omega_j q_j.
struct OmegaWeights {
    Vector omega;
};

/// Externality payment for consumer i at the period profile q_col:
/// ||q_{-i}|| * ( p(N/(N-1) * ||q_{-i}||) - p(||q||) ).
/// Positive for below-average consumers, negative above. Needs N >= 2.
double incentive(const Scenario& s, int i, const Vector& q_col);

/// Same externality form with a general weighted estimate of the absent
/// consumer's behavior. omega = 1/(N-1) uniformly reproduces incentive().
double incentive_general(const Scenario& s, const OmegaWeights& w, int i,
                         const Vector& q_col);

/// Surplus of consumer i with the incentive folded in:
/// v_i(q_i) - ||q|| p(||q||) + ||q_{-i}|| p(N/(N-1) ||q_{-i}||).
/// Identically surplus_U + incentive.
double surplus_W(const Scenario& s, int i, int k, const Vector& q_col);

/// Sum of all consumers' incentives at the period profile (direct summation).
double budget_total(const Scenario& s, const Vector& q_col);

/// The same total as the quadratic form beta q^T A q with
/// A = N/(N-1) I - 1/(N-1) ee^T; agrees with budget_total to rounding.
double budget_quadratic_form(const Scenario& s, const Vector& q_col);

struct FairnessFlags {
    bool equal_consumption_equal_incentive = true;
    bool homogeneous_zero = true;
    bool higher_consumption_lower_incentive = true;
    bool all() const {
        return equal_consumption_equal_incentive && homogeneous_zero &&
               higher_consumption_lower_incentive;
    }
};

/// Checks the three fairness properties on the given period profile
/// (vacuous clauses count as satisfied).
FairnessFlags fairness_check(const Scenario& s, const Vector& q_col);

struct ProbeResult {
    double max_abs_total = 0.0;
    bool degenerate = false;  // every sampled profile was homogeneous
};

/// Max |sum_i I_i| over the sampled period profiles under the given weights.
/// Strictly positive for every linear weighting unless all samples are
/// homogeneous (flagged degenerate). Throws on an empty sample set.
ProbeResult budget_imbalance_probe(const Scenario& s, const OmegaWeights& w,
                                   const std::vector<Vector>& samples);

struct BenefitEntry {
    int consumer;
    int period;
    double U;
    double W;
    double I;
    bool below_average;  // own demand strictly below the period mean
};

struct BenefitReport {
    std::vector<BenefitEntry> entries;  // one per (consumer, period)
    Vector daily_U;
    Vector daily_W;
};

/// Participation diagnostics at the social optimum: every consumer's W must
/// be nonnegative, and W exceeds U exactly for below-average consumers.
/// Throws std::invalid_argument when `mu` is not an optimum (FOC residual
/// above residual_tol).
BenefitReport rationality_and_benefit(const Scenario& s, const DemandProfile& mu,
                                      double residual_tol = 1e-6);

struct IncentiveReport {
    Vector per_consumer;            // daily incentive, summed over periods
    double total = 0.0;
    FairnessFlags fairness_ok;      // AND over all periods
    Vector individual_rationality;  // daily W_i
};

IncentiveReport incentive_report(const Scenario& s, const DemandProfile& profile);

}  // namespace drmech
