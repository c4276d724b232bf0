#pragma once

#include "drmech/market.hpp"

#include <stdexcept>

namespace drmech {

enum class SolutionKind { optimum, nash, nash_with_incentives };

const char* to_string(SolutionKind kind);

struct SolverOptions {
    double tol = 1e-9;        // max absolute FOC/KKT residual
    int max_iterations = 10000;
};

struct PeriodSolution {
    Vector q;         // one entry per consumer
    double residual;  // max absolute FOC/KKT residual
    int iterations;
};

struct EquilibriumResult {
    DemandProfile profile;
    SolutionKind kind;
    double residual;   // max over periods
    int iterations;    // max over periods
};

class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

/// Maximizer of consumer i's period-k surplus (plain, or with the incentive
/// term folded in) over own consumption, holding the other consumers' total
/// fixed. Unique by strict concavity; clamped to the scenario's box bounds.
double best_response(const Scenario& s, int i, int k, double others_total,
                     bool with_incentives, const SolverOptions& opts = {});

/// Period-k demand profile maximizing aggregate surplus, by bisection on the
/// period total: each consumer's scalar first-order condition is solved given
/// the total, and the total is driven to self-consistency. Active box bounds
/// are handled by clamping; their KKT residuals are reported as zero when the
/// multiplier sign is feasible.
PeriodSolution social_optimum(const Scenario& s, int k, const SolverOptions& opts = {});

/// Period-k Nash equilibrium. Without incentives this uses the same total-
/// consistency bisection on the Cournot first-order conditions. With
/// incentives it iterates damped best responses of the incentive-adjusted
/// surplus (an intentionally different route, so agreement with the optimum
/// is a check rather than an identity).
PeriodSolution nash_equilibrium(const Scenario& s, int k, bool with_incentives,
                                const SolverOptions& opts = {});

/// All periods of the given solution concept, solved independently
/// (periods may run in parallel; see DRMECH_THREADS).
EquilibriumResult solve(const Scenario& s, SolutionKind kind,
                        const SolverOptions& opts = {});

/// Per-entry first-order-condition residual of `profile` for the given
/// solution concept; zero (within tolerance) exactly at the matching
/// equilibrium. At an active bound whose unconstrained residual points
/// outward, the entry is zero.
Matrix foc_residual(const Scenario& s, const DemandProfile& profile, SolutionKind kind);

}  // namespace drmech
