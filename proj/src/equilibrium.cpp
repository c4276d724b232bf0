#include "drmech/equilibrium.hpp"

#include "drmech/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drmech {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool at_lower(double q, double lo) { return q <= lo + 1e-13 * (1.0 + std::abs(lo)); }
bool at_upper(double q, double hi) {
    return std::isfinite(hi) && q >= hi - 1e-13 * (1.0 + std::abs(hi));
}

double kkt_adjust(double raw, double q, double lo, double hi) {
    if (at_lower(q, lo) && raw < 0.0) return 0.0;
    if (at_upper(q, hi) && raw > 0.0) return 0.0;
    return raw;
}

// Marginal payment term of the first-order condition, given the period total.
// The social/incentive form charges the total externality, the Cournot form
// only the own-quantity effect.
double foc_rhs(const PriceModel& pm, double total, double own, bool social_form) {
    return price(pm, total) + (social_form ? total : own) * pm.beta;
}

// Root of marginal_valuation(alpha, q) = c0 + slope*q for q >= 0, by
// bisection (the difference is strictly decreasing in q). Returns 0 for
// corner solutions; +inf when the right-hand side can never catch up
// (slope = 0 and c0 <= 0).
double marginal_root(double alpha, double c0, double slope) {
    auto g = [&](double q) { return marginal_valuation(alpha, q) - c0 - slope * q; };
    if (g(0.0) <= 0.0) return 0.0;
    if (slope <= 0.0 && c0 <= 0.0) return kInf;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (++guard > 1024) return kInf;
    }
    while (hi - lo > 1e-16 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct PeriodProblem {
    const Scenario& s;
    int k;
    SolutionKind kind;

    bool social_form() const { return kind != SolutionKind::nash; }

    // Consumer i's consumption solving its scalar FOC at a fixed period total,
    // clamped to the box.
    double coordinate(int i, double total) const {
        const double lo = s.lower(i, k);
        const double hi = s.upper(i, k);
        double q;
        if (social_form()) {
            // rhs independent of own q: v'(q) = p(total) + total * p'
            q = inverse_marginal(s.alpha(i, k), foc_rhs(s.price, total, 0.0, true));
        } else {
            // v'(q) = p(total) + q * p'
            q = marginal_root(s.alpha(i, k), price(s.price, total), s.price.beta);
        }
        return std::clamp(q, lo, std::isfinite(hi) ? hi : kInf);
    }

    double excess(double total) const {
        double sum = 0.0;
        for (int i = 0; i < s.n_consumers; ++i) sum += coordinate(i, total);
        return sum - total;
    }

    double residual_at(const Vector& q) const {
        const double total = q.sum();
        double worst = 0.0;
        for (int i = 0; i < s.n_consumers; ++i) {
            const double raw = marginal_valuation(s.alpha(i, k), q(i)) -
                               foc_rhs(s.price, total, q(i), social_form());
            worst = std::max(worst, std::abs(kkt_adjust(raw, q(i), s.lower(i, k),
                                                        s.upper(i, k))));
        }
        return worst;
    }
};

PeriodSolution solve_by_total(const Scenario& s, int k, SolutionKind kind,
                              const SolverOptions& opts) {
    const PeriodProblem prob{s, k, kind};
    const int n = s.n_consumers;
    int iterations = 0;

    double total = 0.0;
    if (prob.excess(0.0) > 0.0) {
        double lo = 0.0, hi = 1.0;
        int guard = 0;
        while (prob.excess(hi) > 0.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > 1024)
                throw SolverError("equilibrium solve: total demand bracket not found", kInf);
        }
        while (hi - lo > 1e-15 * std::max(1.0, hi) && iterations < opts.max_iterations) {
            const double mid = 0.5 * (lo + hi);
            (prob.excess(mid) > 0.0 ? lo : hi) = mid;
            ++iterations;
        }
        total = 0.5 * (lo + hi);
    }

    Vector q(n);
    for (int i = 0; i < n; ++i) q(i) = prob.coordinate(i, total);
    // Evaluate residuals with the realized total, not the bracket midpoint.
    const double residual = prob.residual_at(q);
    if (residual > opts.tol)
        throw SolverError("equilibrium solve: residual " + std::to_string(residual) +
                              " above tolerance",
                          residual);
    return {std::move(q), residual, iterations};
}

// Damped simultaneous best-response iteration for the incentive-adjusted
// game. Damping 1/N (capped at 1/2) keeps the aggregate mode inside the unit
// circle for any population size.
PeriodSolution solve_by_best_response(const Scenario& s, int k,
                                      const SolverOptions& opts) {
    const int n = s.n_consumers;
    const double w = std::min(0.5, 1.0 / n);
    const PeriodProblem prob{s, k, SolutionKind::nash_with_incentives};

    Vector q(n);
    for (int i = 0; i < n; ++i) q(i) = std::clamp(1.0, s.lower(i, k), s.upper(i, k));

    double residual = kInf;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        const double total = q.sum();
        Vector next(n);
        for (int i = 0; i < n; ++i) {
            const double br = best_response(s, i, k, total - q(i), true, opts);
            next(i) = (1.0 - w) * q(i) + w * br;
        }
        q = next;
        residual = prob.residual_at(q);
        if (residual <= opts.tol) return {std::move(q), residual, it};
    }
    throw SolverError("nash_equilibrium(with incentives): no convergence, residual " +
                          std::to_string(residual),
                      residual);
}

}  // namespace

const char* to_string(SolutionKind kind) {
    switch (kind) {
        case SolutionKind::optimum: return "optimum";
        case SolutionKind::nash: return "nash";
        case SolutionKind::nash_with_incentives: return "nash_with_incentives";
    }
    return "unknown";
}

double best_response(const Scenario& s, int i, int k, double others_total,
                     bool with_incentives, const SolverOptions& opts) {
    (void)opts;
    if (others_total < 0.0)
        throw std::domain_error("best_response: negative others_total");
    if (with_incentives && s.n_consumers < 2)
        throw std::domain_error("best_response: incentives need at least two consumers");
    const double lo = s.lower(i, k);
    const double hi = s.upper(i, k);
    const double alpha = s.alpha(i, k);
    // Marginal surplus in own consumption; strictly decreasing.
    auto g = [&](double q) {
        const double total = q + others_total;
        const double marginal_payment =
            with_incentives ? foc_rhs(s.price, total, q, true)
                            : price(s.price, total) + q * s.price.beta;
        return marginal_valuation(alpha, q) - marginal_payment;
    };
    if (g(lo) <= 0.0) return lo;
    double a = lo, b = std::max(1.0, lo + 1.0);
    int guard = 0;
    while (g(b) > 0.0) {
        a = b;
        b *= 2.0;
        if (++guard > 1024) throw SolverError("best_response: no finite maximizer", kInf);
    }
    while (b - a > 1e-16 * std::max(1.0, b)) {
        const double mid = 0.5 * (a + b);
        (g(mid) > 0.0 ? a : b) = mid;
    }
    return std::min(0.5 * (a + b), hi);
}

PeriodSolution social_optimum(const Scenario& s, int k, const SolverOptions& opts) {
    return solve_by_total(s, k, SolutionKind::optimum, opts);
}

PeriodSolution nash_equilibrium(const Scenario& s, int k, bool with_incentives,
                                const SolverOptions& opts) {
    if (!with_incentives) return solve_by_total(s, k, SolutionKind::nash, opts);
    if (s.n_consumers < 2)
        throw std::domain_error("nash_equilibrium: incentives need at least two consumers");
    return solve_by_best_response(s, k, opts);
}

EquilibriumResult solve(const Scenario& s, SolutionKind kind, const SolverOptions& opts) {
    EquilibriumResult result;
    result.kind = kind;
    result.profile.q.resize(s.n_consumers, s.n_periods);
    std::vector<double> residuals(s.n_periods, 0.0);
    std::vector<int> iterations(s.n_periods, 0);
    parallel_for(s.n_periods, [&](int k) {
        PeriodSolution sol = kind == SolutionKind::optimum
                                 ? social_optimum(s, k, opts)
                                 : nash_equilibrium(
                                       s, k, kind == SolutionKind::nash_with_incentives,
                                       opts);
        result.profile.q.col(k) = sol.q;
        residuals[k] = sol.residual;
        iterations[k] = sol.iterations;
    });
    result.residual = *std::max_element(residuals.begin(), residuals.end());
    result.iterations = *std::max_element(iterations.begin(), iterations.end());
    return result;
}

Matrix foc_residual(const Scenario& s, const DemandProfile& profile, SolutionKind kind) {
    if (profile.n_consumers() != s.n_consumers || profile.n_periods() != s.n_periods)
        throw std::invalid_argument("foc_residual: profile shape mismatch");
    const bool social_form = kind != SolutionKind::nash;
    Matrix out(s.n_consumers, s.n_periods);
    for (int k = 0; k < s.n_periods; ++k) {
        const double total = profile.q.col(k).sum();
        for (int i = 0; i < s.n_consumers; ++i) {
            const double q = profile.q(i, k);
            const double raw = marginal_valuation(s.alpha(i, k), q) -
                               foc_rhs(s.price, total, q, social_form);
            out(i, k) = kkt_adjust(raw, q, s.lower(i, k), s.upper(i, k));
        }
    }
    return out;
}

}  // namespace drmech
