#include "drmech/incentives.hpp"

#include "drmech/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace drmech {

namespace {

void require_population(const Scenario& s, const Vector& q_col, const char* who) {
    if (s.n_consumers < 2)
        throw std::domain_error(std::string(who) + ": undefined for a single consumer");
    if (q_col.size() != s.n_consumers)
        throw std::invalid_argument(std::string(who) + ": q_col size mismatch");
    if ((q_col.array() < 0.0).any())
        throw std::domain_error(std::string(who) + ": negative consumption");
}

}  // namespace

double incentive(const Scenario& s, int i, const Vector& q_col) {
    require_population(s, q_col, "incentive");
    const int n = s.n_consumers;
    const double others = q_col.sum() - q_col(i);
    const double without_i = price(s.price, others * static_cast<double>(n) / (n - 1));
    const double with_i = price(s.price, q_col.sum());
    return others * (without_i - with_i);
}

double incentive_general(const Scenario& s, const OmegaWeights& w, int i,
                         const Vector& q_col) {
    require_population(s, q_col, "incentive_general");
    if (w.omega.size() != s.n_consumers)
        throw std::invalid_argument("incentive_general: omega size mismatch");
    double others = 0.0, estimate = 0.0;
    for (int j = 0; j < s.n_consumers; ++j) {
        if (j == i) continue;
        others += q_col(j);
        estimate += w.omega(j) * q_col(j);
    }
    // Negative weights may push the estimated market below zero; the affine
    // price extends over all reals here.
    const double without_i = s.price.beta * (others + estimate) + s.price.b;
    return others * (without_i - price(s.price, q_col.sum()));
}

double surplus_W(const Scenario& s, int i, int k, const Vector& q_col) {
    require_population(s, q_col, "surplus_W");
    const int n = s.n_consumers;
    const double total = q_col.sum();
    const double others = total - q_col(i);
    return valuation(s.alpha(i, k), q_col(i)) - total * price(s.price, total) +
           others * price(s.price, others * static_cast<double>(n) / (n - 1));
}

double budget_total(const Scenario& s, const Vector& q_col) {
    require_population(s, q_col, "budget_total");
    double sum = 0.0;
    for (int i = 0; i < s.n_consumers; ++i) sum += incentive(s, i, q_col);
    return sum;
}

double budget_quadratic_form(const Scenario& s, const Vector& q_col) {
    require_population(s, q_col, "budget_quadratic_form");
    const double n = s.n_consumers;
    const double sum = q_col.sum();
    const double sq = q_col.squaredNorm();
    // q^T (N/(N-1) I - 1/(N-1) ee^T) q
    return s.price.beta * (n * sq - sum * sum) / (n - 1.0);
}

FairnessFlags fairness_check(const Scenario& s, const Vector& q_col) {
    require_population(s, q_col, "fairness_check");
    const int n = s.n_consumers;
    Vector inc(n);
    for (int i = 0; i < n; ++i) inc(i) = incentive(s, i, q_col);

    FairnessFlags flags;
    const double scale = std::max(1.0, inc.cwiseAbs().maxCoeff());
    const double tol = 1e-9 * scale;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (q_col(i) == q_col(j)) {
                if (std::abs(inc(i) - inc(j)) > tol)
                    flags.equal_consumption_equal_incentive = false;
            } else if (q_col(j) > q_col(i)) {
                if (!(inc(j) < inc(i))) flags.higher_consumption_lower_incentive = false;
            } else {
                if (!(inc(i) < inc(j))) flags.higher_consumption_lower_incentive = false;
            }
        }
    const bool homogeneous = (q_col.array() == q_col(0)).all();
    if (homogeneous && inc.cwiseAbs().maxCoeff() > tol) flags.homogeneous_zero = false;
    return flags;
}

ProbeResult budget_imbalance_probe(const Scenario& s, const OmegaWeights& w,
                                   const std::vector<Vector>& samples) {
    if (samples.empty())
        throw std::invalid_argument("budget_imbalance_probe: empty sample set");
    ProbeResult result;
    result.degenerate = true;
    for (const Vector& q : samples) {
        require_population(s, q, "budget_imbalance_probe");
        double total = 0.0;
        for (int i = 0; i < s.n_consumers; ++i) total += incentive_general(s, w, i, q);
        result.max_abs_total = std::max(result.max_abs_total, std::abs(total));
        if (!(q.array() == q(0)).all()) result.degenerate = false;
    }
    return result;
}

BenefitReport rationality_and_benefit(const Scenario& s, const DemandProfile& mu,
                                      double residual_tol) {
    if (s.n_consumers < 2)
        throw std::domain_error("rationality_and_benefit: needs at least two consumers");
    const Matrix res = foc_residual(s, mu, SolutionKind::optimum);
    const double worst = res.cwiseAbs().maxCoeff();
    if (worst > residual_tol)
        throw std::invalid_argument(
            "rationality_and_benefit: profile is not a social optimum (residual " +
            std::to_string(worst) + ")");

    BenefitReport report;
    report.daily_U = Vector::Zero(s.n_consumers);
    report.daily_W = Vector::Zero(s.n_consumers);
    for (int k = 0; k < s.n_periods; ++k) {
        const Vector col = mu.q.col(k);
        const double mean = col.mean();
        for (int i = 0; i < s.n_consumers; ++i) {
            BenefitEntry e;
            e.consumer = i;
            e.period = k;
            e.U = surplus_U(s, i, k, col);
            e.W = surplus_W(s, i, k, col);
            e.I = incentive(s, i, col);
            e.below_average = col(i) < mean;
            report.daily_U(i) += e.U;
            report.daily_W(i) += e.W;
            report.entries.push_back(e);
        }
    }
    return report;
}

IncentiveReport incentive_report(const Scenario& s, const DemandProfile& profile) {
    if (s.n_consumers < 2)
        throw std::domain_error("incentive_report: needs at least two consumers");
    if (profile.n_consumers() != s.n_consumers || profile.n_periods() != s.n_periods)
        throw std::invalid_argument("incentive_report: profile shape mismatch");
    IncentiveReport report;
    report.per_consumer = Vector::Zero(s.n_consumers);
    report.individual_rationality = Vector::Zero(s.n_consumers);
    for (int k = 0; k < s.n_periods; ++k) {
        const Vector col = profile.q.col(k);
        for (int i = 0; i < s.n_consumers; ++i) {
            report.per_consumer(i) += incentive(s, i, col);
            report.individual_rationality(i) += surplus_W(s, i, k, col);
        }
        const FairnessFlags f = fairness_check(s, col);
        report.fairness_ok.equal_consumption_equal_incentive &=
            f.equal_consumption_equal_incentive;
        report.fairness_ok.homogeneous_zero &= f.homogeneous_zero;
        report.fairness_ok.higher_consumption_lower_incentive &=
            f.higher_consumption_lower_incentive;
    }
    report.total = report.per_consumer.sum();
    return report;
}

}  // namespace drmech
