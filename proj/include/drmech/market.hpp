#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace drmech {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Affine average-cost price p(z) = beta*z + b. beta > 0 keeps the generation
/// cost C(z) = z*p(z) convex and nondecreasing; b >= 0 keeps p nonnegative.
struct PriceModel {
    double beta = 1.0;  // currency per energy^2
    double b = 0.0;     // currency per energy
};

/// Unit price at a given total demand. Throws std::domain_error for total < 0.
double price(const PriceModel& model, double total);

/// Generation cost C(z) = z * price(z).
double cost(const PriceModel& model, double total);

/// Per-consumer, per-period valuation weights (N rows, T columns).
struct ValuationParams {
    Matrix alpha;
};

// Valuation family: v(q) = alpha * log(1+q). Concave, nondecreasing, v(0)=0.
// The solvers and fitness functions only touch the three functions below, so
// swapping the family means swapping these.
double valuation(double alpha, double q);
double marginal_valuation(double alpha, double q);
/// Smallest q >= 0 with v'(q) <= level; +inf when level <= 0.
double inverse_marginal(double alpha, double level);

/// A full problem instance. Bounds, when present, are N x T and satisfy
/// 0 <= lower <= upper componentwise.
struct Scenario {
    int n_consumers = 0;
    int n_periods = 0;
    ValuationParams valuations;
    PriceModel price;
    Vector capacity;  // per-consumer daily cap Q_i, kWh
    std::optional<Matrix> lower_bounds;
    std::optional<Matrix> upper_bounds;

    double alpha(int i, int k) const { return valuations.alpha(i, k); }
    double lower(int i, int k) const {
        return lower_bounds ? (*lower_bounds)(i, k) : 0.0;
    }
    double upper(int i, int k) const {
        return upper_bounds ? (*upper_bounds)(i, k)
                            : std::numeric_limits<double>::infinity();
    }
};

/// N x T consumption matrix, kWh per period.
struct DemandProfile {
    Matrix q;

    int n_consumers() const { return static_cast<int>(q.rows()); }
    int n_periods() const { return static_cast<int>(q.cols()); }
};

/// Surplus of consumer i in period k under average-cost pricing:
/// v_i^k(q_i) - q_i * p(||q^k||_1). q_col holds all consumers' period-k demand.
double surplus_U(const Scenario& s, int i, int k, const Vector& q_col);

/// Sum of surplus_U over all consumers and periods. Equals total valuation
/// minus generation cost because average-cost payments sum to the cost.
double aggregate_surplus(const Scenario& s, const DemandProfile& profile);

/// Structural checks plus the participation condition (marginal valuation at
/// zero consumption must not fall below the price intercept). Violations are
/// returned as data, not thrown.
std::vector<std::string> validate_scenario(const Scenario& s);

/// Nonnegativity, shape, and daily-capacity checks for a profile.
std::vector<std::string> validate_profile(const Scenario& s, const DemandProfile& p);

}  // namespace drmech
