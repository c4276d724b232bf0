#include "drmech/market.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace drmech {

double price(const PriceModel& model, double total) {
    if (total < 0.0) throw std::domain_error("price: negative total demand");
    return model.beta * total + model.b;
}

double cost(const PriceModel& model, double total) {
    if (total < 0.0) throw std::domain_error("cost: negative total demand");
    return total * price(model, total);
}

double valuation(double alpha, double q) {
    if (q < 0.0) throw std::domain_error("valuation: negative consumption");
    return alpha * std::log1p(q);
}

double marginal_valuation(double alpha, double q) {
    if (q < 0.0) throw std::domain_error("marginal_valuation: negative consumption");
    return alpha / (1.0 + q);
}

double inverse_marginal(double alpha, double level) {
    if (level <= 0.0) return std::numeric_limits<double>::infinity();
    double q = alpha / level - 1.0;
    return q > 0.0 ? q : 0.0;
}

double surplus_U(const Scenario& s, int i, int k, const Vector& q_col) {
    if (i < 0 || i >= s.n_consumers) throw std::out_of_range("surplus_U: consumer index");
    if (k < 0 || k >= s.n_periods) throw std::out_of_range("surplus_U: period index");
    if (q_col.size() != s.n_consumers)
        throw std::invalid_argument("surplus_U: q_col size mismatch");
    const double total = q_col.sum();
    return valuation(s.alpha(i, k), q_col(i)) - q_col(i) * price(s.price, total);
}

double aggregate_surplus(const Scenario& s, const DemandProfile& profile) {
    if (profile.n_consumers() != s.n_consumers || profile.n_periods() != s.n_periods)
        throw std::invalid_argument("aggregate_surplus: profile shape mismatch");
    double sum = 0.0;
    for (int k = 0; k < s.n_periods; ++k) {
        const Vector col = profile.q.col(k);
        const double total = col.sum();
        const double p = price(s.price, total);
        for (int i = 0; i < s.n_consumers; ++i)
            sum += valuation(s.alpha(i, k), col(i)) - col(i) * p;
    }
    return sum;
}

namespace {

std::string cell(int i, int k) {
    std::ostringstream os;
    os << " (consumer " << i + 1 << ", period " << k + 1 << ")";
    return os.str();
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> out;
    if (s.n_consumers < 1) out.push_back("n_consumers must be at least 1");
    if (s.n_periods < 1) out.push_back("n_periods must be at least 1");
    if (!(s.price.beta > 0.0)) out.push_back("beta must be positive");
    if (s.price.b < 0.0) out.push_back("b must be nonnegative");
    if (s.valuations.alpha.rows() != s.n_consumers ||
        s.valuations.alpha.cols() != s.n_periods) {
        out.push_back("alpha matrix must be n_consumers x n_periods");
        return out;  // shape-dependent checks below would be meaningless
    }
    if (s.capacity.size() != s.n_consumers) {
        out.push_back("capacity must have one entry per consumer");
        return out;
    }
    for (int i = 0; i < s.n_consumers; ++i) {
        if (!(s.capacity(i) > 0.0))
            out.push_back("capacity must be positive (consumer " + std::to_string(i + 1) + ")");
        for (int k = 0; k < s.n_periods; ++k) {
            if (!(s.alpha(i, k) > 0.0))
                out.push_back("alpha must be positive" + cell(i, k));
            else if (s.alpha(i, k) < s.price.b)
                out.push_back("marginal valuation at zero is below the price intercept" + cell(i, k));
        }
    }
    auto check_bounds_shape = [&](const std::optional<Matrix>& m, const char* name) {
        if (m && (m->rows() != s.n_consumers || m->cols() != s.n_periods))
            out.push_back(std::string(name) + " must be n_consumers x n_periods");
        return !m || (m->rows() == s.n_consumers && m->cols() == s.n_periods);
    };
    const bool lo_ok = check_bounds_shape(s.lower_bounds, "lower_bounds");
    const bool hi_ok = check_bounds_shape(s.upper_bounds, "upper_bounds");
    if (lo_ok && hi_ok) {
        for (int i = 0; i < s.n_consumers; ++i)
            for (int k = 0; k < s.n_periods; ++k) {
                const double lo = s.lower(i, k);
                const double hi = s.upper(i, k);
                if (lo < 0.0) out.push_back("lower bound must be nonnegative" + cell(i, k));
                if (hi < lo) out.push_back("upper bound below lower bound" + cell(i, k));
                if (s.upper_bounds && s.capacity.size() == s.n_consumers &&
                    hi > s.capacity(i))
                    out.push_back("upper bound exceeds daily capacity" + cell(i, k));
            }
    }
    return out;
}

std::vector<std::string> validate_profile(const Scenario& s, const DemandProfile& p) {
    std::vector<std::string> out;
    if (p.n_consumers() != s.n_consumers || p.n_periods() != s.n_periods) {
        out.push_back("profile must be n_consumers x n_periods");
        return out;
    }
    for (int i = 0; i < s.n_consumers; ++i) {
        for (int k = 0; k < s.n_periods; ++k)
            if (p.q(i, k) < 0.0) out.push_back("negative consumption" + cell(i, k));
        if (s.capacity.size() == s.n_consumers &&
            p.q.row(i).sum() > s.capacity(i) + 1e-9)
            out.push_back("daily consumption exceeds capacity (consumer " +
                          std::to_string(i + 1) + ")");
    }
    return out;
}

}  // namespace drmech
