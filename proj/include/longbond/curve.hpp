/**
 * @file curve.hpp
 * @brief Initial discount-bond curve schemes and the forward curve F(t) derived from them
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "longbond/errors.hpp"

namespace longbond {

/// One observed discount bond: maturity in years, price in (0,1]
struct CurvePoint {
    double maturity;
    double price;
};

enum class CurveScheme { LogLinear, PowerLaw, Cantor };

inline const char* scheme_name(CurveScheme s) {
    switch (s) {
        case CurveScheme::LogLinear: return "loglinear";
        case CurveScheme::PowerLaw: return "powerlaw";
        case CurveScheme::Cantor: return "cantor";
    }
    return "?";
}

namespace detail {

/// Finite-depth iterate of the middle-thirds Cantor function on [0,1].
/// Exact on every plateau reached within `depth` levels; the remainder is
/// the linear seed C_0(x)=x, uniformly within 2^-depth of the limit.
inline double cantor_function(double x, int depth) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double acc = 0.0;
    double w = 0.5;
    for (int k = 0; k < depth; ++k) {
        if (x < 1.0 / 3.0) {
            x *= 3.0;
        } else if (x <= 2.0 / 3.0) {
            return acc + w;  // plateau value is exact
        } else {
            acc += w;
            x = 3.0 * x - 2.0;
        }
        w *= 0.5;
    }
    return acc + 2.0 * w * x;
}

}  // namespace detail

/// Continuous, monotone non-increasing map T -> P(0,T) on [0, horizon]
/// with P(0,0) = 1. Immutable after construction; cheap to copy.
class InitialCurve {
    CurveScheme scheme_ = CurveScheme::PowerLaw;
    double horizon_ = 0.0;
    std::vector<double> maturities_;  // table scheme knots, ascending, first 0 last horizon
    std::vector<double> log_prices_;  // log P(0, maturities_[k]); log_prices_[0] = 0
    double a_ = 0.0, b_ = 0.0;        // power-law parameters
    int depth_ = 0;                   // cantor iteration depth
    bool strictly_decreasing_ = false;

    InitialCurve() = default;

    // index of the segment [m_k, m_{k+1}) containing T; horizon maps to the last segment
    std::size_t table_segment(double T) const {
        const auto it = std::upper_bound(maturities_.begin(), maturities_.end(), T);
        if (it == maturities_.begin()) return 0;
        std::size_t k = static_cast<std::size_t>(it - maturities_.begin()) - 1;
        return std::min(k, maturities_.size() - 2);
    }

    double table_log_discount(double T) const {
        const std::size_t k = table_segment(T);
        const double w = (T - maturities_[k]) / (maturities_[k + 1] - maturities_[k]);
        return log_prices_[k] + w * (log_prices_[k + 1] - log_prices_[k]);
    }

public:
    /// Table scheme, linear interpolation in log price between knots.
    /// Augments a leading (0,1) point when absent; rejects non-monotone
    /// prices, horizon mismatches, and out-of-range inputs.
    static InitialCurve from_table(std::vector<CurvePoint> points, double horizon) {
        if (points.empty()) throw EmptyData("curve table is empty");
        if (points.front().maturity > 0.0) {
            points.insert(points.begin(), CurvePoint{0.0, 1.0});
        }
        if (points.size() < 2) throw EmptyData("curve table needs a point beyond t=0");
        if (points.front().maturity != 0.0 || points.front().price != 1.0) {
            throw InvalidParameter("curve table must start at (0, 1)");
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (!(points[i].maturity >= 0.0)) throw InvalidParameter("negative maturity");
            if (!(points[i].price > 0.0)) throw InvalidParameter("price must be positive");
            if (i > 0 && !(points[i].maturity > points[i - 1].maturity)) {
                throw InvalidParameter("maturities must be strictly increasing");
            }
            // a rise anywhere (including past the leading (0,1) node, which
            // caps prices at 1) is a monotonicity violation, not a range error
            if (i > 0 && points[i].price > points[i - 1].price) {
                throw NonMonotoneData("price increases with maturity");
            }
        }
        if (std::fabs(points.back().maturity - horizon) > 1e-9) {
            throw HorizonMismatch("last maturity must equal the horizon");
        }
        InitialCurve c;
        c.scheme_ = CurveScheme::LogLinear;
        c.horizon_ = horizon;
        c.strictly_decreasing_ = true;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i > 0 && points[i].price == points[i - 1].price) c.strictly_decreasing_ = false;
            c.maturities_.push_back(points[i].maturity);
            c.log_prices_.push_back(std::log(points[i].price));
        }
        c.log_prices_[0] = 0.0;  // P(0,0) = 1 exactly
        return c;
    }

    /// Power-law forward curve F(t) = a (horizon - t)^b, so
    /// P(0,t) = exp(a (horizon-t)^b - a horizon^b)
    static InitialCurve power_law(double a, double b, double horizon) {
        if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("power_law: a and b must be > 0");
        if (!(horizon > 0.0)) throw InvalidParameter("power_law: horizon must be > 0");
        InitialCurve c;
        c.scheme_ = CurveScheme::PowerLaw;
        c.horizon_ = horizon;
        c.a_ = a;
        c.b_ = b;
        c.strictly_decreasing_ = true;
        return c;
    }

    /// Flat continuously-compounded rate: P(0,T) = exp(-c T). Identical to
    /// power_law(c, 1, horizon).
    static InitialCurve flat(double rate, double horizon) {
        return power_law(rate, 1.0, horizon);
    }

    /// F(t) = 1 - C(t) with C the Cantor function, horizon 1. Continuous and
    /// non-increasing but not absolutely continuous: no density exists.
    static InitialCurve cantor(int depth = 24) {
        if (depth < 1) throw InvalidParameter("cantor: depth must be >= 1");
        InitialCurve c;
        c.scheme_ = CurveScheme::Cantor;
        c.horizon_ = 1.0;
        c.depth_ = depth;
        c.strictly_decreasing_ = false;  // constant on every middle third
        return c;
    }

    CurveScheme scheme() const { return scheme_; }
    double horizon() const { return horizon_; }
    bool strictly_decreasing() const { return strictly_decreasing_; }
    bool absolutely_continuous() const { return scheme_ != CurveScheme::Cantor; }
    bool unbounded_density() const { return scheme_ == CurveScheme::PowerLaw && b_ < 1.0; }
    double power_a() const { return a_; }
    double power_b() const { return b_; }
    int cantor_depth() const { return depth_; }

    /// Interior interpolation knots (table scheme), for quadrature segmentation
    std::vector<double> interior_knots() const {
        std::vector<double> k;
        if (scheme_ == CurveScheme::LogLinear && maturities_.size() > 2) {
            k.assign(maturities_.begin() + 1, maturities_.end() - 1);
        }
        return k;
    }

    double log_discount(double T) const {
        if (!(T >= 0.0 && T <= horizon_ + 1e-12)) {
            throw InvalidParameter("curve evaluated outside [0, horizon]");
        }
        T = std::min(T, horizon_);
        switch (scheme_) {
            case CurveScheme::LogLinear:
                return table_log_discount(T);
            case CurveScheme::PowerLaw:
                return a_ * std::pow(horizon_ - T, b_) - a_ * std::pow(horizon_, b_);
            case CurveScheme::Cantor:
                return -detail::cantor_function(T, depth_);
        }
        return 0.0;
    }

    /// Exact density of the table scheme: minus the log-price slope of the
    /// segment containing T, right-continuous at knots
    double table_density(double T) const {
        const std::size_t k = table_segment(T);
        return (log_prices_[k] - log_prices_[k + 1]) / (maturities_[k + 1] - maturities_[k]);
    }

    /// P(0,T)
    double discount(double T) const { return std::exp(log_discount(T)); }
};

/// Nominal forward rate curve F(t) = log(P(0,t) / P(0,horizon)) and its
/// density f = -F' where the scheme admits one
class ForwardCurve {
    InitialCurve curve_;

public:
    explicit ForwardCurve(InitialCurve curve) : curve_(std::move(curve)) {}

    double horizon() const { return curve_.horizon(); }
    bool absolutely_continuous() const { return curve_.absolutely_continuous(); }
    bool unbounded_density() const { return curve_.unbounded_density(); }
    const InitialCurve& initial() const { return curve_; }

    /// F(t); F(horizon) = 0 exactly, F non-increasing, F >= 0
    double value(double t) const {
        switch (curve_.scheme()) {
            case CurveScheme::PowerLaw:
                return curve_.power_a() * std::pow(curve_.horizon() - t, curve_.power_b());
            case CurveScheme::Cantor:
                return 1.0 - detail::cantor_function(t, curve_.cantor_depth());
            case CurveScheme::LogLinear:
                return curve_.log_discount(t) - curve_.log_discount(curve_.horizon());
        }
        return 0.0;
    }

    /// Density f(t) with F(t) = integral of f over [t, horizon].
    ///
    /// Table scheme: piecewise constant, right-continuous at knots (the knot
    /// itself reports the right-limit f(t+); the horizon reports the last
    /// segment). Power-law with b < 1: unbounded near the horizon, evaluation
    /// within 1e-9 of it is refused.
    double density(double t) const {
        if (!curve_.absolutely_continuous()) {
            throw NotAbsolutelyContinuous("curve admits no forward density");
        }
        if (!(t >= 0.0 && t <= curve_.horizon() + 1e-12)) {
            throw InvalidParameter("density evaluated outside [0, horizon]");
        }
        if (curve_.scheme() == CurveScheme::PowerLaw) {
            const double a = curve_.power_a();
            const double b = curve_.power_b();
            const double rem = curve_.horizon() - t;
            if (b < 1.0 && rem < 1e-9) {
                throw UnboundedDensity("density blows up at the horizon for b < 1");
            }
            return a * b * std::pow(std::max(rem, 0.0), b - 1.0);
        }
        return curve_.table_density(std::min(t, curve_.horizon()));
    }
};

/// Parse CSV with exact header "maturity,price"
inline std::vector<CurvePoint> read_curve_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("curve CSV: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "maturity,price") throw IoError("curve CSV: header must be 'maturity,price'");
    std::vector<CurvePoint> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double m = 0.0, p = 0.0;
        char comma = 0;
        if (!(row >> m >> comma >> p) || comma != ',') {
            throw IoError("curve CSV: malformed row " + std::to_string(lineno));
        }
        points.push_back(CurvePoint{m, p});
    }
    if (points.empty()) throw IoError("curve CSV: no data rows");
    return points;
}

}  // namespace longbond
