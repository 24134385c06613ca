/**
 * @file params.hpp
 * @brief Model parameters: volatility plus the calibrated curves
 */

#pragma once

#include <utility>

#include "longbond/curve.hpp"
#include "longbond/errors.hpp"

namespace longbond {

/// Everything the dynamics need: sigma and the initial/forward curves.
/// sigma = 1 is the special model; other values scale time as sigma^2 t.
struct ModelParams {
    double sigma;
    InitialCurve curve;
    ForwardCurve forward;

    double horizon() const { return curve.horizon(); }
    /// F(t), the nominal forward curve
    double F(double t) const { return forward.value(t); }
};

inline ModelParams make_model(double sigma, InitialCurve curve) {
    if (!(sigma > 0.0)) throw InvalidParameter("sigma must be > 0");
    ForwardCurve fwd(curve);
    return ModelParams{sigma, std::move(curve), std::move(fwd)};
}

}  // namespace longbond
