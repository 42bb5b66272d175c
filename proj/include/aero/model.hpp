#pragma once

#include "aero/numerics/matrix.hpp"
#include "aero/plant.hpp"

namespace aero {

/// x' = A x + b u, y = cᵀ x with x = (θ, ω).
struct LinearModel {
  num::Matrix a;
  num::Vector b;
  num::Vector c;
};

/// x[k+1] = Ad x[k] + bd u[k], y[k] = cdᵀ x[k].
struct DiscreteModel {
  num::Matrix ad;
  num::Vector bd;
  num::Vector cd;
  double ts = 0.0;
};

/// Analytic Jacobian of the equations of motion at (θ0, ω = 0). The
/// imbalance term is constant and drops out.
LinearModel linearize(const PlantParams& params, double theta0 = 0.0);

/// Zero-order-hold sampling of a linear model.
DiscreteModel discretize(const LinearModel& model, double ts);

}  // namespace aero
