#include "aero/model.hpp"

#include <cmath>

#include "aero/numerics/linalg.hpp"

namespace aero {

LinearModel linearize(const PlantParams& p, double theta0) {
  return {num::Matrix{{0.0, 1.0}, {-p.c_theta * std::cos(theta0), -p.c_omega}},
          num::Vector{0.0, p.c_u}, num::Vector{1.0, 0.0}};
}

DiscreteModel discretize(const LinearModel& model, double ts) {
  auto pair = num::zoh_discretize(model.a, model.b, ts);
  return {std::move(pair.ad), std::move(pair.bd), model.c, ts};
}

}  // namespace aero
