#pragma once

#include "rtst/types.hpp"

namespace rtst {

struct SupportResult {
  double value = 0;
  ScenarioCertificate cert;
};

// Halfspace view {c_nominal + delta : A delta <= b, delta >= 0}; available
// for HPolytope, Budgeted and MultiBudget.
struct HalfspaceView {
  Vector c_nominal;
  Matrix A;
  Vector b;
};

int scenario_dim(const UncertaintySet& u);

// Nonempty, bounded, nonnegative; throws ValidationError naming the failure.
void validate_uncertainty(const UncertaintySet& u, int n);

// max_{c in U} c'y together with an attaining scenario.
SupportResult support_max(const UncertaintySet& u, const Vector& y);

// componentwise maxima max_{c in U} c_i
Vector coordinate_max(const UncertaintySet& u);

bool contains(const UncertaintySet& u, const Vector& c, double tol = 1e-7);

std::optional<HalfspaceView> halfspace_form(const UncertaintySet& u);

Vector vertex_centroid(const VPolytope& u);

}  // namespace rtst
