#pragma once

#include <string>

namespace rc {

// Parameter set shared by the critical FK, six-vertex and
// Ashkin-Teller-random-cluster models.  Everything is a function of the
// cluster weight q > 4:
//
//   beta_c = ln(1+sqrt(q)),        p_c = sqrt(q)/(sqrt(q)+1) = 1 - e^{-beta_c},
//   sqrt(q) = e^l + e^{-l},        c   = e^{l/2} + e^{-l/2} = coth(2J),
//   c_b = e^{l/2},                 sinh(2J) = e^{-2U},
//
// with l = lambda > 0.  The constructor validates each identity to 1e-12
// relative so downstream code never re-derives them.
struct ModelParams {
  double q = 0.0;
  double beta_c = 0.0;
  double p_c = 0.0;
  double lambda = 0.0;
  double c = 0.0;    // bulk six-vertex weight, > 2
  double c_b = 0.0;  // boundary six-vertex weight, > 1
  double J = 0.0;
  double U = 0.0;

  // ATRC edge weights w_tau = e^{2U}(e^{2J}-e^{-2J}), w_tautau = e^{2(U-J)}-1.
  // On the self-dual curve these equal 2 and c-2; both routes are computed
  // and compared at construction.
  double w_tau = 0.0;
  double w_tautau = 0.0;

  // Throws std::domain_error for q <= 4 (continuous-transition regime,
  // unsupported) and std::logic_error if any identity fails validation.
  static ModelParams from_q(double q);

  std::string to_json() const;
  static ModelParams from_json(const std::string& text);
};

// |sinh(2J) - e^{-2U}| <= tol
bool check_selfdual(double J, double U, double tol);

}  // namespace rc
