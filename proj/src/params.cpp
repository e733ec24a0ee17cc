#include "rc/params.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rc {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::logic_error(std::string("parameter identity failed: ") + what);
}

bool close_rel(double a, double b, double tol) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

}  // namespace

ModelParams ModelParams::from_q(double q) {
  if (!(q > 4.0)) {
    throw std::domain_error(
        "ModelParams::from_q: q must be > 4 (continuous-transition regime q <= 4 is unsupported)");
  }
  ModelParams p;
  p.q = q;
  const double rq = std::sqrt(q);
  p.beta_c = std::log1p(rq);
  p.p_c = rq / (rq + 1.0);
  p.lambda = std::acosh(rq / 2.0);
  p.c = 2.0 * std::cosh(p.lambda / 2.0);
  p.c_b = std::exp(p.lambda / 2.0);
  // c = coth(2J)  =>  2J = artanh(1/c)
  p.J = std::atanh(1.0 / p.c) / 2.0;
  p.U = -std::log(std::sinh(2.0 * p.J)) / 2.0;
  p.w_tau = std::exp(2.0 * p.U) * (std::exp(2.0 * p.J) - std::exp(-2.0 * p.J));
  p.w_tautau = std::exp(2.0 * (p.U - p.J)) - 1.0;

  const double tol = 1e-12;
  require(close_rel(p.p_c, 1.0 - std::exp(-p.beta_c), tol), "p_c = 1 - e^{-beta_c}");
  require(close_rel(rq, std::exp(p.lambda) + std::exp(-p.lambda), tol), "sqrt(q) = 2 cosh(lambda)");
  require(close_rel(p.c, std::exp(p.lambda / 2.0) + std::exp(-p.lambda / 2.0), tol),
          "c = 2 cosh(lambda/2)");
  require(close_rel(p.c * p.c, rq + 2.0, tol), "c^2 = sqrt(q) + 2");
  require(close_rel(p.c_b + 1.0 / p.c_b, p.c, tol), "c_b + 1/c_b = c");
  require(close_rel(p.c, 1.0 / std::tanh(2.0 * p.J), tol), "c = coth(2J)");
  require(close_rel(std::sinh(2.0 * p.J), std::exp(-2.0 * p.U), tol), "sinh(2J) = e^{-2U}");
  require(close_rel(std::sinh(2.0 * p.J), 1.0 / std::sqrt(p.c * p.c - 1.0), tol),
          "sinh(2J) = 1/sqrt(c^2-1)");
  require(close_rel(p.w_tau, 2.0, tol), "w_tau = 2 on the self-dual curve");
  require(close_rel(p.w_tautau, p.c - 2.0, tol), "w_tautau = c - 2 on the self-dual curve");
  require(p.U > p.J && p.J > 0.0, "0 < J < U");
  return p;
}

bool check_selfdual(double J, double U, double tol) {
  return std::fabs(std::sinh(2.0 * J) - std::exp(-2.0 * U)) <= tol;
}

std::string ModelParams::to_json() const {
  nlohmann::json j{{"q", q},           {"beta_c", beta_c}, {"p_c", p_c}, {"lambda", lambda},
                   {"c", c},           {"c_b", c_b},       {"J", J},     {"U", U},
                   {"w_tau", w_tau},   {"w_tautau", w_tautau}};
  return j.dump();
}

ModelParams ModelParams::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ModelParams p = from_q(j.at("q").get<double>());
  return p;
}

}  // namespace rc
