#pragma once

// Second-order forward jets: value, gradient and Hessian propagated together.
// Two derivative orders are exactly what Christoffel symbols plus their first
// derivatives (hence curvature) require.

#include <Eigen/Dense>

#include <stdexcept>

namespace intercurve {

struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  Jet2() = default;
  Jet2(double v, Eigen::VectorXd g, Eigen::MatrixXd h)
      : value(v), grad(std::move(g)), hess(std::move(h)) {}

  int vars() const { return static_cast<int>(grad.size()); }

  static Jet2 constant(double c, int n) {
    return {c, Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Zero(n, n)};
  }
  static Jet2 variable(double x, int index, int n) {
    Jet2 j = constant(x, n);
    j.grad[index] = 1.0;
    return j;
  }

  Jet2 operator-() const { return {-value, -grad, -hess}; }

  friend Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.value + b.value, a.grad + b.grad, a.hess + b.hess};
  }
  friend Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.value - b.value, a.grad - b.grad, a.hess - b.hess};
  }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    Eigen::MatrixXd cross = a.grad * b.grad.transpose();
    return {a.value * b.value, a.value * b.grad + b.value * a.grad,
            a.value * b.hess + b.value * a.hess + cross + cross.transpose()};
  }
  friend Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }
  friend Jet2 operator*(const Jet2& a, double s) { return s * a; }
  friend Jet2 operator+(const Jet2& a, double s) { return {a.value + s, a.grad, a.hess}; }
  friend Jet2 operator+(double s, const Jet2& a) { return a + s; }

  // Quotient rule, solved from a = q*b:
  //   q' = (a' - q b')/b,  q'' = (a'' - q' b'^T - b' q'^T - q b'')/b.
  friend Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.value == 0.0) throw std::domain_error("jet division by zero");
    const double q = a.value / b.value;
    const Eigen::VectorXd qg = (a.grad - q * b.grad) / b.value;
    Eigen::MatrixXd cross = qg * b.grad.transpose();
    const Eigen::MatrixXd qh = (a.hess - cross - cross.transpose() - q * b.hess) / b.value;
    return {q, qg, qh};
  }

  // f(this) for scalar f with derivatives df, ddf at this->value.
  Jet2 compose(double f, double df, double ddf) const {
    return {f, df * grad, df * hess + ddf * (grad * grad.transpose())};
  }
};

}  // namespace intercurve
