#pragma once

// Jet-evaluable scalar fields on a chart. Parsed expressions are one
// implementation; glued metrics and extracted perturbation tensors compose
// further fields from them while keeping all derivatives exact.

#include "intercurve/expr.hpp"
#include "intercurve/jet.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace intercurve {

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual Jet2 jet(const Eigen::VectorXd& point) const = 0;
  virtual double value(const Eigen::VectorXd& point) const { return jet(point).value; }
};

using FieldPtr = std::shared_ptr<const ScalarField>;

class ExpressionField final : public ScalarField {
 public:
  explicit ExpressionField(Expression e) : expr_(std::move(e)) {}
  Jet2 jet(const Eigen::VectorXd& p) const override { return expr_.jet(p); }
  double value(const Eigen::VectorXd& p) const override { return expr_.value(p); }
  const Expression& expression() const { return expr_; }

 private:
  Expression expr_;
};

class FunctionField final : public ScalarField {
 public:
  explicit FunctionField(std::function<Jet2(const Eigen::VectorXd&)> fn) : fn_(std::move(fn)) {}
  Jet2 jet(const Eigen::VectorXd& p) const override { return fn_(p); }

 private:
  std::function<Jet2(const Eigen::VectorXd&)> fn_;
};

class ConstantField final : public ScalarField {
 public:
  ConstantField(double v, int vars) : v_(v), vars_(vars) {}
  Jet2 jet(const Eigen::VectorXd&) const override { return Jet2::constant(v_, vars_); }
  double value(const Eigen::VectorXd&) const override { return v_; }

 private:
  double v_;
  int vars_;
};

inline FieldPtr make_expression_field(const std::string& source, int dim) {
  return std::make_shared<ExpressionField>(Expression::parse(source, chart_variables(dim)));
}

inline FieldPtr make_constant_field(double v, int dim) {
  return std::make_shared<ConstantField>(v, dim);
}

inline FieldPtr make_function_field(std::function<Jet2(const Eigen::VectorXd&)> fn) {
  return std::make_shared<FunctionField>(std::move(fn));
}

}  // namespace intercurve
