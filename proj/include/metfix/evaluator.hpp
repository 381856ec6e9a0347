#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "metfix/deficiency.hpp"

namespace metfix {

// Candidate deficiency bound g(a,b): non-negative, monotone in each
// argument. The correction construction only needs point evaluation plus,
// for step functions, the grid where jumps can occur.
class TdEvaluator {
 public:
  virtual ~TdEvaluator() = default;
  virtual double eval(double a, double b) const = 0;
  // Sorted jump grid when g is a step function of its first argument;
  // nullptr for continuous evaluators (forces bisection in feasibility
  // searches).
  virtual const std::vector<double>* step_grid() const { return nullptr; }
};

// Empirical deficiency table (raw or envelope mode, as constructed).
class TableTdEvaluator final : public TdEvaluator {
 public:
  explicit TableTdEvaluator(EmpiricalTD td) : td_(std::move(td)) {}
  double eval(double a, double b) const override { return td_.eval(a, b); }
  const std::vector<double>* step_grid() const override {
    return &td_.breakpoints;
  }
  const EmpiricalTD& table() const { return td_; }

 private:
  EmpiricalTD td_;
};

// Closed-form bound supplied as a callable, e.g. [](double a, double b)
// { return a + b; }.
class AnalyticTdEvaluator final : public TdEvaluator {
 public:
  explicit AnalyticTdEvaluator(std::function<double(double, double)> fn)
      : fn_(std::move(fn)) {}
  double eval(double a, double b) const override { return fn_(a, b); }

 private:
  std::function<double(double, double)> fn_;
};

}  // namespace metfix
