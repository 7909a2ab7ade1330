#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace segsolve {

// Pass/fail line of a validation report.
struct CheckItem {
  std::string name;
  bool passed = true;
  bool boundary = false;  // passed only under an accepted boundary relaxation
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckItem> items;
  bool passed() const;
  bool boundary() const;
  std::string summary() const;  // failing items, one per line
};

struct Uniform {};
struct SingleKink {
  double x = 0.5;
  double y = 0.5;
};
struct PiecewiseLinear {
  std::vector<std::pair<double, double>> knots;
};
struct Power {
  double alpha = 1.0;
};
using CdfSpec = std::variant<Uniform, SingleKink, PiecewiseLinear, Power>;

ValidationReport validate(const CdfSpec& spec);

// Weakly concave signal distribution on [0,1]. Immutable once built; the
// constructor throws std::invalid_argument when validate() fails.
class SignalCdf {
 public:
  SignalCdf();  // uniform
  explicit SignalCdf(CdfSpec spec);

  static SignalCdf uniform() { return SignalCdf(); }
  static SignalCdf single_kink(double x, double y) { return SignalCdf(SingleKink{x, y}); }
  static SignalCdf piecewise(std::vector<std::pair<double, double>> knots) {
    return SignalCdf(PiecewiseLinear{std::move(knots)});
  }
  static SignalCdf power(double alpha) { return SignalCdf(Power{alpha}); }

  const CdfSpec& spec() const { return spec_; }
  bool is_uniform() const;

  // F(x); throws std::domain_error outside [0,1].
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
  // F extended linearly beyond 1 with slope F'(1-) and by 0 below 0.
  // Diagnostic use only.
  double eval_extended(double x) const;
  // Smallest x with F(x) = y; throws std::domain_error when y is outside
  // [0,1] or lies on a flat segment below 1.
  double inverse(double y) const;

  std::string describe() const;

 private:
  CdfSpec spec_;
  std::vector<std::pair<double, double>> knots_;  // empty for Power
  double alpha_ = 1.0;
};

// All single-kink distributions on the grid {step, 2 step, ..., 1 - step}
// with y >= x, ordered by (x, y). On-diagonal kinks are the uniform law.
// Throws std::invalid_argument if step does not divide 1.
std::vector<SignalCdf> enumerate_single_kink(double step);

}  // namespace segsolve
