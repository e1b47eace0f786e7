#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "urnlab/model.hpp"

namespace urnlab {

enum class Smoothness { Holder, C1, C2 };

const char* to_string(Smoothness s) noexcept;

struct Gradient {
  double dx = 0.0;
  double dy = 0.0;
};

/// Sup bounds on |d2F/dx2|, |d2F/dxdy|, |d2F/dy2| over the simplex.
struct HessianBounds {
  double m11 = 0.0;
  double m12 = 0.0;
  double m22 = 0.0;
  double max() const;
};

/// Declared regularity of F. Every spec carries a Hoelder pair (Lipschitz
/// specs use exponent 1); C1 specs may declare the modulus of continuity of
/// the gradient, C2 specs carry Hessian bounds.
struct SmoothnessInfo {
  Smoothness level = Smoothness::Holder;
  double holder_constant = 1.0;
  double holder_exponent = 1.0;
  std::function<double(double)> gradient_modulus;  // delta -> omega(grad F; delta)
  HessianBounds hessian;
};

/// Reinforcement function F on the simplex with declared smoothness.
/// Immutable after construction.
class ReinforcementSpec {
 public:
  using Function = std::function<double(double, double)>;
  using GradientFunction = std::function<Gradient(double, double)>;

  static ReinforcementSpec constant(double c);
  static ReinforcementSpec affine(double c0, double ax, double ay);
  static ReinforcementSpec quadratic(double c0, double cx, double cy, double cxx, double cxy,
                                     double cyy);
  /// F = sigmoid(slope (x - y) + bias).
  static ReinforcementSpec logistic(double slope, double bias);
  /// F = scale x^exponent, Hoelder only when exponent < 1.
  static ReinforcementSpec holder_power(double scale, double exponent);
  /// F = c0 + scale x^{3/2}: C1 with gradient modulus 1.5 scale sqrt(min(delta, 1)).
  static ReinforcementSpec c1_power(double c0, double scale);
  static ReinforcementSpec custom(std::string name, Function f, SmoothnessInfo smoothness,
                                  GradientFunction gradient = {});

  /// Build from "kind=affine a=0.45"-style text (whitespace or comma separated).
  static ReinforcementSpec parse(std::string_view descriptor);

  double f(double x, double y) const {
    switch (kind_) {
      case Kind::Constant: return c_[0];
      case Kind::Affine: return c_[0] + c_[1] * x + c_[2] * y;
      case Kind::Quadratic:
        return c_[0] + c_[1] * x + c_[2] * y + c_[3] * x * x + c_[4] * x * y + c_[5] * y * y;
      default: return eval_slow(x, y);
    }
  }
  std::optional<Gradient> analytic_gradient(double x, double y) const;

  const SmoothnessInfo& smoothness() const { return smoothness_; }
  const std::string& name() const { return name_; }
  /// Canonical descriptor accepted by parse().
  const std::string& descriptor() const { return descriptor_; }
  /// Hypotheses this spec satisfies, for reports and the catalog.
  std::string annotation() const;

 private:
  enum class Kind { Constant, Affine, Quadratic, Logistic, HolderPower, C1Power, Custom };

  ReinforcementSpec() = default;
  double eval_slow(double x, double y) const;
  void validate_range() const;

  Kind kind_ = Kind::Constant;
  double c_[6] = {0, 0, 0, 0, 0, 0};
  Function custom_;
  GradientFunction custom_gradient_;
  SmoothnessInfo smoothness_;
  std::string name_;
  std::string descriptor_;
};

struct CatalogEntry {
  std::string name;
  std::string example;
  std::string notes;
};

std::vector<CatalogEntry> reinforcement_catalog();
/// One representative of each built-in kind, for sweeps.
std::vector<ReinforcementSpec> builtin_reinforcement_samples();

double eval_g(const ReinforcementSpec& spec, const ModelParams& params, SimplexPoint pt);
Gradient grad_g(const ReinforcementSpec& spec, const ModelParams& params, SimplexPoint pt);
/// Finite-difference gradient of F (step 1e-5, one-sided near the boundary).
Gradient numeric_gradient(const ReinforcementSpec& spec, SimplexPoint pt, double h = 1e-5);
/// Same stencils for any function on the simplex.
Gradient numeric_gradient(const std::function<double(double, double)>& f, SimplexPoint pt,
                          double h = 1e-5);
/// Certified upper bound on omega(grad g; delta).
double modulus_bound(const ReinforcementSpec& spec, const ModelParams& params, double delta);
/// Hoelder constant of g (Euclidean norm) and its exponent.
double holder_constant_g(const ReinforcementSpec& spec, const ModelParams& params);
HessianBounds hessian_bounds_g(const ReinforcementSpec& spec, const ModelParams& params);

}  // namespace urnlab
