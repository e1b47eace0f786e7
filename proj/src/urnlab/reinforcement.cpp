#include "urnlab/reinforcement.hpp"

#include <algorithm>
#include <cmath>

#include "urnlab/descriptor.hpp"
#include "urnlab/error.hpp"

namespace urnlab {

const char* to_string(Smoothness s) noexcept {
  switch (s) {
    case Smoothness::Holder: return "holder";
    case Smoothness::C1: return "C1";
    case Smoothness::C2: return "C2";
  }
  return "unknown";
}

double HessianBounds::max() const { return std::max({m11, m12, m22}); }

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double vertex_gradient_norm(double gx0, double gy0, double gxx, double gxy, double gyx,
                            double gyy) {
  // Gradient is affine in (x, y); its norm is convex, so the sup sits at a vertex.
  double best = 0.0;
  for (auto [x, y] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
    const double gx = gx0 + gxx * x + gxy * y;
    const double gy = gy0 + gyx * x + gyy * y;
    best = std::max(best, std::hypot(gx, gy));
  }
  return best;
}

}  // namespace

ReinforcementSpec ReinforcementSpec::constant(double c) {
  ReinforcementSpec s;
  s.kind_ = Kind::Constant;
  s.c_[0] = c;
  s.name_ = "constant";
  s.descriptor_ = "kind=constant c=" + format_number(c);
  s.smoothness_.level = Smoothness::C2;
  s.smoothness_.holder_constant = 0.0;
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::affine(double c0, double ax, double ay) {
  ReinforcementSpec s;
  s.kind_ = Kind::Affine;
  s.c_[0] = c0;
  s.c_[1] = ax;
  s.c_[2] = ay;
  s.name_ = "affine";
  s.descriptor_ = "kind=affine c0=" + format_number(c0) + " ax=" + format_number(ax) +
                  " ay=" + format_number(ay);
  s.smoothness_.level = Smoothness::C2;
  s.smoothness_.holder_constant = std::hypot(ax, ay);
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::quadratic(double c0, double cx, double cy, double cxx,
                                               double cxy, double cyy) {
  ReinforcementSpec s;
  s.kind_ = Kind::Quadratic;
  s.c_[0] = c0;
  s.c_[1] = cx;
  s.c_[2] = cy;
  s.c_[3] = cxx;
  s.c_[4] = cxy;
  s.c_[5] = cyy;
  s.name_ = "quadratic";
  s.descriptor_ = "kind=quadratic c0=" + format_number(c0) + " cx=" + format_number(cx) +
                  " cy=" + format_number(cy) + " cxx=" + format_number(cxx) +
                  " cxy=" + format_number(cxy) + " cyy=" + format_number(cyy);
  s.smoothness_.level = Smoothness::C2;
  s.smoothness_.holder_constant = vertex_gradient_norm(cx, cy, 2 * cxx, cxy, cxy, 2 * cyy);
  s.smoothness_.hessian = {2 * std::abs(cxx), std::abs(cxy), 2 * std::abs(cyy)};
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::logistic(double slope, double bias) {
  ReinforcementSpec s;
  s.kind_ = Kind::Logistic;
  s.c_[0] = slope;
  s.c_[1] = bias;
  s.name_ = "logistic";
  s.descriptor_ = "kind=logistic s=" + format_number(slope) + " b=" + format_number(bias);
  s.smoothness_.level = Smoothness::C2;
  // sup sigmoid' = 1/4, sup |sigmoid''| = 1/(6 sqrt 3).
  s.smoothness_.holder_constant = std::sqrt(2.0) * std::abs(slope) / 4.0;
  const double m = slope * slope / (6.0 * std::sqrt(3.0));
  s.smoothness_.hessian = {m, m, m};
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::holder_power(double scale, double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0))
    raise(ErrorCode::InvalidArgument, "holder exponent must lie in (0, 1]");
  ReinforcementSpec s;
  s.kind_ = Kind::HolderPower;
  s.c_[0] = scale;
  s.c_[1] = exponent;
  s.name_ = "holder";
  s.descriptor_ = "kind=holder s=" + format_number(scale) + " alpha=" + format_number(exponent);
  s.smoothness_.level = Smoothness::Holder;
  s.smoothness_.holder_constant = std::abs(scale);
  s.smoothness_.holder_exponent = exponent;
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::c1_power(double c0, double scale) {
  ReinforcementSpec s;
  s.kind_ = Kind::C1Power;
  s.c_[0] = c0;
  s.c_[1] = scale;
  s.name_ = "c1-power";
  s.descriptor_ = "kind=c1-power c0=" + format_number(c0) + " s=" + format_number(scale);
  s.smoothness_.level = Smoothness::C1;
  s.smoothness_.holder_constant = 1.5 * std::abs(scale);
  // |sqrt(x1) - sqrt(x2)| <= sqrt|x1 - x2| and |x1 - x2| <= min(delta, 1).
  s.smoothness_.gradient_modulus = [scale](double delta) {
    return 1.5 * std::abs(scale) * std::sqrt(std::min(delta, 1.0));
  };
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::custom(std::string name, Function f,
                                            SmoothnessInfo smoothness,
                                            GradientFunction gradient) {
  if (!f) raise(ErrorCode::InvalidArgument, "custom reinforcement needs a function");
  ReinforcementSpec s;
  s.kind_ = Kind::Custom;
  s.custom_ = std::move(f);
  s.custom_gradient_ = std::move(gradient);
  s.smoothness_ = std::move(smoothness);
  s.name_ = std::move(name);
  s.descriptor_ = "kind=custom name=" + s.name_;
  s.validate_range();
  return s;
}

ReinforcementSpec ReinforcementSpec::parse(std::string_view descriptor) {
  const DescriptorArgs args(descriptor);
  const std::string& kind = args.kind();
  if (kind == "constant") {
    args.allow_only({"c"});
    return constant(args.number("c", 0.5));
  }
  if (kind == "affine") {
    args.allow_only({"c0", "a", "ax", "ay"});
    const double a = args.number("a", 0.0);
    if (args.has("a") && (args.has("ax") || args.has("ay")))
      raise(ErrorCode::InvalidArgument, "kind=affine takes either a or ax/ay");
    return affine(args.number("c0", 0.5), args.number("ax", a), args.number("ay", -a));
  }
  if (kind == "quadratic") {
    args.allow_only({"c0", "cx", "cy", "cxx", "cxy", "cyy"});
    return quadratic(args.number("c0", 0.0), args.number("cx", 0.0), args.number("cy", 0.0),
                     args.number("cxx", 0.0), args.number("cxy", 0.0), args.number("cyy", 0.0));
  }
  if (kind == "logistic") {
    args.allow_only({"s", "b"});
    return logistic(args.number("s", 1.0), args.number("b", 0.0));
  }
  if (kind == "holder") {
    args.allow_only({"s", "alpha"});
    return holder_power(args.number("s", 1.0), args.number("alpha", 0.5));
  }
  if (kind == "c1-power") {
    args.allow_only({"c0", "s"});
    return c1_power(args.number("c0", 0.0), args.number("s", 1.0));
  }
  raise(ErrorCode::InvalidArgument, "unknown reinforcement kind '" + kind + "'");
}

double ReinforcementSpec::eval_slow(double x, double y) const {
  switch (kind_) {
    case Kind::Logistic: return sigmoid(c_[0] * (x - y) + c_[1]);
    case Kind::HolderPower: return c_[0] * std::pow(x, c_[1]);
    case Kind::C1Power: return c_[0] + c_[1] * x * std::sqrt(x);
    case Kind::Custom: return custom_(x, y);
    default: return f(x, y);
  }
}

std::optional<Gradient> ReinforcementSpec::analytic_gradient(double x, double y) const {
  switch (kind_) {
    case Kind::Constant: return Gradient{0.0, 0.0};
    case Kind::Affine: return Gradient{c_[1], c_[2]};
    case Kind::Quadratic:
      return Gradient{c_[1] + 2 * c_[3] * x + c_[4] * y, c_[2] + c_[4] * x + 2 * c_[5] * y};
    case Kind::Logistic: {
      const double sg = sigmoid(c_[0] * (x - y) + c_[1]);
      const double d = sg * (1.0 - sg) * c_[0];
      return Gradient{d, -d};
    }
    case Kind::C1Power: return Gradient{1.5 * c_[1] * std::sqrt(x), 0.0};
    case Kind::HolderPower: return std::nullopt;
    case Kind::Custom:
      if (custom_gradient_) return custom_gradient_(x, y);
      return std::nullopt;
  }
  return std::nullopt;
}

void ReinforcementSpec::validate_range() const {
  constexpr int kGrid = 200;
  for (int i = 0; i <= kGrid; ++i)
    for (int j = 0; i + j <= kGrid; ++j) {
      const double v = f(i / double(kGrid), j / double(kGrid));
      if (!(v >= 0.0 && v <= 1.0))
        raise(ErrorCode::ReinforcementRange,
              descriptor_ + " takes value " + format_number(v) + " at (" +
                  format_number(i / double(kGrid)) + ", " + format_number(j / double(kGrid)) +
                  "), outside [0, 1]");
    }
}

std::string ReinforcementSpec::annotation() const {
  const auto& sm = smoothness_;
  std::string out = std::string(to_string(sm.level)) + "; Hoelder constant of F " +
                    format_number(sm.holder_constant) + " with exponent " +
                    format_number(sm.holder_exponent);
  if (sm.level == Smoothness::C2)
    out += "; Hessian bounds (" + format_number(sm.hessian.m11) + ", " +
           format_number(sm.hessian.m12) + ", " + format_number(sm.hessian.m22) + ")";
  if (sm.level == Smoothness::C1)
    out += sm.gradient_modulus ? "; declared gradient modulus" : "; no declared gradient modulus";
  return out;
}

std::vector<CatalogEntry> reinforcement_catalog() {
  return {
      {"constant", "kind=constant c=0.5",
       "C2 with zero derivatives; alpha*=beta*=0 at every root, so the Gaussian regime with "
       "covariance Gamma applies; contraction margin 0"},
      {"affine", "kind=affine a=0.45 (or c0=, ax=, ay=)",
       "C2, zero Hessian; margin (q1+q2)|2p-1|max(|ax|,|ay|) on g; with p=1, q1=q2 and "
       "ax=-ay=a the root has kappa = 2 q1 a"},
      {"quadratic", "kind=quadratic c0=0 cx=0 cy=0 cxx=1 cxy=0 cyy=0",
       "C2 with Hessian bounds (2|cxx|, |cxy|, 2|cyy|); x^2 gives the hypergeometric gap example"},
      {"logistic", "kind=logistic s=1 b=0",
       "C2, F = sigmoid(s(x-y)+b); Lipschitz sqrt(2)|s|/4, Hessian bounds s^2/(6 sqrt 3); "
       "contraction on g when (q1+q2)|2p-1||s|/4 < 1"},
      {"holder", "kind=holder s=1 alpha=0.5",
       "Hoelder only, F = s x^alpha; supports the Hoelder bound, no gradient"},
      {"c1-power", "kind=c1-power c0=0 s=1",
       "C1 not C2, F = c0 + s x^{3/2}; gradient modulus 1.5|s| sqrt(min(delta,1))"},
  };
}

std::vector<ReinforcementSpec> builtin_reinforcement_samples() {
  return {ReinforcementSpec::constant(0.5),
          ReinforcementSpec::affine(0.5, 0.45, -0.45),
          ReinforcementSpec::quadratic(0.0, 0.0, 0.0, 1.0, 0.0, 0.0),
          ReinforcementSpec::logistic(3.0, 0.0),
          ReinforcementSpec::holder_power(1.0, 0.5),
          ReinforcementSpec::c1_power(0.0, 1.0)};
}

namespace {

SimplexPoint checked(SimplexPoint pt) {
  if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !in_simplex(pt))
    raise(ErrorCode::Domain, "point (" + format_number(pt.x) + ", " + format_number(pt.y) +
                                 ") is outside the simplex");
  pt.x = std::max(pt.x, 0.0);
  pt.y = std::max(pt.y, 0.0);
  if (pt.x + pt.y > 1.0) {
    const double excess = pt.x + pt.y - 1.0;
    if (pt.x >= pt.y) pt.x -= excess; else pt.y -= excess;
  }
  return pt;
}

// Derivative along (ex, ey) at pt, using only points inside the simplex.
std::optional<double> directional(const std::function<double(double, double)>& f,
                                  SimplexPoint pt, double ex, double ey, double h) {
  auto inside = [&](double t) { return in_simplex({pt.x + t * ex, pt.y + t * ey}, 0.0); };
  auto at = [&](double t) { return f(pt.x + t * ex, pt.y + t * ey); };
  if (inside(h) && inside(-h)) return (at(h) - at(-h)) / (2 * h);
  if (inside(2 * h)) return (-3 * at(0) + 4 * at(h) - at(2 * h)) / (2 * h);
  if (inside(-2 * h)) return (3 * at(0) - 4 * at(-h) + at(-2 * h)) / (2 * h);
  return std::nullopt;
}

}  // namespace

double eval_g(const ReinforcementSpec& spec, const ModelParams& params, SimplexPoint pt) {
  pt = checked(pt);
  return selection_probability(params.p, spec.f(pt.x, pt.y));
}

Gradient numeric_gradient(const ReinforcementSpec& spec, SimplexPoint pt, double h) {
  return numeric_gradient([&spec](double x, double y) { return spec.f(x, y); }, pt, h);
}

Gradient numeric_gradient(const std::function<double(double, double)>& f, SimplexPoint pt,
                          double h) {
  pt = checked(pt);
  auto dy = directional(f, pt, 0.0, 1.0, h);
  auto dx = directional(f, pt, 1.0, 0.0, h);
  // At the vertices (0,1) and (1,0) one axis has no room; go along the edge instead.
  if (!dx && dy) {
    if (auto edge = directional(f, pt, 1.0, -1.0, h)) dx = *edge + *dy;
  }
  if (!dy && dx) {
    if (auto edge = directional(f, pt, -1.0, 1.0, h)) dy = *edge + *dx;
  }
  if (!dx || !dy) raise(ErrorCode::Domain, "no finite-difference stencil fits at this point");
  return {*dx, *dy};
}

Gradient grad_g(const ReinforcementSpec& spec, const ModelParams& params, SimplexPoint pt) {
  if (spec.smoothness().level == Smoothness::Holder)
    raise(ErrorCode::Capability, spec.name() + " is Hoelder only and has no gradient");
  pt = checked(pt);
  auto analytic = spec.analytic_gradient(pt.x, pt.y);
  const Gradient gf = analytic ? *analytic : numeric_gradient(spec, pt);
  const double scale = 2.0 * params.p - 1.0;
  return {scale * gf.dx, scale * gf.dy};
}

double modulus_bound(const ReinforcementSpec& spec, const ModelParams& params, double delta) {
  if (!(delta > 0.0)) raise(ErrorCode::InvalidArgument, "delta must be positive");
  const double scale = std::abs(2.0 * params.p - 1.0);
  const auto& sm = spec.smoothness();
  switch (sm.level) {
    case Smoothness::C2: {
      // The Frobenius norm of the Hessian bounds the Lipschitz constant of the
      // gradient; distances in the simplex never exceed sqrt 2.
      const auto& m = sm.hessian;
      const double lip = std::sqrt(m.m11 * m.m11 + 2 * m.m12 * m.m12 + m.m22 * m.m22);
      return scale * lip * std::min(delta, std::sqrt(2.0));
    }
    case Smoothness::C1:
      if (!sm.gradient_modulus)
        raise(ErrorCode::Capability, spec.name() + " declares no gradient modulus");
      return scale * sm.gradient_modulus(delta);
    case Smoothness::Holder:
      raise(ErrorCode::Capability, spec.name() + " is Hoelder only and has no gradient");
  }
  return 0.0;
}

double holder_constant_g(const ReinforcementSpec& spec, const ModelParams& params) {
  return std::abs(2.0 * params.p - 1.0) * spec.smoothness().holder_constant;
}

HessianBounds hessian_bounds_g(const ReinforcementSpec& spec, const ModelParams& params) {
  if (spec.smoothness().level != Smoothness::C2)
    raise(ErrorCode::Capability, spec.name() + " declares no Hessian bounds");
  const double scale = std::abs(2.0 * params.p - 1.0);
  const auto& m = spec.smoothness().hessian;
  return {scale * m.m11, scale * m.m12, scale * m.m22};
}

}  // namespace urnlab
