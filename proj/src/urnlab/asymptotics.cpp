#include "urnlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "urnlab/descriptor.hpp"

namespace urnlab {

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Critical: return "critical";
    case Regime::Superdiffusive: return "superdiffusive";
    case Regime::Gaussian: return "gaussian";
    case Regime::GaussianDegenerate: return "gaussian-degenerate";
    case Regime::GaussianJordan: return "gaussian-jordan";
  }
  return "unknown";
}

const char* to_string(Scaling s) noexcept {
  switch (s) {
    case Scaling::SqrtNOverLogN: return "sqrt(n/log n)";
    case Scaling::PowerRho: return "n^rho";
    case Scaling::SqrtN: return "sqrt(n)";
  }
  return "unknown";
}

double scale_factor(Scaling s, double rho, double n) {
  switch (s) {
    case Scaling::SqrtNOverLogN: return std::sqrt(n / std::log(n));
    case Scaling::PowerRho: return std::pow(n, rho);
    case Scaling::SqrtN: return std::sqrt(n);
  }
  return 1.0;
}

Regime classify_regime(const FixedPointReport& fp, double tol) {
  if (!fp.linearized) raise(ErrorCode::InvalidArgument, "fixed point has not been linearized");
  const double k = fp.kappa;
  if (!(k > -1.0 && k < 1.0))
    raise(ErrorCode::Hypothesis, "kappa = " + format_number(k) + " lies outside (-1, 1)");
  if (std::abs(fp.alpha_star) <= tol && std::abs(fp.beta_star) <= tol) return Regime::GaussianDegenerate;
  if (std::abs(k - 0.5) <= tol) return Regime::Critical;
  if (k > 0.5) return Regime::Superdiffusive;
  if (std::abs(k) <= tol) return Regime::GaussianJordan;
  return Regime::Gaussian;
}

StructuralMatrices structural_matrices(const FixedPointReport& fp) {
  const double x = fp.x_star, y = fp.y_star, z = fp.z_star;
  const double a = fp.alpha_star, b = fp.beta_star, q1 = fp.q1, q2 = fp.q2;
  StructuralMatrices m;
  m.gamma << x * (1 - x), -x * y, -x * z,
             -x * y, y * (1 - y), -y * z,
             -x * z, -y * z, z * (1 - z);
  m.t << -b, 0, -q1,
         a, 0, q2,
         0, 1, -1 + q1;
  if (a != 0.0) {
    m.has_tbar = true;
    m.tbar << -q1, -1 / a, 0,
              q2, 0, 0,
              -1 + q1, 0, 1;
  }
  return m;
}

CoefficientBlocks coefficient_blocks(const FixedPointReport& fp, double tol) {
  const double x = fp.x_star, y = fp.y_star, z = fp.z_star;
  const double a = fp.alpha_star, b = fp.beta_star, q1 = fp.q1, q2 = fp.q2;
  const double k = fp.kappa;
  CoefficientBlocks out;
  if (std::abs(k) > tol) {
    const double ik = 1.0 / k, ik2 = ik * ik;
    const double pp = a * a * x * (1 - x) - 2 * a * b * x * y + b * b * y * (1 - y);
    const double qq = q2 * a * x * (1 - x) - (a * q1 + b * q2) * x * y + q1 * b * y * (1 - y);
    const double a11 = ik2 * (q2 * q2 * x * (1 - x) - 2 * q1 * q2 * x * y + q1 * q1 * y * (1 - y));
    const double a12 = -ik2 * (1 - q1) * qq - ik * z * (q2 * x + q1 * y);
    const double a13 = -ik2 * qq;
    const double a22 = ik2 * (1 - q1) * (1 - q1) * pp + 2 * ik * (1 - q1) * z * (a * x + b * y) + z * (1 - z);
    const double a23 = ik2 * (1 - q1) * pp + ik * z * (a * x + b * y);
    const double a33 = ik2 * pp;
    out.a << a11, a12, a13,
             a12, a22, a23,
             a13, a23, a33;
    out.has_a = true;
    if (std::abs(k - 0.5) > tol) {
      out.c = {a13 / (1 - k), a23 / (1 - k), a33 / (1 - 2 * k)};
      out.has_c = true;
    }
  }
  if (std::abs(a) > tol) {
    const double yy = y * (1 - y);
    const double b11 = yy / (q2 * q2);
    const double b12 = a * x * y / q2 - q1 * a * yy / (q2 * q2);
    const double b13 = (1 - q1) * yy / (q2 * q2) - y * z / q2;
    const double b22 = a * a * (x * (1 - x) - 2 * q1 * x * y / q2 + q1 * q1 * yy / (q2 * q2));
    const double b23 = a * ((1 - q1) * x + q1 * z) * y / q2 - a * q1 * (1 - q1) * yy / (q2 * q2) + a * x * z;
    const double b33 = (1 - q1) * (1 - q1) * yy / (q2 * q2) - 2 * (1 - q1) * y * z / q2 + z * (1 - z);
    out.b << b11, b12, b13,
             b12, b22, b23,
             b13, b23, b33;
    out.has_b = true;
  }
  if (!out.has_a && !out.has_b)
    raise(ErrorCode::Case, "kappa = 0 and alpha* = 0: no coefficient blocks; use the degenerate Gaussian case");
  return out;
}

Matrix3 limit_covariance(const AsymptoticsReport& r) {
  const FixedPointReport& fp = r.fp;
  switch (r.regime) {
    case Regime::GaussianDegenerate:
      return r.matrices.gamma;
    case Regime::Critical: {
      if (!r.blocks.has_a) raise(ErrorCode::Case, "critical regime needs the A coefficients");
      const Vector3 v(fp.q1, -fp.q2, 1 - fp.q1);
      return r.blocks.a(2, 2) * v * v.transpose();
    }
    case Regime::Gaussian: {
      if (!r.blocks.has_a || !r.blocks.has_c)
        raise(ErrorCode::Case, "Gaussian regime needs the A and C coefficients");
      const Matrix3& a = r.blocks.a;
      const auto& c = r.blocks.c;
      Matrix3 inner;
      inner << a(0, 0), a(0, 1), c[0],
               a(0, 1), a(1, 1), c[1],
               c[0], c[1], c[2];
      return r.matrices.t * inner * r.matrices.t.transpose();
    }
    case Regime::GaussianJordan: {
      if (!r.blocks.has_b || !r.matrices.has_tbar)
        raise(ErrorCode::Case, "Jordan regime needs the B coefficients");
      const Matrix3& b = r.blocks.b;
      Matrix3 inner;
      inner << b(0, 0) + 2 * b(0, 1) + 2 * b(1, 1), b(0, 1) + b(1, 1), b(0, 2) + b(1, 2),
               b(0, 1) + b(1, 1), b(1, 1), b(1, 2),
               b(0, 2) + b(1, 2), b(1, 2), b(2, 2);
      return r.matrices.tbar * inner * r.matrices.tbar.transpose();
    }
    case Regime::Superdiffusive:
      break;
  }
  raise(ErrorCode::Case, "the superdiffusive regime has no limiting covariance");
}

AsymptoticsReport analyze_asymptotics(const FixedPointReport& fp) {
  AsymptoticsReport r;
  r.fp = fp;
  r.regime = classify_regime(fp);
  const double k = fp.kappa;
  r.boundary_snapped = (r.regime == Regime::Critical && k != 0.5) ||
                       (r.regime == Regime::GaussianJordan && k != 0.0);
  if (r.boundary_snapped)
    r.caveats.push_back("kappa = " + format_number(k) + " was classified to the boundary case");
  r.matrices = structural_matrices(fp);
  if (r.regime != Regime::GaussianDegenerate) r.blocks = coefficient_blocks(fp);
  switch (r.regime) {
    case Regime::Critical: r.scaling = Scaling::SqrtNOverLogN; break;
    case Regime::Superdiffusive: r.scaling = Scaling::PowerRho; break;
    default: r.scaling = Scaling::SqrtN; break;
  }
  if (r.regime == Regime::Superdiffusive) {
    const Vector3 dir = r.matrices.t.inverse().transpose() * Vector3(0, 0, 1);
    r.direction = dir.normalized();
  } else {
    r.sigma = limit_covariance(r);
  }
  if (fp.margin >= 1.0)
    r.caveats.push_back("contraction hypothesis not met; limits are not certified");
  return r;
}

JacobianInfo jacobian_at_root(const FixedPointReport& fp) {
  const double a = fp.alpha_star, b = fp.beta_star, q1 = fp.q1, q2 = fp.q2;
  JacobianInfo info;
  info.j << q1 * a - 1, q1 * b, 0,
            -q2 * a, -q2 * b - 1, 0,
            (1 - q1) * a, (1 - q1) * b, -1;
  info.eigenvalues = {-1.0, -1.0, -1.0 + fp.kappa};
  const Eigen::EigenSolver<Matrix3> solver(info.j, false);
  for (int i = 0; i < 3; ++i) info.numeric_eigenvalues[i] = solver.eigenvalues()[i];
  std::sort(info.numeric_eigenvalues.begin(), info.numeric_eigenvalues.end(),
            [](auto l, auto r) { return l.real() < r.real(); });
  return info;
}

namespace {

constexpr double kPathTolerance = 1e-9;

SimplexPoint onto_simplex(SimplexPoint p) {
  p.x = std::max(p.x, 0.0);
  p.y = std::max(p.y, 0.0);
  const double s = p.x + p.y;
  if (s > 1.0) {
    p.x /= s;
    p.y /= s;
  }
  return p;
}

}  // namespace

OdePath integrate_mean_field(const SelectionMap& map, SimplexPoint init, double dt, double t_end,
                             std::int64_t record_every) {
  if (!in_simplex(init)) raise(ErrorCode::Domain, "initial point is outside the simplex");
  if (!(dt > 0.0 && dt <= 0.1)) raise(ErrorCode::InvalidArgument, "dt must lie in (0, 0.1]");
  if (!(t_end >= 0.0)) raise(ErrorCode::InvalidArgument, "t_end must be non-negative");
  if (record_every < 1) raise(ErrorCode::InvalidArgument, "record_every must be positive");
  auto f = [&](SimplexPoint p) { return drift(map, onto_simplex(p)); };
  OdePath path;
  SimplexPoint cur = onto_simplex(init);
  path.times.push_back(0.0);
  path.points.push_back(cur);
  const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
  for (std::int64_t s = 1; s <= steps; ++s) {
    const double h = std::min(dt, t_end - static_cast<double>(s - 1) * dt);
    const auto k1 = f(cur);
    const auto k2 = f({cur.x + h / 2 * k1[0], cur.y + h / 2 * k1[1]});
    const auto k3 = f({cur.x + h / 2 * k2[0], cur.y + h / 2 * k2[1]});
    const auto k4 = f({cur.x + h * k3[0], cur.y + h * k3[1]});
    cur.x += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    cur.y += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    if (!in_simplex(cur, kPathTolerance))
      raise(ErrorCode::Integration, "path left the simplex at t = " +
                                        format_number(static_cast<double>(s) * dt));
    if (s % record_every == 0 || s == steps) {
      path.times.push_back(std::min(t_end, static_cast<double>(s) * dt));
      path.points.push_back(cur);
    }
  }
  return path;
}

}  // namespace urnlab
