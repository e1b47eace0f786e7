#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "urnlab/fixed_point.hpp"

namespace urnlab {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

/// Fluctuation regime of (a/n, b/n, c/n) around the fixed point.
enum class Regime {
  Critical,            // kappa = 1/2, sqrt(n / log n) scaling
  Superdiffusive,      // kappa in (1/2, 1), n^rho scaling with a random limit
  Gaussian,            // kappa in (-1, 1/2) minus {0}
  GaussianDegenerate,  // zero gradient at the root; covariance Gamma
  GaussianJordan,      // kappa = 0 with a non-zero x-derivative
};
const char* to_string(Regime r) noexcept;

enum class Scaling { SqrtNOverLogN, PowerRho, SqrtN };
const char* to_string(Scaling s) noexcept;

/// Multiplier applied to (a/n - x*, ...) at epoch n.
double scale_factor(Scaling s, double rho, double n);

struct StructuralMatrices {
  Matrix3 gamma = Matrix3::Zero();
  Matrix3 t = Matrix3::Zero();
  Matrix3 tbar = Matrix3::Zero();  // defined only when alpha* != 0
  bool has_tbar = false;
};

/// Coefficient sets of the limiting covariances. a and b hold the symmetric
/// 3x3 arrays of the A and B coefficients; c holds C13, C23, C33.
struct CoefficientBlocks {
  Matrix3 a = Matrix3::Zero();
  Matrix3 b = Matrix3::Zero();
  std::array<double, 3> c{0.0, 0.0, 0.0};
  bool has_a = false;
  bool has_b = false;
  bool has_c = false;
};

struct AsymptoticsReport {
  FixedPointReport fp;
  Regime regime = Regime::Gaussian;
  Scaling scaling = Scaling::SqrtN;
  /// Set when kappa was within the boundary tolerance of 0 or 1/2.
  bool boundary_snapped = false;
  StructuralMatrices matrices;
  CoefficientBlocks blocks;
  std::optional<Matrix3> sigma;
  /// Direction of the random limit in the superdiffusive regime.
  std::optional<Vector3> direction;
  std::vector<std::string> caveats;
};

constexpr double kRegimeTolerance = 1e-9;

/// Raises Hypothesis when kappa lies outside (-1, 1).
Regime classify_regime(const FixedPointReport& fp, double tol = kRegimeTolerance);
StructuralMatrices structural_matrices(const FixedPointReport& fp);
/// A entries need kappa != 0, B entries alpha* != 0, and C33 kappa != 1/2;
/// missing sets are left unflagged. Raises Case when none can be formed.
CoefficientBlocks coefficient_blocks(const FixedPointReport& fp, double tol = kRegimeTolerance);
/// Classifies, builds the matrices and the covariance or direction.
AsymptoticsReport analyze_asymptotics(const FixedPointReport& fp);
/// Covariance for the report's regime; raises Case for the superdiffusive
/// regime or when the blocks it needs are missing.
Matrix3 limit_covariance(const AsymptoticsReport& report);

struct JacobianInfo {
  Matrix3 j = Matrix3::Zero();
  /// -1, -1, -1 + kappa.
  std::array<double, 3> eigenvalues{-1.0, -1.0, -1.0};
  /// From a general eigen-solver, sorted by real part.
  std::array<std::complex<double>, 3> numeric_eigenvalues{};
};
JacobianInfo jacobian_at_root(const FixedPointReport& fp);

struct OdePath {
  std::vector<double> times;
  std::vector<SimplexPoint> points;
};

/// Classical RK4 for d(x, y)/dt = drift(map, (x, y)), recording every
/// `record_every`-th step and the terminal point.
OdePath integrate_mean_field(const SelectionMap& map, SimplexPoint init, double dt, double t_end,
                             std::int64_t record_every = 1);

}  // namespace urnlab
