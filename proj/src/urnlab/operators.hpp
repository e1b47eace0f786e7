#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "urnlab/model.hpp"
#include "urnlab/reinforcement.hpp"
#include "urnlab/sample_laws.hpp"

namespace urnlab {

/// Point (r1/n, r2/n) of the lattice with denominator n.
struct LatticePoint {
  std::int64_t n = 1;
  std::int64_t r1 = 0;
  std::int64_t r2 = 0;
};

struct OperatorOptions {
  /// Largest support of a fixed law accepted by h0_eval.
  std::int64_t max_fixed_support = 60;
  /// Cap on the sum of k^2 over the sizes summed in one evaluation.
  double max_cost = 1e7;
};

/// Sample-size masses indexed by size: masses[k - 1] = P(K = k).
using SizeMassSpan = std::span<const double>;

/// Expected g(V1/k, V2/k) mixed over K ~ mu, (V1, V2) trinomial(k; x, y).
double h0_eval(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
               SimplexPoint pt, const OperatorOptions& opts = {});
/// As h0_eval with the epoch-n law. Mass dropped from the tails of the law
/// (see SizeMasses) is given the value g(pt).
double hn_eval(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
               std::int64_t n, SimplexPoint pt, const OperatorOptions& opts = {});
/// Same expectations when the k customers are drawn without replacement from
/// an urn with r1 + r2 of its n balls of the first two colours.
double fn_eval(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
               LatticePoint lp, const OperatorOptions& opts = {});
double en_eval(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
               LatticePoint lp, const OperatorOptions& opts = {});

/// hn_eval - g(pt) and en_eval - g(r1/n, r2/n), summed as differences so
/// that a constant g gives exactly zero.
double hn_gap(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              std::int64_t n, SimplexPoint pt, const OperatorOptions& opts = {});
double en_gap(const ReinforcementSpec& spec, const ModelParams& params, const SampleSizeLaw& law,
              LatticePoint lp, const OperatorOptions& opts = {});

/// Partial derivatives of h0_eval. Exact differentiated sum when the law's
/// support is at most 20, central differences otherwise.
Gradient h0_gradient(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
                     SimplexPoint pt, const OperatorOptions& opts = {});

/// Which selection map drives the mean-field dynamics: the smoothed map built
/// from h0_eval (fixed laws) or g itself (epoch-indexed laws).
enum class MapKind { Smoothed, Direct };
const char* to_string(MapKind k) noexcept;
MapKind map_kind_for(const SampleSizeLaw& law);

/// The selection map and the ingredients it needs. Holds a pointer to the
/// spec, which must outlive the map.
struct SelectionMap {
  MapKind kind = MapKind::Direct;
  const ReinforcementSpec* spec = nullptr;
  ModelParams params;
  std::vector<double> mu;  // used by the smoothed map only
  OperatorOptions opts;

  SelectionMap(MapKind kind, const ReinforcementSpec& spec, const ModelParams& params,
               std::vector<double> mu = {}, OperatorOptions opts = {});
  /// Smoothed map for fixed laws, direct map otherwise.
  static SelectionMap for_law(const ReinforcementSpec& spec, const ModelParams& params,
                              const SampleSizeLaw& law, OperatorOptions opts = {});

  double value(SimplexPoint pt) const;
  Gradient gradient(SimplexPoint pt) const;
};

/// (q1 S - x, q2 (1 - S) - y) with S the selection map.
std::array<double, 2> drift(const SelectionMap& map, SimplexPoint pt);
/// Adds the unsatisfied-A component (1 - q1) S - z; the point must lie in
/// x, y, z >= 0, x + y + z <= 1.
std::array<double, 3> drift(const SelectionMap& map, const std::array<double, 3>& point);

enum class GapLemma { Holder, Modulus, Hessian, Hypergeometric };
const char* to_string(GapLemma l) noexcept;

struct GapBound {
  std::int64_t n = 0;
  double bound = 0.0;
  GapLemma lemma = GapLemma::Holder;
};

/// Certified bound on sup |H_n - g| over the simplex and on sup |E_n - g|
/// over the lattice, from the Hoelder, gradient-modulus or Hessian bound.
GapBound bernstein_gap_bound(const ReinforcementSpec& spec, const ModelParams& params,
                             const SampleSizeLaw& law, std::int64_t n, GapLemma lemma);
/// Lemmas whose smoothness requirement the spec meets.
std::vector<GapLemma> applicable_lemmas(const ReinforcementSpec& spec);

struct SupResult {
  double sup = 0.0;
  double x = 0.0;
  double y = 0.0;
  std::int64_t points = 0;
  bool approximate = false;
};

/// max |fn_eval - h0_eval| over the lattice with denominator n: exact for
/// n <= 1000, a strided sublattice beyond (flagged approximate).
SupResult hypergeom_gap(const ReinforcementSpec& spec, const ModelParams& params, SizeMassSpan mu,
                        std::int64_t n, const OperatorOptions& opts = {});

/// max |hn_eval - g| over the grid {(i/res, j/res)}.
SupResult grid_sup_hn_gap(const ReinforcementSpec& spec, const ModelParams& params,
                          const SampleSizeLaw& law, std::int64_t n, int resolution,
                          const OperatorOptions& opts = {});
/// max |en_eval - g| over lattice points with both counts on multiples of
/// `stride` (plus the far edge); stride 1 is the full lattice.
SupResult lattice_sup_en_gap(const ReinforcementSpec& spec, const ModelParams& params,
                             const SampleSizeLaw& law, std::int64_t n, std::int64_t stride,
                             const OperatorOptions& opts = {});

/// Number of (i, j) terms summed by one evaluation of h0/hn at an interior
/// point; used to size grids.
double evaluation_terms(const SampleSizeLaw& law, std::int64_t n);

}  // namespace urnlab
