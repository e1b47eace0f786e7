#include "urnlab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace urnlab {

void RunConfig::validate() const {
  params.validate(true);
  if (n_max <= params.N) raise(ErrorCode::InvalidArgument, "n_max must exceed N");
  if (checkpoints.empty()) raise(ErrorCode::InvalidArgument, "at least one checkpoint is needed");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= params.N || checkpoints[i] > n_max)
      raise(ErrorCode::InvalidArgument, "checkpoints must lie in (N, n_max]");
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
      raise(ErrorCode::InvalidArgument, "checkpoints must be strictly increasing");
  }
  if (replications < 1) raise(ErrorCode::InvalidArgument, "replications must be at least 1");
}

std::vector<std::int64_t> default_checkpoints(std::int64_t n_min, std::int64_t n_max) {
  std::vector<std::int64_t> out;
  for (int e = 6; e <= 20; ++e) {
    const auto n = static_cast<std::int64_t>(std::llround(std::pow(10.0, e / 2.0)));
    if (n > n_min && n < n_max) out.push_back(n);
  }
  out.push_back(n_max);
  return out;
}

Trajectory run_trajectory(const RunConfig& config, std::int64_t replication_index) {
  config.validate();
  RandomSource rng = RandomSource::for_replication(config.seed, static_cast<std::uint64_t>(replication_index));
  UrnState state = init_history(config.params, rng);
  Trajectory traj;
  traj.records.reserve(config.checkpoints.size());
  if (config.keep_path) traj.path.reserve(static_cast<std::size_t>(config.n_max - state.n));
  auto next = config.checkpoints.begin();
  while (state.n < config.n_max) {
    state = step(state, config.params, config.scheme, config.spec, config.law, rng, config.mode);
    if (config.keep_path) traj.path.push_back(walker_position(state));
    if (next != config.checkpoints.end() && state.n == *next) {
      traj.records.push_back({state.n, state.a, state.b, state.c, state.d, walker_position(state)});
      ++next;
    }
  }
  return traj;
}

DeviationScaling deviation_scaling(const AsymptoticsReport& report) {
  DeviationScaling s;
  s.center = Vector3(report.fp.x_star, report.fp.y_star, report.fp.z_star);
  s.scaling = report.scaling;
  s.rho = report.fp.rho;
  return s;
}

void sample_moments(const std::vector<Vector3>& rows, Vector3& mean, Matrix3& cov) {
  mean.setZero();
  cov.setZero();
  if (rows.empty()) return;
  for (const Vector3& r : rows) mean += r;
  mean /= static_cast<double>(rows.size());
  if (rows.size() < 2) return;
  for (const Vector3& r : rows) {
    const Vector3 d = r - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(rows.size() - 1);
}

EnsembleStats run_ensemble(const RunConfig& config, const std::optional<DeviationScaling>& scaling) {
  config.validate();
  if (config.replications < 2) raise(ErrorCode::InvalidArgument, "an ensemble needs at least 2 replications");
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<Trajectory> results(reps);

  unsigned workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, reps));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = reps;
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= reps || failed.load()) return;
      try {
        results[i] = run_trajectory(config, static_cast<std::int64_t>(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const Error& e) {
      raise(e.code(), "replication " + std::to_string(error_index) + ": " + e.what());
    }
  }

  EnsembleStats stats;
  stats.replications = config.replications;
  stats.centered_on_theory = scaling.has_value();
  if (scaling) stats.scaling = *scaling;
  for (std::size_t c = 0; c < config.checkpoints.size(); ++c) {
    CheckpointStats cs;
    cs.n = config.checkpoints[c];
    const double n = static_cast<double>(cs.n);
    std::vector<Vector3> props;
    props.reserve(reps);
    for (const Trajectory& t : results) {
      const CheckpointRecord& r = t.records[c];
      props.emplace_back(r.a / n, r.b / n, r.c / n);
    }
    sample_moments(props, cs.mean, cs.cov);
    const Vector3 center = scaling ? scaling->center : cs.mean;
    const double factor = scaling ? scale_factor(scaling->scaling, scaling->rho, n) : std::sqrt(n);
    cs.deviations.reserve(reps);
    for (const Vector3& p : props) cs.deviations.push_back(factor * (p - center));
    sample_moments(cs.deviations, cs.deviation_mean, cs.deviation_cov);
    stats.checkpoints.push_back(std::move(cs));
  }
  return stats;
}

}  // namespace urnlab
