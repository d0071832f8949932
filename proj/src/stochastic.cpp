#include "stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "philox.hpp"

namespace vacred {

namespace {

void require_positive_finite(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::Config,
                std::string(what) + " must be positive and finite, got " + std::to_string(v));
  }
}

}  // namespace

VcProfile VcProfile::constant(double value) {
  require_positive_finite(value, "vc profile constant");
  VcProfile p;
  p.constant_ = true;
  p.value_ = value;
  return p;
}

VcProfile VcProfile::sampled(std::vector<double> edge_values, double dt) {
  if (edge_values.size() < 2) {
    throw Error(ErrorCode::Config, "sampled vc profile needs at least 2 edges");
  }
  require_positive_finite(dt, "vc profile dt");
  for (double v : edge_values) {
    require_positive_finite(v, "vc profile value");
  }
  VcProfile p;
  p.constant_ = false;
  p.dt_ = dt;
  p.edges_ = std::move(edge_values);
  return p;
}

double VcProfile::edge(std::size_t k) const {
  if (constant_) {
    return value_;
  }
  if (k >= edges_.size()) {
    throw Error(ErrorCode::Domain, "vc profile edge index out of range");
  }
  return edges_[k];
}

double VcProfile::end_time() const {
  if (constant_) {
    return std::numeric_limits<double>::infinity();
  }
  return dt_ * static_cast<double>(edges_.size() - 1);
}

double VcProfile::value_at(double t) const {
  if (constant_) {
    if (!(t >= 0.0)) {
      throw Error(ErrorCode::Domain, "vc profile time must be non-negative");
    }
    return value_;
  }
  const double end = end_time();
  if (!(t >= 0.0) || t > end * (1.0 + 1e-12)) {
    throw Error(ErrorCode::Domain,
                "time " + std::to_string(t) + " outside vc profile window [0, " +
                    std::to_string(end) + "]");
  }
  const double clamped = std::min(t, end);
  const auto k = static_cast<std::size_t>(
      std::min(clamped / dt_, static_cast<double>(edges_.size() - 2)));
  const double frac = (clamped - static_cast<double>(k) * dt_) / dt_;
  return edges_[k] + frac * (edges_[k + 1] - edges_[k]);
}

namespace {

// Trajectories are reduced in fixed blocks of this size, and blocks are
// combined in index order, so the floating-point sum never depends on how
// many workers ran.
constexpr long kBlockTraj = 256;
constexpr long kMaxBlocksInFlight = 1024;

struct BlockAccumulator {
  // Indexed by step 1..n_steps (entry 0 unused).
  std::vector<double> sum_y, sum_y2;
  std::vector<double> sum_x2, sum_yy2, sum_z2;  // per-component squares
  std::vector<double> sum_dy, sum_dy2;

  void resize(std::size_t n) {
    for (auto* v : {&sum_y, &sum_y2, &sum_x2, &sum_yy2, &sum_z2, &sum_dy, &sum_dy2}) {
      v->assign(n, 0.0);
    }
  }
};

void validate_config(const NoiseConfig& cfg) {
  if (cfg.n_traj < 1) {
    throw Error(ErrorCode::Config, "n_traj must be at least 1");
  }
  if (cfg.n_steps < 1) {
    throw Error(ErrorCode::Config, "n_steps must be at least 1");
  }
  require_positive_finite(cfg.dt, "dt");
  if (cfg.threads < 0) {
    throw Error(ErrorCode::Config, "threads must be non-negative");
  }
  if (cfg.max_kicks < 1) {
    throw Error(ErrorCode::Config, "max_kicks must be positive");
  }
  const double kicks = static_cast<double>(cfg.n_traj) * static_cast<double>(cfg.n_steps);
  if (kicks > static_cast<double>(cfg.max_kicks)) {
    throw Error(ErrorCode::Limit,
                "n_traj * n_steps = " + std::to_string(kicks) + " exceeds the kick budget of " +
                    std::to_string(cfg.max_kicks));
  }
  if (!cfg.profile.is_constant()) {
    if (cfg.profile.sample_dt() != cfg.dt) {
      throw Error(ErrorCode::Config, "sampled vc profile dt must equal the simulation dt");
    }
    if (cfg.profile.edge_count() != static_cast<std::size_t>(cfg.n_steps) + 1) {
      throw Error(ErrorCode::Config,
                  "sampled vc profile must provide n_steps + 1 edge values, got " +
                      std::to_string(cfg.profile.edge_count()));
    }
  }
}

void run_block(const NoiseConfig& cfg, const std::vector<double>& kick_sigma,
               long block, BlockAccumulator& acc) {
  const long first = block * kBlockTraj;
  const long last = std::min(first + kBlockTraj, cfg.n_traj);
  const auto n_steps = static_cast<std::size_t>(cfg.n_steps);
  for (long traj = first; traj < last; ++traj) {
    double vx = 0.0, vy = 0.0, vz = 0.0;
    double y_prev = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
      const auto g = standard_normal_kicks(cfg.master_seed,
                                           static_cast<std::uint64_t>(traj),
                                           static_cast<std::uint32_t>(k - 1));
      const double s = kick_sigma[k];
      vx += s * g[0];
      vy += s * g[1];
      vz += s * g[2];
      const double x2 = vx * vx, yy2 = vy * vy, z2 = vz * vz;
      const double y = x2 + yy2 + z2;
      acc.sum_y[k] += y;
      acc.sum_y2[k] += y * y;
      acc.sum_x2[k] += x2;
      acc.sum_yy2[k] += yy2;
      acc.sum_z2[k] += z2;
      const double dy = y - y_prev;
      acc.sum_dy[k] += dy;
      acc.sum_dy2[k] += dy * dy;
      y_prev = y;
    }
  }
}

}  // namespace

EnsembleStats simulate_ensemble(const NoiseConfig& cfg) {
  validate_config(cfg);
  const auto n_steps = static_cast<std::size_t>(cfg.n_steps);

  // Kick standard deviation per component at step k (left-edge profile value).
  std::vector<double> kick_sigma(n_steps + 1, 0.0);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    kick_sigma[k] = std::sqrt(cfg.dt / cfg.profile.edge(k - 1) / 3.0);
  }

  const long n_blocks = (cfg.n_traj + kBlockTraj - 1) / kBlockTraj;
  int n_threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, n_threads);

  BlockAccumulator total;
  total.resize(n_steps + 1);
  std::vector<BlockAccumulator> batch(
      static_cast<std::size_t>(std::min(n_blocks, kMaxBlocksInFlight)));

  for (long batch_start = 0; batch_start < n_blocks; batch_start += kMaxBlocksInFlight) {
    const long batch_count = std::min(kMaxBlocksInFlight, n_blocks - batch_start);
    for (long i = 0; i < batch_count; ++i) {
      batch[static_cast<std::size_t>(i)].resize(n_steps + 1);
    }
    std::atomic<long> next{0};
    auto worker = [&]() {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= batch_count) {
          return;
        }
        run_block(cfg, kick_sigma, batch_start + i, batch[static_cast<std::size_t>(i)]);
      }
    };
    if (n_threads == 1 || batch_count == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      const int active = static_cast<int>(std::min<long>(n_threads, batch_count));
      pool.reserve(static_cast<std::size_t>(active));
      for (int t = 0; t < active; ++t) {
        pool.emplace_back(worker);
      }
      for (auto& t : pool) {
        t.join();
      }
    }
    // Deterministic reduction: block index order.
    for (long i = 0; i < batch_count; ++i) {
      const auto& b = batch[static_cast<std::size_t>(i)];
      for (std::size_t k = 1; k <= n_steps; ++k) {
        total.sum_y[k] += b.sum_y[k];
        total.sum_y2[k] += b.sum_y2[k];
        total.sum_x2[k] += b.sum_x2[k];
        total.sum_yy2[k] += b.sum_yy2[k];
        total.sum_z2[k] += b.sum_z2[k];
        total.sum_dy[k] += b.sum_dy[k];
        total.sum_dy2[k] += b.sum_dy2[k];
      }
    }
  }

  const double n = static_cast<double>(cfg.n_traj);
  EnsembleStats stats;
  stats.n_traj = cfg.n_traj;
  stats.dt = cfg.dt;
  stats.master_seed = cfg.master_seed;
  stats.steps.resize(n_steps + 1);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    StepStats& s = stats.steps[k];
    s.t = static_cast<double>(k) * cfg.dt;
    s.msv = total.sum_y[k] / n;
    s.msv_x = total.sum_x2[k] / n;
    s.msv_y = total.sum_yy2[k] / n;
    s.msv_z = total.sum_z2[k] / n;
    s.inc_mean = total.sum_dy[k] / n;
    if (cfg.n_traj > 1) {
      const double var_y =
          std::max(0.0, (total.sum_y2[k] - total.sum_y[k] * total.sum_y[k] / n) / (n - 1.0));
      const double var_dy =
          std::max(0.0, (total.sum_dy2[k] - total.sum_dy[k] * total.sum_dy[k] / n) / (n - 1.0));
      s.msv_stderr = std::sqrt(var_y / n);
      s.inc_stderr = std::sqrt(var_dy / n);
    }
  }
  return stats;
}

double analytic_msv(double t, const VcProfile& profile) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::Domain, "analytic_msv: time must be non-negative and finite");
  }
  if (profile.is_constant()) {
    return t / profile.constant_value();
  }
  const double end = profile.end_time();
  if (t > end * (1.0 + 1e-12)) {
    throw Error(ErrorCode::Domain,
                "analytic_msv: time " + std::to_string(t) + " outside profile window");
  }
  const double clamped = std::min(t, end);
  const double dt = profile.sample_dt();
  const auto full = static_cast<std::size_t>(
      std::min(clamped / dt, static_cast<double>(profile.edge_count() - 1)));
  double integral = 0.0;
  for (std::size_t k = 0; k < full; ++k) {
    integral += 0.5 * dt * (1.0 / profile.edge(k) + 1.0 / profile.edge(k + 1));
  }
  const double t_full = static_cast<double>(full) * dt;
  if (clamped > t_full) {
    integral += 0.5 * (clamped - t_full) *
                (1.0 / profile.edge(full) + 1.0 / profile.value_at(clamped));
  }
  return integral;
}

std::vector<double> analytic_msv_edges(const VcProfile& profile, long n_steps, double dt) {
  if (n_steps < 1) {
    throw Error(ErrorCode::Config, "analytic_msv_edges: n_steps must be at least 1");
  }
  require_positive_finite(dt, "dt");
  if (!profile.is_constant()) {
    if (profile.sample_dt() != dt) {
      throw Error(ErrorCode::Config, "analytic_msv_edges: profile dt mismatch");
    }
    if (profile.edge_count() < static_cast<std::size_t>(n_steps) + 1) {
      throw Error(ErrorCode::Config, "analytic_msv_edges: profile too short");
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n_steps) + 1, 0.0);
  for (std::size_t k = 1; k < out.size(); ++k) {
    if (profile.is_constant()) {
      out[k] = static_cast<double>(k) * dt / profile.constant_value();
    } else {
      out[k] = out[k - 1] + 0.5 * dt * (1.0 / profile.edge(k - 1) + 1.0 / profile.edge(k));
    }
  }
  return out;
}

VerifyReport verify_energy_growth(const EnsembleStats& stats, const VcProfile& profile,
                                  double z_threshold) {
  if (stats.steps.size() < 3 || stats.n_traj < 1) {
    throw Error(ErrorCode::Config, "verify_energy_growth: need at least 2 simulated steps");
  }
  if (!(z_threshold > 0.0)) {
    throw Error(ErrorCode::Config, "verify_energy_growth: z threshold must be positive");
  }
  const long n_steps = static_cast<long>(stats.steps.size()) - 1;

  VerifyReport report;
  report.n_checked = n_steps;
  if (stats.n_traj < 2) {
    report.insufficient_stats = true;
    return report;
  }

  const std::vector<double> analytic = analytic_msv_edges(profile, n_steps, stats.dt);

  bool any_stderr = false;
  for (long k = 1; k <= n_steps; ++k) {
    const StepStats& s = stats.steps[static_cast<std::size_t>(k)];
    const double x = analytic[static_cast<std::size_t>(k)];
    if (s.msv_stderr > 0.0) {
      any_stderr = true;
      if (std::abs((s.msv - x) / s.msv_stderr) > z_threshold) {
        ++report.n_z_fail;
      }
    } else if (s.msv != x) {
      ++report.n_z_fail;
    }
  }
  if (!any_stderr) {
    throw Error(ErrorCode::Internal,
                "verify_energy_growth: ensemble stderr identically zero with n_traj > 1");
  }
  report.z_fail_fraction =
      static_cast<double>(report.n_z_fail) / static_cast<double>(n_steps);

  // Weighted least squares on increments, computed in ratio form so extreme
  // noise scales cannot overflow the weights.
  double s_xx = 0.0, s_xy = 0.0;
  for (long k = 1; k <= n_steps; ++k) {
    const StepStats& s = stats.steps[static_cast<std::size_t>(k)];
    const double dx = analytic[static_cast<std::size_t>(k)] -
                      analytic[static_cast<std::size_t>(k - 1)];
    if (s.inc_stderr <= 0.0) {
      if (dx == 0.0) {
        continue;
      }
      throw Error(ErrorCode::Internal,
                  "verify_energy_growth: degenerate increment stderr at step " +
                      std::to_string(k));
    }
    const double xs = dx / s.inc_stderr;
    const double ys = s.inc_mean / s.inc_stderr;
    s_xx += xs * xs;
    s_xy += xs * ys;
  }
  if (!(s_xx > 0.0)) {
    throw Error(ErrorCode::Internal, "verify_energy_growth: no usable increments");
  }
  report.slope = s_xy / s_xx;
  report.slope_stderr = 1.0 / std::sqrt(s_xx);
  report.passed = std::abs(report.slope - 1.0) < z_threshold * report.slope_stderr &&
                  report.z_fail_fraction < 0.01;
  return report;
}

ScaledProfile scale_history(const std::vector<double>& t_gev,
                            const std::vector<double>& vc_gev3, long n_steps,
                            double dt) {
  if (t_gev.size() != vc_gev3.size() || t_gev.size() < 2) {
    throw Error(ErrorCode::Config, "scale_history: need matching t/vc series of length >= 2");
  }
  if (n_steps < 1) {
    throw Error(ErrorCode::Config, "scale_history: n_steps must be at least 1");
  }
  require_positive_finite(dt, "dt");
  for (std::size_t i = 0; i < t_gev.size(); ++i) {
    if (!std::isfinite(t_gev[i]) || !(vc_gev3[i] > 0.0)) {
      throw Error(ErrorCode::Config, "scale_history: invalid history sample");
    }
    if (i > 0 && !(t_gev[i] > t_gev[i - 1])) {
      throw Error(ErrorCode::Config, "scale_history: history times must increase");
    }
  }

  const double window = static_cast<double>(n_steps) * dt;
  const double span = t_gev.back() - t_gev.front();
  ScaledProfile out;
  out.v_ref = vc_gev3.front();
  out.t_ref = span / window;

  std::vector<double> edges(static_cast<std::size_t>(n_steps) + 1);
  std::size_t hint = 0;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const double t_phys =
        t_gev.front() + std::min(static_cast<double>(k) * dt, window) * out.t_ref;
    while (hint + 2 < t_gev.size() && t_gev[hint + 1] < t_phys) {
      ++hint;
    }
    const double t0 = t_gev[hint], t1 = t_gev[hint + 1];
    const double frac = std::clamp((t_phys - t0) / (t1 - t0), 0.0, 1.0);
    edges[k] = (vc_gev3[hint] + frac * (vc_gev3[hint + 1] - vc_gev3[hint])) / out.v_ref;
  }
  out.profile = VcProfile::sampled(std::move(edges), dt);
  return out;
}

}  // namespace vacred
