#pragma once

#include <cstdint>
#include <vector>

#include "error.hpp"

namespace vacred {

// Scaled-time characteristic-volume profile driving the noise strength.
// Either a constant, or samples at uniform step edges t_k = k * dt with
// linear interpolation in between. Values are strictly positive.
class VcProfile {
 public:
  static VcProfile constant(double value);
  static VcProfile sampled(std::vector<double> edge_values, double dt);

  bool is_constant() const { return constant_; }
  double constant_value() const { return value_; }
  double sample_dt() const { return dt_; }
  std::size_t edge_count() const { return edges_.size(); }
  // Profile value at edge k (constant profiles return the constant).
  double edge(std::size_t k) const;
  // Linearly interpolated value; t must lie within the profile window.
  double value_at(double t) const;
  // Last covered time; constant profiles are unbounded.
  double end_time() const;

 private:
  VcProfile() = default;
  bool constant_ = true;
  double value_ = 1.0;
  double dt_ = 0.0;
  std::vector<double> edges_;
};

inline constexpr std::uint64_t kDefaultSeed = 20260808ull;

// Ensemble of independent velocity random walks. Works in scaled units with
// G = 1: at step k every trajectory's velocity receives an isotropic Gaussian
// kick with total variance dt / Vc(t_{k-1}) split evenly over the three
// components (Euler-Maruyama left-edge discretization of delta-correlated
// acceleration noise; exact in distribution for additive noise).
struct NoiseConfig {
  long n_traj = 10'000;
  long n_steps = 1'000;
  double dt = 0.01;
  VcProfile profile = VcProfile::constant(1.0);
  std::uint64_t master_seed = kDefaultSeed;
  int threads = 0;  // 0 = hardware concurrency; can never change results
  long max_kicks = 1'000'000'000;  // cap on n_traj * n_steps
};

struct StepStats {
  double t = 0.0;
  double msv = 0.0;         // ensemble mean of |v|^2
  double msv_stderr = 0.0;  // standard error of msv
  double msv_x = 0.0;       // per-component mean squares
  double msv_y = 0.0;
  double msv_z = 0.0;
  double inc_mean = 0.0;    // ensemble mean of the per-step |v|^2 increment
  double inc_stderr = 0.0;  // standard error of that increment
};

struct EnsembleStats {
  std::vector<StepStats> steps;  // n_steps + 1 entries; step 0 identically zero
  long n_traj = 0;
  double dt = 0.0;
  std::uint64_t master_seed = 0;
};

// Bit-identical for a fixed master_seed regardless of thread count: each
// trajectory owns a counter-derived stream and trajectories are reduced in
// fixed blocks combined in index order.
EnsembleStats simulate_ensemble(const NoiseConfig& cfg);

// Integral of dt'/Vc(t') from 0 to t (G = 1), trapezoidal on sampled
// profiles and exact for constant ones.
double analytic_msv(double t, const VcProfile& profile);

// Per-edge analytic values for t_k = k * dt, k = 0..n_steps (prefix form of
// analytic_msv, O(n) total).
std::vector<double> analytic_msv_edges(const VcProfile& profile, long n_steps, double dt);

// Statistical comparison of a simulated ensemble against the analytic law.
// The slope of msv vs analytic is fitted by weighted least squares on the
// per-step increments; increments of |v|^2 are uncorrelated across steps,
// which makes the quoted slope standard error exact. A fit on the cumulative
// curve would need the full step-step covariance instead.
struct VerifyReport {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double z_fail_fraction = 0.0;
  long n_checked = 0;
  long n_z_fail = 0;
  bool insufficient_stats = false;
  bool passed = false;
};

// Passes when |slope - 1| < z_threshold * slope_stderr and fewer than 1% of
// steps show |z| > z_threshold. n_traj < 2 yields insufficient_stats instead
// of a verdict.
VerifyReport verify_energy_growth(const EnsembleStats& stats, const VcProfile& profile,
                                  double z_threshold = 3.0);

// Rescaling of a physical V_c(t) history onto a simulation window:
// times map onto [0, n_steps*dt] and volumes are divided by the initial
// value. The mean-square-velocity law is homogeneous in both, so the scaling
// is exact; v_ref and t_ref let callers unscale.
struct ScaledProfile {
  VcProfile profile = VcProfile::constant(1.0);
  double v_ref = 1.0;  // GeV^-3 per scaled volume unit
  double t_ref = 1.0;  // GeV^-1 per scaled time unit
};

ScaledProfile scale_history(const std::vector<double>& t_gev,
                            const std::vector<double>& vc_gev3, long n_steps,
                            double dt);

}  // namespace vacred
