#pragma once

// Delay-minimizing selection of the service probability at an operating
// point, and sweep generation for throughput-delay tradeoff tables. The
// endpoint objectives follow the delay monotonicity in `a`: the primary
// delay is minimized at the low end of the feasible interval, the secondary
// delay at the high end. Optima lie at open-interval endpoints, so the
// returned probability is endpoint +/- margin and the unattained infimum is
// reported separately.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coopra/analysis.hpp"
#include "coopra/model.hpp"
#include "coopra/sim.hpp"
#include "coopra/version.hpp"

namespace coopra::optimize {

enum class ObjectiveKind { min_primary_delay, min_secondary_delay, weighted_sum };

const char* to_string(ObjectiveKind k);

struct Objective {
  ObjectiveKind kind = ObjectiveKind::min_primary_delay;
  double w_p = 0.0;  // weighted_sum only
  double w_s = 0.0;

  static Objective min_primary_delay() { return {ObjectiveKind::min_primary_delay, 0, 0}; }
  static Objective min_secondary_delay() { return {ObjectiveKind::min_secondary_delay, 0, 0}; }
  static Objective weighted(double w_p, double w_s) {
    return {ObjectiveKind::weighted_sum, w_p, w_s};
  }
};

struct OptimizationRequest {
  ChannelProfile channel;
  ArrivalRates rates;
  Objective objective;
  double margin = 1e-6;  // offset from the open-interval endpoints
};

struct OptimalA {
  double a_star = 0.0;
  analysis::DelayReport report;   // closed forms at a_star
  double objective_value = 0.0;   // objective at a_star
  double unattained_infimum = 0.0;  // limit toward the open endpoint
  analysis::AInterval interval;
  // The weighted objective is checked for unimodality with a 64-point scan;
  // on failure the result is a fine-grid argmin and this flag is set.
  bool unimodality_warning = false;
};

// Throws Error(infeasible) when the feasible interval is empty,
// Error(out_of_range, "margin") when the margin does not fit the interval,
// and propagates primary_overloaded / zero_rate_flow from the closed forms.
OptimalA optimal_a(const OptimizationRequest& req);

enum class SweepAxis { lambda_p, lambda_s, lambda_joint };

const char* to_string(SweepAxis a);

struct SweepSpec {
  ChannelProfile channel;
  SweepAxis axis = SweepAxis::lambda_p;
  double fixed_rate = 0.2;          // the non-swept rate; ignored for lambda_joint
  std::vector<double> grid;         // strictly increasing
  std::vector<sim::Policy> policies;
  Objective objective;              // applied to randomized rows
  double margin = 1e-6;

  // Baseline delays have no closed form in scope; they are simulated with
  // these settings and a per-row seed derived from the master seed.
  std::uint64_t sim_horizon = 1'000'000;
  std::uint64_t sim_warmup = 100'000;
  std::uint32_t sim_replications = 5;
  std::uint64_t seed = kDefaultSeed;
};

struct SimSummary {
  double d_p = 0.0, d_p_ci95 = 0.0;
  double d_s = 0.0, d_s_ci95 = 0.0;
  double n_p = 0.0, n_sp = 0.0, n_s = 0.0;
  double throughput_p = 0.0, throughput_s = 0.0;
};

struct SweepRow {
  std::size_t index = 0;
  double lambda_p = 0.0, lambda_s = 0.0;
  sim::Policy policy;
  std::string status;  // "ok", "infeasible", or "error:<code>"
  double a_star = 0.0;                           // randomized rows, NaN otherwise
  std::optional<analysis::DelayReport> analytic; // randomized rows
  std::optional<SimSummary> simulated;           // baseline rows
  bool unimodality_warning = false;
};

// One row per (grid point, policy), ordered by grid index then by the
// position of the policy in the spec. Per-row failures become row statuses
// and never abort the sweep. Rows are independent; `threads` > 1 runs them
// in a worker pool with the output order unchanged.
std::vector<SweepRow> tradeoff_sweep(const SweepSpec& spec, unsigned threads = 1);

}  // namespace coopra::optimize
