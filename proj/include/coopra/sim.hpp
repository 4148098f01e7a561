#pragma once

// Seeded slot-by-slot Monte-Carlo simulator of the three-queue system under
// the randomized cooperative policy and two baselines (strict relay priority,
// no cooperation). Produces empirical throughput, queue-length and delay
// statistics with across-replication confidence intervals.
//
// Conventions (these reproduce the closed forms exactly):
//   - queue lengths are sampled at slot starts, after the previous slot's
//     arrivals;
//   - departures are decided from the slot-start state, arrivals are appended
//     afterwards, so a packet arriving in slot t is never served before t+1;
//   - a relayed primary packet keeps its original arrival slot, its sojourn
//     ends at the successful relay-to-destination slot;
//   - service within each queue is FIFO.

#include <cstdint>
#include <vector>

#include "coopra/model.hpp"

namespace coopra::sim {

struct Policy {
  enum class Kind { randomized, priority_relay, no_cooperation };

  Kind kind = Kind::randomized;
  double a = 0.5;  // used by randomized only

  static Policy randomized(double a) { return {Kind::randomized, a}; }
  static Policy priority_relay() { return {Kind::priority_relay, 0.0}; }
  static Policy no_cooperation() { return {Kind::no_cooperation, 0.0}; }

  friend bool operator==(const Policy&, const Policy&) = default;
};

const char* to_string(Policy::Kind k);

struct SimConfig {
  ChannelProfile channel;
  ArrivalRates rates;
  Policy policy;
  std::uint64_t horizon = 1'000'000;  // total simulated slots
  std::uint64_t warmup = 100'000;     // discarded prefix
  std::uint64_t seed = 0;
  std::uint32_t replications = 5;
};

struct RunOptions {
  unsigned threads = 1;
  // Keep zero-delivery flows as NaN statistics instead of raising
  // Error(no_deliveries); needed for degenerate studies with a flow disabled.
  bool allow_empty_flows = false;
};

// The five per-slot uniforms, one per substream. The shared link draw is read
// as the pu->su outage in primary-busy slots and as the su->destination
// outage in primary-idle slots; the queue-selection draw is consumed in every
// primary-idle slot under the randomized policy, before inspecting emptiness.
struct SlotDraws {
  double u_pu_arrival = 0.0;
  double u_su_arrival = 0.0;
  double u_pd = 0.0;
  double u_shared = 0.0;
  double u_select = 0.0;
};

SlotDraws draws_for_slot(std::uint64_t master_seed, std::uint64_t replication,
                         std::uint64_t slot);

struct StepResult {
  QueueTriple next;
  SlotOutcome outcome;
};

// One slot of the system dynamics: primary transmission if backlogged,
// otherwise the policy's secondary-side rule, then Bernoulli arrivals.
// Pure function; the run loop and all tests share it.
StepResult step(const QueueTriple& state, const ChannelProfile& c,
                const ArrivalRates& r, const Policy& policy,
                const SlotDraws& draws);

struct ReplicationStats {
  // Full-run counters; conservation identities hold exactly:
  //   arrivals_p == delivered_p + residual_qp + residual_qsp
  //   arrivals_s == delivered_s + residual_qs
  std::uint64_t arrivals_p = 0, arrivals_s = 0;
  std::uint64_t delivered_p = 0, delivered_s = 0;
  std::uint64_t delivered_p_direct = 0, delivered_p_relayed = 0;
  std::uint64_t residual_qp = 0, residual_qsp = 0, residual_qs = 0;

  // Post-warmup window.
  std::uint64_t window_slots = 0;
  std::uint64_t delivered_p_win = 0, delivered_s_win = 0;
  std::uint64_t delivered_p_relayed_win = 0;
  std::uint64_t idle_slots = 0, wasted_slots = 0;
  double n_p = 0.0, n_sp = 0.0, n_s = 0.0;
  double d_p = 0.0, d_s = 0.0;  // NaN when the flow delivered nothing
  double throughput_p = 0.0, throughput_s = 0.0;
  double g00 = 0.0, g01 = 0.0;
  double relay_fraction = 0.0;  // delivered primary packets that were relayed

  // Hash of the primary queue length sequence over all slots; equal hashes
  // mean identical trajectories.
  std::uint64_t qp_trace_hash = 0;
};

struct MetricSummary {
  double mean = 0.0;
  double ci95 = 0.0;  // NaN with fewer than two replications
};

struct SimResult {
  SimConfig config;
  std::vector<ReplicationStats> replications;
  MetricSummary n_p, n_sp, n_s;
  MetricSummary d_p, d_s;
  MetricSummary throughput_p, throughput_s;
  MetricSummary g00, g01;
  MetricSummary relay_fraction;
  double idle_slots_mean = 0.0, wasted_slots_mean = 0.0;
};

// Runs `replications` independent replications with substreams derived from
// the config seed and merges them in replication order, so results are
// byte-identical across thread counts. Throws Error(no_deliveries, "pu"|"su")
// if a flow delivered nothing post-warmup in some replication (unless
// RunOptions.allow_empty_flows).
SimResult run(const SimConfig& cfg, const RunOptions& options = {});

enum class StabilityVerdict { bounded, diverging };

const char* to_string(StabilityVerdict v);

// Heuristic empirical stability test, used as a test oracle: diverging iff a
// majority of replications end with some queue longer than
// threshold * (1 + log10(horizon)).
StabilityVerdict stability_probe(const SimConfig& cfg, double threshold,
                                 const RunOptions& options = {});

}  // namespace coopra::sim
