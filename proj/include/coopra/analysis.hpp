#pragma once

// Closed-form performance analysis of the randomized cooperative access
// policy: service rates, per-queue stability bounds and region membership,
// the feasible service-probability interval, outer region boundaries,
// average queue lengths, average delays and empty-system probabilities.
//
// Everything here is a pure function of immutable inputs and safe for
// unrestricted parallel invocation.

#include "coopra/model.hpp"

namespace coopra::analysis {

// "Stable" means every arrival rate sits below its bound by at least this
// margin, so floating-point boundary points classify deterministically.
inline constexpr double kStabilityMargin = 1e-9;

// Delay evaluations with stability slack below this are flagged: the
// rational closed forms approach denominator roots at the boundary.
inline constexpr double kConditionWarnSlack = 1e-4;

// Open interval of service probabilities; empty when lo >= hi.
struct AInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool empty() const { return !(lo < hi); }
  double width() const { return empty() ? 0.0 : hi - lo; }
  bool contains(double a) const { return lo < a && a < hi; }
};

struct StabilityReport {
  double mu_p = 0.0;          // primary queue service rate
  double lambda_p_max = 0.0;  // relay-queue-induced bound on lambda_p
  double lambda_s_max = 0.0;  // own-queue bound at the queried lambda_p
  bool stable = false;
  AInterval a_interval;       // feasible service probabilities at these rates
};

struct DelayReport {
  double n_p = 0.0;   // time-average primary queue length
  double n_sp = 0.0;  // time-average relay queue length
  double n_s = 0.0;   // time-average secondary own-queue length
  double d_p = 0.0;   // average primary packet delay, slots
  double d_s = 0.0;   // average secondary packet delay, slots
  double epsilon = 0.0;  // probability a delivered primary packet was relayed
  double g00 = 0.0;      // both primary and secondary own queue empty
  bool condition_warning = false;  // stability slack below kConditionWarnSlack
};

// Coefficients of the rational closed form for the relay queue length:
// N_sp(x) = (m x^2 + n x) / (alpha x^2 + beta x + gamma), x = lambda_p.
struct RelayLenCoeffs {
  double m, n, alpha, beta, gamma;
};

// Coefficients of the closed form for the secondary own-queue length:
// N_s = (lambda_p lambda_s A + (lambda_s^2 - lambda_s) B (B + lambda_p)) / (B C).
struct OwnLenCoeffs {
  double A, B, C;
};

// Service rate of the primary queue: a packet leaves when at least one of
// destination and secondary decodes it. Symmetric in f_pd and f_ps.
double primary_service_rate(const ChannelProfile& c);

// Relay-queue stability bound on lambda_p; strictly below the service rate
// and strictly decreasing in a.
double primary_rate_bound(const ChannelProfile& c, PolicyParam a);

// Own-queue stability bound on lambda_s at a given primary load; strictly
// increasing in a. Throws Error(primary_overloaded) when lambda_p >= mu_p.
double secondary_rate_bound(const ChannelProfile& c, PolicyParam a,
                            double lambda_p);

// Region membership plus both bounds and the feasible a-interval.
StabilityReport is_stable(const OperatingPoint& p,
                          double margin = kStabilityMargin);

// Open interval of service probabilities keeping both queues stable at the
// given rates, intersected with (0,1); empty when no a works.
// Throws Error(primary_overloaded) when lambda_p >= mu_p.
AInterval feasible_a_interval(const ChannelProfile& c, const ArrivalRates& r);

// Outer boundary of the union of the per-a regions (equals the region of any
// work-conserving cooperative policy); clamped at zero.
double union_boundary(const ChannelProfile& c, double lambda_p);

// Baseline without relaying: the primary queue drains at f_pd and the
// secondary transmits only in primary-idle slots. Supplied as a baseline
// model and validated against the relaying-disabled simulator.
// Throws Error(primary_overloaded) when lambda_p >= f_pd.
double no_cooperation_boundary(const ChannelProfile& c, double lambda_p);

// Probability that a departing primary packet was decoded only by the
// secondary and traverses the relay queue.
double relay_capture_prob(const ChannelProfile& c);

// Time-average primary queue length; independent of a and lambda_s.
double avg_len_p(const ChannelProfile& c, double lambda_p);

// Coefficient blocks are exposed so tests can pin them against hand
// computation. These take a raw `a` with no range validation (limit studies
// evaluate them at interval endpoints).
RelayLenCoeffs relay_len_coeffs(const ChannelProfile& c, double a);
OwnLenCoeffs own_len_coeffs(const ChannelProfile& c, double a,
                            const ArrivalRates& r);

// Time-average relay queue length. Throws Error(relay_overloaded) when
// lambda_p >= primary_rate_bound(c, a).
double avg_len_sp(const ChannelProfile& c, PolicyParam a, double lambda_p);

// Time-average secondary own-queue length. Throws Error(unstable) when the
// operating point is not stable.
double avg_len_s(const ChannelProfile& c, PolicyParam a, const ArrivalRates& r);

// Full closed-form report at a stable operating point with positive rates.
// d_p = (n_p + n_sp) / lambda_p and d_s = n_s / lambda_s exactly as stored.
// Throws Error(unstable) or Error(zero_rate_flow, "pu"|"su").
DelayReport delay_report(const OperatingPoint& p);

// Stationary probability the primary queue is empty: 1 - lambda_p / mu_p.
double prob_primary_idle(const ChannelProfile& c, double lambda_p);

// Stationary probability both the primary and the secondary own queue are
// empty (the relay queue is not part of this event).
double prob_both_empty(const ChannelProfile& c, PolicyParam a,
                       const ArrivalRates& r);

// Raw-parameter delay formulas for limit studies at interval endpoints; no
// range validation on `a`, the caller guarantees the queue being read is
// stable there. primary delay needs lambda_p < primary bound at `a`;
// secondary delay needs lambda_s below its bound at `a`.
double primary_delay_formula(const ChannelProfile& c, double lambda_p, double a);
double secondary_delay_formula(const ChannelProfile& c, const ArrivalRates& r,
                               double a);

}  // namespace coopra::analysis
