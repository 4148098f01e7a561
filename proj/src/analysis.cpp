#include "coopra/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coopra::analysis {

namespace {

double relay_intake(const ChannelProfile& c) {
  // Per busy primary slot: destination misses, secondary decodes.
  return c.f_ps * (1.0 - c.f_pd);
}

[[noreturn]] void throw_primary_overloaded(double lambda_p, double limit) {
  std::ostringstream os;
  os << "lambda_p = " << lambda_p << " is at or above the primary service limit "
     << limit;
  throw Error(ErrorCode::primary_overloaded, "lambda_p", os.str());
}

}  // namespace

double primary_service_rate(const ChannelProfile& c) {
  validate_channel(c);
  return 1.0 - (1.0 - c.f_pd) * (1.0 - c.f_ps);
}

double primary_rate_bound(const ChannelProfile& c, PolicyParam a) {
  validate_channel(c);
  validate_policy_param(a);
  const double mu_p = 1.0 - (1.0 - c.f_pd) * (1.0 - c.f_ps);
  const double relay_service = c.f_sd * (1.0 - a.a);
  return relay_service / (relay_service + relay_intake(c)) * mu_p;
}

double secondary_rate_bound(const ChannelProfile& c, PolicyParam a,
                            double lambda_p) {
  validate_channel(c);
  validate_policy_param(a);
  const double mu_p = primary_service_rate(c);
  if (!(lambda_p < mu_p)) throw_primary_overloaded(lambda_p, mu_p);
  return a.a * c.f_sd * (1.0 - lambda_p / mu_p);
}

StabilityReport is_stable(const OperatingPoint& p, double margin) {
  validate_point(p);
  StabilityReport rep;
  rep.mu_p = primary_service_rate(p.channel);
  rep.lambda_p_max = primary_rate_bound(p.channel, p.a);
  if (p.rates.lambda_p < rep.mu_p) {
    rep.lambda_s_max = secondary_rate_bound(p.channel, p.a, p.rates.lambda_p);
    rep.a_interval = feasible_a_interval(p.channel, p.rates);
  }
  rep.stable = p.rates.lambda_p < rep.lambda_p_max - margin &&
               p.rates.lambda_s < rep.lambda_s_max - margin;
  return rep;
}

AInterval feasible_a_interval(const ChannelProfile& c, const ArrivalRates& r) {
  validate_channel(c);
  validate_rates(r);
  const double mu_p = primary_service_rate(c);
  if (!(r.lambda_p < mu_p)) throw_primary_overloaded(r.lambda_p, mu_p);
  const double headroom = c.f_sd * (mu_p - r.lambda_p);
  AInterval iv;
  iv.lo = std::max(r.lambda_s * mu_p / headroom, 0.0);
  iv.hi = std::min(1.0 - relay_intake(c) * r.lambda_p / headroom, 1.0);
  return iv;
}

double union_boundary(const ChannelProfile& c, double lambda_p) {
  validate_channel(c);
  const double mu_p = primary_service_rate(c);
  const double slope = (c.f_sd + relay_intake(c)) / mu_p;
  return std::max(c.f_sd - slope * lambda_p, 0.0);
}

double no_cooperation_boundary(const ChannelProfile& c, double lambda_p) {
  validate_channel(c);
  if (!(lambda_p < c.f_pd)) throw_primary_overloaded(lambda_p, c.f_pd);
  return c.f_sd * (1.0 - lambda_p / c.f_pd);
}

double relay_capture_prob(const ChannelProfile& c) {
  validate_channel(c);
  return relay_intake(c) / primary_service_rate(c);
}

double avg_len_p(const ChannelProfile& c, double lambda_p) {
  const double mu_p = primary_service_rate(c);
  if (!(lambda_p < mu_p)) throw_primary_overloaded(lambda_p, mu_p);
  return (lambda_p - lambda_p * lambda_p) / (mu_p - lambda_p);
}

RelayLenCoeffs relay_len_coeffs(const ChannelProfile& c, double a) {
  validate_channel(c);
  const double mu_p = 1.0 - (1.0 - c.f_pd) * (1.0 - c.f_ps);
  const double intake = relay_intake(c);
  const double service = (1.0 - a) * c.f_sd;
  RelayLenCoeffs k;
  k.m = intake * ((service - c.f_pd) / mu_p - service - intake);
  k.n = intake * mu_p;
  k.alpha = service + intake;
  k.beta = mu_p * (-2.0 * service - intake);
  k.gamma = service * mu_p * mu_p;
  return k;
}

namespace {

double relay_len_formula(const ChannelProfile& c, double a, double lambda_p) {
  const RelayLenCoeffs k = relay_len_coeffs(c, a);
  return (k.m * lambda_p * lambda_p + k.n * lambda_p) /
         (k.alpha * lambda_p * lambda_p + k.beta * lambda_p + k.gamma);
}

double own_len_formula(const ChannelProfile& c, double a,
                       const ArrivalRates& r) {
  const OwnLenCoeffs k = own_len_coeffs(c, a, r);
  const double numerator =
      r.lambda_p * r.lambda_s * k.A +
      (r.lambda_s * r.lambda_s - r.lambda_s) * k.B * (k.B + r.lambda_p);
  return numerator / (k.B * k.C);
}

}  // namespace

double avg_len_sp(const ChannelProfile& c, PolicyParam a, double lambda_p) {
  validate_policy_param(a);
  const double bound = primary_rate_bound(c, a);
  if (!(lambda_p < bound)) {
    std::ostringstream os;
    os << "lambda_p = " << lambda_p
       << " is at or above the relay-queue bound " << bound;
    throw Error(ErrorCode::relay_overloaded, "lambda_p", os.str());
  }
  return relay_len_formula(c, a.a, lambda_p);
}

OwnLenCoeffs own_len_coeffs(const ChannelProfile& c, double a,
                            const ArrivalRates& r) {
  validate_channel(c);
  validate_rates(r);
  const double mu_p = 1.0 - (1.0 - c.f_pd) * (1.0 - c.f_ps);
  OwnLenCoeffs k;
  k.A = a * c.f_sd * (mu_p - 1.0);
  k.B = mu_p - r.lambda_p;
  k.C = (r.lambda_s - a * c.f_sd) * mu_p + a * c.f_sd * r.lambda_p;
  return k;
}

double avg_len_s(const ChannelProfile& c, PolicyParam a,
                 const ArrivalRates& r) {
  const OperatingPoint p{c, r, a};
  if (!is_stable(p).stable) {
    throw Error(ErrorCode::unstable, "rates",
                "operating point is outside the stable throughput region");
  }
  return own_len_formula(c, a.a, r);
}

DelayReport delay_report(const OperatingPoint& p) {
  const StabilityReport st = is_stable(p);
  if (!st.stable) {
    throw Error(ErrorCode::unstable, "rates",
                "operating point is outside the stable throughput region");
  }
  if (!(p.rates.lambda_p > 0.0)) {
    throw Error(ErrorCode::zero_rate_flow, "pu",
                "primary delay is undefined at lambda_p = 0");
  }
  if (!(p.rates.lambda_s > 0.0)) {
    throw Error(ErrorCode::zero_rate_flow, "su",
                "secondary delay is undefined at lambda_s = 0");
  }
  DelayReport rep;
  rep.n_p = avg_len_p(p.channel, p.rates.lambda_p);
  rep.n_sp = relay_len_formula(p.channel, p.a.a, p.rates.lambda_p);
  rep.n_s = own_len_formula(p.channel, p.a.a, p.rates);
  rep.d_p = (rep.n_p + rep.n_sp) / p.rates.lambda_p;
  rep.d_s = rep.n_s / p.rates.lambda_s;
  rep.epsilon = relay_capture_prob(p.channel);
  rep.g00 = prob_both_empty(p.channel, p.a, p.rates);
  rep.condition_warning =
      st.lambda_p_max - p.rates.lambda_p < kConditionWarnSlack ||
      st.lambda_s_max - p.rates.lambda_s < kConditionWarnSlack;
  return rep;
}

double prob_primary_idle(const ChannelProfile& c, double lambda_p) {
  const double mu_p = primary_service_rate(c);
  if (!(lambda_p < mu_p)) throw_primary_overloaded(lambda_p, mu_p);
  return 1.0 - lambda_p / mu_p;
}

double prob_both_empty(const ChannelProfile& c, PolicyParam a,
                       const ArrivalRates& r) {
  validate_channel(c);
  validate_policy_param(a);
  validate_rates(r);
  const double mu_p = primary_service_rate(c);
  const double own_service = a.a * c.f_sd;
  return (own_service * (mu_p - r.lambda_p) - r.lambda_s * mu_p) /
         (own_service * mu_p);
}

double primary_delay_formula(const ChannelProfile& c, double lambda_p,
                             double a) {
  return (avg_len_p(c, lambda_p) + relay_len_formula(c, a, lambda_p)) /
         lambda_p;
}

double secondary_delay_formula(const ChannelProfile& c, const ArrivalRates& r,
                               double a) {
  return own_len_formula(c, a, r) / r.lambda_s;
}

}  // namespace coopra::analysis
