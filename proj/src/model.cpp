#include "coopra/model.hpp"

#include <cmath>
#include <sstream>

namespace coopra {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::primary_overloaded: return "primary_overloaded";
    case ErrorCode::relay_overloaded: return "relay_overloaded";
    case ErrorCode::unstable: return "unstable";
    case ErrorCode::zero_rate_flow: return "zero_rate_flow";
    case ErrorCode::infeasible: return "infeasible";
    case ErrorCode::no_deliveries: return "no_deliveries";
    case ErrorCode::bad_config: return "bad_config";
  }
  return "unknown";
}

const char* to_string(Transmitter t) {
  switch (t) {
    case Transmitter::pu: return "pu";
    case Transmitter::su_own: return "su_own";
    case Transmitter::su_relay: return "su_relay";
    case Transmitter::idle: return "idle";
    case Transmitter::wasted: return "wasted";
  }
  return "unknown";
}

const char* to_string(Departure d) {
  switch (d) {
    case Departure::none: return "none";
    case Departure::pu_direct: return "pu_direct";
    case Departure::pu_to_relay: return "pu_to_relay";
    case Departure::relay_to_dest: return "relay_to_dest";
    case Departure::su_to_dest: return "su_to_dest";
  }
  return "unknown";
}

void throw_out_of_range(const std::string& field, double value,
                        const std::string& expected) {
  std::ostringstream os;
  os << field << " = " << value << " is out of range, expected " << expected;
  throw Error(ErrorCode::out_of_range, field, os.str());
}

namespace {

void require_open_unit(const std::string& field, double v) {
  if (!(v > 0.0) || !(v < 1.0) || !std::isfinite(v)) {
    throw_out_of_range(field, v, "a value strictly inside (0, 1)");
  }
}

void require_rate(const std::string& field, double v) {
  if (!(v >= 0.0) || !(v < 1.0) || !std::isfinite(v)) {
    throw_out_of_range(field, v, "a rate in [0, 1)");
  }
}

void require_closed_unit(const std::string& field, double v) {
  if (!(v >= 0.0) || !(v <= 1.0) || !std::isfinite(v)) {
    throw_out_of_range(field, v, "a value in [0, 1]");
  }
}

}  // namespace

void validate_channel(const ChannelProfile& c) {
  require_open_unit("f_pd", c.f_pd);
  require_open_unit("f_sd", c.f_sd);
  require_open_unit("f_ps", c.f_ps);
}

void validate_rates(const ArrivalRates& r) {
  require_rate("lambda_p", r.lambda_p);
  require_rate("lambda_s", r.lambda_s);
}

void validate_policy_param(PolicyParam a) { require_open_unit("a", a.a); }

OperatingPoint validate_point(const OperatingPoint& p) {
  validate_channel(p.channel);
  validate_rates(p.rates);
  validate_policy_param(p.a);
  return p;
}

void validate_channel_sim(const ChannelProfile& c) {
  require_closed_unit("f_pd", c.f_pd);
  require_closed_unit("f_sd", c.f_sd);
  require_closed_unit("f_ps", c.f_ps);
}

void validate_rates_sim(const ArrivalRates& r) {
  require_closed_unit("lambda_p", r.lambda_p);
  require_closed_unit("lambda_s", r.lambda_s);
}

}  // namespace coopra
