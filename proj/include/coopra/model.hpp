#pragma once

// Shared domain vocabulary for the two-user cognitive-radio access system:
// link-success probabilities, Bernoulli arrival rates, the randomized service
// probability, queue-length triples and the per-slot event classification.
// All types are immutable values and freely shareable across threads.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coopra {

enum class ErrorCode {
  out_of_range,
  primary_overloaded,
  relay_overloaded,
  unstable,
  zero_rate_flow,
  infeasible,
  no_deliveries,
  bad_config,
};

const char* to_string(ErrorCode code);

// Typed error carrying the offending field or flow where applicable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string field, const std::string& message)
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

[[noreturn]] void throw_out_of_range(const std::string& field, double value,
                                     const std::string& expected);

// Success probabilities of the three links: primary user to destination,
// secondary user to destination, primary user to secondary user.
struct ChannelProfile {
  double f_pd = 0.0;
  double f_sd = 0.0;
  double f_ps = 0.0;
};

// Bernoulli packet arrival rates, packets per slot.
struct ArrivalRates {
  double lambda_p = 0.0;
  double lambda_s = 0.0;
};

// Probability that, in a primary-idle slot, the secondary serves its own
// queue rather than the relay queue.
struct PolicyParam {
  double a = 0.0;
};

struct OperatingPoint {
  ChannelProfile channel;
  ArrivalRates rates;
  PolicyParam a;
};

// Queue lengths at a slot start. The model has infinite buffers; the
// representation is wide enough for any supported horizon, and the
// simulator refuses horizons that could approach it.
struct QueueTriple {
  std::uint64_t q_p = 0;
  std::uint64_t q_sp = 0;
  std::uint64_t q_s = 0;

  friend bool operator==(const QueueTriple&, const QueueTriple&) = default;
};

// Exactly one transmitter label per slot. `wasted` is the non-work-conserving
// case: the primary is idle, the randomly selected secondary queue is empty
// and the other secondary-side queue is not.
enum class Transmitter { pu, su_own, su_relay, idle, wasted };

enum class Departure { none, pu_direct, pu_to_relay, relay_to_dest, su_to_dest };

struct SlotOutcome {
  Transmitter transmitter = Transmitter::idle;
  bool pu_arrival = false;
  bool su_arrival = false;
  Departure departure = Departure::none;

  friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

const char* to_string(Transmitter t);
const char* to_string(Departure d);

// Strict validation used by the closed-form layers: channel probabilities and
// the service probability must lie strictly inside (0,1) because the closed
// forms divide by expressions that vanish at the boundaries; arrival rates
// must lie in [0,1). Throws Error(out_of_range, field).
void validate_channel(const ChannelProfile& c);
void validate_rates(const ArrivalRates& r);
void validate_policy_param(PolicyParam a);
OperatingPoint validate_point(const OperatingPoint& p);

// Lenient bounds for the simulator, which tolerates boundary values for
// degenerate studies: probabilities in [0,1], rates in [0,1].
void validate_channel_sim(const ChannelProfile& c);
void validate_rates_sim(const ArrivalRates& r);

}  // namespace coopra
