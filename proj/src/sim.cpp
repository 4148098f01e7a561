#include "coopra/sim.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>
#include <thread>

#include "coopra/rng.hpp"

namespace coopra::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Horizons near the counter width would make slot arithmetic unsafe.
constexpr std::uint64_t kMaxHorizon = 1ull << 40;

void validate_config(const SimConfig& cfg) {
  validate_channel_sim(cfg.channel);
  validate_rates_sim(cfg.rates);
  if (cfg.policy.kind == Policy::Kind::randomized &&
      (!(cfg.policy.a >= 0.0) || !(cfg.policy.a <= 1.0))) {
    throw_out_of_range("policy.a", cfg.policy.a, "a value in [0, 1]");
  }
  if (cfg.horizon == 0 || cfg.horizon > kMaxHorizon) {
    throw Error(ErrorCode::bad_config, "sim.horizon",
                "horizon must be in [1, 2^40]");
  }
  if (cfg.warmup >= cfg.horizon) {
    throw Error(ErrorCode::bad_config, "sim.warmup",
                "warmup must be smaller than horizon");
  }
  if (cfg.replications == 0) {
    throw Error(ErrorCode::bad_config, "sim.replications",
                "at least one replication is required");
  }
}

ReplicationStats run_replication(const SimConfig& cfg, std::uint64_t rep) {
  using rng::Stream;
  const std::uint64_t s_pu = rng::substream_seed(cfg.seed, rep, Stream::pu_arrival);
  const std::uint64_t s_su = rng::substream_seed(cfg.seed, rep, Stream::su_arrival);
  const std::uint64_t s_pd = rng::substream_seed(cfg.seed, rep, Stream::pd_link);
  const std::uint64_t s_sh = rng::substream_seed(cfg.seed, rep, Stream::ps_sd_link);
  const std::uint64_t s_qs = rng::substream_seed(cfg.seed, rep, Stream::queue_select);

  std::deque<std::uint64_t> qp, qsp, qs;  // arrival slot per queued packet

  ReplicationStats st;
  st.window_slots = cfg.horizon - cfg.warmup;
  std::uint64_t trace = rng::kFnvOffset;
  std::uint64_t sum_np = 0, sum_nsp = 0, sum_ns = 0;
  std::uint64_t cnt_g00 = 0, cnt_g01 = 0;
  double sum_dp = 0.0, sum_ds = 0.0;

  for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
    const bool in_window = t >= cfg.warmup;
    trace = (trace ^ qp.size()) * rng::kFnvPrime;
    if (in_window) {
      sum_np += qp.size();
      sum_nsp += qsp.size();
      sum_ns += qs.size();
      cnt_g01 += qp.empty();
      cnt_g00 += qp.empty() && qs.empty();
    }

    const QueueTriple state{qp.size(), qsp.size(), qs.size()};
    const SlotDraws draws{rng::uniform_at(s_pu, t), rng::uniform_at(s_su, t),
                          rng::uniform_at(s_pd, t), rng::uniform_at(s_sh, t),
                          rng::uniform_at(s_qs, t)};
    const StepResult res = step(state, cfg.channel, cfg.rates, cfg.policy, draws);

    switch (res.outcome.departure) {
      case Departure::pu_direct: {
        const std::uint64_t arrived = qp.front();
        qp.pop_front();
        ++st.delivered_p;
        ++st.delivered_p_direct;
        if (in_window) {
          ++st.delivered_p_win;
          sum_dp += static_cast<double>(t - arrived);
        }
        break;
      }
      case Departure::pu_to_relay: {
        // Keeps its original arrival slot: the sojourn spans both queues.
        qsp.push_back(qp.front());
        qp.pop_front();
        break;
      }
      case Departure::relay_to_dest: {
        const std::uint64_t arrived = qsp.front();
        qsp.pop_front();
        ++st.delivered_p;
        ++st.delivered_p_relayed;
        if (in_window) {
          ++st.delivered_p_win;
          ++st.delivered_p_relayed_win;
          sum_dp += static_cast<double>(t - arrived);
        }
        break;
      }
      case Departure::su_to_dest: {
        const std::uint64_t arrived = qs.front();
        qs.pop_front();
        ++st.delivered_s;
        if (in_window) {
          ++st.delivered_s_win;
          sum_ds += static_cast<double>(t - arrived);
        }
        break;
      }
      case Departure::none:
        break;
    }

    if (in_window) {
      st.idle_slots += res.outcome.transmitter == Transmitter::idle;
      st.wasted_slots += res.outcome.transmitter == Transmitter::wasted;
    }
    if (res.outcome.pu_arrival) {
      qp.push_back(t);
      ++st.arrivals_p;
    }
    if (res.outcome.su_arrival) {
      qs.push_back(t);
      ++st.arrivals_s;
    }
    assert(res.next == (QueueTriple{qp.size(), qsp.size(), qs.size()}));
  }

  st.residual_qp = qp.size();
  st.residual_qsp = qsp.size();
  st.residual_qs = qs.size();
  st.qp_trace_hash = trace;

  const double window = static_cast<double>(st.window_slots);
  st.n_p = static_cast<double>(sum_np) / window;
  st.n_sp = static_cast<double>(sum_nsp) / window;
  st.n_s = static_cast<double>(sum_ns) / window;
  st.g00 = static_cast<double>(cnt_g00) / window;
  st.g01 = static_cast<double>(cnt_g01) / window;
  st.throughput_p = static_cast<double>(st.delivered_p_win) / window;
  st.throughput_s = static_cast<double>(st.delivered_s_win) / window;
  st.d_p = st.delivered_p_win ? sum_dp / static_cast<double>(st.delivered_p_win) : kNaN;
  st.d_s = st.delivered_s_win ? sum_ds / static_cast<double>(st.delivered_s_win) : kNaN;
  st.relay_fraction =
      st.delivered_p_win
          ? static_cast<double>(st.delivered_p_relayed_win) /
                static_cast<double>(st.delivered_p_win)
          : kNaN;
  return st;
}

MetricSummary summarize(const std::vector<ReplicationStats>& reps,
                        double ReplicationStats::* field) {
  MetricSummary s;
  const std::size_t n = reps.size();
  double sum = 0.0;
  for (const auto& r : reps) sum += r.*field;
  s.mean = sum / static_cast<double>(n);
  if (n < 2) {
    s.ci95 = kNaN;
    return s;
  }
  double ss = 0.0;
  for (const auto& r : reps) {
    const double d = r.*field - s.mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(n));
  return s;
}

}  // namespace

const char* to_string(Policy::Kind k) {
  switch (k) {
    case Policy::Kind::randomized: return "randomized";
    case Policy::Kind::priority_relay: return "priority_relay";
    case Policy::Kind::no_cooperation: return "no_cooperation";
  }
  return "unknown";
}

const char* to_string(StabilityVerdict v) {
  return v == StabilityVerdict::bounded ? "bounded" : "diverging";
}

SlotDraws draws_for_slot(std::uint64_t master_seed, std::uint64_t replication,
                         std::uint64_t slot) {
  using rng::Stream;
  return SlotDraws{
      rng::uniform_at(rng::substream_seed(master_seed, replication, Stream::pu_arrival), slot),
      rng::uniform_at(rng::substream_seed(master_seed, replication, Stream::su_arrival), slot),
      rng::uniform_at(rng::substream_seed(master_seed, replication, Stream::pd_link), slot),
      rng::uniform_at(rng::substream_seed(master_seed, replication, Stream::ps_sd_link), slot),
      rng::uniform_at(rng::substream_seed(master_seed, replication, Stream::queue_select), slot)};
}

StepResult step(const QueueTriple& state, const ChannelProfile& c,
                const ArrivalRates& r, const Policy& policy,
                const SlotDraws& draws) {
  StepResult res{state, {}};
  QueueTriple& next = res.next;
  SlotOutcome& out = res.outcome;

  if (state.q_p > 0) {
    out.transmitter = Transmitter::pu;
    if (draws.u_pd < c.f_pd) {
      --next.q_p;
      out.departure = Departure::pu_direct;
    } else if (policy.kind != Policy::Kind::no_cooperation &&
               draws.u_shared < c.f_ps) {
      --next.q_p;
      ++next.q_sp;
      out.departure = Departure::pu_to_relay;
    }
    // Neither node decoded: the packet stays for retransmission.
  } else {
    switch (policy.kind) {
      case Policy::Kind::randomized: {
        // The queue is chosen before looking at its occupancy; an empty pick
        // wastes the slot whenever the other queue is backlogged.
        const bool pick_own = draws.u_select < policy.a;
        const std::uint64_t selected = pick_own ? state.q_s : state.q_sp;
        const std::uint64_t other = pick_own ? state.q_sp : state.q_s;
        if (selected == 0) {
          out.transmitter =
              other == 0 ? Transmitter::idle : Transmitter::wasted;
        } else {
          out.transmitter = pick_own ? Transmitter::su_own : Transmitter::su_relay;
          if (draws.u_shared < c.f_sd) {
            if (pick_own) {
              --next.q_s;
              out.departure = Departure::su_to_dest;
            } else {
              --next.q_sp;
              out.departure = Departure::relay_to_dest;
            }
          }
        }
        break;
      }
      case Policy::Kind::priority_relay: {
        if (state.q_sp > 0) {
          out.transmitter = Transmitter::su_relay;
          if (draws.u_shared < c.f_sd) {
            --next.q_sp;
            out.departure = Departure::relay_to_dest;
          }
        } else if (state.q_s > 0) {
          out.transmitter = Transmitter::su_own;
          if (draws.u_shared < c.f_sd) {
            --next.q_s;
            out.departure = Departure::su_to_dest;
          }
        } else {
          out.transmitter = Transmitter::idle;
        }
        break;
      }
      case Policy::Kind::no_cooperation: {
        if (state.q_s > 0) {
          out.transmitter = Transmitter::su_own;
          if (draws.u_shared < c.f_sd) {
            --next.q_s;
            out.departure = Departure::su_to_dest;
          }
        } else {
          out.transmitter = Transmitter::idle;
        }
        break;
      }
    }
  }

  out.pu_arrival = draws.u_pu_arrival < r.lambda_p;
  out.su_arrival = draws.u_su_arrival < r.lambda_s;
  if (out.pu_arrival) ++next.q_p;
  if (out.su_arrival) ++next.q_s;
  return res;
}

SimResult run(const SimConfig& cfg, const RunOptions& options) {
  validate_config(cfg);

  SimResult result;
  result.config = cfg;
  result.replications.resize(cfg.replications);

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.threads, cfg.replications));
  if (workers == 1) {
    for (std::uint32_t rep = 0; rep < cfg.replications; ++rep) {
      result.replications[rep] = run_replication(cfg, rep);
    }
  } else {
    std::atomic<std::uint32_t> next_rep{0};
    auto worker = [&] {
      for (;;) {
        const std::uint32_t rep = next_rep.fetch_add(1);
        if (rep >= cfg.replications) return;
        result.replications[rep] = run_replication(cfg, rep);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (!options.allow_empty_flows) {
    for (const auto& rep : result.replications) {
      if (rep.delivered_p_win == 0) {
        throw Error(ErrorCode::no_deliveries, "pu",
                    "primary flow delivered no packets post-warmup");
      }
      if (rep.delivered_s_win == 0) {
        throw Error(ErrorCode::no_deliveries, "su",
                    "secondary flow delivered no packets post-warmup");
      }
    }
  }

  const auto& reps = result.replications;
  result.n_p = summarize(reps, &ReplicationStats::n_p);
  result.n_sp = summarize(reps, &ReplicationStats::n_sp);
  result.n_s = summarize(reps, &ReplicationStats::n_s);
  result.d_p = summarize(reps, &ReplicationStats::d_p);
  result.d_s = summarize(reps, &ReplicationStats::d_s);
  result.throughput_p = summarize(reps, &ReplicationStats::throughput_p);
  result.throughput_s = summarize(reps, &ReplicationStats::throughput_s);
  result.g00 = summarize(reps, &ReplicationStats::g00);
  result.g01 = summarize(reps, &ReplicationStats::g01);
  result.relay_fraction = summarize(reps, &ReplicationStats::relay_fraction);
  double idle = 0.0, wasted = 0.0;
  for (const auto& rep : reps) {
    idle += static_cast<double>(rep.idle_slots);
    wasted += static_cast<double>(rep.wasted_slots);
  }
  result.idle_slots_mean = idle / static_cast<double>(reps.size());
  result.wasted_slots_mean = wasted / static_cast<double>(reps.size());
  return result;
}

StabilityVerdict stability_probe(const SimConfig& cfg, double threshold,
                                 const RunOptions& options) {
  RunOptions probe_options = options;
  probe_options.allow_empty_flows = true;
  const SimResult res = run(cfg, probe_options);
  const double limit =
      threshold * (1.0 + std::log10(static_cast<double>(cfg.horizon)));
  std::uint32_t divergent = 0;
  for (const auto& rep : res.replications) {
    const std::uint64_t longest =
        std::max(rep.residual_qp, std::max(rep.residual_qsp, rep.residual_qs));
    divergent += static_cast<double>(longest) > limit;
  }
  return 2 * divergent > cfg.replications ? StabilityVerdict::diverging
                                          : StabilityVerdict::bounded;
}

}  // namespace coopra::sim
