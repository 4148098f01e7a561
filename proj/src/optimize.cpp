#include "coopra/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "coopra/rng.hpp"

namespace coopra::optimize {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kGoldenTol = 1e-8;
constexpr int kScanPoints = 64;
constexpr int kFallbackGridPoints = 4097;

double objective_value(const Objective& obj, const analysis::DelayReport& rep) {
  switch (obj.kind) {
    case ObjectiveKind::min_primary_delay: return rep.d_p;
    case ObjectiveKind::min_secondary_delay: return rep.d_s;
    case ObjectiveKind::weighted_sum: return obj.w_p * rep.d_p + obj.w_s * rep.d_s;
  }
  return kNaN;
}

// Golden-section minimization on [lo, hi]; f must be unimodal there.
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Valley shape check: non-increasing up to the argmin, non-decreasing after.
bool scan_is_unimodal(const std::vector<double>& values) {
  const std::size_t k = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double slack = 1e-12 * (1.0 + std::abs(values[i]));
    if (i < k && values[i + 1] > values[i] + slack) return false;
    if (i >= k && values[i + 1] < values[i] - slack) return false;
  }
  return true;
}

}  // namespace

const char* to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::min_primary_delay: return "min_primary_delay";
    case ObjectiveKind::min_secondary_delay: return "min_secondary_delay";
    case ObjectiveKind::weighted_sum: return "weighted_sum";
  }
  return "unknown";
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::lambda_p: return "lambda_p";
    case SweepAxis::lambda_s: return "lambda_s";
    case SweepAxis::lambda_joint: return "lambda_joint";
  }
  return "unknown";
}

OptimalA optimal_a(const OptimizationRequest& req) {
  validate_channel(req.channel);
  validate_rates(req.rates);
  if (req.objective.kind == ObjectiveKind::weighted_sum) {
    if (!(req.objective.w_p >= 0.0) || !(req.objective.w_s >= 0.0) ||
        req.objective.w_p + req.objective.w_s <= 0.0) {
      throw_out_of_range("weights", req.objective.w_p + req.objective.w_s,
                         "nonnegative weights, not both zero");
    }
  }

  const analysis::AInterval interval =
      analysis::feasible_a_interval(req.channel, req.rates);
  if (interval.empty()) {
    throw Error(ErrorCode::infeasible, "a_interval",
                "no service probability keeps the system stable at these rates");
  }
  if (!(req.margin > 0.0) || !(req.margin < interval.width() / 2.0)) {
    std::ostringstream os;
    os << "margin = " << req.margin
       << " does not fit inside the feasible interval of width "
       << interval.width();
    throw_out_of_range("margin", req.margin, os.str());
  }

  const double lo = interval.lo + req.margin;
  const double hi = interval.hi - req.margin;
  auto report_at = [&](double a) {
    return analysis::delay_report({req.channel, req.rates, PolicyParam{a}});
  };

  OptimalA result;
  result.interval = interval;
  switch (req.objective.kind) {
    case ObjectiveKind::min_primary_delay: {
      result.a_star = lo;
      result.report = report_at(lo);
      result.objective_value = result.report.d_p;
      result.unattained_infimum = analysis::primary_delay_formula(
          req.channel, req.rates.lambda_p, interval.lo);
      break;
    }
    case ObjectiveKind::min_secondary_delay: {
      result.a_star = hi;
      result.report = report_at(hi);
      result.objective_value = result.report.d_s;
      result.unattained_infimum =
          analysis::secondary_delay_formula(req.channel, req.rates, interval.hi);
      break;
    }
    case ObjectiveKind::weighted_sum: {
      auto f = [&](double a) { return objective_value(req.objective, report_at(a)); };
      std::vector<double> scan(kScanPoints);
      for (int i = 0; i < kScanPoints; ++i) {
        const double a = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(kScanPoints - 1);
        scan[static_cast<std::size_t>(i)] = f(a);
      }
      if (scan_is_unimodal(scan)) {
        result.a_star = golden_section(f, lo, hi, kGoldenTol);
      } else {
        result.unimodality_warning = true;
        double best_a = lo;
        double best_f = std::numeric_limits<double>::infinity();
        for (int i = 0; i < kFallbackGridPoints; ++i) {
          const double a = lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(kFallbackGridPoints - 1);
          const double v = f(a);
          if (v < best_f) {
            best_f = v;
            best_a = a;
          }
        }
        result.a_star = best_a;
      }
      result.report = report_at(result.a_star);
      result.objective_value = objective_value(req.objective, result.report);
      result.unattained_infimum = result.objective_value;
      break;
    }
  }
  return result;
}

namespace {

void resolve_rates(const SweepSpec& spec, double grid_value, double& lambda_p,
                   double& lambda_s) {
  switch (spec.axis) {
    case SweepAxis::lambda_p:
      lambda_p = grid_value;
      lambda_s = spec.fixed_rate;
      break;
    case SweepAxis::lambda_s:
      lambda_p = spec.fixed_rate;
      lambda_s = grid_value;
      break;
    case SweepAxis::lambda_joint:
      lambda_p = grid_value;
      lambda_s = grid_value;
      break;
  }
}

std::string status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::infeasible:
    case ErrorCode::primary_overloaded:
    case ErrorCode::unstable:
      return "infeasible";
    case ErrorCode::out_of_range:
      // A margin that cannot fit means the interval is effectively empty.
      return e.field() == "margin" ? "infeasible"
                                   : std::string("error:") + to_string(e.code());
    default:
      return std::string("error:") + to_string(e.code());
  }
}

SweepRow make_row(const SweepSpec& spec, std::size_t index,
                  std::size_t policy_idx) {
  const std::size_t grid_idx = index / spec.policies.size();
  SweepRow row;
  row.index = grid_idx;
  row.policy = spec.policies[policy_idx];
  row.a_star = kNaN;
  resolve_rates(spec, spec.grid[grid_idx], row.lambda_p, row.lambda_s);
  const ArrivalRates rates{row.lambda_p, row.lambda_s};

  try {
    if (row.policy.kind == sim::Policy::Kind::randomized) {
      const OptimalA best =
          optimal_a({spec.channel, rates, spec.objective, spec.margin});
      row.a_star = best.a_star;
      row.analytic = best.report;
      row.unimodality_warning = best.unimodality_warning;
      row.status = "ok";
      return row;
    }

    bool feasible = false;
    if (row.policy.kind == sim::Policy::Kind::priority_relay) {
      // Work-conserving relaying is stable exactly inside the union region.
      feasible =
          row.lambda_p <
              analysis::primary_service_rate(spec.channel) - analysis::kStabilityMargin &&
          row.lambda_s < analysis::union_boundary(spec.channel, row.lambda_p) -
                             analysis::kStabilityMargin;
    } else {
      feasible =
          row.lambda_p < spec.channel.f_pd - analysis::kStabilityMargin &&
          row.lambda_s <
              analysis::no_cooperation_boundary(spec.channel, row.lambda_p) -
                  analysis::kStabilityMargin;
    }
    if (!feasible) {
      row.status = "infeasible";
      return row;
    }

    sim::SimConfig cfg;
    cfg.channel = spec.channel;
    cfg.rates = rates;
    cfg.policy = row.policy;
    cfg.horizon = spec.sim_horizon;
    cfg.warmup = spec.sim_warmup;
    cfg.replications = spec.sim_replications;
    cfg.seed = rng::derive_seed(spec.seed, "sweep-row", grid_idx * 16 + policy_idx);
    const sim::SimResult res = sim::run(cfg);
    SimSummary summary;
    summary.d_p = res.d_p.mean;
    summary.d_p_ci95 = res.d_p.ci95;
    summary.d_s = res.d_s.mean;
    summary.d_s_ci95 = res.d_s.ci95;
    summary.n_p = res.n_p.mean;
    summary.n_sp = res.n_sp.mean;
    summary.n_s = res.n_s.mean;
    summary.throughput_p = res.throughput_p.mean;
    summary.throughput_s = res.throughput_s.mean;
    row.simulated = summary;
    row.status = "ok";
  } catch (const Error& e) {
    row.status = status_for(e);
  }
  return row;
}

}  // namespace

std::vector<SweepRow> tradeoff_sweep(const SweepSpec& spec, unsigned threads) {
  validate_channel(spec.channel);
  if (spec.grid.empty()) {
    throw Error(ErrorCode::bad_config, "sweep.grid", "grid must be non-empty");
  }
  if (!std::is_sorted(spec.grid.begin(), spec.grid.end()) ||
      std::adjacent_find(spec.grid.begin(), spec.grid.end()) != spec.grid.end()) {
    throw Error(ErrorCode::bad_config, "sweep.grid",
                "grid must be strictly increasing");
  }
  if (spec.policies.empty()) {
    throw Error(ErrorCode::bad_config, "sweep.policies",
                "at least one policy is required");
  }

  const std::size_t total = spec.grid.size() * spec.policies.size();
  std::vector<SweepRow> rows(total);
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, total));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) {
      rows[i] = make_row(spec, i, i % spec.policies.size());
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= total) return;
        rows[i] = make_row(spec, i, i % spec.policies.size());
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace coopra::optimize
