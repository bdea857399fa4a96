#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace piflow {

// Best outcome as a percentage of the reference value; may exceed 100.
double solution_quality(const std::vector<double>& outcomes, double mu_ref);

// Trapezoidal area under the outcome curve, normalized by mu_ref*(t-1),
// as a percentage. Needs at least two points.
double auc_percent(const std::vector<double>& outcomes, double mu_ref);

struct RegretPoint {
  int t = 0;
  double average_regret = 0.0;

  bool operator==(const RegretPoint&) const = default;
};

// average_regret(T) = (1/T) * sum_{t<=T} (v_star - y_t). Negative values are
// allowed (outcomes may exceed v_star).
std::vector<RegretPoint> regret_series(const std::vector<double>& outcomes,
                                       double v_star);

struct PowerLawFit {
  double c = 0.0;         // exp(intercept) of the log-log OLS fit
  double exponent = 0.0;  // slope
  double r_squared = 0.0;
  std::size_t dropped = 0;  // non-positive regret values excluded from the fit

  bool operator==(const PowerLawFit&) const = default;
};

// OLS on (log t, log r). Non-positive regret values are dropped and counted
// (or rejected wholesale with error_on_nonpositive). A zero-variance series
// fits exactly flat: exponent 0, r_squared 1. Needs >= 3 usable points.
PowerLawFit fit_power_law(const std::vector<RegretPoint>& series,
                          bool error_on_nonpositive = false);

// Pearson correlation. Throws fewer-than-three-points and, when either series
// has zero variance, undefined-correlation.
double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);

// Correlation between the per-step information-gain proxy (exploration score
// of the acted-on principle) and instantaneous regret.
double info_regret_correlation(const std::vector<double>& info_gain,
                               const std::vector<double>& instant_regret);

// Aggregate over one run's valid outcomes. Fields stay unset when their
// prerequisites are unmet (too few points, undefined correlation, ...).
struct MetricSummary {
  std::optional<double> sq_percent;
  std::optional<double> auc_percent;
  std::vector<RegretPoint> regret;
  std::optional<PowerLawFit> fit;
  std::optional<double> info_regret_corr;

  bool operator==(const MetricSummary&) const = default;
};

MetricSummary summarize(const std::vector<double>& outcomes, double mu_ref,
                        double v_star,
                        const std::vector<double>& info_gain = {});

}  // namespace piflow
