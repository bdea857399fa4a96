#include "piflow/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "piflow/errors.hpp"

namespace piflow {

double solution_quality(const std::vector<double>& outcomes, double mu_ref) {
  if (outcomes.empty()) {
    throw EmptyOutcomesError("solution quality needs at least one outcome");
  }
  if (!(mu_ref > 0.0)) {
    throw NonPositiveReferenceError("mu_ref = " + std::to_string(mu_ref));
  }
  const double best = *std::max_element(outcomes.begin(), outcomes.end());
  return 100.0 * best / mu_ref;
}

double auc_percent(const std::vector<double>& outcomes, double mu_ref) {
  if (outcomes.size() < 2) {
    throw FewerThanTwoPointsError("auc needs at least two outcomes");
  }
  if (!(mu_ref > 0.0)) {
    throw NonPositiveReferenceError("mu_ref = " + std::to_string(mu_ref));
  }
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < outcomes.size(); ++i) {
    area += 0.5 * (outcomes[i] + outcomes[i + 1]);
  }
  const double steps = static_cast<double>(outcomes.size() - 1);
  return 100.0 * area / (mu_ref * steps);
}

std::vector<RegretPoint> regret_series(const std::vector<double>& outcomes,
                                       double v_star) {
  if (outcomes.empty()) {
    throw EmptyOutcomesError("regret series needs at least one outcome");
  }
  std::vector<RegretPoint> series;
  series.reserve(outcomes.size());
  double cumulative = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    cumulative += v_star - outcomes[i];
    series.push_back(RegretPoint{static_cast<int>(i) + 1,
                                 cumulative / static_cast<double>(i + 1)});
  }
  return series;
}

PowerLawFit fit_power_law(const std::vector<RegretPoint>& series,
                          bool error_on_nonpositive) {
  std::vector<double> log_t;
  std::vector<double> log_r;
  std::size_t dropped = 0;
  for (const auto& point : series) {
    if (point.average_regret > 0.0) {
      log_t.push_back(std::log(static_cast<double>(point.t)));
      log_r.push_back(std::log(point.average_regret));
    } else {
      if (error_on_nonpositive) {
        throw NonPositiveValuesError("regret at t=" + std::to_string(point.t) +
                                     " is not positive");
      }
      ++dropped;
    }
  }
  const std::size_t n = log_t.size();
  if (n < 3) {
    throw FewerThanThreePointsError(
        "power-law fit needs at least three positive regret values");
  }

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += log_t[i];
    mean_y += log_r[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = log_t[i] - mean_x;
    const double dy = log_r[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }

  PowerLawFit fit;
  fit.dropped = dropped;
  const double slope = sxy / sxx;  // log t values are distinct, sxx > 0
  const double intercept = mean_y - slope * mean_x;
  fit.exponent = slope;
  fit.c = std::exp(intercept);
  if (syy <= 0.0) {
    // Zero total variance: the flat fit is exact by convention.
    fit.exponent = 0.0;
    fit.c = std::exp(mean_y);
    fit.r_squared = 1.0;
    return fit;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double predicted = intercept + slope * log_t[i];
    const double residual = log_r[i] - predicted;
    ss_res += residual * residual;
  }
  fit.r_squared = 1.0 - ss_res / syy;
  if (fit.r_squared < 0.0) fit.r_squared = 0.0;
  if (fit.r_squared > 1.0) fit.r_squared = 1.0;
  return fit;
}

double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw LengthMismatchError("series sizes differ");
  }
  const std::size_t n = a.size();
  if (n < 3) {
    throw FewerThanThreePointsError("correlation needs at least three points");
  }
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    throw UndefinedCorrelationError("a series has zero variance");
  }
  double corr = sab / std::sqrt(saa * sbb);
  if (corr < -1.0) corr = -1.0;
  if (corr > 1.0) corr = 1.0;
  return corr;
}

double info_regret_correlation(const std::vector<double>& info_gain,
                               const std::vector<double>& instant_regret) {
  return pearson_correlation(info_gain, instant_regret);
}

MetricSummary summarize(const std::vector<double>& outcomes, double mu_ref,
                        double v_star, const std::vector<double>& info_gain) {
  MetricSummary summary;
  if (outcomes.empty()) return summary;
  summary.sq_percent = solution_quality(outcomes, mu_ref);
  if (outcomes.size() >= 2) {
    summary.auc_percent = auc_percent(outcomes, mu_ref);
  }
  summary.regret = regret_series(outcomes, v_star);
  try {
    summary.fit = fit_power_law(summary.regret);
  } catch (const Error&) {
    // Too few positive points; leave the fit unset.
  }
  if (!info_gain.empty()) {
    std::vector<double> instant;
    instant.reserve(outcomes.size());
    for (double y : outcomes) instant.push_back(v_star - y);
    try {
      summary.info_regret_corr = info_regret_correlation(info_gain, instant);
    } catch (const Error&) {
      // Undefined (short or zero-variance series); leave unset.
    }
  }
  return summary;
}

}  // namespace piflow
