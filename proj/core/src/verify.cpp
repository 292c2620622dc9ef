#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "csf/runner.hpp"

namespace csf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

CriterionResult result(int id, const char* name, bool ok, std::string detail) {
  return {id, name, ok ? Verdict::Pass : Verdict::Fail, std::move(detail)};
}

CriterionResult insufficient(int id, const char* name, std::string detail) {
  return {id, name, Verdict::Insufficient, std::move(detail)};
}

/// Non-increasing up to a relative tolerance, with a net decrease.
bool trend_down(const std::vector<double>& v, double rel_noise, double abs_noise = 0.0) {
  if (v.size() < 2) return false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + rel_noise * std::abs(v[i - 1]) + abs_noise) return false;
  }
  return v.back() < v.front();
}

/// Median of each of `blocks` consecutive runs of equal length must not
/// rise above the previous one by more than the noise, and the last must be
/// below the first. Per-row differences late in a run are dominated by
/// vertex quantization, so only block medians carry the trend.
bool blocks_down(const std::vector<double>& v, std::size_t blocks, double rel_noise, double abs_noise = 0.0) {
  if (blocks < 2 || v.size() < 2 * blocks) return false;
  std::vector<double> med;
  for (std::size_t b = 0; b < blocks; ++b) {
    std::vector<double> part(v.begin() + b * v.size() / blocks, v.begin() + (b + 1) * v.size() / blocks);
    std::nth_element(part.begin(), part.begin() + part.size() / 2, part.end());
    med.push_back(part[part.size() / 2]);
  }
  return trend_down(med, rel_noise, abs_noise);
}

/// Time remaining until the vanishing time for every row, built from the
/// row-to-row area loss and closed off after the last row with the
/// instantaneous loss rate 2 pi + 4 alpha. The spec estimate uses
/// 2 pi + 2 alpha, which overstates T - t.
std::vector<double> reference_remaining(const std::vector<TraceRecord>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> rem(n);
  const TraceRecord& last = rows.back();
  rem[n - 1] = last.A / (kTwoPi + 4.0 * last.alpha);
  for (std::size_t k = n - 1; k > 0; --k) {
    const double rate = rows[k].area_rate;
    double dt = 0.0;
    if (std::isfinite(rate) && rate > 0.0) {
      dt = (rows[k - 1].A - rows[k].A) / rate;
    } else {
      dt = std::max(0.0, (rows[k].t - rows[k - 1].t));
    }
    rem[k - 1] = rem[k] + dt;
  }
  return rem;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Insufficient: return "INSUFFICIENT DATA";
  }
  return "?";
}

bool VerifyReport::all_pass() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.verdict == Verdict::Pass; });
}

VerifyReport verify(const std::vector<TraceRecord>& rows, const VerifyThresholds& th) {
  VerifyReport rep;
  auto& out = rep.criteria;

  {
    const CircleOracle c = circle_oracle();
    out.push_back(result(1, "circle oracle", c.max_error <= 1e-3 && c.order_ratio >= 3.5,
                         fmt("max |R_num - R| = %.3g, error(N/2)/error(N) = %.2f", c.max_error, c.order_ratio)));
  }
  if (rows.size() < 2) {
    const char* names[] = {"area slope", "angle decay", "grim reaper", "Y-bound", "X-bound", "bowtie",
                           "migration", "structure", "identities", "nodal estimate"};
    for (int id = 2; id <= 11; ++id) out.push_back(insufficient(id, names[id - 2], "fewer than two trace rows"));
    return rep;
  }

  const std::size_t n = rows.size();
  const std::vector<double> rem = reference_remaining(rows);
  const double span_decades = std::log10(rem.front() / rem.back());
  const bool deep_enough = span_decades >= th.min_span_decades;
  std::vector<std::size_t> late;
  for (std::size_t i = 0; i < n; ++i) {
    if (rem[i] <= std::pow(10.0, th.late_decades) * rem.back()) late.push_back(i);
  }
  const bool late_ok = deep_enough && late.size() >= th.min_late_rows;
  const std::string late_why = fmt("trace spans %.2f decades of T - t (need %.0f) with %.0f rows in the late window",
                                   span_decades, th.min_span_decades, static_cast<double>(late.size()));
  // Trends are read over the later part of the run in log T - t.
  const double trend_cut = rem.back() * std::pow(rem.front() / rem.back(), 1.0 - th.trend_fraction);
  std::vector<std::size_t> trend_rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (rem[i] <= trend_cut) trend_rows.push_back(i);
  }
  auto trend_values = [&](auto get) {
    std::vector<double> v;
    for (std::size_t i : trend_rows) v.push_back(get(i));
    return v;
  };
  const TraceRecord& first = rows.front();
  const TraceRecord& last = rows.back();

  // 2. Area slope.
  {
    double worst_lo = std::numeric_limits<double>::infinity();
    double worst_hi = -std::numeric_limits<double>::infinity();
    std::size_t bad = 0, checked = 0;
    for (std::size_t k = 1; k < n; ++k) {
      const double rate = rows[k].area_rate;
      if (!std::isfinite(rate)) continue;
      ++checked;
      const double alpha = 0.5 * (rows[k - 1].alpha + rows[k].alpha);
      const double lo = kTwoPi * th.slope_low;
      const double hi = (kTwoPi + 2.0 * alpha) * th.slope_high;
      worst_lo = std::min(worst_lo, rate / lo);
      worst_hi = std::max(worst_hi, rate / hi);
      if (rate < lo || rate > hi) ++bad;
    }
    if (!late_ok) {
      out.push_back(insufficient(2, "area slope", late_why));
    } else {
      double worst_ratio = 0.0;
      for (std::size_t i : late) worst_ratio = std::max(worst_ratio, std::abs(rows[i].A / rem[i] / kTwoPi - 1.0));
      const bool ok = checked > 0 && bad == 0 && worst_ratio <= th.area_ratio_tol;
      out.push_back(result(2, "area slope", ok,
                           fmt("%.0f of %.0f slopes outside [0.95*2pi, 1.05*(2pi+2alpha)]", static_cast<double>(bad),
                               static_cast<double>(checked)) +
                               fmt("; max slope/upper = %.4f; late max |A/(T-t)/2pi - 1| = %.4f", worst_hi,
                                   worst_ratio)));
    }
  }

  // 3. Angle decay.
  if (!late_ok) {
    out.push_back(insufficient(3, "angle decay", late_why));
  } else {
    std::vector<double> alpha;
    for (std::size_t i = 0; i < n; ++i) {
      if (rem[i] <= th.transient_fraction * rem.front()) alpha.push_back(rows[i].alpha);
    }
    const bool mono = trend_down(alpha, th.trend_noise);
    const bool halved = last.alpha <= 0.5 * first.alpha;
    out.push_back(result(3, "angle decay", mono && halved,
                         fmt("alpha(0) = %.4f, alpha(end) = %.4f, ", first.alpha, last.alpha) +
                             (mono ? "monotone after transient" : "not monotone after transient")));
  }

  // 4. Grim Reaper.
  if (!late_ok) {
    out.push_back(insufficient(4, "grim reaper", late_why));
  } else {
    const bool down =
        blocks_down(trend_values([&](std::size_t i) { return rows[i].gr_gap_F; }), th.trend_blocks, th.trend_noise);
    const bool ok = down && last.gr_gap_F <= th.gap_F_end && last.gr_gap_Ftheta <= th.gap_Ftheta_end;
    out.push_back(result(4, "grim reaper", ok,
                         fmt("gap_F(end) = %.4f, gap_Ftheta(end) = %.4f, ", last.gr_gap_F, last.gr_gap_Ftheta) +
                             (down ? "gap_F decreasing late" : "gap_F not decreasing late")));
  }

  // 5. Y-bound.
  if (!late_ok) {
    out.push_back(insufficient(5, "Y-bound", late_why));
  } else {
    const double target = std::numbers::pi / 2;
    const double ky = last.kappa_right * last.Y;
    const bool ok = std::abs(ky / target - 1.0) <= th.y_bound_tol;
    out.push_back(result(5, "Y-bound", ok, fmt("kappa(pi/2) Y at end = %.4f (pi/2 = %.4f)", ky, target)));
  }

  // 6. X-bound, with beta and ell referred to the reference vanishing time.
  if (!late_ok) {
    out.push_back(insufficient(6, "X-bound", late_why));
  } else {
    double beta_min = std::numeric_limits<double>::infinity();
    double beta_spec_min = beta_min;
    bool ell_up = true;
    double prev_ell = -std::numeric_limits<double>::infinity();
    for (std::size_t i : late) {
      const double scale = rows[i].T_minus_t / rem[i];
      const double beta = rows[i].beta * scale;
      const double ell = rows[i].ell - 0.5 * std::log(1.0 / scale);
      beta_min = std::min(beta_min, beta);
      beta_spec_min = std::min(beta_spec_min, rows[i].beta);
      if (!(ell > prev_ell)) ell_up = false;
      prev_ell = ell;
    }
    const bool ok = beta_min > 2.0 && ell_up;
    out.push_back(result(6, "X-bound", ok,
                         fmt("late min beta = %.4f (%.4f against the spec estimate T_hat), ", beta_min,
                             beta_spec_min) +
                             (ell_up ? "ell strictly increasing" : "ell not strictly increasing")));
  }

  // 7. Bowtie.
  if (!late_ok) {
    out.push_back(insufficient(7, "bowtie", late_why));
  } else {
    const bool closer = last.bowtie_dist < first.bowtie_dist && last.bowtie_dist <= th.bowtie_end;
    const bool area_in = last.box_area >= th.box_area_lo && last.box_area <= th.box_area_hi;
    const bool area_down =
        blocks_down(trend_values([&](std::size_t i) { return rows[i].box_area; }), th.trend_blocks, th.trend_noise);
    out.push_back(result(7, "bowtie", closer && area_in && area_down,
                         fmt("bowtie distance %.4f -> %.4f, ", first.bowtie_dist, last.bowtie_dist) +
                             fmt("box area at end %.4f, ", last.box_area) +
                             (area_down ? "decreasing late" : "not decreasing late")));
  }

  // 8. Migration.
  if (!late_ok) {
    out.push_back(insufficient(8, "migration", late_why));
  } else {
    const auto d = trend_values([&](std::size_t i) {
      return std::hypot(rows[i].migration_x - 1.0, rows[i].migration_y - 1.0);
    });
    const bool ok = blocks_down(d, th.trend_blocks, th.trend_noise);
    out.push_back(result(8, "migration", ok,
                         fmt("|m - (1,1)| %.4f -> %.4f over the trend window", d.front(), d.back()) +
                             (ok ? ", block medians decreasing" : ", block medians not decreasing")));
  }

  // 9. Structure preservation.
  {
    bool convex = true, kt = true, zeros = true;
    for (std::size_t i = 0; i < n; ++i) {
      convex = convex && rows[i].convex_margin < 0.0;
      kt = kt && rows[i].kappa_theta_min > 0.0;
      if (i > 0 && rows[i].node_zero_count > rows[i - 1].node_zero_count) zeros = false;
    }
    std::string detail = std::string(convex ? "convex" : "convexity lost") + ", " +
                         (kt ? "kappa_theta > 0" : "kappa_theta margin lost") + ", " +
                         (zeros ? "zero count non-increasing" : "zero count increased");
    out.push_back(result(9, "structure", convex && kt && zeros, detail));
  }

  // 10. Identities (the refinement half needs a second run; see the acceptance suite).
  {
    double sup = 0.0, integ = 0.0;
    for (const auto& r : rows) {
      sup = std::max(sup, r.support_residual);
      integ = std::max(integ, r.integral_residual);
    }
    out.push_back(result(10, "identities", sup <= th.identity_tol && integ <= th.identity_tol,
                         fmt("max support residual %.4g, max integral residual %.4g", sup, integ)));
  }

  // 11. Nodal estimate.
  if (!late_ok) {
    out.push_back(insufficient(11, "nodal estimate", late_why));
  } else {
    bool ok = true;
    for (std::size_t i : late) ok = ok && rows[i].nodal_ok;
    out.push_back(result(11, "nodal estimate", ok, ok ? "P < K on every late row" : "P >= K on a late row"));
  }
  return rep;
}

std::string format_report(const VerifyReport& report) {
  std::string out;
  for (const auto& c : report.criteria) {
    char head[96];
    std::snprintf(head, sizeof head, "[%-17s] %2d %-15s ", to_string(c.verdict), c.id, c.name.c_str());
    out += head + c.detail + "\n";
  }
  return out;
}

}  // namespace csf
