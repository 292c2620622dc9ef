// Acceptance suite: runs the reference lemniscate configuration, checks the
// trace against every criterion, and adds the refinement study that a single
// trace cannot provide. Prints one PASS/FAIL line per criterion; exit status
// is zero only if all of them pass.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "csf/runner.hpp"

namespace fs = std::filesystem;

namespace {

// Refinement study: every resolution knob divided by this factor.
constexpr double kRefineFactor = 4.0;
// Residuals must shrink at least this much under that refinement.
constexpr double kRefineGain = 4.0;
// Early window over which both discretisations are compared.
constexpr double kWindowEnd = 0.05;
constexpr int kWindowSamples = 5;

struct WindowResiduals {
  double support = 0.0;
  double integral = 0.0;
};

/// Largest support and integral-identity residuals at kWindowSamples equally
/// spaced times in (0, kWindowEnd], landing on each time exactly.
WindowResiduals early_window(const csf::RunConfig& cfg) {
  csf::FlowState s(csf::make_seed(cfg.seed));
  const double x0 = s.arc.back().x;
  WindowResiduals out;
  for (int k = 1; k <= kWindowSamples; ++k) {
    const double target = kWindowEnd * k / kWindowSamples;
    while (s.t < target) {
      const double dt = std::min(csf::adaptive_dt(s, cfg.step), target - s.t);
      s = csf::csf_step(std::move(s), dt, csf::step_policy(cfg.step, x0, s.arc.back().x));
    }
    const csf::ThetaProfile p = csf::theta_profile(s.arc);
    const csf::ArcMeasures m = csf::arc_measures(s.arc);
    out.support = std::max(out.support, csf::support_profile(s.arc).residual);
    out.integral = std::max(out.integral, csf::integral_identity_residual(p, m.Y, m.kappa_right,
                                                                           csf::default_quadrature_cutoff(p)));
  }
  return out;
}

csf::RunConfig refined(csf::RunConfig cfg) {
  cfg.seed.n = static_cast<std::size_t>(static_cast<double>(cfg.seed.n) * kRefineFactor);
  cfg.step.h_max /= kRefineFactor;
  cfg.step.dtheta_max /= kRefineFactor;
  return cfg;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria on the reference run"};
  std::string config_path, out_dir = "acceptance", trace_path;
  app.add_option("--config", config_path, "Reference run config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "Where the reference run is written");
  app.add_option("--trace", trace_path, "Verify this trace instead of running the reference config");
  CLI11_PARSE(app, argc, argv);

  try {
    csf::RunConfig cfg = csf::load_config(config_path);
    cfg.out_dir = fs::path(out_dir) / "reference";
    const auto wall0 = std::chrono::steady_clock::now();
    if (trace_path.empty()) {
      std::printf("reference run -> %s\n", cfg.out_dir.string().c_str());
      std::fflush(stdout);
      const csf::RunSummary s = csf::run(cfg);
      std::printf("  stop=%s steps=%zu rows=%zu X=%.3g T-t=%.3g\n", csf::to_string(s.reason), s.steps, s.rows,
                  s.final_record.X, s.final_record.T_minus_t);
      trace_path = (cfg.out_dir / "trace.csv").string();
    }
    const csf::VerifyReport trace_report = csf::verify(csf::read_trace(fs::path(trace_path)));

    std::printf("refinement study over t <= %.3g (x%.0f)\n", kWindowEnd, kRefineFactor);
    std::fflush(stdout);
    const WindowResiduals base = early_window(cfg);
    const WindowResiduals fine = early_window(refined(cfg));
    const double gain_support = base.support / fine.support;
    const double gain_integral = base.integral / fine.integral;
    std::printf("  support residual %.3g -> %.3g, integral residual %.3g -> %.3g\n", base.support, fine.support,
                base.integral, fine.integral);

    csf::VerifyReport report = trace_report;
    for (auto& c : report.criteria) {
      if (c.id != 10) continue;
      const bool refine_ok = gain_support >= kRefineGain && gain_integral >= kRefineGain;
      if (c.verdict == csf::Verdict::Pass && !refine_ok) c.verdict = csf::Verdict::Fail;
      c.detail += fmt("; refinement gains %.2fx (support), %.2fx (integral)", gain_support, gain_integral);
    }

    std::printf("\n");
    for (const auto& c : report.criteria) {
      std::printf("%s %2d %s: %s\n", c.verdict == csf::Verdict::Pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                  c.verdict == csf::Verdict::Insufficient ? ("insufficient data, " + c.detail).c_str()
                                                          : c.detail.c_str());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    std::printf("\n%s (%.0f s)\n", report.all_pass() ? "all criteria pass" : "some criteria failed", wall);
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
