// csf8: seed, run, verify and snapshot figure-eight curve shortening runs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "csf/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunFlags {
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::string> seed_file;
  std::optional<double> a;
  std::optional<std::size_t> n;
  std::optional<double> safety, dtheta_max, h_max, kappa_h_stop, x_floor, min_ratio;
  std::optional<std::size_t> max_steps, max_points, diag_interval, checkpoint_every;
  std::optional<std::uint64_t> rng_seed;
  std::vector<double> J;
  std::vector<std::string> sweep;
  std::size_t jobs = 0;
};

void apply(const RunFlags& f, csf::RunConfig& cfg) {
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (f.seed_file) {
    cfg.seed.kind = csf::SeedKind::FromPoints;
    cfg.seed.source_path = *f.seed_file;
  }
  if (f.a) cfg.seed.a = *f.a;
  if (f.n) cfg.seed.n = *f.n;
  if (f.safety) cfg.step.safety = *f.safety;
  if (f.dtheta_max) cfg.step.dtheta_max = *f.dtheta_max;
  if (f.h_max) cfg.step.h_max = *f.h_max;
  if (f.kappa_h_stop) cfg.step.kappa_h_stop = *f.kappa_h_stop;
  if (f.x_floor) cfg.step.x_floor = *f.x_floor;
  if (f.min_ratio) cfg.step.min_ratio = *f.min_ratio;
  if (f.max_steps) cfg.step.max_steps = *f.max_steps;
  if (f.max_points) cfg.step.max_points = *f.max_points;
  if (f.diag_interval) cfg.diag_interval = *f.diag_interval;
  if (f.checkpoint_every) cfg.checkpoint_every = *f.checkpoint_every;
  if (f.rng_seed) cfg.rng_seed = *f.rng_seed;
  if (f.J.size() == 2) cfg.J = {f.J[0], f.J[1]};
}

/// "key=v1,v2,..." applied on top of a base config, one run per value.
std::vector<csf::RunConfig> expand_sweep(const csf::RunConfig& base, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw CLI::ValidationError("--sweep", "expected key=v1,v2,...");
  const std::string key = spec.substr(0, eq);
  std::vector<csf::RunConfig> out;
  std::stringstream values(spec.substr(eq + 1));
  std::string v;
  while (std::getline(values, v, ',')) {
    csf::RunConfig c = base;
    const double x = std::stod(v);
    if (key == "n") {
      c.seed.n = static_cast<std::size_t>(x);
    } else if (key == "a") {
      c.seed.a = x;
    } else if (key == "safety") {
      c.step.safety = x;
    } else if (key == "dtheta_max") {
      c.step.dtheta_max = x;
    } else if (key == "h_max") {
      c.step.h_max = x;
    } else if (key == "x_floor") {
      c.step.x_floor = x;
    } else if (key == "rng_seed") {
      c.rng_seed = static_cast<std::uint64_t>(x);
    } else {
      throw CLI::ValidationError("--sweep", "unsupported sweep key '" + key + "'");
    }
    c.out_dir = base.out_dir / (key + "=" + v);
    out.push_back(std::move(c));
  }
  return out;
}

void print_summary(const csf::RunSummary& s) {
  std::printf("%s: stop=%s steps=%zu rows=%zu t=%.17g T_hat-t=%.6g X=%.6g\n", s.out_dir.string().c_str(),
              to_string(s.reason), s.steps, s.rows, s.final_record.t, s.final_record.T_minus_t,
              s.final_record.X);
  if (!s.detail.empty()) std::printf("  detail: %s\n", s.detail.c_str());
}

int cmd_seed(double a, std::size_t n, const std::string& from, const std::string& out) {
  csf::SeedSpec spec;
  spec.a = a;
  spec.n = n;
  if (!from.empty()) {
    spec.kind = csf::SeedKind::FromPoints;
    spec.source_path = from;
  }
  const csf::QuarterArc arc = csf::make_seed(spec);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw csf::Error(csf::ErrorKind::Io, "cannot write " + out);
    f << "x,y\n";
    char buf[64];
    for (const auto& p : arc.vertices()) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.x, p.y);
      f << buf;
    }
  }
  const csf::ArcMeasures m = csf::arc_measures(arc);
  const csf::MonotoneReport r = csf::validate_monotone(arc);
  std::printf("vertices %zu\nA %.10g\nX %.10g\nY %.10g\nalpha %.10g\nkappa_top %.10g\nkappa_right %.10g\n",
              arc.size(), m.A, m.X, m.Y, m.alpha, m.kappa_top, m.kappa_right);
  std::printf("convex %d (margin %.3g)\nkappa_theta_positive %d (min %.6g)\n", r.convex, r.convex_margin,
              r.kappa_theta_positive, r.kappa_theta_min);
  std::printf("kappa_thetatheta_nonzero %d (at right %.6g)\nkx_positive %d (kx at origin %.6g)\nmonotone %d\n",
              r.kappa_thetatheta_nonzero, r.kappa_thetatheta_at_right, r.kx_positive, r.kx_at_origin, r.monotone());
  return r.monotone() ? kExitOk : kExitFail;
}

int cmd_run(const RunFlags& f) {
  csf::RunConfig cfg = f.config_path.empty() ? csf::RunConfig{} : csf::load_config(f.config_path);
  apply(f, cfg);
  if (f.sweep.empty()) {
    print_summary(csf::run(cfg));
    return kExitOk;
  }
  std::vector<csf::RunConfig> configs{cfg};
  for (const auto& s : f.sweep) {
    std::vector<csf::RunConfig> next;
    for (const auto& c : configs) {
      auto expanded = expand_sweep(c, s);
      next.insert(next.end(), expanded.begin(), expanded.end());
    }
    configs = std::move(next);
  }
  for (const auto& c : configs) csf::validate(c);
  const std::size_t jobs = f.jobs ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
  for (const auto& s : csf::run_sweep(configs, jobs)) print_summary(s);
  return kExitOk;
}

int cmd_verify(const std::string& trace) {
  const auto rows = csf::read_trace(std::filesystem::path(trace));
  const csf::VerifyReport rep = csf::verify(rows);
  std::fputs(csf::format_report(rep).c_str(), stdout);
  std::printf("%s\n", rep.all_pass() ? "all criteria pass" : "some criteria did not pass");
  return rep.all_pass() ? kExitOk : kExitFail;
}

int cmd_snapshot(const std::string& checkpoint, const std::string& mode, const std::string& out, bool bowtie_only) {
  if (bowtie_only) {
    std::ofstream f(out);
    if (!f) throw csf::Error(csf::ErrorKind::Io, "cannot write " + out);
    f << csf::render_bowtie_svg();
    return kExitOk;
  }
  const auto kind = csf::renorm_kind_from_string(mode);
  if (!kind) throw CLI::ValidationError("--mode", "unknown mode '" + mode + "'");
  const csf::Checkpoint cp = csf::load_checkpoint(checkpoint);
  csf::snapshot_svg(cp, csf::RenormMode{*kind, std::nullopt, 0.0}, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curve shortening flow of symmetric figure-eight curves"};
  app.require_subcommand(1);

  auto* seed = app.add_subcommand("seed", "Build a seed arc and report its measures and monotonicity");
  double a = 1.0;
  std::size_t n = 800;
  std::string from, seed_out;
  seed->add_option("--a", a, "Lemniscate scale")->check(CLI::PositiveNumber);
  seed->add_option("--n", n, "Vertex count")->check(CLI::Range(32, 10000000));
  seed->add_option("--from", from, "Ingest an x,y CSV instead of the lemniscate");
  seed->add_option("-o,--out", seed_out, "Write the arc as CSV");

  auto* run = app.add_subcommand("run", "Evolve a seed and write trace.csv, checkpoints and report.json");
  RunFlags rf;
  run->add_option("-c,--config", rf.config_path, "JSON config; flags override it")->check(CLI::ExistingFile);
  run->add_option("--out-dir", rf.out_dir, "Output directory");
  run->add_option("--seed-file", rf.seed_file, "Seed from an x,y CSV");
  run->add_option("--a", rf.a, "Lemniscate scale");
  run->add_option("--n", rf.n, "Seed vertex count");
  run->add_option("--safety", rf.safety, "Time step safety factor");
  run->add_option("--dtheta-max", rf.dtheta_max, "Turning angle cap per segment");
  run->add_option("--h-max", rf.h_max, "Segment length cap at the seed size");
  run->add_option("--kappa-h-stop", rf.kappa_h_stop, "Resolution stop threshold");
  run->add_option("--x-floor", rf.x_floor, "Stop when the half-width drops below this");
  run->add_option("--min-ratio", rf.min_ratio, "Crowding trigger for resampling");
  run->add_option("--max-steps", rf.max_steps, "Step budget");
  run->add_option("--max-points", rf.max_points, "Resampling point budget");
  run->add_option("--diag-interval", rf.diag_interval, "Steps between trace rows");
  run->add_option("--checkpoint-every", rf.checkpoint_every, "Steps between checkpoints (0: final only)");
  run->add_option("--rng-seed", rf.rng_seed, "Seed for sampled distances");
  run->add_option("--J", rf.J, "Grim Reaper window lo hi")->expected(2);
  run->add_option("--sweep", rf.sweep, "key=v1,v2,... (repeatable; runs in parallel)");
  run->add_option("-j,--jobs", rf.jobs, "Parallel runs for --sweep");

  auto* verify = app.add_subcommand("verify", "Check a trace against the acceptance criteria");
  std::string trace;
  verify->add_option("trace", trace, "trace.csv")->required();

  auto* snap = app.add_subcommand("snapshot", "Render a checkpoint as SVG");
  std::string checkpoint, mode = "box", svg_out = "snapshot.svg";
  bool bowtie_only = false;
  snap->add_option("checkpoint", checkpoint, "Checkpoint JSON");
  snap->add_option("--mode", mode, "box | width | parabolic | reaper");
  snap->add_option("-o,--out", svg_out, "SVG path");
  snap->add_flag("--bowtie-only", bowtie_only, "Render the bowtie alone");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*seed) return cmd_seed(a, n, from, seed_out);
    if (*run) return cmd_run(rf);
    if (*verify) return cmd_verify(trace);
    if (*snap) {
      if (checkpoint.empty() && !bowtie_only) {
        std::fprintf(stderr, "snapshot: a checkpoint is required\n");
        return kExitUsage;
      }
      return cmd_snapshot(checkpoint, mode, svg_out, bowtie_only);
    }
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const csf::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", csf::to_string(e.kind()), e.what());
    const bool usage = e.kind() == csf::ErrorKind::Io || e.kind() == csf::ErrorKind::Parse ||
                       e.kind() == csf::ErrorKind::PreconditionViolated || e.kind() == csf::ErrorKind::InvalidArc;
    return usage ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
