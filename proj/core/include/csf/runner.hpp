#pragma once

// Run configuration, trace and checkpoint persistence, SVG snapshots and
// trace verification.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csf/diagnostics.hpp"
#include "csf/flow.hpp"
#include "csf/renorm.hpp"
#include "csf/seeds.hpp"

namespace csf {

struct RunConfig {
  SeedSpec seed;
  StepControl step;
  std::size_t diag_interval = 2000;
  Interval J{0.7853981633974483, 2.356194490192345};
  std::filesystem::path out_dir = "out";
  /// Intermediate checkpoint cadence in steps; 0 writes only the final one.
  std::size_t checkpoint_every = 0;
  std::uint64_t rng_seed = 0;
};

/// Throws PreconditionViolated describing the first invalid field.
void validate(const RunConfig& cfg);

/// JSON round trip. Missing keys keep their defaults; unknown keys are
/// rejected (Parse).
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

/// FNV-1a hash (hex) of the canonical JSON form; recorded as provenance.
std::string config_hash(const RunConfig& cfg);

struct Checkpoint {
  static constexpr int kSchemaVersion = 1;
  int schema_version = kSchemaVersion;
  double t = 0.0;
  double t_lo = 0.0;
  double T_hat = 0.0;
  double T_minus_t = 0.0;
  std::size_t step = 0;
  std::vector<Point2> vertices;
  std::optional<std::string> stop_reason;
  std::string config_hash;

  FlowState state() const;
};

Checkpoint make_checkpoint(const FlowState& state, const std::string& hash,
                           std::optional<std::string> stop_reason = std::nullopt);
void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
/// Throws Io or Parse; the vertices must form a valid QuarterArc.
Checkpoint load_checkpoint(const std::filesystem::path& path);

void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const TraceRecord& r);
/// Throws Parse with the offending line number on malformed input.
std::vector<TraceRecord> read_trace(std::istream& in);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);

struct RunSummary {
  StopReason reason = StopReason::MaxSteps;
  std::string detail;
  std::size_t steps = 0;
  std::size_t rows = 0;
  TraceRecord final_record;
  std::filesystem::path out_dir;
};

/// Evolves the configured seed, writing trace.csv, checkpoints and
/// report.json to cfg.out_dir. Output is deterministic given the config.
RunSummary run(const RunConfig& cfg);

/// Independent runs in parallel, at most `jobs` at a time. Results are in
/// input order; a failed run rethrows after all runs finish.
std::vector<RunSummary> run_sweep(const std::vector<RunConfig>& configs, std::size_t jobs);

enum class Verdict { Pass, Fail, Insufficient };
const char* to_string(Verdict v);

struct CriterionResult {
  int id = 0;
  std::string name;
  Verdict verdict = Verdict::Insufficient;
  std::string detail;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool all_pass() const;
};

/// Thresholds for the trace-level acceptance checks.
struct VerifyThresholds {
  double slope_low = 0.95;
  double slope_high = 1.05;
  double area_ratio_tol = 0.10;
  double gap_F_end = 0.1;
  double gap_Ftheta_end = 0.2;
  double y_bound_tol = 0.15;
  double bowtie_end = 0.2;
  double box_area_lo = 2.0;
  double box_area_hi = 2.3;
  double identity_tol = 0.02;
  /// Relative noise allowed between consecutive values in trend checks.
  double trend_noise = 1e-3;
  /// Angle monotonicity is checked once T - t has dropped below this
  /// fraction of its initial value.
  double transient_fraction = 0.1;
  /// Late-time criteria need the trace to span this many decades of T - t.
  double min_span_decades = 3.0;
  /// The late-time window is the final this-many decades of T - t.
  double late_decades = 1.0;
  /// Decreasing trends are read over this fraction, in log T - t, at the
  /// end of the trace.
  double trend_fraction = 0.5;
  /// Trends compare medians of this many consecutive blocks of rows.
  std::size_t trend_blocks = 4;
  /// Minimum rows in the late window.
  std::size_t min_late_rows = 5;
};

/// Evaluates the acceptance criteria that are functions of a trace.
/// Pure: depends only on the rows (and the deterministic circle oracle for
/// the first criterion).
VerifyReport verify(const std::vector<TraceRecord>& rows, const VerifyThresholds& th = {});

/// Renders one line per criterion.
std::string format_report(const VerifyReport& report);

/// Circle oracle: a closed N-gon on the unit circle flowed until R = r_stop.
struct CircleOracle {
  double max_error = 0.0;
  double order_ratio = 0.0;  ///< error(N/2) / error(N)
};
CircleOracle circle_oracle(std::size_t n = 512, double r_stop = 0.3, double safety = 0.4);

struct SvgOptions {
  double size = 600.0;
  double margin = 30.0;
  bool overlay_bowtie = true;
};

/// SVG of the reconstructed figure-eight under `mode`; in box mode also the
/// bowtie and the two points where theta = 0 and theta = pi.
std::string render_svg(const QuarterArc& arc, const RenormMode& mode, const SvgOptions& opts = {});
/// The bowtie quadrilateral alone, in the box-mode viewport.
std::string render_bowtie_svg(const SvgOptions& opts = {});
void snapshot_svg(const Checkpoint& cp, const RenormMode& mode, const std::filesystem::path& svg_path,
                  const SvgOptions& opts = {});

}  // namespace csf
