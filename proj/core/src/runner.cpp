#include "csf/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace csf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json record_json(const TraceRecord& r) {
  json j = json::object();
  std::ostringstream row;
  write_trace_row(row, r);
  std::string line = row.str();
  line.pop_back();
  std::istringstream fields(line);
  std::string field;
  for (const char* name : trace_columns()) {
    std::getline(fields, field, ',');
    const double v = std::strtod(field.c_str(), nullptr);
    j[name] = std::isfinite(v) ? json(v) : json(nullptr);
  }
  return j;
}

template <class T>
void take(const json& obj, const char* key, T& dst) {
  if (obj.contains(key)) dst = obj.at(key).get<T>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, _] : obj.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw Error(ErrorKind::Parse, "unknown config key '" + where + k + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::PreconditionViolated, "invalid config: " + msg); };
  if (cfg.seed.kind == SeedKind::Lemniscate) {
    if (!(cfg.seed.a > 0.0)) fail("seed.a must be positive");
    if (cfg.seed.n < 32) fail("seed.n must be >= 32");
  } else if (!cfg.seed.source_path) {
    fail("seed.source_path is required for from_points seeds");
  }
  const StepControl& s = cfg.step;
  if (!(s.safety > 0.0 && s.safety <= 1.0)) fail("step.safety must be in (0, 1]");
  if (!(s.dtheta_max > 0.0)) fail("step.dtheta_max must be positive");
  if (!(s.h_max > 0.0)) fail("step.h_max must be positive");
  if (!(s.kappa_h_stop > 0.0)) fail("step.kappa_h_stop must be positive");
  if (!(s.x_floor > 0.0)) fail("step.x_floor must be positive");
  if (s.max_points < QuarterArc::kMinVertices) fail("step.max_points too small");
  if (!(s.min_ratio >= 0.0 && s.min_ratio < 1.0)) fail("step.min_ratio must be in [0, 1)");
  if (cfg.diag_interval < 1) fail("diag_interval must be >= 1");
  if (!(cfg.J.lo > 0.0 && cfg.J.lo < cfg.J.hi && cfg.J.hi < std::numbers::pi)) {
    fail("J must satisfy 0 < lo < hi < pi");
  }
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  RunConfig cfg;
  try {
    reject_unknown(j, {"seed", "step", "diag_interval", "J", "out_dir", "checkpoint_every", "rng_seed"}, "");
    if (j.contains("seed")) {
      const json& s = j.at("seed");
      reject_unknown(s, {"kind", "a", "n", "source_path"}, "seed.");
      if (s.contains("kind")) {
        const auto kind = s.at("kind").get<std::string>();
        if (kind == "lemniscate") {
          cfg.seed.kind = SeedKind::Lemniscate;
        } else if (kind == "from_points") {
          cfg.seed.kind = SeedKind::FromPoints;
        } else {
          throw Error(ErrorKind::Parse, "config: unknown seed kind '" + kind + "'");
        }
      }
      take(s, "a", cfg.seed.a);
      take(s, "n", cfg.seed.n);
      if (s.contains("source_path") && !s.at("source_path").is_null()) {
        cfg.seed.source_path = s.at("source_path").get<std::string>();
      }
    }
    if (j.contains("step")) {
      const json& s = j.at("step");
      reject_unknown(s, {"safety", "dtheta_max", "h_max", "kappa_h_stop", "x_floor", "max_steps", "max_points",
                         "min_ratio"},
                     "step.");
      take(s, "safety", cfg.step.safety);
      take(s, "dtheta_max", cfg.step.dtheta_max);
      take(s, "h_max", cfg.step.h_max);
      take(s, "kappa_h_stop", cfg.step.kappa_h_stop);
      take(s, "x_floor", cfg.step.x_floor);
      take(s, "max_steps", cfg.step.max_steps);
      take(s, "max_points", cfg.step.max_points);
      take(s, "min_ratio", cfg.step.min_ratio);
    }
    take(j, "diag_interval", cfg.diag_interval);
    if (j.contains("J")) {
      const auto J = j.at("J").get<std::vector<double>>();
      if (J.size() != 2) throw Error(ErrorKind::Parse, "config: J must have two entries");
      cfg.J = {J[0], J[1]};
    }
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    take(j, "checkpoint_every", cfg.checkpoint_every);
    take(j, "rng_seed", cfg.rng_seed);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("config: ") + e.what());
  }
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = {{"kind", cfg.seed.kind == SeedKind::Lemniscate ? "lemniscate" : "from_points"},
               {"a", cfg.seed.a},
               {"n", cfg.seed.n},
               {"source_path", cfg.seed.source_path ? json(cfg.seed.source_path->string()) : json(nullptr)}};
  j["step"] = {{"safety", cfg.step.safety},
               {"dtheta_max", cfg.step.dtheta_max},
               {"h_max", cfg.step.h_max},
               {"kappa_h_stop", cfg.step.kappa_h_stop},
               {"x_floor", cfg.step.x_floor},
               {"max_steps", cfg.step.max_steps},
               {"max_points", cfg.step.max_points},
               {"min_ratio", cfg.step.min_ratio}};
  j["diag_interval"] = cfg.diag_interval;
  j["J"] = {cfg.J.lo, cfg.J.hi};
  j["out_dir"] = cfg.out_dir.string();
  j["checkpoint_every"] = cfg.checkpoint_every;
  j["rng_seed"] = cfg.rng_seed;
  return j.dump(2);
}

RunConfig load_config(const fs::path& path) { return config_from_json(read_file(path)); }

std::string config_hash(const RunConfig& cfg) {
  // out_dir is where results go, not what they are.
  RunConfig c = cfg;
  c.out_dir.clear();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : config_to_json(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Checkpoints

FlowState Checkpoint::state() const {
  FlowState s(QuarterArc(vertices), t);
  s.t_lo = t_lo;
  s.step_index = step;
  return s;
}

Checkpoint make_checkpoint(const FlowState& state, const std::string& hash, std::optional<std::string> stop_reason) {
  Checkpoint cp;
  cp.t = state.t;
  cp.t_lo = state.t_lo;
  cp.T_minus_t = remaining_time(state);
  cp.T_hat = state.t + cp.T_minus_t;
  cp.step = state.step_index;
  cp.vertices.assign(state.arc.vertices().begin(), state.arc.vertices().end());
  cp.stop_reason = std::move(stop_reason);
  cp.config_hash = hash;
  return cp;
}

void save_checkpoint(const Checkpoint& cp, const fs::path& path) {
  // Hand-written so every double keeps 17 significant digits.
  std::ostringstream out;
  out << "{\n  \"schema_version\": " << cp.schema_version << ",\n  \"t\": " << fmt17(cp.t)
      << ",\n  \"t_lo\": " << fmt17(cp.t_lo) << ",\n  \"T_hat\": " << fmt17(cp.T_hat)
      << ",\n  \"T_minus_t\": " << fmt17(cp.T_minus_t) << ",\n  \"step\": " << cp.step
      << ",\n  \"stop_reason\": " << (cp.stop_reason ? json(*cp.stop_reason).dump() : "null")
      << ",\n  \"config_hash\": " << json(cp.config_hash).dump() << ",\n  \"vertices\": [";
  for (std::size_t i = 0; i < cp.vertices.size(); ++i) {
    out << (i ? ",\n    [" : "\n    [") << fmt17(cp.vertices[i].x) << ", " << fmt17(cp.vertices[i].y) << "]";
  }
  out << "\n  ]\n}\n";
  write_file(path, out.str());
}

Checkpoint load_checkpoint(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  Checkpoint cp;
  try {
    cp.schema_version = j.at("schema_version").get<int>();
    if (cp.schema_version != Checkpoint::kSchemaVersion) {
      throw Error(ErrorKind::Parse, path.string() + ": unsupported schema_version " +
                                        std::to_string(cp.schema_version));
    }
    cp.t = j.at("t").get<double>();
    take(j, "t_lo", cp.t_lo);
    cp.T_hat = j.at("T_hat").get<double>();
    take(j, "T_minus_t", cp.T_minus_t);
    take(j, "step", cp.step);
    if (j.contains("stop_reason") && !j.at("stop_reason").is_null()) {
      cp.stop_reason = j.at("stop_reason").get<std::string>();
    }
    take(j, "config_hash", cp.config_hash);
    for (const auto& v : j.at("vertices")) {
      if (v.size() != 2) throw Error(ErrorKind::Parse, path.string() + ": vertex needs two coordinates");
      cp.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
  QuarterArc check(cp.vertices);  // throws InvalidArc
  return cp;
}

// ---------------------------------------------------------------------------
// Trace CSV

void write_trace_header(std::ostream& out) {
  const auto cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_trace_row(std::ostream& out, const TraceRecord& r) {
  const double reals_a[] = {r.t,         r.T_hat,       r.A,         r.X,        r.Y,
                            r.alpha,     r.kappa_top,   r.kappa_right, r.beta,   r.ell,
                            r.gr_gap_F,  r.gr_gap_Ftheta, r.support_residual, r.integral_residual};
  const double reals_b[] = {r.bowtie_dist, r.migration_x, r.migration_y, r.box_area, r.kappa_theta_min,
                            r.convex_margin};
  std::string line;
  for (double v : reals_a) line += fmt17(v) + ",";
  line += std::to_string(r.node_zero_count) + ",";
  for (double v : reals_b) line += fmt17(v) + ",";
  line += std::string(r.nodal_ok ? "1" : "0") + "," + std::to_string(r.step) + "," + std::to_string(r.vertices) +
          "," + fmt17(r.T_minus_t) + "," + fmt17(r.area_rate) + "\n";
  out << line;
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<TraceRecord> rows;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::Parse, "trace line " + std::to_string(lineno) + ": " + msg);
  };

  std::ostringstream header;
  write_trace_header(header);
  std::string expected = header.str();
  expected.pop_back();
  if (!std::getline(in, line)) {
    lineno = 1;
    fail("empty trace");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) fail("unexpected header");

  const std::size_t ncols = trace_columns().size();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      char* end = nullptr;
      const double x = std::strtod(field.c_str(), &end);
      if (field.empty() || *end != '\0') fail("column " + std::to_string(v.size() + 1) + " is not a number");
      v.push_back(x);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (v.size() != ncols) {
      fail("expected " + std::to_string(ncols) + " columns, found " + std::to_string(v.size()));
    }
    auto count = [&](std::size_t i) {
      if (!(v[i] >= 0.0) || v[i] != std::floor(v[i])) fail("column " + std::to_string(i + 1) + " must be a count");
      return static_cast<std::size_t>(v[i]);
    };
    TraceRecord r;
    std::size_t k = 0;
    for (double* dst : {&r.t, &r.T_hat, &r.A, &r.X, &r.Y, &r.alpha, &r.kappa_top, &r.kappa_right, &r.beta, &r.ell,
                        &r.gr_gap_F, &r.gr_gap_Ftheta, &r.support_residual, &r.integral_residual}) {
      *dst = v[k++];
    }
    r.node_zero_count = count(k++);
    for (double* dst : {&r.bowtie_dist, &r.migration_x, &r.migration_y, &r.box_area, &r.kappa_theta_min,
                        &r.convex_margin}) {
      *dst = v[k++];
    }
    const std::size_t nodal = count(k++);
    if (nodal > 1) fail("nodal_ok must be 0 or 1");
    r.nodal_ok = nodal == 1;
    r.step = count(k++);
    r.vertices = count(k++);
    r.T_minus_t = v[k++];
    r.area_rate = v[k++];
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRecord> read_trace(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_trace(in);
}

// ---------------------------------------------------------------------------
// Runs

RunSummary run(const RunConfig& cfg) {
  validate(cfg);
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + cfg.out_dir.string() + ": " + ec.message());
  const std::string hash = config_hash(cfg);
  const auto wall0 = std::chrono::steady_clock::now();

  std::ofstream trace(cfg.out_dir / "trace.csv", std::ios::binary);
  if (!trace) throw Error(ErrorKind::Io, "cannot write " + (cfg.out_dir / "trace.csv").string());
  write_trace_header(trace);

  const FlowState initial(make_seed(cfg.seed));
  const ArcMeasures seed_measures = arc_measures(initial.arc);
  DiagOptions dopts;
  dopts.J = cfg.J;
  dopts.rng_seed = cfg.rng_seed;

  RunSummary summary;
  summary.out_dir = cfg.out_dir;
  bool have_row = false;
  // Time since the last row, summed step by step: t itself has no digits
  // left for these increments once T - t is far below the rounding of T.
  double since_row = 0.0;
  double pending_dt = 0.0;
  std::optional<FlowState> failed_at;

  auto emit = [&](const FlowState& s) {
    TraceRecord r = diag_record_remaining(s, remaining_time(s), dopts);
    if (have_row && since_row > 0.0) r.area_rate = (summary.final_record.A - r.A) / since_row;
    write_trace_row(trace, r);
    summary.final_record = r;
    ++summary.rows;
    have_row = true;
    since_row = 0.0;
  };
  auto hook = [&](const FlowState& s) {
    since_row += pending_dt;
    pending_dt = adaptive_dt(s, cfg.step);
    try {
      if (s.step_index % cfg.diag_interval == 0) emit(s);
    } catch (const Error&) {
      failed_at = s;
      throw;
    }
    if (cfg.checkpoint_every > 0 && s.step_index > 0 && s.step_index % cfg.checkpoint_every == 0) {
      save_checkpoint(make_checkpoint(s, hash),
                      cfg.out_dir / ("checkpoint_" + std::to_string(s.step_index) + ".json"));
    }
  };

  std::optional<EvolveResult> result;
  try {
    result = evolve(initial, cfg.step, 1, hook);
  } catch (const Error& e) {
    // A diagnostic that can no longer be evaluated ends the run like a collapse.
    if (e.kind() != ErrorKind::PreconditionViolated && e.kind() != ErrorKind::DegenerateTriple) throw;
    result = EvolveResult{failed_at ? std::move(*failed_at) : initial, StopReason::Collapse, e.what()};
    have_row = false;
  }
  const FlowState& fin = result->state;
  if (summary.rows == 0 || summary.final_record.step != fin.step_index) {
    try {
      emit(fin);
    } catch (const Error&) {
    }
  }
  trace.close();
  if (!trace) throw Error(ErrorKind::Io, "write failed: trace.csv");

  summary.reason = result->reason;
  summary.detail = result->detail;
  summary.steps = fin.step_index;
  save_checkpoint(make_checkpoint(fin, hash, to_string(result->reason)), cfg.out_dir / "checkpoint_final.json");

  json report;
  report["config_hash"] = hash;
  report["config"] = json::parse(config_to_json(cfg));
  report["stop_reason"] = to_string(result->reason);
  report["stop_detail"] = result->detail;
  report["steps"] = fin.step_index;
  report["rows"] = summary.rows;
  report["resample_events"] = fin.events.size();
  report["t_end"] = fin.t;
  report["T_hat"] = summary.final_record.T_hat;
  report["T_minus_t"] = summary.final_record.T_minus_t;
  report["seed"] = {{"A", seed_measures.A},
                    {"X", seed_measures.X},
                    {"Y", seed_measures.Y},
                    {"alpha", seed_measures.alpha},
                    {"vertices", initial.arc.size()}};
  report["final"] = record_json(summary.final_record);
  report["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_file(cfg.out_dir / "report.json", report.dump(2) + "\n");
  return summary;
}

std::vector<RunSummary> run_sweep(const std::vector<RunConfig>& configs, std::size_t jobs) {
  std::vector<RunSummary> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = run(configs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(jobs, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circle oracle

namespace {

double circle_error(std::size_t n, double r_stop, double safety) {
  std::vector<Point2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    v[i] = {std::cos(a), std::sin(a)};
  }
  ClosedPolyline poly(std::move(v));
  const double t_end = 0.5 * (1.0 - r_stop * r_stop);
  double t = 0.0;
  double worst = 0.0;
  while (t < t_end) {
    double h_min = std::numeric_limits<double>::infinity();
    const auto pv = poly.vertices();
    for (std::size_t i = 0; i < pv.size(); ++i) h_min = std::min(h_min, distance(pv[i], pv[(i + 1) % pv.size()]));
    const double dt = std::min(adaptive_dt(h_min, safety), t_end - t);
    poly = csf_step_closed(poly, dt);
    t = (t_end - t <= dt) ? t_end : t + dt;
    const double exact = std::sqrt(1.0 - 2.0 * t);
    for (const Point2& p : poly.vertices()) worst = std::max(worst, std::abs(norm(p) - exact));
  }
  return worst;
}

}  // namespace

CircleOracle circle_oracle(std::size_t n, double r_stop, double safety) {
  CircleOracle c;
  c.max_error = circle_error(n, r_stop, safety);
  c.order_ratio = circle_error(n / 2, r_stop, safety) / c.max_error;
  return c;
}

}  // namespace csf
