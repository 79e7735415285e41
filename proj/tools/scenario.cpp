#include "scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "minkdim/dimension.hpp"
#include "minkdim/flow.hpp"
#include "minkdim/retmaps.hpp"
#include "minkdim/theorems.hpp"

namespace minkdim::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

bool known_kind(const std::string& kind) {
  for (const char* k : kKinds) {
    if (kind == k) return true;
  }
  return false;
}

bool one_dimensional(const std::string& kind) { return kind == "sequence" || kind == "saddle-loop"; }

// Typed access to a params object with path-qualified errors.
class Params {
 public:
  Params(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw ConfigError(prefix_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  double number(const std::string& key) const {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long integer(const std::string& key) const {
    const double v = number(key);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9.0e15) {
      throw ConfigError(path(key) + ": expected an integer");
    }
    return static_cast<long>(v);
  }
  long integer(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const long v = integer(key);
    if (v < 0) throw ConfigError(path(key) + ": expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  /// Integer >= 2, or null / absent / "inf" for infinity.
  std::optional<int> order(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    const json& v = j_.at(key);
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::nullopt;
    return static_cast<int>(integer(key));
  }

  Params child(const std::string& key) const {
    if (!has(key)) return Params(json::object(), path(key));
    return Params(j_.at(key), path(key));
  }

  const json& raw(const std::string& key) const { return require(key); }
  std::string path(const std::string& key) const { return prefix_ + "." + key; }

 private:
  const json& require(const std::string& key) const {
    if (!has(key)) throw ConfigError(path(key) + ": required key missing");
    return j_.at(key);
  }

  json j_;
  std::string prefix_;
};

// Library validation failures inside the parameter stage are config errors.
template <class F>
auto validated(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("[") + name + "] " + e.what());
  }
}

DeltaLadder ladder_of(const ScenarioConfig& c) {
  return validated("ladder", [&] {
    return make_ladder(c.ladder.delta_min, c.ladder.delta_max, c.ladder.count);
  });
}

std::vector<Monomial> parse_perturbation(const Params& p) {
  std::vector<Monomial> terms;
  if (!p.has("perturbation")) return terms;
  const json& arr = p.raw("perturbation");
  if (!arr.is_array()) throw ConfigError(p.path("perturbation") + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Params t(arr[i], p.path("perturbation") + "[" + std::to_string(i) + "]");
    terms.push_back({t.number("coefficient"), static_cast<int>(t.integer("x_power")),
                     static_cast<int>(t.integer("y_power"))});
  }
  return terms;
}

json estimate_json(const DimensionEstimate& e) {
  return {{"fit", e.fit},
          {"upper", e.upper},
          {"lower", e.lower},
          {"r_squared", e.r_squared},
          {"window", {{"delta_min", e.window.delta_min}, {"delta_max", e.window.delta_max}}},
          {"ambient_dim", e.ambient_dim},
          {"unconverged", e.unconverged()}};
}

void note_estimate(ResultRecord& r, const DimensionEstimate& e) {
  r.estimate = e;
  if (e.unconverged()) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "upper - lower = %.4f exceeds 0.1; the estimate may not have converged on this "
                  "ladder",
                  e.upper - e.lower);
    r.warnings.emplace_back(buf);
  }
}

ScenarioOutcome run_sequence(const ScenarioConfig& c, const Params& p) {
  const std::string family = p.text("family", "power");
  const std::size_t n = p.count("N", 1'000'000);
  const auto offset = p.count("offset", 1);
  double prediction = 0.0;
  std::optional<MonotoneSequence> seq;
  if (family == "power") {
    const double a = p.number("a");
    seq = validated("params", [&] { return power_sequence(a, n, offset); });
    prediction = 1.0 / (1.0 + a);
  } else if (family == "geometric") {
    const double ratio = p.number("ratio");
    seq = validated("params", [&] { return geometric_sequence(ratio, n, offset); });
  } else {
    throw ConfigError(p.path("family") + ": expected \"power\" or \"geometric\"");
  }
  const DeltaLadder ladder = ladder_of(c);
  ScenarioOutcome out;
  out.ambient = 1;
  out.samples = stage("sample", [&] { return sample_sequence(*seq, ladder); });
  note_estimate(out.record, stage("estimate", [&] { return estimate_dimension(out.samples, 1); }));
  out.record.prediction = prediction;
  out.record.extra["terms"] = seq->size();
  return out;
}

ScenarioOutcome run_bundle(const ScenarioConfig& c, const Params& p, bool saddle) {
  CornerSpec spec;
  if (saddle) {
    spec = SaddleSpec{p.number("alpha"), parse_perturbation(p)};
  } else {
    spec = SemiHypSpec{p.number("alpha"), static_cast<int>(p.integer("m")), parse_perturbation(p)};
  }
  validated("params", [&] { validate(spec); });
  const Params entry = p.child("entry");
  const double a = entry.number("a", 1.0);
  const std::size_t n = entry.count("N", 2000);
  const std::size_t offset = entry.count("offset", 2);
  const MonotoneSequence seq = validated("params.entry", [&] { return power_sequence(a, n, offset); });
  const DeltaLadder ladder = ladder_of(c);
  const double tol = p.number("chord_tolerance", ladder.delta_min() / 32.0);

  const TrajectoryBundle bundle = stage("bundle", [&] { return build_bundle(spec, seq, tol); });
  ScenarioOutcome out;
  out.ambient = 2;
  out.samples = stage("sample", [&] { return sample_bundle(bundle, ladder, c.cell_cap); });
  note_estimate(out.record, stage("estimate", [&] { return estimate_dimension(out.samples, 2); }));
  const double seq_dim = 1.0 / (1.0 + a);
  out.record.prediction = predict_corner_dim(seq_dim);
  if (saddle && std::get<SaddleSpec>(spec).alpha == 1.0) {
    out.record.warnings.emplace_back("log-corrected regime: convergence in delta is slower, "
                                     "tolerance 0.1");
    out.record.extra["regime"] = "log-corrected";
  }

  std::size_t points = 0;
  for (const auto& s : bundle.segments()) points += s.points.size();
  out.record.extra["segments"] = bundle.segments().size();
  out.record.extra["points"] = points;
  out.record.extra["entry_dimension_oracle"] = seq_dim;
  out.record.extra["exit_terms"] = bundle.exit().size();
  out.record.extra["clamped_segments"] = bundle.clamped_count();
  if (bundle.clamped_count() > 0) {
    out.record.warnings.push_back(std::to_string(bundle.clamped_count()) +
                                  " segments clamped at the smallest normal x; exit sequence "
                                  "truncated");
  }
  return out;
}

ScenarioOutcome run_focus(const ScenarioConfig& c, const Params& p) {
  FocusSpec spec;
  spec.k = static_cast<int>(p.integer("k", 1));
  spec.r0 = p.number("r0", spec.r0);
  spec.turns = p.count("turns", spec.turns);
  validated("params", [&] { validate(spec); });
  const DeltaLadder ladder = ladder_of(c);
  const SpiralSampling sampling{p.number("chord_tolerance", ladder.delta_min() / 32.0),
                                ladder.delta_min()};
  const TrajectorySegment curve = stage("spiral", [&] { return focus_spiral(spec, sampling); });
  ScenarioOutcome out;
  out.ambient = 2;
  out.samples = stage("sample", [&] {
    return sample_segments(std::span(&curve, 1), ladder, c.cell_cap);
  });
  note_estimate(out.record, stage("estimate", [&] { return estimate_dimension(out.samples, 2); }));
  out.record.prediction = 4.0 * spec.k / (2.0 * spec.k + 1.0);
  out.record.extra["points"] = curve.points.size();

  const std::size_t transversal = p.count("transversal_count", 1'000'000);
  if (transversal > 0) {
    const auto orbit_est = stage("transversal", [&] {
      return sequence_dimension(focus_transversal_orbit(spec, transversal), default_ladder_1d());
    });
    out.record.extra["transversal_dimension"] = orbit_est.fit;
    out.record.extra["transversal_dimension_oracle"] = 2.0 * spec.k / (2.0 * spec.k + 1.0);
    out.record.extra["naive_corner_value"] = 1.0 + orbit_est.fit;
  }
  return out;
}

ScenarioOutcome run_limit_cycle(const ScenarioConfig& c, const Params& p) {
  LimitCycleSpec spec;
  spec.a = p.number("a", spec.a);
  spec.m = static_cast<int>(p.integer("m", spec.m));
  const std::string side = p.text("side", "outside");
  if (side == "outside") {
    spec.side = CycleSide::outside;
  } else if (side == "inside") {
    spec.side = CycleSide::inside;
  } else {
    throw ConfigError(p.path("side") + ": expected \"inside\" or \"outside\"");
  }
  spec.r0 = p.number("r0", spec.r0);
  spec.turns = p.count("turns", spec.turns);
  validated("params", [&] { validate(spec); });
  const DeltaLadder ladder = ladder_of(c);
  const SpiralSampling sampling{p.number("chord_tolerance", ladder.delta_min() / 32.0),
                                ladder.delta_min()};
  const TrajectorySegment curve =
      stage("spiral", [&] { return limit_cycle_spiral(spec, sampling); });
  ScenarioOutcome out;
  out.ambient = 2;
  out.samples = stage("sample", [&] {
    return sample_segments(std::span(&curve, 1), ladder, c.cell_cap);
  });
  note_estimate(out.record, stage("estimate", [&] { return estimate_dimension(out.samples, 2); }));
  out.record.prediction = 2.0 - 1.0 / spec.m;
  out.record.extra["points"] = curve.points.size();
  return out;
}

ScenarioOutcome run_saddle_loop(const ScenarioConfig& c, const Params& p) {
  const int codim = static_cast<int>(p.integer("codim"));
  const double x0 = p.number("x0", 0.5);
  const std::size_t n = p.count("N", 1'000'000);
  const MapSpec map = validated("params", [&] { return saddle_loop_return_map(codim); });
  const Classification cls = stage("classify", [&] { return classify_map(map); });
  const DeltaLadder ladder = ladder_of(c);
  const MonotoneSequence seq = stage("orbit", [&] { return orbit(map, x0, n); });
  ScenarioOutcome out;
  out.ambient = 1;
  out.samples = stage("sample", [&] { return sample_sequence(seq, ladder); });
  note_estimate(out.record, stage("estimate", [&] { return estimate_dimension(out.samples, 1); }));
  out.record.prediction = orbit_dim_oracle(cls);
  out.record.extra["map_kind"] = to_string(cls.kind);
  out.record.extra["orbit_terms"] = seq.size();
  out.record.extra["spiral_prediction"] = saddle_loop_dim(codim);
  out.record.extra["spiral_estimate"] = 1.0 + out.record.estimate->fit;
  if (cls.kind == MapKind::tangent || cls.kind == MapKind::tangent_log) {
    const TangencyEstimate t = tangency_order_from_dim(std::clamp(out.record.estimate->fit, 0.0, 0.999));
    out.record.extra["tangency_order_estimate"] = t.order;
    if (t.flagged) out.record.warnings.emplace_back("recovered tangency order is not near an integer");
  }
  return out;
}

TwoCycleSpec parse_two_cycle(const Params& p) {
  TwoCycleSpec s;
  s.r1 = p.number("r1");
  s.r2 = p.has("r2") ? p.number("r2") : 1.0 / s.r1;
  s.beta12 = p.number("beta12", 1.0);
  s.beta21 = p.number("beta21", 1.0);
  s.alpha1 = p.number("alpha1", 0.0);
  s.alpha2 = p.number("alpha2", 0.0);
  s.k1 = p.order("k1");
  s.k2 = p.order("k2");
  s.resonant = p.flag("resonant", false);
  return s;
}

ScenarioOutcome run_two_cycle(const Params& p) {
  const TwoCycleSpec spec = parse_two_cycle(p);
  validated("params", [&] { normalize(spec); });
  const ConsistencyReport rep = stage("report", [&] { return consistency_report(spec); });
  ScenarioOutcome out;
  out.record.prediction = rep.bound;
  out.record.integer_prediction = true;
  json& x = out.record.extra;
  x["side1"] = {{"kind", to_string(rep.side1.kind)}, {"order", rep.side1.order},
                {"multiplier", rep.side1.multiplier}};
  x["side2"] = {{"kind", to_string(rep.side2.kind)}, {"order", rep.side2.order},
                {"multiplier", rep.side2.multiplier}};
  x["d1"] = rep.d1;
  x["d2"] = rep.d2;
  x["spiral_dimension"] = rep.d;
  x["proof_case"] = to_string(rep.proof_case);
  x["r_from_dims"] = rep.r_from_dims ? json(*rep.r_from_dims) : json(nullptr);
  x["r_from_orders"] = rep.r_from_orders ? json(*rep.r_from_orders) : json(nullptr);
  x["bound"] = rep.bound;
  x["bound_from_dims_r"] = rep.bound_from_dims_r ? json(*rep.bound_from_dims_r) : json(nullptr);
  x["epsilon"] = rep.epsilon ? json(*rep.epsilon) : json(nullptr);
  x["consistent"] = rep.consistent;
  out.record.warnings.insert(out.record.warnings.end(), rep.warnings.begin(), rep.warnings.end());
  if (!rep.consistent) out.record.warnings.emplace_back("cyclicity bound differs from epsilon");
  return out;
}

ScenarioOutcome run_cyclicity(const Params& p) {
  const double d = p.number("d");
  const double r = p.number("r");
  const BoundResult b = validated("params", [&] { return cyclicity_bound(d, r); });
  ScenarioOutcome out;
  out.record.prediction = b.value;
  out.record.integer_prediction = true;
  out.record.extra["guard_triggered"] = b.guard_triggered;
  if (b.guard_triggered) out.record.warnings.emplace_back("near-integer floor guard triggered");
  return out;
}

std::string format_row(double a, double b) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g", a, b);
  return buf;
}

std::vector<NeighborhoodMeasurement> descending(std::span<const NeighborhoodMeasurement> s) {
  std::vector<NeighborhoodMeasurement> v(s.begin(), s.end());
  std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.delta > b.delta; });
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw Error(ErrorCode::io, "failed writing " + path.string());
}

std::string samples_text(std::span<const NeighborhoodMeasurement> samples) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "emit_samples: no samples");
  std::string out = "delta,measure\n";
  for (const auto& s : descending(samples)) out += format_row(s.delta, s.measure) + "\n";
  return out;
}

std::string plot_text(std::span<const NeighborhoodMeasurement> samples, int ambient) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "emit_plot: no samples");
  std::string out = "delta,measure,pointwise_dimension\n";
  for (const auto& s : descending(samples)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, ",%.17g", pointwise_dimension(s, ambient));
    out += format_row(s.delta, s.measure) + buf + "\n";
  }
  return out;
}

// Writes every file under a temporary name, then renames them all. Anything
// already written is removed when a step fails.
void write_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  std::vector<std::filesystem::path> temps;
  std::vector<std::filesystem::path> done;
  try {
    for (const auto& [path, content] : files) {
      auto tmp = path;
      tmp += ".tmp";
      temps.push_back(tmp);
      write_file(tmp, content);
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      std::filesystem::rename(temps[i], files[i].first);
      done.push_back(files[i].first);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) std::filesystem::remove(t, ec);
    for (const auto& d : done) std::filesystem::remove(d, ec);
    throw;
  }
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override \"" + assignment + "\": expected key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override \"" + assignment + "\": empty key component");
    if (!node->is_object()) {
      throw ConfigError("override \"" + assignment + "\": " + key.substr(0, start) +
                        " is not an object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected an object at top level");
  const Params top(doc, "config");
  ScenarioConfig c;
  c.kind = top.text("kind", "");
  if (c.kind.empty()) throw ConfigError("config.kind: required key missing");
  if (!known_kind(c.kind)) throw ConfigError("config.kind: unknown kind \"" + c.kind + "\"");
  if (top.has("params")) {
    if (!doc.at("params").is_object()) throw ConfigError("config.params: expected an object");
    c.params = doc.at("params");
  }

  const DeltaLadder fallback = one_dimensional(c.kind) ? default_ladder_1d() : default_ladder_2d();
  const Params ladder = top.child("ladder");
  c.ladder.delta_min = ladder.number("delta_min", fallback.delta_min());
  c.ladder.delta_max = ladder.number("delta_max", fallback.delta_max());
  c.ladder.count = ladder.count("count", fallback.size());
  validated("config.ladder", [&] {
    return make_ladder(c.ladder.delta_min, c.ladder.delta_max, c.ladder.count);
  });
  if (!(c.ladder.delta_max < 1.0)) throw ConfigError("config.ladder.delta_max: must be below 1");

  const Params grid = top.child("grid");
  const double cap = grid.number("cell_cap", static_cast<double>(kDefaultCellCap));
  if (!(cap >= 1.0) || cap != std::floor(cap) || cap > 1e18) {
    throw ConfigError("config.grid.cell_cap: expected a positive integer");
  }
  c.cell_cap = static_cast<std::uint64_t>(cap);

  const Params outputs = top.child("outputs");
  c.outputs.samples = outputs.text("samples", c.outputs.samples);
  c.outputs.plot = outputs.text("plot", c.outputs.plot);
  c.outputs.result = outputs.text("result", c.outputs.result);
  for (const auto* name : {&c.outputs.samples, &c.outputs.plot, &c.outputs.result}) {
    if (name->empty()) throw ConfigError("config.outputs: file names must be non-empty");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot read " + path.string());
    doc = json::parse(f, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config: " + path.string() + " is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(doc, o);
  ScenarioConfig c = parse_config(doc);
  c.source = path.string();
  c.overrides = overrides;
  return c;
}

json to_json(const ResultRecord& r) {
  json j;
  j["kind"] = r.kind;
  j["estimate"] = r.estimate ? estimate_json(*r.estimate) : json(nullptr);
  if (!r.prediction) {
    j["prediction"] = nullptr;
  } else if (r.integer_prediction) {
    j["prediction"] = static_cast<long>(*r.prediction);
  } else {
    j["prediction"] = *r.prediction;
  }
  j["abs_error"] = r.abs_error ? json(*r.abs_error) : json(nullptr);
  j["warnings"] = r.warnings;
  j["timing_seconds"] = r.timing_seconds;
  j["extra"] = r.extra;
  j["provenance"] = r.provenance;
  return j;
}

ScenarioOutcome execute(const ScenarioConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Params p(c.params, "params");
  ScenarioOutcome out;
  if (c.kind == "sequence") {
    out = run_sequence(c, p);
  } else if (c.kind == "saddle-bundle") {
    out = run_bundle(c, p, true);
  } else if (c.kind == "semihyp-bundle") {
    out = run_bundle(c, p, false);
  } else if (c.kind == "focus-spiral") {
    out = run_focus(c, p);
  } else if (c.kind == "limit-cycle-spiral") {
    out = run_limit_cycle(c, p);
  } else if (c.kind == "saddle-loop") {
    out = run_saddle_loop(c, p);
  } else if (c.kind == "two-cycle") {
    out = run_two_cycle(p);
  } else if (c.kind == "cyclicity") {
    out = run_cyclicity(p);
  } else {
    throw ConfigError("config.kind: unknown kind \"" + c.kind + "\"");
  }
  ResultRecord& r = out.record;
  r.kind = c.kind;
  if (r.estimate && r.prediction) r.abs_error = std::abs(r.estimate->fit - *r.prediction);
  r.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.provenance = {{"tool_version", kVersion},
                  {"config", c.source},
                  {"overrides", c.overrides},
                  {"params", c.params},
                  {"ladder",
                   {{"delta_min", c.ladder.delta_min},
                    {"delta_max", c.ladder.delta_max},
                    {"count", c.ladder.count}}},
                  {"cell_cap", c.cell_cap}};
  return out;
}

ResultRecord run_scenario(const ScenarioConfig& c, const std::filesystem::path& out_dir) {
  ScenarioOutcome out = execute(c);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + out_dir.string());

  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (!out.samples.empty()) {
    files.emplace_back(out_dir / c.outputs.samples, samples_text(out.samples));
    files.emplace_back(out_dir / c.outputs.plot, plot_text(out.samples, out.ambient));
  }
  files.emplace_back(out_dir / c.outputs.result, to_json(out.record).dump(2) + "\n");
  stage("write", [&] { write_atomically(files); });
  return out.record;
}

void emit_samples(std::span<const NeighborhoodMeasurement> samples,
                  const std::filesystem::path& path) {
  write_atomically({{path, samples_text(samples)}});
}

void emit_plot(std::span<const NeighborhoodMeasurement> samples, int ambient,
               const std::filesystem::path& path) {
  write_atomically({{path, plot_text(samples, ambient)}});
}

std::vector<NeighborhoodMeasurement> read_samples(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line) || line != "delta,measure") {
    throw Error(ErrorCode::io, path.string() + ": expected header delta,measure");
  }
  std::vector<NeighborhoodMeasurement> out;
  std::size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    const auto comma = line.find(',');
    char* end = nullptr;
    NeighborhoodMeasurement m;
    if (comma != std::string::npos) {
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      m.delta = std::strtod(a.c_str(), &end);
      const bool ok_a = end == a.c_str() + a.size() && !a.empty();
      m.measure = std::strtod(b.c_str(), &end);
      const bool ok_b = end == b.c_str() + b.size() && !b.empty();
      if (ok_a && ok_b) {
        out.push_back(m);
        continue;
      }
    }
    throw Error(ErrorCode::io, path.string() + ":" + std::to_string(lineno) + ": malformed row");
  }
  return out;
}

}  // namespace minkdim::cli
