#include "zk3d/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <vector>

namespace zk3d {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Entry {
  std::string value;
  int line;
};

double to_real(const std::string& text, int line, const std::string& key) {
  // "pi" multiples keep presets like a = 3*pi/8 readable.
  double value = 0.0;
  std::string s = text;
  double factor = 1.0;
  if (auto p = s.find("pi"); p != std::string::npos) {
    std::string head = s.substr(0, p), tail = s.substr(p + 2);
    if (!head.empty() && head.back() == '*') head.pop_back();
    factor = std::numbers::pi;
    if (!head.empty()) factor *= to_real(head, line, key);
    if (!tail.empty()) {
      if (tail.front() != '/') throw ParseError("key '" + key + "': cannot read '" + text + "' as a number", line);
      factor /= to_real(tail.substr(1), line, key);
    }
    return factor;
  }
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError("key '" + key + "': cannot read '" + text + "' as a number", line);
  }
  return value;
}

long to_integer(const std::string& text, int line, const std::string& key) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("key '" + key + "': cannot read '" + text + "' as an integer", line);
  }
  return value;
}

bool to_bool(const std::string& text, int line, const std::string& key) {
  if (text == "true" || text == "on" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "off" || text == "no" || text == "0") return false;
  throw ParseError("key '" + key + "': expected on/off, got '" + text + "'", line);
}

template <class T, class F>
std::array<T, 3> triple(const Entry& e, const std::string& key, F&& convert) {
  const auto w = words(e.value);
  if (w.size() == 1) {
    const T v = convert(w[0], e.line, key);
    return {v, v, v};
  }
  if (w.size() != 3) throw ParseError("key '" + key + "': expected 1 or 3 values", e.line);
  return {convert(w[0], e.line, key), convert(w[1], e.line, key), convert(w[2], e.line, key)};
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "grid.n", "grid.l",
      "scenario.preset", "scenario.kind",
      "evolution.t_end", "evolution.n_steps", "evolution.v_x", "evolution.dealias",
      "evolution.sample_every", "evolution.snapshot_times",
      "ground_state.newton_tol", "ground_state.max_newton_iters", "ground_state.gmres_tol",
      "ground_state.gmres_restart", "ground_state.reference",
      "diagnostics.fit", "diagnostics.fit_peaks", "diagnostics.exclusion_radius", "diagnostics.peak",
      "diagnostics.cone", "diagnostics.cone_delta", "diagnostics.cone_theta", "diagnostics.cone_frame",
      "output.dir", "rng.seed",
  };
  return keys;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::map<std::string, Entry> scenario_params;
  {
    std::istringstream in{std::string(text)};
    int line_no = 0;
    for (std::string raw; std::getline(in, raw);) {
      ++line_no;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      const std::string line = trim(raw);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
      const std::string key = trim(std::string_view(line).substr(0, eq));
      const std::string value = trim(std::string_view(line).substr(eq + 1));
      if (key.empty()) throw ParseError("missing key", line_no);
      if (value.empty() && key != "evolution.snapshot_times") {
        throw ParseError("key '" + key + "' has no value", line_no);
      }
      const bool known = std::find(known_keys().begin(), known_keys().end(), key) != known_keys().end();
      if (!known && key.rfind("scenario.", 0) == 0) {
        if (scenario_params.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
        scenario_params[key.substr(9)] = {value, line_no};
        continue;
      }
      if (!known) throw ParseError("unknown key '" + key + "'", line_no);
      if (entries.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
      entries[key] = {value, line_no};
    }
  }

  auto find = [&](const std::string& key) -> const Entry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  const Preset* preset = nullptr;
  const Entry* preset_entry = find("scenario.preset");
  const Entry* kind_entry = find("scenario.kind");
  if (preset_entry == nullptr && kind_entry == nullptr) throw ParseError("scenario required", 0);
  if (preset_entry != nullptr && kind_entry != nullptr) {
    throw ParseError("scenario.preset and scenario.kind are mutually exclusive", kind_entry->line);
  }
  if (preset_entry != nullptr) {
    try {
      preset = &find_preset(preset_entry->value);
    } catch (const ScenarioError& e) {
      throw ParseError(e.what(), preset_entry->line);
    }
    cfg.preset_name = preset->name;
    cfg.scenario = preset->spec;
    cfg.l = preset->l;
    cfg.evolution.t_end = preset->t_end;
    cfg.evolution.n_steps = preset->n_steps;
  } else {
    try {
      cfg.scenario.kind = scenario_kind_from_string(kind_entry->value);
    } catch (const ScenarioError& e) {
      throw ParseError(e.what(), kind_entry->line);
    }
    cfg.evolution.t_end = 1.0;
    cfg.evolution.n_steps = 1000;
  }
  for (const auto& [name, e] : scenario_params) {
    if (name == "v_x") {
      cfg.scenario.v_x = to_real(e.value, e.line, "scenario.v_x");
      continue;
    }
    const auto req = required_params(cfg.scenario.kind);
    const auto opt = optional_params(cfg.scenario.kind);
    if (std::find(req.begin(), req.end(), name) == req.end() &&
        std::find(opt.begin(), opt.end(), name) == opt.end()) {
      throw ParseError("unknown key 'scenario." + name + "' for kind " + std::string(to_string(cfg.scenario.kind)),
                       e.line);
    }
    cfg.scenario.params[name] = to_real(e.value, e.line, "scenario." + name);
  }
  try {
    validate(cfg.scenario);
  } catch (const ScenarioError& e) {
    throw ParseError(e.what(), kind_entry ? kind_entry->line : preset_entry->line);
  }
  cfg.evolution.v_x = cfg.scenario.v_x;
  cfg.evolution.sample_every = 10;

  if (auto* e = find("grid.n")) {
    cfg.n = triple<std::size_t>(*e, "grid.n", [](const std::string& s, int line, const std::string& k) {
      const long v = to_integer(s, line, k);
      if (v < 4 || v % 2 != 0) throw ParseError("key '" + k + "': mode counts must be even and >= 4", line);
      return static_cast<std::size_t>(v);
    });
  }
  if (auto* e = find("grid.l")) {
    cfg.l = triple<double>(*e, "grid.l", [](const std::string& s, int line, const std::string& k) {
      const double v = to_real(s, line, k);
      if (!(v > 0.0)) throw ParseError("key '" + k + "': scale factors must be positive", line);
      return v;
    });
  }

  if (auto* e = find("evolution.t_end")) {
    cfg.evolution.t_end = to_real(e->value, e->line, "evolution.t_end");
    if (!(cfg.evolution.t_end > 0.0)) throw ParseError("evolution.t_end must be > 0", e->line);
  }
  if (auto* e = find("evolution.n_steps")) {
    cfg.evolution.n_steps = to_integer(e->value, e->line, "evolution.n_steps");
    if (cfg.evolution.n_steps < 1) throw ParseError("evolution.n_steps must be >= 1", e->line);
  }
  if (auto* e = find("evolution.v_x")) cfg.evolution.v_x = to_real(e->value, e->line, "evolution.v_x");
  if (auto* e = find("evolution.dealias")) cfg.evolution.dealias = to_bool(e->value, e->line, "evolution.dealias");
  if (auto* e = find("evolution.sample_every")) {
    cfg.evolution.sample_every = to_integer(e->value, e->line, "evolution.sample_every");
    if (cfg.evolution.sample_every < 1) throw ParseError("evolution.sample_every must be >= 1", e->line);
  }
  if (auto* e = find("evolution.snapshot_times")) {
    for (const auto& w : words(e->value)) {
      const double t = to_real(w, e->line, "evolution.snapshot_times");
      if (t < 0.0) throw ParseError("evolution.snapshot_times must be >= 0", e->line);
      cfg.evolution.snapshot_times.push_back(t);
    }
  }
  for (double t : cfg.evolution.snapshot_times) {
    if (t > cfg.evolution.t_end) {
      throw ParseError("snapshot time beyond evolution.t_end", find("evolution.snapshot_times")->line);
    }
  }

  if (auto* e = find("ground_state.newton_tol")) {
    cfg.ground_state.newton_tol = to_real(e->value, e->line, "ground_state.newton_tol");
    if (!(cfg.ground_state.newton_tol > 0 && cfg.ground_state.newton_tol < 1))
      throw ParseError("ground_state.newton_tol must lie in (0, 1)", e->line);
  }
  if (auto* e = find("ground_state.max_newton_iters")) {
    cfg.ground_state.max_newton_iters = static_cast<int>(to_integer(e->value, e->line, "ground_state.max_newton_iters"));
    if (cfg.ground_state.max_newton_iters < 1) throw ParseError("ground_state.max_newton_iters must be >= 1", e->line);
  }
  if (auto* e = find("ground_state.gmres_tol")) {
    cfg.ground_state.gmres_tol = to_real(e->value, e->line, "ground_state.gmres_tol");
    if (!(cfg.ground_state.gmres_tol > 0 && cfg.ground_state.gmres_tol < 1))
      throw ParseError("ground_state.gmres_tol must lie in (0, 1)", e->line);
  }
  if (auto* e = find("ground_state.gmres_restart")) {
    cfg.ground_state.gmres_restart = static_cast<int>(to_integer(e->value, e->line, "ground_state.gmres_restart"));
    if (cfg.ground_state.gmres_restart < 1) throw ParseError("ground_state.gmres_restart must be >= 1", e->line);
  }
  if (auto* e = find("ground_state.reference")) cfg.ground_state.reference = e->value;

  if (auto* e = find("diagnostics.fit")) cfg.diagnostics.fit = to_bool(e->value, e->line, "diagnostics.fit");
  if (auto* e = find("diagnostics.fit_peaks")) {
    const long p = to_integer(e->value, e->line, "diagnostics.fit_peaks");
    if (p != 1 && p != 2) throw ParseError("diagnostics.fit_peaks must be 1 or 2", e->line);
    cfg.diagnostics.fit_peaks = static_cast<int>(p);
  }
  if (auto* e = find("diagnostics.exclusion_radius")) {
    cfg.diagnostics.exclusion_radius = to_real(e->value, e->line, "diagnostics.exclusion_radius");
    if (!(cfg.diagnostics.exclusion_radius > 0)) throw ParseError("diagnostics.exclusion_radius must be > 0", e->line);
  }
  if (auto* e = find("diagnostics.peak")) {
    if (e->value == "node") cfg.diagnostics.peak = PeakMode::node;
    else if (e->value == "interpolated") cfg.diagnostics.peak = PeakMode::interpolated;
    else throw ParseError("diagnostics.peak must be node or interpolated", e->line);
  }
  const Entry* cone_keys[] = {find("diagnostics.cone_delta"), find("diagnostics.cone_theta"),
                              find("diagnostics.cone_frame")};
  bool cone_on = std::any_of(std::begin(cone_keys), std::end(cone_keys), [](auto* p) { return p != nullptr; });
  if (auto* e = find("diagnostics.cone")) cone_on = to_bool(e->value, e->line, "diagnostics.cone");
  if (cone_on) {
    ConeParams cone{0.05, std::numbers::pi / 6.0 - 0.05, ConeFrame::soliton};
    if (auto* e = cone_keys[0]) cone.delta = to_real(e->value, e->line, "diagnostics.cone_delta");
    if (auto* e = cone_keys[1]) cone.theta = to_real(e->value, e->line, "diagnostics.cone_theta");
    if (auto* e = cone_keys[2]) {
      if (e->value == "soliton") cone.frame = ConeFrame::soliton;
      else if (e->value == "lab") cone.frame = ConeFrame::lab;
      else throw ParseError("diagnostics.cone_frame must be 'soliton' or 'lab'", e->line);
    }
    try {
      validate(cone);
    } catch (const ParameterError& err) {
      const Entry* at = cone_keys[1] ? cone_keys[1] : (cone_keys[0] ? cone_keys[0] : find("diagnostics.cone"));
      throw ParseError(err.what(), at ? at->line : 0);
    }
    cfg.diagnostics.cone = cone;
  }

  if (auto* e = find("output.dir")) cfg.output_dir = e->value;
  if (auto* e = find("rng.seed")) {
    const long s = to_integer(e->value, e->line, "rng.seed");
    if (s < 0) throw ParseError("rng.seed must be >= 0", e->line);
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string preset_config_text(std::string_view preset_name) {
  return "scenario.preset = " + std::string(preset_name) + "\n";
}

}  // namespace zk3d
