#include "hbpt/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace hbpt::config {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, const char* want) {
  throw Error(ErrorKind::bad_config,
              "key '" + std::string(key) + "': expected " + want + ", got '" + std::string(value) + "'");
}

template <class T>
T number(std::string_view key, std::string_view v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && v.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) bad(key, v, std::is_integral_v<T> ? "an integer" : "a number");
  return out;
}

bool boolean(std::string_view key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad(key, v, "true or false");
}

std::string string(std::string_view key, std::string_view v) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') bad(key, v, "a quoted string");
  return std::string(v.substr(1, v.size() - 2));
}

Rect rect(std::string_view key, std::string_view v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad(key, v, "[x, y, w, h]");
  std::vector<int> xs;
  std::string_view body = v.substr(1, v.size() - 2);
  while (!body.empty()) {
    const auto comma = body.find(',');
    xs.push_back(number<int>(key, trim(body.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
  }
  if (xs.size() != 4) bad(key, v, "[x, y, w, h]");
  return {xs[0], xs[1], xs[2], xs[3]};
}

using Setter = std::function<void(PipelineConfig&, std::string_view key, std::string_view value)>;

#define HBPT_INT(field) [](PipelineConfig& c, std::string_view k, std::string_view v) { c.field = number<decltype(c.field)>(k, v); }
#define HBPT_REAL(field) [](PipelineConfig& c, std::string_view k, std::string_view v) { c.field = number<double>(k, v); }
#define HBPT_BOOL(field) [](PipelineConfig& c, std::string_view k, std::string_view v) { c.field = boolean(k, v); }
#define HBPT_STR(field) [](PipelineConfig& c, std::string_view k, std::string_view v) { c.field = string(k, v); }

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"pipeline.input", HBPT_STR(input)},
      {"pipeline.output", HBPT_STR(output)},
      {"pipeline.frame_pattern", HBPT_STR(frame_pattern)},
      {"pipeline.depth_pattern", HBPT_STR(depth_pattern)},
      {"pipeline.seed", HBPT_INT(seed)},
      {"pipeline.emit_overlays", HBPT_BOOL(emit_overlays)},
      {"pipeline.use_depth", HBPT_BOOL(use_depth)},
      {"pipeline.baseline_mode", HBPT_BOOL(baseline_mode)},
      {"scene.learn_frames", HBPT_INT(scene.learn_frames)},
      {"scene.var_floor", [](PipelineConfig& c, std::string_view k, std::string_view v) {
         c.scene.var_floor = static_cast<float>(number<double>(k, v));
       }},
      {"scene.tau", HBPT_REAL(scene.tau)},
      {"scene.alpha", HBPT_REAL(scene.alpha)},
      {"foreground.min_area", HBPT_INT(min_area)},
      {"foreground.depth_gate_mm", HBPT_REAL(depth_gate_mm)},
      {"tracker.particles", HBPT_INT(tracker.n_particles)},
      {"tracker.sigma_xy", HBPT_REAL(tracker.sigma_xy)},
      {"tracker.sigma_scale", HBPT_REAL(tracker.sigma_scale)},
      {"tracker.iou_gate", HBPT_REAL(tracker.iou_gate)},
      {"tracker.window_margin", HBPT_REAL(tracker.window_margin)},
      {"tracker.coast_decay", HBPT_REAL(tracker.coast_decay)},
      {"tracker.drop_confidence", HBPT_REAL(tracker.drop_confidence)},
      {"tracker.ms_max_iter", HBPT_INT(tracker.ms_max_iter)},
      {"tracker.ms_eps", HBPT_REAL(tracker.ms_eps)},
      {"parts.min_area", HBPT_INT(min_part_area)},
      {"baseline.head_band", HBPT_REAL(baseline.head_band)},
      {"baseline.feet_separation", HBPT_REAL(baseline.feet_separation)},
      {"baseline.hand_reach", HBPT_REAL(baseline.hand_reach)},
      {"activity.d_xy", HBPT_REAL(activity.d_xy)},
      {"activity.approach_frames", HBPT_INT(activity.approach_frames)},
      {"activity.approach_dz_mm", HBPT_REAL(activity.approach_dz_mm)},
      {"activity.open_threshold", HBPT_REAL(activity.open_threshold)},
      {"activity.open_frames", HBPT_INT(activity.open_frames)},
      {"activity.carry_frames", HBPT_INT(activity.carry_frames)},
      {"activity.carry_min_step", HBPT_REAL(activity.carry_min_step)},
      {"activity.carry_dz_mm", HBPT_REAL(activity.carry_dz_mm)},
      {"activity.depth_window", HBPT_INT(activity.depth_window)},
      {"lk.window", HBPT_INT(lk.window)},
      {"lk.levels", HBPT_INT(lk.levels)},
      {"lk.iterations", HBPT_INT(lk.iterations)},
      {"lk.min_eig", HBPT_REAL(lk.min_eig)},
      {"lk.max_residual", HBPT_REAL(lk.max_residual)},
      {"lk.spacing", HBPT_INT(lk_spacing)},
      {"box.rect", [](PipelineConfig& c, std::string_view k, std::string_view v) { c.box_rect = rect(k, v); }},
      {"box.ref_frame", [](PipelineConfig& c, std::string_view k, std::string_view v) {
         c.box_ref_frame = number<int>(k, v);
       }},
  };
  return table;
}

#undef HBPT_INT
#undef HBPT_REAL
#undef HBPT_BOOL
#undef HBPT_STR

// Drops a trailing comment, leaving '#' inside quotes alone.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

// The message of e without its "kind: " prefix.
std::string detail(const Error& e) {
  const std::string w = e.what();
  const std::string prefix = std::string(to_string(e.kind())) + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::bad_config, what);
}

}  // namespace

void set_value(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw Error(ErrorKind::bad_config, "unknown key '" + std::string(key) + "'");
  it->second(cfg, key, trim(value));
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void validate(const PipelineConfig& c) {
  require(c.scene.learn_frames >= 2, "scene.learn_frames must be at least 2");
  require(c.scene.var_floor > 0, "scene.var_floor must be positive");
  require(c.scene.tau > 0, "scene.tau must be positive");
  require(c.scene.alpha > 0 && c.scene.alpha < 1, "scene.alpha must lie in (0, 1)");
  require(c.min_area >= 1, "foreground.min_area must be positive");
  require(c.depth_gate_mm >= 0, "foreground.depth_gate_mm must be non-negative");
  require(c.tracker.n_particles >= 1, "tracker.particles must be positive");
  require(c.tracker.sigma_xy >= 0 && c.tracker.sigma_scale >= 0, "tracker sigmas must be non-negative");
  require(c.tracker.window_margin >= 0, "tracker.window_margin must be non-negative");
  require(c.tracker.ms_max_iter >= 1 && c.tracker.ms_eps > 0, "mean-shift limits must be positive");
  require(c.min_part_area >= 1, "parts.min_area must be positive");
  require(c.activity.d_xy >= 0, "activity.d_xy must be non-negative");
  require(c.activity.approach_frames >= 1 && c.activity.open_frames >= 1 && c.activity.carry_frames >= 1,
          "activity frame counts must be positive");
  require(c.activity.open_threshold >= 0 && c.activity.open_threshold <= 1, "activity.open_threshold must lie in [0, 1]");
  require(c.activity.depth_window >= 1 && c.activity.depth_window % 2 == 1, "activity.depth_window must be odd");
  require(c.lk.window >= 3 && c.lk.window % 2 == 1, "lk.window must be odd and at least 3");
  require(c.lk.levels >= 1 && c.lk.iterations >= 1, "lk.levels and lk.iterations must be positive");
  require(c.lk_spacing >= 1, "lk.spacing must be positive");
  require(!c.box_rect || !c.box_rect->empty(), "box.rect must have positive size");
  require(!c.box_ref_frame || *c.box_ref_frame >= 0, "box.ref_frame must be non-negative");
}

PipelineConfig parse_config(std::string_view text, PipelineConfig base) {
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    try {
      if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string_view::npos) {
        section = std::string(trim(line.substr(1, line.size() - 2)));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw Error(ErrorKind::bad_config, "expected 'key = value'");
      const std::string_view key = trim(line.substr(0, eq));
      const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
      set_value(base, full, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorKind::bad_config, "line " + std::to_string(line_no) + ": " + detail(e));
    }
  }
  validate(base);
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::bad_config, "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const Error& e) {
    throw Error(ErrorKind::bad_config, path.string() + ": " + detail(e));
  }
}

}  // namespace hbpt::config
