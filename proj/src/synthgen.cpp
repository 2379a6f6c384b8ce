#include "hbpt/synthgen.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "hbpt/bodyparts.hpp"
#include "hbpt/imageio.hpp"
#include "hbpt/tracker.hpp"

namespace hbpt::synth {

namespace {

using G = FigureGeometry;
using json = nlohmann::json;

constexpr const char* kNames[] = {"background", "walker",   "starfish",  "occluded_arm",
                                  "approach_box", "open_box", "carry_box", "null_walk"};

constexpr Yuv kShirt{100, 96, 210};
constexpr Yuv kPants{70, 100, 200};
constexpr Yuv kSkin{140, 100, 200};
constexpr Yuv kBox{100, 200, 100};
constexpr Yuv kBoxOpen{150, 60, 150};

constexpr double kReach = 45.0;   // arm elevation when reaching for the box
constexpr double kArmStep = 5.0;  // degrees per frame while raising the arm
constexpr double kContact = 30.0;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Capsule {
  double ax, ay, bx, by, r;
};

Capsule arm_capsule(const Pose& p, int side) {
  const double sx = p.cx + side * (G::torso_half_width + 4.5);
  const double sy = p.y0 + 22.0;
  const double a = (side < 0 ? p.arm_left : p.arm_right) * std::numbers::pi / 180.0;
  return {sx, sy, sx + side * G::arm_length * std::cos(a), sy + G::arm_length * std::sin(a), G::arm_radius};
}

Capsule leg_capsule(const Pose& p, int side) {
  const double hx = p.cx + side * 10.0;
  const double hy = p.y0 + 80.0;
  const double a = (side < 0 ? p.leg_left : p.leg_right) * std::numbers::pi / 180.0;
  return {hx, hy, hx + G::leg_length * std::sin(a), hy + G::leg_length * std::cos(a), G::leg_radius};
}

PointD capsule_tip(const Capsule& c) {
  const double dx = c.bx - c.ax, dy = c.by - c.ay;
  const double len = std::hypot(dx, dy);
  return {c.bx + c.r * dx / len, c.by + c.r * dy / len};
}

bool in_capsule(const Capsule& c, double x, double y) {
  const double dx = c.bx - c.ax, dy = c.by - c.ay;
  const double t = std::clamp(((x - c.ax) * dx + (y - c.ay) * dy) / (dx * dx + dy * dy), 0.0, 1.0);
  const double px = c.ax + t * dx - x, py = c.ay + t * dy - y;
  return px * px + py * py <= c.r * c.r;
}

template <typename F>
void paint_box(int width, int height, double x0, double y0, double x1, double y1, F&& f) {
  const int xa = std::max(0, static_cast<int>(std::floor(x0)));
  const int ya = std::max(0, static_cast<int>(std::floor(y0)));
  const int xb = std::min(width - 1, static_cast<int>(std::ceil(x1)));
  const int yb = std::min(height - 1, static_cast<int>(std::ceil(y1)));
  for (int y = ya; y <= yb; ++y)
    for (int x = xa; x <= xb; ++x) f(x, y);
}

// Part painted at each pixel: 0 none, 1 skin, 2 shirt, 3 pants.
std::vector<std::uint8_t> render_parts(const Pose& p, int width, int height) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height, 0);
  auto put = [&](int x, int y, std::uint8_t v) {
    auto& o = out[static_cast<std::size_t>(y) * width + x];
    if (o == 0 || v == 2) o = v;
  };
  for (int side : {-1, 1}) {
    const Capsule c = leg_capsule(p, side);
    paint_box(width, height, std::min(c.ax, c.bx) - c.r, std::min(c.ay, c.by) - c.r, std::max(c.ax, c.bx) + c.r,
              std::max(c.ay, c.by) + c.r, [&](int x, int y) {
                if (in_capsule(c, x, y)) put(x, y, 3);
              });
  }
  for (int side : {-1, 1}) {
    if (!(side < 0 ? p.left_arm_visible : p.right_arm_visible)) continue;
    const Capsule c = arm_capsule(p, side);
    paint_box(width, height, std::min(c.ax, c.bx) - c.r, std::min(c.ay, c.by) - c.r, std::max(c.ax, c.bx) + c.r,
              std::max(c.ay, c.by) + c.r, [&](int x, int y) {
                if (in_capsule(c, x, y)) put(x, y, 1);
              });
  }
  const double hr = G::head_radius, hy = p.y0 + 9.0;
  paint_box(width, height, p.cx - hr, hy - hr, p.cx + hr, hy + hr, [&](int x, int y) {
    if ((x - p.cx) * (x - p.cx) + (y - hy) * (y - hy) <= hr * hr) put(x, y, 1);
  });
  const double tw = G::torso_half_width;
  paint_box(width, height, p.cx - tw, p.y0 + 17.0, p.cx + tw, p.y0 + 80.0, [&](int x, int y) {
    if (x >= p.cx - tw && x < p.cx + tw && y >= p.y0 + 17.0 && y < p.y0 + 80.0) put(x, y, 2);
  });
  return out;
}

struct Background {
  std::vector<Yuv> yuv;
};

Background make_background(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(splitmix(seed ^ 0xB6u));
  std::uniform_int_distribution<int> jitter(-6, 6);
  Background bg;
  bg.yuv.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double wave = std::sin(x / 7.0) * std::cos(y / 11.0);
      const int yy = 160 + static_cast<int>(std::lround(20.0 * wave)) + jitter(rng);
      const int u = 158 + static_cast<int>(std::lround(6.0 * std::sin((x + y) / 13.0)));
      const int v = 158 + static_cast<int>(std::lround(6.0 * std::cos((x - y) / 17.0)));
      bg.yuv[static_cast<std::size_t>(y) * width + x] = {static_cast<std::uint8_t>(yy), static_cast<std::uint8_t>(u),
                                                         static_cast<std::uint8_t>(v)};
    }
  }
  return bg;
}

Yuv box_color(int x, int y, const Rect& box, bool open) {
  const int lx = x - box.x, ly = y - box.y;
  const bool interior = lx >= 4 && ly >= 4 && lx < box.w - 4 && ly < box.h - 4;
  if (open && interior) return kBoxOpen;
  Yuv c = kBox;
  if (((lx / 5) + (ly / 5)) % 2 == 0) c.y = static_cast<std::uint8_t>(c.y + 40);
  return c;
}

// What the script says about one frame.
struct Shot {
  std::optional<Pose> pose;
  Rect box;
  bool box_present = false;
  bool box_open = false;
};

void set_gait(Pose& p, double travelled) {
  const double phase = std::sin(2.0 * std::numbers::pi * travelled / 40.0);
  p.leg_left = 15.0 * phase;
  p.leg_right = -15.0 * phase;
  p.arm_left = 90.0 + 9.0 * phase;
  p.arm_right = 90.0 + 9.0 * phase;
}

double y0_for(const ScenarioParams& sp) { return std::floor((sp.height - G::stature) / 2.0) + 5.0; }

// Frames spent walking up to the box, raising the arm, and the stop position.
struct ReachPlan {
  double stop_cx;
  int arrive;    // first frame standing at stop_cx
  int raised;    // first frame with the arm fully raised
};

ReachPlan reach_plan(const ScenarioParams& sp) {
  ReachPlan r{};
  r.stop_cx = sp.box.x - 66.0;  // raised hand touches the box edge
  const int walk = static_cast<int>(std::ceil((r.stop_cx - sp.start_x) / sp.speed));
  r.arrive = sp.learn_frames + std::max(walk, 0);
  r.raised = r.arrive + static_cast<int>(std::ceil((90.0 - kReach) / kArmStep));
  return r;
}

Pose reaching_pose(const ScenarioParams& sp, const ReachPlan& plan, int f) {
  Pose p;
  p.y0 = y0_for(sp);
  const int t = f - sp.learn_frames;
  p.cx = std::min(sp.start_x + sp.speed * t, plan.stop_cx);
  if (f > plan.arrive) p.arm_right = std::max(kReach, 90.0 - kArmStep * (f - plan.arrive));
  return p;
}

int open_frame(const ReachPlan& plan) { return plan.raised + 20; }
int lift_frame(const ReachPlan& plan) { return plan.raised + 10; }
constexpr int kCarryFrames = 40;

Shot script(const Scenario& sc, int f) {
  const ScenarioParams& sp = sc.params;
  Shot s;
  s.box = sp.box;
  if (f < sp.learn_frames && sc.name != ScenarioName::starfish && sc.name != ScenarioName::occluded_arm) {
    s.box_present = sc.name == ScenarioName::approach_box || sc.name == ScenarioName::open_box ||
                    sc.name == ScenarioName::carry_box || sc.name == ScenarioName::null_walk;
    return s;
  }
  const int t = f - sp.learn_frames;
  switch (sc.name) {
    case ScenarioName::background:
      break;
    case ScenarioName::walker: {
      Pose p;
      p.y0 = y0_for(sp);
      p.cx = sp.start_x + sp.speed * t;
      set_gait(p, sp.speed * t);
      s.pose = p;
      break;
    }
    case ScenarioName::starfish:
    case ScenarioName::occluded_arm: {
      if (f < sp.learn_frames) break;
      Pose p;
      p.y0 = y0_for(sp);
      p.cx = sp.width / 2.0;
      if (sc.name == ScenarioName::starfish) {
        p.arm_left = p.arm_right = kReach;
        p.leg_left = -8.0;
        p.leg_right = 8.0;
      } else {
        p.arm_right = kReach;
        p.right_arm_visible = !((f >= 120 && f < 150) || (f >= 200 && f < 230));
      }
      s.pose = p;
      break;
    }
    case ScenarioName::null_walk: {
      s.box_present = true;
      Pose p;
      p.y0 = y0_for(sp);
      p.cx = sp.start_x + sp.speed * t;
      set_gait(p, sp.speed * t);
      s.pose = p;
      break;
    }
    case ScenarioName::approach_box:
    case ScenarioName::open_box:
    case ScenarioName::carry_box: {
      s.box_present = true;
      const ReachPlan plan = reach_plan(sp);
      Pose p = reaching_pose(sp, plan, f);
      if (sc.name == ScenarioName::open_box) s.box_open = f >= open_frame(plan);
      if (sc.name == ScenarioName::carry_box && f >= lift_frame(plan)) {
        const int moved = std::min(f - lift_frame(plan) + 1, kCarryFrames);
        const int dx = static_cast<int>(std::lround(2.0 * moved));
        p.cx -= dx;
        s.box.x -= dx;
      }
      s.pose = p;
      break;
    }
  }
  return s;
}

void check_params(const ScenarioParams& sp) {
  if (sp.width < 64 || sp.height < 170 || sp.frames < 1 || sp.learn_frames < 0 || sp.speed <= 0.0 ||
      sp.noise_sigma < 0.0 || sp.depth_dropout < 0.0 || sp.depth_dropout >= 1.0) {
    throw Error(ErrorKind::invalid_params, "scenario parameters out of range");
  }
  for (int d : {sp.wall_depth_mm, sp.person_depth_mm, sp.box_depth_mm}) {
    if (d < 500 || d > DepthRaster::max_range_mm) throw Error(ErrorKind::invalid_params, "depth outside 500..10000 mm");
  }
}

PartTruth part_truth(const parts::BodyPartModel& m, blob::PartLabel p) {
  PartTruth t;
  t.visible = m.has(p);
  if (t.visible) t.centroid = m.get(p).mu;
  return t;
}

void fill_person_truth(FrameTruth& ft, const Mask& sil, const Frame& frame, const Pose& p) {
  double sx = 0.0, sy = 0.0;
  long long n = 0;
  int x0 = sil.width, y0 = sil.height, x1 = -1, y1 = -1;
  for (int y = 0; y < sil.height; ++y) {
    for (int x = 0; x < sil.width; ++x) {
      if (!sil.get(x, y)) continue;
      sx += x;
      sy += y;
      ++n;
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
    }
  }
  if (n == 0) return;
  ft.person = true;
  ft.centroid = {sx / n, sy / n};
  ft.bbox = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  ft.torso_rect = {static_cast<int>(std::ceil(p.cx - G::torso_half_width)), static_cast<int>(std::ceil(p.y0 + 17.0)),
                   static_cast<int>(2 * G::torso_half_width), 63};
  ft.body_width = tracker::measure_body_width(sil, ft.centroid, ft.bbox);
  tracker::PersonBlob person;
  person.bbox = ft.bbox;
  person.centroid = ft.centroid;
  person.area = n;
  person.body_width = ft.body_width;
  const auto disc = tracker::torso_from_person(person);
  const auto partition = parts::partition_regions(sil, disc, ft.bbox);
  const auto model = parts::build_part_model(partition, frame, nullptr);
  for (auto label : blob::kAllParts) ft.parts[parts::index_of(label)] = part_truth(model, label);
  ft.head_top = {p.cx, p.y0 + 9.0 - G::head_radius};
  ft.hand_tips = {capsule_tip(arm_capsule(p, -1)), capsule_tip(arm_capsule(p, 1))};
  ft.foot_tips = {capsule_tip(leg_capsule(p, -1)), capsule_tip(leg_capsule(p, 1))};
  ft.right_arm_visible = p.right_arm_visible;
}

}  // namespace

const char* to_string(ScenarioName name) { return kNames[static_cast<int>(name)]; }

std::optional<ScenarioName> scenario_from_string(const std::string& name) {
  for (int i = 0; i < 8; ++i)
    if (name == kNames[i]) return static_cast<ScenarioName>(i);
  return std::nullopt;
}

Scenario make_scenario(ScenarioName name, std::uint64_t seed) {
  Scenario sc;
  sc.name = name;
  sc.seed = seed;
  ScenarioParams& sp = sc.params;
  switch (name) {
    case ScenarioName::background: sp.frames = 30; break;
    case ScenarioName::walker: sp.frames = 300; break;
    case ScenarioName::starfish: sp.frames = 60; break;
    case ScenarioName::occluded_arm: sp.frames = 300; break;
    case ScenarioName::approach_box:
      sp.frames = 200;
      sp.speed = 2.0;
      sp.start_x = 40.0;
      break;
    case ScenarioName::open_box:
    case ScenarioName::carry_box:
      sp.frames = 220;
      sp.speed = 2.0;
      sp.start_x = 40.0;
      break;
    case ScenarioName::null_walk:
      sp.frames = 300;
      sp.speed = 0.5;
      sp.start_x = 30.0;
      break;
  }
  return sc;
}

Mask render_silhouette(const Pose& pose, int width, int height) {
  const auto parts = render_parts(pose, width, height);
  Mask m(width, height);
  for (std::size_t i = 0; i < parts.size(); ++i) m.bits[i] = parts[i] != 0;
  return m;
}

Sequence generate_scenario(const Scenario& sc) {
  const ScenarioParams& sp = sc.params;
  check_params(sp);
  const int w = sp.width, h = sp.height;
  const std::size_t n_px = static_cast<std::size_t>(w) * h;
  const Background bg = make_background(w, h, sc.seed);
  std::vector<Rgb> bg_rgb(n_px);
  for (std::size_t i = 0; i < n_px; ++i) bg_rgb[i] = imageio::convert_yuv_to_rgb(bg.yuv[i].y, bg.yuv[i].u, bg.yuv[i].v);
  const std::array<Rgb, 4> person_rgb = {Rgb{}, imageio::convert_yuv_to_rgb(kSkin.y, kSkin.u, kSkin.v),
                                         imageio::convert_yuv_to_rgb(kShirt.y, kShirt.u, kShirt.v),
                                         imageio::convert_yuv_to_rgb(kPants.y, kPants.u, kPants.v)};

  // Rounded Gaussian offsets addressed by 16-bit draws.
  std::vector<int> noise(65536);
  {
    std::mt19937_64 rng(splitmix(sc.seed ^ 0x5EEDull));
    std::normal_distribution<double> gauss(0.0, sp.noise_sigma);
    for (int& v : noise) v = sp.noise_sigma > 0.0 ? static_cast<int>(std::lround(gauss(rng))) : 0;
  }

  Sequence seq;
  seq.truth.scenario = to_string(sc.name);
  seq.truth.seed = sc.seed;
  seq.truth.learn_frames = sp.learn_frames;
  std::optional<int> contact, lift, opened;
  Rect first_box = sp.box;

  for (int f = 0; f < sp.frames; ++f) {
    const Shot shot = script(sc, f);
    std::vector<std::uint8_t> person(n_px, 0);
    if (shot.pose) person = render_parts(*shot.pose, w, h);

    std::vector<Rgb> clean = bg_rgb;
    DepthRaster depth;
    depth.width = w;
    depth.height = h;
    depth.z.assign(n_px, static_cast<std::uint16_t>(sp.wall_depth_mm));
    if (shot.box_present) {
      const Rect b = intersect(shot.box, Rect{0, 0, w, h});
      for (int y = b.y; y < b.bottom(); ++y) {
        for (int x = b.x; x < b.right(); ++x) {
          const std::size_t i = static_cast<std::size_t>(y) * w + x;
          const Yuv c = box_color(x, y, shot.box, shot.box_open);
          clean[i] = imageio::convert_yuv_to_rgb(c.y, c.u, c.v);
          depth.z[i] = static_cast<std::uint16_t>(sp.box_depth_mm);
        }
      }
    }
    Mask sil(w, h);
    for (std::size_t i = 0; i < n_px; ++i) {
      if (person[i] == 0) continue;
      clean[i] = person_rgb[person[i]];
      depth.z[i] = static_cast<std::uint16_t>(sp.person_depth_mm);
      sil.bits[i] = 1;
    }

    std::mt19937_64 rng(splitmix(sc.seed * 0x100000001B3ull + static_cast<std::uint64_t>(f)));
    std::vector<Rgb> rgb(n_px);
    std::uint64_t bits = 0;
    int left = 0;
    auto draw16 = [&]() {
      if (left == 0) {
        bits = rng();
        left = 4;
      }
      const auto v = static_cast<std::uint32_t>(bits & 0xFFFF);
      bits >>= 16;
      --left;
      return v;
    };
    auto draw = [&]() { return noise[draw16()]; };
    for (std::size_t i = 0; i < n_px; ++i) {
      const Rgb c = clean[i];
      rgb[i] = {static_cast<std::uint8_t>(std::clamp(c.r + draw(), 0, 255)),
                static_cast<std::uint8_t>(std::clamp(c.g + draw(), 0, 255)),
                static_cast<std::uint8_t>(std::clamp(c.b + draw(), 0, 255))};
    }
    if (sp.depth) {
      const auto cut = static_cast<std::uint32_t>(std::lround(sp.depth_dropout * 65536.0));
      for (auto& z : depth.z)
        if (draw16() < cut) z = 0;
    }
    Frame frame = Frame::from_rgb(w, h, std::move(rgb), f);

    FrameTruth ft;
    ft.index = f;
    ft.box = shot.box;
    ft.box_present = shot.box_present;
    ft.box_open = shot.box_open;
    if (shot.pose) fill_person_truth(ft, sil, frame, *shot.pose);
    if (ft.person && shot.box_present && !contact &&
        distance_to_rect(ft.hand_tips[1], shot.box) <= kContact) {
      contact = f;
    }
    if (shot.box_present && !lift && shot.box != first_box) lift = f;
    if (shot.box_open && !opened) opened = f;

    seq.truth.frames.push_back(ft);
    seq.frames.push_back(std::move(frame));
    if (sp.depth) seq.depth.push_back(std::move(depth));
    seq.silhouettes.push_back(std::move(sil));
  }

  const bool reach = sc.name == ScenarioName::approach_box || sc.name == ScenarioName::open_box ||
                     sc.name == ScenarioName::carry_box;
  if (reach && contact) seq.truth.events.push_back({"Approach", *contact});
  if (sc.name == ScenarioName::open_box && opened) seq.truth.events.push_back({"Open", *opened});
  if (sc.name == ScenarioName::carry_box && lift) seq.truth.events.push_back({"Carry", *lift});
  return seq;
}

namespace {

json point_json(PointD p) { return json::array({p.x, p.y}); }
json rect_json(const Rect& r) { return json::array({r.x, r.y, r.w, r.h}); }
PointD point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
Rect rect_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(), j.at(3).get<int>()}; }

}  // namespace

std::string truth_to_json(const GroundTruth& truth) {
  json j;
  j["scenario"] = truth.scenario;
  j["seed"] = truth.seed;
  j["learn_frames"] = truth.learn_frames;
  j["events"] = json::array();
  for (const auto& e : truth.events) j["events"].push_back({{"kind", e.kind}, {"frame", e.frame}});
  j["frames"] = json::array();
  for (const auto& ft : truth.frames) {
    json fj;
    fj["index"] = ft.index;
    fj["person"] = ft.person;
    if (ft.person) {
      fj["centroid"] = point_json(ft.centroid);
      fj["bbox"] = rect_json(ft.bbox);
      fj["torso_rect"] = rect_json(ft.torso_rect);
      fj["body_width"] = ft.body_width;
      json parts = json::object();
      for (auto label : blob::kAllParts) {
        const PartTruth& pt = ft.parts[parts::index_of(label)];
        parts[blob::to_string(label)] = pt.visible ? json{{"visible", true}, {"centroid", point_json(pt.centroid)}}
                                                   : json{{"visible", false}};
      }
      fj["parts"] = parts;
      fj["head_top"] = point_json(ft.head_top);
      fj["hand_tips"] = json::array({point_json(ft.hand_tips[0]), point_json(ft.hand_tips[1])});
      fj["foot_tips"] = json::array({point_json(ft.foot_tips[0]), point_json(ft.foot_tips[1])});
      fj["right_arm_visible"] = ft.right_arm_visible;
    }
    fj["box_present"] = ft.box_present;
    if (ft.box_present) {
      fj["box"] = rect_json(ft.box);
      fj["box_open"] = ft.box_open;
    }
    j["frames"].push_back(std::move(fj));
  }
  return j.dump(1);
}

GroundTruth truth_from_json(const std::string& text) {
  GroundTruth t;
  try {
    const json j = json::parse(text);
    t.scenario = j.at("scenario").get<std::string>();
    t.seed = j.at("seed").get<std::uint64_t>();
    t.learn_frames = j.at("learn_frames").get<int>();
    for (const auto& e : j.at("events")) t.events.push_back({e.at("kind").get<std::string>(), e.at("frame").get<int>()});
    for (const auto& fj : j.at("frames")) {
      FrameTruth ft;
      ft.index = fj.at("index").get<int>();
      ft.person = fj.at("person").get<bool>();
      if (ft.person) {
        ft.centroid = point_from(fj.at("centroid"));
        ft.bbox = rect_from(fj.at("bbox"));
        ft.torso_rect = rect_from(fj.at("torso_rect"));
        ft.body_width = fj.at("body_width").get<double>();
        for (auto label : blob::kAllParts) {
          const auto& pj = fj.at("parts").at(blob::to_string(label));
          PartTruth& pt = ft.parts[parts::index_of(label)];
          pt.visible = pj.at("visible").get<bool>();
          if (pt.visible) pt.centroid = point_from(pj.at("centroid"));
        }
        ft.head_top = point_from(fj.at("head_top"));
        for (int k = 0; k < 2; ++k) {
          ft.hand_tips[k] = point_from(fj.at("hand_tips").at(k));
          ft.foot_tips[k] = point_from(fj.at("foot_tips").at(k));
        }
        ft.right_arm_visible = fj.at("right_arm_visible").get<bool>();
      }
      ft.box_present = fj.at("box_present").get<bool>();
      if (ft.box_present) {
        ft.box = rect_from(fj.at("box"));
        ft.box_open = fj.at("box_open").get<bool>();
      }
      t.frames.push_back(ft);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::decode_failure, std::string("truth.json: ") + e.what());
  }
  return t;
}

void write_sequence(const Sequence& seq, const Scenario& sc, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io_failure, "cannot create " + dir.string());
  char name[64];
  for (const auto& f : seq.frames) {
    std::snprintf(name, sizeof name, "frame_%06d.ppm", f.index);
    imageio::write_ppm(f, dir / name);
  }
  for (std::size_t i = 0; i < seq.depth.size(); ++i) {
    std::snprintf(name, sizeof name, "depth_%06d.pgm", static_cast<int>(i));
    imageio::write_depth_raster(seq.depth[i], dir / name);
  }
  {
    std::ofstream out(dir / "truth.json");
    out << truth_to_json(seq.truth) << '\n';
    if (!out) throw Error(ErrorKind::io_failure, "cannot write truth.json");
  }
  std::ofstream cfg(dir / "scenario.toml");
  cfg << "# " << to_string(sc.name) << " seed " << sc.seed << '\n';
  cfg << "scene.learn_frames = " << sc.params.learn_frames << '\n';
  cfg << "pipeline.use_depth = " << (sc.params.depth ? "true" : "false") << '\n';
  const bool has_box = std::any_of(seq.truth.frames.begin(), seq.truth.frames.end(),
                                   [](const FrameTruth& ft) { return ft.box_present; });
  if (has_box) {
    const Rect& b = sc.params.box;
    cfg << "box.rect = [" << b.x << ", " << b.y << ", " << b.w << ", " << b.h << "]\n";
    cfg << "box.ref_frame = " << std::max(sc.params.learn_frames - 1, 0) << '\n';
  }
  if (!cfg) throw Error(ErrorKind::io_failure, "cannot write scenario.toml");
}

}  // namespace hbpt::synth
