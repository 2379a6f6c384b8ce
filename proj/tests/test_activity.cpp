#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbpt/activity.hpp"
#include "hbpt/pipeline.hpp"
#include "hbpt/synthgen.hpp"

using namespace hbpt;
using namespace hbpt::activity;

namespace {

Frame solid_frame(int w, int h, Yuv c) {
  Frame f(w, h);
  std::fill(f.yuv.begin(), f.yuv.end(), c);
  return f;
}

Frame random_uv_frame(std::mt19937_64& rng, int w, int h) {
  Frame f(w, h);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& p : f.yuv) p = {static_cast<std::uint8_t>(d(rng)), static_cast<std::uint8_t>(d(rng)),
                             static_cast<std::uint8_t>(d(rng))};
  return f;
}

hist::Hist16 random_hist(std::mt19937_64& rng, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  hist::Hist16 h{};
  double s = 0.0;
  for (auto& v : h) {
    v = u(rng) < zero_prob ? 0.0 : u(rng);
    s += v;
  }
  if (s == 0.0) {
    h[0] = 1.0;
    return h;
  }
  for (auto& v : h) v /= s;
  // Push the rounding error into one bin so the sum is 1 within 1e-9.
  double t = 0.0;
  for (double v : h) t += v;
  h[0] = std::max(0.0, h[0] + (1.0 - t));
  return h;
}

// Smooth random luminance texture: a sum of random plane waves.
Frame texture(std::mt19937_64& rng, int w, int h, double dx = 0.0, double dy = 0.0) {
  struct Wave {
    double kx, ky, phase, amp;
  };
  std::uniform_real_distribution<double> k(-0.5, 0.5), ph(0.0, 6.283), amp(10.0, 25.0);
  std::vector<Wave> waves(8);
  for (auto& wv : waves) wv = {k(rng), k(rng), ph(rng), amp(rng)};
  Frame f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 128.0;
      for (const auto& wv : waves) v += wv.amp * std::sin(wv.kx * (x - dx) + wv.ky * (y - dy) + wv.phase);
      f.yuv[static_cast<std::size_t>(y) * w + x] = {static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)),
                                                    128, 128};
    }
  }
  return f;
}

// Integer shift minimizing the window SSD between prev around p and next
// around p + shift.
PointI ssd_shift(const Frame& prev, const Frame& next, PointI p, int half, int range) {
  PointI best{0, 0};
  double best_ssd = -1.0;
  for (int sy = -range; sy <= range; ++sy) {
    for (int sx = -range; sx <= range; ++sx) {
      double ssd = 0.0;
      for (int wy = -half; wy <= half; ++wy) {
        for (int wx = -half; wx <= half; ++wx) {
          const double a = prev.at(p.x + wx, p.y + wy).y, b = next.at(p.x + wx + sx, p.y + wy + sy).y;
          ssd += (a - b) * (a - b);
        }
      }
      if (best_ssd < 0 || ssd < best_ssd) {
        best_ssd = ssd;
        best = {sx, sy};
      }
    }
  }
  return best;
}

constexpr Yuv kBoxColor{100, 200, 100};
constexpr Yuv kWall{160, 158, 158};

void paint_box(Frame& f, const Rect& r) {
  for (int y = r.y; y < r.bottom(); ++y) {
    for (int x = r.x; x < r.right(); ++x) {
      Yuv c = kBoxColor;
      if (((x - r.x) / 5 + (y - r.y) / 5) % 2) c.y += 40;
      f.yuv[static_cast<std::size_t>(y) * f.width + x] = c;
    }
  }
}

parts::BodyPartModel model_with_hand(int frame, std::optional<PointI> hand) {
  parts::BodyPartModel m;
  m.frame_index = frame;
  m.blobs[parts::index_of(blob::PartLabel::torso)] = blob::GaussianBlob{};
  m.hands[1] = hand;
  return m;
}

DepthRaster flat_depth(int w, int h, std::uint16_t z) {
  DepthRaster d;
  d.width = w;
  d.height = h;
  d.z.assign(static_cast<std::size_t>(w) * h, z);
  return d;
}

void fill_depth(DepthRaster& d, const Rect& r, std::uint16_t z) {
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x) d.z[static_cast<std::size_t>(y) * d.width + x] = z;
}

ObjectTrack grid_track(PointD c) {
  ObjectTrack t;
  for (int dy = -4; dy <= 4; dy += 4)
    for (int dx = -4; dx <= 4; dx += 4) t.points.push_back({{c.x + dx, c.y + dy}, true});
  return t;
}

pipeline::RunResult run_scenario(const synth::Scenario& sc, const synth::Sequence& seq) {
  config::PipelineConfig cfg;
  cfg.scene.learn_frames = sc.params.learn_frames;
  cfg.box_rect = sc.params.box;
  return pipeline::run(cfg, pipeline::Input{seq.frames, seq.depth});
}

std::optional<int> event_frame(const std::vector<ActivityEvent>& events, EventKind kind) {
  for (const auto& e : events)
    if (e.kind == kind) return e.frame_index;
  return std::nullopt;
}

std::optional<int> truth_frame(const synth::GroundTruth& truth, const std::string& kind) {
  for (const auto& e : truth.events)
    if (e.kind == kind) return e.frame;
  return std::nullopt;
}

}  // namespace

TEST_CASE("color_hist16: uniform rect, normalization and the counting oracle") {
  const Frame uni = solid_frame(40, 30, {10, 70, 200});
  const auto h = hist::color_hist16(uni, {5, 5, 10, 10});
  CHECK(h[hist::uv_bin(70, 200)] == 1.0);
  CHECK(hist::uv_bin(70, 200) == 7);

  std::mt19937_64 rng(11);
  const Frame f = random_uv_frame(rng, 64, 48);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> px(0, 63), py(0, 47);
    const int x0 = px(rng), y0 = py(rng);
    const Rect r{x0, y0, std::uniform_int_distribution<int>(1, 64 - x0)(rng),
                 std::uniform_int_distribution<int>(1, 48 - y0)(rng)};
    std::array<long long, 16> counts{};
    for (int y = r.y; y < r.bottom(); ++y) {
      for (int x = r.x; x < r.right(); ++x) {
        const Yuv c = f.at(x, y);
        const int ub = c.u < 64 ? 0 : c.u < 128 ? 1 : c.u < 192 ? 2 : 3;
        const int vb = c.v < 64 ? 0 : c.v < 128 ? 1 : c.v < 192 ? 2 : 3;
        ++counts[4 * ub + vb];
      }
    }
    const auto hr = hist::color_hist16(f, r);
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) {
      CHECK(hr[i] == doctest::Approx(static_cast<double>(counts[i]) / r.area()).epsilon(1e-15));
      sum += hr[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(hist::color_hist16(f, {70, 50, 5, 5}), Error);
}

TEST_CASE("hist_distance: stated values and properties") {
  hist::Hist16 a{}, b{}, c{};
  a[0] = 1.0;
  b[0] = 0.5;
  b[1] = 0.5;
  c[5] = 1.0;
  CHECK(hist::hist_distance(a, a) == 0.0);
  CHECK(hist::hist_distance(a, c) == 1.0);
  CHECK(hist::hist_distance(a, b) == doctest::Approx(0.5412).epsilon(1e-4));
  CHECK(hist::hist_distance(a, b) == doctest::Approx(std::sqrt(1.0 - std::sqrt(0.5))).epsilon(1e-12));

  hist::Hist16 bad{};
  bad[0] = 0.7;
  try {
    (void)hist::hist_distance(bad, a);
    FAIL("expected unnormalized_hist");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unnormalized_hist);
  }

  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const auto h1 = random_hist(rng, 0.4), h2 = random_hist(rng, 0.4);
    const double d12 = hist::hist_distance(h1, h2), d21 = hist::hist_distance(h2, h1);
    CHECK(d12 == doctest::Approx(d21).epsilon(1e-12));
    CHECK(d12 >= 0.0);
    CHECK(d12 <= 1.0);
    CHECK(hist::hist_distance(h1, h1) == 0.0);
    if (h1 != h2) CHECK(d12 > 0.0);
  }
}

TEST_CASE("track_box_region: static synthetic box drifts at most 1 px over 50 frames") {
  auto sc = synth::make_scenario(synth::ScenarioName::approach_box, 4);
  sc.params.frames = 80;
  const auto seq = synth::generate_scenario(sc);
  BoxRegion box = make_box_region(seq.frames[29], sc.params.box);
  CHECK(hist::is_normalized(box.ref_hist));
  for (int f = 30; f < 80; ++f) {
    box = track_box_region(box, seq.frames[f]);
    CHECK_FALSE(box.lost);
    CHECK(std::abs(box.tracked_rect.x - sc.params.box.x) <= 1);
    CHECK(std::abs(box.tracked_rect.y - sc.params.box.y) <= 1);
  }
}

TEST_CASE("track_box_region: follows a box translated 4 px/frame within 2 px") {
  const int w = 320, h = 240;
  Rect truth{60, 100, 30, 24};
  Frame f0 = solid_frame(w, h, kWall);
  paint_box(f0, truth);
  BoxRegion box = make_box_region(f0, truth);
  for (int step = 1; step <= 40; ++step) {
    truth.x += 4;
    Frame f = solid_frame(w, h, kWall);
    paint_box(f, truth);
    box = track_box_region(box, f);
    CHECK(std::abs(box.tracked_rect.x - truth.x) <= 2);
    CHECK(std::abs(box.tracked_rect.y - truth.y) <= 2);
  }
}

TEST_CASE("track_box_region: no box colors leaves the rect and sets the flag") {
  Frame f0 = solid_frame(100, 80, kWall);
  paint_box(f0, {20, 20, 30, 24});
  const BoxRegion box = make_box_region(f0, {20, 20, 30, 24});
  const BoxRegion out = track_box_region(box, solid_frame(100, 80, kWall));
  CHECK(out.lost);
  CHECK(out.tracked_rect == box.tracked_rect);
  CHECK_THROWS_AS(make_box_region(f0, {90, 70, 30, 24}), Error);
}

TEST_CASE("lk_flow: identical frames give zero displacement") {
  std::mt19937_64 rng(2);
  const Frame f = texture(rng, 120, 100);
  std::vector<PointD> pts;
  for (int y = 20; y <= 80; y += 10)
    for (int x = 20; x <= 100; x += 10) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
  const auto r = lk_flow(f, f, pts);
  REQUIRE(r.points.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(r.alive[i]);
    CHECK(std::abs(r.points[i].x - pts[i].x) < 1e-6);
    CHECK(std::abs(r.points[i].y - pts[i].y) < 1e-6);
  }
}

TEST_CASE("lk_flow: 50 shifted textures agree with exhaustive SSD search within 0.25 px") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> sh(-4, 4);
  int alive = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // The stated (3, -2) case first, then random integer shifts.
    const int dx = trial == 0 ? 3 : sh(rng), dy = trial == 0 ? -2 : sh(rng);
    std::mt19937_64 tex_rng(1000 + trial);
    const Frame prev = texture(tex_rng, 96, 96);
    std::mt19937_64 same(1000 + trial);
    const Frame next = texture(same, 96, 96, dx, dy);
    const PointI p{48, 48};
    const PointI oracle = ssd_shift(prev, next, p, 7, 6);
    CHECK(oracle == PointI{dx, dy});
    const PointD q{static_cast<double>(p.x), static_cast<double>(p.y)};
    const auto r = lk_flow(prev, next, std::span<const PointD>(&q, 1));
    if (!r.alive[0]) continue;
    ++alive;
    CHECK(std::abs(r.points[0].x - p.x - oracle.x) <= 0.25);
    CHECK(std::abs(r.points[0].y - p.y - oracle.y) <= 0.25);
  }
  CHECK(alive == 50);
}

TEST_CASE("lk_flow: flat regions and border points are lost") {
  std::mt19937_64 rng(3);
  Frame f = texture(rng, 100, 100);
  for (int y = 0; y < 50; ++y)
    for (int x = 0; x < 50; ++x) f.yuv[static_cast<std::size_t>(y) * 100 + x] = {90, 128, 128};
  const std::vector<PointD> pts{{20, 20}, {2, 70}, {75, 75}};
  const auto r = lk_flow(f, f, pts);
  CHECK_FALSE(r.alive[0]);
  CHECK_FALSE(r.alive[1]);
  CHECK(r.alive[2]);
  CHECK(r.points[0] == pts[0]);
  CHECK_THROWS_AS(lk_flow(f, solid_frame(50, 50, kWall), pts), Error);
}

TEST_CASE("seed_object_track and advance_track on a moving textured box") {
  Frame f0 = solid_frame(160, 120, kWall);
  paint_box(f0, {40, 40, 30, 24});
  auto track = seed_object_track(f0, {40, 40, 30, 24});
  REQUIRE(track.valid());
  for (const auto& p : track.points) {
    CHECK(Rect{40, 40, 30, 24}.contains(static_cast<int>(p.p.x), static_cast<int>(p.p.y)));
  }
  CHECK(seed_object_track(solid_frame(160, 120, kWall), {40, 40, 30, 24}).points.empty());

  const PointD c0 = track.centroid();
  Frame f1 = solid_frame(160, 120, kWall);
  paint_box(f1, {43, 38, 30, 24});
  const auto moved = advance_track(track, f0, f1);
  REQUIRE(moved.valid());
  const PointD c1 = moved.centroid();
  CHECK(c1.x - c0.x == doctest::Approx(3.0).epsilon(0.1));
  CHECK(c1.y - c0.y == doctest::Approx(-2.0).epsilon(0.1));
}

TEST_CASE("detect_approach: 2D rule, depth gate and debounce") {
  const Rect box_rect{200, 100, 30, 24};
  Frame f = solid_frame(320, 240, kWall);
  paint_box(f, box_rect);
  const BoxRegion box = make_box_region(f, box_rect);
  const PointI near{185, 110};  // 15 px left of the box
  const PointI far{120, 110};

  SUBCASE("no depth: fires on the third qualifying frame, flagged 2D-only") {
    ActivityState st;
    CHECK_FALSE(detect_approach(model_with_hand(0, near), box, nullptr, nullptr, st));
    CHECK_FALSE(detect_approach(model_with_hand(1, near), box, nullptr, nullptr, st));
    const auto ev = detect_approach(model_with_hand(2, near), box, nullptr, nullptr, st);
    REQUIRE(ev);
    CHECK(ev->kind == EventKind::Approach);
    CHECK(ev->frame_index == 2);
    CHECK_FALSE(ev->depth_used);
    CHECK(ev->distance_px == doctest::Approx(15.0));
    CHECK(st.phase == Phase::Approached);
    CHECK_FALSE(detect_approach(model_with_hand(3, near), box, nullptr, nullptr, st));
  }
  SUBCASE("a single far frame resets the counter") {
    ActivityState st;
    const PointI seq[] = {near, near, far, near, near};
    for (int i = 0; i < 5; ++i) CHECK_FALSE(detect_approach(model_with_hand(i, seq[i]), box, nullptr, nullptr, st));
    CHECK(detect_approach(model_with_hand(5, near), box, nullptr, nullptr, st));
  }
  SUBCASE("no torso or no hand never fires") {
    ActivityState st;
    auto m = model_with_hand(0, near);
    m.blobs[parts::index_of(blob::PartLabel::torso)].reset();
    for (int i = 0; i < 5; ++i) CHECK_FALSE(detect_approach(m, box, nullptr, nullptr, st));
    for (int i = 0; i < 5; ++i) CHECK_FALSE(detect_approach(model_with_hand(i, std::nullopt), box, nullptr, nullptr, st));
  }
  SUBCASE("hand 1500 mm behind the box never fires; same depth fires") {
    DepthRaster behind = flat_depth(320, 240, 6000);
    fill_depth(behind, box_rect, 2500);
    fill_depth(behind, {175, 100, 15, 20}, 4000);
    ActivityState st;
    for (int i = 0; i < 10; ++i) {
      const auto ev = detect_approach(model_with_hand(i, near), box, &behind, nullptr, st);
      CHECK_FALSE(ev);
    }
    CHECK(st.phase == Phase::Idle);

    DepthRaster level = behind;
    fill_depth(level, {175, 100, 15, 20}, 2600);
    ActivityState st2;
    std::optional<ActivityEvent> ev;
    for (int i = 0; i < 3; ++i) ev = detect_approach(model_with_hand(i, near), box, &level, nullptr, st2);
    REQUIRE(ev);
    CHECK(ev->depth_used);
    REQUIRE(ev->dz_mm);
    CHECK(*ev->dz_mm == doctest::Approx(100.0));
  }
}

TEST_CASE("detect_open: state gate, threshold and debounce") {
  const Rect r{50, 50, 30, 24};
  Frame closed = solid_frame(200, 150, kWall);
  paint_box(closed, r);
  Frame opened = closed;
  for (int y = r.y + 4; y < r.bottom() - 4; ++y)
    for (int x = r.x + 4; x < r.right() - 4; ++x) opened.yuv[static_cast<std::size_t>(y) * 200 + x] = {150, 60, 150};
  const BoxRegion box = make_box_region(closed, r);
  CHECK(hist::hist_distance(hist::color_hist16(opened, r), box.ref_hist) > 0.4);

  SUBCASE("no prior approach: no event") {
    ActivityState st;
    for (int i = 0; i < 30; ++i) {
      opened.index = i;
      CHECK_FALSE(detect_open(box, opened, st));
    }
  }
  SUBCASE("approached: fires on the fifth changed frame") {
    ActivityState st;
    st.phase = Phase::Approached;
    for (int i = 0; i < 10; ++i) {
      closed.index = i;
      CHECK_FALSE(detect_open(box, closed, st));
    }
    std::optional<ActivityEvent> ev;
    for (int i = 10; i < 15; ++i) {
      opened.index = i;
      CHECK_FALSE(ev);
      ev = detect_open(box, opened, st);
    }
    REQUIRE(ev);
    CHECK(ev->frame_index == 14);
    REQUIRE(ev->hist_distance);
    CHECK(*ev->hist_distance > 0.4);
    CHECK(st.phase == Phase::Opened);
  }
  SUBCASE("one unchanged frame resets the count") {
    ActivityState st;
    st.phase = Phase::Approached;
    for (int i = 0; i < 4; ++i) CHECK_FALSE(detect_open(box, opened, st));
    CHECK_FALSE(detect_open(box, closed, st));
    for (int i = 0; i < 4; ++i) CHECK_FALSE(detect_open(box, opened, st));
    CHECK(detect_open(box, opened, st));
  }
}

TEST_CASE("detect_carry: displacement, proximity and depth gates") {
  const PointD start{150, 100};
  auto run = [&](double step, double hand_offset, const DepthRaster* depth, ActivityState st) {
    std::optional<ActivityEvent> ev;
    int fired = -1;
    for (int i = 0; i < 12 && fired < 0; ++i) {
      const PointD c{start.x + step * i, start.y};
      const PointI hand{static_cast<int>(std::lround(c.x - hand_offset)), static_cast<int>(c.y)};
      ev = detect_carry(model_with_hand(i, hand), grid_track(c), depth, nullptr, st);
      if (ev) fired = i;
    }
    return fired;
  };
  ActivityState approached;
  approached.phase = Phase::Approached;

  CHECK(run(2.0, 15.0, nullptr, approached) == 5);  // five moving frames after the first
  CHECK(run(0.0, 15.0, nullptr, approached) == -1);
  CHECK(run(0.5, 15.0, nullptr, approached) == -1);
  CHECK(run(2.0, 60.0, nullptr, approached) == -1);
  CHECK(run(2.0, 15.0, nullptr, ActivityState{}) == -1);

  // Depth: object and hand at one plane pass; a hand receding 300 mm/frame fails.
  DepthRaster same = flat_depth(320, 240, 2500);
  CHECK(run(2.0, 15.0, &same, approached) == 5);

  ActivityState st = approached;
  int fired = -1;
  for (int i = 0; i < 12 && fired < 0; ++i) {
    DepthRaster d = flat_depth(320, 240, 2500);
    const PointD c{start.x + 2.0 * i, start.y};
    const PointI hand{static_cast<int>(c.x - 15), static_cast<int>(c.y)};
    fill_depth(d, {hand.x - 3, hand.y - 3, 7, 7}, static_cast<std::uint16_t>(2500 + 300 * i));
    if (detect_carry(model_with_hand(i, hand), grid_track(c), &d, nullptr, st)) fired = i;
  }
  CHECK(fired == -1);

  // A track with no live point is not a valid object.
  ObjectTrack dead = grid_track(start);
  for (auto& p : dead.points) p.alive = false;
  ActivityState st2 = approached;
  CHECK_FALSE(detect_carry(model_with_hand(0, PointI{140, 100}), dead, nullptr, nullptr, st2));
  CHECK_THROWS_AS((void)dead.centroid(), Error);
}

TEST_CASE("sample_depth and rect_depth take medians of valid samples") {
  DepthRaster d = flat_depth(20, 20, 3000);
  fill_depth(d, {0, 0, 10, 20}, 0);
  CHECK(sample_depth(d, {9.0, 10.0}, 5) == doctest::Approx(3000.0));
  CHECK_FALSE(sample_depth(d, {3.0, 3.0}, 5));
  Mask only(20, 20);
  only.set(12, 10);
  fill_depth(d, {12, 10, 1, 1}, 1234);
  CHECK(*sample_depth(d, {11.0, 10.0}, 5, &only) == doctest::Approx(1234.0));
  Mask skip(20, 20);
  for (int x = 10; x < 20; ++x) skip.set(x, 0);
  CHECK(*rect_depth(d, {10, 0, 10, 20}, &skip) == doctest::Approx(3000.0));
}

TEST_CASE("scenario events: approach, open and carry fire as scripted; null walk fires nothing") {
  for (const auto name : {synth::ScenarioName::approach_box, synth::ScenarioName::open_box,
                          synth::ScenarioName::carry_box, synth::ScenarioName::null_walk}) {
    CAPTURE(synth::to_string(name));
    const auto sc = synth::make_scenario(name, 21);
    const auto seq = synth::generate_scenario(sc);
    const auto res = run_scenario(sc, seq);
    CHECK(res.events.size() == seq.truth.events.size());
    for (const auto& [kind, label] : {std::pair{EventKind::Approach, "Approach"}, std::pair{EventKind::Open, "Open"},
                                      std::pair{EventKind::Carry, "Carry"}}) {
      const auto want = truth_frame(seq.truth, label);
      const auto got = event_frame(res.events, kind);
      CHECK(want.has_value() == got.has_value());
      if (!want || !got) continue;
      if (kind == EventKind::Open) {
        CHECK(std::abs(*got - (*want + 5)) <= 2);
      } else {
        CHECK(std::abs(*got - *want) <= 5);
      }
    }
    // Open and Carry never precede Approach.
    const auto approach = event_frame(res.events, EventKind::Approach);
    for (const auto& e : res.events) {
      if (e.kind != EventKind::Approach) {
        REQUIRE(approach);
        CHECK(e.frame_index > *approach);
      }
    }
  }
}

TEST_CASE("approach scenario: person 1500 mm behind the box raises no event") {
  auto sc = synth::make_scenario(synth::ScenarioName::approach_box, 21);
  sc.params.wall_depth_mm = 6000;
  sc.params.person_depth_mm = 4000;
  sc.params.box_depth_mm = 2500;
  const auto seq = synth::generate_scenario(sc);
  const auto res = run_scenario(sc, seq);
  CHECK(res.events.empty());
}

TEST_CASE("approach scenario without depth uses the 2D rule") {
  auto sc = synth::make_scenario(synth::ScenarioName::approach_box, 21);
  sc.params.depth = false;
  const auto seq = synth::generate_scenario(sc);
  REQUIRE(seq.depth.empty());
  const auto res = run_scenario(sc, seq);
  REQUIRE(res.events.size() == 1);
  CHECK(res.events[0].kind == EventKind::Approach);
  CHECK_FALSE(res.events[0].depth_used);
  CHECK(std::abs(res.events[0].frame_index - *truth_frame(seq.truth, "Approach")) <= 5);
}
