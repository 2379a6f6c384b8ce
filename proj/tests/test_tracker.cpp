#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hbpt/maskops.hpp"
#include "hbpt/scene_model.hpp"
#include "hbpt/synthgen.hpp"
#include "hbpt/tracker.hpp"
#include "oracles.hpp"

using namespace hbpt;
using namespace hbpt::tracker;

namespace {

Frame solid_frame(int w, int h, Yuv c) {
  Frame f(w, h);
  std::fill(f.yuv.begin(), f.yuv.end(), c);
  return f;
}

hist::WeightImage blank_weights(int w, int h) {
  hist::WeightImage wi;
  wi.width = w;
  wi.height = h;
  wi.w.assign(static_cast<std::size_t>(w) * h, 0.0);
  return wi;
}

double window_sum(const hist::WeightImage& wi, const Rect& r) {
  double s = 0.0;
  for (int y = r.y; y < r.bottom(); ++y)
    for (int x = r.x; x < r.right(); ++x) s += wi.w[static_cast<std::size_t>(y) * wi.width + x];
  return s;
}

// Foreground pipeline used by the sequence tests: learned background, raw
// detection, refinement.
struct FgStage {
  scene::SceneModel model;
  Mask operator()(const Frame& f) const {
    return maskops::refine_mask(scene::detect_foreground(model, f), 200);
  }
};

struct TrackRun {
  std::vector<std::optional<PersonBlob>> persons;  // per frame after learning
};

TrackRun run_tracker(const synth::Sequence& seq, int learn, std::uint64_t seed, const TrackerParams& params = {}) {
  FgStage fg{scene::learn_scene(std::span<const Frame>(seq.frames.data(), learn))};
  TrackRun run;
  std::optional<PersonBlob> person;
  ParticleSet ps;
  for (std::size_t f = learn; f < seq.frames.size(); ++f) {
    const Frame& frame = seq.frames[f];
    const Mask mask = fg(frame);
    if (!person) {
      person = detect_person(maskops::connected_components(mask), frame, 200);
      if (person) ps = init_particles(*person, params.n_particles, seed);
    } else {
      auto r = mspf_track(*person, std::move(ps), frame, mask, params);
      person = r.person;
      ps = std::move(r.particles);
    }
    run.persons.push_back(person);
  }
  return run;
}

}  // namespace

TEST_CASE("detect_person: absence cases") {
  const Frame f = solid_frame(32, 32, {100, 128, 128});
  Mask empty(32, 32);
  CHECK_FALSE(detect_person(maskops::connected_components(empty), f, 1).has_value());
  Mask small(32, 32);
  for (int x = 3; x < 8; ++x) small.set(x, 4);
  CHECK_FALSE(detect_person(maskops::connected_components(small), f, 50).has_value());
  CHECK(detect_person(maskops::connected_components(small), f, 5).has_value());
}

TEST_CASE("detect_person on a walker frame matches the flood-fill oracle") {
  const auto seq = synth::generate_scenario(synth::make_scenario(synth::ScenarioName::walker, 4));
  FgStage fg{scene::learn_scene(std::span<const Frame>(seq.frames.data(), 30))};
  for (int f : {40, 120, 250}) {
    const Frame& frame = seq.frames[f];
    const Mask mask = fg(frame);
    const auto person = detect_person(maskops::connected_components(mask), frame, 200);
    REQUIRE(person.has_value());
    const double frac = static_cast<double>(person->area) / (frame.width * frame.height);
    CHECK(frac > 0.05);
    CHECK(frac < 0.12);

    int count = 0;
    const auto labels = oracle::flood_labels(mask, 8, &count);
    std::vector<long long> n(count + 1, 0);
    std::vector<double> sx(count + 1, 0.0), sy(count + 1, 0.0);
    for (int y = 0; y < mask.height; ++y)
      for (int x = 0; x < mask.width; ++x) {
        const int l = labels[static_cast<std::size_t>(y) * mask.width + x];
        if (!l) continue;
        ++n[l];
        sx[l] += x;
        sy[l] += y;
      }
    const int big = static_cast<int>(std::max_element(n.begin(), n.end()) - n.begin());
    CHECK(person->area == n[big]);
    CHECK(person->centroid.x == doctest::Approx(sx[big] / n[big]).epsilon(1e-12));
    CHECK(person->centroid.y == doctest::Approx(sy[big] / n[big]).epsilon(1e-12));
    CHECK(hist::is_normalized(person->ref_hist));
    CHECK(person->confidence == 1.0);
    CHECK(person->bbox.contains(static_cast<int>(person->centroid.x), static_cast<int>(person->centroid.y)));
    CHECK(person->area <= person->bbox.area());
  }
}

TEST_CASE("back_project: uniform and single-bin histograms") {
  std::mt19937_64 rng(5);
  Frame f(24, 16);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& p : f.yuv) p = {static_cast<uint8_t>(byte(rng)), static_cast<uint8_t>(byte(rng)), static_cast<uint8_t>(byte(rng))};
  hist::Hist16 uniform;
  uniform.fill(1.0 / 16.0);
  for (double w : hist::back_project(f, uniform).w) CHECK(w == 1.0 / 16.0);

  hist::Hist16 one{};
  one[9] = 1.0;
  const auto wi = hist::back_project(f, one);
  for (std::size_t i = 0; i < f.yuv.size(); ++i) {
    CHECK(wi.w[i] == (hist::uv_bin(f.yuv[i].u, f.yuv[i].v) == 9 ? 1.0 : 0.0));
  }
}

TEST_CASE("back_project: a shirt patch stands out on the synthetic scene") {
  const auto seq = synth::generate_scenario(synth::make_scenario(synth::ScenarioName::starfish, 2));
  const auto& ft = seq.truth.frames.back();
  const Frame& f = seq.frames.back();
  const Rect patch{ft.torso_rect.x + 5, ft.torso_rect.y + 5, 20, 20};
  const auto wi = hist::back_project(f, hist::color_hist16(f, patch));
  double in = 0.0, out = 0.0;
  long long n_in = 0, n_out = 0;
  for (int y = 0; y < f.height; ++y)
    for (int x = 0; x < f.width; ++x) {
      const double w = wi.w[static_cast<std::size_t>(y) * f.width + x];
      if (patch.contains(x, y)) {
        in += w;
        ++n_in;
      } else {
        out += w;
        ++n_out;
      }
    }
  CHECK(in / n_in >= 5.0 * (out / n_out));
}

TEST_CASE("mean_shift: symmetric bump is a fixed point") {
  auto wi = blank_weights(60, 60);
  for (int y = 20; y <= 40; ++y)
    for (int x = 20; x <= 40; ++x) wi.w[y * 60 + x] = std::exp(-((x - 30) * (x - 30) + (y - 30) * (y - 30)) / 30.0);
  const Rect win{20, 20, 21, 21};
  const auto r = mean_shift(wi, win);
  CHECK(r.window == win);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
}

TEST_CASE("mean_shift: offset Gaussian bump against exhaustive window search") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pos(30, 50);
  std::uniform_int_distribution<int> sign(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto wi = blank_weights(80, 80);
    const int px = pos(rng), py = pos(rng);
    for (int y = 0; y < 80; ++y)
      for (int x = 0; x < 80; ++x)
        wi.w[y * 80 + x] = std::exp(-((x - px) * (x - px) + (y - py) * (y - py)) / (2.0 * 16.0));
    const int ox = sign(rng) ? 5 : -5, oy = sign(rng) ? 3 : -3;
    const Rect win = rect_around({px + ox + 0.0, py + oy + 0.0}, 21, 21);
    const auto r = mean_shift(wi, win, 20, 1.0);

    Rect best = win;
    double best_sum = -1.0;
    for (int y = 0; y + 21 <= 80; ++y)
      for (int x = 0; x + 21 <= 80; ++x) {
        const double s = window_sum(wi, {x, y, 21, 21});
        if (s > best_sum) {
          best_sum = s;
          best = {x, y, 21, 21};
        }
      }
    CHECK(std::abs(r.window.center().x - best.center().x) <= 1.0);
    CHECK(std::abs(r.window.center().y - best.center().y) <= 1.0);
  }
}

TEST_CASE("mean_shift: all-zero window and out-of-image window") {
  const auto wi = blank_weights(30, 30);
  const Rect win{5, 5, 9, 9};
  const auto r = mean_shift(wi, win);
  CHECK(r.window == win);
  CHECK_FALSE(r.converged);
  try {
    mean_shift(wi, Rect{40, 40, 5, 5});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_rect);
  }
}

TEST_CASE("mean_shift: window weight sum never decreases (200 random images)") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> side(5, 25), blobs(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 64, h = 48;
    auto wi = blank_weights(w, h);
    const int nb = blobs(rng);
    for (int b = 0; b < nb; ++b) {
      const double cx = u(rng) * w, cy = u(rng) * h, s = 2.0 + 8.0 * u(rng), a = u(rng);
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) wi.w[y * w + x] += a * std::exp(-((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (2 * s * s));
    }
    for (auto& v : wi.w)
      if (u(rng) < 0.05) v += u(rng);
    const Rect win{static_cast<int>(u(rng) * (w - 10)), static_cast<int>(u(rng) * (h - 10)), side(rng), side(rng)};
    const auto r = mean_shift(wi, win, 20, 1.0);
    for (std::size_t i = 1; i < r.weight_sums.size(); ++i) CHECK(r.weight_sums[i] >= r.weight_sums[i - 1]);
    if (!r.weight_sums.empty()) CHECK(window_sum(wi, r.window) == doctest::Approx(r.weight_sums.back()));
  }
}

TEST_CASE("mspf_track: static target with noiseless particles is a fixed point") {
  Frame f = solid_frame(80, 80, {150, 160, 160});
  Mask fg(80, 80);
  for (int y = 20; y < 60; ++y)
    for (int x = 30; x < 50; ++x) {
      f.yuv[y * 80 + x] = {100, 96, 210};
      fg.set(x, y);
    }
  const auto prev = detect_person(maskops::connected_components(fg), f, 10);
  REQUIRE(prev.has_value());
  TrackerParams params;
  params.sigma_xy = 0.0;
  params.sigma_scale = 0.0;
  const auto r = mspf_track(*prev, init_particles(*prev, 50, 1), f, fg, params);
  CHECK(r.person.centroid == prev->centroid);
  CHECK(r.person.bbox == prev->bbox);
  CHECK(r.person.area == prev->area);
  CHECK(r.person.confidence == doctest::Approx(1.0));
  CHECK(r.person.velocity == PointD{0.0, 0.0});
  for (const auto& q : r.particles.particles) {
    CHECK(q.x == prev->centroid.x);
    CHECK(q.y == prev->centroid.y);
  }
}

TEST_CASE("mspf_track: coasting on empty foreground") {
  Frame f = solid_frame(80, 80, {150, 160, 160});
  PersonBlob p;
  p.bbox = {20, 20, 10, 20};
  p.centroid = {24.5, 29.5};
  p.confidence = 0.9;
  p.velocity = {1.5, -0.5};
  p.ref_hist.fill(1.0 / 16.0);
  ParticleSet ps = init_particles(p, 10, 3);
  const Mask empty(80, 80);
  PersonBlob cur = p;
  for (int i = 0; i < 5; ++i) {
    auto r = mspf_track(cur, std::move(ps), f, empty);
    cur = r.person;
    ps = std::move(r.particles);
  }
  CHECK(cur.centroid.x == doctest::Approx(p.centroid.x + 5 * 1.5));
  CHECK(cur.centroid.y == doctest::Approx(p.centroid.y - 5 * 0.5));
  CHECK(cur.confidence == doctest::Approx(std::pow(0.8, 5) * 0.9));
  CHECK(cur.velocity == p.velocity);
  CHECK(cur.bbox.w == p.bbox.w);
  CHECK(cur.bbox.h == p.bbox.h);
}

TEST_CASE("mspf_track: deterministic for a fixed seed, uniform weights after resampling") {
  synth::Scenario sc = synth::make_scenario(synth::ScenarioName::walker, 6);
  sc.params.frames = 60;
  const auto seq = synth::generate_scenario(sc);
  const auto a = run_tracker(seq, 30, 99);
  const auto b = run_tracker(seq, 30, 99);
  REQUIRE(a.persons.size() == b.persons.size());
  for (std::size_t i = 0; i < a.persons.size(); ++i) {
    REQUIRE(a.persons[i].has_value() == b.persons[i].has_value());
    if (!a.persons[i]) continue;
    CHECK(a.persons[i]->centroid == b.persons[i]->centroid);
    CHECK(a.persons[i]->bbox == b.persons[i]->bbox);
  }

  FgStage fg{scene::learn_scene(std::span<const Frame>(seq.frames.data(), 30))};
  const auto p0 = detect_person(maskops::connected_components(fg(seq.frames[30])), seq.frames[30], 200);
  REQUIRE(p0.has_value());
  const auto r = mspf_track(*p0, init_particles(*p0, 100, 5), seq.frames[31], fg(seq.frames[31]));
  REQUIRE(r.particles.particles.size() == 100);
  for (const auto& q : r.particles.particles) CHECK(q.weight == 0.01);
}

TEST_CASE("mspf_track follows a 3 px/frame walker within 2 px RMS") {
  synth::Scenario sc = synth::make_scenario(synth::ScenarioName::walker, 12);
  sc.params.width = 400;
  sc.params.speed = 3.0;
  sc.params.frames = 130;
  const auto seq = synth::generate_scenario(sc);
  const auto run = run_tracker(seq, 30, 7);
  double se = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < run.persons.size(); ++i) {
    const auto& ft = seq.truth.frames[30 + i];
    REQUIRE(run.persons[i].has_value());
    se += std::pow(distance(run.persons[i]->centroid, ft.centroid), 2);
    ++n;
  }
  CHECK(n == 100);
  const double rms = std::sqrt(se / n);
  MESSAGE("walker RMS centroid error " << rms);
  CHECK(rms <= 2.0);
}

TEST_CASE("torso_from_person: stated rule and errors") {
  PersonBlob p;
  p.bbox = {80, 40, 40, 120};
  p.centroid = {100, 100};
  const auto d = torso_from_person(p);
  CHECK(d.center == PointD{100, 100});
  CHECK(d.radius == 20.0);

  p.bbox = {100, 40, 1, 120};
  try {
    torso_from_person(p);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_width);
  }

  // body_width takes precedence; the disc never leaves the bbox horizontally.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    PersonBlob q;
    q.bbox = {static_cast<int>(u(rng) * 100), static_cast<int>(u(rng) * 100), 2 + static_cast<int>(u(rng) * 80), 10};
    q.centroid = {q.bbox.x + u(rng) * (q.bbox.w - 1), q.bbox.y + 4.0};
    q.body_width = u(rng) < 0.5 ? 0.0 : u(rng) * 100;
    const auto disc = torso_from_person(q);
    CHECK(disc.radius > 0.0);
    CHECK(disc.center.x - disc.radius >= q.bbox.x - 1e-9);
    CHECK(disc.center.x + disc.radius <= q.bbox.right() + 1e-9);
    CHECK(disc.radius <= 0.5 * (q.body_width > 0 ? q.body_width : q.bbox.w) + 1e-12);
  }
}

TEST_CASE("walker: torso disc center stays inside the true torso rectangle") {
  const auto seq = synth::generate_scenario(synth::make_scenario(synth::ScenarioName::walker, 8));
  const auto run = run_tracker(seq, 30, 1);
  int inside = 0, total = 0;
  for (std::size_t i = 0; i < run.persons.size(); ++i) {
    if (!run.persons[i]) continue;
    const auto disc = torso_from_person(*run.persons[i]);
    const Rect& t = seq.truth.frames[30 + i].torso_rect;
    ++total;
    inside += (disc.center.x >= t.x && disc.center.x <= t.right() - 1 && disc.center.y >= t.y &&
               disc.center.y <= t.bottom() - 1);
  }
  CHECK(total == 270);
  CHECK(inside >= 0.95 * total);
}
