#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hbpt/histogram.hpp"
#include "hbpt/imageio.hpp"
#include "hbpt/maskops.hpp"
#include "hbpt/scene_model.hpp"
#include "hbpt/synthgen.hpp"
#include "oracles.hpp"

using namespace hbpt;
using namespace hbpt::synth;

namespace {

Scenario short_scenario(ScenarioName name, int frames, std::uint64_t seed = 7) {
  Scenario sc = make_scenario(name, seed);
  sc.params.frames = frames;
  return sc;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hbpt_synth_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario names round trip") {
  for (int k = 0; k < 8; ++k) {
    const auto name = static_cast<ScenarioName>(k);
    CHECK(scenario_from_string(to_string(name)) == name);
  }
  CHECK_FALSE(scenario_from_string("juggler").has_value());
}

TEST_CASE("same seed gives bit-identical output, another seed does not") {
  const Scenario sc = short_scenario(ScenarioName::walker, 40);
  const Sequence a = generate_scenario(sc);
  const Sequence b = generate_scenario(sc);
  REQUIRE(a.frames.size() == 40);
  for (std::size_t f = 0; f < a.frames.size(); ++f) {
    CHECK(a.frames[f].yuv == b.frames[f].yuv);
    CHECK(a.frames[f].rgb == b.frames[f].rgb);
    CHECK(a.depth[f].z == b.depth[f].z);
  }
  CHECK(truth_to_json(a.truth) == truth_to_json(b.truth));

  Scenario other = sc;
  other.seed = 8;
  const Sequence c = generate_scenario(other);
  CHECK(c.frames[0].rgb != a.frames[0].rgb);
}

TEST_CASE("background scenario has no parts and feeds learn_scene") {
  const Sequence s = generate_scenario(make_scenario(ScenarioName::background));
  REQUIRE(s.frames.size() == 30);
  REQUIRE(s.truth.frames.size() == 30);
  for (const auto& ft : s.truth.frames) {
    CHECK_FALSE(ft.person);
    for (const auto& p : ft.parts) CHECK_FALSE(p.visible);
  }
  CHECK(s.truth.events.empty());
  const auto model = scene::learn_scene(s.frames);
  CHECK(model.width == 320);
  CHECK(model.height == 240);
}

TEST_CASE("walker torso follows the scripted line exactly") {
  const Scenario sc = short_scenario(ScenarioName::walker, 300);
  const Sequence s = generate_scenario(sc);
  const auto& sp = sc.params;
  int seen = 0;
  for (const auto& ft : s.truth.frames) {
    if (ft.index < sp.learn_frames) {
      CHECK_FALSE(ft.person);
      continue;
    }
    REQUIRE(ft.person);
    ++seen;
    const double cx = sp.start_x + sp.speed * (ft.index - sp.learn_frames);
    CHECK(ft.torso_rect.x == static_cast<int>(std::ceil(cx - 20.0)));
    CHECK(ft.torso_rect.w == 40);
    CHECK(ft.torso_rect.h == 63);
    CHECK(ft.torso_rect.y == s.truth.frames[sp.learn_frames].torso_rect.y);
    CHECK(ft.head_top.x == doctest::Approx(cx));
  }
  CHECK(seen == 270);
}

TEST_CASE("clean silhouette is one component and matches the truth statistics") {
  for (auto name : {ScenarioName::walker, ScenarioName::starfish, ScenarioName::occluded_arm, ScenarioName::carry_box}) {
    Scenario sc = make_scenario(name, 3);
    const Sequence s = generate_scenario(sc);
    for (std::size_t f = 0; f < s.frames.size(); f += 3) {
      const auto& ft = s.truth.frames[f];
      const Mask& sil = s.silhouettes[f];
      if (!ft.person) {
        CHECK_FALSE(sil.any());
        continue;
      }
      const auto labels = oracle::flood_labels(sil, 8);
      CHECK(*std::max_element(labels.begin(), labels.end()) == 1);
      double sx = 0, sy = 0;
      long long n = 0;
      for (int y = 0; y < sil.height; ++y)
        for (int x = 0; x < sil.width; ++x)
          if (sil.get(x, y)) {
            sx += x;
            sy += y;
            ++n;
          }
      CHECK(ft.centroid.x == doctest::Approx(sx / n));
      CHECK(ft.centroid.y == doctest::Approx(sy / n));
    }
  }
}

TEST_CASE("depth rasters hold 0 or in-range millimetres") {
  for (auto name : {ScenarioName::walker, ScenarioName::carry_box}) {
    const Sequence s = generate_scenario(short_scenario(name, 60));
    REQUIRE(s.depth.size() == s.frames.size());
    long long zeros = 0, total = 0, out_of_range = 0;
    for (const auto& d : s.depth) {
      for (auto z : d.z) {
        out_of_range += z != 0 && (z < 500 || z > 10000);
        zeros += z == 0;
        ++total;
      }
    }
    CHECK(out_of_range == 0);
    const double rate = static_cast<double>(zeros) / total;
    CHECK(rate > 0.005);
    CHECK(rate < 0.015);
  }
}

TEST_CASE("depth planes follow the composition") {
  Scenario sc = short_scenario(ScenarioName::approach_box, 120);
  sc.params.depth_dropout = 0.0;
  const Sequence s = generate_scenario(sc);
  for (std::size_t f = 0; f < s.frames.size(); f += 7) {
    const auto& d = s.depth[f];
    const auto& ft = s.truth.frames[f];
    for (int y = 0; y < d.height; ++y) {
      for (int x = 0; x < d.width; ++x) {
        const std::uint16_t want = s.silhouettes[f].get(x, y) ? sc.params.person_depth_mm
                                   : ft.box.contains(x, y)    ? sc.params.box_depth_mm
                                                              : sc.params.wall_depth_mm;
        if (d.at(x, y) != want) FAIL_CHECK("depth mismatch at " << x << "," << y);
      }
    }
  }
}

TEST_CASE("person, background, box and opened interior occupy distinct UV bins") {
  Scenario sc = short_scenario(ScenarioName::open_box, 220);
  sc.params.noise_sigma = 0.0;
  const Sequence s = generate_scenario(sc);
  const auto& open_truth = s.truth.frames.back();
  REQUIRE(open_truth.box_open);
  const Frame& f = s.frames.back();
  std::array<std::array<int, 16>, 4> counts{};  // background, person, box ring, box interior
  for (int y = 0; y < f.height; ++y) {
    for (int x = 0; x < f.width; ++x) {
      const Yuv& p = f.at(x, y);
      const Rect& b = open_truth.box;
      int cls = 0;
      if (s.silhouettes.back().get(x, y)) cls = 1;
      else if (b.contains(x, y)) cls = Rect{b.x + 4, b.y + 4, b.w - 8, b.h - 8}.contains(x, y) ? 3 : 2;
      ++counts[cls][hist::uv_bin(p.u, p.v)];
    }
  }
  std::array<int, 4> bin{};
  for (int c = 0; c < 4; ++c) {
    int nonzero = 0;
    for (int k = 0; k < 16; ++k)
      if (counts[c][k] > 0) {
        ++nonzero;
        bin[c] = k;
      }
    CHECK_MESSAGE(nonzero == 1, "class " << c);
  }
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) CHECK(bin[a] != bin[b]);
}

TEST_CASE("occlusion script hides the right arm in two windows") {
  const Sequence s = generate_scenario(make_scenario(ScenarioName::occluded_arm));
  for (const auto& ft : s.truth.frames) {
    if (!ft.person) continue;
    const bool hidden = (ft.index >= 120 && ft.index < 150) || (ft.index >= 200 && ft.index < 230);
    CHECK(ft.right_arm_visible == !hidden);
    CHECK(ft.parts[static_cast<int>(blob::PartLabel::armR)].visible == !hidden);
  }
}

TEST_CASE("starfish truth has all eight parts") {
  const Sequence s = generate_scenario(make_scenario(ScenarioName::starfish));
  for (const auto& ft : s.truth.frames) {
    if (!ft.person) continue;
    for (const auto& p : ft.parts) CHECK(p.visible);
    CHECK(ft.hand_tips[0].x - ft.bbox.x <= FigureGeometry::arm_radius);
    CHECK(ft.bbox.right() - 1 - ft.hand_tips[1].x <= FigureGeometry::arm_radius);
  }
}

TEST_CASE("scripted events agree with the per-frame truth") {
  auto event_frame = [](const GroundTruth& t, const std::string& kind) {
    for (const auto& e : t.events)
      if (e.kind == kind) return e.frame;
    return -1;
  };
  auto first_contact = [](const GroundTruth& t) {
    for (const auto& ft : t.frames)
      if (ft.person && ft.box_present && distance_to_rect(ft.hand_tips[1], ft.box) <= 30.0) return ft.index;
    return -1;
  };

  const Sequence ap = generate_scenario(make_scenario(ScenarioName::approach_box));
  CHECK(ap.truth.events.size() == 1);
  CHECK(event_frame(ap.truth, "Approach") == first_contact(ap.truth));

  const Sequence op = generate_scenario(make_scenario(ScenarioName::open_box));
  CHECK(op.truth.events.size() == 2);
  const int open = event_frame(op.truth, "Open");
  REQUIRE(open > 0);
  CHECK(op.truth.frames[open].box_open);
  CHECK_FALSE(op.truth.frames[open - 1].box_open);
  CHECK(event_frame(op.truth, "Approach") < open);

  const Sequence ca = generate_scenario(make_scenario(ScenarioName::carry_box));
  const int lift = event_frame(ca.truth, "Carry");
  REQUIRE(lift > 0);
  CHECK(ca.truth.frames[lift].box != ca.truth.frames[lift - 1].box);
  CHECK(ca.truth.frames[lift - 1].box == ca.truth.frames[0].box);
  CHECK(event_frame(ca.truth, "Approach") < lift);

  const Sequence nw = generate_scenario(make_scenario(ScenarioName::null_walk));
  CHECK(nw.truth.events.empty());
  double closest = 1e9;
  for (const auto& ft : nw.truth.frames) {
    if (!ft.person) continue;
    for (const auto& tip : ft.hand_tips) closest = std::min(closest, distance_to_rect(tip, ft.box));
  }
  CHECK(closest > 30.0);
}

TEST_CASE("written sequence reloads identically") {
  const Scenario sc = short_scenario(ScenarioName::walker, 12);
  const Sequence s = generate_scenario(sc);
  const auto dir = scratch_dir("walker");
  write_sequence(s, sc, dir);

  const auto frames = imageio::load_frame_sequence(dir, "frame_*.ppm");
  REQUIRE(frames.size() == s.frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) CHECK(frames[f].yuv == s.frames[f].yuv);

  char name[32];
  for (std::size_t f = 0; f < s.depth.size(); ++f) {
    std::snprintf(name, sizeof name, "depth_%06d.pgm", static_cast<int>(f));
    CHECK(imageio::load_depth_raster(dir / name).z == s.depth[f].z);
  }

  std::ifstream in(dir / "truth.json");
  std::stringstream text;
  text << in.rdbuf();
  const GroundTruth t = truth_from_json(text.str());
  CHECK(t.frames.size() == s.frames.size());
  CHECK(truth_to_json(t) == truth_to_json(s.truth));
  CHECK(std::filesystem::exists(dir / "scenario.toml"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("box scenarios write the box into scenario.toml") {
  const Scenario sc = short_scenario(ScenarioName::approach_box, 3);
  const auto dir = scratch_dir("box");
  write_sequence(generate_scenario(sc), sc, dir);
  std::ifstream in(dir / "scenario.toml");
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("box.rect = [250, 100, 30, 24]") != std::string::npos);
  CHECK(text.str().find("box.ref_frame = 29") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("invalid parameters are rejected") {
  auto expect_invalid = [](Scenario sc) {
    try {
      generate_scenario(sc);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::invalid_params);
    }
  };
  Scenario sc = make_scenario(ScenarioName::walker);
  sc.params.frames = 0;
  expect_invalid(sc);
  sc = make_scenario(ScenarioName::walker);
  sc.params.speed = -1.0;
  expect_invalid(sc);
  sc = make_scenario(ScenarioName::walker);
  sc.params.person_depth_mm = 20000;
  expect_invalid(sc);
  sc = make_scenario(ScenarioName::walker);
  sc.params.width = 10;
  expect_invalid(sc);
}
