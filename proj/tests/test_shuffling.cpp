#include "supersal/error.hpp"
#include "supersal/random.hpp"
#include "supersal/shuffling.hpp"

#include "doctest.h"

using namespace supersal;

namespace {

AttendedLocationSet donor(const std::string& id, int n, int frames, double x0 = 0) {
  AttendedLocationSet s;
  s.clip_id = id;
  s.width = 100;
  s.height = 50;
  s.frames = frames;
  for (int i = 0; i < n; ++i) s.locations.push_back({0, x0 + i, 10.0 + i % 7, i % frames});
  return s;
}

}  // namespace

TEST_CASE("temporal rescale") {
  CHECK(rescale_frame(50, 100, 200) == 100);
  CHECK(rescale_frame(99, 100, 100) == 99);
  CHECK(rescale_frame(0, 37, 5) == 0);
  CHECK(rescale_frame(99, 100, 10) == 9);
  CHECK(rescale_frame(3, 4, 1) == 0);

  const auto src = donor("a", 20, 10);
  const auto r = temporal_rescale_locations(src, 10, 3);
  REQUIRE(r.size() == src.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    CHECK(r.locations[i].x == src.locations[i].x);
    CHECK(r.locations[i].y == src.locations[i].y);
    CHECK(r.locations[i].frame == src.locations[i].frame * 3 / 10);
  }
}

TEST_CASE("singleton pool and target exclusion") {
  const ClipGeometry target{100, 50, 40, 25};
  std::vector<AttendedLocationSet> sets{donor("t", 50, 40, 60), donor("d", 1, 10)};
  sets[1].locations[0] = {0, 3.5, 7.25, 9};
  const auto draws = sample_shuffled_negatives(target, "t", sets, 200, 1);
  REQUIRE(draws.size() == 200);
  for (const auto& d : draws) {
    CHECK(d.x == 3.5);
    CHECK(d.y == 7.25);
    CHECK(d.frame == 36);  // floor(9 * 40 / 10)
    CHECK(d.donor == 1);
  }
  std::vector<AttendedLocationSet> only_target{donor("t", 5, 40)};
  CHECK_THROWS_AS(sample_shuffled_negatives(target, "t", only_target, 10, 1), Error);
  std::vector<AttendedLocationSet> empty_donor{donor("t", 5, 40), donor("d", 0, 10)};
  CHECK_THROWS_AS(sample_shuffled_negatives(target, "t", empty_donor, 10, 1), Error);
}

TEST_CASE("pooled draws follow pool proportions") {
  const ClipGeometry target{100, 50, 30, 25};
  const std::vector<AttendedLocationSet> sets{donor("t", 500, 30), donor("a", 10, 20), donor("b", 30, 45)};
  const auto draws = sample_shuffled_negatives(target, "t", sets, 4000, 99);
  std::size_t from_b = 0;
  for (const auto& d : draws) {
    CHECK(d.donor != 0);
    CHECK(d.frame >= 0);
    CHECK(d.frame < 30);
    from_b += d.donor == 2;
  }
  CHECK(static_cast<double>(from_b) / 4000 == doctest::Approx(0.75).epsilon(0.04));

  const auto again = sample_shuffled_negatives(target, "t", sets, 4000, 99);
  for (std::size_t i = 0; i < draws.size(); ++i) {
    REQUIRE(again[i].x == draws[i].x);
    REQUIRE(again[i].frame == draws[i].frame);
  }

  const auto per_clip = sample_shuffled_negatives(target, "t", sets, 4000, 99, ShuffleMode::PerClipUniform);
  std::size_t per_clip_b = 0;
  for (const auto& d : per_clip) per_clip_b += d.donor == 2;
  CHECK(static_cast<double>(per_clip_b) / 4000 == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("donors at another resolution land on the target grid") {
  const ClipGeometry target{50, 25, 10, 25};
  AttendedLocationSet d = donor("d", 1, 10);
  d.locations[0] = {0, 99, 49, 0};
  const std::vector<AttendedLocationSet> sets{d};
  const auto draws = sample_shuffled_negatives(target, "t", sets, 3, 1);
  for (const auto& s : draws) {
    CHECK(s.x <= 49.0);
    CHECK(s.y <= 24.0);
  }
}
