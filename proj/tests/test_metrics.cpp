#include "supersal/error.hpp"
#include "supersal/ground_truth.hpp"
#include "supersal/metrics.hpp"
#include "supersal/random.hpp"

#include "doctest.h"
#include "instances.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace supersal;

namespace {

AttendedLocationSet locs(int w, int h, int f, std::vector<AttendedLocation> l, std::string clip = "c") {
  AttendedLocationSet s;
  s.clip_id = clip;
  s.width = w;
  s.height = h;
  s.frames = f;
  s.locations = std::move(l);
  return s;
}

SaliencyVolume frame_of(int w, int h, std::vector<float> values) {
  SaliencyVolume v(w, h, 1);
  v.data() = std::move(values);
  return v;
}

SaliencyVolume indicator(int w, int h, int f, const AttendedLocationSet& s) {
  SaliencyVolume v(w, h, f);
  for (const auto& l : s.locations) v.at(static_cast<int>(std::lround(l.x)), static_cast<int>(std::lround(l.y)), l.frame) = 1;
  return v;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("ROC AUC from scores") {
  const std::vector<double> one{1.0}, zero{0.0}, half{0.5};
  CHECK(roc_auc_from_scores(one, zero) == 1.0);
  CHECK(roc_auc_from_scores(half, half) == 0.5);
  CHECK(roc_auc_from_scores(std::vector<double>{0.9, 0.4}, std::vector<double>{0.6, 0.1}) == 0.75);
  CHECK(code_of([&] { roc_auc_from_scores({}, one); }) == ErrorCode::EmptyScoreSet);

  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(1 + rng.uniform_index(30)), n(1 + rng.uniform_index(30));
    for (double& x : p) x = static_cast<double>(rng.uniform_index(6));
    for (double& x : n) x = static_cast<double>(rng.uniform_index(6));
    const double a = roc_auc_from_scores(p, n);
    CHECK(a == doctest::Approx(oracle::pairwise_auc(p, n)).epsilon(1e-12));
    CHECK(a + roc_auc_from_scores(n, p) == 1.0);
    AucCounter c(p);
    c.add_negatives(n);
    CHECK(c.auc() == a);
  }
}

TEST_CASE("AUC-Judd") {
  const auto gt = locs(4, 3, 2, {{0, 1, 1, 0}, {0, 3, 2, 0}, {0, 0.4, 0.6, 1}});
  CHECK(auc_judd(indicator(4, 3, 2, gt), gt).value == 1.0);
  CHECK(auc_judd(SaliencyVolume(4, 3, 2, 0.3f), gt).value == 0.5);

  // 3x3 frame, distinct values 1..9, positive on the 8 (second highest): beats 7 of 8 negatives.
  auto v = frame_of(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto second = locs(3, 3, 1, {{0, 1, 2, 0}});
  CHECK(auc_judd(v, second).value == 7.0 / 8.0);
  // If the positive ties the maximum the count is 7.5 of 8.
  v.at(2, 2, 0) = 8;
  CHECK(auc_judd(v, second).value == 7.5 / 8.0);
}

TEST_CASE("AUC-Judd ignores frames without positives") {
  SaliencyVolume v(2, 2, 2, 0.0f);
  v.at(0, 0, 0) = 1;
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) v.at(x, y, 1) = 5;  // would tie or beat the positive
  CHECK(auc_judd(v, locs(2, 2, 2, {{0, 0, 0, 0}})).value == 1.0);
}

TEST_CASE("AUC-Borji") {
  const auto gt = locs(8, 8, 2, {{0, 1, 1, 0}, {0, 5, 2, 1}});
  SaliencyVolume ind = indicator(8, 8, 2, gt);
  // Random negatives can hit a positive voxel; a strictly positive floor keeps this exact.
  for (float& x : ind.data()) x = x > 0 ? 2.0f : 1.0f;
  const auto splits = borji_negative_scores(ind, gt.size(), 100, 7);
  double want = 0.0;
  for (const auto& s : splits) want += oracle::pairwise_auc({2, 2}, s);
  CHECK(auc_borji(ind, gt, 100, 7).value == doctest::Approx(want / 100).epsilon(1e-12));
  CHECK(auc_borji(SaliencyVolume(8, 8, 2, 1.0f), gt, 100, 7).value == 0.5);

  const auto in = inst::random_instance(17);
  CHECK(auc_borji(in.pred, in.gt, 100, 5).value ==
        doctest::Approx(oracle::borji(in.pred, in.gt, 100, 5)).epsilon(1e-12));
  CHECK(code_of([&] { auc_borji(in.pred, in.gt, 0, 5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("shuffled AUC") {
  const auto gt = locs(10, 10, 1, {{0, 2, 2, 0}, {0, 3, 2, 0}});
  const std::vector<ShuffledLocation> off{{7, 7, 0, 1}, {8, 1, 0, 1}};
  CHECK(sauc(indicator(10, 10, 1, gt), gt, off).value == 1.0);
  CHECK(sauc(SaliencyVolume(10, 10, 1, 0.2f), gt, off).value == 0.5);
  CHECK(code_of([&] { sauc(SaliencyVolume(10, 10, 1), gt, {}); }) == ErrorCode::NoDonorClips);

  // Positives and negatives with the same centre-biased spatial law.
  const int w = 64, h = 48;
  SaliencyVolume centre(w, h, 1);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double dx = (x - 31.5) / 12, dy = (y - 23.5) / 10;
      centre.at(x, y, 0) = static_cast<float>(std::exp(-0.5 * (dx * dx + dy * dy)));
    }
  Rng rng(12);
  auto draw = [&](double& x, double& y) {
    x = std::clamp(31.5 + 12 * rng.normal(), 0.0, w - 1.0);
    y = std::clamp(23.5 + 10 * rng.normal(), 0.0, h - 1.0);
  };
  AttendedLocationSet pos = locs(w, h, 1, {});
  std::vector<ShuffledLocation> negs;
  for (int i = 0; i < 3000; ++i) {
    double x, y;
    draw(x, y);
    pos.locations.push_back({0, x, y, 0});
    draw(x, y);
    negs.push_back({x, y, 0, 1});
  }
  CHECK(std::abs(sauc(centre, pos, negs).value - 0.5) <= 0.02);
}

TEST_CASE("NSS") {
  CHECK(nss(SaliencyVolume(3, 3, 1, 2.0f), locs(3, 3, 1, {{0, 1, 1, 0}})).value == 0.0);
  const auto v = frame_of(2, 2, {0, 0, 0, 4});
  CHECK(nss(v, locs(2, 2, 1, {{0, 1, 1, 0}})).value == doctest::Approx(3.0 / std::sqrt(3.0)).epsilon(1e-12));

  // Every pixel attended once: z-scores cancel.
  const auto in = inst::random_instance(23);
  AttendedLocationSet all = locs(in.pred.width(), in.pred.height(), in.pred.frames(), {});
  for (int y = 0; y < in.pred.height(); ++y)
    for (int x = 0; x < in.pred.width(); ++x) all.locations.push_back({0, double(x), double(y), 0});
  CHECK(std::abs(nss(in.pred, all).value) <= 1e-12);
}

TEST_CASE("SIM") {
  const auto p = frame_of(2, 1, {0.5f, 0.5f});
  const auto q = frame_of(2, 1, {0.25f, 0.75f});
  CHECK(sim(p, q).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(sim(q, q).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sim(frame_of(2, 1, {1, 0}), frame_of(2, 1, {0, 1})).value == 0.0);
  CHECK(sim(p, q, NormalizationMode::Global).value == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(code_of([&] { sim(p, SaliencyVolume(2, 1, 1)); }) == ErrorCode::AllZero);
  CHECK(code_of([&] { sim(p, SaliencyVolume(3, 1, 1, 1.0f)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("CC") {
  const auto in = inst::random_instance(31);
  CHECK(cc(in.gt_vol, in.gt_vol).value == doctest::Approx(1.0).epsilon(1e-12));
  const float top = *std::max_element(in.gt_vol.data().begin(), in.gt_vol.data().end());
  const auto anti = inst::transformed(in.gt_vol, [&](float x) { return top - x; });
  CHECK(cc(anti, in.gt_vol).value == doctest::Approx(-1.0).epsilon(1e-6));

  Rng rng(4);
  SaliencyVolume a(4, 4, 2), b(4, 4, 2);
  for (float& x : a.data()) x = rng.uniform01f();
  for (float& x : b.data()) x = rng.uniform01f();
  CHECK(std::abs(cc(a, b).value - oracle::cc(a, b)) <= 1e-12);
  CHECK(code_of([&] { cc(SaliencyVolume(4, 4, 2, 1.0f), b); }) == ErrorCode::ZeroVariance);

  // Per-frame mode skips frames without variance.
  SaliencyVolume a2 = a;
  for (float& x : a2.frame(1)) x = 0.5f;
  SaliencyVolume a0(4, 4, 1), b0(4, 4, 1);
  std::copy(a.frame(0).begin(), a.frame(0).end(), a0.data().begin());
  std::copy(b.frame(0).begin(), b.frame(0).end(), b0.data().begin());
  CHECK(cc(a2, b, CcMode::PerFrame).value == doctest::Approx(oracle::cc(a0, b0)).epsilon(1e-12));
}

TEST_CASE("KLD") {
  CHECK(kld(frame_of(2, 1, {0.5f, 0.5f}), frame_of(2, 1, {1, 0})).value == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  const auto in = inst::random_instance(37);
  CHECK(std::abs(kld(in.gt_vol, in.gt_vol).value) <= 1e-9);
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    SaliencyVolume p(3, 2, 1), q(3, 2, 1);
    for (float& x : p.data()) x = rng.uniform01f();
    for (float& x : q.data()) x = rng.uniform01f();
    q.data()[0] += 0.01f;
    REQUIRE(kld(p, q).value >= -1e-9);
  }
}

TEST_CASE("information gain") {
  const auto in = inst::random_instance(41);
  CHECK(info_gain(in.baseline, in.gt, in.baseline).value == 0.0);
  const SaliencyVolume uniform(10, 10, 2, 1.0f);
  const auto gt = locs(10, 10, 2, {{0, 3.3, 4.4, 0}, {0, 9, 9, 1}});
  CHECK(info_gain(uniform, gt, SaliencyVolume(10, 10, 2, 3.0f)).value == doctest::Approx(0.0));

  // Prediction doubles the baseline density at 10 positives on a 100x100 support.
  SaliencyVolume pred(100, 100, 1, 1.0f);
  AttendedLocationSet pos = locs(100, 100, 1, {});
  for (int k = 0; k < 10; ++k) {
    pred.at(7 * k, 3 * k, 0) = 2.0f;
    pos.locations.push_back({0, 7.0 * k, 3.0 * k, 0});
  }
  const double want = std::log2(2.0 / 10010 + 1e-12) - std::log2(1.0 / 10000 + 1e-12);
  CHECK(info_gain(pred, pos, SaliencyVolume(100, 100, 1, 1.0f)).value == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(1.0).epsilon(0.002));
}

TEST_CASE("balanced accuracy") {
  const std::vector<double> hi{0.9, 0.8}, lo{0.2, 0.1};
  CHECK(balanced_accuracy_from_scores(hi, lo) == 1.0);
  CHECK(balanced_accuracy_from_scores(hi, hi) == 0.5);
  const std::vector<double> p{0.9, 0.8, 0.2}, n{0.7, 0.3, 0.1};
  CHECK(balanced_accuracy_from_scores(p, n) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(oracle::balanced_accuracy(p, n) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(1 + rng.uniform_index(20)), b(1 + rng.uniform_index(20));
    for (double& x : a) x = static_cast<double>(rng.uniform_index(5));
    for (double& x : b) x = static_cast<double>(rng.uniform_index(5));
    REQUIRE(balanced_accuracy_from_scores(a, b) == doctest::Approx(oracle::balanced_accuracy(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("xAUC") {
  SaliencyVolume v(10, 10, 1, 0.0f);
  const auto sp = locs(10, 10, 1, {{0, 1, 1, 0}, {0, 2, 2, 0}});
  const auto fix = locs(10, 10, 1, {{0, 7, 7, 0}, {0, 8, 8, 0}, {0, 9, 9, 0}});
  v.at(1, 1, 0) = 1;
  v.at(2, 2, 0) = 1;
  CHECK(xauc(v, sp, fix, 3).value == 1.0);
  CHECK(xauc(v, sp, sp, 3).value == 0.5);
  CHECK(code_of([&] { xauc(v, sp, locs(10, 10, 1, {{0, 1, 1, 0}}, "other"), 3); }) == ErrorCode::InvalidArgument);

  const auto idx = xauc_negative_indices(3, 10, 5);
  CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 3);
  CHECK(xauc_negative_indices(10, 3, 5).size() == 10);

  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto in = inst::random_instance(100 + s);
    REQUIRE(xauc(in.pred, in.gt, in.fix, s).value + xauc_swapped(in.pred, in.gt, in.fix, s).value == 1.0);
  }
}

TEST_CASE("all metrics match the oracles on random instances") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const auto in = inst::random_instance(1000 + s);
    REQUIRE(std::abs(auc_judd(in.pred, in.gt).value - oracle::judd(in.pred, in.gt)) <= 1e-9);
    REQUIRE(std::abs(auc_borji(in.pred, in.gt, 10, s).value - oracle::borji(in.pred, in.gt, 10, s)) <= 1e-9);
    REQUIRE(std::abs(sauc(in.pred, in.gt, in.shuffled).value - oracle::shuffled_auc(in.pred, in.gt, in.shuffled)) <= 1e-9);
    REQUIRE(std::abs(nss(in.pred, in.gt).value - oracle::nss(in.pred, in.gt)) <= 1e-9);
    REQUIRE(std::abs(sim(in.pred, in.gt_vol).value - oracle::sim(in.pred, in.gt_vol)) <= 1e-9);
    REQUIRE(std::abs(cc(in.pred, in.gt_vol).value - oracle::cc(in.pred, in.gt_vol)) <= 1e-9);
    REQUIRE(std::abs(kld(in.pred, in.gt_vol, 1e-12).value - oracle::kld(in.pred, in.gt_vol, 1e-12)) <= 1e-9);
    REQUIRE(std::abs(info_gain(in.pred, in.gt, in.baseline, 1e-12).value -
                     oracle::info_gain(in.pred, in.gt, in.baseline, 1e-12)) <= 1e-9);
    REQUIRE(std::abs(balanced_accuracy(in.pred, in.gt, 10, s).value -
                     oracle::borji_balanced_accuracy(in.pred, in.gt, 10, s)) <= 1e-9);
    REQUIRE(std::abs(xauc(in.pred, in.gt, in.fix, s).value - oracle::xauc(in.pred, in.gt, in.fix, s)) <= 1e-9);
  }
}

TEST_CASE("coverage checks") {
  const auto gt = locs(4, 4, 1, {{0, 1, 1, 0}});
  CHECK(code_of([&] { auc_judd(SaliencyVolume(5, 4, 1, 1.0f), gt); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([&] { nss(SaliencyVolume(4, 4, 1, 1.0f), locs(4, 4, 1, {})); }) == ErrorCode::EmptyScoreSet);
  CHECK(code_of([&] { nss(SaliencyVolume(4, 4, 1, 1.0f), locs(4, 4, 1, {{0, 1, 1, 3}})); }) ==
        ErrorCode::FrameOutOfRange);
  CHECK(parse_metric("SAUC") == Metric::Sauc);
  CHECK_FALSE(parse_metric("sauc"));
  CHECK_FALSE(higher_is_better(Metric::Kld));
  CHECK(is_auc_family(Metric::Xauc));
  CHECK_FALSE(is_auc_family(Metric::Nss));
}
