#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "slrel/checks/ego_tests.hpp"
#include "slrel/checks/map_test.hpp"
#include "slrel/checks/prediction_test.hpp"
#include "slrel/estimator.hpp"
#include "slrel/sim/presets.hpp"
#include "slrel/sim/simulator.hpp"
#include "test_util.hpp"

using namespace slrel;
using slrel::testing::expect_opinion_near;
using slrel::testing::expect_valid;
using slrel::testing::Gen;

namespace {

const DiscountVector kNoDiscount = DiscountVector::uniform(2, 1.0);

ObjectState object(ObjectId id, Vec2 p, double sigma = 0.3, Vec2 v = {0, 0}, double t = 0.0,
                   ClassTag tag = ClassTag::vehicle) {
  return ObjectState{id, p, v, sigma, t, tag};
}

ObjectList list(Source source, double t, std::vector<ObjectState> objects) {
  return ObjectList{t, std::move(objects), source};
}

std::vector<ObjectList> rsu_lists(const ScenarioConfig& cfg) {
  std::vector<ObjectList> out;
  for (const Tick& t : simulate(cfg)) {
    out.push_back(t.rsu);
  }
  return out;
}

// References shared by the map and estimator tests.
const std::vector<LaneReference>& preset_references() {
  static const std::vector<LaneReference> refs =
      build_references(default_intersection(), rsu_lists(commissioning_scenario(1000, 300.0)));
  return refs;
}

// Independent piecewise-linear evaluation by segment scan.
double polyline_value(const std::vector<MeasurementTrace::Sample>& pts, double t) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (t >= pts[i].time && t <= pts[i + 1].time) {
      const double a = (t - pts[i].time) / (pts[i + 1].time - pts[i].time);
      return (1.0 - a) * pts[i].value + a * pts[i + 1].value;
    }
  }
  return pts.back().value;
}

}  // namespace

// ---- prediction ------------------------------------------------------------

TEST(PredictCv, StationaryObjectStaysCenteredWithWideningBounds) {
  const std::vector<TrackSample> history{{0.0, 5.0, 0.0}, {0.1, 5.0, 0.0}, {0.2, 5.0, 0.0}};
  const auto tuples = predict_cv(history, PredictionSettings{2.0, 5, 0.5});
  ASSERT_EQ(tuples.size(), 5u);
  double last_width = 0.0;
  for (const auto& p : tuples) {
    EXPECT_NEAR(0.5 * (p.lower + p.upper), 5.0, 1e-9);
    EXPECT_GT(p.upper - p.lower, last_width);
    EXPECT_GT(p.predicted_for, p.made_at);
    last_width = p.upper - p.lower;
  }
  EXPECT_NEAR(tuples.back().predicted_for, 2.2, 1e-12);
}

TEST(PredictCv, ConstantSpeedExactMeasurementsGiveExactCenters) {
  const double v = 3.0;
  std::vector<TrackSample> history;
  for (int i = 0; i < 4; ++i) {
    history.push_back({0.1 * i, 2.0 + v * 0.1 * i, 0.0});
  }
  const auto tuples = predict_cv(history, PredictionSettings{2.0, 5, 0.0});
  for (const auto& p : tuples) {
    const double dt = p.predicted_for - 0.3;
    EXPECT_NEAR(0.5 * (p.lower + p.upper), 2.0 + v * 0.3 + v * dt, 1e-9);
  }
}

TEST(PredictCv, EmptyHistoryThrows) {
  EXPECT_THROW(predict_cv(std::vector<TrackSample>{}, PredictionSettings{}), PreconditionError);
}

TEST(PredictCv, CovarianceMatchesMatrixRecursion) {
  Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double q = gen.uniform(0.0, 2.0);
    const double r = std::pow(gen.uniform(0.05, 1.0), 2);
    double t = 0.0;
    std::vector<TrackSample> history{{t, gen.uniform(0, 50), std::sqrt(r)}};
    const int n = 2 + static_cast<int>(gen.index(10));
    for (int i = 0; i < n; ++i) {
      t += gen.uniform(0.05, 0.3);
      history.push_back({t, history.back().position + gen.uniform(0, 3), std::sqrt(r)});
    }

    using Mat = Eigen::Matrix2d;
    using Vec = Eigen::Vector2d;
    const auto transition = [](double dt) {
      Mat f;
      f << 1, dt, 0, 1;
      return f;
    };
    const auto noise = [q](double dt) {
      Mat m;
      m << dt * dt * dt / 3, dt * dt / 2, dt * dt / 2, dt;
      return Mat(q * m);
    };
    const Eigen::RowVector2d h(1, 0);
    Vec x(history[0].position, 0.0);
    Mat p = Mat::Zero();
    p(0, 0) = r;
    p(1, 1) = 100.0;
    for (std::size_t i = 1; i < history.size(); ++i) {
      const double dt = history[i].time - history[i - 1].time;
      x = transition(dt) * x;
      p = transition(dt) * p * transition(dt).transpose() + noise(dt);
      const double s = (h * p * h.transpose())(0, 0) + r;
      const Vec k = p * h.transpose() / s;
      x = x + k * (history[i].position - (h * x)(0, 0));
      p = (Mat::Identity() - k * h) * p;
    }

    const PredictionSettings settings{1.5, 3, q};
    const auto tuples = predict_cv(history, settings);
    for (const auto& tup : tuples) {
      const double dt = tup.predicted_for - t;
      const Vec xp = transition(dt) * x;
      const Mat pp = transition(dt) * p * transition(dt).transpose() + noise(dt);
      const double sigma = std::sqrt(pp(0, 0) + r);
      EXPECT_NEAR(tup.lower, xp(0) - sigma, 1e-9);
      EXPECT_NEAR(tup.upper, xp(0) + sigma, 1e-9);
    }
  }
}

TEST(ClassifyPredictions, IntervalStraddlingTraceIsCorrect) {
  const MeasurementTrace trace({{0.0, 0.0}, {1.0, 0.0}});
  const std::vector<PredictionTuple> tuples{{-1.0, 1.0, 0.5, 0.0}};
  const auto c = classify_predictions(tuples, trace);
  EXPECT_EQ(c.correct, 1.0);
  EXPECT_EQ(c.incorrect, 0.0);
}

TEST(ClassifyPredictions, IntervalAboveTraceIsIncorrect) {
  const MeasurementTrace trace({{0.0, 0.0}, {1.0, 0.0}});
  const std::vector<PredictionTuple> tuples{{0.5, 1.5, 0.5, 0.0}};
  const auto c = classify_predictions(tuples, trace);
  EXPECT_EQ(c.correct, 0.0);
  EXPECT_EQ(c.incorrect, 1.0);
}

TEST(ClassifyPredictions, TuplesOutsideTraceAreIgnored) {
  const MeasurementTrace trace({{0.0, 0.0}, {1.0, 0.0}});
  const std::vector<PredictionTuple> tuples{{-1.0, 1.0, 1.5, 0.0}, {-1.0, 1.0, -0.1, 0.0}};
  const auto c = classify_predictions(tuples, trace);
  EXPECT_EQ(c.correct + c.incorrect, 0.0);
}

TEST(ClassifyPredictions, MatchesDenseSignChangeOracle) {
  Gen gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<MeasurementTrace::Sample> pts;
    double t = 0.0;
    for (int i = 0; i < 8; ++i) {
      pts.push_back({t, gen.uniform(-5, 5)});
      t += gen.uniform(0.05, 1.0);
    }
    const MeasurementTrace trace(pts);
    std::vector<PredictionTuple> tuples;
    for (int i = 0; i < 20; ++i) {
      const double at = gen.uniform(pts.front().time, pts.back().time);
      const double lo = gen.uniform(-6, 6);
      tuples.push_back({lo, lo + gen.uniform(0, 4), at, 0.0});
    }
    double correct = 0.0;
    for (const auto& p : tuples) {
      // Correct iff value - PL changes sign (or vanishes) between the bounds.
      const double pl = polyline_value(pts, p.predicted_for);
      const double below = p.lower - pl;
      const double above = p.upper - pl;
      if (below <= 0.0 && above >= 0.0) {
        correct += 1.0;
      }
    }
    const auto c = classify_predictions(tuples, trace);
    EXPECT_EQ(c.correct, correct);
    EXPECT_EQ(c.incorrect, static_cast<double>(tuples.size()) - correct);
  }
}

TEST(ClassifyPredictions, InvariantToRedundantCollinearPoints) {
  Gen gen(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<MeasurementTrace::Sample> pts;
    double t = 0.0;
    for (int i = 0; i < 6; ++i) {
      pts.push_back({t, gen.uniform(-5, 5)});
      t += gen.uniform(0.1, 1.0);
    }
    std::vector<MeasurementTrace::Sample> dense;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      dense.push_back(pts[i]);
      for (double a : {0.25, 0.5, 0.8}) {
        dense.push_back({pts[i].time + a * (pts[i + 1].time - pts[i].time),
                         pts[i].value + a * (pts[i + 1].value - pts[i].value)});
      }
    }
    dense.push_back(pts.back());
    std::vector<PredictionTuple> tuples;
    for (int i = 0; i < 30; ++i) {
      const double lo = gen.uniform(-6, 6);
      tuples.push_back({lo, lo + gen.uniform(0, 3), gen.uniform(0, t), 0.0});
    }
    const auto a = classify_predictions(tuples, MeasurementTrace(pts));
    const auto b = classify_predictions(tuples, MeasurementTrace(dense));
    EXPECT_EQ(a.correct, b.correct);
    EXPECT_EQ(a.incorrect, b.incorrect);
  }
}

TEST(PredictionTestUpdate, TenCorrectUndiscountedIsEvidenceTen) {
  PredictionTestState state;
  state.p_indep = kNoDiscount;
  const MeasurementTrace trace({{0.0, 0.0}, {2.0, 0.0}});
  const std::vector<PredictionTuple> tuples(10, PredictionTuple{-1.0, 1.0, 1.0, 0.0});
  state = prediction_test_update(state, tuples, trace);
  // r = [10, 0], W = 2: b = [10/12, 0], u = 2/12.
  expect_opinion_near(state.opinion, Opinion({10.0 / 12.0, 0.0}, 2.0 / 12.0, {0.5, 0.5}), 1e-12);
}

TEST(PredictionTestUpdate, ZeroIndependenceIsVacuous) {
  PredictionTestState state;
  state.p_indep = DiscountVector::uniform(2, 0.0);
  const MeasurementTrace trace({{0.0, 0.0}, {2.0, 0.0}});
  const std::vector<PredictionTuple> tuples(7, PredictionTuple{-1.0, 1.0, 1.0, 0.0});
  state = prediction_test_update(state, tuples, trace);
  EXPECT_NEAR(state.opinion.uncertainty(), 1.0, 1e-12);
  EXPECT_NEAR(projected_reliability(state.opinion), 0.5, 1e-12);
}

TEST(PredictionTestUpdate, SixCorrectFourIncorrect) {
  PredictionTestState state;
  state.p_indep = kNoDiscount;
  const MeasurementTrace trace({{0.0, 0.0}, {2.0, 0.0}});
  std::vector<PredictionTuple> tuples(6, PredictionTuple{-1.0, 1.0, 1.0, 0.0});
  tuples.insert(tuples.end(), 4, PredictionTuple{1.0, 2.0, 1.0, 0.0});
  state = prediction_test_update(state, tuples, trace);
  EXPECT_NEAR(state.opinion.belief(kReliable), 0.5, 1e-12);
  EXPECT_NEAR(state.opinion.belief(kUnreliable), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(state.opinion.uncertainty(), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(projected_reliability(state.opinion), 7.0 / 12.0, 1e-12);
}

TEST(PredictionTest, CountsNeverDecreaseOverAStream) {
  const ScenarioConfig cfg = evaluation_scenario("north", 3);
  PredictionTest test(cfg.map, PredictionTestConfig{});
  double correct = 0.0;
  double incorrect = 0.0;
  for (const Tick& tick : simulate(cfg)) {
    test.update(tick.rsu);
    EXPECT_GE(test.state().correct, correct);
    EXPECT_GE(test.state().incorrect, incorrect);
    correct = test.state().correct;
    incorrect = test.state().incorrect;
    expect_valid(test.opinion());
  }
  EXPECT_GT(correct, 100.0);
}

// ---- lanes -----------------------------------------------------------------

TEST(AssociateLane, PicksHeadingCompatibleLane) {
  const IntersectionMap map = default_intersection();
  // Between the two north-south lanes; heading south selects "north".
  const auto south_bound = associate_lane(map, {0.2, 20.0}, {0.0, -8.0});
  ASSERT_TRUE(south_bound);
  EXPECT_EQ(south_bound->lane->lane_id, "north");
  const auto north_bound = associate_lane(map, {-0.2, 20.0}, {0.0, 8.0});
  ASSERT_TRUE(north_bound);
  EXPECT_EQ(north_bound->lane->lane_id, "south");
  // Stationary objects take the nearest lane.
  const auto parked = associate_lane(map, {-1.0, 20.0}, {0.0, 0.0});
  ASSERT_TRUE(parked);
  EXPECT_EQ(parked->lane->lane_id, "north");
}

TEST(AssociateLane, FarOffsetIsOffLane) {
  const IntersectionMap map = default_intersection();
  const auto m = associate_lane(map, {-6.0, 20.0}, {0.0, -8.0});
  ASSERT_TRUE(m);
  EXPECT_FALSE(m->on_lane());
}

TEST(InCoverage, RespectsMarginsAndBlindSpot) {
  const IntersectionMap map = default_intersection();
  EXPECT_TRUE(in_coverage(map, {10.0, 10.0}, 1.0));
  EXPECT_FALSE(in_coverage(map, {34.5, 10.0}, 1.0));
  EXPECT_FALSE(in_coverage(map, {0.0, 0.0}, 1.0));
  EXPECT_FALSE(in_coverage(map, {3.5, 0.0}, 1.0));
  EXPECT_TRUE(in_coverage(map, {3.5, 0.0}, 0.0));
  EXPECT_FALSE(in_coverage(map, {50.0, 0.0}, 0.0));
}

// ---- map test --------------------------------------------------------------

TEST(LaneHistogram, CenterlineDataConcentratesInCenterCell) {
  const LaneGeometry lane{"L", {{0, 0}, {20, 0}}, 2.0};
  LaneHistogram hist(lane, 5.0, 0.5);
  ASSERT_EQ(hist.cell_count(), 8u);
  for (int i = 0; i < 40; ++i) {
    hist.add(LaneCoordinates{0.5 * i, 0.0, true});
  }
  const LaneReference ref = build_reference(hist);
  EXPECT_FALSE(ref.flagged_empty);
  EXPECT_EQ(ref.active_bins.size(), 4u);
  const std::size_t center = 4;  // cell [0, 0.5)
  for (std::size_t k = 0; k < hist.cell_count(); ++k) {
    if (k == center) {
      EXPECT_GT(ref.opinion.belief(k), 0.5);
    } else {
      EXPECT_EQ(ref.opinion.belief(k), 0.0);
    }
  }
}

TEST(LaneHistogram, TwoEquallyPopulatedCellsGetEqualBelief) {
  const LaneGeometry lane{"L", {{0, 0}, {20, 0}}, 2.0};
  LaneHistogram hist(lane, 5.0, 0.5);
  for (int i = 0; i < 30; ++i) {
    hist.add(LaneCoordinates{0.3 * i, -0.25, true});
    hist.add(LaneCoordinates{0.3 * i, 0.25, true});
  }
  const Opinion op = build_reference(hist).opinion;
  EXPECT_NEAR(op.belief(3), op.belief(4), 1e-9);
  EXPECT_GT(op.belief(3), 0.0);
}

TEST(LaneHistogram, PooledOpinionIsEvidenceAverageOfBins) {
  Gen gen(21);
  for (int trial = 0; trial < 50; ++trial) {
    const LaneGeometry lane{"L", {{0, 0}, {40, 0}}, 2.0};
    LaneHistogram hist(lane, 5.0, 0.5);
    const int n = 1 + static_cast<int>(gen.index(200));
    for (int i = 0; i < n; ++i) {
      hist.add(LaneCoordinates{gen.uniform(0, 40), gen.uniform(-2, 2), true});
    }
    const LaneReference ref = build_reference(hist);
    // Oracle: mean raw count per cell over bins with data, mapped with W = 2.
    std::vector<double> mean(hist.cell_count(), 0.0);
    for (std::size_t b : ref.active_bins) {
      for (std::size_t k = 0; k < hist.cell_count(); ++k) {
        mean[k] += hist.bin(b)[k] / static_cast<double>(ref.active_bins.size());
      }
    }
    double total = 0.0;
    for (double m : mean) {
      total += m;
    }
    for (std::size_t k = 0; k < hist.cell_count(); ++k) {
      EXPECT_NEAR(ref.opinion.belief(k), mean[k] / (2.0 + total), 1e-9);
    }
    EXPECT_NEAR(ref.opinion.uncertainty(), 2.0 / (2.0 + total), 1e-9);
  }
}

TEST(LaneHistogram, LanesWithoutDataAreFlaggedVacuous) {
  const IntersectionMap map = default_intersection();
  const auto refs = build_references(map, {list(Source::rsu, 0.0, {object(1, {-1.375, 20.0}, 0.3, {0, -8})})});
  ASSERT_EQ(refs.size(), 4u);
  EXPECT_FALSE(refs[0].flagged_empty);
  for (std::size_t i = 1; i < refs.size(); ++i) {
    EXPECT_TRUE(refs[i].flagged_empty);
    EXPECT_TRUE(refs[i].opinion.is_vacuous());
  }
}

TEST(MapTest, MatchingDataRaisesReliabilityMonotonically) {
  const IntersectionMap map = default_intersection();
  MapTest test(map, preset_references(), HistogramLayout{}, MapTestConfig{});
  double last = projected_reliability(test.opinion());
  for (const ObjectList& l : rsu_lists(commissioning_scenario(2000, 60.0))) {
    const MapUpdate u = test.update(l);
    EXPECT_FALSE(u.revised) << "t=" << l.timestamp << " dc=" << u.dc;
    const double p = projected_reliability(test.opinion());
    EXPECT_GE(p, last - 1e-12);
    last = p;
  }
  EXPECT_GT(last, 0.9);
}

TEST(MapTest, ZeroShiftNeverRevisesOnceSamplesAreCertain) {
  const IntersectionMap map = default_intersection();
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ScenarioConfig cfg = evaluation_scenario("north", seed);
    MapTest test(cfg.map, preset_references(), HistogramLayout{}, MapTestConfig{});
    for (const ObjectList& l : rsu_lists(cfg)) {
      const MapUpdate u = test.update(l);
      bool certain = true;
      for (std::size_t i = 0; i < map.lanes.size(); ++i) {
        certain = certain && test.sample_opinion(i).uncertainty() < 0.5;
      }
      if (certain) {
        EXPECT_FALSE(u.revised) << "seed " << seed << " t=" << l.timestamp;
      }
    }
  }
}

TEST(MapTest, LargeEastShiftDrivesReliabilityToZero) {
  ScenarioConfig cfg = evaluation_scenario("north", 1);
  cfg.fault = FaultSpec{FaultKind::map_shift_east, 8.0, 2.25};
  MapTest test(cfg.map, preset_references(), HistogramLayout{}, MapTestConfig{});
  double before_onset = 0.0;
  for (const ObjectList& l : rsu_lists(cfg)) {
    test.update(l);
    if (l.timestamp < 8.0) {
      before_onset = projected_reliability(test.opinion());
    }
    expect_valid(test.opinion());
  }
  EXPECT_GT(before_onset, 0.8);
  EXPECT_LE(projected_reliability(test.opinion()), 0.1);
}

TEST(MapTest, OffLaneObjectForcesFullConflict) {
  const IntersectionMap map = default_intersection();
  MapTest test(map, preset_references(), HistogramLayout{}, MapTestConfig{});
  for (int i = 0; i < 20; ++i) {
    test.update(list(Source::rsu, 0.1 * i, {object(1, {-1.375, 20.0 - 0.8 * i}, 0.3, {0, -8})}));
  }
  const double before = projected_reliability(test.opinion());
  const MapUpdate u = test.update(list(Source::rsu, 2.0, {object(1, {-8.0, 4.0}, 0.3, {0, -8})}));
  EXPECT_TRUE(u.off_lane);
  EXPECT_TRUE(u.revised);
  EXPECT_EQ(u.dc, 1.0);
  EXPECT_LT(projected_reliability(test.opinion()), before);
  expect_valid(test.opinion());
}

TEST(MapTest, MissingReferenceIsADataError) {
  const IntersectionMap map = default_intersection();
  std::vector<LaneReference> refs = preset_references();
  refs.pop_back();
  EXPECT_THROW(MapTest(map, refs, HistogramLayout{}, MapTestConfig{}), DataError);
  EXPECT_THROW(MapTest(map, preset_references(), HistogramLayout{5.0, 0.25}, MapTestConfig{}), DataError);
}

TEST(MapTest, FunctionalUpdateMatchesMember) {
  const IntersectionMap map = default_intersection();
  MapTest a(map, preset_references(), HistogramLayout{}, MapTestConfig{});
  MapTest b = a;
  for (const ObjectList& l : rsu_lists(evaluation_scenario("south", 2))) {
    a.update(l);
    b = map_test_update(std::move(b), l);
  }
  expect_opinion_near(a.opinion(), b.opinion(), 0.0);
}

// ---- ego perception and localization ---------------------------------------

TEST(PerceptionTest, MatchWithinGateAddsUnitEvidence) {
  PerceptionTestState s;
  s = perception_test_update(s, list(Source::ego, 1.0, {object(1, {10, 10})}),
                             list(Source::rsu, 1.0, {object(7, {10.5, 10})}));
  expect_opinion_near(s.opinion, binary_from_evidence(1.0, 0.0), 1e-12);
  EXPECT_EQ(s.confirmed, 1.0);
}

TEST(PerceptionTest, MissingObjectAddsWeightedNegativeEvidence) {
  PerceptionTestState s;
  const auto ego = list(Source::ego, 1.0, {object(3, {10, 10}, 0.2, {3, 0}, 1.0, ClassTag::bicycle)});
  s = perception_test_update(s, ego, list(Source::rsu, 1.0, {}));
  expect_opinion_near(s.opinion, binary_from_evidence(0.0, 10.0), 1e-12);
  EXPECT_LT(projected_reliability(s.opinion), 0.5);
}

TEST(PerceptionTest, EmptyEgoListLeavesStateUnchanged) {
  PerceptionTestState s;
  s.opinion = binary_from_evidence(4.0, 1.0);
  const PerceptionTestState out =
      perception_test_update(s, list(Source::ego, 1.0, {}), list(Source::rsu, 1.0, {object(1, {0, 0})}));
  expect_opinion_near(out.opinion, s.opinion, 0.0);
}

TEST(PerceptionTest, GateIsStrictAndEgoEntriesAreSkipped) {
  PerceptionTestState s;
  s = perception_test_update(s, list(Source::ego, 1.0, {object(1, {12, 10})}),
                             list(Source::rsu, 1.0, {object(7, {10, 10})}));
  EXPECT_EQ(s.missed, 1.0);
  PerceptionTestState t;
  t = perception_test_update(t, list(Source::ego, 1.0, {object(0, {0, 0}, 0.1, {}, 1.0, ClassTag::ego)}),
                             list(Source::rsu, 1.0, {}));
  EXPECT_TRUE(t.opinion.is_vacuous());
}

TEST(PerceptionTest, MisalignedListsAreRejected) {
  EXPECT_THROW(perception_test_update(PerceptionTestState{}, list(Source::ego, 1.0, {}), list(Source::rsu, 1.2, {})),
               PreconditionError);
}

TEST(LocalizationTest, InsideThreeSigmaConfirms) {
  LocalizationTestState s;
  const EgoPose ego{{0.0, 0.0}, 0.25, 1.0};
  const auto r = localization_test_update(s, ego, list(Source::rsu, 1.0, {object(0, {1.0, 0.0}, 0.25)}), true);
  EXPECT_FALSE(r.missed_detection);
  expect_opinion_near(r.state.opinion, binary_from_evidence(1.0, 0.0), 1e-12);
}

TEST(LocalizationTest, BeyondThreeSigmaIsUnderestimatedUncertainty) {
  LocalizationTestState s;
  const EgoPose ego{{0.0, 0.0}, 0.25, 1.0};
  const auto r = localization_test_update(s, ego, list(Source::rsu, 1.0, {object(0, {2.0, 0.0}, 0.25)}), true);
  EXPECT_FALSE(r.missed_detection);
  expect_opinion_near(r.state.opinion, binary_from_evidence(0.0, 10.0), 1e-12);
  EXPECT_LT(projected_reliability(r.state.opinion), 0.5);
}

TEST(LocalizationTest, OutsideCoverageDoesNothing) {
  LocalizationTestState s;
  const IntersectionMap map = default_intersection();
  const EgoPose ego{{-1.375, 60.0}, 0.1, 1.0};
  const auto r = localization_test_update(s, ego, list(Source::rsu, 1.0, {}), map, 1.0);
  EXPECT_FALSE(r.missed_detection);
  EXPECT_TRUE(r.state.opinion.is_vacuous());
}

TEST(LocalizationTest, MissingEgoReportRaisesFlagOnly) {
  LocalizationTestState s;
  const IntersectionMap map = default_intersection();
  const EgoPose ego{{-1.375, 20.0}, 0.1, 1.0};
  const auto r = localization_test_update(s, ego, list(Source::rsu, 1.0, {object(4, {10, 10})}), map, 1.0);
  EXPECT_TRUE(r.missed_detection);
  EXPECT_TRUE(r.state.opinion.is_vacuous());
}

// ---- properties ------------------------------------------------------------

TEST(PerceptionTest, ConfirmationsNeverDecreaseReliability) {
  PerceptionTestState s;
  double last = projected_reliability(s.opinion);
  for (int i = 0; i < 100; ++i) {
    s = perception_test_update(s, list(Source::ego, 0.1 * i, {object(1, {10, 10})}),
                               list(Source::rsu, 0.1 * i, {object(1, {10.2, 10})}));
    const double p = projected_reliability(s.opinion);
    EXPECT_GE(p, last);
    last = p;
  }
}

TEST(PerceptionTest, MissDropsThenRecoversBelowAllConfirmTrajectory) {
  Gen gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int warmup = 1 + static_cast<int>(gen.index(40));
    PerceptionTestState faulty;
    PerceptionTestState clean;
    const auto ego = [](int i) { return list(Source::ego, 0.1 * i, {object(1, {10, 10})}); };
    const auto seen = [](int i) { return list(Source::rsu, 0.1 * i, {object(1, {10.1, 10})}); };
    for (int i = 0; i < warmup; ++i) {
      faulty = perception_test_update(faulty, ego(i), seen(i));
      clean = perception_test_update(clean, ego(i), seen(i));
    }
    const double before = projected_reliability(faulty.opinion);
    faulty = perception_test_update(faulty, ego(warmup), list(Source::rsu, 0.1 * warmup, {}));
    clean = perception_test_update(clean, ego(warmup), seen(warmup));
    double last = projected_reliability(faulty.opinion);
    EXPECT_LT(last, before);
    for (int i = warmup + 1; i < warmup + 60; ++i) {
      faulty = perception_test_update(faulty, ego(i), seen(i));
      clean = perception_test_update(clean, ego(i), seen(i));
      const double p = projected_reliability(faulty.opinion);
      EXPECT_GT(p, last);
      EXPECT_LT(p, projected_reliability(clean.opinion));
      last = p;
    }
  }
}

TEST(Estimator, EveryOpinionStaysValidOverRandomStreams) {
  Gen gen(99);
  const FaultKind kinds[] = {FaultKind::none, FaultKind::missed_detection, FaultKind::map_shift_east,
                             FaultKind::underestimated_sigma, FaultKind::erratic_motion};
  const char* entrances[] = {"north", "south", "east", "west"};
  for (int trial = 0; trial < 12; ++trial) {
    ScenarioConfig cfg = evaluation_scenario(entrances[gen.index(4)], 100 + trial);
    const FaultKind kind = kinds[gen.index(5)];
    if (kind != FaultKind::none) {
      cfg.fault = FaultSpec{kind, gen.uniform(0.0, 10.0), gen.uniform(0.5, 4.0)};
      cfg.fault.target_id = kind == FaultKind::erratic_motion ? kOncomingVehicleId : kBicycleId;
    }
    ReliabilityEstimator est(cfg.map, preset_references(), HistogramLayout{});
    for (const Tick& tick : simulate(cfg)) {
      const TickMetrics m = est.step(tick);
      for (const Opinion* op : {&m.prediction, &m.map, &m.perception, &m.localization, &m.overall.opinion}) {
        expect_valid(*op);
        EXPECT_GT(op->uncertainty(), 0.0);
      }
      EXPECT_GE(m.overall.mass_high, 0.0);
      EXPECT_LE(m.overall.mass_high, 1.0);
    }
  }
}
