#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "hppa/errors.hpp"
#include "hppa/ppa.hpp"
#include "hppa/scenario.hpp"
#include "test_support.hpp"

using namespace hppa;

namespace {

double coord(const Point& p, int i = 0) { return std::get<EuclideanPoint>(p).coords(i); }

struct Quad1d {
  Space X = Space::euclidean(1);
  ConvexObjective f = objectives::half_squared_distance(X, euclidean_point({2.0}));
  std::vector<TanMapping> family = {mappings::identity(X)};
  Schedule schedule;
};

}  // namespace

TEST(Step, QuadraticRecurrence) {
  Quad1d q;
  IterState s;
  s.x = euclidean_point({0.0});
  s = step(q.X, q.f, q.family, q.schedule, s);
  EXPECT_EQ(s.n, 2);
  EXPECT_DOUBLE_EQ(coord(s.x), 1.0);
  EXPECT_DOUBLE_EQ(coord(*s.z), 1.0);
  EXPECT_TRUE(s.y.empty());
  s = step(q.X, q.f, q.family, q.schedule, s);
  EXPECT_DOUBLE_EQ(coord(s.x), 1.5);
  s = step(q.X, q.f, q.family, q.schedule, s);
  EXPECT_DOUBLE_EQ(coord(s.x), 1.75);
}

TEST(Step, IdentityFamilyCollapsesToResolvent) {
  const Space X = Space::euclidean(2);
  const auto f = objectives::distance_to(X, euclidean_point({1.0, 1.0}));
  const std::vector<TanMapping> family = {mappings::identity(X), mappings::identity(X)};
  IterState s;
  s.x = euclidean_point({4.0, -3.0});
  for (int i = 0; i < 5; ++i) {
    const IterState next = step(X, f, family, Schedule{}, s);
    EXPECT_EQ(next.x, *next.z);
    ASSERT_EQ(next.y.size(), 1u);
    s = next;
  }
}

TEST(Step, ChainVisitsMappingsFromLastToFirst) {
  // T_1 = projection onto {a}, T_2 = projection onto {b}. Starting from z,
  // y_1 = mid(z, b), x_next = mid(y_1, a).
  const Space X = Space::euclidean(1);
  const Point a = euclidean_point({0.0});
  const Point b = euclidean_point({8.0});
  const std::vector<TanMapping> family = {mappings::point_projection(X, a), mappings::point_projection(X, b)};
  IterState s;
  s.x = euclidean_point({4.0});
  const IterState next = step(X, objectives::zero(X), family, Schedule{}, s);
  EXPECT_DOUBLE_EQ(coord(next.y[0]), 6.0);
  EXPECT_DOUBLE_EQ(coord(next.x), 3.0);
}

TEST(Step, UsesOuterIndexForPowers) {
  const Space X = Space::spider_tree(3);
  const std::vector<TanMapping> family = {mappings::ray_permutation(X, 1)};
  IterState s;
  s.n = 2;
  s.x = tree_point(0, 2.0);
  Schedule sched;
  sched.alpha = 0.25;
  // T² sends ray 0 to ray 2; a quarter of the way along the path of length 4.
  const IterState next = step(X, objectives::zero(X), family, sched, s);
  EXPECT_EQ(next.x, tree_point(0, 1.0));
}

TEST(Step, EmptyFamilyThrows) {
  Quad1d q;
  IterState s;
  s.x = euclidean_point({0.0});
  EXPECT_THROW(step(q.X, q.f, {}, q.schedule, s), DomainError);
}

TEST(Step, CustomAlphaOutsideBoundsIsAConfigError) {
  Quad1d q;
  q.schedule.alpha_rule = Schedule::AlphaRule::Custom;
  q.schedule.custom_alpha = [](int n) { return n < 3 ? 0.5 : 1.0; };
  IterState s;
  s.x = euclidean_point({0.0});
  s = step(q.X, q.f, q.family, q.schedule, s);
  s = step(q.X, q.f, q.family, q.schedule, s);
  EXPECT_THROW(step(q.X, q.f, q.family, q.schedule, s), ConfigError);
}

TEST(Run, QuadraticConvergesWithinSixtyIterations) {
  Quad1d q;
  const Trace t = run(q.X, q.f, q.family, q.schedule, euclidean_point({0.0}), {});
  EXPECT_EQ(t.status, RunStatus::Converged);
  EXPECT_LE(t.records.size(), 60u);
  EXPECT_LE(std::abs(coord(t.records.back().x) - 2.0), 1e-6);
  for (std::size_t i = 0; i < t.records.size(); ++i) EXPECT_EQ(t.records[i].n, static_cast<int>(i) + 1);
}

TEST(Run, StartAtSolutionStopsImmediately) {
  Quad1d q;
  const Trace t = run(q.X, q.f, q.family, q.schedule, euclidean_point({2.0}), {});
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].residual, 0.0);
  EXPECT_EQ(t.status, RunStatus::Converged);
}

TEST(Run, MaxItersGivesUnconvergedStatus) {
  Quad1d q;
  StoppingRule stop;
  stop.max_iters = 5;
  const Trace t = run(q.X, q.f, q.family, q.schedule, euclidean_point({0.0}), stop);
  EXPECT_EQ(t.status, RunStatus::Unconverged);
  EXPECT_EQ(t.records.size(), 5u);
}

TEST(Run, RotationProjectionReachesCenter) {
  const Scenario s = make_scenario("rot-proj-2d");
  const Trace t = run(s.space, s.objective, s.family, Schedule{}, s.canonical_start, {});
  EXPECT_EQ(t.status, RunStatus::Converged);
  EXPECT_LE(t.records.size(), 500u);
  EXPECT_LE(distance(s.space, t.records.back().x, s.solution_set[0]), 1e-6);
}

TEST(Run, FamilyOrderChangesPathNotLimit) {
  const Scenario s = make_scenario("rot-proj-2d");
  std::vector<TanMapping> reversed(s.family.rbegin(), s.family.rend());
  const Trace forward = run(s.space, s.objective, s.family, Schedule{}, s.canonical_start, {});
  const Trace backward = run(s.space, s.objective, reversed, Schedule{}, s.canonical_start, {});
  EXPECT_NE(forward.records[1].x, backward.records[1].x);
  for (const Trace* t : {&forward, &backward}) {
    EXPECT_EQ(t->status, RunStatus::Converged);
    EXPECT_LE(residual(s.space, s.objective, s.family, t->records.back().x), 1e-8);
  }
}

TEST(Run, SingleMappingMatchesHandRolledStep) {
  const Space X = Space::euclidean(2);
  const Point c = euclidean_point({0.5, -1.0});
  const auto f = objectives::half_squared_distance(X, c);
  const auto T = mappings::euclidean_rotation(X, c, 0.9);
  Schedule sched;
  sched.alpha_rule = Schedule::AlphaRule::Alternating;
  sched.a = 0.3;
  sched.b = 0.8;
  StoppingRule stop;
  stop.tol = 0.0;
  stop.max_iters = 30;  // later iterates hit the fixed point exactly
  const Point x1 = euclidean_point({3.0, 2.0});
  const Trace t = run(X, f, {T}, sched, x1, stop);
  ASSERT_EQ(t.records.size(), 30u);

  Eigen::VectorXd x = std::get<EuclideanPoint>(x1).coords;
  const Eigen::VectorXd cv = std::get<EuclideanPoint>(c).coords;
  for (int n = 1; n <= 30; ++n) {
    ASSERT_EQ(euclidean_point(x), t.records[n - 1].x) << "n = " << n;
    const double k = 1.0;
    const double alpha = n % 2 == 1 ? 0.3 : 0.8;
    const Eigen::VectorXd z = (1.0 - k / (1.0 + k)) * x + (k / (1.0 + k)) * cv;
    const Eigen::VectorXd tz = std::get<EuclideanPoint>(apply_iter(X, T, n, euclidean_point(z))).coords;
    x = (1.0 - alpha) * z + alpha * tz;
  }
}

TEST(Residual, Values) {
  Quad1d q;
  EXPECT_EQ(residual(q.X, q.f, q.family, euclidean_point({2.0})), 0.0);
  EXPECT_DOUBLE_EQ(residual(q.X, q.f, q.family, euclidean_point({1.0})), 0.5);
}

TEST(Schedule, Validation) {
  Schedule s;
  EXPECT_NO_THROW(s.validate());
  s.a = 0.6;
  s.b = 0.4;
  s.alpha = 0.5;
  try {
    s.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("a ≤ b"), std::string::npos);
  }
  s = Schedule{};
  s.alpha = 1.0;
  try {
    s.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("α_n ≤ b < 1"), std::string::npos);
  }
  s = Schedule{};
  s.k0 = 0.0;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Schedule, RulesStayInBounds) {
  Schedule s;
  s.a = 0.2;
  s.b = 0.7;
  for (auto rule : {Schedule::AlphaRule::Alternating, Schedule::AlphaRule::Decay}) {
    s.alpha_rule = rule;
    for (int n = 1; n <= 1000; ++n) {
      EXPECT_GE(s.alpha_at(n), s.a);
      EXPECT_LE(s.alpha_at(n), s.b);
    }
  }
  s.k_rule = Schedule::KRule::Decaying;
  s.k0 = 0.5;
  EXPECT_DOUBLE_EQ(s.k_at(1), 1.0);
  for (int n = 1; n <= 1000; ++n) EXPECT_GE(s.k_at(n), s.k_min());
}

TEST(Fejer, NonexpansiveScenariosNeverMoveAway) {
  for (const std::string name : {"quad-1d", "rot-proj-2d", "proj-family-2d", "chain-3d", "tree-median",
                                  "hyp-frechet", "hyp-rotation"}) {
    const Scenario s = make_scenario(name);
    Rng rng(17);
    for (int trial = 0; trial < 3; ++trial) {
      const Trace t = run(s.space, s.objective, s.family, Schedule{}, s.random_start(rng), {});
      for (const auto& p : s.solution_set) {
        for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
          EXPECT_LE(distance(s.space, t.records[i + 1].x, p), distance(s.space, t.records[i].x, p) + 1e-10)
              << name << " n = " << t.records[i].n;
        }
      }
    }
  }
}
