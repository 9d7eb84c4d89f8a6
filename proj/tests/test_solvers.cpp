#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "orlicz_risk/errors.hpp"
#include "orlicz_risk/solvers.hpp"

namespace {

using namespace orlicz_risk;
using namespace orlicz_risk::solvers;

constexpr double kInf = std::numeric_limits<double>::infinity();

double weighted_sum(std::span<const double> q, std::span<const double> w) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    s += w[i] * q[i];
  }
  return s;
}

void expect_on_simplex(std::span<const double> q, std::span<const double> w) {
  EXPECT_NEAR(weighted_sum(q, w), 1.0, 1e-10);
  for (double v : q) {
    EXPECT_GE(v, 0.0);
  }
}

// Concave quadratic g(q) = <c, q> - 0.5 sum_i d_i (q_i - m_i)^2 with analytic gradient.
struct Quadratic {
  std::vector<double> c, d, m;

  double operator()(std::span<const double> q) const {
    double v = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      v += c[i] * q[i] - 0.5 * d[i] * (q[i] - m[i]) * (q[i] - m[i]);
    }
    return v;
  }
  SimplexObjective objective() const {
    Quadratic self = *this;
    return {[self](std::span<const double> q) { return self(q); },
            [self](std::span<const double> q, std::span<double> out) {
              for (std::size_t i = 0; i < q.size(); ++i) {
                out[i] = self.c[i] - self.d[i] * (q[i] - self.m[i]);
              }
            },
            false};
  }
};

Quadratic random_quadratic(gen::Gen& g, std::size_t n) {
  Quadratic f;
  for (std::size_t i = 0; i < n; ++i) {
    f.c.push_back(g.uniform(-2.0, 2.0));
    f.d.push_back(g.uniform(0.1, 5.0));
    f.m.push_back(g.uniform(0.0, 2.0));
  }
  return f;
}

std::vector<double> random_weights(gen::Gen& g, std::size_t n) {
  std::vector<double> w(n);
  for (double& v : w) {
    v = g.uniform(0.2, 1.8);
  }
  return oracle::normalized(w);
}

TEST(Bisect, ReciprocalHitsOne) {
  const auto r = bisect_monotone([](double t) { return 1.0 / t; }, 1.0, {0.1, 10.0});
  EXPECT_NEAR(r.point.front(), 1.0, 1e-9);
  EXPECT_LE(r.value, 1.0);
  EXPECT_TRUE(r.converged);
}

TEST(Bisect, DegenerateReturnsLowerEndpoint) {
  const auto r = bisect_monotone([](double) { return 0.0; }, 1.0, {0.5, 3.0});
  EXPECT_EQ(r.point.front(), 0.5);
}

TEST(Bisect, PowerModular) {
  const auto r = bisect_monotone([](double t) { return 0.5 * (9.0 + 16.0) / (t * t); }, 1.0,
                                 {0.1, 1.0});
  EXPECT_NEAR(r.point.front(), std::sqrt(12.5), 1e-9);
}

TEST(Bisect, Errors) {
  EXPECT_THROW(bisect_monotone([](double) { return 2.0; }, 1.0, {0.1, 1.0}), NoBracketError);
  EXPECT_THROW(bisect_monotone([](double t) { return 1.0 / t; }, 1.0, {2.0, 1.0}),
               NoBracketError);
}

TEST(Golden, AmemiyaPowerTwo) {
  const auto r = golden_min([](double l) { return (1.0 + l * l * 12.5) / l; }, {0.01, 1.0});
  EXPECT_NEAR(r.value, 2.0 * std::sqrt(12.5), 1e-9);
  EXPECT_NEAR(r.point.front(), 1.0 / std::sqrt(12.5), 1e-5);
  EXPECT_TRUE(r.attained);
}

TEST(Golden, BoundaryMinimum) {
  const auto r = golden_min([](double l) { return l * l; }, {0.0, 1.0});
  EXPECT_NEAR(r.value, 0.0, 1e-12);
  EXPECT_NEAR(r.point.front(), 0.0, 1e-6);
}

TEST(Golden, LimitNotAttained) {
  const auto r = golden_min([](double l) { return 1.0 / l + 3.5; }, {0.5, 1.0},
                            {.expand_right = true});
  EXPECT_FALSE(r.attained);
  EXPECT_NEAR(r.value, 3.5, 1e-10);
}

TEST(Golden, BadBracket) {
  EXPECT_THROW(golden_min([](double l) { return l; }, {1.0, 1.0}), NoBracketError);
}

TEST(LineMax, InteriorMaximum) {
  const auto r = line_max([](double t) { return -(t - 2.0) * (t - 2.0) + 1.0; }, 0.0);
  EXPECT_NEAR(r.point.front(), 2.0, 1e-5);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
  EXPECT_TRUE(r.attained);
}

TEST(LineMax, UnboundedAndLimit) {
  EXPECT_EQ(line_max([](double t) { return t; }, 0.0).value, kInf);
  const auto r = line_max([](double t) { return -std::exp(-t); }, 0.0);
  EXPECT_FALSE(r.attained);
  EXPECT_NEAR(r.value, 0.0, 1e-10);
}

TEST(CoordinateAscent, CoupledQuadratic) {
  const VectorFn f = [](std::span<const double> x) {
    const double a = x[0] - 1.0, b = x[1] + 2.0;
    return -(a * a + b * b + a * b);
  };
  const auto r = coordinate_ascent(f, {0.0, 0.0});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, 0.0, 1e-10);
  EXPECT_NEAR(r.point[0], 1.0, 1e-4);
  EXPECT_NEAR(r.point[1], -2.0, 1e-4);
}

TEST(CoordinateAscent, DetectsUnbounded) {
  const VectorFn f = [](std::span<const double> x) { return x[0] - x[1] * x[1]; };
  EXPECT_EQ(coordinate_ascent(f, {0.0, 0.0}).value, kInf);
}

TEST(SimplexMax, LinearUniqueVertex) {
  const std::vector<double> w{0.2, 0.3, 0.5};
  const std::vector<double> c{1.0, 4.0, 2.0};
  SimplexObjective g{[&](std::span<const double> q) {
                       return w[0] * c[0] * q[0] + w[1] * c[1] * q[1] + w[2] * c[2] * q[2];
                     },
                     nullptr, true};
  const auto r = simplex_max(g, w);
  EXPECT_NEAR(r.point[0], 0.0, 1e-12);
  EXPECT_NEAR(r.point[1], 1.0 / 0.3, 1e-12);
  EXPECT_NEAR(r.point[2], 0.0, 1e-12);
  EXPECT_NEAR(r.value, 4.0, 1e-12);
}

TEST(SimplexMax, LinearTiesGoToLowestIndex) {
  const std::vector<double> w{0.25, 0.25, 0.5};
  SimplexObjective g{[&](std::span<const double> q) {
                       return 0.25 * q[0] + 0.25 * 3.0 * q[1] + 0.5 * 3.0 * q[2];
                     },
                     nullptr, true};
  const auto r = simplex_max(g, w);
  EXPECT_EQ(r.point[1], 4.0);
  EXPECT_EQ(r.point[2], 0.0);
}

TEST(SimplexMax, EntropyPeaksAtUniform) {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  SimplexObjective g{[&](std::span<const double> q) {
                       double v = 0.0;
                       for (std::size_t i = 0; i < q.size(); ++i) {
                         if (q[i] > 0.0) {
                           v -= w[i] * q[i] * std::log(q[i]);
                         }
                       }
                       return v;
                     },
                     nullptr, false};
  const auto r = simplex_max(g, w);
  for (double v : r.point) {
    EXPECT_NEAR(v, 1.0, 1e-6);
  }
  EXPECT_NEAR(r.value, 0.0, 1e-12);
}

TEST(SimplexMax, EntropicDualValue) {
  const std::vector<double> w{0.5, 0.5};
  const std::vector<double> x{0.0, std::log(4.0)};
  SimplexObjective g{[&](std::span<const double> q) {
                       double v = 0.0;
                       for (std::size_t i = 0; i < q.size(); ++i) {
                         v -= w[i] * x[i] * q[i];
                         if (q[i] > 0.0) {
                           v -= w[i] * q[i] * std::log(q[i]);
                         }
                       }
                       return v;
                     },
                     nullptr, false};
  const auto r = simplex_max(g, w);
  EXPECT_NEAR(r.value, std::log(0.625), 1e-9);
  const auto q = oracle::gibbs(x, w, 1.0);
  EXPECT_NEAR(r.point[0], q[0], 1e-5);
  EXPECT_NEAR(r.point[1], q[1], 1e-5);
}

TEST(SimplexMax, StructuralErrors) {
  SimplexObjective g{[](std::span<const double>) { return 0.0; }, nullptr, false};
  EXPECT_THROW(simplex_max(g, std::vector<double>{}), StructuralError);
  EXPECT_THROW(simplex_max(g, std::vector<double>(65, 1.0 / 65)), StructuralError);
  EXPECT_THROW(simplex_max(g, std::vector<double>{1.5, -0.5}), StructuralError);
}

TEST(SimplexMax, IterationCapCarriesBestIterate) {
  gen::Gen g(301);
  const std::vector<double> w = random_weights(g, 6);
  Quadratic f{{0.3, -0.2, 0.1, 0.0, 0.5, -0.4}, {50.0, 0.02, 7.0, 0.3, 20.0, 1.0},
              {1.5, 0.2, 1.9, 0.7, 0.1, 1.2}};
  try {
    simplex_max(f.objective(), w, 1e-10, 2);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    expect_on_simplex(e.best().point, w);
    EXPECT_FALSE(e.best().converged);
    EXPECT_NEAR(e.best().value, f(e.best().point), 1e-12);
  }
}

TEST(Projection, FixesSimplexPoints) {
  gen::Gen g(302);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = g.index(1, 10);
    const auto w = random_weights(g, n);
    std::vector<double> z(n);
    for (double& v : z) {
      v = g.uniform(-3.0, 3.0);
    }
    const auto p = project_weighted_simplex(z, w);
    expect_on_simplex(p, w);
    const auto pp = project_weighted_simplex(p, w);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(pp[i], p[i], 1e-12);
    }
    // Optimality: <z - p, v - p>_w <= 0 for every vertex v = e_j / w_j.
    for (std::size_t j = 0; j < n; ++j) {
      double inner = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = i == j ? 1.0 / w[j] : 0.0;
        inner += w[i] * (z[i] - p[i]) * (v - p[i]);
      }
      EXPECT_LE(inner, 1e-9);
    }
  }
}

TEST(SimplexMaxProperty, ConstraintsHold) {
  gen::Gen g(303);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = g.index(1, 12);
    const auto w = random_weights(g, n);
    const Quadratic f = random_quadratic(g, n);
    const auto r = simplex_max(f.objective(), w);
    expect_on_simplex(r.point, w);
    EXPECT_TRUE(r.converged);
  }
}

TEST(SimplexMaxProperty, AgreesWithGridOracleOnThreePoints) {
  gen::Gen g(304);
  for (int trial = 0; trial < 15; ++trial) {
    const auto w = random_weights(g, 3);
    const Quadratic f = random_quadratic(g, 3);
    const auto r = simplex_max(f.objective(), w);
    const double grid = oracle::simplex_grid_max([&](const oracle::Vec& q) { return f(q); }, w,
                                                 1000);
    EXPECT_NEAR(r.value, grid, 1e-3);
    EXPECT_GE(r.value, grid - 1e-9);
  }
}

TEST(SimplexMaxProperty, FiniteDifferenceGradientMatches) {
  gen::Gen g(305);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = g.index(2, 6);
    const auto w = random_weights(g, n);
    const Quadratic f = random_quadratic(g, n);
    const auto exact = simplex_max(f.objective(), w);
    SimplexObjective fd{[&](std::span<const double> q) { return f(q); }, nullptr, false};
    const auto approx = simplex_max(fd, w);
    expect_on_simplex(approx.point, w);
    EXPECT_NEAR(approx.value, exact.value, 1e-7 * std::max(1.0, std::abs(exact.value)));
  }
}

}  // namespace
