#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "psirec/error.hpp"
#include "psirec/factorization.hpp"

using namespace psirec;

namespace {

ConfidenceMatrix random_matrix(std::mt19937_64& rng, std::size_t users, std::size_t items, double density) {
  std::uniform_real_distribution<double> value(0.1, 3.0);
  std::bernoulli_distribution keep(density);
  std::vector<ConfidenceEntry> entries;
  for (std::uint32_t u = 0; u < users; ++u)
    for (std::uint32_t i = 0; i < items; ++i)
      if (keep(rng)) entries.push_back({u, i, value(rng)});
  return ConfidenceMatrix(users, items, Measure::kShiftedPmi, 1.0, std::move(entries));
}

oracle::Dense dense_of(const Matrix& m) {
  oracle::Dense out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  return out;
}

oracle::Dense dense_of(const ConfidenceMatrix& s) {
  oracle::Dense out(s.num_users(), std::vector<double>(s.num_items(), 0.0));
  for (const auto& e : s.entries()) out[e.user][e.item] = e.value;
  return out;
}

/// Largest |(F^T F + lambda I) x_r - F^T t_r| over all rows, computed with plain loops.
double max_residual(const CsrMatrix& targets, const Matrix& fixed, double lambda, const Matrix& solved) {
  const auto k = static_cast<std::size_t>(fixed.cols());
  double worst = 0.0;
  for (std::size_t r = 0; r < targets.rows; ++r) {
    std::vector<double> rhs(k, 0.0);
    for (std::size_t e = targets.offsets[r]; e < targets.offsets[r + 1]; ++e)
      for (std::size_t a = 0; a < k; ++a) rhs[a] += fixed(targets.indices[e], a) * targets.values[e];
    for (std::size_t a = 0; a < k; ++a) {
      double lhs = lambda * solved(r, a);
      for (std::size_t b = 0; b < k; ++b) {
        double gram = 0.0;
        for (Eigen::Index n = 0; n < fixed.rows(); ++n) gram += fixed(n, a) * fixed(n, b);
        lhs += gram * solved(r, b);
      }
      worst = std::max(worst, std::abs(lhs - rhs[a]));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("init_factors shapes, scale and determinism") {
  AlsConfig cfg;
  cfg.factors = 4;
  cfg.seed = 3;
  const auto a = init_factors(2, 3, cfg);
  CHECK(a.user_factors.rows() == 2);
  CHECK(a.user_factors.cols() == 4);
  CHECK(a.item_factors.rows() == 3);
  CHECK(a.item_factors.cols() == 4);
  CHECK(a.user_factors.cwiseAbs().maxCoeff() <= cfg.init_scale);
  CHECK(a.loss_trace.empty());
  const auto b = init_factors(2, 3, cfg);
  CHECK(a.user_factors == b.user_factors);
  CHECK(a.item_factors == b.item_factors);

  cfg.init_scale = 0.0;
  const auto zero = init_factors(2, 3, cfg);
  CHECK(zero.user_factors.isZero(0.0));
  CHECK(zero.item_factors.isZero(0.0));
  CHECK(zero.predict(1, 2) == 0.0);
}

TEST_CASE("ALS on an all-zero target predicts zero") {
  AlsConfig cfg;
  cfg.factors = 3;
  cfg.sweeps = 2;
  const auto model = als_fit(ConfidenceMatrix(4, 5, Measure::kCoOccurrence, 1.0, {}), cfg);
  CHECK(model.user_factors.isZero(0.0));
  CHECK(model.item_factors.allFinite());
  for (std::uint32_t u = 0; u < 4; ++u)
    for (std::uint32_t i = 0; i < 5; ++i) CHECK(model.predict(u, i) == 0.0);
}

TEST_CASE("1x1 ALS converges to the stationary point") {
  const ConfidenceMatrix s(1, 1, Measure::kCoOccurrence, 1.0, {{0, 0, 1.0}});
  AlsConfig cfg;
  cfg.factors = 1;
  cfg.sweeps = 400;
  cfg.init_scale = 0.5;
  const auto model = als_fit(s, cfg);
  CHECK(std::abs(model.predict(0, 0) - 0.75) <= 1e-6);
  CHECK(std::abs(oracle::gradient_descent_1x1(1.0, 0.25, 0.3, 0.4, 0.05, 20000) - 0.75) <= 1e-6);
}

TEST_CASE("loss matches the dense oracle") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_matrix(rng, 5, 4, 0.5);
    AlsConfig cfg;
    cfg.factors = 2;
    cfg.init_scale = 1.0;
    cfg.seed = trial;
    const auto model = init_factors(5, 4, cfg);
    const double expected =
        oracle::dense_loss(dense_of(s), dense_of(model.user_factors), dense_of(model.item_factors), 0.25);
    CHECK(std::abs(loss(s, model, 0.25) - expected) <= 1e-10);
  }
}

TEST_CASE("loss of a zero model is the squared target norm") {
  const ConfidenceMatrix s(2, 2, Measure::kCoOccurrence, 1.0, {{0, 0, 1.0}, {1, 1, 2.0}});
  AlsConfig cfg;
  cfg.factors = 3;
  cfg.init_scale = 0.0;
  CHECK(loss(s, init_factors(2, 2, cfg), 0.25) == 5.0);
}

TEST_CASE("loss on a zero target is at least the penalty") {
  AlsConfig cfg;
  cfg.factors = 2;
  cfg.init_scale = 1.0;
  const auto model = init_factors(3, 3, cfg);
  const double q = model.user_factors.squaredNorm() + model.item_factors.squaredNorm();
  CHECK(loss(ConfidenceMatrix(3, 3, Measure::kCoOccurrence, 1.0, {}), model, 0.25) >= 0.25 * q);
}

TEST_CASE("half sweeps satisfy the normal equations") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_matrix(rng, 12, 9, 0.3);
    AlsConfig cfg;
    cfg.factors = 4;
    cfg.init_scale = 1.0;
    cfg.seed = trial;
    auto model = init_factors(12, 9, cfg);
    solve_half_sweep(s.by_user(), model.item_factors, 0.25, model.user_factors);
    CHECK(max_residual(s.by_user(), model.item_factors, 0.25, model.user_factors) <= 1e-8);
    solve_half_sweep(s.by_item(), model.user_factors, 0.25, model.item_factors);
    CHECK(max_residual(s.by_item(), model.user_factors, 0.25, model.item_factors) <= 1e-8);
  }
}

TEST_CASE("loss trace never increases") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 8; ++trial) {
    const auto s = random_matrix(rng, 15, 12, 0.2);
    AlsConfig cfg;
    cfg.factors = 5;
    cfg.sweeps = 25;
    cfg.seed = trial;
    const auto model = als_fit(s, cfg);
    REQUIRE(model.loss_trace.size() == 25);
    for (std::size_t t = 1; t < model.loss_trace.size(); ++t)
      CHECK(model.loss_trace[t] <= model.loss_trace[t - 1] * (1 + 1e-9));
    CHECK(model.loss_trace.back() == doctest::Approx(loss(s, model, cfg.lambda)).epsilon(1e-12));
  }
}

TEST_CASE("converged user factors are stationary") {
  std::mt19937_64 rng(47);
  const auto s = random_matrix(rng, 8, 7, 0.4);
  AlsConfig cfg;
  cfg.factors = 3;
  cfg.sweeps = 300;
  auto model = als_fit(s, cfg);
  // A final user half-sweep makes every x_u an exact block minimizer.
  solve_half_sweep(s.by_user(), model.item_factors, cfg.lambda, model.user_factors);
  const double h = 1e-5;
  for (Eigen::Index u = 0; u < model.user_factors.rows(); ++u) {
    for (Eigen::Index a = 0; a < model.user_factors.cols(); ++a) {
      // Analytic gradient: -2 sum_i (s_ui - x_u.y_i) y_ia + 2 lambda x_ua.
      double grad = 2.0 * cfg.lambda * model.user_factors(u, a);
      for (Eigen::Index i = 0; i < model.item_factors.rows(); ++i) {
        const double r = s.value(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i)) -
                         model.predict(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
        grad -= 2.0 * r * model.item_factors(i, a);
      }
      auto plus = model, minus = model;
      plus.user_factors(u, a) += h;
      minus.user_factors(u, a) -= h;
      const double fd = (loss(s, plus, cfg.lambda) - loss(s, minus, cfg.lambda)) / (2 * h);
      CHECK(std::abs(grad) <= 1e-6);
      CHECK(std::abs(fd - grad) <= 1e-4 * std::max(1.0, std::abs(grad)));
    }
  }
}

TEST_CASE("finite differences agree with the analytic gradient away from optimum") {
  std::mt19937_64 rng(48);
  const auto s = random_matrix(rng, 5, 6, 0.5);
  AlsConfig cfg;
  cfg.factors = 2;
  cfg.init_scale = 1.0;
  const auto model = init_factors(5, 6, cfg);
  const double h = 1e-6;
  for (Eigen::Index u = 0; u < 5; ++u) {
    double grad = 2.0 * cfg.lambda * model.user_factors(u, 0);
    for (Eigen::Index i = 0; i < 6; ++i) {
      const double r = s.value(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i)) -
                       model.predict(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
      grad -= 2.0 * r * model.item_factors(i, 0);
    }
    auto plus = model, minus = model;
    plus.user_factors(u, 0) += h;
    minus.user_factors(u, 0) -= h;
    const double fd = (loss(s, plus, cfg.lambda) - loss(s, minus, cfg.lambda)) / (2 * h);
    CHECK(std::abs(fd - grad) <= 1e-4 * std::max(1.0, std::abs(grad)));
  }
}

TEST_CASE("parallel half sweeps equal the serial reference bitwise") {
  std::mt19937_64 rng(49);
  const auto s = random_matrix(rng, 80, 60, 0.1);
  AlsConfig cfg;
  cfg.factors = 8;
  cfg.init_scale = 1.0;
  const auto model = init_factors(80, 60, cfg);
  Matrix serial(80, 8);
  solve_half_sweep_serial(s.by_user(), model.item_factors, 0.25, serial);
  for (int threads : {1, 2, 4}) {
    testing::ThreadCount tc(threads);
    Matrix parallel(80, 8);
    solve_half_sweep(s.by_user(), model.item_factors, 0.25, parallel);
    CHECK(parallel == serial);
  }
}

TEST_CASE("als_fit is schedule independent") {
  std::mt19937_64 rng(50);
  const auto s = random_matrix(rng, 40, 30, 0.1);
  AlsConfig cfg;
  cfg.factors = 6;
  cfg.sweeps = 4;
  FactorModel reference;
  {
    testing::ThreadCount tc(1);
    reference = als_fit(s, cfg);
  }
  testing::ThreadCount tc(4);
  const auto other = als_fit(s, cfg);
  CHECK(other.user_factors == reference.user_factors);
  CHECK(other.item_factors == reference.item_factors);
  CHECK(other.loss_trace == reference.loss_trace);
}

TEST_CASE("predict is an inner product and range checked") {
  AlsConfig cfg;
  cfg.factors = 3;
  cfg.init_scale = 1.0;
  auto model = init_factors(2, 2, cfg);
  const double p = model.predict(1, 0);
  CHECK(p == doctest::Approx(model.user_factors.row(1).dot(model.item_factors.row(0))));
  model.user_factors.row(1) *= 3.0;
  CHECK(model.predict(1, 0) == doctest::Approx(3.0 * p));
  CHECK_THROWS_AS(model.predict(2, 0), Error);
  CHECK_THROWS_AS(model.predict(0, 2), Error);
}

TEST_CASE("ALS config validation") {
  AlsConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.sweeps = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.factors = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.init_scale = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("model text round trip is exact") {
  std::mt19937_64 rng(51);
  const auto s = random_matrix(rng, 6, 5, 0.4);
  AlsConfig cfg;
  cfg.factors = 3;
  cfg.sweeps = 3;
  cfg.seed = 17;
  const auto model = als_fit(s, cfg);
  std::stringstream ss;
  write_model(ss, model);
  const auto back = read_model(ss);
  CHECK(back.user_factors == model.user_factors);
  CHECK(back.item_factors == model.item_factors);
  CHECK(back.loss_trace == model.loss_trace);
  CHECK(back.config.seed == 17);
  CHECK(back.config.lambda == cfg.lambda);
}
