#include "psirec/factorization.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "psirec/error.hpp"
#include "psirec/rng.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

void AlsConfig::validate() const {
  if (factors < 1) throw Error("als factors must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw Error("als lambda must be > 0");
  if (sweeps < 1) throw Error("als sweeps must be >= 1");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw Error("als init_scale must be > 0");
}

double FactorModel::predict(std::uint32_t user, std::uint32_t item) const {
  if (user >= num_users() || item >= num_items()) {
    throw Error("prediction index (" + std::to_string(user) + ", " + std::to_string(item) + ") out of range");
  }
  return user_factors.row(user).dot(item_factors.row(item));
}

FactorModel init_factors(std::size_t num_users, std::size_t num_items, const AlsConfig& cfg) {
  const auto k = static_cast<Eigen::Index>(cfg.factors);
  FactorModel m;
  m.config = cfg;
  m.user_factors.resize(static_cast<Eigen::Index>(num_users), k);
  m.item_factors.resize(static_cast<Eigen::Index>(num_items), k);
  auto rng = make_stream(cfg.seed, StreamTag::kFactorInit);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Matrix* f : {&m.user_factors, &m.item_factors}) {
    for (Eigen::Index r = 0; r < f->rows(); ++r) {
      for (Eigen::Index c = 0; c < k; ++c) (*f)(r, c) = cfg.init_scale * unit(rng);
    }
  }
  return m;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_normal_matrix(const Matrix& fixed, double lambda) {
  Eigen::MatrixXd gram = fixed.transpose() * fixed;
  gram.diagonal().array() += lambda;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw Error("normal equations are not positive definite");
  return llt;
}

void solve_row(const CsrMatrix& targets, std::size_t r, const Matrix& fixed,
               const Eigen::LLT<Eigen::MatrixXd>& llt, Eigen::VectorXd& rhs, Matrix& out) {
  rhs.setZero();
  for (auto e = targets.offsets[r]; e < targets.offsets[r + 1]; ++e) {
    rhs.noalias() += targets.values[e] * fixed.row(targets.indices[e]).transpose();
  }
  out.row(static_cast<Eigen::Index>(r)) = llt.solve(rhs).transpose();
}

void check_shapes(const CsrMatrix& targets, const Matrix& fixed) {
  if (static_cast<std::size_t>(fixed.rows()) != targets.cols) {
    throw Error("factor matrix has " + std::to_string(fixed.rows()) + " rows, targets have " +
                std::to_string(targets.cols) + " columns");
  }
}

}  // namespace

void solve_half_sweep(const CsrMatrix& targets, const Matrix& fixed, double lambda, Matrix& out) {
  check_shapes(targets, fixed);
  const auto llt = factor_normal_matrix(fixed, lambda);
  out.resize(static_cast<Eigen::Index>(targets.rows), fixed.cols());
  const auto rows = static_cast<std::ptrdiff_t>(targets.rows);
#pragma omp parallel
  {
    Eigen::VectorXd rhs(fixed.cols());
#pragma omp for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) solve_row(targets, static_cast<std::size_t>(r), fixed, llt, rhs, out);
  }
}

void solve_half_sweep_serial(const CsrMatrix& targets, const Matrix& fixed, double lambda, Matrix& out) {
  check_shapes(targets, fixed);
  const auto llt = factor_normal_matrix(fixed, lambda);
  out.resize(static_cast<Eigen::Index>(targets.rows), fixed.cols());
  Eigen::VectorXd rhs(fixed.cols());
  for (std::size_t r = 0; r < targets.rows; ++r) solve_row(targets, r, fixed, llt, rhs, out);
}

FactorModel als_fit(const ConfidenceMatrix& s, const AlsConfig& cfg) {
  cfg.validate();
  if (s.num_users() == 0 || s.num_items() == 0) throw Error("cannot factorize an empty matrix");
  auto model = init_factors(s.num_users(), s.num_items(), cfg);
  const auto rows = s.by_user();
  const auto cols = s.by_item();
  for (std::size_t sweep = 1; sweep <= cfg.sweeps; ++sweep) {
    solve_half_sweep(rows, model.item_factors, cfg.lambda, model.user_factors);
    solve_half_sweep(cols, model.user_factors, cfg.lambda, model.item_factors);
    const double objective = loss(s, model, cfg.lambda);
    if (!model.user_factors.allFinite() || !model.item_factors.allFinite() || !std::isfinite(objective)) {
      throw Error("non-finite values in ALS sweep " + std::to_string(sweep));
    }
    model.loss_trace.push_back(objective);
  }
  return model;
}

double loss(const ConfidenceMatrix& s, const FactorModel& model, double lambda) {
  if (model.num_users() != s.num_users() || model.num_items() != s.num_items()) {
    throw Error("model and confidence matrix dimensions differ");
  }
  const auto& x = model.user_factors;
  const auto& y = model.item_factors;
  double squares = 0.0, cross = 0.0;
  for (const auto& e : s.entries()) {
    squares += e.value * e.value;
    cross += e.value * x.row(e.user).dot(y.row(e.item));
  }
  const Eigen::MatrixXd gx = x.transpose() * x;
  const Eigen::MatrixXd gy = y.transpose() * y;
  const double dense = (gx.array() * gy.array()).sum();
  return squares - 2.0 * cross + dense + lambda * (x.squaredNorm() + y.squaredNorm());
}

namespace {

void write_rows(std::ostream& out, const Matrix& m) {
  std::string line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    line.clear();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) line += '\t';
      line += format_double(m(r, c));
    }
    line += '\n';
    out << line;
  }
}

void read_rows(std::istream& in, Matrix& m, std::size_t& lineno) {
  std::string line;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (!std::getline(in, line)) throw Error("model file truncated");
    ++lineno;
    const auto f = split_fields(line, '\t');
    if (static_cast<Eigen::Index>(f.size()) != m.cols()) throw ParseError(lineno, "wrong number of factors");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = parse_double(f[static_cast<std::size_t>(c)], lineno);
  }
}

}  // namespace

void write_model(std::ostream& out, const FactorModel& model) {
  const auto& c = model.config;
  out << "model\t" << model.num_users() << '\t' << model.num_items() << '\t' << model.factors() << '\t'
      << format_double(c.lambda) << '\t' << c.sweeps << '\t' << c.seed << '\t' << format_double(c.init_scale)
      << '\n';
  out << "loss";
  for (double v : model.loss_trace) out << '\t' << format_double(v);
  out << '\n';
  write_rows(out, model.user_factors);
  write_rows(out, model.item_factors);
}

FactorModel read_model(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw Error("empty model file");
  const auto h = split_fields(line, '\t');
  if (h.size() != 8 || h[0] != "model") throw ParseError(1, "expected a model header");
  FactorModel m;
  const auto users = parse_uint(h[1], 1), items = parse_uint(h[2], 1);
  m.config.factors = parse_uint(h[3], 1);
  m.config.lambda = parse_double(h[4], 1);
  m.config.sweeps = parse_uint(h[5], 1);
  m.config.seed = parse_uint(h[6], 1);
  m.config.init_scale = parse_double(h[7], 1);
  if (!std::getline(in, line)) throw Error("model file truncated");
  ++lineno;
  const auto trace = split_fields(line, '\t');
  if (trace.empty() || trace[0] != "loss") throw ParseError(lineno, "expected the loss trace");
  for (std::size_t t = 1; t < trace.size(); ++t) m.loss_trace.push_back(parse_double(trace[t], lineno));
  const auto k = static_cast<Eigen::Index>(m.config.factors);
  m.user_factors.resize(static_cast<Eigen::Index>(users), k);
  m.item_factors.resize(static_cast<Eigen::Index>(items), k);
  read_rows(in, m.user_factors, lineno);
  read_rows(in, m.item_factors, lineno);
  return m;
}

}  // namespace psirec
