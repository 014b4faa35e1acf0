#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psirec/confidence.hpp"

namespace psirec {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AlsConfig {
  std::size_t factors = 100;
  double lambda = 0.25;
  std::size_t sweeps = 15;
  std::uint64_t seed = 0;
  double init_scale = 0.01;

  void validate() const;
};

/// Latent factors: row u of `user_factors` is x_u, row i of `item_factors` is y_i.
struct FactorModel {
  Matrix user_factors;
  Matrix item_factors;
  std::vector<double> loss_trace;  // objective after each full sweep
  AlsConfig config;

  std::size_t num_users() const noexcept { return static_cast<std::size_t>(user_factors.rows()); }
  std::size_t num_items() const noexcept { return static_cast<std::size_t>(item_factors.rows()); }
  std::size_t factors() const noexcept { return static_cast<std::size_t>(user_factors.cols()); }

  double predict(std::uint32_t user, std::uint32_t item) const;
};

/// Entries uniform in [-init_scale, init_scale]; init_scale = 0 gives zeros.
FactorModel init_factors(std::size_t num_users, std::size_t num_items, const AlsConfig& cfg);

/// Alternating least squares on
///   sum_{u,i} (s_ui - x_u.y_i)^2 + lambda (sum_u |x_u|^2 + sum_i |y_i|^2),
/// where the sum covers every cell (absent entries of S are zero targets).
/// Each sweep solves all users against the current items, then all items
/// against the new users.
FactorModel als_fit(const ConfidenceMatrix& s, const AlsConfig& cfg);

/// One half-sweep: for every row r of `targets`, solves
/// (F^T F + lambda I) out_r = F^T t_r where F is `fixed`. Rows are solved in
/// parallel against one shared Cholesky factor.
void solve_half_sweep(const CsrMatrix& targets, const Matrix& fixed, double lambda, Matrix& out);
void solve_half_sweep_serial(const CsrMatrix& targets, const Matrix& fixed, double lambda, Matrix& out);

/// Exact objective; the dense part uses sum_{u,i} (x_u.y_i)^2 = <X^T X, Y^T Y>_F.
double loss(const ConfidenceMatrix& s, const FactorModel& model, double lambda);

/// Header "model<TAB>M<TAB>N<TAB>K<TAB>lambda<TAB>sweeps<TAB>seed<TAB>init_scale",
/// a "loss" line with the trace, then M rows of X and N rows of Y, all with
/// 17 significant digits.
void write_model(std::ostream& out, const FactorModel& model);
FactorModel read_model(std::istream& in);

}  // namespace psirec
