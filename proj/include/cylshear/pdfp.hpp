#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cylshear/core.hpp"
#include "cylshear/projector.hpp"
#include "cylshear/transform.hpp"

namespace cylsh {

/// sign(x) max(|x| - theta, 0) on every band, coarse included.
CoeffSet soft_threshold(const CoeffSet& c, double theta);
void soft_threshold_inplace(std::span<double> x, double theta);
Volume4 project_nonneg(const Volume4& v);

/// A real linear map R^in -> R^out with its transpose.
struct LinearOperator {
  std::size_t in = 0, out = 0;
  std::function<void(std::span<const double>, std::span<double>)> apply;
  std::function<void(std::span<const double>, std::span<double>)> adjoint;
};

/// Largest eigenvalue of a symmetric positive semidefinite map on R^n by
/// power iteration from a seeded random start. Returns 0 for the zero map.
double estimate_norm(const std::function<void(std::span<const double>, std::span<double>)>& op, std::size_t n,
                     int iters = 100, std::uint64_t seed = 0);

/// Largest eigenvalue of R^T R.
double estimate_gram_norm(const LinearOperator& r, int iters = 100, std::uint64_t seed = 0);

/// Statistics of one dual update.
struct DualStats {
  std::size_t detail_nonzero = 0;  // after thresholding
  std::size_t detail_count = 0;
  double sparsity() const { return detail_count ? double(detail_nonzero) / double(detail_count) : 0.0; }
};

/// Sparsifying system S in the PDFP iteration.
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual std::string name() const = 0;
  virtual std::size_t signal_size() const = 0;
  virtual std::size_t coefficient_count() const = 0;
  /// Number of leading coarse (lowpass) coefficients.
  virtual std::size_t coarse_count() const = 0;
  virtual double upper_frame_bound() const = 0;
  virtual void forward(std::span<const double> f, std::span<double> c) const = 0;
  virtual void adjoint(std::span<const double> c, std::span<double> f) const = 0;

  /// r <- (I - soft_theta)(S y + r). The coarse block uses theta only when
  /// `threshold_coarse`, otherwise it is left unshrunk (r = 0 there).
  virtual DualStats dual_update(std::span<const double> y, std::span<double> r, double theta,
                                bool threshold_coarse) const;
  /// ||S f||_1, optionally without the coarse block.
  virtual double l1_norm(std::span<const double> f, bool include_coarse) const;
};

class IdentityRegularizer final : public Regularizer {
 public:
  explicit IdentityRegularizer(std::size_t n) : n_(n) {}
  std::string name() const override { return "identity"; }
  std::size_t signal_size() const override { return n_; }
  std::size_t coefficient_count() const override { return n_; }
  std::size_t coarse_count() const override { return 0; }
  double upper_frame_bound() const override { return 1.0; }
  void forward(std::span<const double> f, std::span<double> c) const override;
  void adjoint(std::span<const double> c, std::span<double> f) const override;

 private:
  std::size_t n_;
};

class ShearletRegularizer final : public Regularizer {
 public:
  explicit ShearletRegularizer(std::shared_ptr<const ShearletSystem> sys);
  std::string name() const override { return "cylsh"; }
  std::size_t signal_size() const override { return sys_->dims.size(); }
  std::size_t coefficient_count() const override { return sys_->coefficient_count(); }
  std::size_t coarse_count() const override { return sys_->dims.size(); }
  double upper_frame_bound() const override { return upper_; }
  void forward(std::span<const double> f, std::span<double> c) const override;
  void adjoint(std::span<const double> c, std::span<double> f) const override;
  DualStats dual_update(std::span<const double> y, std::span<double> r, double theta,
                        bool threshold_coarse) const override;
  double l1_norm(std::span<const double> f, bool include_coarse) const override;

 private:
  std::shared_ptr<const ShearletSystem> sys_;
  double upper_;
};

class WaveletRegularizer final : public Regularizer {
 public:
  WaveletRegularizer(const GridDims& dims, int levels);
  std::string name() const override { return "dwt4"; }
  std::size_t signal_size() const override { return dims_.size(); }
  std::size_t coefficient_count() const override { return dims_.size(); }
  std::size_t coarse_count() const override;
  double upper_frame_bound() const override { return 1.0; }
  void forward(std::span<const double> f, std::span<double> c) const override;
  void adjoint(std::span<const double> c, std::span<double> f) const override;

 private:
  GridDims dims_;
  int levels_;
};

struct PdfpParams {
  double rho = 0.0;     // 0: 1.9 / estimated ||R^T R||
  double lambda = 0.0;  // 0: 1 / upper frame bound
  std::optional<double> beta;  // unset: data-driven start
  int max_iters = 50;
  double rel_change_tol = 1e-4;
  std::optional<double> target_sparsity;  // enables the beta controller
  double gain = 0.1;
  bool threshold_coarse = true;
  int norm_iters = 100;
  std::optional<double> gram_norm;  // unset: power-method estimate
  std::uint64_t seed = 0;
  /// Percentile of |S(R^T m)| detail coefficients matched by the initial
  /// threshold beta rho / lambda.
  double beta_percentile = 0.9;
};

struct HistoryRow {
  int iteration = 0;
  double objective = 0.0;
  double data_fit = 0.0;  // 1/2 ||R f - m||^2
  double l1 = 0.0;        // beta ||S f||_1
  double sparsity = 0.0;  // nonzero fraction of thresholded detail coefficients
  double beta = 0.0;
  double rel_change = 0.0;
};

struct PdfpResult {
  std::vector<double> f;
  std::vector<HistoryRow> history;
  double rho = 0.0, lambda = 0.0, beta = 0.0, gram_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// beta * (1 + gain (s_obs - s*) / s*) clipped to [beta/2, 2 beta].
double tune_beta(double beta, double observed, double target, double gain);

/// Minimizes 1/2 ||R f - m||^2 + beta ||S f||_1 over f >= 0.
class PdfpSolver {
 public:
  PdfpSolver(LinearOperator r, std::shared_ptr<const Regularizer> s, std::vector<double> m, PdfpParams params);

  const PdfpParams& params() const { return params_; }
  double rho() const { return rho_; }
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  double gram_norm() const { return gram_norm_; }

  /// Called after each iteration with (iteration, f).
  using Observer = std::function<void(int, std::span<const double>)>;

  PdfpResult run(std::span<const double> f0 = {}, const Observer& observer = {});

 private:
  double initial_beta();
  HistoryRow record(int iter, std::span<const double> f, std::span<const double> rf, double sparsity,
                    double change) const;

  LinearOperator r_;
  std::shared_ptr<const Regularizer> s_;
  std::vector<double> m_;
  PdfpParams params_;
  double gram_norm_ = 0.0, rho_ = 0.0, lambda_ = 0.0, beta_ = 0.0;
};

/// Block-diagonal projector over the frames of a Volume4.
LinearOperator frame_operator(std::shared_ptr<const Projector> p, std::size_t frames);

/// Reconstruction from a sinogram set with the given regularizer.
PdfpResult reconstruct(const SinogramSet& sino, std::shared_ptr<const Regularizer> s, const PdfpParams& params,
                       const PdfpSolver::Observer& observer = {});

/// History as CSV: iteration,objective,data_fit,l1,sparsity,beta,rel_change.
std::string history_csv(const std::vector<HistoryRow>& rows);

}  // namespace cylsh
