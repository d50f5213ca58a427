#include "cylshear/pdfp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cylshear/dwt4.hpp"
#include "cylshear/simd/kernels.hpp"

namespace cylsh {

namespace {

double norm(std::span<const double> x) { return std::sqrt(simd::kernels().dot(x.data(), x.data(), x.size())); }

void check_size(std::size_t have, std::size_t want, const char* what) {
  if (have != want) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(have) + ", expected " +
                         std::to_string(want));
  }
}

std::size_t count_above(const double* x, std::size_t n, double theta) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += std::abs(x[i]) > theta;
  return c;
}

// In-place dual update of one block: r <- (I - soft)(r), returns survivors.
std::size_t shrink_block(double* r, std::size_t n, double theta, bool threshold) {
  if (!threshold) {
    std::fill(r, r + n, 0.0);
    return 0;
  }
  const std::size_t kept = count_above(r, n, theta);
  simd::kernels().threshold_residual(r, r, n, theta);
  return kept;
}

double abs_sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

}  // namespace

void soft_threshold_inplace(std::span<double> x, double theta) {
  if (!(theta >= 0.0)) throw ConfigError("soft threshold: theta must be >= 0");
  simd::kernels().soft_threshold(x.data(), x.data(), x.size(), theta);
}

CoeffSet soft_threshold(const CoeffSet& c, double theta) {
  CoeffSet out = c;
  soft_threshold_inplace(out.data(), theta);
  return out;
}

Volume4 project_nonneg(const Volume4& v) {
  Volume4 out = v;
  simd::kernels().project_nonneg(out.data().data(), out.size());
  return out;
}

double estimate_norm(const std::function<void(std::span<const double>, std::span<double>)>& op, std::size_t n,
                     int iters, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n), y(n);
  for (auto& v : x) v = u(rng);
  double nx = norm(x);
  if (nx == 0.0) return 0.0;
  for (auto& v : x) v /= nx;
  double estimate = 0.0;
  for (int it = 0; it < iters; ++it) {
    op(x, y);
    const double ny = norm(y);
    if (ny == 0.0) return 0.0;
    const double prev = estimate;
    estimate = ny;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (it > 0 && std::abs(estimate - prev) <= 1e-10 * estimate) break;
  }
  return estimate;
}

double estimate_gram_norm(const LinearOperator& r, int iters, std::uint64_t seed) {
  std::vector<double> tmp(r.out);
  return estimate_norm(
      [&](std::span<const double> x, std::span<double> y) {
        r.apply(x, tmp);
        r.adjoint(tmp, y);
      },
      r.in, iters, seed);
}

DualStats Regularizer::dual_update(std::span<const double> y, std::span<double> r, double theta,
                                   bool threshold_coarse) const {
  check_size(r.size(), coefficient_count(), "dual update");
  std::vector<double> t(coefficient_count());
  forward(y, t);
  simd::kernels().axpy(1.0, t.data(), r.data(), r.size());
  const std::size_t nc = coarse_count();
  shrink_block(r.data(), nc, theta, threshold_coarse);
  DualStats s;
  s.detail_count = r.size() - nc;
  s.detail_nonzero = shrink_block(r.data() + nc, r.size() - nc, theta, true);
  return s;
}

double Regularizer::l1_norm(std::span<const double> f, bool include_coarse) const {
  std::vector<double> c(coefficient_count());
  forward(f, c);
  return abs_sum(std::span<const double>(c).subspan(include_coarse ? 0 : coarse_count()));
}

void IdentityRegularizer::forward(std::span<const double> f, std::span<double> c) const {
  check_size(f.size(), n_, "identity");
  std::copy(f.begin(), f.end(), c.begin());
}

void IdentityRegularizer::adjoint(std::span<const double> c, std::span<double> f) const {
  check_size(c.size(), n_, "identity");
  std::copy(c.begin(), c.end(), f.begin());
}

ShearletRegularizer::ShearletRegularizer(std::shared_ptr<const ShearletSystem> sys)
    : sys_(std::move(sys)), upper_(frame_bounds(*sys_).second) {}

void ShearletRegularizer::forward(std::span<const double> f, std::span<double> c) const { forward_into(f, *sys_, c); }

void ShearletRegularizer::adjoint(std::span<const double> c, std::span<double> f) const { adjoint_into(c, *sys_, f); }

DualStats ShearletRegularizer::dual_update(std::span<const double> y, std::span<double> r, double theta,
                                           bool threshold_coarse) const {
  check_size(r.size(), coefficient_count(), "dual update");
  const std::size_t n = sys_->dims.size();
  std::vector<std::size_t> kept(sys_->band_count(), 0);
  const auto& k = simd::kernels();
  forward_visit(y, *sys_, [&](std::size_t b, std::span<const double> band) {
    double* rb = r.data() + b * n;
    k.axpy(1.0, band.data(), rb, n);
    kept[b] = shrink_block(rb, n, theta, b > 0 || threshold_coarse);
  });
  DualStats s;
  s.detail_count = r.size() - n;
  for (std::size_t b = 1; b < kept.size(); ++b) s.detail_nonzero += kept[b];
  return s;
}

double ShearletRegularizer::l1_norm(std::span<const double> f, bool include_coarse) const {
  std::vector<double> sums(sys_->band_count(), 0.0);
  forward_visit(f, *sys_, [&](std::size_t b, std::span<const double> band) { sums[b] = abs_sum(band); });
  double total = 0.0;
  for (std::size_t b = include_coarse ? 0 : 1; b < sums.size(); ++b) total += sums[b];
  return total;
}

WaveletRegularizer::WaveletRegularizer(const GridDims& dims, int levels) : dims_(dims), levels_(levels) {
  if (levels < 1 || levels > dwt4_max_levels(dims)) {
    throw ConfigError("dwt4 regularizer: " + std::to_string(levels) + " levels not supported by grid " +
                      dims.to_string());
  }
}

std::size_t WaveletRegularizer::coarse_count() const {
  const std::size_t s = std::size_t{1} << levels_;
  return dims_.size() / (s * s * s * s);
}

void WaveletRegularizer::forward(std::span<const double> f, std::span<double> c) const {
  dwt4_forward_into(f, dims_, levels_, c);
}

void WaveletRegularizer::adjoint(std::span<const double> c, std::span<double> f) const {
  dwt4_inverse_into(c, dims_, levels_, f);
}

double tune_beta(double beta, double observed, double target, double gain) {
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("beta tuner: target sparsity must lie in (0, 1)");
  const double next = beta * (1.0 + gain * (observed - target) / target);
  return std::clamp(next, 0.5 * beta, 2.0 * beta);
}

PdfpSolver::PdfpSolver(LinearOperator r, std::shared_ptr<const Regularizer> s, std::vector<double> m,
                       PdfpParams params)
    : r_(std::move(r)), s_(std::move(s)), m_(std::move(m)), params_(params) {
  check_size(m_.size(), r_.out, "pdfp data");
  check_size(s_->signal_size(), r_.in, "pdfp regularizer");
  if (params_.max_iters < 0) throw ConfigError("pdfp: max_iters must be >= 0");
  if (params_.target_sparsity && !(*params_.target_sparsity > 0.0 && *params_.target_sparsity < 1.0))
    throw ConfigError("pdfp: target sparsity must lie in (0, 1)");

  gram_norm_ = params_.gram_norm ? *params_.gram_norm : estimate_gram_norm(r_, params_.norm_iters, params_.seed);
  if (!(gram_norm_ > 0.0)) throw ConfigError("pdfp: the forward operator is zero");
  rho_ = params_.rho > 0.0 ? params_.rho : 1.9 / gram_norm_;
  if (!(rho_ < 2.0 / gram_norm_))
    throw ConfigError("pdfp: rho " + std::to_string(rho_) + " must be below 2/||R^T R|| = " +
                      std::to_string(2.0 / gram_norm_));
  const double ub = s_->upper_frame_bound();
  lambda_ = params_.lambda > 0.0 ? params_.lambda : 1.0 / ub;
  if (lambda_ > (1.0 + 1e-12) / ub)
    throw ConfigError("pdfp: lambda " + std::to_string(lambda_) + " exceeds 1/ub = " + std::to_string(1.0 / ub));
  if (params_.beta && *params_.beta < 0.0) throw ConfigError("pdfp: beta must be >= 0");
  beta_ = params_.beta ? *params_.beta : initial_beta();
}

double PdfpSolver::initial_beta() {
  // The first iterate from f = 0 is P+(rho R^T m); match its coefficient scale.
  std::vector<double> g(r_.in);
  r_.adjoint(m_, g);
  for (auto& v : g) v *= rho_;
  std::vector<double> c(s_->coefficient_count());
  s_->forward(g, c);
  std::vector<double> mags(c.begin() + static_cast<std::ptrdiff_t>(s_->coarse_count()), c.end());
  if (mags.empty()) return 0.0;
  for (auto& v : mags) v = std::abs(v);
  const auto k = static_cast<std::size_t>(params_.beta_percentile * static_cast<double>(mags.size() - 1));
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end());
  return mags[k] * lambda_ / rho_;
}

HistoryRow PdfpSolver::record(int iter, std::span<const double> f, std::span<const double> rf, double sparsity,
                              double change) const {
  HistoryRow h;
  h.iteration = iter;
  double fit = 0.0;
  for (std::size_t i = 0; i < rf.size(); ++i) fit += (rf[i] - m_[i]) * (rf[i] - m_[i]);
  h.data_fit = 0.5 * fit;
  h.l1 = beta_ > 0.0 ? beta_ * s_->l1_norm(f, params_.threshold_coarse) : 0.0;
  h.objective = h.data_fit + h.l1;
  h.sparsity = sparsity;
  h.beta = beta_;
  h.rel_change = change;
  return h;
}

PdfpResult PdfpSolver::run(std::span<const double> f0, const Observer& observer) {
  const std::size_t n = r_.in;
  const auto& k = simd::kernels();
  PdfpResult res;
  res.f.assign(n, 0.0);
  if (!f0.empty()) {
    check_size(f0.size(), n, "pdfp initial guess");
    std::copy(f0.begin(), f0.end(), res.f.begin());
  }
  res.rho = rho_;
  res.lambda = lambda_;
  res.gram_norm = gram_norm_;

  std::vector<double> rf(r_.out), rtm(n), grad(n), base(n), y(n), st(n, 0.0), next(n);
  std::vector<double> dual(s_->coefficient_count(), 0.0);
  r_.adjoint(m_, rtm);
  r_.apply(res.f, rf);
  res.history.push_back(record(0, res.f, rf, 0.0, 0.0));

  for (int it = 1; it <= params_.max_iters; ++it) {
    r_.adjoint(rf, grad);
    for (std::size_t i = 0; i < n; ++i) base[i] = res.f[i] - rho_ * (grad[i] - rtm[i]);

    for (std::size_t i = 0; i < n; ++i) y[i] = base[i] - lambda_ * st[i];
    k.project_nonneg(y.data(), n);

    const double theta = beta_ * rho_ / lambda_;
    const DualStats stats = s_->dual_update(y, dual, theta, params_.threshold_coarse);
    s_->adjoint(dual, st);

    for (std::size_t i = 0; i < n; ++i) next[i] = base[i] - lambda_ * st[i];
    k.project_nonneg(next.data(), n);

    double diff2 = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      finite = finite && std::isfinite(next[i]);
      diff2 += (next[i] - res.f[i]) * (next[i] - res.f[i]);
    }
    if (!finite) throw NumericalError("pdfp: non-finite iterate at iteration " + std::to_string(it));
    const double fn = norm(res.f);
    const double change = fn > 0.0 ? std::sqrt(diff2) / fn : (diff2 > 0.0 ? 1.0 : 0.0);
    res.f.swap(next);
    r_.apply(res.f, rf);

    res.history.push_back(record(it, res.f, rf, stats.sparsity(), change));
    res.iterations = it;
    if (params_.target_sparsity) beta_ = tune_beta(beta_, stats.sparsity(), *params_.target_sparsity, params_.gain);
    if (observer) observer(it, res.f);
    if (change < params_.rel_change_tol) {
      res.converged = true;
      break;
    }
  }
  res.beta = beta_;
  return res;
}

LinearOperator frame_operator(std::shared_ptr<const Projector> p, std::size_t frames) {
  LinearOperator op;
  op.in = frames * p->geometry().voxel_count();
  op.out = frames * p->sinogram_size();
  op.apply = [p, frames](std::span<const double> x, std::span<double> y) { project_frames(*p, x, frames, y); };
  op.adjoint = [p, frames](std::span<const double> x, std::span<double> y) { backproject_frames(*p, x, frames, y); };
  return op;
}

PdfpResult reconstruct(const SinogramSet& sino, std::shared_ptr<const Regularizer> s, const PdfpParams& params,
                       const PdfpSolver::Observer& observer) {
  auto proj = std::make_shared<const Projector>(sino.geometry, sino.angles);
  PdfpParams p = params;
  // Frames share one projector, so the block-diagonal norm is that of a single block.
  if (!p.gram_norm) p.gram_norm = estimate_gram_norm(frame_operator(proj, 1), p.norm_iters, p.seed);
  PdfpSolver solver(frame_operator(proj, sino.frames), std::move(s), sino.data, p);
  return solver.run({}, observer);
}

std::string history_csv(const std::vector<HistoryRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,objective,data_fit,l1,sparsity,beta,rel_change\n";
  for (const auto& r : rows) {
    os << r.iteration << ',' << r.objective << ',' << r.data_fit << ',' << r.l1 << ',' << r.sparsity << ','
       << r.beta << ',' << r.rel_change << '\n';
  }
  return os.str();
}

}  // namespace cylsh
