#include "isospec/measure.hpp"

#include <cmath>
#include <sstream>

#include "isospec/error.hpp"

namespace isospec {

SpectralMeasure::SpectralMeasure(std::vector<double> eigenvalues,
                                 std::vector<double> weights,
                                 Provenance provenance)
    : eigenvalues_(std::move(eigenvalues)),
      weights_(std::move(weights)),
      provenance_(std::move(provenance)) {
  if (eigenvalues_.size() != weights_.size())
    fail(ErrorCode::length_mismatch,
         "measure has " + std::to_string(eigenvalues_.size()) +
             " eigenvalues but " + std::to_string(weights_.size()) +
             " weights");
  for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
    if (!std::isfinite(eigenvalues_[j]) || !std::isfinite(weights_[j]))
      fail(ErrorCode::invalid_argument, "measure entries must be finite");
    if (j > 0 && !(eigenvalues_[j] > eigenvalues_[j - 1]))
      fail(ErrorCode::invalid_argument,
           "eigenvalues must be strictly increasing (index " +
               std::to_string(j + 1) + ")");
    if (!(weights_[j] > 0.0))
      fail(ErrorCode::nonpositive_weight,
           "weight " + std::to_string(j + 1) + " is not positive");
  }
}

IsospectralPath::IsospectralPath(SpectralMeasure base, SpectralMeasure target,
                                 double tol)
    : base_(std::move(base)), target_(std::move(target)), tol_(tol) {}

std::vector<int> IsospectralPath::support() const {
  std::vector<int> s;
  for (std::size_t j = 0; j < base_.size(); ++j)
    if (base_.weights()[j] != target_.weights()[j])
      s.push_back(static_cast<int>(j));
  return s;
}

namespace {

// (1 - t) a0 + t a1 with error-free transformations for 1 - t and both
// products, so the result is as if computed in twice the working precision.
double affine_weight(double a0, double a1, double t) {
  const double s = 1.0 - t;
  const double bv = s - 1.0;
  const double s_lo = (1.0 - (s - bv)) + (-t - bv);
  const double p0 = s * a0;
  const double p0_lo = std::fma(s, a0, -p0);
  const double p1 = t * a1;
  const double p1_lo = std::fma(t, a1, -p1);
  const double sum = p0 + p1;
  const double bs = sum - p0;
  const double sum_lo = (p0 - (sum - bs)) + (p1 - bs);
  return sum + (sum_lo + p0_lo + p1_lo + s_lo * a0);
}

}  // namespace

double IsospectralPath::weight_at(int j, double t) const {
  const double a0 = base_.weights()[j];
  const double a1 = target_.weights()[j];
  if (a0 == a1) return a0;
  return affine_weight(a0, a1, t);
}

IsospectralPath make_path(const SpectralMeasure& m0, const SpectralMeasure& m1,
                          double tol) {
  if (!(tol >= 0.0))
    fail(ErrorCode::invalid_argument, "spectrum tolerance must be >= 0");
  if (m0.size() == 0)
    fail(ErrorCode::invalid_argument, "measures must be non-empty");
  if (m0.size() != m1.size())
    fail(ErrorCode::length_mismatch,
         "measures have " + std::to_string(m0.size()) + " and " +
             std::to_string(m1.size()) + " eigenvalues");
  for (std::size_t j = 0; j < m0.size(); ++j) {
    const double gap = std::abs(m0.eigenvalues()[j] - m1.eigenvalues()[j]);
    if (!(gap <= tol)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "spectra differ at j = " << j + 1 << " (gap " << gap << ")";
      fail(ErrorCode::spectrum_mismatch, msg.str());
    }
  }
  SpectralMeasure target(m0.eigenvalues(), m1.weights(), m1.provenance());
  return IsospectralPath(m0, std::move(target), tol);
}

SpectralMeasure measure_at(const IsospectralPath& path, double t) {
  if (!std::isfinite(t)) fail(ErrorCode::invalid_argument, "t must be finite");
  if (t == 0.0) return path.base();
  if (t == 1.0) return path.target();
  const std::size_t J = path.base().size();
  std::vector<double> w(J);
  for (std::size_t j = 0; j < J; ++j) {
    w[j] = path.weight_at(static_cast<int>(j), t);
    if (!(w[j] > 0.0))
      fail(ErrorCode::nonpositive_weight,
           "weight " + std::to_string(j + 1) + " is not positive at t = " +
               std::to_string(t));
  }
  Provenance prov = path.base().provenance();
  std::ostringstream src;
  src.precision(17);
  src << prov.source << " @ t=" << t;
  prov.source = src.str();
  prov.support = path.support();
  return SpectralMeasure(path.base().eigenvalues(), std::move(w),
                         std::move(prov));
}

SpectralMeasure perturb_weights(const SpectralMeasure& m,
                                const std::map<int, double>& deltas) {
  std::vector<double> w = m.weights();
  Provenance prov = m.provenance();
  for (const auto& [j, d] : deltas) {
    if (j < 0 || static_cast<std::size_t>(j) >= w.size())
      fail(ErrorCode::invalid_argument,
           "perturbation index " + std::to_string(j + 1) + " out of range");
    if (!std::isfinite(d))
      fail(ErrorCode::invalid_argument, "perturbation must be finite");
    const double updated = w[j] + d;
    if (!(updated > 0.0))
      fail(ErrorCode::nonpositive_weight,
           "perturbed weight " + std::to_string(j + 1) + " is not positive");
    w[j] = updated;
    if (d != 0.0) prov.support.push_back(j);
  }
  return SpectralMeasure(m.eigenvalues(), std::move(w), std::move(prov));
}

}  // namespace isospec
