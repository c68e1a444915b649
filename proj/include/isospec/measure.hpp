#pragma once

#include <map>
#include <string>
#include <vector>

namespace isospec {

/// Where a spectral measure came from.
struct Provenance {
  std::string source;  // label of the potential, or a derived description
  double length = 0.0;
  int intervals = 0;
  int count = 0;
  double eigen_tol = 0.0;
  double quad_tol = 0.0;
  std::vector<int> support;  // perturbed indices (0-based), empty for a solve
  double tail_ratio = 0.0;   // decay of the top eigenfunction near x = L

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Truncated discrete spectral measure sum_j a_j delta(E - E_j).
class SpectralMeasure {
 public:
  SpectralMeasure() = default;
  SpectralMeasure(std::vector<double> eigenvalues, std::vector<double> weights,
                  Provenance provenance = {});

  std::size_t size() const noexcept { return eigenvalues_.size(); }
  const std::vector<double>& eigenvalues() const noexcept {
    return eigenvalues_;
  }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  Provenance& provenance() noexcept { return provenance_; }

  friend bool operator==(const SpectralMeasure&,
                         const SpectralMeasure&) = default;

 private:
  std::vector<double> eigenvalues_;
  std::vector<double> weights_;
  Provenance provenance_;
};

/// Two measures on one eigenvalue list; t -> (1-t) base + t target.
class IsospectralPath {
 public:
  IsospectralPath(SpectralMeasure base, SpectralMeasure target, double tol);

  const SpectralMeasure& base() const noexcept { return base_; }
  const SpectralMeasure& target() const noexcept { return target_; }
  double tolerance() const noexcept { return tol_; }

  /// Indices (0-based) at which base and target weights differ.
  std::vector<int> support() const;

  double weight_at(int j, double t) const;

 private:
  SpectralMeasure base_;
  SpectralMeasure target_;
  double tol_;
};

IsospectralPath make_path(const SpectralMeasure& m0, const SpectralMeasure& m1,
                          double tol);

SpectralMeasure measure_at(const IsospectralPath& path, double t);

/// Keys are 0-based eigenvalue indices.
SpectralMeasure perturb_weights(const SpectralMeasure& m,
                                const std::map<int, double>& deltas);

}  // namespace isospec
