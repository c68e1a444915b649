#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace isospec {

/// Cubic polynomial in the local coordinate s = (x - x_i) / h of one grid
/// interval [x_i, x_{i+1}].
struct CubicPiece {
  double x0 = 0.0;
  double h = 1.0;
  std::array<double, 4> c{};  // c0 + c1 s + c2 s^2 + c3 s^3

  double operator()(double x) const {
    const double s = (x - x0) / h;
    return c[0] + s * (c[1] + s * (c[2] + s * c[3]));
  }
};

/// A real potential sampled at x_i = i L / n, i = 0..n, on the truncated
/// half-line [0, L]. Between nodes it is the cubic through the four nearest
/// samples (shifted inward at the ends).
class GridPotential {
 public:
  GridPotential() = default;
  GridPotential(double length, int intervals, std::vector<double> samples,
                std::string label = {});

  double length() const noexcept { return length_; }
  int intervals() const noexcept { return intervals_; }
  double spacing() const noexcept { return length_ / intervals_; }
  double node(int i) const noexcept {
    return i == intervals_ ? length_ : i * spacing();
  }
  std::span<const double> samples() const noexcept { return samples_; }
  const std::string& label() const noexcept { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  CubicPiece piece(int interval) const;
  double operator()(double x) const;

  /// Smallest and largest sample among the stencil of an interval.
  std::pair<double, double> piece_range(int interval) const;

  bool same_grid(const GridPotential& other) const noexcept {
    return length_ == other.length_ && intervals_ == other.intervals_;
  }

  friend bool operator==(const GridPotential&, const GridPotential&) = default;

 private:
  int stencil_start(int interval) const noexcept;

  double length_ = 1.0;
  int intervals_ = 2;
  std::vector<double> samples_ = {0.0, 0.0, 0.0};
  std::string label_;
};

/// Builtin test potentials: "zero" (V = 0), "linear" (V = x, Airy),
/// "quadratic" (V = x^2, oscillator).
GridPotential builtin_potential(const std::string& name, double length,
                                int intervals);

bool is_builtin_name(const std::string& name);

}  // namespace isospec
