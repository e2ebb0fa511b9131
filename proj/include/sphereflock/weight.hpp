#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sphereflock/errors.hpp"
#include "sphereflock/vec.hpp"

namespace sphereflock {

/// Anything that maps a pair separation to a communication rate.
template <class W>
concept PairWeight = requires(const W& w, Separation s) {
  { w(s) } -> std::convertible_to<double>;
};

/// Communication weight psi on [0, 2]: decreasing, C^1, psi(2) = 0 and
/// psi'(2) < 0. Three families are provided:
///
///   quadratic    psi(r) = (4 - r^2) / 4
///   linear       psi(r) = kappa (2 - r)
///   table        monotone cubic Hermite interpolant through user nodes
///
/// The quadratic family is the default; on the unit sphere it equals
/// |x + y|^2 / 4 exactly.
class CommWeight {
 public:
  enum class Kind { quadratic, linear, table };

  static constexpr double kDomainSlack = 1e-12;

  CommWeight() = default;

  static CommWeight quadratic() { return CommWeight{}; }

  static CommWeight linear(double kappa = 1.0) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw DomainError("linear weight needs a positive finite scale");
    CommWeight w;
    w.kind_ = Kind::linear;
    w.kappa_ = kappa;
    return w;
  }

  /// Nodes must start at 0, end at 2 and increase strictly. Values must be
  /// finite, non-increasing, end in 0 and be positive at the last interior
  /// node (so that the slope at 2 is negative).
  static CommWeight table(std::vector<double> nodes, std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
      throw DomainError("weight table needs at least two matching nodes and values");
    if (nodes.front() != 0.0 || nodes.back() != 2.0)
      throw DomainError("weight table nodes must span [0, 2]");
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
      if (!(nodes[k + 1] > nodes[k])) throw DomainError("weight table nodes must increase");
      if (!(values[k + 1] <= values[k])) throw DomainError("weight table values must not increase");
    }
    for (double v : values)
      if (!std::isfinite(v) || v < 0.0) throw DomainError("weight table values must be finite and >= 0");
    if (values.back() != 0.0) throw DomainError("weight table must vanish at 2");
    if (!(values[values.size() - 2] > 0.0))
      throw DomainError("weight table must have a negative slope at 2");

    CommWeight w;
    w.kind_ = Kind::table;
    w.nodes_ = std::move(nodes);
    w.values_ = std::move(values);
    w.slopes_ = hermite_slopes(w.nodes_, w.values_);
    return w;
  }

  Kind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  std::string_view name() const {
    switch (kind_) {
      case Kind::quadratic: return "quadratic";
      case Kind::linear: return "linear";
      case Kind::table: return "table";
    }
    return "?";
  }

  /// Evaluates psi from a separation; uses the complement near r = 2.
  double operator()(Separation s) const {
    const double r = std::clamp(s.distance, 0.0, 2.0);
    const double q = std::clamp(s.complement, 0.0, 2.0);
    switch (kind_) {
      case Kind::quadratic: return q * (2.0 + r) / 4.0;
      case Kind::linear: return kappa_ * q;
      case Kind::table: return table_eval(r, q).first;
    }
    return 0.0;
  }

  /// psi(r) for a scalar distance. Values within kDomainSlack outside [0, 2]
  /// are clamped; anything further out is rejected.
  double operator()(double r) const { return (*this)(Separation::from_distance(checked(r))); }

  double derivative(double r) const {
    r = checked(r);
    switch (kind_) {
      case Kind::quadratic: return -r / 2.0;
      case Kind::linear: return -kappa_;
      case Kind::table: return table_eval(r, 2.0 - r).second;
    }
    return 0.0;
  }

  friend bool operator==(const CommWeight&, const CommWeight&) = default;

 private:
  static double checked(double r) {
    if (!std::isfinite(r) || r < -kDomainSlack || r > 2.0 + kDomainSlack)
      throw DomainError("weight argument " + std::to_string(r) + " outside [0, 2]");
    return std::clamp(r, 0.0, 2.0);
  }

  // Fritsch-Butland interior slopes, one-sided secants at the ends. The
  // harmonic mean is at most twice the smaller secant, which keeps every
  // interval monotone.
  static std::vector<double> hermite_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> secant(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) secant[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
    std::vector<double> m(n);
    m.front() = secant.front();
    m.back() = secant.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double a = secant[k - 1];
      const double b = secant[k];
      m[k] = (a * b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
    }
    return m;
  }

  // Returns (value, derivative). The interval position is expressed through
  // s = (right node - r) / h so that the right end of the last interval is
  // resolved from the complement without cancellation.
  std::pair<double, double> table_eval(double r, double complement) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
    std::size_t k = (it == nodes_.begin()) ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
    k = std::min(k, nodes_.size() - 2);
    const double h = nodes_[k + 1] - nodes_[k];
    const double right_gap = complement - (2.0 - nodes_[k + 1]);
    const double s = std::clamp(right_gap / h, 0.0, 1.0);
    const double t = 1.0 - s;
    const double y0 = values_[k], y1 = values_[k + 1];
    const double m0 = slopes_[k] * h, m1 = slopes_[k + 1] * h;
    const double value = (3.0 - 2.0 * s) * s * s * y0 + t * s * s * m0 + t * t * (1.0 + 2.0 * s) * y1 - t * t * s * m1;
    const double dvalue = -6.0 * t * s * y0 + s * (3.0 * s - 2.0) * m0 + 6.0 * t * s * y1 + t * (3.0 * t - 2.0) * m1;
    return {value, dvalue / h};
  }

  Kind kind_ = Kind::quadratic;
  double kappa_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

static_assert(PairWeight<CommWeight>);

/// psi(r) with the domain rules of CommWeight::operator()(double).
inline double weight_eval(const CommWeight& psi, double r) { return psi(r); }

}  // namespace sphereflock
