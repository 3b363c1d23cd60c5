#pragma once

// Declarative coefficient, delay and activation descriptors used by the model
// specs. Coefficients keep their parameters as exact rationals so certificate
// algebra stays exact; evaluation in the simulator is in double.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "delaystab/rational.hpp"
#include "delaystab/state.hpp"

namespace delaystab {

/// A real sequence m -> a(m), m >= 0.
class Coefficient {
 public:
  enum class Kind { Constant, Table, Cosine, Sine, Alternating, Callable };

  /// The zero coefficient.
  Coefficient() = default;

  static Coefficient constant(Rational value);
  /// a(m) = values[m mod len].
  static Coefficient table(std::vector<Rational> values);
  /// a(m) = amplitude * cos(2 pi m / period).
  static Coefficient cosine(Rational amplitude, Step period);
  static Coefficient sine(Rational amplitude, Step period);
  /// a(m) = base + amplitude * (-1)^m.
  static Coefficient alternating(Rational base, Rational amplitude);
  /// Escape hatch for programmatic specs. Certificates need `sup_bound`;
  /// sampled sups need `period`.
  static Coefficient callable(std::function<double(Step)> f, std::optional<Step> period = {},
                              std::optional<Rational> sup_bound = {});

  double operator()(Step m) const;

  Kind kind() const noexcept { return kind_; }
  /// Smallest period the descriptor guarantees (1 for constants); nullopt when unknown.
  std::optional<Step> period() const;

  /// sup_m |a(m)| from the closed form: |amplitude| for trig terms,
  /// |base| + |amplitude| for alternating ones. Throws SpecError when no bound is known.
  Rational analytic_sup() const;
  /// max |a(m)| over m = 0..period-1 of the double-valued samples.
  /// Throws SpecError without a period.
  double sampled_sup() const;

  /// k * a(m), exactly.
  Coefficient scaled(const Rational& k) const;
  bool is_zero() const;

  const Rational& amplitude() const noexcept { return amplitude_; }
  const Rational& base() const noexcept { return base_; }
  const std::vector<Rational>& values() const noexcept { return values_; }

 private:
  Kind kind_ = Kind::Constant;
  Rational amplitude_{0};  // Constant: the value
  Rational base_{0};
  std::vector<Rational> values_;
  std::vector<double> samples_;  // cached double values for tables and trig terms
  Step period_ = 1;
  std::function<double(Step)> fn_;
  std::optional<Step> fn_period_;
  std::optional<Rational> fn_bound_;
};

struct DescriptorSup {
  Rational analytic;
  double sampled = 0.0;
};

/// Both sups of a coefficient: the closed-form one certificates use and the
/// enumerated one over a single period.
DescriptorSup sup_of_descriptor(const Coefficient& c);

/// A nonnegative-integer delay sequence m -> tau(m).
class Delay {
 public:
  Delay() = default;
  static Delay constant(Step value);
  static Delay table(std::vector<Step> values);
  /// tau(m) = base + amplitude * (-1)^m; needs base >= |amplitude|.
  static Delay alternating(Step base, Step amplitude);

  Step operator()(Step m) const;
  Step max() const;
  std::optional<Step> period() const;

  bool is_alternating() const noexcept { return alternating_; }
  const std::vector<Step>& values() const noexcept { return values_; }

 private:
  std::vector<Step> values_{0};  // one period
  bool alternating_ = false;
};

/// Activation function u -> f(scale * u) with a known Lipschitz constant.
class Activation {
 public:
  enum class Kind { Tanh, Arctan, Satlin, Identity, Table };

  Activation() = default;
  static Activation tanh();
  static Activation arctan();
  /// Piecewise-linear saturation (|u + 1| - |u - 1|) / 2.
  static Activation satlin();
  static Activation identity();
  /// Piecewise-linear interpolation through (xs, ys), constant outside.
  /// The Lipschitz constant is not estimated: supply it or lowering fails.
  static Activation table(std::vector<double> xs, std::vector<double> ys,
                          std::optional<Rational> lipschitz = {});

  double operator()(double u) const;

  Kind kind() const noexcept { return kind_; }
  std::string name() const;

  /// Replaces the Lipschitz constant (of the unscaled function).
  Activation with_lipschitz(Rational lipschitz) const;
  /// u -> f(k u); Lipschitz constant multiplied by k. Needs k > 0.
  Activation scaled(const Rational& k) const;

  bool has_lipschitz() const noexcept { return lipschitz_.has_value(); }
  /// Effective constant of u -> f(scale * u). Throws SpecError when missing.
  Rational lipschitz() const;
  const Rational& input_scale() const noexcept { return scale_; }
  /// sup_u |f(u)|; nullopt for unbounded functions.
  std::optional<double> sup_abs() const;
  const std::vector<double>& knots_x() const noexcept { return xs_; }
  const std::vector<double>& knots_y() const noexcept { return ys_; }

 private:
  Kind kind_ = Kind::Identity;
  std::optional<Rational> lipschitz_ = Rational(1);
  Rational scale_{1};
  double scale_d_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

/// lcm of all known periods; nullopt when any is unknown.
std::optional<Step> combined_period(const std::vector<std::optional<Step>>& periods);

}  // namespace delaystab
