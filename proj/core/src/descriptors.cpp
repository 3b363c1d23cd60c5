#include "delaystab/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

Step wrap(Step m, Step period) {
  const Step r = m % period;
  return r < 0 ? r + period : r;
}

void require_period(Step period) {
  if (period < 1) throw SpecError("descriptor period must be a positive integer");
}

}  // namespace

Coefficient Coefficient::constant(Rational value) {
  Coefficient c;
  c.kind_ = Kind::Constant;
  c.amplitude_ = std::move(value);
  return c;
}

Coefficient Coefficient::table(std::vector<Rational> values) {
  if (values.empty()) throw SpecError("coefficient table must not be empty");
  Coefficient c;
  c.kind_ = Kind::Table;
  c.period_ = static_cast<Step>(values.size());
  for (const auto& v : values) c.samples_.push_back(to_double(v));
  c.values_ = std::move(values);
  return c;
}

Coefficient Coefficient::cosine(Rational amplitude, Step period) {
  require_period(period);
  Coefficient c;
  c.kind_ = Kind::Cosine;
  c.amplitude_ = std::move(amplitude);
  c.period_ = period;
  const double a = to_double(c.amplitude_);
  for (Step m = 0; m < period; ++m)
    c.samples_.push_back(a * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                                      static_cast<double>(period)));
  return c;
}

Coefficient Coefficient::sine(Rational amplitude, Step period) {
  require_period(period);
  Coefficient c;
  c.kind_ = Kind::Sine;
  c.amplitude_ = std::move(amplitude);
  c.period_ = period;
  const double a = to_double(c.amplitude_);
  for (Step m = 0; m < period; ++m)
    c.samples_.push_back(a * std::sin(2.0 * std::numbers::pi * static_cast<double>(m) /
                                      static_cast<double>(period)));
  return c;
}

Coefficient Coefficient::alternating(Rational base, Rational amplitude) {
  Coefficient c;
  c.kind_ = Kind::Alternating;
  c.base_ = std::move(base);
  c.amplitude_ = std::move(amplitude);
  c.period_ = c.amplitude_ == 0 ? 1 : 2;
  c.samples_ = {to_double(c.base_ + c.amplitude_), to_double(c.base_ - c.amplitude_)};
  return c;
}

Coefficient Coefficient::callable(std::function<double(Step)> f, std::optional<Step> period,
                                  std::optional<Rational> sup_bound) {
  if (!f) throw SpecError("callable coefficient needs a function");
  if (period) require_period(*period);
  Coefficient c;
  c.kind_ = Kind::Callable;
  c.fn_ = std::move(f);
  c.fn_period_ = period;
  c.fn_bound_ = std::move(sup_bound);
  return c;
}

double Coefficient::operator()(Step m) const {
  switch (kind_) {
    case Kind::Constant: return to_double(amplitude_);
    case Kind::Alternating: return samples_[static_cast<std::size_t>(wrap(m, 2))];
    case Kind::Callable: return fn_(m);
    default: return samples_[static_cast<std::size_t>(wrap(m, period_))];
  }
}

std::optional<Step> Coefficient::period() const {
  if (kind_ == Kind::Callable) return fn_period_;
  return period_;
}

Rational Coefficient::analytic_sup() const {
  switch (kind_) {
    case Kind::Constant:
    case Kind::Cosine:
    case Kind::Sine: return abs_exact(amplitude_);
    case Kind::Alternating: return abs_exact(base_) + abs_exact(amplitude_);
    case Kind::Table: {
      Rational best(0);
      for (const auto& v : values_) best = std::max(best, abs_exact(v));
      return best;
    }
    case Kind::Callable:
      if (fn_bound_) return *fn_bound_;
      throw SpecError("coefficient is unbounded: give a period table, a closed form, or a sup bound");
  }
  return Rational(0);
}

double Coefficient::sampled_sup() const {
  const auto p = period();
  if (!p) throw SpecError("cannot enumerate the sup of an aperiodic coefficient");
  double best = 0.0;
  for (Step m = 0; m < *p; ++m) best = std::max(best, std::abs((*this)(m)));
  return best;
}

Coefficient Coefficient::scaled(const Rational& k) const {
  switch (kind_) {
    case Kind::Constant: return constant(amplitude_ * k);
    case Kind::Cosine: return cosine(amplitude_ * k, period_);
    case Kind::Sine: return sine(amplitude_ * k, period_);
    case Kind::Alternating: return alternating(base_ * k, amplitude_ * k);
    case Kind::Table: {
      std::vector<Rational> v = values_;
      for (auto& x : v) x *= k;
      return table(std::move(v));
    }
    case Kind::Callable: {
      const double kd = to_double(k);
      std::optional<Rational> bound;
      if (fn_bound_) bound = *fn_bound_ * abs_exact(k);
      return callable([f = fn_, kd](Step m) { return kd * f(m); }, fn_period_, bound);
    }
  }
  return *this;
}

bool Coefficient::is_zero() const {
  switch (kind_) {
    case Kind::Callable: return fn_bound_ && *fn_bound_ == 0;
    case Kind::Alternating: return base_ == 0 && amplitude_ == 0;
    case Kind::Table:
      return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v == 0; });
    default: return amplitude_ == 0;
  }
}

DescriptorSup sup_of_descriptor(const Coefficient& c) {
  return DescriptorSup{c.analytic_sup(), c.sampled_sup()};
}

// ---------------------------------------------------------------------------

Delay Delay::constant(Step value) {
  if (value < 0) throw SpecError("delays must be nonnegative");
  Delay d;
  d.values_ = {value};
  return d;
}

Delay Delay::table(std::vector<Step> values) {
  if (values.empty()) throw SpecError("delay table must not be empty");
  for (Step v : values)
    if (v < 0) throw SpecError("delays must be nonnegative");
  Delay d;
  d.values_ = std::move(values);
  return d;
}

Delay Delay::alternating(Step base, Step amplitude) {
  if (base < (amplitude < 0 ? -amplitude : amplitude))
    throw SpecError("alternating delay base + amp (-1)^m must stay nonnegative");
  Delay d;
  d.alternating_ = true;
  if (amplitude == 0)
    d.values_ = {base};
  else
    d.values_ = {base + amplitude, base - amplitude};
  return d;
}

Step Delay::operator()(Step m) const {
  return values_[static_cast<std::size_t>(wrap(m, static_cast<Step>(values_.size())))];
}

Step Delay::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::optional<Step> Delay::period() const { return static_cast<Step>(values_.size()); }

// ---------------------------------------------------------------------------

Activation Activation::tanh() {
  Activation a;
  a.kind_ = Kind::Tanh;
  return a;
}

Activation Activation::arctan() {
  Activation a;
  a.kind_ = Kind::Arctan;
  return a;
}

Activation Activation::satlin() {
  Activation a;
  a.kind_ = Kind::Satlin;
  return a;
}

Activation Activation::identity() { return Activation{}; }

Activation Activation::table(std::vector<double> xs, std::vector<double> ys,
                             std::optional<Rational> lipschitz) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw SpecError("activation table needs at least two (x, y) knots of equal count");
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (!(xs[k] > xs[k - 1])) throw SpecError("activation knots must be strictly increasing");
  Activation a;
  a.kind_ = Kind::Table;
  a.xs_ = std::move(xs);
  a.ys_ = std::move(ys);
  a.lipschitz_ = std::move(lipschitz);
  return a;
}

double Activation::operator()(double u) const {
  const double v = scale_d_ * u;
  switch (kind_) {
    case Kind::Tanh: return std::tanh(v);
    case Kind::Arctan: return std::atan(v);
    case Kind::Satlin: return 0.5 * (std::abs(v + 1.0) - std::abs(v - 1.0));
    case Kind::Identity: return v;
    case Kind::Table: {
      if (v <= xs_.front()) return ys_.front();
      if (v >= xs_.back()) return ys_.back();
      const auto hi = std::upper_bound(xs_.begin(), xs_.end(), v);
      const std::size_t k = static_cast<std::size_t>(hi - xs_.begin());
      const double t = (v - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
    }
  }
  return v;
}

std::string Activation::name() const {
  switch (kind_) {
    case Kind::Tanh: return "tanh";
    case Kind::Arctan: return "arctan";
    case Kind::Satlin: return "satlin";
    case Kind::Identity: return "identity";
    case Kind::Table: return "table";
  }
  return "identity";
}

Activation Activation::with_lipschitz(Rational lipschitz) const {
  if (lipschitz < 0) throw SpecError("Lipschitz constants must be nonnegative");
  Activation a = *this;
  a.lipschitz_ = std::move(lipschitz);
  return a;
}

Activation Activation::scaled(const Rational& k) const {
  if (!(k > 0)) throw DomainError("activation input scale must be positive");
  Activation a = *this;
  a.scale_ = scale_ * k;
  a.scale_d_ = to_double(a.scale_);
  return a;
}

Rational Activation::lipschitz() const {
  if (!lipschitz_) throw SpecError("activation '" + name() + "' has no Lipschitz constant");
  return *lipschitz_ * scale_;
}

std::optional<double> Activation::sup_abs() const {
  switch (kind_) {
    case Kind::Tanh:
    case Kind::Satlin: return 1.0;
    case Kind::Arctan: return std::numbers::pi / 2.0;
    case Kind::Identity: return std::nullopt;
    case Kind::Table: {
      double best = 0.0;
      for (double y : ys_) best = std::max(best, std::abs(y));
      return best;
    }
  }
  return std::nullopt;
}

std::optional<Step> combined_period(const std::vector<std::optional<Step>>& periods) {
  Step acc = 1;
  for (const auto& p : periods) {
    if (!p) return std::nullopt;
    acc = std::lcm(acc, *p);
  }
  return acc;
}

}  // namespace delaystab
