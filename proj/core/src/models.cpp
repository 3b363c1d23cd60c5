#include "delaystab/models.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

template <class V>
void require_size(const V& v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw SpecError(std::string(what) + ": expected " + std::to_string(n) + " entries, got " +
                    std::to_string(v.size()));
}

void require_leakage(const std::vector<Coefficient>& c, const char* what) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].period()) continue;
    if (!(c[i].sampled_sup() < 1.0))
      throw SpecError(std::string(what) + "[" + std::to_string(i) + "] reaches |c(m)| >= 1");
  }
}

void require_lipschitz(const std::vector<Activation>& acts, const char* what) {
  for (std::size_t k = 0; k < acts.size(); ++k)
    if (!acts[k].has_lipschitz())
      throw SpecError(std::string(what) + "[" + std::to_string(k) + "] (" + acts[k].name() +
                      ") needs a Lipschitz constant");
}

Step max_delay(const std::vector<Delay>& delays) {
  Step best = 0;
  for (const auto& d : delays) best = std::max(best, d.max());
  return best;
}

void collect(std::vector<std::optional<Step>>& out, const std::vector<Coefficient>& cs) {
  for (const auto& c : cs) out.push_back(c.period());
}
void collect(std::vector<std::optional<Step>>& out, const std::vector<Delay>& ds) {
  for (const auto& d : ds) out.push_back(d.period());
}

void require_positive(const std::vector<Rational>& d, std::size_t n) {
  if (d.size() != n) throw ShapeError("rescaling vector has the wrong length");
  for (const auto& v : d)
    if (!(v > 0)) throw DomainError("rescaling vector entries must be positive");
}

Rational sup(const Coefficient& c) { return c.analytic_sup(); }

SystemDefinition base_system(std::size_t n, Step tau, Step r, std::optional<Step> period,
                             std::vector<Coefficient> leakage) {
  SystemDefinition sys;
  sys.n_channels = n;
  sys.leakage_delay = tau;
  sys.window_start = r;
  sys.period = period;
  auto c = std::make_shared<const std::vector<Coefficient>>(std::move(leakage));
  sys.leakage = [c](std::size_t i, Step m) { return (*c)[i](m); };
  return sys;
}

}  // namespace

// ---------------------------------------------------------------------------
// Hopfield

HopfieldSpec HopfieldSpec::zeros(std::size_t n, std::size_t k, Step tau) {
  HopfieldSpec s;
  s.n = n;
  s.k = k;
  s.tau = tau;
  s.leakage.assign(n, Coefficient{});
  s.weights.assign(n * n * k, Coefficient{});
  s.delays.assign(n * n * k, Delay{});
  s.activations.assign(n * n * k, Activation::identity());
  s.inputs.assign(n, Coefficient{});
  return s;
}

Step HopfieldSpec::window_start() const { return -std::max(tau, max_delay(delays)); }

std::optional<Step> HopfieldSpec::period() const {
  std::vector<std::optional<Step>> p;
  collect(p, leakage);
  collect(p, weights);
  collect(p, delays);
  collect(p, inputs);
  return combined_period(p);
}

void HopfieldSpec::validate() const {
  if (n == 0 || k == 0) throw SpecError("Hopfield spec needs N >= 1 and K >= 1");
  if (tau < 0) throw SpecError("leakage delay must be nonnegative");
  require_size(leakage, n, "leakage");
  require_size(weights, n * n * k, "weights");
  require_size(delays, n * n * k, "delays");
  require_size(activations, n * n * k, "activations");
  require_size(inputs, n, "inputs");
  require_leakage(leakage, "leakage");
}

SystemDefinition lower_hopfield(const HopfieldSpec& spec) {
  spec.validate();
  require_lipschitz(spec.activations, "activations");
  auto s = std::make_shared<const HopfieldSpec>(spec);
  SystemDefinition sys =
      base_system(spec.n, spec.tau, spec.window_start(), spec.period(), spec.leakage);
  sys.nonlinearity = [s](std::size_t i, Step m, const StateView& w) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s->n; ++j) {
      for (std::size_t kk = 0; kk < s->k; ++kk) {
        const std::size_t q = s->index(i, j, kk);
        acc += s->weights[q](m) * s->activations[q](w(j, -s->delays[q](m)));
      }
    }
    return acc + s->inputs[i](m);
  };
  return sys;
}

std::vector<PairwiseTerm> pairwise_terms(const HopfieldSpec& spec) {
  spec.validate();
  auto s = std::make_shared<const HopfieldSpec>(spec);
  std::vector<PairwiseTerm> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      out.push_back([s, i, j](Step m, const StateView& w) {
        double acc = 0.0;
        for (std::size_t kk = 0; kk < s->k; ++kk) {
          const std::size_t q = s->index(i, j, kk);
          acc += s->weights[q](m) * s->activations[q](w(j, -s->delays[q](m)));
        }
        return acc + s->inputs[i](m) / static_cast<double>(s->n);
      });
    }
  }
  return out;
}

HopfieldSpec rescale_hopfield(const HopfieldSpec& spec, const std::vector<Rational>& d) {
  spec.validate();
  require_positive(d, spec.n);
  HopfieldSpec out = spec;
  for (std::size_t i = 0; i < spec.n; ++i) {
    const Rational inv = Rational(1) / d[i];
    out.inputs[i] = spec.inputs[i].scaled(inv);
    for (std::size_t j = 0; j < spec.n; ++j) {
      for (std::size_t kk = 0; kk < spec.k; ++kk) {
        const std::size_t q = spec.index(i, j, kk);
        out.weights[q] = spec.weights[q].scaled(inv);
        out.activations[q] = spec.activations[q].scaled(d[j]);
      }
    }
  }
  return out;
}

LipschitzData<Rational> lipschitz_data(const HopfieldSpec& spec) {
  spec.validate();
  LipschitzData<Rational> lip{Matrix<Rational>(spec.n, spec.n), {}};
  for (std::size_t i = 0; i < spec.n; ++i) {
    lip.c_plus.push_back(sup(spec.leakage[i]));
    for (std::size_t j = 0; j < spec.n; ++j) {
      Rational h(0);
      for (std::size_t kk = 0; kk < spec.k; ++kk) {
        const std::size_t q = spec.index(i, j, kk);
        if (spec.weights[q].is_zero()) continue;
        h += sup(spec.weights[q]) * spec.activations[q].lipschitz();
      }
      lip.H(i, j) = h;
    }
  }
  return lip;
}

// ---------------------------------------------------------------------------
// BAM

BAMSpec BAMSpec::zeros(std::size_t n1, std::size_t n2, Step tau) {
  BAMSpec s;
  s.n1 = n1;
  s.n2 = n2;
  s.tau = tau;
  s.c_hat.assign(n1, Coefficient{});
  s.c_tilde.assign(n2, Coefficient{});
  s.a_hat.assign(n1 * n2, Coefficient{});
  s.b_hat.assign(n1 * n2, Coefficient{});
  s.tau_hat.assign(n1 * n2, Delay{});
  s.I_hat.assign(n1, Coefficient{});
  s.a_tilde.assign(n1 * n2, Coefficient{});
  s.b_tilde.assign(n1 * n2, Coefficient{});
  s.tau_tilde.assign(n1 * n2, Delay{});
  s.I_tilde.assign(n2, Coefficient{});
  s.f.assign(n2, Activation::identity());
  s.g.assign(n1, Activation::identity());
  return s;
}

Step BAMSpec::window_start() const {
  return -std::max({tau, max_delay(tau_hat), max_delay(tau_tilde)});
}

std::optional<Step> BAMSpec::period() const {
  std::vector<std::optional<Step>> p;
  collect(p, c_hat);
  collect(p, c_tilde);
  collect(p, a_hat);
  collect(p, b_hat);
  collect(p, tau_hat);
  collect(p, I_hat);
  collect(p, a_tilde);
  collect(p, b_tilde);
  collect(p, tau_tilde);
  collect(p, I_tilde);
  return combined_period(p);
}

void BAMSpec::validate() const {
  if (n1 == 0 || n2 == 0) throw SpecError("BAM spec needs N1 >= 1 and N2 >= 1");
  if (tau < 0) throw SpecError("leakage delay must be nonnegative");
  const std::size_t nn = n1 * n2;
  require_size(c_hat, n1, "c_hat");
  require_size(c_tilde, n2, "c_tilde");
  require_size(a_hat, nn, "a_hat");
  require_size(b_hat, nn, "b_hat");
  require_size(tau_hat, nn, "tau_hat");
  require_size(I_hat, n1, "I_hat");
  require_size(a_tilde, nn, "a_tilde");
  require_size(b_tilde, nn, "b_tilde");
  require_size(tau_tilde, nn, "tau_tilde");
  require_size(I_tilde, n2, "I_tilde");
  require_size(f, n2, "f");
  require_size(g, n1, "g");
  require_leakage(c_hat, "c_hat");
  require_leakage(c_tilde, "c_tilde");
}

SystemDefinition lower_bam(const BAMSpec& spec) {
  spec.validate();
  require_lipschitz(spec.f, "f");
  require_lipschitz(spec.g, "g");
  auto s = std::make_shared<const BAMSpec>(spec);
  std::vector<Coefficient> leakage = spec.c_hat;
  leakage.insert(leakage.end(), spec.c_tilde.begin(), spec.c_tilde.end());
  SystemDefinition sys = base_system(spec.n1 + spec.n2, spec.tau, spec.window_start(),
                                     spec.period(), std::move(leakage));
  sys.nonlinearity = [s](std::size_t ch, Step m, const StateView& w) {
    double acc = 0.0;
    if (ch < s->n1) {
      const std::size_t i = ch;
      for (std::size_t j = 0; j < s->n2; ++j) {
        const std::size_t q = s->hat(i, j);
        const std::size_t yj = s->n1 + j;
        acc += s->a_hat[q](m) * s->f[j](w(yj, 0));
        acc += s->b_hat[q](m) * s->f[j](w(yj, -s->tau_hat[q](m)));
      }
      return acc + s->I_hat[i](m);
    }
    const std::size_t j = ch - s->n1;
    for (std::size_t i = 0; i < s->n1; ++i) {
      const std::size_t q = s->tilde(j, i);
      acc += s->a_tilde[q](m) * s->g[i](w(i, 0));
      acc += s->b_tilde[q](m) * s->g[i](w(i, -s->tau_tilde[q](m)));
    }
    return acc + s->I_tilde[j](m);
  };
  return sys;
}

std::vector<PairwiseTerm> pairwise_terms(const BAMSpec& spec) {
  spec.validate();
  auto s = std::make_shared<const BAMSpec>(spec);
  const std::size_t n = spec.n1 + spec.n2;
  std::vector<PairwiseTerm> out;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const bool x_row = r < spec.n1;
      const bool x_col = c < spec.n1;
      if (x_row == x_col) {
        out.push_back([](Step, const StateView&) { return 0.0; });
      } else if (x_row) {
        const std::size_t i = r, j = c - spec.n1;
        out.push_back([s, i, j, c](Step m, const StateView& w) {
          const std::size_t q = s->hat(i, j);
          return s->a_hat[q](m) * s->f[j](w(c, 0)) +
                 s->b_hat[q](m) * s->f[j](w(c, -s->tau_hat[q](m))) +
                 s->I_hat[i](m) / static_cast<double>(s->n2);
        });
      } else {
        const std::size_t j = r - spec.n1, i = c;
        out.push_back([s, i, j](Step m, const StateView& w) {
          const std::size_t q = s->tilde(j, i);
          return s->a_tilde[q](m) * s->g[i](w(i, 0)) +
                 s->b_tilde[q](m) * s->g[i](w(i, -s->tau_tilde[q](m))) +
                 s->I_tilde[j](m) / static_cast<double>(s->n1);
        });
      }
    }
  }
  return out;
}

BAMSpec rescale_bam(const BAMSpec& spec, const std::vector<Rational>& d) {
  spec.validate();
  require_positive(d, spec.n1 + spec.n2);
  BAMSpec out = spec;
  for (std::size_t i = 0; i < spec.n1; ++i) {
    const Rational inv = Rational(1) / d[i];
    out.I_hat[i] = spec.I_hat[i].scaled(inv);
    out.g[i] = spec.g[i].scaled(d[i]);
    for (std::size_t j = 0; j < spec.n2; ++j) {
      const std::size_t q = spec.hat(i, j);
      out.a_hat[q] = spec.a_hat[q].scaled(inv);
      out.b_hat[q] = spec.b_hat[q].scaled(inv);
    }
  }
  for (std::size_t j = 0; j < spec.n2; ++j) {
    const Rational& dj = d[spec.n1 + j];
    const Rational inv = Rational(1) / dj;
    out.I_tilde[j] = spec.I_tilde[j].scaled(inv);
    out.f[j] = spec.f[j].scaled(dj);
    for (std::size_t i = 0; i < spec.n1; ++i) {
      const std::size_t q = spec.tilde(j, i);
      out.a_tilde[q] = spec.a_tilde[q].scaled(inv);
      out.b_tilde[q] = spec.b_tilde[q].scaled(inv);
    }
  }
  return out;
}

LipschitzData<Rational> lipschitz_data(const BAMSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n1 + spec.n2;
  LipschitzData<Rational> lip{Matrix<Rational>(n, n), {}};
  for (const auto& c : spec.c_hat) lip.c_plus.push_back(sup(c));
  for (const auto& c : spec.c_tilde) lip.c_plus.push_back(sup(c));
  for (std::size_t i = 0; i < spec.n1; ++i) {
    for (std::size_t j = 0; j < spec.n2; ++j) {
      const std::size_t q = spec.hat(i, j);
      const Rational w = sup(spec.a_hat[q]) + sup(spec.b_hat[q]);
      if (w != 0) lip.H(i, spec.n1 + j) = w * spec.f[j].lipschitz();
    }
  }
  for (std::size_t j = 0; j < spec.n2; ++j) {
    for (std::size_t i = 0; i < spec.n1; ++i) {
      const std::size_t q = spec.tilde(j, i);
      const Rational w = sup(spec.a_tilde[q]) + sup(spec.b_tilde[q]);
      if (w != 0) lip.H(spec.n1 + j, i) = w * spec.g[i].lipschitz();
    }
  }
  return lip;
}

// ---------------------------------------------------------------------------
// High-order Hopfield

HighOrderSpec HighOrderSpec::zeros(std::size_t n, Step tau) {
  HighOrderSpec s;
  s.n = n;
  s.tau = tau;
  s.c.assign(n, Coefficient{});
  s.a.assign(n * n, Coefficient{});
  s.b.assign(n * n * n, Coefficient{});
  s.tau_d.assign(n * n * n, Delay{});
  s.xi.assign(n * n * n, Delay{});
  s.f.assign(n, Activation::tanh());
  s.g.assign(n, Activation::tanh());
  s.g_bound.assign(n, Rational(1));
  return s;
}

Step HighOrderSpec::window_start() const {
  return -std::max({tau, max_delay(tau_d), max_delay(xi)});
}

std::optional<Step> HighOrderSpec::period() const {
  std::vector<std::optional<Step>> p;
  collect(p, c);
  collect(p, a);
  collect(p, b);
  collect(p, tau_d);
  collect(p, xi);
  return combined_period(p);
}

void HighOrderSpec::validate() const {
  if (n == 0) throw SpecError("high-order spec needs N >= 1");
  if (tau < 0) throw SpecError("leakage delay must be nonnegative");
  require_size(c, n, "c");
  require_size(a, n * n, "a");
  require_size(b, n * n * n, "b");
  require_size(tau_d, n * n * n, "tau");
  require_size(xi, n * n * n, "xi");
  require_size(f, n, "f");
  require_size(g, n, "g");
  require_size(g_bound, n, "g_bound");
  require_leakage(c, "c");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(g_bound[j] > 0)) throw SpecError("g_bound entries must be positive");
    const auto s = g[j].sup_abs();
    if (!s) throw SpecError("g[" + std::to_string(j) + "] (" + g[j].name() + ") is unbounded");
    if (*s > to_double(g_bound[j]) * (1.0 + 1e-15))
      throw SpecError("g_bound[" + std::to_string(j) + "] is below sup |g_j|");
  }
}

HighOrderSpec rescale_high_order(const HighOrderSpec& spec, const std::vector<Rational>& d) {
  spec.validate();
  require_positive(d, spec.n);
  HighOrderSpec out = spec;
  const std::size_t n = spec.n;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational inv = Rational(1) / d[i];
    out.f[i] = spec.f[i].scaled(d[i]);
    out.g[i] = spec.g[i].scaled(d[i]);
    for (std::size_t j = 0; j < n; ++j) {
      out.a[i * n + j] = spec.a[i * n + j].scaled(inv);
      for (std::size_t l = 0; l < n; ++l) out.b[spec.index(i, j, l)] = spec.b[spec.index(i, j, l)].scaled(inv);
    }
  }
  return out;
}

SystemDefinition lower_high_order(const HighOrderSpec& spec, const std::vector<Rational>& d) {
  if (!d.empty()) return lower_high_order(rescale_high_order(spec, d));
  spec.validate();
  require_lipschitz(spec.f, "f");
  require_lipschitz(spec.g, "g");
  auto s = std::make_shared<const HighOrderSpec>(spec);
  SystemDefinition sys = base_system(spec.n, spec.tau, spec.window_start(), spec.period(), spec.c);
  sys.nonlinearity = [s](std::size_t i, Step m, const StateView& w) {
    const std::size_t n = s->n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += s->a[i * n + j](m) * s->f[j](w(j, 0));
      for (std::size_t l = 0; l < n; ++l) {
        const std::size_t q = s->index(i, j, l);
        acc += s->b[q](m) * s->g[j](w(j, -s->tau_d[q](m))) * s->g[l](w(l, -s->xi[q](m)));
      }
    }
    return acc;
  };
  return sys;
}

std::vector<PairwiseTerm> pairwise_terms(const HighOrderSpec& spec) {
  spec.validate();
  auto s = std::make_shared<const HighOrderSpec>(spec);
  std::vector<PairwiseTerm> out;
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      out.push_back([s, i, j](Step m, const StateView& w) {
        const std::size_t n = s->n;
        double acc = s->a[i * n + j](m) * s->f[j](w(j, 0));
        for (std::size_t l = 0; l < n; ++l) {
          const std::size_t q = s->index(i, j, l);
          acc += s->b[q](m) * s->g[j](w(j, -s->tau_d[q](m))) * s->g[l](w(l, -s->xi[q](m)));
        }
        return acc;
      });
    }
  }
  return out;
}

LipschitzData<Rational> lipschitz_data(const HighOrderSpec& spec, const std::vector<Rational>& d) {
  spec.validate();
  const std::size_t n = spec.n;
  std::vector<Rational> dd = d.empty() ? std::vector<Rational>(n, Rational(1)) : d;
  require_positive(dd, n);
  LipschitzData<Rational> lip{Matrix<Rational>(n, n), {}};
  for (std::size_t i = 0; i < n; ++i) {
    lip.c_plus.push_back(sup(spec.c[i]));
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc(0);
      if (!spec.a[i * n + j].is_zero()) acc += sup(spec.a[i * n + j]) * dd[j] * spec.f[j].lipschitz();
      for (std::size_t l = 0; l < n; ++l) {
        const Coefficient& b = spec.b[spec.index(i, j, l)];
        if (b.is_zero()) continue;
        acc += sup(b) * (spec.g_bound[j] * dd[l] * spec.g[l].lipschitz() +
                         spec.g_bound[l] * dd[j] * spec.g[j].lipschitz());
      }
      lip.H(i, j) = acc / dd[i];
    }
  }
  return lip;
}

// ---------------------------------------------------------------------------

SystemDefinition lower(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> SystemDefinition {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, HopfieldSpec>)
          return lower_hopfield(s);
        else if constexpr (std::is_same_v<S, BAMSpec>)
          return lower_bam(s);
        else
          return lower_high_order(s);
      },
      spec);
}

LipschitzData<Rational> lipschitz_data(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return lipschitz_data(s); }, spec);
}

std::size_t channel_count(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BAMSpec>)
          return s.n1 + s.n2;
        else
          return s.n;
      },
      spec);
}

}  // namespace delaystab
