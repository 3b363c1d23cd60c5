#include "delaystab/model_certificates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <type_traits>

#include "delaystab/errors.hpp"

namespace delaystab {

Matrix<Rational> hopfield_m_matrix(const HopfieldSpec& spec) {
  return comparison_matrix(lipschitz_data(spec));
}

Matrix<Rational> bam_p_matrix(const BAMSpec& spec) {
  spec.validate();
  const std::size_t n1 = spec.n1, n2 = spec.n2;
  Matrix<Rational> p = Matrix<Rational>::identity(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) p(i, i) -= spec.c_hat[i].analytic_sup();
  for (std::size_t j = 0; j < n2; ++j) p(n1 + j, n1 + j) -= spec.c_tilde[j].analytic_sup();
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t q = spec.hat(i, j);
      const Rational u = spec.a_hat[q].analytic_sup() + spec.b_hat[q].analytic_sup();
      if (u != 0) p(i, n1 + j) = -(u * spec.f[j].lipschitz());
    }
  }
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) {
      const std::size_t q = spec.tilde(j, i);
      const Rational s = spec.a_tilde[q].analytic_sup() + spec.b_tilde[q].analytic_sup();
      if (s != 0) p(n1 + j, i) = -(s * spec.g[i].lipschitz());
    }
  }
  return p;
}

Matrix<Rational> high_order_comparison_matrix(const HighOrderSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  Matrix<Rational> q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    q(i, i) = Rational(1) - spec.c[i].analytic_sup();
    for (std::size_t k = 0; k < n; ++k) {
      Rational w(0);
      const Coefficient& a = spec.a[i * n + k];
      if (!a.is_zero()) w += spec.f[k].lipschitz() * a.analytic_sup();
      Rational coupled(0);
      for (std::size_t j = 0; j < n; ++j) {
        const Coefficient& b = spec.b[spec.index(i, j, k)];
        if (!b.is_zero()) coupled += b.analytic_sup() * spec.g_bound[j];
      }
      for (std::size_t l = 0; l < n; ++l) {
        const Coefficient& b = spec.b[spec.index(i, k, l)];
        if (!b.is_zero()) coupled += b.analytic_sup() * spec.g_bound[l];
      }
      if (coupled != 0) w += spec.g[k].lipschitz() * coupled;
      q(i, k) -= w;
    }
  }
  return q;
}

std::vector<Rational> high_order_condition(const HighOrderSpec& spec, const std::vector<Rational>& d) {
  spec.validate();
  const std::size_t n = spec.n;
  if (d.size() != n) throw ShapeError("high_order_condition: d has the wrong length");
  for (const auto& v : d)
    if (!(v > 0)) throw DomainError("high_order_condition: d must be positive");
  std::vector<Rational> margin(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational rhs(0);
    for (std::size_t j = 0; j < n; ++j) {
      const Coefficient& a = spec.a[i * n + j];
      if (!a.is_zero()) rhs += d[j] * spec.f[j].lipschitz() * a.analytic_sup();
      for (std::size_t l = 0; l < n; ++l) {
        const Coefficient& b = spec.b[spec.index(i, j, l)];
        if (b.is_zero()) continue;
        rhs += b.analytic_sup() * (spec.g_bound[j] * d[l] * spec.g[l].lipschitz() +
                                   spec.g_bound[l] * d[j] * spec.g[j].lipschitz());
      }
    }
    margin[i] = d[i] * (Rational(1) - spec.c[i].analytic_sup()) - rhs;
  }
  return margin;
}

std::optional<std::vector<Rational>> high_order_witness(const HighOrderSpec& spec) {
  const auto report = certify_m_matrix(high_order_comparison_matrix(spec));
  if (!report.witness_d) return std::nullopt;
  const auto margins = high_order_condition(spec, *report.witness_d);
  if (!std::all_of(margins.begin(), margins.end(), [](const Rational& v) { return v > 0; }))
    return std::nullopt;
  return report.witness_d;
}

namespace {

struct RouteInputs {
  std::string matrix_name;
  Matrix<Rational> matrix;
  LipschitzData<Rational> lipschitz;
  /// Lipschitz data in y = x / d coordinates.
  std::function<LipschitzData<Rational>(const std::vector<Rational>&)> rescaled;
  /// Extra acceptance test on a witness.
  std::function<bool(const std::vector<Rational>&)> accept;
  SystemDefinition system;
};

RouteInputs route_inputs(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> RouteInputs {
        using S = std::decay_t<decltype(s)>;
        RouteInputs in;
        if constexpr (std::is_same_v<S, HopfieldSpec>) {
          in.matrix_name = "M";
          in.lipschitz = lipschitz_data(s);
          in.matrix = comparison_matrix(in.lipschitz);
          auto lip = in.lipschitz;
          in.rescaled = [lip](const std::vector<Rational>& d) { return rescale_by_witness(lip, d); };
          in.system = lower_hopfield(s);
        } else if constexpr (std::is_same_v<S, BAMSpec>) {
          in.matrix_name = "P";
          in.lipschitz = lipschitz_data(s);
          in.matrix = bam_p_matrix(s);
          auto lip = in.lipschitz;
          in.rescaled = [lip](const std::vector<Rational>& d) { return rescale_by_witness(lip, d); };
          in.system = lower_bam(s);
        } else {
          in.matrix_name = "Q";
          in.lipschitz = lipschitz_data(s);
          in.matrix = high_order_comparison_matrix(s);
          in.rescaled = [s](const std::vector<Rational>& d) { return lipschitz_data(s, d); };
          in.accept = [s](const std::vector<Rational>& d) {
            const auto m = high_order_condition(s, d);
            return std::all_of(m.begin(), m.end(), [](const Rational& v) { return v > 0; });
          };
          in.system = lower_high_order(s);
        }
        return in;
      },
      spec);
}

}  // namespace

ModelCertificate certify_model(const ModelSpec& spec) {
  RouteInputs in = route_inputs(spec);
  ModelCertificate out;
  out.matrix_name = in.matrix_name;
  out.matrix = in.matrix;
  out.matrix_report = certify_m_matrix(in.matrix);
  out.lipschitz = in.lipschitz;
  out.tau = in.system.leakage_delay;
  out.window_start = in.system.window_start;
  out.period = in.system.period;

  LeakageProfile profile;
  const auto leak = in.system.leakage;
  profile.magnitude = [leak](std::size_t i, Step m) { return std::abs(leak(i, m)); };
  profile.period = in.system.period;

  StabilityCertificate raw =
      certify_row_dominance(in.lipschitz, out.tau, out.window_start, &profile);
  if (raw.certified()) {
    out.certificate = std::move(raw);
    return out;
  }

  const auto& d = out.matrix_report.witness_d;
  if (d && (!in.accept || in.accept(*d))) {
    StabilityCertificate cert =
        certify_row_dominance(in.rescaled(*d), out.tau, out.window_start, &profile);
    cert.route = in.matrix_name + "-witness";
    cert.witness_d = to_double(*d);
    cert.exact_witness_d.clear();
    for (const auto& v : *d) cert.exact_witness_d.push_back(to_string(v));
    if (cert.certified()) {
      const auto [lo, hi] = std::minmax_element(d->begin(), d->end());
      cert.C_original = cert.C * to_double(*hi / *lo);
    }
    out.witness = d;
    out.certificate = std::move(cert);
    return out;
  }

  // Neither route: report the raw margins.
  out.certificate = std::move(raw);
  return out;
}

}  // namespace delaystab
