#include "delaystab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "delaystab/errors.hpp"

namespace delaystab {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(const Rational&) { return true; }

bool strictly_positive(double v) { return v > kFloatMarginTolerance; }
bool strictly_positive(const Rational& v) { return v > 0; }

void record_exact(std::vector<std::string>&, const std::vector<double>&) {}
void record_exact(std::vector<std::string>& out, const std::vector<Rational>& values) {
  out.clear();
  for (const auto& v : values) out.push_back(to_string(v));
}

double as_double(double v) { return v; }
double as_double(const Rational& v) { return to_double(v); }

std::vector<double> as_double(const std::vector<double>& v) { return v; }
std::vector<double> as_double(const std::vector<Rational>& v) { return to_double(v); }

LipschitzData<double> as_double(const LipschitzData<double>& lip) { return lip; }
LipschitzData<double> as_double(const LipschitzData<Rational>& lip) { return to_double(lip); }

double residue_exponent(Step r, Step residue, Step tau) {
  return static_cast<double>(r - residue - 1) / static_cast<double>(tau + 1);
}

void check_lambda_inputs(const LambdaInputs& in, double c, Step n_max) {
  if (!(c > 0.0 && c <= 1.0)) throw DomainError("lambda scan needs c in (0, 1]");
  if (n_max < 1) throw DomainError("lambda scan needs n_max >= 1");
  if (in.tau < 0 || in.window_start > -in.tau)
    throw DomainError("lambda scan needs tau >= 0 and r <= -tau");
  if (!in.leak_magnitude || !in.lipschitz)
    throw ConfigError("lambda scan needs |c_i(m)| and H_i(m) callables");
}

// Partial sums for one (i, s) up to `count` terms.
std::vector<double> partial_sums(const LambdaInputs& in, double c, std::size_t i, Step s,
                                 Step count) {
  const Step block = in.tau + 1;
  const double weight = std::pow(c, residue_exponent(in.window_start, s, in.tau));
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(count));
  double S = 0.0;
  for (Step n = 1; n <= count; ++n) {
    const Step t = (n - 1) * block + in.tau - s;
    const double leak = in.leak_magnitude(i, t);
    if (leak > c)
      throw HypothesisError("|c_" + std::to_string(i) + "(" + std::to_string(t) + ")| = " +
                            std::to_string(leak) + " exceeds c = " + std::to_string(c));
    S = (leak / c) * S + in.lipschitz(i, t) * weight;
    sums.push_back(S);
  }
  return sums;
}

}  // namespace

// ---------------------------------------------------------------------------

template <class T>
std::vector<T> LipschitzData<T>::row_sums() const {
  std::vector<T> sums(H.rows(), T(0));
  for (std::size_t i = 0; i < H.rows(); ++i)
    for (std::size_t j = 0; j < H.cols(); ++j) sums[i] += H(i, j);
  return sums;
}

template <class T>
void LipschitzData<T>::validate() const {
  const std::size_t n = c_plus.size();
  if (n == 0 || H.rows() != n || H.cols() != n)
    throw SpecError("Lipschitz data: H must be N x N with N = |c_plus| > 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (!finite(c_plus[i]) || c_plus[i] < 0 || !(c_plus[i] < 1))
      throw SpecError("Lipschitz data: c_plus[" + std::to_string(i) + "] must lie in [0, 1)");
    for (std::size_t j = 0; j < n; ++j)
      if (!finite(H(i, j)) || H(i, j) < 0)
        throw SpecError("Lipschitz data: H entries must be finite and nonnegative");
  }
}

template struct LipschitzData<double>;
template struct LipschitzData<Rational>;

LipschitzData<double> to_double(const LipschitzData<Rational>& lip) {
  return LipschitzData<double>{to_double(lip.H), to_double(lip.c_plus)};
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Certified: return "Certified";
    case Verdict::NotCertified: return "NotCertified";
    case Verdict::UniformOnly: return "UniformOnly";
  }
  return "NotCertified";
}

// ---------------------------------------------------------------------------

std::vector<double> lambda_partial_sums(const LambdaInputs& inputs, double c, std::size_t channel,
                                        Step residue, Step n_max) {
  check_lambda_inputs(inputs, c, n_max);
  if (channel >= inputs.n_channels || residue < 0 || residue > inputs.tau)
    throw IndexError("lambda_partial_sums: channel or residue out of range");
  return partial_sums(inputs, c, channel, residue, n_max);
}

LambdaEstimate lambda_numeric(const LambdaInputs& inputs, double c, Step n_max) {
  check_lambda_inputs(inputs, c, n_max);
  const Step block = inputs.tau + 1;

  // With coefficients of period omega in m, the multipliers along a residue
  // class repeat every p = omega / gcd(omega, tau+1) terms, so S(n + p) = A S(n) + B_n
  // is an affine map with a phase-independent A and S converges monotonically
  // to B_n / (1 - A) along each phase.
  std::optional<Step> cycle;
  if (inputs.period && *inputs.period > 0) {
    const Step p = *inputs.period / std::gcd(*inputs.period, block);
    if (p <= 1'000'000) cycle = p;
  }
  const Step scan = cycle ? std::max(n_max, 2 * *cycle) : n_max;

  LambdaEstimate est;
  est.value = -1.0;
  double exact_sup = 0.0;
  bool sup_known = true;
  for (std::size_t i = 0; i < inputs.n_channels; ++i) {
    for (Step s = 0; s <= inputs.tau; ++s) {
      const std::vector<double> S = partial_sums(inputs, c, i, s, scan);
      for (Step n = 1; n <= n_max; ++n) {
        const double v = S[static_cast<std::size_t>(n - 1)];
        if (v > est.value) {
          est.value = v;
          est.channel = i;
          est.residue = s;
          est.n_at_max = n;
        }
      }
      const double scanned = *std::max_element(S.begin(), S.end());

      if (cycle) {
        const Step p = *cycle;
        double A = 1.0;
        for (Step q = 0; q < p; ++q) {
          const Step t = q * block + inputs.tau - s;
          A *= inputs.leak_magnitude(i, t) / c;
        }
        double limit = scanned;
        for (Step n0 = 1; n0 <= p; ++n0) {
          const double before = S[static_cast<std::size_t>(n0 - 1)];
          const double after = S[static_cast<std::size_t>(n0 - 1 + p)];
          const double B = after - A * before;
          if (A >= 1.0) {
            if (B > 0.0) limit = std::numeric_limits<double>::infinity();
          } else {
            limit = std::max(limit, B / (1.0 - A));
          }
        }
        exact_sup = std::max(exact_sup, limit);
      } else if (inputs.leak_sup.size() == inputs.n_channels &&
                 inputs.lipschitz_sup.size() == inputs.n_channels) {
        const double ratio = inputs.leak_sup[i] / c;
        const double weight = std::pow(c, residue_exponent(inputs.window_start, s, inputs.tau));
        const double envelope = ratio < 1.0 ? inputs.lipschitz_sup[i] * weight / (1.0 - ratio)
                                            : std::numeric_limits<double>::infinity();
        exact_sup = std::max({exact_sup, envelope, scanned});
      } else {
        sup_known = false;
      }
    }
  }
  est.tail_allowance = sup_known ? std::max(0.0, exact_sup - est.value)
                                 : std::numeric_limits<double>::infinity();
  return est;
}

StabilityCertificate certify_lambda(const LambdaInputs& inputs, double c, Step n_max) {
  const LambdaEstimate est = lambda_numeric(inputs, c, n_max);
  StabilityCertificate cert;
  cert.route = "lambda-scan";
  cert.c = c;
  cert.mu = -std::log(c);
  cert.lambda_numeric = est.value;
  cert.tail_allowance = est.tail_allowance;
  cert.lambda_bound = est.value + est.tail_allowance;
  if (!(cert.lambda_bound < 1.0)) return cert;
  if (c < 1.0) {
    cert.verdict = Verdict::Certified;
    const double block = static_cast<double>(inputs.tau + 1);
    cert.zeta = std::pow(c, 1.0 / block);
    cert.C = std::pow(c, static_cast<double>(inputs.window_start) / block - 1.0) /
             (1.0 - cert.lambda_bound);
    cert.C_original = cert.C;
  } else {
    cert.verdict = Verdict::UniformOnly;
  }
  return cert;
}

// ---------------------------------------------------------------------------

std::vector<double> choose_nu(const LipschitzData<double>& lip) {
  const std::vector<double> h = lip.row_sums();
  std::vector<double> nu(lip.size());
  for (std::size_t i = 0; i < lip.size(); ++i) {
    if (lip.c_plus[i] > 0.0) {
      nu[i] = -std::log(lip.c_plus[i]);
    } else {
      if (!(h[i] < 1.0))
        throw DomainError("choose_nu: row " + std::to_string(i) + " violates row dominance");
      nu[i] = -std::log((1.0 - h[i]) / 2.0);
    }
  }
  return nu;
}

bool mu_feasible(const LipschitzData<double>& lip, const std::vector<double>& nu, Step tau, Step r,
                 double mu) {
  const std::vector<double> h = lip.row_sums();
  const double history = std::exp(mu * static_cast<double>(r) / static_cast<double>(tau + 1));
  for (std::size_t i = 0; i < lip.size(); ++i)
    if (!((std::exp(-mu) - std::exp(-nu[i])) * history > h[i])) return false;
  return true;
}

namespace {

double lambda_envelope(const std::vector<double>& h, const std::vector<double>& nu, Step tau,
                       Step r, double mu) {
  const double block = static_cast<double>(tau + 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == 0.0) continue;
    worst = std::max(worst, h[i] * std::exp(-mu * static_cast<double>(r) / block) /
                                (std::exp(-mu) - std::exp(-nu[i])));
  }
  return worst;
}

MuSearchResult constants_at(std::vector<double> nu, double mu, double lambda, Step tau, Step r) {
  const double block = static_cast<double>(tau + 1);
  MuSearchResult out;
  out.nu = std::move(nu);
  out.mu = mu;
  out.c = std::exp(-mu);
  out.zeta = std::exp(-mu / block);
  out.lambda_bound = lambda;
  out.C = std::exp(-mu * (static_cast<double>(r) / block - 1.0)) / (1.0 - lambda);
  return out;
}

}  // namespace

MuSearchResult decay_constants(const LipschitzData<double>& lip, Step tau, Step r, double mu) {
  lip.validate();
  if (tau < 0 || r > -tau) throw DomainError("decay_constants needs tau >= 0 and r <= -tau");
  std::vector<double> nu = choose_nu(lip);
  const double nu_min = *std::min_element(nu.begin(), nu.end());
  if (!(mu > 0.0 && mu < nu_min)) throw DomainError("decay_constants: mu outside (0, min nu)");
  if (!mu_feasible(lip, nu, tau, r, mu)) throw DomainError("decay_constants: mu is infeasible");
  const double lambda = lambda_envelope(lip.row_sums(), nu, tau, r, mu);
  if (!(lambda < 1.0)) throw DomainError("decay_constants: lambda envelope is not below 1");
  return constants_at(std::move(nu), mu, lambda, tau, r);
}

MuSearchResult mu_search(const LipschitzData<double>& lip, Step tau, Step r) {
  lip.validate();
  if (tau < 0 || r > -tau) throw DomainError("mu_search needs tau >= 0 and r <= -tau");
  std::vector<double> nu = choose_nu(lip);
  const double nu_min = *std::min_element(nu.begin(), nu.end());
  const std::vector<double> h = lip.row_sums();

  double lo = 0.0;
  double hi = nu_min;
  for (int it = 0; it < 400 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mu_feasible(lip, nu, tau, r, mid))
      lo = mid;
    else
      hi = mid;
  }
  if (!(lo > 0.0) || !mu_feasible(lip, nu, tau, r, lo))
    throw InternalError("mu_search: no feasible mu although row dominance was asserted");

  double lambda = lambda_envelope(h, nu, tau, r, lo);
  for (int back = 0; back < 64 && !(lambda < 1.0); ++back) {
    lo *= 1.0 - 1e-10;
    lambda = lambda_envelope(h, nu, tau, r, lo);
  }
  if (!(lambda < 1.0)) throw InternalError("mu_search: lambda envelope did not drop below 1");
  return constants_at(std::move(nu), lo, lambda, tau, r);
}

template <class T>
std::vector<T> row_dominance_margins(const LipschitzData<T>& lip) {
  lip.validate();
  const std::vector<T> h = lip.row_sums();
  std::vector<T> margins(lip.size());
  for (std::size_t i = 0; i < lip.size(); ++i) margins[i] = T(1) - lip.c_plus[i] - h[i];
  return margins;
}

template <class T>
StabilityCertificate certify_row_dominance(const LipschitzData<T>& lip, Step tau, Step r,
                                           const LeakageProfile* profile, Step n_max) {
  const std::vector<T> margins = row_dominance_margins(lip);
  StabilityCertificate cert;
  cert.route = "row-dominance";
  cert.per_row_margin = as_double(margins);
  record_exact(cert.exact_margin, margins);
  const bool dominant = std::all_of(margins.begin(), margins.end(),
                                    [](const T& v) { return strictly_positive(v); });
  if (!dominant) return cert;

  const LipschitzData<double> flt = as_double(lip);
  const MuSearchResult mu = mu_search(flt, tau, r);
  cert.verdict = Verdict::Certified;
  cert.mu = mu.mu;
  cert.nu = mu.nu;
  cert.c = mu.c;
  cert.zeta = mu.zeta;
  cert.C = mu.C;
  cert.C_original = mu.C;
  cert.lambda_bound = mu.lambda_bound;

  const std::vector<double> h = flt.row_sums();
  LambdaInputs inputs;
  inputs.n_channels = lip.size();
  inputs.tau = tau;
  inputs.window_start = r;
  inputs.lipschitz = [h](std::size_t i, Step) { return h[i]; };
  if (profile && profile->magnitude) {
    inputs.leak_magnitude = profile->magnitude;
    inputs.period = profile->period;
  } else {
    const std::vector<double> cp = flt.c_plus;
    inputs.leak_magnitude = [cp](std::size_t i, Step) { return cp[i]; };
    inputs.period = 1;
  }
  inputs.leak_sup = flt.c_plus;
  inputs.lipschitz_sup = h;
  const LambdaEstimate est = lambda_numeric(inputs, mu.c, n_max);
  cert.lambda_numeric = est.value;
  cert.tail_allowance = est.tail_allowance;
  return cert;
}

// ---------------------------------------------------------------------------

template <class T>
MMatrixReport<T> certify_m_matrix(const Matrix<T>& m) {
  if (!m.is_square() || m.rows() == 0) throw ShapeError("certify_m_matrix: matrix must be square");
  const std::size_t n = m.rows();
  const double tolerance = std::is_same_v<T, double> ? 1e-12 * as_double(infinity_norm(m)) : 0.0;

  MMatrixReport<T> report;
  report.is_z_matrix = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && m(i, j) > T(0)) report.is_z_matrix = false;

  bool minors_positive = true;
  for (std::size_t k = 1; k <= n; ++k) {
    report.leading_minors.push_back(determinant(m.leading_block(k), tolerance));
    if (!(report.leading_minors.back() > T(0))) {
      if (minors_positive)
        report.note = report.leading_minors.back() == T(0)
                          ? "leading minor " + std::to_string(k) + " is singular within tolerance"
                          : "leading minor " + std::to_string(k) + " is negative";
      minors_positive = false;
    }
  }
  if (!report.is_z_matrix) report.note = "not a Z-matrix (positive off-diagonal entry)";
  if (!report.is_z_matrix || !minors_positive) return report;

  auto d = solve(m, std::vector<T>(n, T(1)), tolerance);
  if (!d) {
    report.note = "witness solve hit a singular pivot";
    return report;
  }
  const std::vector<T> md = multiply(m, *d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!((*d)[i] > T(0)) || !(md[i] > T(0))) {
      report.note = "witness d = M^{-1} 1 failed the positivity check";
      return report;
    }
  }
  report.is_nonsingular_m = true;
  report.witness_d = std::move(d);
  return report;
}

template <class T>
LipschitzData<T> rescale_by_witness(const LipschitzData<T>& lip, const std::vector<T>& d) {
  lip.validate();
  if (d.size() != lip.size()) throw ShapeError("rescale_by_witness: witness has wrong length");
  for (const auto& v : d)
    if (!(v > T(0))) throw DomainError("rescale_by_witness: witness entries must be positive");
  LipschitzData<T> out = lip;
  for (std::size_t i = 0; i < lip.size(); ++i)
    for (std::size_t j = 0; j < lip.size(); ++j) out.H(i, j) = lip.H(i, j) * d[j] / d[i];
  return out;
}

template <class T>
Matrix<T> comparison_matrix(const LipschitzData<T>& lip) {
  lip.validate();
  const std::size_t n = lip.size();
  Matrix<T> m = Matrix<T>::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) -= lip.c_plus[i];
    for (std::size_t j = 0; j < n; ++j) m(i, j) -= lip.H(i, j);
  }
  return m;
}

template std::vector<double> row_dominance_margins(const LipschitzData<double>&);
template std::vector<Rational> row_dominance_margins(const LipschitzData<Rational>&);
template StabilityCertificate certify_row_dominance(const LipschitzData<double>&, Step, Step,
                                                    const LeakageProfile*, Step);
template StabilityCertificate certify_row_dominance(const LipschitzData<Rational>&, Step, Step,
                                                    const LeakageProfile*, Step);
template MMatrixReport<double> certify_m_matrix(const Matrix<double>&);
template MMatrixReport<Rational> certify_m_matrix(const Matrix<Rational>&);
template LipschitzData<double> rescale_by_witness(const LipschitzData<double>&,
                                                  const std::vector<double>&);
template LipschitzData<Rational> rescale_by_witness(const LipschitzData<Rational>&,
                                                    const std::vector<Rational>&);
template Matrix<double> comparison_matrix(const LipschitzData<double>&);
template Matrix<Rational> comparison_matrix(const LipschitzData<Rational>&);

}  // namespace delaystab
