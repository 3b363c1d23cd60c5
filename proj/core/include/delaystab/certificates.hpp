#pragma once

// Stability-certificate algebra for x_i(m+1) = c_i(m) x_i(m-tau) + h_i(m, xbar_m).
//
// Everything that can be exact is templated on the scalar: T = Rational gives
// the exact path (verdicts use margin > 0), T = double the float path
// (verdicts use margin > 1e-12). Decay constants always come out in double.

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delaystab/matrix.hpp"
#include "delaystab/rational.hpp"
#include "delaystab/state.hpp"

namespace delaystab {

/// Constant Lipschitz data of a general neural-network type model:
/// |h_ij(m, a) - h_ij(m, b)| <= H_ij |a - b| and c_plus_i = sup_m |c_i(m)|.
template <class T>
struct LipschitzData {
  Matrix<T> H;
  std::vector<T> c_plus;

  std::size_t size() const noexcept { return c_plus.size(); }
  /// H_i = sum_j H_ij.
  std::vector<T> row_sums() const;
  /// Throws SpecError unless H is N x N with entries >= 0 and c_plus in [0, 1).
  void validate() const;
};

LipschitzData<double> to_double(const LipschitzData<Rational>& lip);

enum class Verdict { Certified, NotCertified, UniformOnly };
std::string_view to_string(Verdict verdict);

inline constexpr double kFloatMarginTolerance = 1e-12;

struct StabilityCertificate {
  Verdict verdict = Verdict::NotCertified;
  std::string route;
  /// 1 - c_i^+ - sum_j H_ij of the data the verdict was taken on.
  std::vector<double> per_row_margin;
  /// Same margins as "p/q" strings when computed exactly.
  std::vector<std::string> exact_margin;
  std::optional<std::vector<double>> witness_d;
  std::vector<std::string> exact_witness_d;

  double mu = 0.0;
  std::vector<double> nu;
  double c = 1.0;
  double zeta = std::numeric_limits<double>::quiet_NaN();
  /// c^(r/(tau+1)-1) / (1 - lambda_bound), valid in the coordinates the
  /// margins were computed in (rescaled coordinates y = x / d for witness routes).
  double C = std::numeric_limits<double>::quiet_NaN();
  /// C * max(d) / min(d): the constant valid for the original coordinates.
  double C_original = std::numeric_limits<double>::quiet_NaN();
  double lambda_bound = std::numeric_limits<double>::infinity();
  double lambda_numeric = std::numeric_limits<double>::quiet_NaN();
  double tail_allowance = std::numeric_limits<double>::infinity();

  bool certified() const noexcept { return verdict == Verdict::Certified; }
};

// ---------------------------------------------------------------------------
// lambda of the decay hypothesis

/// Inputs of the lambda scan. `leak_magnitude(i, m)` = |c_i(m)| and
/// `lipschitz(i, m)` = H_i(m). `period` (when both functions are periodic in m)
/// lets the scan compute the supremum over n exactly; otherwise the optional
/// sup vectors give a geometric envelope for the tail.
struct LambdaInputs {
  std::size_t n_channels = 1;
  Step tau = 0;
  Step window_start = 0;
  std::function<double(std::size_t, Step)> leak_magnitude;
  std::function<double(std::size_t, Step)> lipschitz;
  std::optional<Step> period;
  std::vector<double> leak_sup;
  std::vector<double> lipschitz_sup;
};

struct LambdaEstimate {
  /// max over i, s in [0,tau], n in [1, n_max] of the lambda inner sum.
  double value = 0.0;
  /// lambda <= value + tail_allowance (infinite when no bound is available).
  double tail_allowance = std::numeric_limits<double>::infinity();
  std::size_t channel = 0;
  Step residue = 0;
  Step n_at_max = 1;
};

/// Partial sums S(1..n_max) for one (channel, residue), where
/// S(n) = sum_{l<n} prod_{l<k<n} |c_i(t_k)| H_i(t_l) c^(l + (r-s-1)/(tau+1) - n + 1)
/// and t_k = k(tau+1) + tau - s. Computed by the recursion
/// S(n) = (|c_i(t_{n-1})| / c) S(n-1) + H_i(t_{n-1}) c^((r-s-1)/(tau+1)).
std::vector<double> lambda_partial_sums(const LambdaInputs& inputs, double c, std::size_t channel,
                                        Step residue, Step n_max);

/// Throws HypothesisError when some sampled |c_i(m)| exceeds c, DomainError
/// for c outside (0, 1] or n_max < 1.
LambdaEstimate lambda_numeric(const LambdaInputs& inputs, double c, Step n_max = 200);

/// Direct lambda route for the general equation with a caller-chosen c:
/// Certified when lambda_numeric + tail < 1 and c < 1, UniformOnly when c = 1.
StabilityCertificate certify_lambda(const LambdaInputs& inputs, double c, Step n_max = 200);

// ---------------------------------------------------------------------------
// Row dominance 1 - c_i^+ > sum_j H_ij and the mu search

struct MuSearchResult {
  double mu = 0.0;
  std::vector<double> nu;
  double c = 1.0;
  double zeta = 1.0;
  double C = 0.0;
  double lambda_bound = 0.0;
};

/// nu_i = -ln(c_i^+), or -ln((1 - H_i) / 2) when c_i^+ = 0.
std::vector<double> choose_nu(const LipschitzData<double>& lip);

/// (e^(nu_i - mu) - 1) / e^(nu_i) * e^(mu r / (tau+1)) > H_i for every row.
bool mu_feasible(const LipschitzData<double>& lip, const std::vector<double>& nu, Step tau, Step r,
                 double mu);

/// Decay constants c, zeta, lambda_bound and C implied by one feasible mu.
/// Throws DomainError when mu is outside (0, min nu_i) or infeasible.
MuSearchResult decay_constants(const LipschitzData<double>& lip, Step tau, Step r, double mu);

/// Largest feasible mu in (0, min nu_i), by bisection to relative 1e-12, and
/// the decay constants it implies. Precondition: row dominance holds.
/// Throws InternalError when no feasible mu exists.
MuSearchResult mu_search(const LipschitzData<double>& lip, Step tau, Step r);

template <class T>
std::vector<T> row_dominance_margins(const LipschitzData<T>& lip);

/// Optional time profile |c_i(m)| used for the lambda_numeric diagnostic.
/// Without it the scan uses the constant bounds c_i^+.
struct LeakageProfile {
  std::function<double(std::size_t, Step)> magnitude;
  std::optional<Step> period;
};

template <class T>
StabilityCertificate certify_row_dominance(const LipschitzData<T>& lip, Step tau, Step r,
                                           const LeakageProfile* profile = nullptr,
                                           Step n_max = 200);

// ---------------------------------------------------------------------------
// Nonsingular M-matrices

template <class T>
struct MMatrixReport {
  bool is_z_matrix = false;
  std::vector<T> leading_minors;
  bool is_nonsingular_m = false;
  /// Solution of M d = 1, present iff is_nonsingular_m.
  std::optional<std::vector<T>> witness_d;
  std::string note;
};

/// Z-pattern check, leading principal minors, and witness d = M^{-1} 1.
/// The float path treats pivots below 1e-12 * |M|_inf as zero.
template <class T>
MMatrixReport<T> certify_m_matrix(const Matrix<T>& m);

/// H~_ij = H_ij d_j / d_i, c_plus unchanged. Throws DomainError unless d > 0.
template <class T>
LipschitzData<T> rescale_by_witness(const LipschitzData<T>& lip, const std::vector<T>& d);

/// I - diag(c_plus) - H.
template <class T>
Matrix<T> comparison_matrix(const LipschitzData<T>& lip);

extern template struct LipschitzData<double>;
extern template struct LipschitzData<Rational>;
extern template std::vector<double> row_dominance_margins(const LipschitzData<double>&);
extern template std::vector<Rational> row_dominance_margins(const LipschitzData<Rational>&);
extern template StabilityCertificate certify_row_dominance(const LipschitzData<double>&, Step, Step,
                                                           const LeakageProfile*, Step);
extern template StabilityCertificate certify_row_dominance(const LipschitzData<Rational>&, Step,
                                                           Step, const LeakageProfile*, Step);
extern template MMatrixReport<double> certify_m_matrix(const Matrix<double>&);
extern template MMatrixReport<Rational> certify_m_matrix(const Matrix<Rational>&);
extern template LipschitzData<double> rescale_by_witness(const LipschitzData<double>&,
                                                         const std::vector<double>&);
extern template LipschitzData<Rational> rescale_by_witness(const LipschitzData<Rational>&,
                                                           const std::vector<Rational>&);
extern template Matrix<double> comparison_matrix(const LipschitzData<double>&);
extern template Matrix<Rational> comparison_matrix(const LipschitzData<Rational>&);

}  // namespace delaystab
