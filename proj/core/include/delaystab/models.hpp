#pragma once

// Low-order Hopfield, BAM and high-order Hopfield network specs with leakage
// delay, their lowering to SystemDefinition, the d-rescaling y = x / d, and
// the constant Lipschitz data each family induces.

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "delaystab/certificates.hpp"
#include "delaystab/descriptors.hpp"
#include "delaystab/state.hpp"

namespace delaystab {

/// x_i(m+1) = c_i(m) x_i(m-tau) + sum_j sum_k b_ijk(m) f_ijk(x_j(m - tau_ijk(m))) + I_i(m).
struct HopfieldSpec {
  std::size_t n = 1;
  std::size_t k = 1;
  Step tau = 0;
  std::vector<Coefficient> leakage;     // c_i
  std::vector<Coefficient> weights;     // b_ijk at index(i, j, k)
  std::vector<Delay> delays;            // tau_ijk
  std::vector<Activation> activations;  // f_ijk
  std::vector<Coefficient> inputs;      // I_i

  /// Zero weights, zero delays, identity activations.
  static HopfieldSpec zeros(std::size_t n, std::size_t k, Step tau);

  std::size_t index(std::size_t i, std::size_t j, std::size_t kk) const noexcept {
    return (i * n + j) * k + kk;
  }
  /// -max(tau, max tau_ijk).
  Step window_start() const;
  std::optional<Step> period() const;
  /// Sizes, tau >= 0, |c_i(m)| < 1 over one period. Throws SpecError.
  void validate() const;
};

/// x-layer i = 0..n1-1 driven by y-layer j = 0..n2-1 and back:
///   x_i(m+1) = c^_i x_i(m-tau) + sum_j a^_ij f_j(y_j(m)) + sum_j b^_ij f_j(y_j(m - tau^_ij)) + I^_i
///   y_j(m+1) = c~_j y_j(m-tau) + sum_i a~_ji g_i(x_i(m)) + sum_i b~_ji g_i(x_i(m - tau~_ji)) + I~_j
/// Lowered channels are x_0..x_{n1-1}, y_0..y_{n2-1}.
struct BAMSpec {
  std::size_t n1 = 1;
  std::size_t n2 = 1;
  Step tau = 0;
  std::vector<Coefficient> c_hat;    // n1
  std::vector<Coefficient> c_tilde;  // n2
  std::vector<Coefficient> a_hat, b_hat;  // n1 x n2 at i * n2 + j
  std::vector<Delay> tau_hat;
  std::vector<Coefficient> I_hat;
  std::vector<Coefficient> a_tilde, b_tilde;  // n2 x n1 at j * n1 + i
  std::vector<Delay> tau_tilde;
  std::vector<Coefficient> I_tilde;
  std::vector<Activation> f;  // n2, applied to y_j
  std::vector<Activation> g;  // n1, applied to x_i

  static BAMSpec zeros(std::size_t n1, std::size_t n2, Step tau);

  std::size_t hat(std::size_t i, std::size_t j) const noexcept { return i * n2 + j; }
  std::size_t tilde(std::size_t j, std::size_t i) const noexcept { return j * n1 + i; }
  Step window_start() const;
  std::optional<Step> period() const;
  void validate() const;
};

/// x_i(m+1) = c_i x_i(m-tau) + sum_j a_ij f_j(x_j(m))
///            + sum_j sum_l b_ijl g_j(x_j(m - tau_ijl)) g_l(x_l(m - xi_ijl)),
/// with |g_j| <= g_bound_j.
struct HighOrderSpec {
  std::size_t n = 1;
  Step tau = 0;
  std::vector<Coefficient> c;  // n
  std::vector<Coefficient> a;  // n x n at i * n + j
  std::vector<Coefficient> b;  // n^3 at index(i, j, l)
  std::vector<Delay> tau_d;    // tau_ijl
  std::vector<Delay> xi;       // xi_ijl
  std::vector<Activation> f;
  std::vector<Activation> g;
  std::vector<Rational> g_bound;  // m_j > 0

  static HighOrderSpec zeros(std::size_t n, Step tau);

  std::size_t index(std::size_t i, std::size_t j, std::size_t l) const noexcept {
    return (i * n + j) * n + l;
  }
  Step window_start() const;
  std::optional<Step> period() const;
  void validate() const;
};

using ModelSpec = std::variant<HopfieldSpec, BAMSpec, HighOrderSpec>;

SystemDefinition lower_hopfield(const HopfieldSpec& spec);
SystemDefinition lower_bam(const BAMSpec& spec);
/// The system in y = x / d coordinates (see `rescale_high_order`); empty d means d = 1.
SystemDefinition lower_high_order(const HighOrderSpec& spec, const std::vector<Rational>& d = {});
SystemDefinition lower(const ModelSpec& spec);

/// h_ij(m, alpha) with h_i = sum_j h_ij. Inputs are spread evenly over the
/// coupled blocks of row i (I_i / N for Hopfield, I^_i / n2 and I~_j / n1 for BAM).
using PairwiseTerm = std::function<double(Step m, const StateView& window)>;
std::vector<PairwiseTerm> pairwise_terms(const HopfieldSpec& spec);  // n x n at i * n + j
std::vector<PairwiseTerm> pairwise_terms(const BAMSpec& spec);       // (n1+n2)^2
std::vector<PairwiseTerm> pairwise_terms(const HighOrderSpec& spec);

/// Model in y = x / d coordinates. Throws DomainError unless d > 0.
HopfieldSpec rescale_hopfield(const HopfieldSpec& spec, const std::vector<Rational>& d);
/// d has length n1 + n2 (x-layer first).
BAMSpec rescale_bam(const BAMSpec& spec, const std::vector<Rational>& d);
HighOrderSpec rescale_high_order(const HighOrderSpec& spec, const std::vector<Rational>& d);

/// H_ij = sum_k b+_ijk F_ijk, c+ from the analytic sups.
LipschitzData<Rational> lipschitz_data(const HopfieldSpec& spec);
/// Block pattern of U and S, c+ = (c^+, c~+).
LipschitzData<Rational> lipschitz_data(const BAMSpec& spec);
/// H_ij = d_i^-1 a+_ij d_j F_j + sum_l d_i^-1 b+_ijl (m_j d_l G_l + m_l d_j G_j).
LipschitzData<Rational> lipschitz_data(const HighOrderSpec& spec,
                                       const std::vector<Rational>& d = {});
LipschitzData<Rational> lipschitz_data(const ModelSpec& spec);

std::size_t channel_count(const ModelSpec& spec);

}  // namespace delaystab
