#ifndef SUPLOC_SIMULATE_HPP_
#define SUPLOC_SIMULATE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "suploc/assembly.hpp"
#include "suploc/law.hpp"

namespace suploc {

enum class Innovations { uniform, exponential, normal, rademacher, constant };

std::string to_string(Innovations i);
Innovations innovations_from_string(const std::string &s);

/// Moving average X(t) = sum_k e_k phi((t - k w - theta)/w) with the
/// triangular kernel phi(x) = max(0, 1 - |x|), iid innovations e_k and a
/// uniform phase theta in [0,w) per path (which makes X stationary in
/// continuous time). Values at distance >= 2w are independent, so X is
/// m-dependent and hence strongly mixing.
struct MixingProcessSpec {
  double w = 1.0;
  double h = 0.01;
  Innovations innovations = Innovations::normal;
  std::uint64_t seed = 1;
  /// Evaluate t -> X(T - t) instead of X(t).
  bool time_reversed = false;

  void check() const;
};

/// Binned Monte Carlo estimate of the supremum-location law. Raw samples
/// are kept for KS statistics and conditional checks.
struct EmpiricalLaw {
  double T = 0;
  std::size_t n_paths = 0;
  std::vector<double> bin_edges;   // n_bins + 1 edges over [0,T]
  std::vector<double> bin_masses;  // fraction of paths per bin
  double atom0_hat = 0;
  double atomT_hat = 0;
  std::uint64_t seed = 0;
  std::string generator;
  std::vector<double> taus;
  std::vector<double> sup_values;
  std::vector<std::string> warnings;

  std::size_t n_bins() const { return bin_masses.size(); }
  /// Density estimate on bin i.
  double density(std::size_t i) const {
    return bin_masses[i] / (bin_edges[i + 1] - bin_edges[i]);
  }
};

/// Shift process X(t) = x(t - U): U uniform on [0,P), leftmost argmax found
/// from the knot candidates and the window endpoints (no discretization).
EmpiricalLaw sample_shift_tau(const PiecewiseLinearPath &path, const Rational &T,
                              std::size_t n_paths, std::uint64_t seed,
                              std::size_t n_bins = 100, unsigned threads = 1);

/// Per path: innovations covering [-w, T+w], evaluation on the h-grid,
/// leftmost grid argmax. Endpoint wins are ordinary bin entries. Throws
/// ArgumentError for constant innovations or T < 10 w.
EmpiricalLaw simulate_mixing_tau(const MixingProcessSpec &spec, double T,
                                 std::size_t n_paths, std::size_t n_bins = 50,
                                 unsigned threads = 1);

/// sup over bins inside [eps T, (1-eps) T] of |T f_hat - 1|.
double uniformity_band(const EmpiricalLaw &e, double eps);
/// Same statistic for an exact law (pieces meeting the band).
Rational uniformity_band(const SupLocationLaw &law, const Rational &eps);

struct ConditionalEstimate {
  double estimate = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::size_t n_condition = 0;
  double target = 0;  // (b' - a') / (b - a)
  bool defined = false;

  bool covers_target() const { return defined && ci_low <= target && target <= ci_high; }
};

/// P(tau in (a',b') | tau in (a,b)) with a 95% Wilson interval.
ConditionalEstimate conditional_uniformity(const EmpiricalLaw &e, double a, double a2,
                                           double b2, double b);
/// Exact conditional mass for an exact law; throws ArgumentError when the
/// conditioning interval carries no mass.
Rational conditional_uniformity(const SupLocationLaw &law, const Rational &a,
                                const Rational &a2, const Rational &b2, const Rational &b);

/// Largest frequency of an exactly repeated supremum value.
double atom_proxy(const std::vector<double> &sup_values);
double atom_proxy(const EmpiricalLaw &e);

/// One-sample KS distance of samples in [0,1] from the uniform law.
double ks_uniform(std::vector<double> samples);

struct TwoSampleKS {
  double statistic = 0;
  double p_value = 1;
};
TwoSampleKS ks_two_sample(std::vector<double> x, std::vector<double> y);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

/// tau / T for every sample.
std::vector<double> normalized_taus(const EmpiricalLaw &e);

}  // namespace suploc

#endif  // SUPLOC_SIMULATE_HPP_
