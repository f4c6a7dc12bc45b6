#pragma once

#include "tnls/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tnls {

struct MeasureSpec {
  double s = 0.8;
  int N = 32;
  std::uint64_t seed = 1;
  long count = 100;

  void validate() const;
};

// u_n = g_n / <n>^s with Re g_n, Im g_n independent N(0, 1); keyed by (seed, index, n), so a
// sample restricted to a smaller truncation equals the sample drawn at that truncation.
SpectralState sample_mu(const MeasureSpec& spec, long index);

// The underlying g_n, n = -N..N, for (seed, index).
CVec gaussian_coefficients(std::uint64_t seed, long index, int N);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Phase-space maps under test. "composition" is S(1) o J_0.7 o G_0.3 and ignores t.
enum class MeasureMap { identity, S, G, J, composition };
const char* map_name(MeasureMap m);
MeasureMap map_from_name(const std::string& s);
CVec apply_map(MeasureMap m, const CVec& coeffs, double t, const ModelParams& params);

struct InvarianceReport {
  std::string map_name;
  double t = 0.0;
  double alpha = 0.01;
  long count = 0;
  int tests = 0;
  // Per mode n = -N..N.
  std::vector<KsResult> re, im, modulus;
  int rejections_raw = 0;        // p < alpha
  int rejections_corrected = 0;  // p < alpha / tests
  int modulus_rejections_corrected = 0;
  std::vector<std::string> warnings;
};

// Ensembles are sample indices [offset, offset + count) (mapped) and
// [offset + count, offset + 2 count) (reference).
InvarianceReport invariance_test(MeasureMap map, double t, const MeasureSpec& spec, double alpha,
                                 const ModelParams& params, long offset = 0);

struct CalibrationReport {
  int replicates = 0;
  long tests = 0;
  long rejections_raw = 0;
  double rate = 0.0;  // pooled pre-correction rejection rate of the identity map
};
CalibrationReport calibration_run(const MeasureSpec& spec, double alpha, const ModelParams& params,
                                  int replicates);

// Time step min(dt_max, phase_step / (3 N^2)): the fastest dominant interaction phases
// 3 N^2 advance by at most phase_step per step.
struct StepRule {
  double dt_max = 1e-3;
  double phase_step = 0.3;
  double dt(int N) const;
};

struct SmoothingRow {
  int N = 0;
  long sample = 0;
  double sup_norm = 0.0;       // sup over [0, t] of the H^sigma norm
  double norm_K = 0.0;         // K_j(t) in the first target norm
  double norm_a = 0.0;         // j=0: nonresonant part in H^{sigma+2}; j=1: N1 part
  double norm_b = 0.0;         // j=0: resonant part in H^{3 sigma}; j=1: N2 part
  double bound_a = 0.0, bound_b = 0.0;
  double ratio_a = 0.0, ratio_b = 0.0;
};

struct QuantileSummary {
  int N = 0;
  double q50 = 0.0, q95 = 0.0, max = 0.0;
};

struct SmoothingReport {
  int j = 1;
  double t = 0.0;
  double s = 0.0, sigma = 0.0, epsilon = 0.0;
  double exponent_a = 0.0, exponent_b = 0.0;
  std::vector<int> N_list;
  std::vector<double> dt_used;
  std::vector<SmoothingRow> rows;
  // Per N: quantiles of norm_K, norm_a, norm_b and the two ratios.
  std::vector<QuantileSummary> q_K, q_a, q_b, q_ratio_a, q_ratio_b;
};

SmoothingReport smoothing_diagnostic(int j, double t, const ModelParams& params,
                                     const std::vector<int>& N_list, const MeasureSpec& spec,
                                     const StepRule& rule);

struct RamerReport {
  int N = 0;
  double t = 0.0;
  double hs_norm = 0.0;
  double min_singular_value = 1.0;
  double max_singular_value = 1.0;
  double abs_determinant = 1.0;  // product of the singular values of Id + DK
  long probe_count = 0;
  double richardson_rel = 0.0;  // relative change of the weighted Jacobian from h to h/2
  double one_sided_rel = 0.0;   // forward vs backward difference mismatch
};

RamerReport ramer_diagnostic(const SpectralState& u0, double t, int j, const ModelParams& params,
                             double fd_step, double dt);

// Linear-interpolation quantile (type 7) of a sample.
double quantile(std::vector<double> x, double q);

}  // namespace tnls
