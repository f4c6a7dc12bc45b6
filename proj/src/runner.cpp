#include "tnls/runner.hpp"

#include "tnls/dynamics.hpp"
#include "tnls/gauges.hpp"
#include "tnls/measure.hpp"
#include "tnls/normal_form.hpp"
#include "tnls/parallel.hpp"
#include "tnls/plot.hpp"
#include "tnls/resonance.hpp"
#include "tnls/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tnls {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

json config_json(const RunConfig& cfg) {
  json j = json::object();
  for (const KeyInfo& k : command_schema(cfg.command)) {
    const ConfigValue& v = cfg.values.at(k.name);
    switch (v.type) {
      case ValueType::integer: j[k.name] = v.integer; break;
      case ValueType::real: j[k.name] = v.real; break;
      case ValueType::boolean: j[k.name] = v.flag; break;
      case ValueType::int_list: j[k.name] = v.list; break;
      case ValueType::rational:
      case ValueType::string: j[k.name] = v.text; break;
    }
  }
  return j;
}

// Collects report files in memory; one writer flushes them in name order.
class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) { files_[name] = std::move(content); }
  void flush() const {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
    for (const auto& [name, content] : files_) {
      const fs::path path = fs::path(dir_) / name;
      std::ofstream os(path, std::ios::binary);
      os << content;
      if (!os) throw IoError("cannot write '" + path.string() + "'");
    }
  }

 private:
  std::string dir_;
  std::map<std::string, std::string> files_;
};

struct Invariants {
  json list = json::array();
  bool passed = true;

  void add(const std::string& name, double value, const std::string& relation, double threshold) {
    bool ok = false;
    if (relation == "<=") ok = value <= threshold;
    else if (relation == ">=") ok = value >= threshold;
    else if (relation == "==") ok = value == threshold;
    passed = passed && ok;
    list.push_back({{"name", name}, {"value", value}, {"relation", relation}, {"threshold", threshold},
                    {"passed", ok}});
  }
};

class Csv {
 public:
  explicit Csv(const std::string& header) { os_ << header << '\n'; }
  Csv& cell(double x) { return raw(format_double(x)); }
  Csv& cell(long x) { return raw(std::to_string(x)); }
  Csv& cell(int x) { return raw(std::to_string(x)); }
  Csv& cell(const std::string& s) { return raw(s); }
  void end() {
    os_ << '\n';
    first_ = true;
  }
  std::string str() const { return os_.str(); }

 private:
  Csv& raw(const std::string& s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  std::ostringstream os_;
  bool first_ = true;
};

std::string snapshot_text(const SpectralState& s) {
  std::ostringstream os;
  write_snapshot(os, s);
  return os.str();
}

// Gaussian-measure sample, optionally rescaled to a given L2 norm, tagged for `rep` at t = 0.
SpectralState draw(const RunConfig& cfg, int N, long index, double amplitude, Rep rep) {
  MeasureSpec spec{cfg.real("s"), N, cfg.seed, index + 1};
  SpectralState u = sample_mu(spec, index);
  if (amplitude > 0) {
    const double norm = sobolev_norm(u, 0.0);
    if (norm > 0) u.coeffs *= amplitude / norm;
  }
  u.rep = rep;
  return u;
}

// Random smooth state g_n exp(-n^2 / 2), rescaled to a given L2 norm.
SpectralState draw_smooth(const RunConfig& cfg, int N, long index, double amplitude, Rep rep) {
  CVec c = gaussian_coefficients(cfg.seed, index, N);
  for (int n = -N; n <= N; ++n) c[n + N] *= std::exp(-0.5 * double(n) * n);
  SpectralState u = make_state(N, c, rep, 0.0);
  if (amplitude > 0) u.coeffs *= amplitude / sobolev_norm(u, 0.0);
  return u;
}

double max_abs_diff(const CVec& a, const CVec& b) { return (a - b).cwiseAbs().maxCoeff(); }

json run_simulate(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  const EquationKind kind = kind_from_name(cfg.string("kind"));
  SpectralState u0;
  if (cfg.string("init") == "file") {
    u0 = load_snapshot(cfg.string("init_file"));
    if (u0.time == 0.0) u0.rep = rep_for(kind);
    else if (u0.rep != rep_for(kind))
      throw ValidationError(std::string("initial snapshot is tagged ") + rep_name(u0.rep) + " but " +
                            kind_name(kind) + " evolves " + rep_name(rep_for(kind)));
  } else if (cfg.string("init") == "gaussian") {
    u0 = draw_smooth(cfg, static_cast<int>(cfg.integer("N")), cfg.integer("sample"), cfg.real("amplitude"),
                     rep_for(kind));
  } else {
    u0 = draw(cfg, static_cast<int>(cfg.integer("N")), cfg.integer("sample"), cfg.real("amplitude"),
              rep_for(kind));
  }
  log << "simulate: " << kind_name(kind) << " N=" << u0.N() << " t_final=" << cfg.real("t_final")
      << " dt=" << cfg.real("dt") << '\n';
  const Trajectory traj = evolve(kind, u0, cfg.real("t_final"), cfg.real("dt"), params,
                                 static_cast<int>(cfg.integer("stride")));

  Csv csv("t,mass,hamiltonian,norm_L2,norm_H1,norm_Hsigma");
  PlotSpec plot{"Solution norms", "t", "norm", false, false, {{"L2", {}, {}}, {"H^1", {}, {}}, {"H^sigma", {}, {}}}};
  double M0 = 0, H0 = 0, dM = 0, dH = 0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const SpectralState phys = to_physical(traj.states[i], params);
    const Conserved c = conserved_quantities(phys, params);
    if (i == 0) M0 = c.M, H0 = c.H;
    dM = std::max(dM, std::abs(c.M - M0));
    dH = std::max(dH, std::abs(c.H - H0) / std::max(std::abs(H0), 1e-300));
    const double l2 = sobolev_norm(phys, 0.0), h1 = sobolev_norm(phys, 1.0),
                 hs = sobolev_norm(phys, params.sigma);
    csv.cell(traj.times[i]).cell(c.M).cell(c.H).cell(l2).cell(h1).cell(hs).end();
    const double t = traj.times[i];
    plot.series[0].x.push_back(t), plot.series[0].y.push_back(l2);
    plot.series[1].x.push_back(t), plot.series[1].y.push_back(h1);
    plot.series[2].x.push_back(t), plot.series[2].y.push_back(hs);
  }
  inv.add("mass_drift", dM, "<=", cfg.real("mass_tol"));
  inv.add("hamiltonian_relative_drift", dH, "<=", cfg.real("energy_tol"));
  out.add("trajectory.csv", csv.str());
  out.add("initial_state.txt", snapshot_text(traj.states.front()));
  out.add("final_state.txt", snapshot_text(traj.states.back()));
  out.add("norms.svg", render_svg(plot));
  return {{"kind", kind_name(kind)},
          {"N", u0.N()},
          {"steps", step_count(cfg.real("t_final"), cfg.real("dt"))},
          {"snapshots", traj.states.size()},
          {"mass_initial", M0},
          {"hamiltonian_initial", H0},
          {"mass_drift", dM},
          {"hamiltonian_relative_drift", dH}};
}

json run_resonance_scan(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const int N = static_cast<int>(cfg.integer("N"));
  log << "resonance-scan: N=" << N << " beta=" << cfg.beta().str() << '\n';
  std::ostringstream rows;
  const ResonanceScanSummary s = resonance_scan(N, cfg.beta(), cfg.real("c"), cfg.real("comparable_factor"),
                                                cfg.flag("write_tuples") ? &rows : nullptr);
  if (cfg.flag("write_tuples")) out.add("tuples.csv", rows.str());
  inv.add("tuples_outside_both_cases", static_cast<double>(s.neither), "==", 0.0);
  auto finite = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
  return {{"N", N},
          {"beta", cfg.beta().str()},
          {"resonant", cfg.beta().resonant()},
          {"tuples", s.tuples},
          {"case_i_only", s.case_i},
          {"case_ii_only", s.case_ii},
          {"both", s.both},
          {"neither", s.neither},
          {"c_star", finite(s.c_star)},
          {"c_star_i", finite(s.c_star_i)},
          {"c_star_ii", finite(s.c_star_ii)},
          {"argmin", {s.argmin.n, s.argmin.n1, s.argmin.n2, s.argmin.n3}}};
}

void add_term_rows(Csv& csv, const std::string& side, const std::string& name, const SpectralState& s) {
  for (int n = -s.N(); n <= s.N(); ++n)
    csv.cell(side).cell(name).cell(n).cell(s[n].real()).cell(s[n].imag()).end();
}

json run_normal_form(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  params.require_nonresonant();
  const int N = static_cast<int>(cfg.integer("N"));
  const double t = cfg.real("t"), dt = cfg.real("dt");
  const std::string side = cfg.string("side");
  Csv csv("side,term,n,re,im");
  json res = json::object();
  res["N"] = N;
  res["t"] = t;
  if (side == "v" || side == "both") {
    log << "normal-form: v side N=" << N << '\n';
    const SpectralState u0 = draw(cfg, N, cfg.integer("sample"), cfg.real("amplitude"), Rep::v);
    const Trajectory traj = evolve(EquationKind::v_form, u0, t, dt, params, 1);
    const NormalFormTermsV r = nf_decompose_v(traj, t, params);
    for (const auto& [name, s] : std::initializer_list<std::pair<const char*, const SpectralState*>>{
             {"boundary_t", &r.boundary_t}, {"boundary_0", &r.boundary_0}, {"quintic_II", &r.quintic_II},
             {"quintic_III", &r.quintic_III}, {"resonant_integral", &r.resonant_integral},
             {"nonresonant_integral", &r.nonresonant_integral}})
      add_term_rows(csv, "v", name, *s);
    res["residual_v"] = r.residual;
    inv.add("residual_v", r.residual, "<=", cfg.real("residual_tol"));
  }
  if (side == "w" || side == "both") {
    log << "normal-form: w side N=" << N << '\n';
    const SpectralState u0 = draw(cfg, N, cfg.integer("sample"), cfg.real("amplitude"), Rep::w);
    const Trajectory traj = evolve(EquationKind::w_form, u0, t, dt, params, 1);
    const NormalFormTermsW r = nf_decompose_w(traj, t, params);
    for (const auto& [name, s] : r.terms_N1) add_term_rows(csv, "w", name, s);
    for (const auto& [name, s] : r.terms_N2) add_term_rows(csv, "w", name, s);
    add_term_rows(csv, "w", "integral_N1", r.integral_N1);
    add_term_rows(csv, "w", "integral_N2", r.integral_N2);
    res["residual_w_N1"] = r.residual_N1;
    res["residual_w_N2"] = r.residual_N2;
    inv.add("residual_w_N1", r.residual_N1, "<=", cfg.real("residual_tol"));
    inv.add("residual_w_N2", r.residual_N2, "<=", cfg.real("residual_tol"));
  }
  out.add("terms.csv", csv.str());
  return res;
}

json run_measure(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  const MeasureSpec spec{cfg.real("s"), static_cast<int>(cfg.integer("N")), cfg.seed, cfg.integer("count")};
  const double alpha = cfg.real("alpha");
  Csv csv("map,n,component,statistic,p_value");
  json maps = json::array();
  std::stringstream list(cfg.string("maps"));
  std::string item;
  while (std::getline(list, item, ',')) {
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    const MeasureMap m = map_from_name(item);
    log << "measure: map " << map_name(m) << " count=" << spec.count << '\n';
    const InvarianceReport r = invariance_test(m, cfg.real("t"), spec, alpha, params);
    for (int k = 0; k < 2 * spec.N + 1; ++k) {
      const int n = k - spec.N;
      csv.cell(r.map_name).cell(n).cell(std::string("re")).cell(r.re[k].statistic).cell(r.re[k].p_value).end();
      csv.cell(r.map_name).cell(n).cell(std::string("im")).cell(r.im[k].statistic).cell(r.im[k].p_value).end();
      csv.cell(r.map_name).cell(n).cell(std::string("modulus")).cell(r.modulus[k].statistic)
          .cell(r.modulus[k].p_value).end();
    }
    double pmin = 1.0;
    for (int k = 0; k < 2 * spec.N + 1; ++k)
      pmin = std::min({pmin, r.re[k].p_value, r.im[k].p_value, r.modulus[k].p_value});
    maps.push_back({{"map", r.map_name},
                    {"tests", r.tests},
                    {"rejections_raw", r.rejections_raw},
                    {"rejections_corrected", r.rejections_corrected},
                    {"min_p_value", pmin},
                    {"warnings", r.warnings}});
    inv.add("corrected_rejections_" + r.map_name, r.rejections_corrected, "==", 0.0);
  }
  json res = {{"N", spec.N}, {"count", spec.count}, {"alpha", alpha}, {"maps", maps}};
  const long reps = cfg.integer("calibration_replicates");
  log << "measure: calibration with " << reps << " replicate pairs\n";
  const CalibrationReport c = calibration_run(spec, alpha, params, static_cast<int>(reps));
  res["calibration"] = {{"replicates", c.replicates},
                        {"tests", c.tests},
                        {"rejections_raw", c.rejections_raw},
                        {"rate", c.rate}};
  inv.add("calibration_rate_lower", c.rate, ">=", alpha / 2);
  inv.add("calibration_rate_upper", c.rate, "<=", 2 * alpha);
  out.add("ks.csv", csv.str());
  return res;
}

// Largest q[k+1] / q[k] over consecutive truncations.
double worst_growth(const std::vector<QuantileSummary>& q) {
  double g = 0.0;
  for (std::size_t k = 1; k < q.size(); ++k) g = std::max(g, q[k].q95 / q[k - 1].q95);
  return g;
}

json quantiles_json(const std::vector<QuantileSummary>& q) {
  json a = json::array();
  for (const auto& x : q) a.push_back({{"N", x.N}, {"q50", x.q50}, {"q95", x.q95}, {"max", x.max}});
  return a;
}

json run_smoothing(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  const int j = static_cast<int>(cfg.integer("j"));
  const MeasureSpec spec{cfg.real("s"), cfg.list("N_list").front(), cfg.seed, cfg.integer("count")};
  const StepRule rule{cfg.real("dt_max"), cfg.real("phase_step")};
  log << "smoothing: j=" << j << " N_list=" << cfg.string("N_list") << " count=" << spec.count << '\n';
  const SmoothingReport r = smoothing_diagnostic(j, cfg.real("t"), params, cfg.list("N_list"), spec, rule);

  Csv rows("N,sample,sup_norm,norm_K,norm_a,norm_b,bound_a,bound_b,ratio_a,ratio_b");
  for (const SmoothingRow& x : r.rows)
    rows.cell(x.N).cell(x.sample).cell(x.sup_norm).cell(x.norm_K).cell(x.norm_a).cell(x.norm_b)
        .cell(x.bound_a).cell(x.bound_b).cell(x.ratio_a).cell(x.ratio_b).end();
  Csv qs("quantity,N,q50,q95,max");
  const std::pair<const char*, const std::vector<QuantileSummary>*> all[] = {
      {"norm_K", &r.q_K}, {"norm_a", &r.q_a}, {"norm_b", &r.q_b}, {"ratio_a", &r.q_ratio_a},
      {"ratio_b", &r.q_ratio_b}};
  for (const auto& [name, q] : all)
    for (const auto& x : *q) qs.cell(std::string(name)).cell(x.N).cell(x.q50).cell(x.q95).cell(x.max).end();

  const double growth_limit = 1.0 + cfg.real("growth_tol");
  PlotSpec plot{"Remainder norms versus truncation (0.95 quantile)", "N", "norm", true, true, {}};
  auto series = [&](const std::string& label, const std::vector<QuantileSummary>& q) {
    PlotSeries s{label, {}, {}};
    for (const auto& x : q) s.x.push_back(x.N), s.y.push_back(x.q95);
    plot.series.push_back(s);
  };
  json res = {{"j", j}, {"t", r.t}, {"s", r.s}, {"sigma", r.sigma}, {"epsilon", r.epsilon},
              {"exponent_a", r.exponent_a}, {"exponent_b", r.exponent_b}, {"dt", r.dt_used}};
  if (j == 1) {
    series("K_1 in H^{sigma+1+eps}", r.q_K);
    series("N_1 part", r.q_a);
    series("N_2 part", r.q_b);
    inv.add("K1_q95_growth", worst_growth(r.q_K), "<=", growth_limit);
  } else {
    series("nonresonant part in H^{sigma+2}", r.q_a);
    series("resonant part in H^{3 sigma}", r.q_b);
    inv.add("nonresonant_q95_growth", worst_growth(r.q_a), "<=", growth_limit);
    inv.add("resonant_q95_growth", worst_growth(r.q_b), "<=", growth_limit);
  }
  res["quantiles"] = {{"norm_K", quantiles_json(r.q_K)}, {"norm_a", quantiles_json(r.q_a)},
                      {"norm_b", quantiles_json(r.q_b)}, {"ratio_a", quantiles_json(r.q_ratio_a)},
                      {"ratio_b", quantiles_json(r.q_ratio_b)}};
  out.add("rows.csv", rows.str());
  out.add("quantiles.csv", qs.str());
  out.add("smoothing.svg", render_svg(plot));
  return res;
}

json run_ramer(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  const int j = static_cast<int>(cfg.integer("j"));
  const double t = cfg.real("t");
  const long count = cfg.integer("count");
  const StepRule rule{cfg.real("dt_max"), cfg.real("phase_step")};
  const std::vector<int>& Ns = cfg.list("N_list");
  Csv csv("N,sample,hs_norm,min_singular_value,max_singular_value,abs_determinant,richardson_rel,one_sided_rel,probe_count");
  std::vector<std::vector<double>> hs(Ns.size(), std::vector<double>(count));
  double smin = std::numeric_limits<double>::infinity();
  json per_N = json::array();
  for (std::size_t a = 0; a < Ns.size(); ++a) {
    const int N = Ns[a];
    const MeasureSpec spec{cfg.real("s"), N, cfg.seed, count};
    double sum = 0.0, local_min = std::numeric_limits<double>::infinity();
    for (long i = 0; i < count; ++i) {
      const RamerReport r = ramer_diagnostic(sample_mu(spec, i), t, j, params, cfg.real("fd_step"), rule.dt(N));
      log << "ramer: N=" << N << " sample " << i << " hs=" << r.hs_norm << " smin=" << r.min_singular_value
          << '\n';
      csv.cell(N).cell(i).cell(r.hs_norm).cell(r.min_singular_value).cell(r.max_singular_value)
          .cell(r.abs_determinant).cell(r.richardson_rel)
          .cell(r.one_sided_rel).cell(r.probe_count).end();
      hs[a][i] = r.hs_norm;
      sum += r.hs_norm;
      local_min = std::min(local_min, r.min_singular_value);
    }
    smin = std::min(smin, local_min);
    per_N.push_back({{"N", N}, {"dt", rule.dt(N)}, {"mean_hs_norm", sum / count},
                     {"max_hs_norm", *std::max_element(hs[a].begin(), hs[a].end())},
                     {"min_singular_value", local_min}});
  }
  // Spread across N of each sample's HS norm, and of the per-N mean.
  double sample_spread = 1.0;
  for (long i = 0; i < count; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t a = 0; a < Ns.size(); ++a) lo = std::min(lo, hs[a][i]), hi = std::max(hi, hs[a][i]);
    if (lo > 0) sample_spread = std::max(sample_spread, hi / lo);
  }
  double mlo = std::numeric_limits<double>::infinity(), mhi = 0.0;
  for (const auto& x : per_N) {
    mlo = std::min(mlo, x["mean_hs_norm"].get<double>());
    mhi = std::max(mhi, x["mean_hs_norm"].get<double>());
  }
  const double mean_spread = mlo > 0 ? mhi / mlo : 1.0;
  inv.add("hs_mean_spread", mean_spread, "<=", 1.0 + cfg.real("hs_tol"));
  inv.add("hs_per_sample_spread", sample_spread, "<=", 1.0 + cfg.real("hs_tol"));
  inv.add("min_singular_value", smin, ">=", cfg.real("min_singular"));
  out.add("samples.csv", csv.str());
  return {{"j", j}, {"t", t}, {"per_N", per_N}, {"hs_mean_spread", mean_spread},
          {"hs_per_sample_spread", sample_spread}, {"min_singular_value", smin}};
}

json run_verify_all(const RunConfig& cfg, Outputs& out, Invariants& inv, std::ostream& log) {
  const ModelParams params = cfg.model();
  const int N = static_cast<int>(cfg.integer("N"));
  const long samples = cfg.integer("samples");
  json res = json::object();

  log << "verify-all: phase factorization\n";
  double phi_err = 0.0;
  for (const char* b : {"0", "1", "3/2", "2.1"}) {
    const Beta beta = Beta::parse(b);
    const int R = 24;
    for (int n1 = -R; n1 <= R; ++n1)
      for (int n2 = -R; n2 <= R; ++n2)
        for (int n3 = -R; n3 <= R; ++n3) {
          const int n = n1 - n2 + n3;
          if (n < -R || n > R) continue;
          const FrequencyTuple tup{n, n1, n2, n3};
          const double e = phi_expanded(tup, beta.value());
          const double f = 3.0 * double(n - n1) * double(n - n3) * (double(n1 + n3) - beta.shell());
          phi_err = std::max(phi_err, std::abs(e - f) / std::max(1.0, std::abs(e)));
        }
  }
  inv.add("phase_factorization_relative", phi_err, "<=", 1e-9);

  log << "verify-all: transform products and partition\n";
  double oracle_err = 0.0, partition_err = 0.0;
  for (long i = 0; i < samples; ++i) {
    const SpectralState u = draw(cfg, N, i, 2.0, Rep::u);
    oracle_err = std::max(oracle_err, max_abs_diff(cubic_terms_fft(u, false).coeffs,
                                                   cubic_terms_direct(u, TripleFilter::all, params.beta).coeffs));
    const auto [n1, n2, n3] = split_N123(u, params.beta);
    partition_err = std::max(partition_err, max_abs_diff(n1.coeffs + n2.coeffs + n3.coeffs,
                                                         cubic_terms_fft(u, true).coeffs));
  }
  inv.add("transform_vs_direct", oracle_err, "<=", 1e-11);
  inv.add("partition", partition_err, "<=", 1e-12);

  log << "verify-all: conservation\n";
  double dM = 0.0, dH = 0.0;
  for (long i = 0; i < samples; ++i) {
    const SpectralState u0 = draw_smooth(cfg, N, i, 1.0, Rep::u);
    const Trajectory tr = evolve(EquationKind::original, u0, 1.0, 1e-3, params, 100);
    const Conserved c0 = conserved_quantities(tr.states.front(), params);
    for (const auto& s : tr.states) {
      const Conserved c = conserved_quantities(s, params);
      dM = std::max(dM, std::abs(c.M - c0.M));
      dH = std::max(dH, std::abs(c.H - c0.H) / std::abs(c0.H));
    }
  }
  inv.add("mass_drift", dM, "<=", 1e-8);
  inv.add("hamiltonian_relative_drift", dH, "<=", 1e-6);

  double conj_err = 0.0, nf_v = 0.0, nf_w1 = 0.0, nf_w2 = 0.0;
  if (!params.beta.resonant()) {
    log << "verify-all: gauge conjugations\n";
    for (long i = 0; i < samples; ++i) {
      const SpectralState u0 = draw(cfg, N, i, 2.0, Rep::u);
      const SpectralState ref = evolve_observed(EquationKind::original, u0, 0.5, 5e-5, params, nullptr);
      for (EquationKind k : {EquationKind::v_form, EquationKind::w_form}) {
        SpectralState start = u0;
        start.rep = rep_for(k);
        const SpectralState end = to_physical(evolve_observed(k, start, 0.5, 5e-5, params, nullptr), params);
        conj_err = std::max(conj_err, (end.coeffs - ref.coeffs).norm());
      }
    }
    log << "verify-all: normal-form identities\n";
    const SpectralState v0 = draw(cfg, 8, 0, 2.0, Rep::v);
    nf_v = nf_decompose_v(evolve(EquationKind::v_form, v0, 0.1, 1e-4, params, 1), 0.1, params).residual;
    SpectralState w0 = v0;
    w0.rep = Rep::w;
    const NormalFormTermsW w = nf_decompose_w(evolve(EquationKind::w_form, w0, 0.1, 1e-4, params, 1), 0.1, params);
    nf_w1 = w.residual_N1;
    nf_w2 = w.residual_N2;
    inv.add("conjugation_L2", conj_err, "<=", 1e-8);
    inv.add("normal_form_v", nf_v, "<=", 1e-6);
    inv.add("normal_form_w_N1", nf_w1, "<=", 1e-6);
    inv.add("normal_form_w_N2", nf_w2, "<=", 1e-6);
  } else {
    res["skipped"] = "interaction-form checks need a non-resonant beta";
  }
  res["N"] = N;
  res["samples"] = samples;
  Csv csv("name,value,relation,threshold,passed");
  for (const auto& x : inv.list)
    csv.cell(x["name"].get<std::string>()).cell(x["value"].get<double>())
        .cell(x["relation"].get<std::string>()).cell(x["threshold"].get<double>())
        .cell(std::string(x["passed"].get<bool>() ? "true" : "false")).end();
  out.add("checks.csv", csv.str());
  return res;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ContractError*>(&e) ||
      dynamic_cast<const NonResonanceError*>(&e))
    return exit_config;
  return exit_runtime;
}

std::string error_json(const std::string& command, const std::exception& e, int code) {
  json j = {{"schema_version", kSchemaVersion}, {"version", kVersion}, {"command", command}};
  const auto* err = dynamic_cast<const Error*>(&e);
  json body = {{"kind", err ? err->kind() : "internal"}, {"message", e.what()}};
  if (const auto* ce = dynamic_cast<const ConfigError*>(&e)) body["errors"] = ce->errors;
  j["error"] = body;
  j["exit_code"] = code;
  return j.dump(2) + "\n";
}

int run(const RunConfig& cfg, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  Outputs out(cfg.output_dir);
  Invariants inv;
  json results;
  switch (cfg.command) {
    case Command::simulate: results = run_simulate(cfg, out, inv, log); break;
    case Command::resonance_scan: results = run_resonance_scan(cfg, out, inv, log); break;
    case Command::normal_form: results = run_normal_form(cfg, out, inv, log); break;
    case Command::measure: results = run_measure(cfg, out, inv, log); break;
    case Command::smoothing: results = run_smoothing(cfg, out, inv, log); break;
    case Command::ramer: results = run_ramer(cfg, out, inv, log); break;
    case Command::verify_all: results = run_verify_all(cfg, out, inv, log); break;
  }
  json report = {{"schema_version", kSchemaVersion},
                 {"version", kVersion},
                 {"command", command_name(cfg.command)},
                 {"seed", cfg.seed},
                 {"config", config_json(cfg)},
                 {"results", results},
                 {"invariants", inv.list},
                 {"passed", inv.passed}};
  out.add("report.json", report.dump(2) + "\n");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // Wall-clock time lives in its own file so that report.json stays reproducible.
  out.add("timing.json", json({{"command", command_name(cfg.command)}, {"wall_seconds", seconds},
                               {"threads", thread_count()}})
                             .dump(2) + "\n");
  out.flush();
  for (const auto& x : inv.list)
    log << (x["passed"].get<bool>() ? "  ok    " : "  FAIL  ") << x["name"].get<std::string>() << " = "
        << format_double(x["value"].get<double>()) << ' ' << x["relation"].get<std::string>() << ' '
        << format_double(x["threshold"].get<double>()) << '\n';
  return inv.passed ? exit_ok : exit_invariant;
}

int run_reported(const RunConfig& cfg, std::ostream& log, std::ostream& err) {
  try {
    return run(cfg, log);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const std::string doc = error_json(command_name(cfg.command), e, code);
    err << doc;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (!ec) std::ofstream(fs::path(cfg.output_dir) / "error.json") << doc;
    return code;
  }
}

}  // namespace tnls
