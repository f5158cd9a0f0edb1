#include "holegaf/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/expint.hpp>

#include "json.hpp"

#include "holegaf/envelopes.hpp"
#include "holegaf/errors.hpp"
#include "holegaf/holes.hpp"
#include "holegaf/parallel.hpp"
#include "holegaf/rng.hpp"
#include "holegaf/spectra.hpp"
#include "holegaf/stats.hpp"
#include "model_json.hpp"

namespace holegaf::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  out << text;
}

ojson provenance(const ExperimentConfig& c) {
  ojson p;
  p["config_hash"] = c.hash();
  p["code_version"] = code_version();
  p["seed"] = c.seed;
  ojson cfg = ojson::object();
  for (const auto& k : config_keys())
    if (!k.operational) cfg[k.name] = c.resolved.at(k.name);
  p["config"] = std::move(cfg);
  return p;
}

// Shortest text that round-trips.
std::string num(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

// Intensity used to pick the envelope of a model, if it has one.
std::optional<double> model_intensity(const CoefficientModel& m) {
  if (m.kind == ModelKind::Hyperbolic || m.kind == ModelKind::PowerLaw) return m.L;
  if (m.kind == ModelKind::ConstantUnit) return 1.0;
  return std::nullopt;
}

std::optional<BoundEnvelope> envelope_for(const CoefficientModel& m, double r, double c81 = 0.1, double C81 = 10.0) {
  switch (m.kind) {
    case ModelKind::Hyperbolic: return theorem1_envelope(m.L, r);
    case ModelKind::PowerLaw:
      if (m.L < 1.0) return general_band_L_less_1(m, r);
      if (m.L == 1.0 && r >= 0.5) return theorem81_band(r, c81, C81);
      if (m.L > 1.0) return theorem1_envelope(m.L, r);
      return std::nullopt;
    case ModelKind::ConstantUnit:
      if (r >= 0.5) return theorem81_band(r, c81, C81);
      return std::nullopt;
    case ModelKind::Explicit: return std::nullopt;
  }
  return std::nullopt;
}

struct Sidecar {
  std::string name;
  double wall_time_s = 0.0;
  std::vector<double> per_record;
};

void write_sidecar(const fs::path& dir, const Sidecar& s, const ExperimentConfig& c) {
  ojson j;
  j["timestamp"] = utc_timestamp();
  j["wall_time_s"] = s.wall_time_s;
  j["per_record_wall_time_s"] = s.per_record;
  j["threads"] = resolve_threads(c.threads);
  j["config_hash"] = c.hash();
  write_text(dir / (s.name + ".meta.json"), j.dump(2) + "\n");
}

// ---- commands --------------------------------------------------------------

void run_coeffs(const ExperimentConfig& c, const fs::path& out, RunResult& res) {
  std::size_t count = c.terms;
  if (c.model.kind == ModelKind::Explicit) count = std::min<std::size_t>(count, c.model.explicit_seq.size());
  auto logs = log_coefficient_sq_table(c.model, count);
  std::ostringstream csv;
  csv << "n,a_n,log_a_sq,config_hash\n";
  for (std::size_t n = 0; n < count; ++n)
    csv << n << ',' << num(std::exp(0.5 * logs[n])) << ',' << num(logs[n]) << ',' << c.hash() << '\n';
  write_text(out / "coeffs.csv", csv.str());

  std::ostringstream jl;
  for (double r : c.radii) {
    ojson j;
    j["model"] = detail::model_to_json(c.model);
    j["r"] = r;
    j["sigma_sq"] = sigma_sq(c.model, r);
    j["s_planar"] = s_planar(c.model, r);
    j["truncation_degree"] = truncation_degree(c.model, r, c.tau_rel);
    j["provenance"] = provenance(c);
    jl << j.dump() << '\n';
  }
  write_text(out / "coeffs.jsonl", jl.str());
  res.artifacts.push_back((out / "coeffs.csv").string());
  res.artifacts.push_back((out / "coeffs.jsonl").string());
}

void run_spectrum(const ExperimentConfig& c, const fs::path& out, RunResult& res) {
  std::ostringstream csv, jl;
  csv << "r,m,lambda_m,cumulative_log_det,config_hash\n";
  for (double r : c.radii) {
    CirculantSpectrum s = circulant_eigenvalues(c.model, r, c.N);
    double cum = 0.0;
    for (std::size_t m = 0; m < s.lambdas.size(); ++m) {
      cum += std::log(s.lambdas[m]);
      csv << num(r) << ',' << m << ',' << num(s.lambdas[m]) << ',' << num(cum) << ',' << c.hash() << '\n';
    }
    ojson j;
    j["model"] = detail::model_to_json(c.model);
    j["r"] = r;
    j["N"] = c.N;
    j["log_det"] = s.log_det;
    j["lambda_max"] = s.Lambda_max;
    j["lambda_min"] = s.min_lambda();
    j["provenance"] = provenance(c);
    jl << j.dump() << '\n';
  }
  write_text(out / "spectrum.csv", csv.str());
  write_text(out / "spectrum.jsonl", jl.str());
  res.artifacts.push_back((out / "spectrum.csv").string());
  res.artifacts.push_back((out / "spectrum.jsonl").string());
}

HoleEstimate estimate_one(const ExperimentConfig& c, double r) {
  EstimatorOptions opt = c.estimator_options();
  switch (c.mode) {
    case EstimateMode::Direct: return estimate_hole_direct(c.model, r, c.trials, c.seed, c.confidence, opt);
    case EstimateMode::ThresholdLower: {
      double M = 0.0;
      if (c.M) {
        M = *c.M;
      } else {
        auto L = model_intensity(c.model);
        if (!L) throw Error(ErrorKind::ConfigError, "key 'M': explicit models need a threshold");
        M = default_threshold(*L, r, c.threshold);
      }
      return estimate_hole_lower_threshold(c.model, r, M, c.trials, c.seed, c.confidence, opt);
    }
    case EstimateMode::TiltedLower:
      return tilted_lower_estimator(c.model, r, c.threshold.alpha, c.alpha1, c.trials, c.seed, c.confidence, opt);
  }
  throw Error(ErrorKind::ConfigError, "key 'mode': unsupported");
}

void run_estimate(const ExperimentConfig& c, const fs::path& out, RunResult& res, Sidecar& side, std::ostream& log) {
  std::ostringstream jl, csv;
  csv << "L,r,mode,trials,hits,inconclusive,p_low,p_high,confidence,seed,config_hash\n";
  for (double r : c.radii) {
    HoleEstimate e = estimate_one(c, r);
    side.per_record.push_back(e.wall_time_s);
    ojson j = ojson::parse(estimate_to_jsonl(e));
    j["stream_range"] = {0, e.trials};
    j["provenance"] = provenance(c);
    jl << j.dump() << '\n';
    auto L = model_intensity(c.model);
    csv << (L ? num(*L) : std::string()) << ',' << num(r) << ',' << to_string(e.mode) << ',' << e.trials << ','
        << e.hits << ',' << e.inconclusive << ',' << num(e.p_low) << ',' << num(e.p_high) << ','
        << num(e.confidence) << ',' << e.seed << ',' << c.hash() << '\n';
    log << to_string(e.mode) << " r=" << r << " p in [" << e.p_low << ", " << e.p_high << "] (" << e.hits << "/"
        << e.trials << ", inconclusive " << e.inconclusive << ")\n";
  }
  write_text(out / "estimates.jsonl", jl.str());
  write_text(out / "estimates.csv", csv.str());
  res.artifacts.push_back((out / "estimates.jsonl").string());
  res.artifacts.push_back((out / "estimates.csv").string());
}

void run_envelope(const ExperimentConfig& c, const fs::path& out, RunResult& res) {
  std::vector<BoundEnvelope> rows;
  std::ostringstream jl;
  for (double r : c.radii) {
    auto e = envelope_for(c.model, r, c.c81, c.C81);
    if (!e) throw Error(ErrorKind::ConfigError, "key 'model': no envelope for " + c.model.describe());
    rows.push_back(*e);
    ojson j;
    j["L"] = e->L;
    j["r"] = r;
    j["regime"] = to_string(e->regime);
    j["lower"] = e->lower;
    j["upper"] = e->upper;
    j["label"] = e->label;
    j["pre_asymptotic"] = e->pre_asymptotic;
    if (c.chebyshev && c.model.kind == ModelKind::Hyperbolic && c.model.L > 1.0) {
      ChebyshevTerms t = chebyshev_terms(c.model.L, r, c.a_cfg, c.kappa);
      j["certificate"] = {{"N", t.N},           {"theta", t.theta},       {"r0", t.r0},
                          {"exponent", t.exponent}, {"normalized", t.normalized}};
    }
    j["provenance"] = provenance(c);
    jl << j.dump() << '\n';
  }
  std::string csv = envelope_csv(rows);
  write_text(out / "envelopes.csv", csv);
  write_text(out / "envelopes.jsonl", jl.str());
  res.artifacts.push_back((out / "envelopes.csv").string());
  res.artifacts.push_back((out / "envelopes.jsonl").string());
}

void run_oracle_verify(const ExperimentConfig& c, const fs::path& out, RunResult& res, std::ostream& log) {
  std::ostringstream jl;
  bool all = true;
  for (const auto& rep : oracle_reports(c)) {
    ojson j = ojson::parse(rep.to_jsonl());
    j["provenance"] = provenance(c);
    jl << j.dump() << '\n';
    log << (rep.pass ? "PASS " : "FAIL ") << rep.lemma_id << " (" << rep.points.size() << " points)\n";
    all = all && rep.pass;
  }
  write_text(out / "oracle_reports.jsonl", jl.str());
  res.artifacts.push_back((out / "oracle_reports.jsonl").string());
  if (!all) res.exit_code = 1;
}

void run_report(const ExperimentConfig& c, const fs::path& out, RunResult& res) {
  fs::path in = fs::path(c.results_dir) / "estimates.jsonl";
  std::ifstream f(in);
  if (!f) throw Error(ErrorKind::ConfigError, "key 'results_dir': cannot read '" + in.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) lines.push_back(line);
  write_text(out / "report.csv", report_csv(lines));
  res.artifacts.push_back((out / "report.csv").string());
}

// ---- checks ------------------------------------------------------------------

std::vector<std::vector<cplx>> random_polynomials(std::size_t count, std::size_t max_degree, std::uint64_t seed) {
  std::vector<std::vector<cplx>> polys;
  for (std::size_t i = 0; i < count; ++i) {
    rng::CounterRng g(seed, i, rng::Domain::Polynomials);
    std::size_t deg = 1 + g.bits(0) % max_degree;
    std::vector<cplx> p(deg + 1);
    for (std::size_t n = 0; n <= deg; ++n) p[n] = g.complex_gaussian(n + 1);
    polys.push_back(std::move(p));
  }
  return polys;
}

}  // namespace

std::vector<LemmaCheckReport> oracle_reports(const ExperimentConfig& c) {
  std::vector<LemmaCheckReport> out;

  {
    LemmaCheckReport rep;
    rep.lemma_id = "neg_moment_quadrature";
    rep.relation = "|quadrature * t^-theta - Gamma(1 - theta/2)| <= bound";
    rep.pass = true;
    for (double th : {0.2, 0.5, 1.0, 1.5})
      for (double t : {0.5, 1.0, 3.0}) {
        LemmaCheckPoint p;
        p.params = {{"theta", th}, {"t", t}};
        p.measured = std::abs(neg_moment_quadrature(th, t, 0.0) * std::pow(t, -th) - neg_moment_exact(th));
        p.bound = 1e-8;
        p.pass = p.measured <= p.bound;
        rep.add(std::move(p));
      }
    out.push_back(std::move(rep));
  }
  {
    LemmaCheckReport rep;
    rep.lemma_id = "neg_moment_mc";
    rep.relation = "|MC mean - Gamma(1 - theta/2)| / standard error <= bound";
    rep.config = {{"draws", static_cast<double>(c.oracle_trials)}};
    rep.pass = true;
    for (double th : {0.2, 0.5, 0.9}) {
      auto [mean, se] = neg_moment_mc(th, c.oracle_trials, c.seed, c.threads);
      LemmaCheckPoint p;
      p.params = {{"theta", th}, {"mean", mean}};
      p.measured = std::abs(mean - neg_moment_exact(th)) / se;
      p.bound = 4.0;
      p.pass = p.measured <= p.bound;
      rep.add(std::move(p));
    }
    out.push_back(std::move(rep));
  }
  out.push_back(lemma15_check({0.1, 0.25, 0.5, 1.0}, {0.5, 1.0, 2.0, 4.0},
                              {0.0, 0.5, 1.0, cplx(1.0, 1.0), 2.0, 5.0}, c.C15));
  out.push_back(lemma16_5_check({0.1, 0.5, 1.0, 2.0, 3.0}));
  out.push_back(lemma16_growth({0.5, 1.0, 2.0}, 6, c.oracle_trials, c.seed, c.threads));
  out.push_back(lemma17_grid({0.1, 0.5, 1.0, 2.0, 4.0}, {0.0, 0.01, 0.1, 0.25, 0.5}, c.lemma17));
  {
    auto rep = lemma18_check(c.model, c.radii.front(), 4, 0.5, c.oracle_trials, c.seed, c.threads);
    out.push_back(std::move(rep));
  }
  {
    auto polys = random_polynomials(100, 12, c.seed);
    polys.push_back({1.0, -1.0});
    out.push_back(lemma6_check(polys, {4, 8, 16}, c.C6));
  }
  {
    LemmaCheckReport rep;
    rep.lemma_id = "coupling";
    rep.relation = "|P[E] - target| / standard error <= bound";
    rep.pass = true;
    const double sigma = 0.6;
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < c.oracle_trials; ++i) hits += gaussian_coupling_sample(sigma, c.seed, i).in_event;
    double n = static_cast<double>(c.oracle_trials);
    double target = sigma * sigma;
    LemmaCheckPoint p;
    p.params = {{"sigma", sigma}, {"p_hat", hits / n}};
    p.measured = std::abs(hits / n - target) / std::sqrt(target * (1.0 - target) / n);
    p.bound = 3.0;
    p.pass = p.measured <= p.bound;
    rep.add(std::move(p));

    const std::size_t N = 10;
    std::vector<cplx> b(N + 1, 1.0), cc(N + 1, 0.9);
    hits = 0;
    for (std::uint64_t i = 0; i < c.oracle_trials; ++i) hits += gaf_coupling_sample(b, cc, N, c.seed, i).in_event;
    double q2 = std::pow(0.81, static_cast<double>(N + 1));
    LemmaCheckPoint g;
    g.params = {{"N", static_cast<double>(N)}, {"sigma", 0.9}, {"p_hat", hits / n}};
    g.measured = std::abs(hits / n - q2) / std::sqrt(q2 * (1.0 - q2) / n);
    g.bound = 3.0;
    g.pass = g.measured <= g.bound;
    rep.add(std::move(g));
    out.push_back(std::move(rep));
  }
  return out;
}

std::string report_csv(const std::vector<std::string>& estimate_lines) {
  std::ostringstream csv;
  csv << "L,r,mode,p_low,p_high,neg_log_p_high,neg_log_p_low,regime,envelope_lower,envelope_upper,config_hash\n";
  for (const auto& line : estimate_lines) {
    ojson j = ojson::parse(line);
    CoefficientModel m;
    m.kind = parse_model_kind(j["model"]["kind"].get<std::string>());
    if (j["model"].contains("L")) m.L = j["model"]["L"].get<double>();
    if (j["model"].contains("explicit_seq")) m.explicit_seq = j["model"]["explicit_seq"].get<std::vector<double>>();
    const double r = j["r"].get<double>();
    const double lo = j["p_low"].get<double>(), hi = j["p_high"].get<double>();
    auto L = model_intensity(m);
    auto env = envelope_for(m, r);
    auto neglog = [](double p) { return p > 0.0 ? num(-std::log(p)) : std::string("inf"); };
    std::string hash = j.contains("provenance") ? j["provenance"]["config_hash"].get<std::string>() : "";
    csv << (L ? num(*L) : std::string()) << ',' << num(r) << ',' << j["mode"].get<std::string>() << ',' << num(lo)
        << ',' << num(hi) << ',' << neglog(hi) << ',' << neglog(lo) << ','
        << (env ? to_string(env->regime) : "") << ',' << (env ? num(env->lower) : "") << ','
        << (env ? num(env->upper) : "") << ',' << hash << '\n';
  }
  return csv.str();
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  fs::path out(config.output_dir);
  fs::create_directories(out);
  RunResult res;
  Sidecar side;
  const std::string& cmd = config.command;
  if (cmd == "coeffs") {
    side.name = "coeffs";
    run_coeffs(config, out, res);
  } else if (cmd == "spectrum") {
    side.name = "spectrum";
    run_spectrum(config, out, res);
  } else if (cmd == "estimate") {
    side.name = "estimates";
    run_estimate(config, out, res, side, log);
  } else if (cmd == "envelope") {
    side.name = "envelopes";
    run_envelope(config, out, res);
  } else if (cmd == "oracle-verify") {
    side.name = "oracle_reports";
    run_oracle_verify(config, out, res, log);
  } else if (cmd == "report") {
    side.name = "report";
    run_report(config, out, res);
  } else {
    throw Error(ErrorKind::ConfigError, "key 'command': unknown command '" + cmd + "'");
  }
  side.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_sidecar(out, side, config);
  res.artifacts.push_back((out / (side.name + ".meta.json")).string());
  return res;
}

// ---------------------------------------------------------------------------

VerifyOutcome verify_suite(VerifyLevel level, const SampleHooks& hooks, unsigned threads, std::uint64_t seed) {
  VerifyOutcome o;
  auto add = [&](std::string name, std::string kind, double measured, double expected, std::string criterion,
                 bool pass) {
    o.rows.push_back({std::move(name), std::move(kind), measured, expected, std::move(criterion), pass});
    o.pass = o.pass && pass;
  };

  {
    double worst = 0.0;
    for (double L : {0.5, 1.0, 2.0, 5.0})
      for (double r : {0.3, 0.6, 0.9, 0.99}) {
        auto m = CoefficientModel::hyperbolic(L);
        double closed = sigma_sq(m, r);
        worst = std::max(worst, std::abs(sigma_sq_series(m, r) - closed) / closed);
      }
    add("variance closed form (max rel err)", "identity", worst, 0.0, "<= 1e-10", worst <= 1e-10);
  }
  {
    auto m = CoefficientModel::hyperbolic(2.0);
    const std::uint64_t N = 32;
    const double r = 0.9;
    CirculantSpectrum s = circulant_eigenvalues(m, r, N);
    Eigen::MatrixXcd S = covariance_matrix(m, r, N);
    double worst = 0.0;
    for (std::uint64_t k = 0; k < N; ++k) {
      Eigen::VectorXcd u(N);
      for (std::uint64_t j = 0; j < N; ++j)
        u[j] = std::polar(1.0 / std::sqrt(double(N)), 2.0 * std::numbers::pi * double((j * k) % N) / double(N));
      worst = std::max(worst, (S * u - s.lambdas[k] * u).norm() / s.Lambda_max);
    }
    add("circulant eigenvector residual / Lambda", "identity", worst, 0.0, "<= 1e-9", worst <= 1e-9);
  }
  {
    double worst = 0.0;
    for (double th : {0.2, 0.5, 1.0, 1.5})
      for (double t : {0.5, 1.0, 3.0})
        worst = std::max(worst, std::abs(neg_moment_quadrature(th, t, 0.0) * std::pow(t, -th) - neg_moment_exact(th)));
    add("E|zeta|^-theta quadrature vs Gamma", "quadrature", worst, 0.0, "<= 1e-8", worst <= 1e-8);
  }
  {
    double worst = 0.0;
    for (double x : {0.01, 0.5, 1.0, 2.0, 9.0, 50.0})
      worst = std::max(worst, std::abs(exp_integral_e1(x) / boost::math::expint(1, x) - 1.0));
    add("E1 vs reference implementation (rel)", "identity", worst, 0.0, "<= 1e-12", worst <= 1e-12);
  }
  {
    auto rep = lemma16_5_check({0.1, 1.0, 3.0});
    double margin = 1e300;
    for (const auto& p : rep.points) margin = std::min(margin, p.measured / p.bound);
    add("log-moment lower bound (min ratio)", "identity", margin, 1.0, "> 1", rep.pass);
  }
  {
    const double r = 0.999;
    double v = -(1.0 - r) * log_determinantal_oracle(r);
    double target = std::numbers::pi * std::numbers::pi / 12.0;
    add("L=1 hole exponent at r=0.999", "identity", v, target, "within 2%", std::abs(v / target - 1.0) <= 0.02);
  }
  {
    auto rep = lemma17_grid({0.1, 0.5, 1.0, 2.0, 4.0}, {0.0, 0.01, 0.1, 0.25, 0.5});
    double worst = -1e300;
    for (const auto& p : rep.points) worst = std::max(worst, p.measured - p.bound);
    add("small-theta moment bound (max excess)", "quadrature", worst, 0.0, "<= 0", rep.pass);
  }
  {
    auto rep = lemma15_check({0.1, 0.5, 1.0}, {0.5, 1.0, 3.0}, {0.0, 1.0, cplx(1.0, 1.0), 5.0});
    double worst = 0.0;
    for (const auto& p : rep.points) worst = std::max(worst, p.measured / p.bound);
    add("shifted moment bound (max ratio)", "quadrature", worst, 1.0, "<= 1", rep.pass);
  }
  {
    double worst = -1e300;
    for (int k : {4, 8, 16}) worst = std::max(worst, lemma6_defect({1.0, -1.0}, k) * k * k);
    add("averaging defect of 1 - z (max D k^2)", "identity", worst, 10.0, "<= 10", worst <= 10.0);
  }

  if (level == VerifyLevel::Full) {
    {
      // E|c_n|^2 = a_n^2: the negative control for a broken generator.
      auto m = CoefficientModel::hyperbolic(1.5);
      const std::uint64_t trials = 20000, terms = 6;
      auto table = coefficient_table(m, terms);
      double worst = 0.0;
      for (std::uint64_t n = 0; n < terms; ++n) {
        stats::RunningMoments mom;
        for (std::uint64_t t = 0; t < trials; ++t) {
          GafSample s = sample(m, seed, t, terms - 1, hooks);
          mom.push(std::norm(s.coeffs[n]) / (table[n] * table[n]));
        }
        double z = mom.std_error() > 0.0 ? std::abs(mom.mean - 1.0) / mom.std_error() : 1e300;
        worst = std::max(worst, z);
      }
      add("sampler variance E|c_n|^2 / a_n^2 (max z)", "monte-carlo", worst, 0.0, "<= 4", worst <= 4.0);
    }
    {
      auto [mean, se] = neg_moment_mc(0.5, 200000, seed, threads);
      double z = std::abs(mean - neg_moment_exact(0.5)) / se;
      add("E|zeta|^-0.5 Monte Carlo (z)", "monte-carlo", z, 0.0, "<= 4", z <= 4.0);
    }
    {
      EstimatorOptions opt;
      opt.threads = threads;
      opt.hooks = hooks;
      auto e = estimate_hole_direct(CoefficientModel::hyperbolic(1.0), 0.5, 20000, seed, 0.99, opt);
      double oracle = determinantal_oracle(0.5);
      bool ok = e.p_low <= oracle && oracle <= e.p_high && e.inconclusive * 1000 < e.trials;
      add("L=1 hole probability at r=0.5", "monte-carlo", e.p_hat(), oracle, "99% interval covers, <0.1% inconclusive",
          ok);
    }
    {
      const double sigma = 0.6;
      const std::uint64_t n = 100000;
      std::vector<double> mod2(n);
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        auto d = gaussian_coupling_sample(sigma, seed, i);
        mod2[i] = std::norm(d.zeta);
        hits += d.in_event;
      }
      auto ks = stats::ks_test(std::span<double>(mod2), [](double x) { return -std::expm1(-x); });
      add("coupling marginal |zeta|^2 ~ Exp(1) (KS p)", "monte-carlo", ks.p_value, 1e-3, ">= 1e-3",
          ks.p_value >= 1e-3);
      double p = sigma * sigma, z = std::abs(double(hits) / n - p) / std::sqrt(p * (1 - p) / n);
      add("coupling P[E] vs sigma^2 (z)", "monte-carlo", z, 0.0, "<= 3", z <= 3.0);
    }
    {
      auto res = lemma18_mc(CoefficientModel::hyperbolic(1.0), 0.5, 4, 0.5, 100000, seed, threads);
      add("product moment vs spectral bound", "monte-carlo", res.estimate, res.bound, "<= bound (1 + 5 rel SE)",
          res.pass);
    }
  }
  return o;
}

std::string format_verify_table(const VerifyOutcome& o) {
  std::ostringstream os;
  os << std::left << std::setw(46) << "check" << std::setw(13) << "kind" << std::setw(16) << "measured"
     << std::setw(14) << "expected" << std::setw(42) << "criterion" << "result\n";
  for (const auto& r : o.rows) {
    os << std::setw(46) << r.name << std::setw(13) << r.kind << std::setw(16) << std::setprecision(8) << r.measured
       << std::setw(14) << std::setprecision(8) << r.expected << std::setw(42) << r.criterion
       << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  os << (o.pass ? "ALL PASS" : "FAILURES PRESENT") << '\n';
  return os.str();
}

}  // namespace holegaf::cli
