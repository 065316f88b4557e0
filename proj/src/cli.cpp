#include "coulomb/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coulomb/core_kernel.hpp"
#include "coulomb/detkernel.hpp"
#include "coulomb/equilibrium.hpp"
#include "coulomb/exactlaws.hpp"
#include "coulomb/parallel.hpp"
#include "coulomb/rmt.hpp"
#include "coulomb/sampler.hpp"
#include "coulomb/stats.hpp"

#ifndef COULOMB_VERSION
#define COULOMB_VERSION "unknown"
#endif

namespace cgas {

namespace {

using Json = nlohmann::ordered_json;

const std::map<std::string, EnsembleKind>& ensemble_names() {
  static const std::map<std::string, EnsembleKind> names{
      {"coulomb", EnsembleKind::Coulomb},     {"ginibre", EnsembleKind::Ginibre},
      {"spherical", EnsembleKind::Spherical}, {"truncated", EnsembleKind::Truncated},
      {"product", EnsembleKind::Product},     {"hermite", EnsembleKind::Hermite},
  };
  return names;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

long effective_m(const RunConfig& cfg) {
  if (cfg.ensemble == EnsembleKind::Truncated) return cfg.m == 0 ? 2 * cfg.n : cfg.m;
  if (cfg.ensemble == EnsembleKind::Product) return cfg.m == 0 ? 2 : cfg.m;
  return cfg.m;
}

// Writes to the configured file, or to `out` when no path is set.
template <class Fn>
void with_output(const RunConfig& cfg, std::ostream& out, Fn&& write) {
  if (cfg.output_path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(cfg.output_path, std::ios::binary);
  if (!file) throw ConfigError("out: cannot open '" + cfg.output_path + "' for writing");
  write(file);
}

std::vector<std::pair<std::string, std::string>> metadata(const RunConfig& cfg) {
  return {
      {"ensemble", to_string(cfg.ensemble)},
      {"n", std::to_string(cfg.n)},
      {"beta", fmt(cfg.beta)},
      {"seed", std::to_string(cfg.seed)},
      {"chains", std::to_string(cfg.chains)},
      {"samples", std::to_string(cfg.samples)},
      {"burn-in", std::to_string(cfg.burn_in)},
      {"thin", std::to_string(cfg.thin)},
      {"dim", std::to_string(cfg.dim)},
      {"m", std::to_string(cfg.m)},
  };
}

struct SampleTable {
  int dim = 2;
  // (sample_index, particle coordinates)
  std::vector<PointCloud> samples;
};

SampleTable draw_samples(const RunConfig& cfg) {
  SampleTable table;
  const auto n = static_cast<std::size_t>(cfg.n);
  auto spectra = [&](Ensemble e, std::size_t m) {
    for (const auto& s : sample_spectra(e, n, m, cfg.samples, cfg.seed)) table.samples.push_back(to_point_cloud(s));
  };
  switch (cfg.ensemble) {
    case EnsembleKind::Ginibre:
      spectra(Ensemble::Ginibre, 0);
      break;
    case EnsembleKind::Spherical:
      spectra(Ensemble::Spherical, 0);
      break;
    case EnsembleKind::Truncated:
      spectra(Ensemble::Truncated, static_cast<std::size_t>(effective_m(cfg)));
      break;
    case EnsembleKind::Product:
      spectra(Ensemble::Product, static_cast<std::size_t>(effective_m(cfg)));
      break;
    case EnsembleKind::Coulomb:
    case EnsembleKind::Hermite: {
      const GasParameters p = cfg.ensemble == EnsembleKind::Hermite
                                  ? GasParameters::hermite(n, cfg.beta)
                                  : GasParameters(Dimension(cfg.dim), n, cfg.beta, Potential::quadratic(0.5));
      SamplerConfig sc;
      sc.burn_in = cfg.burn_in;
      sc.thin = cfg.thin;
      sc.seed = cfg.seed;
      for (auto& chain : run_parallel_chains(p, sc, cfg.chains, cfg.samples)) {
        for (auto& c : chain.samples) table.samples.push_back(std::move(c.points));
      }
      break;
    }
  }
  table.dim = cfg.ensemble == EnsembleKind::Coulomb ? cfg.dim : 2;
  return table;
}

void write_samples_csv(std::ostream& os, const RunConfig& cfg, const SampleTable& t) {
  for (const auto& [k, v] : metadata(cfg)) os << "# " << k << '=' << v << '\n';
  os << "# version: " << version_string() << '\n';
  os << "sample_index,particle_index";
  for (int c = 1; c <= t.dim; ++c) os << ",coord_" << c;
  os << '\n';
  for (std::size_t s = 0; s < t.samples.size(); ++s) {
    for (std::size_t i = 0; i < t.samples[s].size(); ++i) {
      os << s << ',' << i;
      for (double v : t.samples[s].point(i)) os << ',' << fmt(v);
      os << '\n';
    }
  }
}

void write_samples_json(std::ostream& os, const RunConfig& cfg, const SampleTable& t) {
  Json doc;
  Json meta;
  for (const auto& [k, v] : metadata(cfg)) meta[k] = v;
  meta["version"] = version_string();
  doc["metadata"] = meta;
  Json columns = Json::array({"sample_index", "particle_index"});
  for (int c = 1; c <= t.dim; ++c) columns.push_back("coord_" + std::to_string(c));
  doc["columns"] = columns;
  Json rows = Json::array();
  for (std::size_t s = 0; s < t.samples.size(); ++s) {
    for (std::size_t i = 0; i < t.samples[s].size(); ++i) {
      Json row = Json::array({s, i});
      for (double v : t.samples[s].point(i)) row.push_back(v);
      rows.push_back(std::move(row));
    }
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(1) << '\n';
}

// ---- verification battery ----

struct GasLawRun {
  std::vector<double> sum_sq;
  std::vector<double> sum_x;
};

GasLawRun gas_law_run(const RunConfig& cfg, std::size_t n, std::size_t samples) {
  const auto p = GasParameters::beta_ginibre(n, cfg.beta);
  SamplerConfig sc;
  sc.burn_in = 5000;
  sc.thin = 25;
  sc.seed = cfg.seed;
  const auto chain = run_chain(p, sc, samples);
  GasLawRun r;
  for (const auto& c : chain.samples) {
    r.sum_sq.push_back(sum_of_squares(c.points));
    r.sum_x.push_back(coordinate_sum(c.points)[0]);
  }
  return r;
}

CheckRow p_check(std::string id, const GofReport& g, double level) {
  const double p = g.p_value.value_or(0.0);
  return {std::move(id), g.statistic, p, level, p > level};
}

CheckRow residual_check(std::string id, double residual, double threshold) {
  return {std::move(id), residual, residual, threshold, residual <= threshold};
}

double circular_bulk_residual(long n) {
  const KernelContext ctx(n);
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double r = 0.8 * i / 40.0;
    worst = std::max(worst, std::abs(std::numbers::pi * scaled_one_point(ctx, {r, 0.0}) - 1.0));
  }
  return worst;
}

double circular_outside_value(long n) {
  const KernelContext ctx(n);
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double r = 1.2 + 0.8 * i / 40.0;
    worst = std::max(worst, scaled_one_point(ctx, {r, 0.0}));
  }
  return worst;
}

double remainder_violations() {
  long count = 0;
  for (long n : {2L, 5L, 10L, 30L}) {
    for (int i = 0; i < 40; ++i) {
      for (int j = 0; j < 40; ++j) {
        const std::complex<double> z = std::polar(2.0 * i / 39.0, 2.0 * std::numbers::pi * j / 40.0);
        if (truncation_error(n, z) > remainder_bound(n, z)) ++count;
      }
    }
  }
  return static_cast<double>(count);
}

double gamma_poisson_gap() {
  double worst = 0.0;
  for (long n = 1; n <= 30; ++n) {
    for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const auto [a, b] = gamma_poisson_tail(n, r);
      worst = std::max(worst, std::abs(a - b));
    }
  }
  return worst;
}

double euler_lagrange_ginibre() {
  PointCloud grid(2, 100);
  for (std::size_t i = 0; i < 100; ++i) {
    const double r = 0.99 * static_cast<double>(i) / 99.0;
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / 100.0 * 7.0;
    grid.point(i)[0] = r * std::cos(t);
    grid.point(i)[1] = r * std::sin(t);
  }
  return euler_lagrange_residual(Potential::quadratic(0.5), EquilibriumMeasure(UniformDisc{}), grid);
}

}  // namespace

void RunConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError("invalid value for --" + field + ": " + why);
  };
  if (n < 1) fail("n", "must be >= 1, got " + std::to_string(n));
  if (!(beta > 0.0) || !std::isfinite(beta)) fail("beta", "must be a positive finite number, got " + fmt(beta));
  if (chains < 1) fail("chains", "must be >= 1");
  if (samples < 1) fail("samples", "must be >= 1");
  if (thin < 1) fail("thin", "must be >= 1");
  if (dim < 2) fail("dim", "must be >= 2");
  if (threads < 0) fail("threads", "must be >= 0");
  if (suite != "default" && suite != "quick") fail("suite", "must be 'default' or 'quick', got '" + suite + "'");
  if (command == Command::Sample) {
    const bool matrix = ensemble != EnsembleKind::Coulomb && ensemble != EnsembleKind::Hermite;
    if (matrix && n > kMaxEigenDimension) fail("n", "matrix ensembles need n <= 256");
    if (ensemble == EnsembleKind::Hermite && n < 2) fail("n", "hermite needs n >= 2");
    if (ensemble == EnsembleKind::Truncated) {
      const long m_eff = effective_m(*this);
      if (m_eff <= n || m_eff > kMaxEigenDimension) fail("m", "truncation needs n < m <= 256");
    }
    if (ensemble == EnsembleKind::Product && (m < 0 || effective_m(*this) < 1)) fail("m", "product needs m >= 1");
    if (ensemble == EnsembleKind::Product && n > 128) fail("n", "product ensemble needs n <= 128");
  }
  if (command == Command::Report && inputs.empty()) fail("inputs", "report needs at least one data file");
}

std::string to_string(EnsembleKind e) {
  for (const auto& [name, kind] : ensemble_names()) {
    if (kind == e) return name;
  }
  return "unknown";
}

EnsembleKind parse_ensemble(const std::string& s) {
  const auto it = ensemble_names().find(s);
  if (it == ensemble_names().end()) throw ConfigError("invalid value for --ensemble: '" + s + "'");
  return it->second;
}

std::string version_string() { return COULOMB_VERSION; }

std::vector<std::string> suite_check_ids(const std::string& suite) {
  if (suite == "quick") {
    return {"radial_law_ks",    "circular_law_bulk",    "clt_variance_harmonic",
            "euler_lagrange_ginibre", "remainder_bound_violations", "gamma_poisson_identity"};
  }
  if (suite != "default") throw ConfigError("invalid value for --suite: '" + suite + "'");
  return {"radial_law_ks",   "sum_law_ks",       "kostlan_matrix_ks",
          "circular_law_bulk",     "circular_law_outside",   "spectral_radius_exact_ks",
          "clt_variance_radial",   "clt_variance_harmonic",  "euler_lagrange_ginibre",
          "remainder_bound_violations", "gamma_poisson_identity", "spherical_lift_uniform"};
}

std::vector<CheckRow> run_verify_suite(const RunConfig& cfg) {
  const auto ids = suite_check_ids(cfg.suite);
  const bool quick = cfg.suite == "quick";
  std::vector<CheckRow> rows;
  GasLawRun gas_laws;
  for (const auto& id : ids) {
    if (id == "radial_law_ks" || id == "sum_law_ks") {
      constexpr std::size_t kN = 6;
      if (gas_laws.sum_sq.empty()) gas_laws = gas_law_run(cfg, kN, quick ? 1000 : 4000);
      if (id == "radial_law_ks") {
        auto [unused, radial] = beta_ginibre_laws(kN, cfg.beta);
        if (cfg.self_test) {
          const auto& g = std::get<GammaLaw>(radial.kind());
          radial = DistributionSpec::gamma(g.shape + 1.0, g.rate);
        }
        rows.push_back(p_check(id, ks_test(gas_laws.sum_sq, radial), 0.01));
      } else {
        rows.push_back(p_check(id, ks_test(gas_laws.sum_x, beta_ginibre_laws(kN, cfg.beta).first), 0.01));
      }
    } else if (id == "kostlan_matrix_ks") {
      constexpr std::size_t kN = 16;
      constexpr std::size_t kReps = 200;
      auto matrix = pooled_moduli(sample_spectra(Ensemble::Ginibre, kN, 0, kReps, cfg.seed));
      std::vector<double> kostlan;
      for (std::size_t k = 0; k < kReps; ++k) {
        Rng rng(task_seed(cfg.seed ^ 0x5bd1e995ULL, k));
        for (double r : kostlan_moduli(kN, rng)) kostlan.push_back(r / std::sqrt(static_cast<double>(kN)));
      }
      rows.push_back(p_check(id, ks_two_sample(matrix, kostlan), 0.01));
    } else if (id == "circular_law_bulk") {
      rows.push_back(residual_check(id, circular_bulk_residual(1000), 1e-6));
    } else if (id == "circular_law_outside") {
      rows.push_back(residual_check(id, circular_outside_value(1000), 1e-6));
    } else if (id == "spectral_radius_exact_ks") {
      constexpr std::size_t kN = 64;
      std::vector<double> rho;
      for (const auto& s : sample_spectra(Ensemble::Ginibre, kN, 0, 300, cfg.seed ^ 0x2545f491ULL)) {
        double r = 0.0;
        for (const auto& z : s.eigenvalues) r = std::max(r, std::abs(z));
        rho.push_back(r);
      }
      rows.push_back(p_check(
          id, ks_test(rho, [](double t) { return spectral_radius_cdf(kN, t); }, "exact spectral radius law"),
          0.01));
    } else if (id == "clt_variance_radial") {
      constexpr long kN = 64;
      const auto stat = kostlan_radial_statistic_batch(kN, 4000, cfg.seed);
      const double nd = static_cast<double>(kN);
      const double exact = (nd + nd * (nd - 1.0) / 2.0) / (nd * nd);
      rows.push_back(residual_check(id, std::abs(sample_variance(stat) / exact - 1.0), 0.1));
    } else if (id == "clt_variance_harmonic") {
      rows.push_back(residual_check(id, std::abs(clt_variance(TestFunction::harmonic(1)) - 0.5), 1e-8));
    } else if (id == "euler_lagrange_ginibre") {
      rows.push_back(residual_check(id, euler_lagrange_ginibre(), 1e-12));
    } else if (id == "remainder_bound_violations") {
      rows.push_back(residual_check(id, remainder_violations(), 0.0));
    } else if (id == "gamma_poisson_identity") {
      rows.push_back(residual_check(id, gamma_poisson_gap(), 1e-12));
    } else if (id == "spherical_lift_uniform") {
      std::vector<std::array<double, 3>> lifted;
      for (const auto& s : sample_spectra(Ensemble::Spherical, 16, 0, 100, cfg.seed)) {
        for (const auto& z : s.eigenvalues) lifted.push_back(stereographic_lift(z));
      }
      rows.push_back(p_check(id, sphere_z_uniformity(lifted), 0.01));
    }
  }
  return rows;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  const auto table = draw_samples(cfg);
  with_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == Format::Json) {
      write_samples_json(os, cfg, table);
    } else {
      write_samples_csv(os, cfg, table);
    }
  });
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const auto rows = run_verify_suite(cfg);
  with_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == Format::Json) {
      Json doc;
      Json meta;
      for (const auto& [k, v] : metadata(cfg)) meta[k] = v;
      meta["suite"] = cfg.suite;
      meta["self_test"] = cfg.self_test;
      meta["version"] = version_string();
      doc["metadata"] = meta;
      Json arr = Json::array();
      for (const auto& r : rows) {
        arr.push_back({{"check_id", r.check_id},
                       {"statistic", r.statistic},
                       {"p_value_or_residual", r.p_value_or_residual},
                       {"threshold", r.threshold},
                       {"pass", r.pass}});
      }
      doc["checks"] = arr;
      os << doc.dump(1) << '\n';
    } else {
      os << "check_id,statistic,p_value_or_residual,threshold,pass\n";
      for (const auto& r : rows) {
        os << csv_field(r.check_id) << ',' << fmt(r.statistic) << ',' << fmt(r.p_value_or_residual) << ','
           << fmt(r.threshold) << ',' << (r.pass ? "true" : "false") << '\n';
      }
    }
  });
  bool all = true;
  for (const auto& r : rows) {
    if (!r.pass) {
      all = false;
      err << "FAILED " << r.check_id << ": value " << fmt(r.p_value_or_residual) << ", threshold "
          << fmt(r.threshold) << '\n';
    }
  }
  return all ? kExitOk : kExitCheckFailed;
}

namespace {

struct LoadedData {
  std::map<std::string, std::string> meta;
  std::vector<std::vector<double>> rows;
};

LoadedData load_data_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("inputs: cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  LoadedData data;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const Json doc = Json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("metadata") || !doc.contains("rows")) {
      throw ConfigError("inputs: '" + path + "' is not a sample file");
    }
    for (const auto& [k, v] : doc["metadata"].items()) data.meta[k] = v.get<std::string>();
    for (const auto& row : doc["rows"]) data.rows.push_back(row.get<std::vector<double>>());
    return data;
  }
  std::istringstream lines(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) data.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(std::stod(f));
    data.rows.push_back(std::move(row));
  }
  if (!header_seen || !data.meta.contains("ensemble")) throw ConfigError("inputs: '" + path + "' is not a sample file");
  return data;
}

struct SummaryRow {
  std::string file;
  std::string ensemble;
  long n = 0;
  std::size_t points = 0;
  double w1 = 0.0;
  double ks = 0.0;
  bool w1_trend_decreasing = false;
  bool ks_trend_decreasing = false;
};

SummaryRow summarize(const std::string& path) {
  const auto data = load_data_file(path);
  SummaryRow row;
  row.file = path;
  row.ensemble = data.meta.at("ensemble");
  row.n = std::stol(data.meta.at("n"));
  const auto kind = parse_ensemble(row.ensemble);
  const long m = data.meta.contains("m") ? std::stol(data.meta.at("m")) : 0;
  const int dim = data.meta.contains("dim") ? std::stoi(data.meta.at("dim")) : 2;

  std::vector<double> values;
  for (const auto& r : data.rows) {
    if (kind == EnsembleKind::Hermite) {
      values.push_back(r.at(2));
      continue;
    }
    double s = 0.0;
    for (std::size_t c = 2; c < r.size(); ++c) s += r[c] * r[c];
    values.push_back(std::sqrt(s));
  }
  row.points = values.size();

  MeasureLabel label = UniformDisc{};
  switch (kind) {
    case EnsembleKind::Coulomb:
      label = dim == 2 ? MeasureLabel(UniformDisc{}) : MeasureLabel(UniformBall{dim, 1.0});
      break;
    case EnsembleKind::Ginibre:
      break;
    case EnsembleKind::Spherical:
      label = SphericalHeavyTail{};
      break;
    case EnsembleKind::Truncated:
      label = TruncationLimit{static_cast<double>(row.n) / static_cast<double>(m == 0 ? 2 * row.n : m)};
      break;
    case EnsembleKind::Product:
      label = ProductLimit{static_cast<int>(m == 0 ? 2 : m)};
      break;
    case EnsembleKind::Hermite:
      label = Semicircle{};
      break;
  }
  const EquilibriumMeasure measure(label);
  auto cdf = [&measure](double r) { return measure.radial_cdf(r); };
  row.w1 = w1_to_cdf(values, cdf, measure.support_lower(), measure.support_upper());
  row.ks = values.size() >= kMinKsSamples ? ks_test(values, cdf, "limit").statistic
                                          : std::numeric_limits<double>::quiet_NaN();
  return row;
}

}  // namespace

int cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  cfg.validate();
  std::vector<SummaryRow> rows;
  for (const auto& path : cfg.inputs) rows.push_back(summarize(path));
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::tie(a.ensemble, a.n) < std::tie(b.ensemble, b.n);
  });
  // trends are computed per ensemble over increasing n
  for (std::size_t lo = 0; lo < rows.size();) {
    std::size_t hi = lo;
    std::vector<double> w1;
    std::vector<double> ks;
    while (hi < rows.size() && rows[hi].ensemble == rows[lo].ensemble) {
      w1.push_back(rows[hi].w1);
      ks.push_back(rows[hi].ks);
      ++hi;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      rows[i].w1_trend_decreasing = is_strictly_decreasing(w1);
      rows[i].ks_trend_decreasing = is_strictly_decreasing(ks);
    }
    lo = hi;
  }
  with_output(cfg, out, [&](std::ostream& os) {
    if (cfg.format == Format::Json) {
      Json arr = Json::array();
      for (const auto& r : rows) {
        arr.push_back({{"file", r.file},
                       {"ensemble", r.ensemble},
                       {"n", r.n},
                       {"points", r.points},
                       {"w1", r.w1},
                       {"ks", r.ks},
                       {"w1_trend_decreasing", r.w1_trend_decreasing},
                       {"ks_trend_decreasing", r.ks_trend_decreasing}});
      }
      os << Json{{"version", version_string()}, {"summary", arr}}.dump(1) << '\n';
    } else {
      os << "file,ensemble,n,points,w1,ks,w1_trend_decreasing,ks_trend_decreasing\n";
      for (const auto& r : rows) {
        os << csv_field(r.file) << ',' << r.ensemble << ',' << r.n << ',' << r.points << ',' << fmt(r.w1) << ','
           << fmt(r.ks) << ',' << (r.w1_trend_decreasing ? "true" : "false") << ','
           << (r.ks_trend_decreasing ? "true" : "false") << '\n';
      }
    }
  });
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coulomb gas sampler and verifier"};
  app.set_version_flag("--version", version_string());
  app.set_config("--config", "", "key=value file with option defaults; command-line flags win");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string ensemble = "ginibre";
  std::string format = "csv";
  app.add_option("--ensemble", ensemble, "coulomb, ginibre, spherical, truncated, product or hermite")
      ->capture_default_str();
  app.add_option("--n", cfg.n, "particle count / matrix size")->capture_default_str();
  app.add_option("--beta", cfg.beta, "inverse temperature (gas ensembles)")->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed")->capture_default_str();
  app.add_option("--chains", cfg.chains, "independent chains (gas ensembles)")->capture_default_str();
  app.add_option("--samples", cfg.samples, "samples per chain, or matrix replicas")->capture_default_str();
  app.add_option("--burn-in", cfg.burn_in, "burn-in steps per chain")->capture_default_str();
  app.add_option("--thin", cfg.thin, "steps between recorded samples")->capture_default_str();
  app.add_option("--dim", cfg.dim, "dimension of the coulomb ensemble")->capture_default_str();
  app.add_option("--m", cfg.m, "truncated: unitary size (default 2n); product: factors (default 2)")
      ->capture_default_str();
  app.add_option("--out", cfg.output_path, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->capture_default_str();
  app.add_option("--threads", cfg.threads, "worker threads (0 = OpenMP default)")->capture_default_str();
  app.add_option("--suite", cfg.suite, "verification suite: default or quick")->capture_default_str();
  app.add_flag("--self-test", cfg.self_test, "corrupt one oracle to check that the harness fails");

  auto* sample = app.add_subcommand("sample", "draw configurations or spectra");
  auto* verify = app.add_subcommand("verify", "run the verification battery");
  auto* report = app.add_subcommand("report", "summarize sample files");
  report->add_option("inputs", cfg.inputs, "sample files written by 'sample'");
  for (auto* sub : {sample, verify, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.ensemble = parse_ensemble(ensemble);
    if (format == "csv") {
      cfg.format = Format::Csv;
    } else if (format == "json") {
      cfg.format = Format::Json;
    } else {
      throw ConfigError("invalid value for --format: '" + format + "'");
    }
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    if (*sample) {
      cfg.command = Command::Sample;
      return cmd_sample(cfg, out, err);
    }
    if (*verify) {
      cfg.command = Command::Verify;
      return cmd_verify(cfg, out, err);
    }
    cfg.command = Command::Report;
    return cmd_report(cfg, out, err);
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cgas
