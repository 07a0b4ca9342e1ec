// glt-lab: build structured matrices, take geometric/Karcher means, and verify
// spectral distributions against GLT symbols.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "gltlab/csv.hpp"
#include "gltlab/experiments.hpp"

using namespace gltlab;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<long> parse_sizes(const std::string& s) {
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stol(tok));
  }
  if (out.empty()) throw UsageError("empty size list");
  return out;
}

std::vector<int> parse_multiindex(const std::string& s) {
  std::vector<int> out;
  for (long v : parse_sizes(s)) out.push_back(int(v));
  return out;
}

cdouble parse_complex(const std::string& s) {
  // "re" or "re:im"
  const size_t colon = s.find(':');
  if (colon == std::string::npos) return cdouble(std::stod(s), 0.0);
  return cdouble(std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1)));
}

std::vector<cdouble> parse_complex_list(const std::string& s) {
  std::vector<cdouble> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_complex(tok));
  }
  return out;
}

// d = 1: "k:re[:im],..."; d >= 2: entries separated by ';', key components by
// ',' e.g. "0,0:4;1,0:-1".
TrigPolynomial parse_coeff_map(const std::string& s, int d) {
  TrigPolynomial p(d, 1);
  std::stringstream ss(s);
  std::string entry;
  const char sep = (d == 1) ? ',' : ';';
  while (std::getline(ss, entry, sep)) {
    if (entry.empty()) continue;
    const size_t colon = entry.find(':');
    if (colon == std::string::npos) throw UsageError("bad coefficient entry: " + entry);
    std::vector<int> key;
    if (d == 1) {
      key = {std::stoi(entry.substr(0, colon))};
    } else {
      std::stringstream ks(entry.substr(0, colon));
      std::string comp;
      while (std::getline(ks, comp, ',')) key.push_back(std::stoi(comp));
    }
    Matrix F(1, 1);
    F(0, 0) = parse_complex(entry.substr(colon + 1));
    p.set(key, F);
  }
  return p;
}

// Small named vocabulary for sampling coefficients.
std::function<double(double)> parse_scalar_fn(const std::string& name) {
  if (name == "one") return [](double) { return 1.0; };
  if (name == "x") return [](double x) { return x; };
  if (name == "x^2") return [](double x) { return x * x; };
  if (name == "step") return [](double x) { return x < 0.5 ? 0.0 : 1.0; };
  if (name.rfind("const:", 0) == 0) {
    const double v = std::stod(name.substr(6));
    return [v](double) { return v; };
  }
  throw UsageError("unknown function name: " + name + " (use one|x|x^2|step|const:<v>)");
}

std::function<double(double, double)> parse_scalar_fn2(const std::string& name) {
  if (name == "x^2+y^2") return [](double x, double y) { return x * x + y * y; };
  if (name == "1/x+1/y") return [](double x, double y) { return 1.0 / x + 1.0 / y; };
  auto f = parse_scalar_fn(name);
  return [f](double x, double) { return f(x); };
}

DecayLog parse_log_mode(const std::string& s) {
  if (s == "base2") return DecayLog::base2;
  if (s == "natural") return DecayLog::natural;
  if (s == "base10") return DecayLog::base10;
  throw UsageError("unknown log mode: " + s + " (use base2|natural|base10)");
}

int cmd_build(const std::string& family, const std::string& n_str, const std::string& coeffs,
              const std::string& col, const std::string& omega, const std::string& fn,
              const std::string& kind, const std::string& which, double gamma, double b,
              const std::string& out) {
  Matrix M;
  if (family == "toeplitz") {
    MultiIndex n(parse_multiindex(n_str));
    M = toeplitz(n, parse_coeff_map(coeffs, n.levels()));
  } else if (family == "circulant") {
    auto c = parse_complex_list(col);
    M = circulant(int(c.size()), c);
  } else if (family == "omega") {
    auto c = parse_complex_list(col);
    M = omega_circulant(int(c.size()), parse_complex(omega), c);
  } else if (family == "tau") {
    const int n = std::stoi(n_str);
    std::vector<double> a;
    for (auto v : parse_complex_list(coeffs)) a.push_back(v.real());
    M = tau_matrix(n, a);
  } else if (family == "hankel") {
    const int n = std::stoi(n_str);
    M = hankel(n, parse_complex_list(coeffs));
  } else if (family == "diag") {
    MultiIndex n(parse_multiindex(n_str));
    if (n.levels() == 1)
      M = diagonal_sampling(n, SamplingFn::scalar(parse_scalar_fn(fn)));
    else if (n.levels() == 2)
      M = diagonal_sampling(n, SamplingFn::scalar2(parse_scalar_fn2(fn)));
    else
      throw UsageError("diag: only d = 1, 2 exposed on the command line");
  } else if (family == "fd4") {
    M = fd4_matrix(std::stoi(n_str), parse_scalar_fn(fn));
  } else if (family == "fd4-2d") {
    auto n = parse_multiindex(n_str);
    if (n.size() != 2) throw UsageError("fd4-2d: --n n1,n2");
    M = fd4_matrix_2d(n[0], n[1], parse_scalar_fn(fn));
  } else if (family == "bspline") {
    BsplineKind k;
    if (kind == "cubic")
      k = BsplineKind::cubic_C1;
    else if (kind == "quadratic")
      k = BsplineKind::quadratic_C0;
    else
      throw UsageError("bspline: --kind quadratic|cubic");
    BsplineWhich w;
    if (which == "stiffness")
      w = BsplineWhich::stiffness;
    else if (which == "mass")
      w = BsplineWhich::mass;
    else if (which == "sum")
      w = BsplineWhich::sum;
    else
      throw UsageError("bspline: --which stiffness|mass|sum");
    M = bspline_toeplitz(k, w, std::stoi(n_str));
  } else if (family == "cw-restricted") {
    M = curie_weiss_restricted({gamma, b, std::stoi(n_str) - 1});
  } else if (family == "cw-full") {
    M = curie_weiss_full({gamma, b, std::stoi(n_str)});
  } else {
    throw UsageError("unknown family: " + family);
  }
  if (out.empty())
    write_matrix_csv(M, std::cout);
  else
    write_matrix_csv(M, out);
  return 0;
}

bool is_experiment_id(const std::string& s) {
  for (const auto& id : experiment_ids())
    if (id == s) return true;
  return false;
}

GridSymbol resolve_symbol(const std::string& spec, double gamma, double b, long samples) {
  std::vector<int> mx, mt;
  if (spec == "cw") {
    default_grid_sizes(1, mx, mt, samples);
    return sample_symbol(curie_weiss_symbol(gamma, b), mx, mt);
  }
  if (is_experiment_id(spec)) {
    detail::ExperimentDef def = detail::make_def(spec);
    default_grid_sizes(def.d, mx, mt, samples);
    if (def.candidate_pair)
      return candidate_symbol(def.candidate_pair->first, def.candidate_pair->second, mx, mt);
    return sample_symbol(*def.symbol, mx, mt);
  }
  return read_grid_symbol_csv(spec);  // treat as a GridSymbol CSV path
}

json load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config: " + path);
  json j;
  is >> j;
  if (!j.is_object()) throw UsageError("config must be a JSON object with flat keys");
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured matrix-sequences, geometric means and GLT symbol checks"};
  app.require_subcommand(1);

  // ---- build ----
  std::string b_family, b_n, b_coeffs, b_col, b_omega = "1", b_fn = "one";
  std::string b_kind = "quadratic", b_which = "stiffness", b_out;
  double b_gamma = 1.0, b_b = 1.0;
  auto* build = app.add_subcommand("build", "construct a structured matrix, write CSV");
  build
      ->add_option(
          "--family", b_family,
          "toeplitz|circulant|omega|tau|hankel|diag|fd4|fd4-2d|bspline|cw-restricted|cw-full")
      ->required();
  build->add_option("--n", b_n, "order (comma-separated per level for multilevel)");
  build->add_option("--coeffs", b_coeffs, "coefficients, e.g. \"0:2,1:-1,-1:-1\"");
  build->add_option("--col", b_col, "first column (circulant/omega), e.g. \"2,-1,-1\"");
  build->add_option("--omega", b_omega, "omega value re[:im]");
  build->add_option("--fn,--alpha", b_fn,
                    "sampling function: one|x|x^2|step|const:<v> (2D adds x^2+y^2, 1/x+1/y)");
  build->add_option("--kind", b_kind, "bspline kind: quadratic|cubic");
  build->add_option("--which", b_which, "bspline part: stiffness|mass|sum");
  build->add_option("--gamma", b_gamma, "CW coupling");
  build->add_option("--b", b_b, "CW transverse field");
  build->add_option("--out", b_out, "output CSV (stdout when omitted)");

  // ---- mean ----
  std::string m_a, m_b, m_out;
  auto* mean = app.add_subcommand("mean", "ALM geometric mean of two HPD matrices");
  mean->add_option("--a", m_a)->required();
  mean->add_option("--b", m_b)->required();
  mean->add_option("--out", m_out)->required();

  // ---- karcher ----
  std::string k_inputs, k_out, k_theta = "adaptive";
  double k_tol = tol::karcher_residual;
  int k_maxiter = 200;
  auto* karcher = app.add_subcommand("karcher", "Karcher mean of k >= 2 HPD matrices");
  karcher->add_option("--inputs", k_inputs, "comma-separated CSV paths")->required();
  karcher->add_option("--tol", k_tol, "residual tolerance");
  karcher->add_option("--max-iter", k_maxiter);
  karcher->add_option("--theta", k_theta, "adaptive or a fixed value");
  karcher->add_option("--out", k_out)->required();

  // ---- spectrum ----
  std::string s_matrix, s_symbol, s_out, s_overlay;
  double s_threshold = 0.1, s_gamma = 1.0, s_b = 1.0;
  long s_samples = 2000;
  auto* spectrum = app.add_subcommand("spectrum", "compare a matrix spectrum with a symbol");
  spectrum->add_option("--matrix", s_matrix)->required();
  spectrum->add_option("--symbol", s_symbol, "cw | <experiment id> | grid-symbol CSV path")
      ->required();
  spectrum->add_option("--threshold", s_threshold);
  spectrum->add_option("--gamma", s_gamma);
  spectrum->add_option("--b", s_b);
  spectrum->add_option("--samples", s_samples);
  spectrum->add_option("--out", s_out, "summary CSV")->required();
  spectrum->add_option("--overlay", s_overlay, "optional eigenvalue/quantile overlay CSV");

  // ---- decay ----
  std::string d_id, d_sizes = "40,80,160,320", d_log = "base2", d_out;
  auto* decay = app.add_subcommand("decay", "extremal decay table of an experiment");
  decay->add_option("--experiment", d_id)->required();
  decay->add_option("--sizes", d_sizes);
  decay->add_option("--log", d_log, "base2|natural|base10");
  decay->add_option("--out", d_out, "output CSV (stdout when omitted)");

  // ---- experiment ----
  std::string e_id, e_config, e_outdir, e_sizes;
  double e_threshold = -1.0;
  auto* experiment = app.add_subcommand("experiment", "run a registered experiment end-to-end");
  experiment->add_option("--id", e_id);
  experiment->add_option("--config", e_config, "JSON file with flat keys mirroring the flags");
  experiment->add_option("--outdir", e_outdir);
  experiment->add_option("--sizes", e_sizes);
  experiment->add_option("--threshold", e_threshold);

  // ---- cw ----
  std::string c_sizes = "40,80,160,320", c_log = "base10", c_outdir;
  double c_gamma = 1.0, c_b = 1.0, c_threshold = 0.1;
  double c_refmin = std::numeric_limits<double>::quiet_NaN();
  double c_refmax = std::numeric_limits<double>::quiet_NaN();
  bool c_full = false;
  int c_full_min = 6, c_full_max = 11;
  auto* cw = app.add_subcommand("cw", "restricted Curie-Weiss experiment (+ optional full sweep)");
  cw->add_option("--gamma", c_gamma);
  cw->add_option("--b", c_b);
  cw->add_option("--sizes", c_sizes, "matrix orders N+1");
  cw->add_option("--threshold", c_threshold);
  cw->add_option("--log", c_log, "base2|natural|base10");
  cw->add_option("--ref-min", c_refmin, "override the minimal-eigenvalue reference m");
  cw->add_option("--ref-max", c_refmax, "override the maximal-eigenvalue reference M");
  cw->add_flag("--full-sweep", c_full, "also run the full 2^N model");
  cw->add_option("--full-n-min", c_full_min, "smallest N in the full sweep");
  cw->add_option("--full-n-max", c_full_max, "largest N in the full sweep");
  cw->add_option("--outdir", c_outdir)->required();

  try {
    app.parse(argc, argv);

    if (build->parsed())
      return cmd_build(b_family, b_n, b_coeffs, b_col, b_omega, b_fn, b_kind, b_which, b_gamma,
                       b_b, b_out);

    if (mean->parsed()) {
      Matrix G = alm_mean(read_matrix_csv(m_a), read_matrix_csv(m_b));
      write_matrix_csv(G, m_out);
      return 0;
    }

    if (karcher->parsed()) {
      std::vector<Matrix> inputs;
      std::stringstream ss(k_inputs);
      std::string path;
      while (std::getline(ss, path, ','))
        if (!path.empty()) inputs.push_back(read_matrix_csv(path));
      KarcherConfig cfg;
      cfg.residual_tol = k_tol;
      cfg.max_iterations = k_maxiter;
      if (k_theta != "adaptive") {
        cfg.theta_mode = KarcherConfig::Theta::fixed;
        cfg.theta_value = std::stod(k_theta);
      }
      KarcherResult res = karcher_mean(inputs, cfg);
      write_matrix_csv(res.mean, k_out);
      std::cerr << "karcher: iterations=" << res.iterations
                << " residual=" << res.residual_history.back()
                << " converged=" << (res.converged ? "yes" : "no") << "\n";
      return res.converged ? 0 : 3;
    }

    if (spectrum->parsed()) {
      Matrix A = read_matrix_csv(s_matrix);
      GridSymbol g = resolve_symbol(s_symbol, s_gamma, s_b, s_samples);
      SpectralReport rep = compare_distribution(A, g, s_threshold);
      std::ofstream os(s_out);
      if (!os) throw Error("cannot open for writing: " + s_out);
      write_report_summary_header(os);
      write_report_summary_row(rep, os);
      if (!s_overlay.empty()) {
        std::ofstream ov(s_overlay);
        if (!ov) throw Error("cannot open for writing: " + s_overlay);
        write_overlay_csv(rep, ov);
      }
      return 0;
    }

    if (decay->parsed()) {
      if (!is_experiment_id(d_id)) throw UsageError("unknown experiment id: " + d_id);
      ExperimentConfig cfg;
      cfg.id = d_id;
      cfg.sizes = parse_sizes(d_sizes);
      if (cfg.sizes.size() < 2) throw UsageError("decay: need at least two sizes");
      ExperimentResult res = run_gm_example(cfg);
      DecayTable t = res.min_decay;
      const DecayLog mode = parse_log_mode(d_log);
      t.log_mode = mode;
      for (size_t j = 0; j + 1 < t.rows.size(); ++j)
        if (!t.rows[j].flagged && !t.rows[j + 1].flagged)
          t.rows[j].alpha = decay_log(mode, t.rows[j].tau / t.rows[j + 1].tau);
      if (d_out.empty()) {
        write_decay_csv(t, std::cout);
      } else {
        std::ofstream os(d_out);
        if (!os) throw Error("cannot open for writing: " + d_out);
        write_decay_csv(t, os);
      }
      for (const auto& row : t.rows)
        if (row.flagged) return 3;
      return 0;
    }

    if (experiment->parsed()) {
      ExperimentConfig cfg;
      if (!e_config.empty()) {
        const json j = load_config(e_config);
        if (j.contains("id")) cfg.id = j["id"].get<std::string>();
        if (j.contains("outdir")) cfg.outdir = j["outdir"].get<std::string>();
        if (j.contains("threshold")) cfg.threshold = j["threshold"].get<double>();
        if (j.contains("sizes")) {
          if (j["sizes"].is_string())
            cfg.sizes = parse_sizes(j["sizes"].get<std::string>());
          else
            cfg.sizes = j["sizes"].get<std::vector<long>>();
        }
      }
      // flags override file values
      if (!e_id.empty()) cfg.id = e_id;
      if (!e_outdir.empty()) cfg.outdir = e_outdir;
      if (!e_sizes.empty()) cfg.sizes = parse_sizes(e_sizes);
      if (e_threshold >= 0.0) cfg.threshold = e_threshold;
      if (cfg.id.empty()) throw UsageError("experiment: --id (or config id) required");
      if (!is_experiment_id(cfg.id)) throw UsageError("unknown experiment id: " + cfg.id);
      if (cfg.outdir.empty()) throw UsageError("experiment: --outdir (or config outdir) required");
      ExperimentResult res = run_gm_example(cfg);
      for (size_t i = 0; i < res.karcher_converged.size(); ++i)
        if (!res.karcher_converged[i]) {
          std::cerr << "experiment: Karcher mean did not converge at size " << res.sizes[i]
                    << "\n";
          return 3;
        }
      std::cout << "wrote " << cfg.outdir << "/" << cfg.id << "_*.csv\n";
      return 0;
    }

    if (cw->parsed()) {
      CWExperimentConfig cfg;
      cfg.gamma = c_gamma;
      cfg.b = c_b;
      cfg.sizes = parse_sizes(c_sizes);
      cfg.threshold = c_threshold;
      cfg.log_mode = parse_log_mode(c_log);
      cfg.reference_min = c_refmin;
      cfg.reference_max = c_refmax;
      cfg.full_sweep = c_full;
      cfg.full_n_min = c_full_min;
      cfg.full_n_max = c_full_max;
      cfg.outdir = c_outdir;
      run_cw_experiment(cfg);
      std::cout << "wrote " << c_outdir << "/cw_*.csv\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
