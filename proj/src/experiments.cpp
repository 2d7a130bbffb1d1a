#include "minicubes/experiments.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "minicubes/arcs.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/exp_sums.hpp"
#include "minicubes/oscillatory.hpp"
#include "minicubes/parallel.hpp"
#include "minicubes/rep_count.hpp"
#include "minicubes/report.hpp"
#include "minicubes/simd.hpp"
#include "minicubes/smooth_sets.hpp"
#include "minicubes/weyl.hpp"

namespace minicubes {

ResidualSweep residual_sweep(double P, std::int64_t q_max, int samples) {
  require(P >= 1.0, "P must be at least 1");
  require(q_max >= 1 && q_max <= kResidualQCap, "residual sweep needs 1 <= q_max <= 50");
  require(samples >= 1, "need at least one sample per arc");
  const CubeList f(WeylSumSpec::interval(P, 2.0 * P));
  const double P3 = P * P * P;
  ResidualSweep sweep;
  sweep.P = P;
  sweep.q_max = q_max;
  for (std::int64_t q = 1; q <= q_max; ++q) {
    for (std::int64_t a = 0; a < q; ++a) {
      if (gcd_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q)) != 1) continue;
      const std::complex<double> sq = cubic_gauss_sum(static_cast<std::uint64_t>(q), a) / static_cast<double>(q);
      const double hw = static_cast<double>(q_max) / (static_cast<double>(q) * P3);
      for (int s = 0; s < samples; ++s) {
        const double frac = samples == 1 ? 0.0 : -1.0 + 2.0 * s / (samples - 1.0);
        const double beta = frac * hw;
        const auto fv = f.evaluate_rational(a, static_cast<std::uint64_t>(q), beta);
        const auto fstar = sq * P * v_unit(beta * P3);
        ResidualRow row;
        row.a = a;
        row.q = q;
        row.beta = beta;
        row.residual = std::abs(fv - fstar);
        row.envelope = std::sqrt(static_cast<double>(q)) * std::sqrt(1.0 + P3 * std::fabs(beta));
        row.ratio = row.residual / row.envelope;
        if (row.ratio > sweep.max_ratio) {
          sweep.max_ratio = row.ratio;
          sweep.worst = row;
        }
        sweep.rows.push_back(row);
      }
    }
  }
  return sweep;
}

namespace {

struct Options {
  std::optional<std::uint64_t> n;
  std::optional<std::uint64_t> n_lo;
  std::optional<std::uint64_t> n_hi;
  std::uint64_t N = 4'000'000;
  double theta = 1.0 / 3.0;
  double eta = kDefaultEta;
  double tau = kDefaultTau;
  std::optional<double> L;
  std::optional<double> Y;
  std::optional<std::uint64_t> J;
  std::uint64_t qmax = 2000;
  double tol = 1e-9;
  std::optional<std::uint64_t> grid;
  std::string shape = "G4";
  std::string style = "M";
  std::optional<double> cutoff;
  std::string out;
  std::string format = "csv";
  unsigned workers = 0;
  std::uint64_t seed = 1;
  // Command-specific inputs.
  std::optional<std::uint64_t> q;
  std::optional<std::int64_t> a;
  std::optional<double> P;
  std::optional<double> R;
  std::optional<double> X;
  std::optional<double> Z;
  std::string kind = "f";
  std::string alpha_grid = "0:1:11";
  std::string variant = "r";
  bool allow_zero = false;
  double C = 1.0;
  int samples = 21;
};

struct Output {
  Table table;
  nlohmann::json summary = nlohmann::json::object();
  bool bare_integers = false;  // one value per line, no header
};

Parameters params_from(const Options& o) {
  ParameterOverrides ov;
  ov.L = o.L;
  ov.Y = o.Y;
  ov.J = o.J;
  return derive_parameters(o.N, o.theta, o.tau, o.eta, ov);
}

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw PreconditionError(std::string("missing required flag ") + flag);
  return *v;
}

Output cmd_count(const Options& o) {
  const std::uint64_t n = need(o.n, "--n");
  RepCountReport rep;
  if (o.variant == "r") {
    rep = count_r(n, o.theta, CountOptions{o.allow_zero});
  } else if (o.variant == "rho") {
    rep = count_rho(n, params_from(o));
  } else if (o.variant == "sigma") {
    const Parameters p = params_from(o);
    rep = count_sigma(n, o.theta, p.P, p.R);
  } else {
    throw PreconditionError("unknown --variant '" + o.variant + "' (expected r, rho, sigma)");
  }
  Output out;
  out.table.columns = {"n", "theta", "variant", "count"};
  out.table.rows.push_back({rep.n, rep.theta, count_variant_name(rep.variant), rep.count});
  return out;
}

Output cmd_scan(const Options& o, std::ostream& err) {
  const std::uint64_t lo = need(o.n_lo, "--n-lo");
  const std::uint64_t hi = need(o.n_hi, "--n-hi");
  const ScanResult res = batch_scan(lo, hi, o.theta, o.qmax);
  Output out;
  out.table.columns = {"n", "theta", "count", "series", "main_term", "ratio", "exceptional"};
  for (const auto& r : res.rows) {
    out.table.rows.push_back({r.n, r.theta, r.count, r.series ? Cell{*r.series} : Cell{},
                              r.predicted ? Cell{*r.predicted} : Cell{},
                              r.ratio ? Cell{*r.ratio} : Cell{}, r.exceptional()});
  }
  const auto& s = res.summary;
  out.summary = {{"n_lo", s.n_lo},
                 {"n_hi", s.n_hi},
                 {"theta", s.theta},
                 {"Q_max", s.Q_max},
                 {"size", s.size},
                 {"exceptional", s.exceptional},
                 {"exceptional_fraction", s.exceptional_fraction},
                 {"ratio_defined", s.ratio_defined},
                 {"mean_ratio", s.mean_ratio},
                 {"median_ratio", s.median_ratio},
                 {"mean_count", s.mean_count}};
  Table human;
  human.columns = {"window", "exceptional", "fraction", "mean_ratio", "median_ratio", "mean_count"};
  human.rows.push_back({"(" + std::to_string(s.n_lo) + "," + std::to_string(s.n_hi) + "]", s.exceptional,
                        s.exceptional_fraction, s.mean_ratio, s.median_ratio, s.mean_count});
  write_human(err, human);
  return out;
}

Output cmd_predict(const Options& o) {
  const std::uint64_t n = need(o.n, "--n");
  const SeriesReport rep = singular_series_truncated(n, o.qmax);
  const double mt = gamma_constant() * rep.value * std::pow(static_cast<double>(n), 2.0 * o.theta - 1.0 / 3.0);
  Output out;
  out.table.columns = {"n", "theta", "Qmax", "series", "tail", "gamma_const", "main_term"};
  out.table.rows.push_back({n, o.theta, o.qmax, rep.value, rep.tail_estimate, gamma_constant(), mt});
  out.summary["imag_flagged"] = rep.imag_flagged;
  return out;
}

Output cmd_expsum(const Options& o) {
  Output out;
  if (o.q) {
    const std::uint64_t q = *o.q;
    require(q >= 1, "--q must be positive");
    out.table.columns = {"q", "a", "re", "im"};
    if (o.a) {
      const auto s = cubic_gauss_sum(q, *o.a);
      out.table.rows.push_back({q, *o.a, s.real(), s.imag()});
    } else {
      for (std::uint64_t a = 0; a < q; ++a) {
        const auto s = cubic_gauss_sum(q, static_cast<std::int64_t>(a));
        out.table.rows.push_back({q, static_cast<std::int64_t>(a), s.real(), s.imag()});
      }
    }
    return out;
  }
  const std::uint64_t n = need(o.n, "--n or --q");
  const SeriesReport rep = singular_series_truncated(n, o.qmax);
  out.table.columns = {"n", "Qmax", "series", "tail"};
  out.table.rows.push_back({n, o.qmax, rep.value, rep.tail_estimate});
  out.summary["imag_flagged"] = rep.imag_flagged;
  return out;
}

Output cmd_smooth(const Options& o) {
  SmoothSet s;
  if (o.X || o.Z) {
    s = smooth_interval_set(need(o.X, "--X"), need(o.Z, "--Z"), o.eta);
  } else {
    s = smooth_set(need(o.R, "--R"), o.eta);
  }
  Output out;
  out.bare_integers = true;
  out.table.columns = {"m"};
  for (auto m : s.members) out.table.rows.push_back({m});
  out.summary = {{"size", s.members.size()}, {"prime_cap", s.prime_cap}};
  return out;
}

Output cmd_genfun(const Options& o) {
  const Parameters p = params_from(o);
  double lo = 0, hi = 1;
  long long count = 0;
  {
    std::istringstream is(o.alpha_grid);
    char c1 = 0, c2 = 0;
    if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1)
      throw PreconditionError("--alpha-grid must look like lo:hi:count");
  }
  // v and w are integrals in beta; the grid then runs over beta.
  const bool integral = o.kind == "v" || o.kind == "w";
  std::optional<CubeList> cubes;
  if (!integral) cubes.emplace(spec_by_name(o.kind, p));
  Output out;
  out.table.columns = {integral ? "beta" : "alpha", "re", "im"};
  for (long long j = 0; j < count; ++j) {
    const double alpha = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(count - 1);
    std::complex<double> v;
    if (!integral) v = cubes->evaluate(alpha);
    else if (o.kind == "v") v = v_integral(alpha, p.P, o.tol).value;
    else v = w_integral(alpha, p.P, o.tol).value;
    out.table.rows.push_back({alpha, v.real(), v.imag()});
  }
  out.summary = {{"kind", o.kind}, {"P", p.P}, {"R", p.R}};
  if (cubes) out.summary["terms"] = cubes->size();
  return out;
}

Output cmd_arcs(const Options& o, std::ostream& err) {
  const Parameters p = params_from(o);
  const ArcDissection d = ArcDissection::build(parse_arc_style(o.style), p, o.cutoff);
  Output out;
  out.table.columns = {"q", "a", "center", "half_width"};
  for (const auto& arc : d.arcs())
    out.table.rows.push_back({arc.label.q, arc.label.a, arc.center, arc.half_width});
  out.summary = {{"style", o.style}, {"cutoff", d.cutoff()}, {"arcs", d.arcs().size()},
                 {"overlapping", d.overlapping()}, {"L_clamped", p.L_clamped}};
  if (!d.overlapping()) {
    out.summary["measure"] = dissection_measure(d);
    err << "total measure " << format_real(dissection_measure(d), kHumanDigits) << '\n';
  } else {
    err << "arcs overlap; measure undefined\n";
  }
  return out;
}

Output cmd_meanvalue(const Options& o) {
  const std::uint64_t grid = need(o.grid, "--grid");
  ArcIntegrand integrand;
  std::optional<std::uint64_t> exact;
  auto pair = [](const WeylSumSpec& s, unsigned e) {
    return std::vector<IntegrandFactor>{{s, e, false}, {s, e, true}};
  };
  if (o.shape == "G4" || o.shape == "G2") {
    const double R = need(o.R, "--R");
    require(R >= 1.0, "--R must be at least 1");
    const auto G = WeylSumSpec::interval(0.0, R);
    const unsigned k = o.shape == "G4" ? 2 : 1;
    integrand = ArcIntegrand::single(pair(G, k));
    exact = hua_count(static_cast<std::uint64_t>(tolerant_floor(R)), k);
  } else {
    const MeanShape shape = parse_mean_shape(o.shape);
    const double P = need(o.P, "--P");
    const double R = need(o.R, "--R");
    ParameterOverrides ov;
    ov.Y = o.Y;
    ov.J = o.J;
    const Parameters tp = toy_parameters(P, R, o.eta, ov);
    const auto f = spec_f(tp);
    const auto h = spec_h(tp);
    const auto K = spec_K(tp);
    std::vector<IntegrandFactor> factors;
    auto add = [&](const std::vector<IntegrandFactor>& fs) { factors.insert(factors.end(), fs.begin(), fs.end()); };
    switch (shape) {
      case MeanShape::f2h6:
        add(pair(f, 1));
        add(pair(h, 3));
        break;
      case MeanShape::K2h6:
        add(pair(K, 1));
        add(pair(h, 3));
        break;
      case MeanShape::K8:
        add(pair(K, 4));
        break;
      case MeanShape::f2K2h4:
        add(pair(f, 1));
        add(pair(K, 1));
        add(pair(h, 2));
        break;
    }
    integrand = ArcIntegrand::single(factors);
    exact = mixed_mean_count(P, R, o.eta, shape, ov);
  }
  const auto v = mean_value_grid(integrand, grid);
  Output out;
  out.table.columns = {"shape", "grid", "re", "im", "exact_count"};
  out.table.rows.push_back({o.shape, grid, v.real(), v.imag(), exact ? Cell{*exact} : Cell{}});
  out.summary = {{"degree", integrand_degree(integrand)}};
  return out;
}

Output cmd_residual(const Options& o, std::ostream& err) {
  const double P = need(o.P, "--P");
  const ResidualSweep sw = residual_sweep(P, static_cast<std::int64_t>(o.qmax), o.samples);
  Output out;
  out.table.columns = {"q", "a", "beta", "residual", "envelope", "ratio"};
  for (const auto& r : sw.rows) out.table.rows.push_back({r.q, r.a, r.beta, r.residual, r.envelope, r.ratio});
  out.summary = {{"max_ratio", sw.max_ratio}, {"worst_q", sw.worst.q}, {"worst_a", sw.worst.a},
                 {"worst_beta", sw.worst.beta}};
  err << "max residual/envelope " << format_real(sw.max_ratio, kHumanDigits) << " at a/q = " << sw.worst.a
      << "/" << sw.worst.q << '\n';
  return out;
}

std::map<std::string, std::string> echo_config(const CLI::App& app) {
  std::map<std::string, std::string> cfg;
  for (const CLI::Option* opt : app.get_options()) {
    if (opt->count() == 0) continue;
    const std::string name = opt->get_name(false, true);
    if (name == "--help" || name == "-h") continue;
    std::string joined;
    for (const auto& r : opt->results()) joined += (joined.empty() ? "" : " ") + r;
    cfg[opt->get_single_name()] = joined;
  }
  return cfg;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two cubes plus two minicubes: counting, singular series, arcs and quadrature"};
  app.name("minicubes");
  Options o;

  app.add_option("--n", o.n, "target integer");
  app.add_option("--n-lo", o.n_lo, "scan window start (exclusive)");
  app.add_option("--n-hi", o.n_hi, "scan window end (inclusive)");
  app.add_option("--N", o.N, "window base N, P = (N/4)^(1/3)");
  app.add_option("--theta", o.theta, "minicube exponent in (0, 1/3]");
  app.add_option("--eta", o.eta, "smoothness exponent in (0,1)");
  app.add_option("--tau", o.tau, "tau > 0, J = floor(tau/2 ln P)");
  app.add_option("--L", o.L, "arc cutoff override, 1 <= L <= N");
  app.add_option("--Y", o.Y, "prime range top override");
  app.add_option("--J", o.J, "prime range depth override");
  app.add_option("--qmax", o.qmax, "series truncation / arc denominator cap");
  app.add_option("--tol", o.tol, "quadrature tolerance");
  app.add_option("--grid", o.grid, "mean-value grid size");
  app.add_option("--shape", o.shape, "mean-value shape: G4 G2 f2h6 K2h6 K8 f2K2h4");
  app.add_option("--style", o.style, "arc style: P M N");
  app.add_option("--cutoff", o.cutoff, "arc cutoff X");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", o.workers, "worker threads (0 = all cores)");
  app.add_option("--seed", o.seed, "recorded in the manifest");
  app.add_option("--q", o.q, "modulus for expsum");
  app.add_option("--a", o.a, "numerator for expsum");
  app.add_option("--P", o.P, "scale P for meanvalue / residual");
  app.add_option("--R", o.R, "bound R for smooth / meanvalue");
  app.add_option("--X", o.X, "B(X,Z) lower end for smooth");
  app.add_option("--Z", o.Z, "B(X,Z) smoothness base for smooth");
  app.add_option("--kind", o.kind, "generating function: f h K F F0 G, or v w over beta");
  app.add_option("--alpha-grid", o.alpha_grid, "lo:hi:count");
  app.add_option("--variant", o.variant, "count variant: r rho sigma");
  app.add_flag("--allow-zero", o.allow_zero, "admit zero variables in count");
  app.add_option("--C", o.C, "density constant C");
  app.add_option("--samples", o.samples, "samples per arc for residual");
  CLI::Option* config = app.set_config("--config", "", "key=value file (N, theta, tau, eta, L, seed, tol)");
  app.allow_config_extras(false);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"count", "exact representation count (--n --theta [--variant r|rho|sigma])"},
      {"scan", "window scan (--n-lo --n-hi --theta --qmax)"},
      {"predict", "singular series and main term (--n --theta --qmax)"},
      {"expsum", "cubic Gauss sums (--q [--a]) or series (--n --qmax)"},
      {"smooth", "smooth set A(R) (--R --eta) or B(X,Z) (--X --Z --eta)"},
      {"genfun", "Weyl sum on an alpha grid (--kind --alpha-grid --N --theta)"},
      {"arcs", "arc table (--style --cutoff --N)"},
      {"meanvalue", "full-circle moment on a grid (--shape --grid --R [--P])"},
      {"residual", "major-arc approximation residuals (--P --qmax [--samples])"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    require(o.format == "csv" || o.format == "json", "--format must be csv or json");
    set_worker_count(o.workers);
    Stopwatch watch;
    Output result;
    if (command == "count") result = cmd_count(o);
    else if (command == "scan") result = cmd_scan(o, err);
    else if (command == "predict") result = cmd_predict(o);
    else if (command == "expsum") result = cmd_expsum(o);
    else if (command == "smooth") result = cmd_smooth(o);
    else if (command == "genfun") result = cmd_genfun(o);
    else if (command == "arcs") result = cmd_arcs(o, err);
    else if (command == "meanvalue") result = cmd_meanvalue(o);
    else result = cmd_residual(o, err);

    RunManifest m;
    m.command = command;
    m.config = echo_config(app);
    m.version = artifact_version();
    m.timestamp = utc_timestamp();
    std::string canonical = command;
    for (const auto& [k, v] : m.config) canonical += "|" + k + "=" + v;
    m.input_hashes["arguments"] = fnv1a_hex(canonical);
    if (config->count() > 0) {
      std::ifstream cf(config->as<std::string>());
      std::stringstream buf;
      buf << cf.rdbuf();
      m.input_hashes["config_file"] = fnv1a_hex(buf.str());
    }
    m.timings_ms.emplace_back(command, watch.elapsed_ms());
    m.summary = result.summary;
    m.summary["isa"] = std::string(simd::isa_name(simd::active().isa));

    std::ofstream file;
    std::ostream* sink = &out;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw PreconditionError("cannot open output file " + o.out);
      sink = &file;
    }
    if (o.format == "json") {
      nlohmann::json j;
      j["rows"] = table_rows_json(result.table);
      j["manifest"] = m.to_json();
      *sink << j.dump(2) << '\n';
    } else {
      std::string ref;
      if (!o.out.empty()) {
        const std::string manifest_path = o.out + ".manifest.json";
        std::ofstream mf(manifest_path);
        if (!mf) throw PreconditionError("cannot write manifest " + manifest_path);
        mf << m.to_json().dump(2) << '\n';
        ref = manifest_path.substr(manifest_path.find_last_of('/') + 1);
      }
      if (result.bare_integers) {
        if (!ref.empty()) *sink << "# manifest=" << ref << '\n';
        for (const auto& row : result.table.rows) *sink << format_cell(row[0]) << '\n';
      } else {
        write_csv(*sink, result.table, ref);
      }
    }
    return kExitOk;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const ResourceLimitError& e) {
    err << "resource guard: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << '\n';
    return kExitConvergence;
  }
}

}  // namespace minicubes
