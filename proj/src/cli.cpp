#include "runckel/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "runckel/analysis.hpp"
#include "runckel/gfraction.hpp"
#include "runckel/identities.hpp"
#include "runckel/io.hpp"
#include "runckel/scalar.hpp"
#include "runckel/schur.hpp"

namespace runckel::cli {

namespace {

using io::Json;

/// Invalid input detected after parsing.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json config_json(const RunConfig& c) {
  Json j = Json::object();
  j["command"] = c.command;
  j["p"] = c.p ? Json(*c.p) : Json(nullptr);
  j["z_re"] = c.z_re;
  j["z_im"] = c.z_im;
  j["constant_g"] = c.constant_g ? Json(*c.constant_g) : Json(nullptr);
  j["g"] = c.g;
  j["k"] = c.k;
  j["r_re"] = c.r_re ? Json(*c.r_re) : Json(nullptr);
  j["r_im"] = c.r_im ? Json(*c.r_im) : Json(nullptr);
  j["n_max"] = c.n_max;
  j["tol"] = c.tol;
  j["identity_tol"] = c.identity_tol;
  j["precision_bits"] = c.precision_bits;
  j["output_format"] = c.output_format;
  j["output_path"] = c.output_path;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["max_n"] = c.max_n;
  j["inject_fault"] = c.inject_fault;
  j["window"] = c.window;
  j["min_alternations"] = c.min_alternations;
  return j;
}

void validate(const RunConfig& c) {
  const long long min_n = c.command == "eval" ? 0 : 1;
  if (c.n_max < min_n) throw ConfigError("--n-max must be >= " + std::to_string(min_n));
  if (!(c.tol > 0)) throw ConfigError("--tol must be positive");
  if (!(c.identity_tol > 0)) throw ConfigError("--identity-tol must be positive");
  if (c.trials < 0) throw ConfigError("--trials must be >= 0");
  if (c.max_n < 0) throw ConfigError("--max-n must be >= 0");
  if (c.window < 1) throw ConfigError("--window must be >= 1");
  if (c.min_alternations < 1) throw ConfigError("--min-alternations must be >= 1");
  precision_from_bits(c.precision_bits);
  io::format_from_string(c.output_format);
}

template <typename Real>
GFraction<Real> fraction_from_config(const RunConfig& c) {
  const int sources = (c.p ? 1 : 0) + (c.constant_g ? 1 : 0) + (c.g.empty() ? 0 : 1);
  if (sources != 1) throw ConfigError("eval needs exactly one of --p, --constant-g, --g");
  if (c.p) return GFraction<Real>::e_p(*c.p);
  if (c.constant_g) return GFraction<Real>::constant(Real(*c.constant_g));
  std::vector<Real> g(c.g.begin(), c.g.end());
  if (c.n_max > static_cast<long long>(g.size()))
    throw ConfigError("--g supplies " + std::to_string(g.size()) + " coefficients but --n-max needs " +
                      std::to_string(c.n_max));
  return GFraction<Real>::finite(std::move(g));
}

template <typename Real>
io::Document eval_command(const RunConfig& c) {
  const auto f = fraction_from_config<Real>(c);
  const Complex<Real> z(Real(c.z_re), Real(c.z_im));
  const auto trace = approximant_trace(f, z, static_cast<std::size_t>(c.n_max));

  io::Document doc;
  doc.records.columns = {"n", "h0_re", "h0_im", "hinf_re", "hinf_im"};
  for (const auto& rec : trace) {
    auto [h0_re, h0_im] = io::format_point(rec.value_at_0);
    auto [hi_re, hi_im] = io::format_point(rec.value_at_inf);
    doc.records.rows.push_back({std::to_string(rec.n), h0_re, h0_im, hi_re, hi_im});
  }
  doc.report["final_n"] = trace.back().n;
  doc.report["final_value_at_0"] = io::point_json(trace.back().value_at_0);
  doc.report["final_value_at_inf"] = io::point_json(trace.back().value_at_inf);
  return doc;
}

template <typename Real>
Json report_json(const ConvergenceReport<Real>& rep) {
  Json j = Json::object();
  j["verdict"] = std::string(to_string(rep.verdict));
  j["limit"] = rep.limit ? io::point_json(*rep.limit) : Json(nullptr);
  j["general_limit"] = rep.general_limit ? io::point_json(*rep.general_limit) : Json(nullptr);
  if (rep.limit_set) {
    j["limit_set"] = Json::array({io::point_json((*rep.limit_set)[0]), io::point_json((*rep.limit_set)[1])});
  } else {
    j["limit_set"] = nullptr;
  }
  const auto& d = rep.diagnostics;
  Json diag = Json::object();
  diag["final_residual"] = io::real_json(d.final_residual);
  diag["pair_min_residual"] = io::real_json(d.pair_min_residual);
  diag["raw_residual"] = io::real_json(d.raw_residual);
  diag["sigma_liminf_estimate"] = io::real_json(d.sigma_liminf_estimate);
  diag["probe_residual"] = io::real_json(d.probe_residual);
  diag["limit_set_distance"] = io::real_json(d.limit_set_distance);
  diag["alternations"] = d.alternations;
  diag["visits_near_one"] = d.visits[0];
  diag["visits_near_second_point"] = d.visits[1];
  diag["n_used"] = d.n_used;
  j["diagnostics"] = std::move(diag);
  return j;
}

ClassifyOptions classify_options(const RunConfig& c) {
  return {static_cast<std::size_t>(c.window), static_cast<std::size_t>(c.min_alternations), 1e-6};
}

template <typename Real>
std::pair<io::Document, int> ramanujan_command(const RunConfig& c) {
  if (!c.p) throw ConfigError("ramanujan needs --p");
  const auto result =
      ramanujan_experiment<Real>(*c.p, static_cast<std::size_t>(c.n_max), Real(c.tol), classify_options(c));

  io::Document doc;
  doc.records.columns = {"n", "h0_re", "h0_im", "hinf_re", "hinf_im", "probe_re", "probe_im", "hprobe_re", "hprobe_im"};
  for (const auto& rec : result.trace) {
    auto [a, b] = io::format_point(rec.value_at_0);
    auto [c1, d1] = io::format_point(rec.value_at_inf);
    auto [e, f] = io::format_point(rec.probe);
    auto [g, h] = io::format_point(rec.value_at_probe);
    doc.records.rows.push_back({std::to_string(rec.n), a, b, c1, d1, e, f, g, h});
  }
  doc.report = report_json(result.report);
  doc.report["p"] = result.p;
  doc.report["r"] = io::point_json(ExtendedComplex<Real>(result.r));
  doc.report["z_p"] = io::real_json(result.z);
  doc.report["limit_numerator"] = io::real_json(result.limit_numerator);
  doc.report["last_numerator"] = io::real_json(result.last_numerator);
  doc.report["matches_expectation"] = result.matches_expectation;
  return {std::move(doc), result.matches_expectation ? kOk : kFailed};
}

template <typename Real>
std::pair<io::Document, int> identities_command(const RunConfig& c) {
  IdentitySuiteOptions opts;
  opts.seed = c.seed;
  opts.trials = static_cast<std::size_t>(c.trials);
  opts.max_n = static_cast<std::size_t>(c.max_n);
  opts.tolerance = c.identity_tol;
  opts.inject_fault = c.inject_fault;
  const auto results = run_identity_suite<Real>(opts);

  io::Document doc;
  doc.records.columns = {"identity", "trials", "max_residual", "tolerance", "passed"};
  for (const auto& r : results)
    doc.records.rows.push_back({r.name, std::to_string(r.trials), io::format_real(r.max_residual),
                                io::format_real(r.tolerance), r.passed ? "true" : "false"});
  const bool ok = all_passed(results);
  doc.report["all_passed"] = ok;
  doc.report["identities"] = results.size();
  return {std::move(doc), ok ? kOk : kFailed};
}

template <typename Real>
std::pair<io::Document, int> runckel_command(const RunConfig& c) {
  if (!c.p) throw ConfigError("runckel needs --p (selects e_p and r = exp(2 pi i k / p))");
  if (c.r_re.has_value() != c.r_im.has_value()) throw ConfigError("--r-re and --r-im must be given together");
  const Complex<Real> r = c.r_re ? Complex<Real>(Real(*c.r_re), Real(*c.r_im)) : root_of_unity<Real>(c.k, *c.p);
  const Real z = runckel_z(r);
  const auto n_max = static_cast<std::size_t>(c.n_max);
  const auto check = runckel_check(SchurSeq<Real>::ep_rule(*c.p), r, n_max, Real(c.tol),
                                   static_cast<std::size_t>(c.window));

  io::Document doc;
  doc.records.columns = {"n", "schur_residual"};
  for (std::size_t n = 0; n < check.residuals.size(); ++n)
    doc.records.rows.push_back({std::to_string(n), io::format_real(check.residuals[n])});
  doc.report["r"] = io::point_json(ExtendedComplex<Real>(r));
  doc.report["z_r"] = io::real_json(z);
  doc.report["is_runckel"] = check.is_runckel;
  doc.report["schur_final_residual"] = io::real_json(check.residuals.back());
  int code = check.is_runckel ? kOk : kFailed;
  doc.report["general_convergence"] = nullptr;
  if (check.is_runckel) {
    Json gc = Json::object();
    try {
      const auto probe = general_convergence_probe(GFraction<Real>::e_p(*c.p), r, std::max<std::size_t>(n_max, 2),
                                                   Real(c.tol), static_cast<std::size_t>(c.window));
      gc["alpha"] = io::point_json(probe.alpha);
      gc["sigma_floor"] = io::real_json(probe.sigma_floor);
      gc["probe_residual"] = io::real_json(probe.probe_residual);
      gc["status"] = "converged";
    } catch (const ConvergenceError& e) {
      gc["status"] = std::string("failed: ") + e.what();
      code = kFailed;
    }
    doc.report["general_convergence"] = std::move(gc);
  }
  return {std::move(doc), code};
}

template <typename Real>
std::pair<io::Document, int> dispatch(const RunConfig& c) {
  if (c.command == "eval") return {eval_command<Real>(c), kOk};
  if (c.command == "ramanujan") return ramanujan_command<Real>(c);
  if (c.command == "identities") return identities_command<Real>(c);
  if (c.command == "runckel") return runckel_command<Real>(c);
  throw ConfigError("no command given (expected eval, ramanujan, identities or runckel)");
}

void add_output_options(CLI::App* sub, RunConfig& c) {
  sub->add_option("--precision", c.precision_bits, "Mantissa bits: 53, 128 or 256")->capture_default_str();
  sub->add_option("--format", c.output_format, "Output format: csv or json")->capture_default_str();
  sub->add_option("--output,-o", c.output_path, "Output file, '-' for stdout")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Continued-fraction convergence at Runckel points", "runckel"};
  app.require_subcommand(1);

  auto* eval = app.add_subcommand("eval", "Trace H_n(z;0) and H_n(z;inf) of a g-fraction");
  eval->add_option("--p", c.p, "Use the fraction of e_p(w) = (1 + w^p)/2");
  eval->add_option("--constant-g", c.constant_g, "Use g_i = G for every i");
  eval->add_option("--g", c.g, "Explicit coefficients g_1,g_2,...")->delimiter(',');
  eval->add_option("--z", c.z_re, "Real part of z")->capture_default_str();
  eval->add_option("--z-im", c.z_im, "Imaginary part of z")->capture_default_str();
  eval->add_option("--n-max", c.n_max, "Last index n")->capture_default_str();
  add_output_options(eval, c);

  auto* ram = app.add_subcommand("ramanujan", "Classify the e_p fraction at z_p = sec^2(pi/p)");
  ram->add_option("--p", c.p, "Period p >= 3")->required();
  ram->add_option("--n-max", c.n_max, "Horizon (>= 1000)")->capture_default_str();
  ram->add_option("--tol", c.tol, "Limit-detection tolerance")->capture_default_str();
  ram->add_option("--window", c.window, "Trailing window length")->capture_default_str();
  ram->add_option("--min-alternations", c.min_alternations, "Alternations that count as oscillation")
      ->capture_default_str();
  add_output_options(ram, c);

  auto* ids = app.add_subcommand("identities", "Randomized identity suite");
  ids->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  ids->add_option("--trials", c.trials, "Trials per identity")->capture_default_str();
  ids->add_option("--max-n", c.max_n, "Largest approximant index")->capture_default_str();
  ids->add_option("--identity-tol", c.identity_tol, "Residual tolerance")->capture_default_str();
  ids->add_flag("--inject-fault", c.inject_fault, "Perturb one coefficient per identity (must fail)");
  add_output_options(ids, c);

  auto* rk = app.add_subcommand("runckel", "Runckel-point check and general-convergence probe for e_p");
  rk->add_option("--p", c.p, "Selects e_p and, by default, r = exp(2 pi i k / p)")->required();
  rk->add_option("--k", c.k, "Root index k")->capture_default_str();
  rk->add_option("--r-re", c.r_re, "Explicit r, real part");
  rk->add_option("--r-im", c.r_im, "Explicit r, imaginary part");
  rk->add_option("--n-max", c.n_max, "Horizon")->capture_default_str();
  rk->add_option("--tol", c.tol, "Limit-detection tolerance")->capture_default_str();
  rk->add_option("--window", c.window, "Trailing window length")->capture_default_str();
  add_output_options(rk, c);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

  try {
    validate(c);
    const Precision precision = precision_from_bits(c.precision_bits);
    auto [doc, code] = with_precision(precision, [&](auto tag) {
      using Real = typename decltype(tag)::type;
      return dispatch<Real>(c);
    });
    doc.config = config_json(c);
    const io::Format format = io::format_from_string(c.output_format);
    if (c.output_path == "-") {
      io::write(out, doc, format);
    } else {
      std::ofstream file(c.output_path, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << c.output_path << " for writing\n";
        return kFailed;
      }
      io::write(file, doc, format);
    }
    return code;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << '\n';
    if (c.precision_bits == 53) err << "hint: rerun with --precision 128 for long horizons\n";
    return kPrecisionExhausted;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
}

}  // namespace runckel::cli
