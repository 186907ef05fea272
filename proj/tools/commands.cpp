#include "commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "minmaxlab/serialize.hpp"
#include "minmaxlab/version.hpp"
#include "output.hpp"

namespace minmaxlab::cli {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

void emit(std::ostream& out, const std::filesystem::path& path, const std::string& content) {
  write_atomic(path, content);
  fmt::print(out, "wrote {}\n", path.string());
}

void emit_json(std::ostream& out, const std::filesystem::path& path, const ordered_json& doc) {
  emit(out, path, doc.dump(2) + "\n");
}

ordered_json provenance(const RunConfig& cfg) {
  return {{"tool_version", kVersion}, {"config_hash", cfg.hash}};
}

const FamilySpec& require_family(const RunConfig& cfg) {
  if (!cfg.family) config_error("[family] section is required");
  return *cfg.family;
}

bool family_uses_mc(const FamilySpec& f) { return std::holds_alternative<MedianShiftFamily>(f); }

std::vector<std::string> minimax_keys() {
  return {"loss",     "restarts",      "grid", "refine_tol",    "nodes",
          "mc_samples", "step_tol", "agreement_tol", "xtol", "max_iterations"};
}

MinimaxOptions minimax_options(const Section& sec, const RunConfig& cfg, const char* purpose) {
  MinimaxOptions o;
  o.restarts = static_cast<int>(sec.integer_or("restarts", o.restarts));
  o.inner.grid = static_cast<int>(sec.integer_or("grid", o.inner.grid));
  o.inner.refine_tol = sec.real_or("refine_tol", o.inner.refine_tol);
  o.inner.nodes = static_cast<int>(sec.integer_or("nodes", o.inner.nodes));
  const long long mc = sec.integer_or("mc_samples", static_cast<long long>(o.inner.mc_samples));
  if (mc < 2) config_error(fmt::format("[{}] mc_samples must be >= 2", sec.name()));
  o.inner.mc_samples = static_cast<std::size_t>(mc);
  o.step_tol = sec.real_or("step_tol", o.step_tol);
  o.agreement_tol = sec.real_or("agreement_tol", o.agreement_tol);
  o.simplex.xtol = sec.real_or("xtol", o.simplex.xtol);
  o.simplex.max_iterations = static_cast<int>(sec.integer_or("max_iterations", o.simplex.max_iterations));
  if (family_uses_mc(require_family(cfg))) {
    o.seed = cfg.require_seed(purpose);
    o.inner.seed = derive_seed(o.seed, 0);
  } else {
    o.seed = cfg.seed.value_or(0);
  }
  return o;
}

int cmd_risk(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Section sec = cfg.section("risk");
  sec.only({"loss", "method", "thetas", "points", "nodes", "samples"});
  if (!cfg.estimator) config_error("[estimator] section is required for risk");
  const LossSpec& loss = cfg.loss(sec.text("loss"));

  std::vector<double> thetas;
  if (sec.has("thetas")) {
    thetas = sec.reals("thetas");
  } else {
    const long long points = sec.integer_or("points", 41);
    if (points < 2) config_error("[risk] points must be >= 2");
    for (long long i = 0; i < points; ++i) {
      thetas.push_back(i + 1 == points ? cfg.theta.hi
                                       : cfg.theta.lo + cfg.theta.width() * static_cast<double>(i) /
                                                            static_cast<double>(points - 1));
    }
  }
  if (thetas.empty()) config_error("[risk] thetas is empty");

  const std::string method_name = sec.text_or("method", "quadrature");
  RiskMethod method;
  if (method_name == "quadrature") {
    method = Quadrature{static_cast<int>(sec.integer_or("nodes", kDefaultQuadratureNodes))};
  } else if (method_name == "monte_carlo") {
    const long long samples = sec.integer_or("samples", 100000);
    if (samples < 2) config_error("[risk] samples must be >= 2");
    method = MonteCarlo{static_cast<std::size_t>(samples), cfg.require_seed("risk")};
  } else {
    config_error(fmt::format("[risk] method must be quadrature or monte_carlo, got '{}'", method_name));
  }

  CsvTable csv(cfg.hash, {"theta", "risk", "std_error"});
  fmt::print(out, "{} under {}, n = {}, sigma = {}\n", describe(*cfg.estimator), describe(loss),
             cfg.model.n, cfg.model.sigma);
  fmt::print(out, "{:>12} {:>22} {:>12}\n", "theta", "risk", "std_error");
  for (double theta : thetas) {
    const auto r = risk(cfg.model, *cfg.estimator, loss, theta, method);
    csv.row({format_number(theta), format_number(r.value), format_number(r.std_error)});
    fmt::print(out, "{:>12.6g} {:>22.15g} {:>12.3g}\n", theta, r.value, r.std_error);
  }
  emit(out, opts.out_dir / "risk.csv", csv.text());
  return kExitOk;
}

int cmd_minimax(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Section sec = cfg.section("minimax");
  sec.only(minimax_keys());
  const FamilySpec& family = require_family(cfg);
  const LossSpec& loss = cfg.loss(sec.text("loss"));
  const MinimaxOptions mo = minimax_options(sec, cfg, "a median-shift family");

  const auto r = solve_minimax(cfg.model, family, loss, cfg.theta, mo);

  ordered_json doc = document("minimax", to_json(r));
  doc["loss"] = describe(loss);
  doc["theta_interval"] = {cfg.theta.lo, cfg.theta.hi};
  doc["caveat"] =
      "minimax over the parametric family only; no claim about the unrestricted minimax rule";
  doc.update(provenance(cfg));
  emit_json(out, opts.out_dir / "minimax.json", doc);

  fmt::print(out, "family-relative minimax under {} on [{}, {}]\n", describe(loss), cfg.theta.lo,
             cfg.theta.hi);
  for (std::size_t i = 0; i < r.best_params.size(); ++i) {
    fmt::print(out, "  {:<6} = {:.10g}\n", r.param_names[i], r.best_params[i]);
  }
  fmt::print(out, "  value  = {:.12g}\n  converged = {} (step {:.2e}, restart spread {:.2e})\n",
             r.minimax_value, r.converged, r.final_step, r.restart_spread);
  if (!r.converged && !opts.allow_nonconverged) {
    fmt::print(stderr, "minimax did not converge; rerun with --allow-nonconverged to accept\n");
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_exclusivity(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Section sec = cfg.section("exclusivity");
  auto keys = minimax_keys();
  keys.insert(keys.end(), {"exponents", "fd_step", "stationarity_tol", "alpha0", "halvings",
                           "taylor_points"});
  sec.only(keys);
  const FamilySpec& family = require_family(cfg);
  RefuteOptions ro;
  ro.minimax = minimax_options(sec, cfg, "a median-shift family");
  ro.fd_step = sec.real_or("fd_step", ro.fd_step);
  ro.stationarity_tol = sec.real_or("stationarity_tol", ro.stationarity_tol);
  ro.alpha0 = sec.real_or("alpha0", ro.alpha0);
  ro.halvings = static_cast<int>(sec.integer_or("halvings", ro.halvings));
  ro.taylor_points = static_cast<int>(sec.integer_or("taylor_points", ro.taylor_points));

  const auto report = exclusivity_partition_check(cfg.model, family, sec.reals("exponents"),
                                                  cfg.theta, ro);

  ordered_json doc = document("exclusivity", to_json(report));
  doc["theta_interval"] = {cfg.theta.lo, cfg.theta.hi};
  doc.update(provenance(cfg));
  emit_json(out, opts.out_dir / "exclusivity.json", doc);

  fmt::print(out, "{:>6} {:>6} {:>18} {:>10} {:>14} {:>8}\n", "p", "q", "verdict", "alpha",
             "delta_Rq", "slope");
  for (const auto& w : report.witnesses) {
    CsvTable csv(cfg.hash, {"alpha", "delta_Rp", "delta_Rq"});
    for (const auto& s : w.ladder) {
      csv.row({format_number(s.alpha), format_number(s.delta_Rp), format_number(s.delta_Rq)});
    }
    emit(out, opts.out_dir / fmt::format("alpha_ladder_p{:.4g}_q{:.4g}.csv", w.p, w.q), csv.text());
    fmt::print(out, "{:>6.4g} {:>6.4g} {:>18} {:>10.4g} {:>14.4e} {:>8.4g}\n", w.p, w.q,
               to_string(w.verdict), w.alpha, w.delta_Rq, w.taylor_slope_p);
  }
  fmt::print(out, "pairwise_disjoint = {}\n", report.pairwise_disjoint);
  return kExitOk;
}

int cmd_appendix(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Section sec = cfg.section("appendix");
  sec.only({"n", "q", "alphas", "nodes"});
  const int n = static_cast<int>(sec.integer_or("n", cfg.model.n));
  const double q = sec.real("q");
  const int nodes = static_cast<int>(sec.integer_or("nodes", kDefaultQuadratureNodes));

  CsvTable csv(cfg.hash, {"alpha", "f", "fprime_analytic", "fprime_fd"});
  fmt::print(out, "f(alpha) = E|Z/sqrt(n) - alpha|^q with n = {}, q = {}\n", n, q);
  fmt::print(out, "{:>10} {:>20} {:>20} {:>20}\n", "alpha", "f", "f' analytic", "f' fd");
  int positive = 0, negative = 0, zero = 0;
  for (double a : sec.reals("alphas")) {
    const double f = appendix_f(a, n, q, nodes);
    const double an = appendix_fprime(a, n, q, FPrimeMode::Analytic, nodes);
    const double fd = appendix_fprime(a, n, q, FPrimeMode::FiniteDifference, nodes);
    csv.row({format_number(a), format_number(f), format_number(an), format_number(fd)});
    fmt::print(out, "{:>10.4g} {:>20.14g} {:>20.12g} {:>20.12g}\n", a, f, an, fd);
    if (a > 0.0) {
      if (an > 0.0) ++positive;
      else if (an < 0.0) ++negative;
      else ++zero;
    }
  }
  emit(out, opts.out_dir / "appendix.csv", csv.text());

  const int tested = positive + negative + zero;
  if (tested > 0) {
    fmt::print(out, "sign of f'(alpha) over {} alpha > 0: {} positive, {} negative, {} zero\n",
               tested, positive, negative, zero);
    if (positive > 0) {
      fmt::print(out,
                 "note: f'(alpha) < 0 for alpha > 0 does NOT hold here; f is even with its minimum "
                 "at alpha = 0, so f' > 0 to the right of 0\n");
    }
  }
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out) {
  const Section sec = cfg.section("classify");
  sec.only({"losses", "theta0", "h_min", "h_max", "points"});
  const std::vector<std::string> names = sec.has("losses") ? sec.names("losses") : cfg.loss_order;
  if (names.empty()) config_error("no losses to classify; add [loss.NAME] sections");
  ExponentWindow window;
  window.h_min = sec.real_or("h_min", window.h_min);
  window.h_max = sec.real_or("h_max", window.h_max);
  const double theta0 = sec.real_or("theta0", 0.0);
  const int points = static_cast<int>(sec.integer_or("points", kDefaultClassifierPoints));

  CsvTable csv(cfg.hash, {"loss", "p_hat", "c_hat", "residual"});
  fmt::print(out, "{:<16} {:>14} {:>14} {:>12}  {}\n", "loss", "p_hat", "c_hat", "residual", "definition");
  for (const auto& name : names) {
    const LossSpec& loss = cfg.loss(name);
    const auto c = classify_exponent(loss, theta0, window, points);
    csv.row({name, format_number(c.p_hat), format_number(c.c_hat), format_number(c.fit_residual)});
    fmt::print(out, "{:<16} {:>14.8g} {:>14.8g} {:>12.3g}  {}\n", name, c.p_hat, c.c_hat,
               c.fit_residual, describe(loss));
  }
  emit(out, opts.out_dir / "classify.csv", csv.text());
  return kExitOk;
}

using Command = std::function<int(const RunConfig&, const CommandOptions&, std::ostream&)>;

const std::map<std::string, Command>& registry() {
  static const std::map<std::string, Command> commands{
      {"risk", cmd_risk},         {"minimax", cmd_minimax}, {"exclusivity", cmd_exclusivity},
      {"appendix", cmd_appendix}, {"classify", cmd_classify}};
  return commands;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"risk", "minimax", "exclusivity", "appendix",
                                              "classify"};
  return names;
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opts,
                std::ostream& out) {
  const auto it = registry().find(name);
  if (it == registry().end()) config_error(fmt::format("unknown command '{}'", name));
  return it->second(cfg, opts, out);
}

int exit_code_for(const Error& e) { return e.is_numerical() ? kExitNumerical : kExitConfig; }

}  // namespace minmaxlab::cli
