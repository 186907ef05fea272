#include "minmaxlab/serialize.hpp"

#include <cmath>

namespace minmaxlab {

using nlohmann::ordered_json;

namespace {

ordered_json number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

ordered_json numbers(const std::vector<double>& xs) {
  ordered_json out = ordered_json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

ordered_json named_params(const std::vector<std::string>& names, const std::vector<double>& xs) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i < names.size() ? names[i] : "x" + std::to_string(i)] = number(xs[i]);
  }
  return out;
}

}  // namespace

ordered_json to_json(const WorstCaseResult& r) {
  return {
      {"sup_value", number(r.sup_value)},
      {"argmax_theta", number(r.argmax_theta)},
      {"grid_points", r.grid_points},
      {"refinement_tol", number(r.refinement_tol)},
      {"constant_in_theta", r.constant_in_theta},
      {"std_error", number(r.std_error)},
  };
}

ordered_json to_json(const MinimaxResult& r) {
  return {
      {"best_params", named_params(r.param_names, r.best_params)},
      {"minimax_value", number(r.minimax_value)},
      {"inner", to_json(r.inner)},
      {"outer_iterations", r.outer_iterations},
      {"converged", r.converged},
      {"final_step", number(r.final_step)},
      {"restart_spread", number(r.restart_spread)},
      {"restart_values", numbers(r.restart_values)},
      {"scope", "family-relative"},
  };
}

ordered_json to_json(const RefutationCertificate& c) {
  ordered_json ladder = ordered_json::array();
  for (const auto& s : c.ladder) {
    ladder.push_back({{"alpha", number(s.alpha)},
                      {"delta_Rp", number(s.delta_Rp)},
                      {"delta_Rq", number(s.delta_Rq)}});
  }
  return {
      {"p", number(c.p)},
      {"q", number(c.q)},
      {"delta_star_params", named_params(c.param_names, c.delta_star_params)},
      {"delta_star_converged", c.delta_star_converged},
      {"Rp_star", number(c.Rp_star)},
      {"Rq_star", number(c.Rq_star)},
      {"gradient_q", numbers(c.gradient_q)},
      {"gradient_p_norm", number(c.gradient_p_norm)},
      {"direction", numbers(c.direction)},
      {"alpha", number(c.alpha)},
      {"delta_Rq", number(c.delta_Rq)},
      {"delta_Rp", number(c.delta_Rp)},
      {"taylor_slope_p", number(c.taylor_slope_p)},
      {"verdict", std::string(to_string(c.verdict))},
      {"note", c.note},
      {"ladder", ladder},
  };
}

ordered_json to_json(const PartitionReport& r) {
  ordered_json classes = ordered_json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"exponent", number(c.exponent)},
                       {"minimax_params", named_params(r.param_names, c.params)},
                       {"minimax_value", number(c.value)},
                       {"converged", c.converged}});
  }
  ordered_json witnesses = ordered_json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(to_json(w));
  return {
      {"classes", classes},
      {"pairwise_disjoint", r.pairwise_disjoint},
      {"witnesses", witnesses},
  };
}

ordered_json to_json(const RealizabilityReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  ordered_json dist = ordered_json::array();
  for (const auto& d : r.distances) dist.push_back(numbers(d));
  return {{"rows", rows}, {"distances", dist}};
}

ordered_json document(const char* kind, ordered_json payload) {
  ordered_json doc = {{"schema", kJsonSchema}, {"kind", kind}};
  for (auto& [key, value] : payload.items()) doc[key] = value;
  return doc;
}

}  // namespace minmaxlab
