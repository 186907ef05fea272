#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>

namespace minmaxlab::cli {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

constexpr std::string_view kLossPrefix = "loss.";

const std::set<std::string> kKnownSections{"run",      "model",       "theta",    "estimator",
                                           "family",   "risk",        "minimax",  "exclusivity",
                                           "appendix", "classify"};

// Losses reference each other by name; resolve depth-first and reject cycles.
class LossResolver {
public:
  explicit LossResolver(RunConfig& cfg) : cfg_(cfg) {}

  const LossSpec& resolve(const std::string& name) {
    if (auto it = cfg_.losses.find(name); it != cfg_.losses.end()) return it->second;
    const auto sec_it = cfg_.tree.find(std::string(kLossPrefix) + name);
    if (sec_it == cfg_.tree.not_found()) config_error(fmt::format("unknown loss '{}'", name));
    if (!active_.insert(name).second) config_error(fmt::format("loss '{}' refers to itself", name));
    const Section sec(std::string(kLossPrefix) + name, &sec_it->second);
    const LossSpec loss = build(sec);
    active_.erase(name);
    return cfg_.losses.emplace(name, loss).first->second;
  }

private:
  LossSpec build(const Section& sec) {
    const std::string type = sec.text("type");
    if (type == "power") {
      sec.only({"type", "p", "c"});
      return LossSpec::power(sec.real("p"), sec.real_or("c", 1.0));
    }
    if (type == "huber") {
      sec.only({"type", "k"});
      return LossSpec::huber(sec.real("k"));
    }
    if (type == "scaled") {
      sec.only({"type", "lambda", "of"});
      return LossSpec::scaled(sec.real("lambda"), resolve(sec.text("of")));
    }
    if (type == "sum") {
      sec.only({"type", "terms"});
      std::vector<LossSpec> terms;
      for (const auto& t : sec.names("terms")) terms.push_back(resolve(t));
      if (terms.empty()) config_error(fmt::format("[{}] terms is empty", sec.name()));
      return LossSpec::sum(std::move(terms));
    }
    config_error(fmt::format("[{}] type must be power, huber, scaled or sum, got '{}'", sec.name(), type));
  }

  RunConfig& cfg_;
  std::set<std::string> active_;
};

BaseEstimator base_estimator(const Section& sec, const std::string& type) {
  if (type == "affine_mean") return AffineMean{sec.real_or("gamma", 1.0), sec.real_or("beta", 0.0)};
  if (type == "sample_median") return SampleMedian{sec.real_or("beta", 0.0)};
  if (type == "oracle") {
    throw Error(ErrorKind::OracleEstimator,
                fmt::format("[{}] the oracle rule delta(X) = theta uses the unknown parameter", sec.name()));
  }
  config_error(fmt::format("[{}] unknown estimator type '{}'", sec.name(), type));
}

EstimatorSpec parse_estimator(const Section& sec) {
  sec.only({"type", "base", "gamma", "beta", "epsilon", "theta_star"});
  for (const char* key : {"gamma", "beta", "epsilon", "theta_star"}) {
    if (sec.has(key) && sec.text(key) == "theta") {
      throw Error(ErrorKind::OracleEstimator,
                  fmt::format("[{}] {} = theta makes the rule depend on the unknown parameter",
                              sec.name(), key));
    }
  }
  const std::string type = sec.text("type");
  if (type == "sign_perturbed") {
    SignPerturbed est{base_estimator(sec, sec.text("base")), sec.real("epsilon"),
                      sec.real("theta_star")};
    validate(EstimatorSpec{est});
    return est;
  }
  EstimatorSpec est = std::visit([](const auto& b) -> EstimatorSpec { return b; },
                                 base_estimator(sec, type));
  validate(est);
  return est;
}

FamilySpec parse_family(const Section& sec) {
  const std::string type = sec.text("type");
  if (type == "affine_mean") {
    sec.only({"type", "gamma_lo", "gamma_hi", "beta_lo", "beta_hi"});
    AffineMeanFamily f;
    f.gamma_range = Interval(sec.real_or("gamma_lo", f.gamma_range.lo),
                             sec.real_or("gamma_hi", f.gamma_range.hi));
    f.beta_range = Interval(sec.real_or("beta_lo", f.beta_range.lo),
                            sec.real_or("beta_hi", f.beta_range.hi));
    return f;
  }
  if (type == "median_shift") {
    sec.only({"type", "beta_lo", "beta_hi"});
    MedianShiftFamily f;
    f.beta_range = Interval(sec.real_or("beta_lo", f.beta_range.lo),
                            sec.real_or("beta_hi", f.beta_range.hi));
    return f;
  }
  config_error(fmt::format("[{}] type must be affine_mean or median_shift, got '{}'", sec.name(), type));
}

}  // namespace

bool Section::has(const std::string& key) const { return raw(key).has_value(); }

std::optional<std::string> Section::raw(const std::string& key) const {
  if (!tree_) return std::nullopt;
  const auto it = tree_->find(key);
  if (it == tree_->not_found()) return std::nullopt;
  return trim(it->second.data());
}

std::string Section::text(const std::string& key) const {
  auto v = raw(key);
  if (!v || v->empty()) config_error(fmt::format("[{}] missing required key '{}'", name_, key));
  return *v;
}

std::string Section::text_or(const std::string& key, const std::string& fallback) const {
  auto v = raw(key);
  return v && !v->empty() ? *v : fallback;
}

double Section::real(const std::string& key) const {
  const std::string s = text(key);
  const auto v = to_double(s);
  if (!v) config_error(fmt::format("[{}] {} is not a number: '{}'", name_, key, s));
  return *v;
}

double Section::real_or(const std::string& key, double fallback) const {
  return has(key) ? real(key) : fallback;
}

long long Section::integer(const std::string& key) const {
  const std::string s = text(key);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    config_error(fmt::format("[{}] {} is not an integer: '{}'", name_, key, s));
  }
  return v;
}

long long Section::integer_or(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> Section::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) {
    const auto v = to_double(item);
    if (!v) config_error(fmt::format("[{}] {} has a non-numeric entry '{}'", name_, key, item));
    out.push_back(*v);
  }
  return out;
}

std::vector<std::string> Section::names(const std::string& key) const { return split_list(text(key)); }

void Section::only(const std::vector<std::string>& allowed) const {
  if (!tree_) return;
  for (const auto& [key, _] : *tree_) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const std::string& a) { return key == a; })) {
      config_error(fmt::format("[{}] unknown key '{}'", name_, key));
    }
  }
}

Section RunConfig::section(const std::string& name) const {
  const auto it = tree.find(name);
  return Section(name, it == tree.not_found() ? nullptr : &it->second);
}

const LossSpec& RunConfig::loss(const std::string& name) const {
  const auto it = losses.find(name);
  if (it == losses.end()) config_error(fmt::format("unknown loss '{}'", name));
  return it->second;
}

std::uint64_t RunConfig::require_seed(const char* purpose) const {
  if (!seed) config_error(fmt::format("[run] missing required key 'seed' ({} uses Monte Carlo)", purpose));
  return *seed;
}

std::string config_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

RunConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override) {
  RunConfig cfg;
  std::string hashed = text;
  if (seed_override) hashed += fmt::format("\n--seed={}", *seed_override);
  cfg.hash = config_hash(hashed);

  try {
    std::istringstream in(text);
    pt::read_ini(in, cfg.tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(fmt::format("line {}: {}", e.line(), e.message()));
  }

  for (const auto& [name, node] : cfg.tree) {
    if (node.empty() && !node.data().empty()) config_error(fmt::format("key '{}' outside any section", name));
    if (name.rfind(kLossPrefix, 0) == 0) {
      if (name.size() == kLossPrefix.size()) config_error("[loss.] needs a name");
      cfg.loss_order.push_back(name.substr(kLossPrefix.size()));
    } else if (!kKnownSections.contains(name)) {
      config_error(fmt::format("unknown section [{}]", name));
    }
  }

  const Section run = cfg.section("run");
  run.only({"seed"});
  if (run.has("seed")) {
    const long long s = run.integer("seed");
    if (s < 0) config_error("[run] seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (seed_override) cfg.seed = seed_override;

  const Section model = cfg.section("model");
  model.only({"n", "sigma"});
  cfg.model = GaussianLocationModel(static_cast<int>(model.integer_or("n", 1)), model.real_or("sigma", 1.0));

  const Section theta = cfg.section("theta");
  theta.only({"lo", "hi"});
  if (theta.present()) cfg.theta = Interval(theta.real("lo"), theta.real("hi"));

  LossResolver resolver(cfg);
  for (const auto& name : cfg.loss_order) resolver.resolve(name);

  if (const Section est = cfg.section("estimator"); est.present()) cfg.estimator = parse_estimator(est);
  if (const Section fam = cfg.section("family"); fam.present()) cfg.family = parse_family(fam);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str(), seed_override);
  cfg.path = path;
  return cfg;
}

}  // namespace minmaxlab::cli
