#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "minmaxlab/minimax.hpp"

namespace minmaxlab::cli {

/// One [section] of the run file. Lookups name the section and key in errors.
class Section {
public:
  Section(std::string name, const boost::property_tree::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  const std::string& name() const { return name_; }
  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const;

  std::string text(const std::string& key) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key) const;
  double real_or(const std::string& key, double fallback) const;
  long long integer(const std::string& key) const;
  long long integer_or(const std::string& key, long long fallback) const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<std::string> names(const std::string& key) const;

  /// Rejects keys outside `allowed` so typos fail loudly.
  void only(const std::vector<std::string>& allowed) const;

private:
  std::optional<std::string> raw(const std::string& key) const;

  std::string name_;
  const boost::property_tree::ptree* tree_;
};

struct RunConfig {
  std::filesystem::path path;
  std::string hash;  // 16 hex digits over the file bytes and any seed override
  boost::property_tree::ptree tree;

  GaussianLocationModel model{1, 1.0};
  Interval theta = default_theta_interval();
  std::map<std::string, LossSpec> losses;
  std::vector<std::string> loss_order;  // declaration order
  std::optional<EstimatorSpec> estimator;
  std::optional<FamilySpec> family;
  std::optional<std::uint64_t> seed;

  Section section(const std::string& name) const;
  const LossSpec& loss(const std::string& name) const;
  /// The master seed; a Config error naming [run] seed when absent.
  std::uint64_t require_seed(const char* purpose) const;
};

RunConfig load_config(const std::filesystem::path& path,
                      std::optional<std::uint64_t> seed_override = std::nullopt);

/// Same grammar, from a string (used by tests).
RunConfig parse_config(const std::string& text,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

std::string config_hash(const std::string& bytes);

}  // namespace minmaxlab::cli
