#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "prohecke/gf.hpp"
#include "prohecke/torus.hpp"

// Verification suites shared by the command-line tool and the acceptance harness.
namespace prohecke::suites {

inline constexpr int kSchemaVersion = 1;

const std::vector<std::string>& all_suite_names();

struct RunConfig {
  std::uint32_t q = 5;
  std::uint32_t ambient_degree = 1;
  std::vector<GroupKind> groups{GroupKind::GL2};
  // Codes of nonzero elements of the ambient field; empty means all of F_q^x.
  std::vector<std::uint32_t> lambdas;
  int max_length = 6;
  int trunc_degree = 8;
  int window = 6;
  std::string format = "table";
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  // Random modules drawn by the modules suite and random pairs drawn by the dga suite.
  int module_samples = 200;
  int dga_samples = 100;
  bool timing = false;

  // Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
};

struct SuiteResult {
  std::string name;
  std::string group;  // empty for group-independent suites
  bool pass = true;
  std::string first_failure;
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0;
  // Human-readable lines for the table format.
  std::vector<std::string> lines;

  void fail(const std::string& why);
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  nlohmann::json to_json(bool with_timing) const;
};

struct Report {
  RunConfig config;
  std::vector<SuiteResult> suites;
  bool pass() const;
  nlohmann::json to_json() const;
};

// Individual suites. The field must contain F_q.
SuiteResult blocks_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field);
SuiteResult models_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field, int max_length,
                         int trunc_degree, const std::vector<gf::FieldElt>& lambdas);
SuiteResult modules_suite(const gf::FieldPtr& field, std::uint64_t seed, int samples, int trunc_degree);
SuiteResult scheme_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field,
                         const std::vector<gf::FieldElt>& lambdas);
SuiteResult dga_suite(std::uint32_t q, const gf::FieldPtr& field, std::uint64_t seed, int samples, int window);
SuiteResult endo_suite(GroupKind kind, std::uint32_t q, const gf::FieldPtr& field,
                       const std::vector<gf::FieldElt>& lambdas);

// F_q^x inside the field, or the configured codes.
std::vector<gf::FieldElt> resolve_lambdas(const RunConfig& c, const gf::FieldPtr& field);

// Runs the selected suites (all when none are selected). Throws ConfigError; suite failures are
// recorded in the report.
Report run(const RunConfig& config);
// "json" or "table".
std::string emit(const Report& report, const std::string& format);

}  // namespace prohecke::suites
