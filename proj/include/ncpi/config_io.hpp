#pragma once

#include <map>
#include <optional>
#include <string>

#include "ncpi/coeff_algebra.hpp"
#include "ncpi/expr.hpp"
#include "ncpi/models_rng.hpp"
#include "ncpi/verifier.hpp"

namespace ncpi {

/// A model/suite configuration document. One JSON file can carry both the
/// model fields (dim, X, B, coeffs, tolerance) and the suite fields (seed,
/// trials, dim_range, max_degree, ...).
struct ModelConfig {
    int dim = 4;
    std::optional<CMat> x;  // absent: X is drawn from the seeded generator
    SubalgebraSpec b_spec = SubalgebraSpec::diagonal();
    double tolerance = 1e-9;
    std::map<std::string, CMat> coeffs;
    Limits limits;
};

ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

SuiteConfig parse_suite_config(const std::string& json_text);
SuiteConfig load_suite_config(const std::string& path);

/// Builds the concrete model and the parser context from a config.
/// When X is absent it is generated from the seed (models_rng contract).
struct LoadedModel {
    MatrixModel model;
    ModelContext context;
};
LoadedModel instantiate(const ModelConfig& cfg, std::uint64_t seed);

/// Built-in demo model used when no --model file is given: diagonal B in
/// M_4, seeded X, and unknown coefficient names materialized on first use.
LoadedModel default_model(std::uint64_t seed);

std::string report_to_json(const SuiteResult& result);
std::string reports_to_json(const std::vector<CheckReport>& reports, const std::string& digest);

}  // namespace ncpi
