#include "ncpi/config_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ncpi/errors.hpp"
#include "ncpi/rng.hpp"

namespace ncpi {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

Cplx parse_entry(const json& j, const char* where) {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Cplx(j[0].get<double>(), j[1].get<double>());
    throw parse_error(std::string(where) + ": matrix entries must be numbers or [re, im] pairs");
}

CMat parse_matrix(const json& j, const char* where) {
    if (!j.is_array() || j.empty()) throw parse_error(std::string(where) + ": expected a matrix (array of rows)");
    const auto rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw parse_error(std::string(where) + ": expected rows of entries");
    const auto cols = j[0].size();
    CMat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw parse_error(std::string(where) + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_entry(j[r][c], where);
    }
    return m;
}

SubalgebraSpec parse_b_spec(const json& j) {
    if (!j.is_object() || !j.contains("type")) throw parse_error("B: expected {\"type\": ...}");
    const std::string type = j.at("type").get<std::string>();
    if (type == "scalars") return SubalgebraSpec::scalars();
    if (type == "diagonal") return SubalgebraSpec::diagonal();
    if (type == "mixed") return SubalgebraSpec::mixed();
    if (type == "blocks") {
        std::vector<int> sizes;
        if (j.contains("sizes")) sizes = j.at("sizes").get<std::vector<int>>();
        return SubalgebraSpec::blocks(std::move(sizes));
    }
    if (type == "generators") {
        std::vector<CMat> gens;
        if (j.contains("generators"))
            for (const auto& g : j.at("generators")) gens.push_back(parse_matrix(g, "B.generators"));
        return SubalgebraSpec::generators_of(std::move(gens));
    }
    throw parse_error("B: unknown type '" + type + "'");
}

bool reserved_name(const std::string& name) {
    if (name == "X" || name == "t" || name == "i") return true;
    if (name.size() >= 2 && name[0] == 'e') {
        bool digits = true;
        for (std::size_t i = 1; i < name.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
        if (digits) return true;
    }
    return false;
}

json parse_json_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw parse_error(std::string(what) + ": invalid JSON");
    if (!j.is_object()) throw parse_error(std::string(what) + ": expected a JSON object");
    return j;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json quantiles_json(const Quantiles& q) {
    return ordered_json{{"min", q.min}, {"p25", q.p25}, {"p50", q.p50}, {"p75", q.p75}, {"max", q.max}};
}

ordered_json check_json(const CheckReport& r) {
    return ordered_json{{"check", r.check_name},
                        {"digest", r.inputs_digest},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"margin", r.margin},
                        {"residual", r.residual},
                        {"pass", r.pass},
                        {"representation", r.representation_used},
                        {"note", r.note}};
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) try {
    const json j = parse_json_text(json_text, "model config");
    ModelConfig cfg;
    if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    if (cfg.dim < 1) throw parse_error("model config: dim must be positive");
    if (j.contains("B")) cfg.b_spec = parse_b_spec(j.at("B"));
    if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("X")) {
        cfg.x = parse_matrix(j.at("X"), "X");
        if (cfg.x->rows() != cfg.dim || cfg.x->cols() != cfg.dim)
            throw parse_error("model config: X must be dim x dim");
    }
    if (j.contains("coeffs")) {
        if (!j.at("coeffs").is_object()) throw parse_error("model config: coeffs must be an object");
        for (const auto& [name, m] : j.at("coeffs").items()) {
            if (reserved_name(name))
                throw parse_error("model config: coefficient name '" + name + "' is reserved");
            cfg.coeffs[name] = parse_matrix(m, "coeffs");
        }
    }
    if (j.contains("degree_cap")) cfg.limits.degree_cap = j.at("degree_cap").get<int>();
    if (j.contains("spatial_dim_cap")) cfg.limits.spatial_dim_cap = j.at("spatial_dim_cap").get<int>();
    return cfg;
} catch (const json::exception& e) {
    throw parse_error(std::string("model config: ") + e.what());
}

ModelConfig load_model_config(const std::string& path) { return parse_model_config(slurp(path)); }

SuiteConfig parse_suite_config(const std::string& json_text) try {
    const json j = parse_json_text(json_text, "suite config");
    SuiteConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("dim_range")) {
        const auto r = j.at("dim_range").get<std::vector<int>>();
        if (r.size() != 2) throw parse_error("suite config: dim_range must be [min, max]");
        cfg.dim_min = r[0];
        cfg.dim_max = r[1];
    } else if (j.contains("dim")) {
        cfg.dim_min = cfg.dim_max = j.at("dim").get<int>();
    }
    if (j.contains("B")) cfg.b_spec = parse_b_spec(j.at("B"));
    if (j.contains("max_degree")) cfg.max_degree = j.at("max_degree").get<int>();
    if (j.contains("max_terms")) cfg.max_terms = j.at("max_terms").get<int>();
    if (j.contains("coeff_scale")) cfg.coeff_scale = j.at("coeff_scale").get<double>();
    if (j.contains("R_factor")) cfg.r_factor = j.at("R_factor").get<double>();
    if (j.contains("tolerance")) cfg.tolerance = j.at("tolerance").get<double>();
    if (j.contains("canonical_budget")) cfg.canonical_budget = j.at("canonical_budget").get<std::size_t>();
    cfg.validate();
    return cfg;
} catch (const json::exception& e) {
    throw parse_error(std::string("suite config: ") + e.what());
}

SuiteConfig load_suite_config(const std::string& path) { return parse_suite_config(slurp(path)); }

LoadedModel instantiate(const ModelConfig& cfg, std::uint64_t seed) {
    if (cfg.b_spec.kind == SubalgebraSpec::Kind::Mixed)
        throw parse_error("model config: B type 'mixed' is only valid for suites");
    if (cfg.b_spec.kind == SubalgebraSpec::Kind::Blocks && cfg.b_spec.block_sizes.empty())
        throw parse_error("model config: blocks spec requires explicit sizes");

    LoadedModel out;
    try {
        if (cfg.x) {
            auto alg = CoeffAlgebra::build(cfg.b_spec, cfg.dim, cfg.limits, cfg.tolerance);
            out.model = make_model(std::move(alg), *cfg.x);
        } else {
            Rng rng = Rng::stream(seed, 0, 0);
            out.model = random_model(rng, cfg.dim, cfg.b_spec, cfg.limits, cfg.tolerance);
        }
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("model config: ") + e.what());
    }
    out.context.algebra = out.model.algebra;
    out.context.materialize_unknown = false;
    for (const auto& [name, m] : cfg.coeffs) {
        if (m.rows() != cfg.dim || m.cols() != cfg.dim)
            throw parse_error("model config: coefficient '" + name + "' must be dim x dim");
        if (!out.model.algebra->in_span(m))
            throw parse_error("model config: coefficient '" + name + "' is not in span(B)");
        out.context.coeff_table[name] = m;
    }
    return out;
}

LoadedModel default_model(std::uint64_t seed) {
    ModelConfig cfg;  // diagonal B in M_4
    LoadedModel out = instantiate(cfg, seed);
    out.context.materialize_unknown = true;
    return out;
}

std::string report_to_json(const SuiteResult& result) {
    const SuiteConfig& c = result.config;
    ordered_json header{{"tool", "ncpi"},
                        {"version", "0.1.0"},
                        {"rng", Rng::family()},
                        {"config_digest", result.config_digest},
                        {"config",
                         ordered_json{{"seed", c.seed},
                                      {"trials", c.trials},
                                      {"dim_range", {c.dim_min, c.dim_max}},
                                      {"B", c.b_spec.name()},
                                      {"max_degree", c.max_degree},
                                      {"max_terms", c.max_terms},
                                      {"coeff_scale", c.coeff_scale},
                                      {"R_factor", c.r_factor},
                                      {"tolerance", c.tolerance},
                                      {"canonical_budget", c.canonical_budget}}}};

    ordered_json per_check = ordered_json::object();
    for (const auto& [name, st] : result.summary.per_check)
        per_check[name] = ordered_json{{"count", st.count}, {"failures", st.failures}};

    ordered_json summary{{"trials", result.summary.trials},
                         {"checks", result.summary.checks},
                         {"failures", result.summary.failures},
                         {"max_residual", result.summary.max_residual},
                         {"min_margin", result.summary.min_margin},
                         {"poincare_l2_margins", quantiles_json(result.summary.poincare_l2_margins)},
                         {"poincare_op_margins", quantiles_json(result.summary.poincare_op_margins)},
                         {"per_check", per_check}};

    ordered_json trials = ordered_json::array();
    for (const auto& r : result.reports) trials.push_back(check_json(r));

    ordered_json doc{{"header", header}, {"summary", summary}, {"trials", trials}};
    return doc.dump(2) + "\n";
}

std::string reports_to_json(const std::vector<CheckReport>& reports, const std::string& digest) {
    int failures = 0;
    for (const auto& r : reports)
        if (!r.pass) ++failures;
    ordered_json trials = ordered_json::array();
    for (const auto& r : reports) trials.push_back(check_json(r));
    ordered_json doc{{"header", ordered_json{{"tool", "ncpi"}, {"version", "0.1.0"}, {"digest", digest}}},
                     {"summary", ordered_json{{"checks", static_cast<int>(reports.size())}, {"failures", failures}}},
                     {"trials", trials}};
    return doc.dump(2) + "\n";
}

}  // namespace ncpi
