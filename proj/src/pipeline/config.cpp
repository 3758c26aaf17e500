#include "losight/pipeline/config.hpp"

#include <fstream>

#include "losight/core/error.hpp"
#include "losight/core/parallel.hpp"
#include "losight/core/random.hpp"
#include "losight/scenegen/serialization.hpp"

namespace losight::pipeline {

using nlohmann::json;

unsigned RunConfig::resolved_jobs() const { return jobs == 0 ? default_jobs() : jobs; }

void RunConfig::validate() const {
    if (samples < 3) throw UsageError("a run needs at least 3 samples");
    grid.validate();
    slit.validate();
    profile.validate();
    features.validate();
    mlp.validate();
    meta_mlp.validate();
    double sum = 0.0;
    for (double r : split) {
        if (!(r > 0.0)) throw UsageError("split ratios must be positive");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw UsageError("split ratios must sum to 1");
    if (!(forward.wing_cutoff > 0.0)) throw UsageError("wing_cutoff must be positive");
}

std::uint64_t stage_seed(std::uint64_t seed, std::string_view stage) { return derive_seed(seed, stage); }

json config_to_json(const RunConfig& c) {
    json lines = json::array();
    for (const auto& p : c.lines) lines.push_back(p.generic_string());
    return {{"seed", c.seed},
            {"samples", c.samples},
            {"lines", lines},
            {"grid", c.grid},
            {"slit", c.slit},
            {"profile", c.profile},
            {"forward",
             {{"wing_cutoff", c.forward.wing_cutoff},
              {"partition_exponents",
               {{"CO", c.forward.partition.co}, {"CO2", c.forward.partition.co2}, {"H2O", c.forward.partition.h2o}}}}},
            {"split", c.split},
            {"features", features::group_to_json(c.features)},
            {"mlp", ml::mlp_config_to_json(c.mlp)},
            {"meta_mlp", ml::mlp_config_to_json(c.meta_mlp)},
            {"tuning",
             {{"ridge_lambdas", c.tuning.ridge_lambdas},
              {"hidden_units", c.tuning.hidden_units},
              {"rbf_spread_factors", c.tuning.rbf_spread_factors},
              {"rbf_max_centers", c.tuning.rbf_max_centers},
              {"kernel_lengthscale_factors", c.tuning.kernel_lengthscale_factors},
              {"kernel_lambdas", c.tuning.kernel_lambdas}}},
            {"output", c.output.generic_string()}};
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw UsageError("run configuration must be a JSON object");
    RunConfig c;
    try {
        if (!j.contains("seed")) throw UsageError("run configuration requires a seed");
        c.seed = j.at("seed").get<std::uint64_t>();
        c.samples = j.value("samples", c.samples);
        if (j.contains("lines")) {
            const json& l = j["lines"];
            if (l.is_string()) {
                c.lines.emplace_back(l.get<std::string>());
            } else {
                for (const auto& p : l) c.lines.emplace_back(p.get<std::string>());
            }
        }
        if (j.contains("grid")) c.grid = j["grid"].get<physics::SpectralGrid>();
        if (j.contains("slit")) c.slit = j["slit"].get<physics::SlitConfig>();
        if (j.contains("profile")) c.profile = j["profile"].get<scenegen::ProfileConfig>();
        if (j.contains("forward")) {
            const json& f = j["forward"];
            c.forward.wing_cutoff = f.value("wing_cutoff", c.forward.wing_cutoff);
            if (f.contains("partition_exponents")) {
                const json& p = f["partition_exponents"];
                c.forward.partition.co = p.value("CO", c.forward.partition.co);
                c.forward.partition.co2 = p.value("CO2", c.forward.partition.co2);
                c.forward.partition.h2o = p.value("H2O", c.forward.partition.h2o);
            }
        }
        if (j.contains("split")) c.split = j["split"].get<std::array<double, 3>>();
        if (j.contains("features")) c.features = features::group_from_json(j["features"]);
        if (j.contains("mlp")) c.mlp = ml::mlp_config_from_json(j["mlp"], c.mlp);
        if (j.contains("meta_mlp")) c.meta_mlp = ml::mlp_config_from_json(j["meta_mlp"], c.meta_mlp);
        if (j.contains("tuning")) c.tuning = ml::tuning_grid_from_json(j["tuning"], c.tuning);
        if (j.contains("output")) c.output = j["output"].get<std::string>();
        c.jobs = j.value("jobs", c.jobs);
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid run configuration: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = read_json(path);
    } catch (const DataError& e) {
        throw UsageError(e.what());
    }
    return config_from_json(j);
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

std::filesystem::path config_echo_path(const std::filesystem::path& output) {
    return std::filesystem::path(output.string() + ".config.json");
}

}  // namespace losight::pipeline
