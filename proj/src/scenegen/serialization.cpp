#include "losight/scenegen/serialization.hpp"

#include "losight/core/error.hpp"

namespace losight::physics {

void to_json(nlohmann::json& j, const SpectralGrid& g) {
    j = {{"nu_min", g.nu_min}, {"nu_max", g.nu_max}, {"step", g.step}};
}

void from_json(const nlohmann::json& j, SpectralGrid& g) {
    SpectralGrid d;
    g.nu_min = j.value("nu_min", d.nu_min);
    g.nu_max = j.value("nu_max", d.nu_max);
    g.step = j.value("step", d.step);
}

void to_json(nlohmann::json& j, const SlitConfig& s) {
    j = {{"wing", s.wing}, {"output_resolution", s.output_resolution}};
}

void from_json(const nlohmann::json& j, SlitConfig& s) {
    SlitConfig d;
    s.wing = j.value("wing", d.wing);
    s.output_resolution = j.value("output_resolution", d.output_resolution);
}

}  // namespace losight::physics

namespace losight::scenegen {

void to_json(nlohmann::json& j, const ProfileConfig& c) {
    j = {{"n_segments", c.n_segments}, {"sigma", c.sigma},         {"t_min", c.t_min},
         {"t_max", c.t_max},           {"x_min", c.x_min},         {"x_max", c.x_max},
         {"t_jitter", c.t_jitter},     {"x_jitter", c.x_jitter},   {"variant", variant_name(c.variant)},
         {"total_length", c.total_length}, {"pressure", c.pressure}};
}

void from_json(const nlohmann::json& j, ProfileConfig& c) {
    ProfileConfig d;
    c.n_segments = j.value("n_segments", d.n_segments);
    c.sigma = j.value("sigma", d.sigma);
    c.t_min = j.value("t_min", d.t_min);
    c.t_max = j.value("t_max", d.t_max);
    c.x_min = j.value("x_min", d.x_min);
    c.x_max = j.value("x_max", d.x_max);
    c.t_jitter = j.value("t_jitter", d.t_jitter);
    c.x_jitter = j.value("x_jitter", d.x_jitter);
    c.variant = parse_variant(j.value("variant", std::string(variant_name(d.variant))));
    c.total_length = j.value("total_length", d.total_length);
    c.pressure = j.value("pressure", d.pressure);
}

void to_json(nlohmann::json& j, const SplitAssignment& s) {
    j = {{"train", s.train}, {"validation", s.validation}, {"test", s.test}, {"ratios", s.ratios}, {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SplitAssignment& s) {
    j.at("train").get_to(s.train);
    j.at("validation").get_to(s.validation);
    j.at("test").get_to(s.test);
    j.at("ratios").get_to(s.ratios);
    j.at("seed").get_to(s.seed);
}

Container dataset_to_container(const Dataset& d) {
    Container c;
    c.data = d.spectra;
    c.targets = d.temperatures;
    std::vector<std::vector<double>> fractions(static_cast<std::size_t>(d.mole_fractions.rows()));
    for (Index i = 0; i < d.mole_fractions.rows(); ++i) {
        for (Index k = 0; k < d.mole_fractions.cols(); ++k) fractions[static_cast<std::size_t>(i)].push_back(d.mole_fractions(i, k));
    }
    c.metadata = {{"kind", "dataset"}, {"grid", d.grid}, {"slit", d.slit}, {"profile", d.profile},
                  {"seed", d.seed}, {"split", d.split}, {"mole_fractions", fractions},
                  {"species_order", {"CO", "CO2", "H2O"}}};
    return c;
}

Dataset dataset_from_container(const Container& c) {
    try {
        if (c.metadata.value("kind", std::string()) != "dataset") throw DataError("LOSD file does not hold a dataset");
        Dataset d;
        d.spectra = c.data;
        d.temperatures = c.targets;
        d.grid = c.metadata.at("grid").get<physics::SpectralGrid>();
        d.slit = c.metadata.at("slit").get<physics::SlitConfig>();
        d.profile = c.metadata.at("profile").get<ProfileConfig>();
        d.seed = c.metadata.at("seed").get<std::uint64_t>();
        d.split = c.metadata.at("split").get<SplitAssignment>();
        const auto fractions = c.metadata.at("mole_fractions").get<std::vector<std::vector<double>>>();
        const Index cols = fractions.empty() ? 0 : static_cast<Index>(fractions.front().size());
        d.mole_fractions.resize(static_cast<Index>(fractions.size()), cols);
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            if (static_cast<Index>(fractions[i].size()) != cols) throw DataError("ragged mole-fraction metadata");
            for (Index k = 0; k < cols; ++k) d.mole_fractions(static_cast<Index>(i), k) = fractions[i][static_cast<std::size_t>(k)];
        }
        if (d.spectra.rows() != d.temperatures.rows()) throw DataError("dataset spectra/target row mismatch");
        if (d.spectra.cols() != static_cast<Index>(d.grid.size())) throw DataError("dataset spectra do not match grid");
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed dataset metadata: ") + e.what());
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& d) { write_container(path, dataset_to_container(d)); }

Dataset load_dataset(const std::filesystem::path& path) { return dataset_from_container(read_container(path)); }

}  // namespace losight::scenegen
