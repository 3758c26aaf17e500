#include "losight/physics/lines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "losight/core/error.hpp"
#include "losight/core/random.hpp"
#include "losight/physics/constants.hpp"

namespace losight::physics {

std::string_view species_name(Species s) {
    switch (s) {
        case Species::CO: return "CO";
        case Species::CO2: return "CO2";
        case Species::H2O: return "H2O";
    }
    return "?";
}

std::optional<Species> parse_species(std::string_view name) {
    if (name == "CO") return Species::CO;
    if (name == "CO2") return Species::CO2;
    if (name == "H2O") return Species::H2O;
    return std::nullopt;
}

double molecular_mass(Species s) {
    constexpr double amu = PhysicalConstants::atomic_mass;
    switch (s) {
        case Species::CO: return 27.994915 * amu;
        case Species::CO2: return 43.989830 * amu;
        case Species::H2O: return 18.010565 * amu;
    }
    return 0.0;
}

void validate(const LineRecord& line) {
    if (!(line.nu0 > 0.0)) throw DataError("line record: nu0 must be positive");
    if (!(line.s_ref > 0.0)) throw DataError("line record: s_ref must be positive");
    if (!(line.gamma_air > 0.0)) throw DataError("line record: gamma_air must be positive");
    if (!(line.e_lower >= 0.0)) throw DataError("line record: e_lower must be nonnegative");
    if (!std::isfinite(line.n_air)) throw DataError("line record: n_air must be finite");
}

LineDatabase::LineDatabase(std::vector<LineRecord> lines) : lines_(std::move(lines)) {
    for (const auto& l : lines_) validate(l);
    std::stable_sort(lines_.begin(), lines_.end(),
                     [](const LineRecord& a, const LineRecord& b) { return a.nu0 < b.nu0; });
}

std::size_t LineDatabase::count(Species s) const {
    return static_cast<std::size_t>(
        std::count_if(lines_.begin(), lines_.end(), [s](const LineRecord& l) { return l.species == s; }));
}

std::vector<LineRecord>::const_iterator LineDatabase::lower_bound(double nu) const {
    return std::lower_bound(lines_.begin(), lines_.end(), nu,
                            [](const LineRecord& l, double v) { return l.nu0 < v; });
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view field, std::string_view what, std::size_t line_no) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw DataError("line " + std::to_string(line_no) + ": cannot parse " + std::string(what) + " '" +
                        std::string(field) + "'");
    }
    return value;
}

int parse_int(std::string_view field, std::string_view what, std::size_t line_no) {
    field = trim(field);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw DataError("line " + std::to_string(line_no) + ": cannot parse " + std::string(what));
    }
    return value;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, line_no);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
}

}  // namespace

LineDatabase parse_hitran_par(std::string_view text) {
    std::vector<LineRecord> lines;
    for_each_line(text, [&](std::string_view row, std::size_t line_no) {
        if (trim(row).empty()) return;
        if (row.size() < 67) throw DataError("line " + std::to_string(line_no) + ": HITRAN record too short");
        const int molecule = parse_int(row.substr(0, 2), "molecule id", line_no);
        const int isotopologue = parse_int(row.substr(2, 1), "isotopologue", line_no);
        LineRecord rec;
        switch (molecule) {
            case 1: rec.species = Species::H2O; break;
            case 2: rec.species = Species::CO2; break;
            case 5: rec.species = Species::CO; break;
            default:
                throw DataError("line " + std::to_string(line_no) + ": unsupported molecule id " +
                                std::to_string(molecule));
        }
        if (isotopologue != 1) return;
        rec.nu0 = parse_double(row.substr(3, 12), "nu0", line_no);
        rec.s_ref = parse_double(row.substr(15, 10), "intensity", line_no);
        rec.gamma_air = parse_double(row.substr(35, 5), "gamma_air", line_no);
        rec.e_lower = parse_double(row.substr(45, 10), "lower-state energy", line_no);
        rec.n_air = parse_double(row.substr(55, 4), "n_air", line_no);
        lines.push_back(rec);
    });
    return LineDatabase(std::move(lines));
}

LineDatabase load_hitran_par(const std::filesystem::path& path) { return parse_hitran_par(read_file(path)); }

LineDatabase parse_line_csv(std::string_view text) {
    std::vector<LineRecord> lines;
    bool header_seen = false;
    for_each_line(text, [&](std::string_view row, std::size_t line_no) {
        if (trim(row).empty()) return;
        if (!header_seen) {
            if (trim(row) != "species,nu0,s_ref,gamma_air,e_lower,n_air") {
                throw DataError("line list CSV: unexpected header");
            }
            header_seen = true;
            return;
        }
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        for (;;) {
            const auto comma = row.find(',', start);
            fields.push_back(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 6) throw DataError("line " + std::to_string(line_no) + ": expected 6 fields");
        const auto species = parse_species(trim(fields[0]));
        if (!species) {
            throw DataError("line " + std::to_string(line_no) + ": unknown species '" + std::string(fields[0]) + "'");
        }
        LineRecord rec;
        rec.species = *species;
        rec.nu0 = parse_double(fields[1], "nu0", line_no);
        rec.s_ref = parse_double(fields[2], "s_ref", line_no);
        rec.gamma_air = parse_double(fields[3], "gamma_air", line_no);
        rec.e_lower = parse_double(fields[4], "e_lower", line_no);
        rec.n_air = parse_double(fields[5], "n_air", line_no);
        lines.push_back(rec);
    });
    if (!header_seen) throw DataError("line list CSV: missing header");
    return LineDatabase(std::move(lines));
}

LineDatabase load_line_csv(const std::filesystem::path& path) { return parse_line_csv(read_file(path)); }

std::string format_line_csv(const LineDatabase& db) {
    std::ostringstream out;
    out << "species,nu0,s_ref,gamma_air,e_lower,n_air\n";
    out << std::setprecision(17);
    for (const auto& l : db.lines()) {
        out << species_name(l.species) << ',' << l.nu0 << ',' << l.s_ref << ',' << l.gamma_air << ','
            << l.e_lower << ',' << l.n_air << '\n';
    }
    return out.str();
}

LineDatabase load_line_database(const std::filesystem::path& path) {
    if (path.extension() == ".par") return load_hitran_par(path);
    return load_line_csv(path);
}

namespace {

constexpr double kRefT = PhysicalConstants::reference_temperature;
constexpr double kC2 = PhysicalConstants::c2;

struct LinearBand {
    Species species;
    double origin;        // cm^-1
    double b_lower;       // rotational constant, cm^-1
    double b_upper;
    double e_vib;         // lower vibrational energy, cm^-1
    double strength;      // band strength scale, cm/molecule
    int j_max;
    int j_step;           // 2 for CO2 ground-state parity
    int j_first;
    double gamma0;
    double gamma_slope;
    double n_air;
};

void add_linear_band(const LinearBand& band, std::vector<LineRecord>& out) {
    const double q_rot = 0.695 * kRefT / band.b_lower;
    auto emit = [&](int j, int m) {
        const double nu = band.origin + (band.b_upper + band.b_lower) * m +
                          (band.b_upper - band.b_lower) * m * m;
        const double e_lower = band.e_vib + band.b_lower * j * (j + 1);
        LineRecord rec;
        rec.species = band.species;
        rec.nu0 = nu;
        rec.e_lower = e_lower;
        rec.s_ref = band.strength * std::abs(m) / q_rot * std::exp(-kC2 * e_lower / kRefT);
        rec.gamma_air = std::max(0.02, band.gamma0 - band.gamma_slope * std::abs(m));
        rec.n_air = band.n_air;
        out.push_back(rec);
    };
    for (int j = band.j_first; j <= band.j_max; j += band.j_step) {
        emit(j, j + 1);      // R(J)
        if (j > 0) emit(j, -j);  // P(J)
    }
}

}  // namespace

const LineDatabase& bundled_line_list() {
    static const LineDatabase db = [] {
        std::vector<LineRecord> lines;
        // CO fundamental and first hot band.
        add_linear_band({Species::CO, 2143.27, 1.9225, 1.9050, 0.0, 1.0e-17, 75, 1, 0, 0.075, 0.0002, 0.70}, lines);
        add_linear_band({Species::CO, 2116.63, 1.9050, 1.8875, 2143.27, 2.0e-17, 75, 1, 0, 0.075, 0.0002, 0.70},
                        lines);
        // CO2 nu3 fundamental (even J) and two hot bands.
        add_linear_band({Species::CO2, 2349.14, 0.3902, 0.3871, 0.0, 9.5e-17, 120, 2, 0, 0.095, 0.0002, 0.75},
                        lines);
        add_linear_band({Species::CO2, 2336.63, 0.3906, 0.3875, 667.38, 1.9e-16, 100, 1, 1, 0.095, 0.0002, 0.75},
                        lines);
        add_linear_band({Species::CO2, 2324.18, 0.3871, 0.3840, 2349.14, 1.9e-16, 110, 2, 0, 0.095, 0.0002, 0.75},
                        lines);
        // H2O: dense asymmetric-top-like field from the bending band's R
        // branch tail; positions stratified, energies rising with distance
        // from the band origin.
        Rng rng(0x4832304c494e4553ULL);
        constexpr int kWaterLines = 360;
        constexpr double kWaterOrigin = 1594.75;
        constexpr double kWaterB = 12.0;
        for (int i = 0; i < kWaterLines; ++i) {
            const double nu = 1790.0 + (720.0 / kWaterLines) * (i + rng.uniform());
            const double offset = nu - kWaterOrigin;
            const double j = offset / (2.0 * kWaterB);
            LineRecord rec;
            rec.species = Species::H2O;
            rec.nu0 = nu;
            rec.e_lower = std::min(9000.0, kWaterB * j * j * rng.uniform(0.6, 1.4));
            rec.s_ref = 2.0e-19 * j / 60.0 * std::exp(-kC2 * rec.e_lower / kRefT) * rng.uniform(0.2, 1.8);
            rec.gamma_air = rng.uniform(0.06, 0.11);
            rec.n_air = rng.uniform(0.55, 0.75);
            lines.push_back(rec);
        }
        return LineDatabase(std::move(lines));
    }();
    return db;
}

}  // namespace losight::physics
