#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace losight::physics {

enum class Species : int { CO = 0, CO2 = 1, H2O = 2 };

inline constexpr std::size_t kSpeciesCount = 3;
inline constexpr std::array<Species, kSpeciesCount> kAllSpecies{Species::CO, Species::CO2, Species::H2O};

std::string_view species_name(Species s);
std::optional<Species> parse_species(std::string_view name);
/// Mass of the dominant isotopologue, kg.
double molecular_mass(Species s);

struct LineRecord {
    Species species = Species::CO;
    double nu0 = 0.0;        // cm^-1
    double s_ref = 0.0;      // cm^-1/(molecule cm^-2) at 296 K
    double gamma_air = 0.0;  // cm^-1/atm at 296 K
    double e_lower = 0.0;    // cm^-1
    double n_air = 0.0;
};

/// Throws DataError when a record violates nu0 > 0, s_ref > 0, gamma_air > 0, e_lower >= 0.
void validate(const LineRecord& line);

/// Immutable, sorted-by-center line list.
class LineDatabase {
public:
    LineDatabase() = default;
    explicit LineDatabase(std::vector<LineRecord> lines);

    const std::vector<LineRecord>& lines() const { return lines_; }
    std::size_t size() const { return lines_.size(); }
    bool empty() const { return lines_.empty(); }
    std::size_t count(Species s) const;

    /// First line with nu0 >= nu.
    std::vector<LineRecord>::const_iterator lower_bound(double nu) const;

private:
    std::vector<LineRecord> lines_;
};

/// HITRAN 2004 160-character records. Molecule ids 1 (H2O), 2 (CO2), 5 (CO);
/// only isotopologue 1 is retained. Other molecule ids are rejected.
LineDatabase parse_hitran_par(std::string_view text);
LineDatabase load_hitran_par(const std::filesystem::path& path);

/// CSV with header `species,nu0,s_ref,gamma_air,e_lower,n_air`.
LineDatabase parse_line_csv(std::string_view text);
LineDatabase load_line_csv(const std::filesystem::path& path);
std::string format_line_csv(const LineDatabase& db);

/// Dispatches on extension: `.par` is HITRAN, anything else native CSV.
LineDatabase load_line_database(const std::filesystem::path& path);

/// Deterministic synthetic line list covering 1800-2500 cm^-1: CO fundamental
/// and hot band, CO2 nu3 band with two hot bands, and a dense H2O field.
const LineDatabase& bundled_line_list();

}  // namespace losight::physics
