#include "molcool/molecule.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "molcool/constants.hpp"
#include "molcool/errors.hpp"

namespace molcool {

void MoleculeSpec::validate() const {
    if (mass <= 0.0) throw ConfigError("molecule '" + name + "': mass must be positive");
    if (dipole <= 0.0) throw ConfigError("molecule '" + name + "': dipole must be positive");
    if (rot_const_a <= 0.0 || rot_const_b <= 0.0) {
        throw ConfigError("molecule '" + name + "': rotational constants must be positive");
    }
    if (vib_freq <= 0.0) throw ConfigError("molecule '" + name + "': f_vib must be positive");
    if (decay_rate < 0.0) throw ConfigError("molecule '" + name + "': gamma must be >= 0");
}

MoleculeSpec load_molecule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open molecule file: " + path);

    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("molecule file " + path + ": " + e.what());
    }

    const std::set<std::string> known = {"name",     "mass_amu",  "dipole_debye", "A_cm1",
                                         "B_cm1",    "f_vib_cm1", "gamma_hz"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) {
            throw ConfigError("molecule file " + path + ": unknown key '" + key + "'");
        }
    }
    for (const auto& key : known) {
        if (!j.contains(key)) {
            throw ConfigError("molecule file " + path + ": missing key '" + key + "'");
        }
    }

    MoleculeSpec spec;
    try {
        spec.name = j.at("name").get<std::string>();
        spec.mass = j.at("mass_amu").get<double>() * constants::amu;
        spec.dipole = j.at("dipole_debye").get<double>() * constants::debye;
        spec.rot_const_a = j.at("A_cm1").get<double>() * constants::wavenumber_cm_to_joule;
        spec.rot_const_b = j.at("B_cm1").get<double>() * constants::wavenumber_cm_to_joule;
        spec.vib_freq = j.at("f_vib_cm1").get<double>() * 100.0;  // cm^-1 -> m^-1
        spec.decay_rate = j.at("gamma_hz").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("molecule file " + path + ": " + e.what());
    }
    spec.validate();
    return spec;
}

}  // namespace molcool
