#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "config.hpp"

// Subcommand implementations. Each returns the JSON report printed on stdout and writes
// any requested side files to the given streams.

namespace pfl::cli {

nlohmann::json cmd_design(const ProjectConfig& config, std::ostream* zone_csv = nullptr);

enum class LensModel { Pfl, Ideal, Paraxial };
LensModel lens_model_from_string(const std::string& s);

struct SimulateOptions {
    LensModel lens = LensModel::Pfl;
    // Scan limits relative to the design focal length; default +-scan_half_range.
    std::optional<double> z_min;
    std::optional<double> z_max;
    std::optional<std::size_t> steps;
    std::ostream* scan_csv = nullptr;
    std::ostream* cross_section_csv = nullptr;
};
nlohmann::json cmd_simulate(const ProjectConfig& config, const SimulateOptions& options);

struct FitOptions {
    double wavelength;
    std::ostream* curve_csv = nullptr;  // fitted w(z) per direction
    std::ostream* waist_csv = nullptr;  // per-scan waists
};
nlohmann::json cmd_fit(std::istream& knife_edge_csv, const FitOptions& options);

struct CouplingOptions {
    std::optional<double> na;
    std::optional<double> m2;
    std::optional<double> divergence;  // [rad]
    std::optional<double> eta_diff;
    std::optional<dipole::EmissionChannel> channel;
    std::optional<dipole::MConvention> convention;
};
nlohmann::json cmd_coupling(const ProjectConfig& config, const CouplingOptions& options);

nlohmann::json cmd_filter(const ProjectConfig& config, std::optional<double> na = std::nullopt);

// profile: "default" (array check at array_na), "microlens" or "networking"
nlohmann::json cmd_budget(const ProjectConfig& config, const std::string& profile = "default");

// kind: "collection" or "fidelity"
void cmd_curves(const std::string& kind, int steps, std::ostream& out);

struct SynthOptions {
    std::uint64_t seed = 0;
    double wavelength = 369.5e-9;
    double w0 = 350e-9;
    double m2 = 1.08;
    double z0 = 0.0;
    double direction_offset = 1.11e-6;  // IN focus relative to OUT
    double z_half_range = 20e-6;
    std::size_t z_steps = 25;
    std::size_t blade_positions = 50;
    double power = 1.0;
    double noise = 0.01;  // multiplicative, per sample
};
void cmd_synth(const SynthOptions& options, std::ostream& out);

}  // namespace pfl::cli
