#include "app.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <memory>
#include <optional>
#include <ostream>

#include "commands.hpp"
#include "pfl/errors.hpp"
#include "pfl/units.hpp"

namespace pfl::cli {
namespace {

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Output file that stays closed when no path was given.
struct OutputFile {
    std::unique_ptr<std::ofstream> stream;

    explicit OutputFile(const std::string& path)
    {
        if (path.empty()) {
            return;
        }
        stream = std::make_unique<std::ofstream>(path);
        if (!*stream) {
            throw FileError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream* get() const { return stream.get(); }
};

ProjectConfig config_from(const std::string& path)
{
    return path.empty() ? ProjectConfig{} : load_config(path);
}

void print(std::ostream& out, const nlohmann::json& report)
{
    out << report.dump(2) << '\n';
}

template <class T>
std::optional<T> opt(const CLI::Option* o, T value)
{
    return o->count() > 0 ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Phase Fresnel lens design, focal simulation and photon-collection budgets", "pfl"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "pfl 0.3.0");

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "YAML project configuration")->check(CLI::ExistingFile);
    };

    auto* design = app.add_subcommand("design", "Zone layout and lens summary");
    add_config(design);
    std::string zones_csv;
    design->add_option("--zones-csv", zones_csv, "Write the zone table to this CSV");

    auto* simulate = app.add_subcommand("simulate", "Nonparaxial focal scan with virtual knife edges");
    add_config(simulate);
    std::string lens_model = "pfl";
    double z_min_um = 0.0;
    double z_max_um = 0.0;
    std::size_t steps = 0;
    std::string scan_csv;
    std::string cross_csv;
    simulate->add_option("--lens", lens_model, "pfl, ideal or paraxial")->capture_default_str();
    auto* z_min_opt = simulate->add_option("--z-min-um", z_min_um, "Scan start relative to the focal length");
    auto* z_max_opt = simulate->add_option("--z-max-um", z_max_um, "Scan end relative to the focal length");
    auto* steps_opt = simulate->add_option("--steps", steps, "Number of scan planes")->check(CLI::Range(5, 100000));
    simulate->add_option("--scan-csv", scan_csv, "Write waist versus z");
    simulate->add_option("--cross-section-csv", cross_csv, "Write the best-focus intensity profile");

    auto* fit = app.add_subcommand("fit", "Fit knife-edge scans and the beam caustic");
    std::string fit_input;
    double fit_wavelength_nm = 369.5;
    std::string curve_csv;
    std::string waist_csv;
    fit->add_option("input", fit_input, "Knife-edge CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--wavelength-nm", fit_wavelength_nm, "Wavelength for M^2")->capture_default_str();
    fit->add_option("--curve-csv", curve_csv, "Write the fitted w(z) for both directions");
    fit->add_option("--waist-csv", waist_csv, "Write the per-scan waists");

    auto* coupling = app.add_subcommand("coupling", "Collection and coherent coupling probabilities");
    add_config(coupling);
    double na = 0.0;
    double m2 = 1.0;
    double divergence_mrad = 0.0;
    double eta = 0.0;
    std::string polarization;
    std::string orientation;
    std::string convention;
    std::string collection_csv;
    std::string fidelity_csv;
    int curve_steps = 100;
    auto* na_opt = coupling->add_option("--na", na, "Numerical aperture (default: the configured lens)");
    auto* m2_opt = coupling->add_option("--m2", m2, "Beam quality factor");
    auto* div_opt = coupling->add_option("--divergence-mrad", divergence_mrad, "Measured divergence half-angle");
    auto* eta_opt = coupling->add_option("--eta", eta, "Diffraction efficiency");
    coupling->add_option("--polarization", polarization, "sigma_plus, sigma_minus or pi");
    coupling->add_option("--orientation", orientation, "polar or equatorial");
    coupling->add_option("--m-convention", convention, "sqrt_m2, m2_as_m or unity");
    coupling->add_option("--collection-csv", collection_csv, "Write collection fraction versus NA");
    coupling->add_option("--fidelity-csv", fidelity_csv, "Write polarization fidelity versus NA");
    coupling->add_option("--curve-steps", curve_steps, "NA steps for the curve CSVs")->check(CLI::PositiveNumber);

    auto* filter = app.add_subcommand("filter", "Etalon suppression and scheme error budget");
    add_config(filter);
    double filter_na = 0.0;
    auto* filter_na_opt = filter->add_option("--na", filter_na, "Collection NA");

    auto* budget = app.add_subcommand("budget", "Trap-array, fault-tolerance and networking budget");
    add_config(budget);
    std::string profile = "default";
    budget->add_option("--profile", profile, "default, microlens or networking")
        ->check(CLI::IsMember({"default", "microlens", "networking"}))
        ->capture_default_str();

    auto* curves = app.add_subcommand("curves", "Collection or fidelity curve CSV on stdout");
    std::string curve_kind;
    curves->add_option("kind", curve_kind, "collection or fidelity")
        ->required()
        ->check(CLI::IsMember({"collection", "fidelity"}));
    curves->add_option("--steps", curve_steps, "NA steps")->check(CLI::PositiveNumber);

    auto* synth = app.add_subcommand("synth", "Seeded synthetic knife-edge dataset on stdout");
    SynthOptions so;
    double synth_w0_nm = so.w0 / units::nm;
    double synth_offset_um = so.direction_offset / units::um;
    double synth_range_um = so.z_half_range / units::um;
    double synth_wavelength_nm = so.wavelength / units::nm;
    std::string synth_output;
    synth->add_option("--seed", so.seed, "Random seed")->required();
    synth->add_option("--w0-nm", synth_w0_nm)->capture_default_str();
    synth->add_option("--m2", so.m2)->capture_default_str();
    synth->add_option("--wavelength-nm", synth_wavelength_nm)->capture_default_str();
    synth->add_option("--direction-offset-um", synth_offset_um)->capture_default_str();
    synth->add_option("--z-half-range-um", synth_range_um)->capture_default_str();
    synth->add_option("--z-steps", so.z_steps)->capture_default_str();
    synth->add_option("--blade-positions", so.blade_positions)->capture_default_str();
    synth->add_option("--noise", so.noise, "Relative noise per sample")->capture_default_str();
    synth->add_option("-o,--output", synth_output, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (design->parsed()) {
            OutputFile zones(zones_csv);
            print(out, cmd_design(config_from(config_path), zones.get()));
        } else if (simulate->parsed()) {
            OutputFile scan(scan_csv);
            OutputFile cross(cross_csv);
            SimulateOptions o;
            o.lens = lens_model_from_string(lens_model);
            if (z_min_opt->count() > 0) {
                o.z_min = z_min_um * units::um;
            }
            if (z_max_opt->count() > 0) {
                o.z_max = z_max_um * units::um;
            }
            o.steps = opt(steps_opt, steps);
            o.scan_csv = scan.get();
            o.cross_section_csv = cross.get();
            print(out, cmd_simulate(config_from(config_path), o));
        } else if (fit->parsed()) {
            std::ifstream in(fit_input);
            if (!in) {
                throw FileError("cannot open '" + fit_input + "'");
            }
            OutputFile curve(curve_csv);
            OutputFile waists(waist_csv);
            print(out, cmd_fit(in, {fit_wavelength_nm * units::nm, curve.get(), waists.get()}));
        } else if (coupling->parsed()) {
            const auto config = config_from(config_path);
            CouplingOptions o;
            o.na = opt(na_opt, na);
            o.m2 = opt(m2_opt, m2);
            if (div_opt->count() > 0) {
                o.divergence = divergence_mrad * units::mrad;
            }
            o.eta_diff = opt(eta_opt, eta);
            auto channel = config.channel;
            if (!polarization.empty()) {
                channel.polarization = dipole::polarization_from_string(polarization);
            }
            if (!orientation.empty()) {
                channel.orientation = dipole::orientation_from_string(orientation);
            }
            o.channel = channel;
            if (!convention.empty()) {
                o.convention = dipole::m_convention_from_string(convention);
            }
            OutputFile collection(collection_csv);
            OutputFile fidelity(fidelity_csv);
            const auto report = cmd_coupling(config, o);
            if (collection.get() != nullptr) {
                cmd_curves("collection", curve_steps, *collection.get());
            }
            if (fidelity.get() != nullptr) {
                cmd_curves("fidelity", curve_steps, *fidelity.get());
            }
            print(out, report);
        } else if (filter->parsed()) {
            print(out, cmd_filter(config_from(config_path), opt(filter_na_opt, filter_na)));
        } else if (budget->parsed()) {
            print(out, cmd_budget(config_from(config_path), profile));
        } else if (curves->parsed()) {
            cmd_curves(curve_kind, curve_steps, out);
        } else if (synth->parsed()) {
            so.w0 = synth_w0_nm * units::nm;
            so.wavelength = synth_wavelength_nm * units::nm;
            so.direction_offset = synth_offset_um * units::um;
            so.z_half_range = synth_range_um * units::um;
            OutputFile file(synth_output);
            cmd_synth(so, file.get() != nullptr ? *file.get() : out);
        }
    } catch (const SchemaError& e) {
        err << "pfl: input error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "pfl: invalid value: " << e.what() << '\n';
        return 2;
    } catch (const FileError& e) {
        err << "pfl: " << e.what() << '\n';
        return 2;
    } catch (const FitError& e) {
        err << "pfl: fit failed: " << e.what() << " (residual norm " << e.final_residual() << ")\n";
        return 3;
    } catch (const ResolutionError& e) {
        err << "pfl: resolution error: " << e.what() << '\n';
        return 3;
    } catch (const AccuracyError& e) {
        err << "pfl: integration error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "pfl: invalid argument: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace pfl::cli
