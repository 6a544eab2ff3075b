#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Knife-edge beam profiling and Gaussian caustic (w(z), M^2) fitting.

namespace pfl::beam {

enum class Direction { In, Out };

std::string to_string(Direction d);
Direction direction_from_string(const std::string& s);  // "in" | "out", case-insensitive

struct KnifeEdgeSample {
    double blade_position;  // [m]
    double power;           // [W] or arbitrary
};

// Validating container: >= 8 samples, strictly monotone blade positions, non-negative powers.
class KnifeEdgeScan {
public:
    KnifeEdgeScan(double z, Direction direction, std::vector<KnifeEdgeSample> samples);

    double z() const noexcept { return z_; }
    Direction direction() const noexcept { return direction_; }
    const std::vector<KnifeEdgeSample>& samples() const noexcept { return samples_; }

private:
    double z_;
    Direction direction_;
    std::vector<KnifeEdgeSample> samples_;
};

struct WaistPoint {
    double z = 0.0;
    double w = 0.0;
    double w_uncertainty = 0.0;  // 1 sigma; 0 means unknown
    Direction direction = Direction::In;
};

// P(x) = b + P_total/2 * erfc(+-sqrt(2)(x - c)/w); '+' for a blade moving in.
double knife_edge_model(double blade_position, double total_power, double center, double w,
                        Direction direction = Direction::In, double background = 0.0);

// Partial derivatives with respect to (total_power, center, w, background).
std::array<double, 4> knife_edge_gradient(double blade_position, double total_power, double center, double w,
                                          Direction direction = Direction::In);

struct KnifeEdgeFit {
    double total_power = 0.0;
    double center = 0.0;
    double w = 0.0;
    double background = 0.0;
    std::array<double, 4> uncertainties{};  // same order as the parameters
    std::vector<double> residuals;          // data - model
    double rms_residual = 0.0;
    int iterations = 0;
};

KnifeEdgeFit fit_knife_edge(const KnifeEdgeScan& scan);
WaistPoint fit_scan(const KnifeEdgeScan& scan);

struct CausticFit {
    double w0 = 0.0;
    double m2 = 0.0;
    double z0 = 0.0;
    double direction_offset = 0.0;  // focus of IN points relative to OUT points
    bool offset_fixed = false;      // single-direction data
    // Row-major over (w0, m2, z0, direction_offset).
    std::array<double, 16> covariance{};
    std::vector<double> residuals;  // w_model - w_data per point [m]
    double wavelength = 0.0;
    int iterations = 0;
    std::vector<std::string> warnings;

    double uncertainty(std::size_t i) const;
};

/// Weighted fit of w^2(z) = w0^2 + M^4 (lambda/(pi w0))^2 (z - z0 - offset*[IN])^2.
/// Points with zero uncertainty are weighted as if they had equal relative errors, and the
/// covariance is then scaled by the reduced chi-square.
CausticFit fit_caustic(const std::vector<WaistPoint>& points, double wavelength);

// w(z) of a fitted caustic for the given blade direction.
double caustic_waist(const CausticFit& fit, double z, Direction direction = Direction::Out);

struct CausticParameters {
    double w0;
    double m2;
    double z0;
    double offset;
};

// w^2 and its gradient with respect to (w0, m2, z0, offset).
double caustic_model(const CausticParameters& p, double wavelength, double z, Direction direction);
std::array<double, 4> caustic_gradient(const CausticParameters& p, double wavelength, double z,
                                       Direction direction);

struct DerivedBeamParameters {
    double divergence_half_angle;  // M^2 lambda / (pi w0)
    double rayleigh_range;         // pi w0^2 / lambda
    bool paraxial_valid;           // false once the half angle exceeds ~0.5 rad
};

DerivedBeamParameters derived_beam_parameters(const CausticFit& fit, double wavelength);
DerivedBeamParameters derived_beam_parameters(double w0, double m2, double wavelength);

// Either file layout: a single scan ("z_m,direction" block) or combined
// "z_m,blade_position_m,power,direction" rows grouped by (z, direction).
std::vector<KnifeEdgeScan> read_knife_edge_csv(std::istream& is);
void write_knife_edge_csv(std::ostream& os, const std::vector<KnifeEdgeScan>& scans);
void write_single_scan_csv(std::ostream& os, const KnifeEdgeScan& scan);

// "z_m,w_m,w_uncertainty_m,direction"
void write_waist_csv(std::ostream& os, const std::vector<WaistPoint>& points);
std::vector<WaistPoint> read_waist_csv(std::istream& is);

}  // namespace pfl::beam
