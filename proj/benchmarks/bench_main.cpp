#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "pfl/beam_analysis.hpp"
#include "pfl/dipole_collection.hpp"
#include "pfl/hankel_transform.hpp"
#include "pfl/pfl_design.hpp"
#include "pfl/scalar_diffraction.hpp"
#include "pfl/units.hpp"

using namespace pfl;
using units::mm;
using units::nm;
using units::um;

namespace {

constexpr double lambda = 369.5 * nm;

void BM_HankelConstruct(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        diffraction::HankelTransform h(n, 3 * mm);
        benchmark::DoNotOptimize(h.max_wavenumber());
    }
}
BENCHMARK(BM_HankelConstruct)->Arg(1024)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_HankelForward(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const diffraction::HankelTransform h(n, 3 * mm);
    std::vector<std::complex<double>> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = h.radii()[i];
        f[i] = std::exp(-r * r / (1.1 * mm * 1.1 * mm));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(h.forward(f));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HankelForward)->RangeMultiplier(2)->Range(1024, 8192)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ZoneLayout(benchmark::State& state)
{
    const design::LensDesign lens(3 * mm, 5 * mm, lambda);
    for (auto _ : state) {
        benchmark::DoNotOptimize(design::zone_layout(lens));
    }
}
BENCHMARK(BM_ZoneLayout);

void BM_ReferenceFocalPoint(benchmark::State& state)
{
    const design::LensDesign lens(3 * mm, 5 * mm, lambda);
    const auto layout = design::zone_layout(lens);
    const auto grid = diffraction::make_grid(diffraction::recommended_grid(layout));
    const auto input = diffraction::make_gaussian_field(grid, 1.1 * mm, lambda);
    const auto lensed = diffraction::apply_binary_pfl(input, layout);
    for (auto _ : state) {
        benchmark::DoNotOptimize(diffraction::focal_scan(lensed, 3 * mm - 50 * nm, 3 * mm + 50 * nm, 2));
    }
}
BENCHMARK(BM_ReferenceFocalPoint)->Unit(benchmark::kMillisecond)->Iterations(2);

std::vector<beam::KnifeEdgeSample> knife_edge_samples(std::size_t n)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<beam::KnifeEdgeSample> s;
    const double w = 0.8 * um;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -2.5 * w + 5.0 * w * static_cast<double>(i) / static_cast<double>(n - 1);
        s.push_back({x, beam::knife_edge_model(x, 1.0, 0.0, w) * (1.0 + noise(rng))});
    }
    return s;
}

void BM_FitKnifeEdge(benchmark::State& state)
{
    const beam::KnifeEdgeScan scan(0.0, beam::Direction::In, knife_edge_samples(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(beam::fit_knife_edge(scan));
    }
}
BENCHMARK(BM_FitKnifeEdge)->Arg(50)->Arg(500);

void BM_FitCaustic(benchmark::State& state)
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> noise(0.0, 0.02);
    std::vector<beam::WaistPoint> points;
    const beam::CausticParameters truth{350 * nm, 1.08, 0.0, 1.11 * um};
    for (int i = 0; i < 25; ++i) {
        const double z = -20 * um + 40 * um * i / 24.0;
        for (auto dir : {beam::Direction::In, beam::Direction::Out}) {
            const double w = std::sqrt(beam::caustic_model(truth, lambda, z, dir));
            points.push_back({z, w * (1.0 + noise(rng)), 0.0, dir});
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(beam::fit_caustic(points, lambda));
    }
}
BENCHMARK(BM_FitCaustic);

void BM_CollectedFidelity(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(dipole::polarization_fidelity_collected(geometry::NumericalAperture(0.9)));
    }
}
BENCHMARK(BM_CollectedFidelity);

void BM_GaussianOverlap(benchmark::State& state)
{
    const dipole::EmissionChannel channel{dipole::Polarization::SigmaPlus, dipole::Orientation::Equatorial};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dipole::gaussian_overlap_oracle(channel, 0.5));
    }
}
BENCHMARK(BM_GaussianOverlap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
