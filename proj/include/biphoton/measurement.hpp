#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "biphoton/density_matrix.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/jones.hpp"
#include "biphoton/random.hpp"

namespace biphoton {

inline Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

// Tr(rho (Ps x Pi)): probability that both analyzers click on one pair.
inline double coincidence_probability(const DensityMatrix& dm, const Projector& signal,
                                      const Projector& idler) {
    double p = std::real((dm.matrix() * kron(signal.p, idler.p)).trace());
    return std::clamp(p, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Fringe scans
// ---------------------------------------------------------------------------

// Coincidence probability versus the idler linear-analyzer angle.
// theta = 0 means vertical polarization.
struct Curve {
    Eigen::VectorXd theta_rad;
    Eigen::VectorXd value;
};

// Scans the idler analyzer over linear angles for a fixed signal setting.
// `idler_phase` is the retardance of an extra phase plate (fast axis
// horizontal) in front of the idler analyzer, the knob used to move the
// fringe phase without touching the source.
inline Curve visibility_scan(const DensityMatrix& dm, const AnalyzerSetting& signal,
                             const Eigen::VectorXd& theta_grid, double idler_phase = 0.0) {
    if (theta_grid.size() < 2)
        throw error("visibility_scan: need at least two angles");
    double span = theta_grid(theta_grid.size() - 1) - theta_grid(0);
    if (span < pi - 1e-9)
        throw error("visibility_scan: theta grid must cover at least one period (pi)");
    double points_per_period = double(theta_grid.size()) / (span / pi);
    if (points_per_period < 8.0)
        throw error("visibility_scan: grid too sparse, need >= 8 points per period");

    Projector ps = analyzer_projector(signal);
    Matrix2cd plate = Matrix2cd::Zero();
    plate(0, 0) = 1.0;
    plate(1, 1) = std::polar(1.0, idler_phase);

    Curve curve{theta_grid, Eigen::VectorXd(theta_grid.size())};
    for (Eigen::Index k = 0; k < theta_grid.size(); ++k) {
        Projector pi_lin = analyzer_projector(AnalyzerSetting::linear_from_vertical(theta_grid(k)));
        Projector effective{plate.adjoint() * pi_lin.p * plate};
        curve.value(k) = coincidence_probability(dm, ps, effective);
    }
    return curve;
}

inline Eigen::VectorXd scan_angles(int points, double span = pi) {
    return Eigen::VectorXd::LinSpaced(points, 0.0, span);
}

// ---------------------------------------------------------------------------
// Counting
// ---------------------------------------------------------------------------

struct TomographyRecord {
    AnalyzerSetting signal;
    AnalyzerSetting idler;
    std::uint64_t counts = 0;
    std::uint64_t background = 0;
    double duration_s = 0.0;
};

// One tomography acquisition: the settings, the observed counts, and the
// metadata needed to turn state probabilities back into expected counts.
struct TomographyDataset {
    std::vector<TomographyRecord> records;
    std::uint64_t seed = 0;
    double pair_rate_cps = 0.0;       // detected pair rate at unit probability
    double background_rate_cps = 0.0; // flat accidental floor
    double eta_signal = 1.0;          // per-arm efficiency scalars
    double eta_idler = 1.0;

    double scale(const TomographyRecord& r) const {
        return pair_rate_cps * eta_signal * eta_idler * r.duration_s;
    }
};

// The overcomplete 6 x 6 protocol: every combination of the named bases.
inline std::vector<std::pair<Basis, Basis>> protocol36() {
    const Basis all[6] = {Basis::H, Basis::V, Basis::D, Basis::A, Basis::L, Basis::R};
    std::vector<std::pair<Basis, Basis>> out;
    out.reserve(36);
    for (Basis s : all)
        for (Basis i : all) out.emplace_back(s, i);
    return out;
}

// Poisson count simulation. Every record draws from its own (seed, index)
// derived stream, so results do not depend on evaluation order; background
// counts come from a separate delayed-gate-style acquisition of the same
// duration.
inline TomographyDataset simulate_counts(const DensityMatrix& dm,
                                         const std::vector<std::pair<Basis, Basis>>& settings,
                                         double pair_rate_cps, double duration_s,
                                         double background_rate_cps, std::uint64_t seed,
                                         double eta_signal = 1.0, double eta_idler = 1.0) {
    if (pair_rate_cps < 0.0 || background_rate_cps < 0.0)
        throw error("simulate_counts: rates must be >= 0");
    if (!(duration_s > 0.0))
        throw error("simulate_counts: duration must be > 0");

    TomographyDataset data;
    data.seed = seed;
    data.pair_rate_cps = pair_rate_cps;
    data.background_rate_cps = background_rate_cps;
    data.eta_signal = eta_signal;
    data.eta_idler = eta_idler;
    data.records.reserve(settings.size());

    double eta = eta_signal * eta_idler;
    for (std::size_t k = 0; k < settings.size(); ++k) {
        TomographyRecord rec;
        rec.signal = AnalyzerSetting::named(settings[k].first);
        rec.idler = AnalyzerSetting::named(settings[k].second);
        rec.duration_s = duration_s;

        double p = coincidence_probability(dm, analyzer_projector(rec.signal),
                                           analyzer_projector(rec.idler));
        double mean = pair_rate_cps * eta * duration_s * p +
                      background_rate_cps * duration_s;
        std::mt19937_64 gen(rng::derive_seed(seed, k, 0));
        rec.counts = rng::poisson(gen, mean);
        std::mt19937_64 gen_bg(rng::derive_seed(seed, k, 1));
        rec.background = rng::poisson(gen_bg, background_rate_cps * duration_s);
        data.records.push_back(rec);
    }
    return data;
}

} // namespace biphoton
