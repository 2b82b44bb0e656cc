#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

using Matrix2cd = Eigen::Matrix2cd;
using Vector2cd = Eigen::Vector2cd;

// Jones-calculus convention used throughout: the (H, V) column vector, wave
// plates written as R(theta) diag(1, e^{i delta}) R(-theta) with the
// fast-axis angle theta measured from horizontal, retardance delta on the
// slow axis. The six canonical analyzer outputs below pin the convention.
namespace jones {

inline Eigen::Matrix2d rotation(double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

inline Matrix2cd waveplate(double theta, double retardance) {
    Matrix2cd d = Matrix2cd::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = std::polar(1.0, retardance);
    return rotation(theta).cast<complexd>() * d * rotation(-theta).cast<complexd>();
}

inline Matrix2cd quarter_wave(double theta) { return waveplate(theta, pi / 2.0); }
inline Matrix2cd half_wave(double theta) { return waveplate(theta, pi); }

inline Vector2cd linear(double angle_from_h) {
    return Vector2cd(std::cos(angle_from_h), std::sin(angle_from_h));
}

} // namespace jones

enum class Basis { H, V, D, A, L, R };

inline const char* basis_name(Basis b) {
    switch (b) {
    case Basis::H: return "H";
    case Basis::V: return "V";
    case Basis::D: return "D";
    case Basis::A: return "A";
    case Basis::L: return "L";
    case Basis::R: return "R";
    }
    return "?";
}

inline Basis basis_from_name(const std::string& s) {
    if (s == "H") return Basis::H;
    if (s == "V") return Basis::V;
    if (s == "D") return Basis::D;
    if (s == "A") return Basis::A;
    if (s == "L") return Basis::L;
    if (s == "R") return Basis::R;
    throw config_error("unknown polarization basis '" + s + "'");
}

// HWP + QWP + linear polarizer, in light order, each element given by its
// angle from horizontal.
struct AnalyzerSetting {
    double qwp_rad = 0.0;
    double hwp_rad = 0.0;
    double polarizer_rad = 0.0;
    std::optional<Basis> name;

    // Canonical settings for the six named bases, polarizer fixed at H:
    // linear bases rotate only the HWP, circular ones only the QWP.
    static AnalyzerSetting named(Basis b) {
        switch (b) {
        case Basis::H: return {0.0, 0.0, 0.0, b};
        case Basis::V: return {0.0, pi / 4.0, 0.0, b};
        case Basis::D: return {0.0, pi / 8.0, 0.0, b};
        case Basis::A: return {0.0, -pi / 8.0, 0.0, b};
        case Basis::L: return {pi / 4.0, 0.0, 0.0, b};
        case Basis::R: return {-pi / 4.0, 0.0, 0.0, b};
        }
        throw error("AnalyzerSetting::named: bad basis");
    }

    // Linear measurement at `theta` from *vertical* (fringe-scan convention):
    // all elements aligned with the transmission axis, so the plates are inert.
    static AnalyzerSetting linear_from_vertical(double theta) {
        double from_h = pi / 2.0 - theta;
        return {from_h, from_h, from_h, std::nullopt};
    }

    void validate() const {
        for (double a : {qwp_rad, hwp_rad, polarizer_rad})
            if (!std::isfinite(a)) throw error("AnalyzerSetting: angles must be finite");
    }
};

// Rank-1 single-photon measurement operator.
struct Projector {
    Matrix2cd p;

    void validate(double tol = 1e-12) const {
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw error("Projector: not Hermitian");
        if ((p * p - p).cwiseAbs().maxCoeff() > tol)
            throw error("Projector: not idempotent");
        if (std::abs(p.trace() - complexd(1.0, 0.0)) > tol)
            throw error("Projector: trace must equal 1 (rank-1)");
    }
};

// State transmitted by the analyzer chain: light passes HWP, then QWP, then
// the polarizer; the detected state is the chain adjoint applied to the
// polarizer axis.
inline Projector analyzer_projector(const AnalyzerSetting& s) {
    s.validate();
    Matrix2cd chain = jones::quarter_wave(s.qwp_rad) * jones::half_wave(s.hwp_rad);
    Vector2cd v = chain.adjoint() * jones::linear(s.polarizer_rad);
    v /= v.norm();
    return Projector{v * v.adjoint()};
}

inline Projector basis_projector(Basis b) {
    return analyzer_projector(AnalyzerSetting::named(b));
}

// Tiltable zero-order wave plate used as the phase control in one arm.
// Tilting lengthens the path through the birefringent material, so the
// retardance grows monotonically with |tilt|:
//   gamma(t) = 2 pi dn d / (lambda0 cos t),   gamma(0) = design retardance.
struct TiltPlate {
    double tilt_rad = 0.0;
    double delta_n = 0.0092;
    double thickness_um = 42.8;      // quarter-wave at 1575 nm for this dn
    double design_lambda_nm = 1575.0;

    static constexpr double max_tilt = pi / 3.0;

    static TiltPlate quarter_wave(double lambda_nm, double delta_n, double tilt_rad = 0.0) {
        TiltPlate p;
        p.design_lambda_nm = lambda_nm;
        p.delta_n = delta_n;
        p.thickness_um = lambda_nm / (4.0 * delta_n) * 1e-3; // nm -> um
        p.tilt_rad = tilt_rad;
        return p;
    }

    void validate() const {
        if (!(thickness_um > 0.0)) throw error("TiltPlate: thickness must be > 0");
        if (!(delta_n > 0.0)) throw error("TiltPlate: birefringence must be > 0");
        if (!(design_lambda_nm > 0.0)) throw error("TiltPlate: design wavelength must be > 0");
        if (!(std::abs(tilt_rad) < max_tilt))
            throw error("TiltPlate: |tilt| must stay below pi/3");
    }
};

inline double tilt_to_gamma(const TiltPlate& plate) {
    plate.validate();
    double thickness_nm = plate.thickness_um * 1e3;
    return 2.0 * pi * plate.delta_n * thickness_nm /
           (plate.design_lambda_nm * std::cos(plate.tilt_rad));
}

} // namespace biphoton
