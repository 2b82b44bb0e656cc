#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/grid.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

using complexd = std::complex<double>;

// ---------------------------------------------------------------------------
// Phase-matching model
// ---------------------------------------------------------------------------

enum class EnvelopeKind { gaussian, sinc };
enum class Channel { hv, vh };
enum class Polarization { H, V };

// Parametrized two-channel joint spectral amplitude of a type-II waveguide
// pair source. The two decay channels live on a common (omega1, omega2)
// plane where axis 1 is the H photon and axis 2 the V photon:
//
//   A_ch(w1, w2) = sqrt(weight_ch) * pump(w1 + w2) * env(u + shear * v)
//
// with (u, v) the anti-diagonal/diagonal coordinates centred on the channel.
// The HV channel puts the H photon at the shorter (signal) wavelength; the
// VH channel puts the V photon there. "signal"/"idler" follow that
// convention throughout: signal photons are the shorter-wavelength ones.
struct PhaseMatchModel {
    double hv_signal_nm = 1537.0; // H photon centre, HV channel
    double hv_idler_nm = 1575.0;  // V photon centre, HV channel
    double vh_signal_nm = 1537.0; // V photon centre, VH channel
    double vh_idler_nm = 1575.0;  // H photon centre, VH channel

    double hv_width_nm = 5.0; // 1-sigma amplitude width along the channel
    double vh_width_nm = 5.0;

    EnvelopeKind envelope = EnvelopeKind::gaussian;

    double pump_center_nm = 777.9;
    double pump_linewidth_nm = 0.01; // near-zero for CW

    double weight_hv = 0.5; // relative channel weight w; p_HV tracks it
    double hv_shear = 0.0;  // skews the channel in the (w1, w2) plane
    double vh_shear = 0.0;

    void validate() const {
        if (!(hv_width_nm > 0.0) || !(vh_width_nm > 0.0))
            throw config_error("PhaseMatchModel: channel widths must be > 0");
        if (!(weight_hv >= 0.0 && weight_hv <= 1.0))
            throw config_error("PhaseMatchModel: weight_hv must lie in [0, 1]");
        if (!(pump_linewidth_nm > 0.0))
            throw config_error("PhaseMatchModel: pump linewidth must be > 0");
        for (double l : {hv_signal_nm, hv_idler_nm, vh_signal_nm, vh_idler_nm, pump_center_nm})
            if (!(l > 0.0) || !std::isfinite(l))
                throw config_error("PhaseMatchModel: wavelengths must be positive and finite");
    }

    // Channel centre on the (omega1, omega2) plane, rad/s.
    double center1(Channel ch) const {
        return omega_from_nm(ch == Channel::hv ? hv_signal_nm : vh_idler_nm);
    }
    double center2(Channel ch) const {
        return omega_from_nm(ch == Channel::hv ? hv_idler_nm : vh_signal_nm);
    }

    double sigma(Channel ch) const {
        double w_nm = ch == Channel::hv ? hv_width_nm : vh_width_nm;
        double ref = ch == Channel::hv ? 0.5 * (hv_signal_nm + hv_idler_nm)
                                       : 0.5 * (vh_signal_nm + vh_idler_nm);
        return omega_per_nm(ref) * w_nm;
    }

    double shear(Channel ch) const { return ch == Channel::hv ? hv_shear : vh_shear; }

    double pump_omega() const { return omega_from_nm(pump_center_nm); }
    double pump_sigma() const { return omega_per_nm(pump_center_nm) * pump_linewidth_nm; }

    // Pump amplitude envelope as a function of w1 + w2; the *intensity*
    // standard deviation equals pump_sigma().
    double pump_envelope(double omega_sum) const {
        double d = omega_sum - pump_omega();
        double s = pump_sigma();
        return std::exp(-d * d / (4.0 * s * s));
    }

    double channel_envelope(Channel ch, double w1, double w2) const {
        double d1 = w1 - center1(ch);
        double d2 = w2 - center2(ch);
        double u = (d1 - d2) / std::sqrt(2.0);
        double v = (d1 + d2) / std::sqrt(2.0);
        double x = u + shear(ch) * v;
        double s = sigma(ch);
        if (envelope == EnvelopeKind::gaussian)
            return std::exp(-x * x / (2.0 * s * s));
        double t = x / s;
        return t == 0.0 ? 1.0 : std::sin(t) / t;
    }

    // Continuous (unnormalized) amplitude; the grid sampler and the tests'
    // independent fine-grid quadratures both evaluate this.
    double amplitude(Channel ch, double w1, double w2) const {
        double w = ch == Channel::hv ? weight_hv : 1.0 - weight_hv;
        return std::sqrt(w) * pump_envelope(w1 + w2) * channel_envelope(ch, w1, w2);
    }
};

// Perfect-phase-matching loci: polynomials mapping pump wavelength (nm) to
// the phase-matched signal/idler wavelengths (nm). These are calibration
// inputs for pump sweeps, not derived quantities.
struct PhaseMatchLoci {
    std::vector<double> signal_poly; // ascending coefficients
    std::vector<double> idler_poly;

    static double eval(const std::vector<double>& coeffs, double x) {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    double signal_nm(double pump_nm) const { return eval(signal_poly, pump_nm); }
    double idler_nm(double pump_nm) const { return eval(idler_poly, pump_nm); }
};

// ---------------------------------------------------------------------------
// Sampled amplitudes
// ---------------------------------------------------------------------------

struct BiphotonAmplitude {
    SpectralGrid grid;
    Eigen::MatrixXcd a_hv; // (i, j) = A_HV(omega1_i, omega2_j)
    Eigen::MatrixXcd a_vh;
    bool normalized = false;

    double norm_integral() const {
        Eigen::MatrixXd dens = a_hv.cwiseAbs2() + a_vh.cwiseAbs2();
        return quad::trapezoid_2d<double>(grid, dens);
    }
};

inline BiphotonAmplitude build_amplitudes(const PhaseMatchModel& model,
                                          const SpectralGrid& grid) {
    model.validate();

    double h = std::max(grid.step1(), grid.step2());
    for (Channel ch : {Channel::hv, Channel::vh}) {
        double s = model.sigma(ch);
        if (s < 4.0 * h)
            throw grid_error("build_amplitudes: grid too coarse, channel width spans "
                             "fewer than 4 grid steps");
        double c1 = model.center1(ch);
        double c2 = model.center2(ch);
        if (!grid.contains1(c1 - 3 * s) || !grid.contains1(c1 + 3 * s) ||
            !grid.contains2(c2 - 3 * s) || !grid.contains2(c2 + 3 * s))
            throw grid_error("build_amplitudes: channel centre not inside the grid "
                             "by at least 3 widths");
    }
    if (model.pump_sigma() < 2.0 * h)
        throw grid_error("build_amplitudes: grid too coarse for the pump linewidth; "
                         "the energy-conservation ridge spans fewer than 2 grid steps");

    Eigen::Index n1 = grid.n1(), n2 = grid.n2();
    BiphotonAmplitude amp{grid, Eigen::MatrixXcd(n1, n2), Eigen::MatrixXcd(n1, n2), false};
    for (Eigen::Index i = 0; i < n1; ++i) {
        double w1 = grid.omega1()(i);
        for (Eigen::Index j = 0; j < n2; ++j) {
            double w2 = grid.omega2()(j);
            amp.a_hv(i, j) = model.amplitude(Channel::hv, w1, w2);
            amp.a_vh(i, j) = model.amplitude(Channel::vh, w1, w2);
        }
    }

    double norm = amp.norm_integral();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw grid_error("build_amplitudes: amplitude has no support on the grid");
    double scale = 1.0 / std::sqrt(norm);
    amp.a_hv *= scale;
    amp.a_vh *= scale;
    amp.normalized = true;
    return amp;
}

// ---------------------------------------------------------------------------
// Marginal spectra
// ---------------------------------------------------------------------------

struct Spectrum {
    Eigen::VectorXd omega;     // rad/s, ascending
    Eigen::VectorXd intensity; // probability density per rad/s

    Eigen::VectorXd wavelengths_nm() const {
        Eigen::VectorXd out(omega.size());
        for (Eigen::Index i = 0; i < omega.size(); ++i) out(i) = nm_from_omega(omega(i));
        return out;
    }
    double total() const { return quad::trapezoid(omega, intensity); }
    double peak_wavelength_nm() const {
        Eigen::Index i;
        intensity.maxCoeff(&i);
        return nm_from_omega(omega(i));
    }
};

// Single-photon spectrum of one polarization: the squared modulus of the
// summed channel amplitudes, integrated over the partner photon.
inline Spectrum marginal_spectrum(const BiphotonAmplitude& amp, Polarization pol) {
    if (!amp.normalized)
        throw error("marginal_spectrum: amplitude must be normalized");
    Eigen::MatrixXd dens = (amp.a_hv + amp.a_vh).cwiseAbs2();
    if (pol == Polarization::H) {
        Eigen::VectorXd w2 = quad::trapezoid_weights(amp.grid.omega2());
        return Spectrum{amp.grid.omega1(), dens * w2};
    }
    Eigen::VectorXd w1 = quad::trapezoid_weights(amp.grid.omega1());
    return Spectrum{amp.grid.omega2(), dens.transpose() * w1};
}

// ---------------------------------------------------------------------------
// Dichroic splitter
// ---------------------------------------------------------------------------

enum class EdgeKind { ideal_step, raised_cosine };

// Wavelength router: shorter wavelengths (higher frequencies) exit the
// signal port, longer wavelengths the idler port. A guard band around the
// cut is excluded from both ports and counted as leakage.
struct DichroicSplitter {
    double cut_nm = 1560.0;
    EdgeKind edge = EdgeKind::ideal_step;
    double edge_width_nm = 0.0;
    double guard_nm = 0.0;
    double leakage_threshold = 0.05;

    void validate() const {
        if (!(cut_nm > 0.0)) throw config_error("DichroicSplitter: cut wavelength must be > 0");
        if (edge_width_nm < 0.0 || guard_nm < 0.0)
            throw config_error("DichroicSplitter: edge width and guard band must be >= 0");
        if (!(leakage_threshold > 0.0 && leakage_threshold < 1.0))
            throw config_error("DichroicSplitter: leakage threshold must lie in (0, 1)");
    }

    double idler_power(double lambda_nm) const {
        if (edge == EdgeKind::ideal_step || edge_width_nm == 0.0)
            return lambda_nm > cut_nm ? 1.0 : 0.0;
        double lo = cut_nm - 0.5 * edge_width_nm;
        double hi = cut_nm + 0.5 * edge_width_nm;
        if (lambda_nm <= lo) return 0.0;
        if (lambda_nm >= hi) return 1.0;
        return 0.5 * (1.0 - std::cos(pi * (lambda_nm - lo) / edge_width_nm));
    }
    double signal_power(double lambda_nm) const { return 1.0 - idler_power(lambda_nm); }
    bool in_guard(double lambda_nm) const {
        return std::abs(lambda_nm - cut_nm) < 0.5 * guard_nm;
    }
};

// Post-splitter two-arm amplitude, renormalized on the retained (one photon
// per arm, outside the guard band) events. `leakage` is the discarded
// fraction; when it exceeds the splitter threshold the two-arm state is
// flagged invalid and downstream overlap computations refuse it.
struct SplitAmplitude {
    SpectralGrid grid;
    Eigen::MatrixXcd a_hv;
    Eigen::MatrixXcd a_vh;
    double leakage = 0.0;
    bool valid = true;
};

inline SplitAmplitude apply_dbs(const BiphotonAmplitude& amp, const DichroicSplitter& dbs) {
    dbs.validate();
    if (!amp.normalized)
        throw error("apply_dbs: amplitude must be normalized");

    auto port_masks = [&](const Eigen::VectorXd& axis, Eigen::VectorXd& sig,
                          Eigen::VectorXd& idl) {
        sig.resize(axis.size());
        idl.resize(axis.size());
        for (Eigen::Index i = 0; i < axis.size(); ++i) {
            double lambda = nm_from_omega(axis(i));
            double g = dbs.in_guard(lambda) ? 0.0 : 1.0;
            sig(i) = g * std::sqrt(dbs.signal_power(lambda));
            idl(i) = g * std::sqrt(dbs.idler_power(lambda));
        }
    };
    Eigen::VectorXd sig1, idl1, sig2, idl2;
    port_masks(amp.grid.omega1(), sig1, idl1);
    port_masks(amp.grid.omega2(), sig2, idl2);

    SplitAmplitude out{amp.grid, amp.a_hv, amp.a_vh, 0.0, true};
    // HV: H photon (axis 1) -> signal port, V photon (axis 2) -> idler port.
    out.a_hv = out.a_hv.cwiseProduct(sig1 * idl2.transpose());
    // VH: V photon (axis 2) -> signal port, H photon (axis 1) -> idler port.
    out.a_vh = out.a_vh.cwiseProduct(idl1 * sig2.transpose());

    Eigen::MatrixXd dens = out.a_hv.cwiseAbs2() + out.a_vh.cwiseAbs2();
    double retained = quad::trapezoid_2d<double>(amp.grid, dens);
    out.leakage = std::clamp(1.0 - retained, 0.0, 1.0);
    out.valid = out.leakage <= dbs.leakage_threshold;
    if (retained > 1e-300) {
        double scale = 1.0 / std::sqrt(retained);
        out.a_hv *= scale;
        out.a_vh *= scale;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Overlap integrals
// ---------------------------------------------------------------------------

// The scalars that fix the reduced polarization state:
//   p_hv = integral |A_HV|^2,  p_vh = integral |A_VH|^2,
//   q    = integral A_HV(w1,w2) conj(A_VH(w2,w1)) e^{i gamma}.
// gamma records the phase already folded into q.
struct OverlapResult {
    double p_hv = 0.0;
    double p_vh = 0.0;
    complexd q{0.0, 0.0};
    double gamma = 0.0;

    void validate() const {
        if (!(p_hv >= 0.0 && p_hv <= 1.0 + 1e-9) || !(p_vh >= 0.0 && p_vh <= 1.0 + 1e-9))
            throw error("OverlapResult: p_hv, p_vh must lie in [0, 1]");
        double bound = std::sqrt(p_hv * p_vh);
        if (std::abs(q) > bound * (1.0 + 1e-9) + 1e-12)
            throw error("OverlapResult: |q| exceeds sqrt(p_hv * p_vh)");
    }
    double two_q() const { return 2.0 * std::abs(q); }
};

namespace detail {

inline OverlapResult overlap_impl(const SpectralGrid& grid, const Eigen::MatrixXcd& a_hv,
                                  const Eigen::MatrixXcd& a_vh, double gamma) {
    if (!grid.axes_equal(1e-9))
        throw error("compute_overlap: the swap integral needs identical omega axes");

    Eigen::MatrixXd hv2 = a_hv.cwiseAbs2();
    Eigen::MatrixXd vh2 = a_vh.cwiseAbs2();
    Eigen::MatrixXcd cross = a_hv.cwiseProduct(a_vh.transpose().conjugate());

    double p_hv = quad::trapezoid_2d<double>(grid, hv2);
    double p_vh = quad::trapezoid_2d<double>(grid, vh2);
    complexd q0 = quad::trapezoid_2d<complexd>(grid, cross);

    double p_hv_c = quad::trapezoid_2d_coarse<double>(grid, hv2);
    double p_vh_c = quad::trapezoid_2d_coarse<double>(grid, vh2);
    complexd q0_c = quad::trapezoid_2d_coarse<complexd>(grid, cross);
    double dev = std::max({std::abs(p_hv - p_hv_c), std::abs(p_vh - p_vh_c),
                           std::abs(q0 - q0_c)});
    if (dev > 1e-4)
        throw quadrature_error("compute_overlap: refine-and-compare check deviates by " +
                               std::to_string(dev) + " (> 1e-4); use a finer grid");

    // Discrete Cauchy-Schwarz guarantees |q| <= sqrt(p_hv p_vh) up to
    // round-off; clamp the round-off, never a real violation.
    double bound = std::sqrt(p_hv * p_vh);
    if (std::abs(q0) > bound && std::abs(q0) < bound * (1.0 + 1e-12) + 1e-15)
        q0 *= bound / std::abs(q0);

    OverlapResult ov{p_hv, p_vh, q0 * std::polar(1.0, gamma), gamma};
    ov.validate();
    return ov;
}

} // namespace detail

inline OverlapResult compute_overlap(const SplitAmplitude& split, double gamma) {
    if (!split.valid)
        throw invalid_approximation("compute_overlap: dichroic leakage " +
                                    std::to_string(split.leakage) +
                                    " exceeded the splitter threshold");
    return detail::overlap_impl(split.grid, split.a_hv, split.a_vh, gamma);
}

// Pre-splitter overlap, evaluated directly on the source amplitude.
inline OverlapResult compute_overlap(const BiphotonAmplitude& amp, double gamma) {
    if (!amp.normalized)
        throw error("compute_overlap: amplitude must be normalized");
    return detail::overlap_impl(amp.grid, amp.a_hv, amp.a_vh, gamma);
}

// ---------------------------------------------------------------------------
// Pump sweep
// ---------------------------------------------------------------------------

struct SweepStep {
    double pump_nm = 0.0;
    Spectrum marginal_h;
    Spectrum marginal_v;
    double two_q = 0.0;
    double loci_signal_nm = 0.0; // 0 when no loci configured
    double loci_idler_nm = 0.0;
};

struct SweepReport {
    std::vector<SweepStep> steps;
    int optimum_index = 0;
    double optimum_pump_nm() const { return steps.at(optimum_index).pump_nm; }
    double optimum_two_q() const { return steps.at(optimum_index).two_q; }
};

inline SweepReport pump_sweep(const PhaseMatchModel& model, double pump_lo_nm,
                              double pump_hi_nm, int steps, const SpectralGrid& grid,
                              const std::optional<PhaseMatchLoci>& loci = std::nullopt) {
    if (steps < 2)
        throw config_error("pump_sweep: need at least 2 steps");
    if (!(pump_hi_nm > pump_lo_nm))
        throw config_error("pump_sweep: need pump_lo < pump_hi");

    SweepReport report;
    report.steps.reserve(steps);
    for (int s = 0; s < steps; ++s) {
        PhaseMatchModel m = model;
        m.pump_center_nm = pump_lo_nm + (pump_hi_nm - pump_lo_nm) * s / double(steps - 1);
        SweepStep step;
        step.pump_nm = m.pump_center_nm;
        if (loci) {
            step.loci_signal_nm = loci->signal_nm(m.pump_center_nm);
            step.loci_idler_nm = loci->idler_nm(m.pump_center_nm);
            m.hv_signal_nm = m.vh_signal_nm = step.loci_signal_nm;
            m.hv_idler_nm = m.vh_idler_nm = step.loci_idler_nm;
        }
        BiphotonAmplitude amp = build_amplitudes(m, grid);
        step.marginal_h = marginal_spectrum(amp, Polarization::H);
        step.marginal_v = marginal_spectrum(amp, Polarization::V);
        step.two_q = compute_overlap(amp, 0.0).two_q();
        if (report.steps.empty() || step.two_q > report.steps[report.optimum_index].two_q)
            report.optimum_index = s;
        report.steps.push_back(std::move(step));
    }
    return report;
}

} // namespace biphoton
