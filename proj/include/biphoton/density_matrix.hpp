#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;

// Basis order is fixed project-wide: (HH, HV, VH, VV). First letter = signal
// photon polarization, second = idler.
inline constexpr std::array<const char*, 4> basis_labels{"HH", "HV", "VH", "VV"};

// Two-qubit polarization density matrix. Construction validates Hermiticity,
// unit trace and positivity; eigenvalues in [-1e-9, 0) are treated as zero
// on read-out, anything lower is rejected.
class DensityMatrix {
public:
    static constexpr double herm_tol = 1e-10;
    static constexpr double trace_tol = 1e-10;
    static constexpr double positivity_floor = -1e-9;

    explicit DensityMatrix(const Matrix4cd& m) : m_(m) {
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
            throw error("DensityMatrix: matrix is not Hermitian");
        if (std::abs(m.trace() - complexd(1.0, 0.0)) > trace_tol)
            throw error("DensityMatrix: trace must equal 1");
        m_ = 0.5 * (m + m.adjoint()); // scrub round-off asymmetry
        Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m_, Eigen::EigenvaluesOnly);
        double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < positivity_floor)
            throw error("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }

    const Matrix4cd& matrix() const { return m_; }
    complexd operator()(int i, int j) const { return m_(i, j); }

    // Ascending, with the positivity clamp applied.
    Eigen::Vector4d eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Matrix4cd> es(m_, Eigen::EigenvaluesOnly);
        Eigen::Vector4d ev = es.eigenvalues();
        for (int i = 0; i < 4; ++i)
            if (ev(i) < 0.0) ev(i) = 0.0;
        return ev;
    }

    static DensityMatrix maximally_mixed() {
        return DensityMatrix(Matrix4cd::Identity() * 0.25);
    }

private:
    Matrix4cd m_;
};

// Unit-norm pure state in the same basis.
class PureState {
public:
    static constexpr double norm_tol = 1e-12;

    explicit PureState(const Vector4cd& v) : v_(v) {
        if (std::abs(v.norm() - 1.0) > norm_tol)
            throw error("PureState: vector must have unit norm");
    }

    static PureState normalized(const Vector4cd& v) {
        double n = v.norm();
        if (!(n > 0.0)) throw error("PureState: zero vector");
        return PureState(Vector4cd(v / n));
    }

    const Vector4cd& vector() const { return v_; }
    DensityMatrix projector() const { return DensityMatrix(v_ * v_.adjoint()); }

private:
    Vector4cd v_;
};

enum class BellKind { psi_plus, psi_minus, phi_plus, phi_minus };

inline PureState bell_state(BellKind kind) {
    const double s = 1.0 / std::sqrt(2.0);
    Vector4cd v = Vector4cd::Zero();
    switch (kind) {
    case BellKind::psi_plus:  v(1) = s; v(2) = s;  break;
    case BellKind::psi_minus: v(1) = s; v(2) = -s; break;
    case BellKind::phi_plus:  v(0) = s; v(3) = s;  break;
    case BellKind::phi_minus: v(0) = s; v(3) = -s; break;
    }
    return PureState(v);
}

// Reduced polarization state of the split pair: the HH and VV blocks are
// empty and the central block carries the channel weights and coherence,
//   rho = p_hv |HV><HV| + p_vh |VH><VH| + q |HV><VH| + conj(q) |VH><HV|.
inline DensityMatrix dm_from_overlap(const OverlapResult& ov) {
    ov.validate();
    complexd q = ov.q;
    double bound = std::sqrt(ov.p_hv * ov.p_vh);
    if (std::abs(q) > bound) // round-off past the Cauchy-Schwarz edge
        q *= bound / std::abs(q);
    double trace = ov.p_hv + ov.p_vh;
    if (std::abs(trace - 1.0) > 1e-6)
        throw error("dm_from_overlap: p_hv + p_vh must equal 1");

    Matrix4cd m = Matrix4cd::Zero();
    m(1, 1) = ov.p_hv / trace;
    m(2, 2) = ov.p_vh / trace;
    m(1, 2) = q / trace;
    m(2, 1) = std::conj(q) / trace;
    return DensityMatrix(m);
}

// Phenomenological noise floor: mixes `background` into `dm` with weight eps.
inline DensityMatrix add_background(const DensityMatrix& dm, double eps,
                                    const DensityMatrix& background) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw error("add_background: eps must lie in [0, 1]");
    return DensityMatrix((1.0 - eps) * dm.matrix() + eps * background.matrix());
}

} // namespace biphoton
