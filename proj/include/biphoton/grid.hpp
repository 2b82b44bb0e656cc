#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>

#include "biphoton/constants.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

// Rectangular sampling grid for two-photon spectral amplitudes.
// Axis 1 carries the H-polarized photon's angular frequency, axis 2 the
// V-polarized photon's. Axes are strictly increasing in omega (rad/s);
// wavelength views are provided for I/O only.
class SpectralGrid {
public:
    static constexpr int min_points = 64;

    SpectralGrid(Eigen::VectorXd omega1, Eigen::VectorXd omega2)
        : omega1_(std::move(omega1)), omega2_(std::move(omega2)) {
        check_axis(omega1_, "omega1");
        check_axis(omega2_, "omega2");
    }

    // Square grid covering [lambda_lo, lambda_hi] nm on both axes.
    static SpectralGrid from_wavelength_range(double lambda_lo_nm, double lambda_hi_nm,
                                              int points) {
        if (!(lambda_lo_nm > 0.0) || !(lambda_hi_nm > lambda_lo_nm))
            throw grid_error("SpectralGrid: need 0 < lambda_lo < lambda_hi");
        double w_lo = omega_from_nm(lambda_hi_nm); // long wavelength -> low omega
        double w_hi = omega_from_nm(lambda_lo_nm);
        Eigen::VectorXd axis = Eigen::VectorXd::LinSpaced(points, w_lo, w_hi);
        return SpectralGrid(axis, axis);
    }

    const Eigen::VectorXd& omega1() const { return omega1_; }
    const Eigen::VectorXd& omega2() const { return omega2_; }
    Eigen::Index n1() const { return omega1_.size(); }
    Eigen::Index n2() const { return omega2_.size(); }

    double step1() const { return (omega1_(n1() - 1) - omega1_(0)) / double(n1() - 1); }
    double step2() const { return (omega2_(n2() - 1) - omega2_(0)) / double(n2() - 1); }

    // Wavelength view, nm, ordered like the omega axis (hence descending).
    Eigen::VectorXd wavelengths1() const { return to_nm(omega1_); }
    Eigen::VectorXd wavelengths2() const { return to_nm(omega2_); }

    bool axes_equal(double rel_tol = 1e-12) const {
        if (n1() != n2()) return false;
        double scale = std::max(std::abs(omega1_(0)), std::abs(omega1_(n1() - 1)));
        return (omega1_ - omega2_).cwiseAbs().maxCoeff() <= rel_tol * scale;
    }

    bool contains1(double w) const { return w >= omega1_(0) && w <= omega1_(n1() - 1); }
    bool contains2(double w) const { return w >= omega2_(0) && w <= omega2_(n2() - 1); }

private:
    static void check_axis(const Eigen::VectorXd& a, const char* name) {
        if (a.size() < min_points)
            throw grid_error(std::string("SpectralGrid: axis ") + name + " needs at least 64 points");
        if (!a.allFinite())
            throw grid_error(std::string("SpectralGrid: axis ") + name + " has non-finite entries");
        for (Eigen::Index i = 1; i < a.size(); ++i)
            if (!(a(i) > a(i - 1)))
                throw grid_error(std::string("SpectralGrid: axis ") + name + " must be strictly increasing");
    }

    static Eigen::VectorXd to_nm(const Eigen::VectorXd& w) {
        Eigen::VectorXd out(w.size());
        for (Eigen::Index i = 0; i < w.size(); ++i) out(i) = nm_from_omega(w(i));
        return out;
    }

    Eigen::VectorXd omega1_;
    Eigen::VectorXd omega2_;
};

} // namespace biphoton
