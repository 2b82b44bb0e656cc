#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "biphoton/density_matrix.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/measurement.hpp"

namespace biphoton {

namespace detail {

inline const std::array<Matrix2cd, 4>& pauli() {
    static const std::array<Matrix2cd, 4> p = [] {
        std::array<Matrix2cd, 4> m;
        m[0] = Matrix2cd::Identity();
        m[1] << 0, 1, 1, 0;
        m[2] << 0, complexd(0, -1), complexd(0, 1), 0;
        m[3] << 1, 0, 0, -1;
        return m;
    }();
    return p;
}

// The 16 products sigma_mu x sigma_nu; index = 4 * mu + nu.
inline const std::vector<Matrix4cd>& pauli_products() {
    static const std::vector<Matrix4cd> b = [] {
        std::vector<Matrix4cd> out;
        out.reserve(16);
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu)
                out.push_back(kron(pauli()[mu], pauli()[nu]));
        return out;
    }();
    return b;
}

struct LikelihoodTerms {
    std::vector<Matrix4cd> ops;   // Ps x Pi per record
    std::vector<double> scales;   // pair_rate * efficiencies * duration
    std::vector<double> offsets;  // expected background counts
    std::vector<double> counts;

    double predicted_mean(const Matrix4cd& rho, std::size_t k) const {
        double p = std::real((rho.array() * ops[k].transpose().array()).sum());
        return scales[k] * std::clamp(p, 0.0, 1.0) + offsets[k];
    }
};

enum class BackgroundMode { model_as_offset, subtract };

inline LikelihoodTerms make_terms(const TomographyDataset& data, BackgroundMode mode) {
    LikelihoodTerms t;
    t.ops.reserve(data.records.size());
    for (const auto& rec : data.records) {
        t.ops.push_back(kron(analyzer_projector(rec.signal).p,
                             analyzer_projector(rec.idler).p));
        t.scales.push_back(data.scale(rec));
        if (mode == BackgroundMode::model_as_offset) {
            t.offsets.push_back(double(rec.background));
            t.counts.push_back(double(rec.counts));
        } else {
            t.offsets.push_back(0.0);
            double n = double(rec.counts) - double(rec.background);
            t.counts.push_back(std::max(n, 0.0));
        }
    }
    return t;
}

inline double log_likelihood_terms(const Matrix4cd& rho, const LikelihoodTerms& t,
                                   bool throw_on_zero_mean = true) {
    double ll = 0.0;
    for (std::size_t k = 0; k < t.ops.size(); ++k) {
        double mu = t.predicted_mean(rho, k);
        double n = t.counts[k];
        if (mu <= 0.0) {
            if (n > 0.0) {
                if (throw_on_zero_mean)
                    throw error("log_likelihood: zero predicted mean with nonzero count");
                return -std::numeric_limits<double>::infinity();
            }
            continue; // Poisson(0) pmf at n = 0 is 1
        }
        ll += n * std::log(mu) - mu - std::lgamma(n + 1.0);
    }
    return ll;
}

} // namespace detail

// Poisson log-likelihood of the observed counts under `dm`, with duration,
// efficiencies and the recorded background folded into the predicted means.
inline double log_likelihood(const DensityMatrix& dm, const TomographyDataset& data) {
    auto terms = detail::make_terms(data, detail::BackgroundMode::model_as_offset);
    return detail::log_likelihood_terms(dm.matrix(), terms);
}

// ---------------------------------------------------------------------------
// Linear inversion
// ---------------------------------------------------------------------------

// Least-squares solution of f_k = Tr(rho M_k) in the Pauli product basis.
// Hermitian and unit-trace by construction; positivity is diagnosed, never
// imposed.
struct LinearInversion {
    Matrix4cd rho;
    double min_eigenvalue = 0.0;
    bool positive = false;
    double residual_norm = 0.0;

    DensityMatrix to_density_matrix() const { return DensityMatrix(rho); }
};

inline LinearInversion linear_reconstruct(const TomographyDataset& data) {
    const auto n = data.records.size();
    if (n == 0) throw error("linear_reconstruct: empty dataset");

    bool any_counts = false;
    for (const auto& rec : data.records) any_counts |= rec.counts > 0;
    if (!any_counts) throw error("linear_reconstruct: all counts are zero");

    const auto& basis = detail::pauli_products();
    Eigen::MatrixXd design(n, 15);
    Eigen::VectorXd rhs(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto& rec = data.records[k];
        Matrix4cd op = kron(analyzer_projector(rec.signal).p,
                            analyzer_projector(rec.idler).p);
        double scale = data.scale(rec);
        if (!(scale > 0.0))
            throw error("linear_reconstruct: record has zero acquisition scale");
        double f = (double(rec.counts) - double(rec.background)) / scale;
        for (int a = 1; a < 16; ++a)
            design(k, a - 1) = 0.25 * std::real((op * basis[a]).trace());
        rhs(k) = f - 0.25 * std::real(op.trace());
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smax = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-10 * smax) ++rank;
    if (rank < 15)
        throw error("linear_reconstruct: settings are not informationally complete "
                    "(design rank " + std::to_string(rank) + " < 15)");

    Eigen::VectorXd x = svd.solve(rhs);

    LinearInversion out;
    out.rho = 0.25 * basis[0];
    for (int a = 1; a < 16; ++a) out.rho += 0.25 * x(a - 1) * basis[a];
    out.rho = 0.5 * (out.rho + out.rho.adjoint().eval());
    out.residual_norm = (design * x - rhs).norm();

    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(out.rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    out.positive = out.min_eigenvalue >= -1e-12;
    return out;
}

// ---------------------------------------------------------------------------
// Maximum-likelihood reconstruction
// ---------------------------------------------------------------------------

enum class MleInit { from_linear_inversion, maximally_mixed };
enum class MleBackground { model_as_offset, subtract };

struct MleOptions {
    int max_iterations = 2000;
    double tolerance = 1e-10;      // log-likelihood change
    double gradient_tolerance = 1e-8;
    MleInit init = MleInit::from_linear_inversion;
    MleBackground background = MleBackground::model_as_offset;

    void validate() const {
        if (max_iterations < 1) throw config_error("MleOptions: max_iterations >= 1");
        if (!(tolerance > 0.0)) throw config_error("MleOptions: tolerance > 0");
    }
};

struct ReconstructionResult {
    DensityMatrix dm;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
    double min_eigenvalue_raw = 0.0;      // before any clamping
    std::vector<double> likelihood_history; // accepted iterates, non-decreasing
};

namespace detail {

// rho(T) = T^dag T / Tr(T^dag T) with T upper triangular: 4 real diagonal
// entries followed by the 6 complex strictly-upper entries (row-major).
inline Matrix4cd t_from_params(const Eigen::VectorXd& x) {
    Matrix4cd t = Matrix4cd::Zero();
    for (int i = 0; i < 4; ++i) t(i, i) = x(i);
    int k = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            t(i, j) = complexd(x(k), x(k + 1));
            k += 2;
        }
    return t;
}

inline Eigen::VectorXd params_from_t(const Matrix4cd& t) {
    Eigen::VectorXd x(16);
    for (int i = 0; i < 4; ++i) x(i) = std::real(t(i, i));
    int k = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            x(k) = std::real(t(i, j));
            x(k + 1) = std::imag(t(i, j));
            k += 2;
        }
    return x;
}

inline Matrix4cd rho_from_params(const Eigen::VectorXd& x) {
    Matrix4cd t = t_from_params(x);
    Matrix4cd s = t.adjoint() * t;
    double tau = std::real(s.trace());
    if (!(tau > 0.0)) throw error("mle: degenerate parameter point (zero trace)");
    return s / tau;
}

// Gradient of the log-likelihood with respect to the 16 real parameters:
// with G = sum_k (n_k / mu_k - 1) scale_k M_k and kappa = Tr(G rho),
// dL/dT = (2 / tau) T (G - kappa I), split into Re/Im at the parameter slots.
inline Eigen::VectorXd likelihood_gradient(const Eigen::VectorXd& x,
                                           const LikelihoodTerms& terms) {
    Matrix4cd t = t_from_params(x);
    Matrix4cd s = t.adjoint() * t;
    double tau = std::real(s.trace());
    Matrix4cd rho = s / tau;

    Matrix4cd g = Matrix4cd::Zero();
    for (std::size_t k = 0; k < terms.ops.size(); ++k) {
        double mu = terms.predicted_mean(rho, k);
        double n = terms.counts[k];
        double c;
        if (mu <= 0.0)
            c = n > 0.0 ? std::numeric_limits<double>::infinity() : -1.0;
        else
            c = n / mu - 1.0;
        g += c * terms.scales[k] * terms.ops[k];
    }
    double kappa = std::real((g * rho).trace());
    Matrix4cd w = (2.0 / tau) * (t * (g - kappa * Matrix4cd::Identity()));

    Eigen::VectorXd grad(16);
    for (int i = 0; i < 4; ++i) grad(i) = std::real(w(i, i));
    int k = 4;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            grad(k) = std::real(w(i, j));
            grad(k + 1) = std::imag(w(i, j));
            k += 2;
        }
    return grad;
}

inline Eigen::VectorXd numerical_gradient(const Eigen::VectorXd& x,
                                          const LikelihoodTerms& terms) {
    Eigen::VectorXd grad(16);
    for (int i = 0; i < 16; ++i) {
        double h = 1e-6 * std::max(1.0, std::abs(x(i)));
        Eigen::VectorXd xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        double fp = log_likelihood_terms(rho_from_params(xp), terms, false);
        double fm = log_likelihood_terms(rho_from_params(xm), terms, false);
        grad(i) = (fp - fm) / (2.0 * h);
    }
    return grad;
}

inline Eigen::VectorXd initial_params(const TomographyDataset& data, MleInit init) {
    if (init == MleInit::from_linear_inversion) {
        try {
            LinearInversion lin = linear_reconstruct(data);
            Eigen::SelfAdjointEigenSolver<Matrix4cd> es(lin.rho);
            Eigen::Vector4d ev = es.eigenvalues().cwiseMax(1e-6);
            ev /= ev.sum();
            Matrix4cd rho0 = es.eigenvectors() * ev.asDiagonal().toDenseMatrix().cast<complexd>() *
                             es.eigenvectors().adjoint();
            Eigen::LLT<Matrix4cd> llt(rho0);
            if (llt.info() == Eigen::Success) {
                Matrix4cd t = Matrix4cd(llt.matrixL()).adjoint(); // upper triangular
                return params_from_t(t);
            }
        } catch (const error&) {
            // fall through to the maximally mixed start
        }
    }
    return params_from_t(Matrix4cd::Identity() * 0.5);
}

} // namespace detail

// Quasi-Newton (L-BFGS with backtracking) ascent of the Poisson likelihood
// over the triangular factorization. Accepted iterates are monotone
// non-decreasing in likelihood; stops when the likelihood change drops below
// `tolerance` or the gradient norm below `gradient_tolerance`.
inline ReconstructionResult mle_reconstruct(const TomographyDataset& data,
                                            const MleOptions& opts = {}) {
    opts.validate();
    if (data.records.empty()) throw error("mle_reconstruct: empty dataset");
    bool any = false;
    for (const auto& rec : data.records) any |= rec.counts > 0;
    if (!any) throw error("mle_reconstruct: all counts are zero");

    auto mode = opts.background == MleBackground::model_as_offset
                    ? detail::BackgroundMode::model_as_offset
                    : detail::BackgroundMode::subtract;
    detail::LikelihoodTerms terms = detail::make_terms(data, mode);

    Eigen::VectorXd x = detail::initial_params(data, opts.init);
    double ll = detail::log_likelihood_terms(detail::rho_from_params(x), terms, false);
    if (!std::isfinite(ll)) {
        x = detail::params_from_t(Matrix4cd::Identity() * 0.5);
        ll = detail::log_likelihood_terms(detail::rho_from_params(x), terms, false);
    }

    const int memory = 10;
    std::vector<Eigen::VectorXd> s_hist, y_hist;
    Eigen::VectorXd grad = detail::likelihood_gradient(x, terms);
    if (!grad.allFinite()) grad = detail::numerical_gradient(x, terms);

    ReconstructionResult result{DensityMatrix::maximally_mixed(), ll, 0, false,
                                grad.norm(), 0.0, {ll}};

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (grad.norm() < opts.gradient_tolerance) {
            result.converged = true;
            break;
        }

        // two-loop recursion on the ascent direction
        Eigen::VectorXd d = grad;
        std::vector<double> alpha(s_hist.size());
        for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
            double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
            alpha[i] = rho_i * s_hist[i].dot(d);
            d -= alpha[i] * y_hist[i];
        }
        if (!s_hist.empty()) {
            const auto& s = s_hist.back();
            const auto& y = y_hist.back();
            d *= s.dot(y) / y.dot(y);
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
            double beta = rho_i * y_hist[i].dot(d);
            d += (alpha[i] - beta) * s_hist[i];
        }
        if (d.dot(grad) <= 0.0) { // not an ascent direction; restart
            s_hist.clear();
            y_hist.clear();
            d = grad;
        }

        // backtracking line search (Armijo, on the likelihood)
        double slope = d.dot(grad);
        double step = 1.0;
        double ll_new = -std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_new;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = x + step * d;
            double cand = detail::log_likelihood_terms(detail::rho_from_params(x_new),
                                                       terms, false);
            if (std::isfinite(cand) && cand >= ll + 1e-4 * step * slope) {
                ll_new = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            // retry once along the raw (numerical) gradient before giving up
            Eigen::VectorXd g2 = detail::numerical_gradient(x, terms);
            step = 1.0 / std::max(1.0, g2.norm());
            bool retried = false;
            for (int ls = 0; ls < 60; ++ls) {
                x_new = x + step * g2;
                double cand = detail::log_likelihood_terms(detail::rho_from_params(x_new),
                                                           terms, false);
                if (std::isfinite(cand) && cand > ll) {
                    ll_new = cand;
                    retried = true;
                    break;
                }
                step *= 0.5;
            }
            if (!retried) {
                result.converged = true; // no ascent possible at this precision
                break;
            }
            s_hist.clear();
            y_hist.clear();
        }

        Eigen::VectorXd grad_new = detail::likelihood_gradient(x_new, terms);
        if (!grad_new.allFinite()) grad_new = detail::numerical_gradient(x_new, terms);

        Eigen::VectorXd s = x_new - x;
        Eigen::VectorXd y = grad_new - grad; // note: y of -L flips sign twice
        if (s.dot(-y) > 1e-12 * s.norm() * y.norm()) {
            s_hist.push_back(s);
            y_hist.push_back(-y); // store curvature pairs of the minimized -L
            if (int(s_hist.size()) > memory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
            }
        }

        double change = ll_new - ll;
        x = x_new;
        grad = grad_new;
        ll = ll_new;
        result.likelihood_history.push_back(ll);
        if (change < opts.tolerance) {
            result.converged = true;
            ++it;
            break;
        }
    }

    Matrix4cd rho = detail::rho_from_params(x);
    rho = 0.5 * (rho + rho.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho, Eigen::EigenvaluesOnly);
    result.min_eigenvalue_raw = es.eigenvalues().minCoeff();

    result.dm = DensityMatrix(rho);
    result.log_likelihood = detail::log_likelihood_terms(rho, terms, false);
    result.iterations = it;
    result.gradient_norm = grad.norm();
    return result;
}

} // namespace biphoton
