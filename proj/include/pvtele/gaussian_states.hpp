// Copyright 2026 The pvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// K-mode Gaussian states in the quadrature picture.
//
// Conventions used throughout the library:
//   * quadrature ordering (q1, p1, ..., qK, pK);
//   * shot-noise units, vacuum covariance = identity (hbar = 2);
//   * a = (q + i p) / 2, D(xi) = exp(xi a^dag - xi^* a), chi(xi) = tr(rho D(xi)).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "pvtele/numeric.hpp"

namespace pvtele {

/// Two-mode squeezing strength r >= 0 with its derived quantities.
class SqueezingParam {
   public:
    explicit SqueezingParam(double r) : r_(r) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw std::invalid_argument("squeezing parameter must be finite and >= 0, got " + std::to_string(r));
        }
    }

    /// r_dB = -10 log10(exp(-2 r)).
    static SqueezingParam from_db(double r_db) {
        return SqueezingParam(r_db * std::log(10.0) / 20.0);
    }
    static SqueezingParam from_lambda(double lambda) {
        if (!(lambda >= 0.0 && lambda < 1.0)) {
            throw std::invalid_argument("lambda must lie in [0, 1)");
        }
        return SqueezingParam(std::atanh(lambda));
    }

    double r() const {
        return r_;
    }
    double lambda() const {
        return std::tanh(r_);
    }
    /// Quadrature variance cosh(2r).
    double V() const {
        return std::cosh(2 * r_);
    }
    /// sqrt(V^2 - 1) = sinh(2r), evaluated without cancellation.
    double coupling() const {
        return std::sinh(2 * r_);
    }
    /// V - sqrt(V^2 - 1) = exp(-2r).
    double residual_noise() const {
        return std::exp(-2 * r_);
    }
    double r_db() const {
        return -10.0 * std::log10(std::exp(-2 * r_));
    }

   private:
    double r_;
};

/// Transmissivities of two independent pure-loss channels.
struct ChannelParams {
    double T1 = 1.0;
    double T2 = 1.0;

    ChannelParams() = default;
    ChannelParams(double t1, double t2) : T1(t1), T2(t2) {
        validate();
    }
    void validate() const {
        if (!(T1 > 0.0 && T1 <= 1.0) || !(T2 > 0.0 && T2 <= 1.0)) {
            throw std::invalid_argument("transmissivities must lie in (0, 1]");
        }
    }
};

/// Standard symplectic form Omega = diag([0 1; -1 0], ...).
inline Eigen::MatrixXd symplectic_form(int K) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2 * K, 2 * K);
    for (int k = 0; k < K; ++k) {
        W(2 * k, 2 * k + 1) = 1.0;
        W(2 * k + 1, 2 * k) = -1.0;
    }
    return W;
}

/// Smallest eigenvalue of V + i Omega; non-negative for physical states.
inline double uncertainty_margin(const Eigen::MatrixXd &V) {
    const int K = static_cast<int>(V.rows() / 2);
    Eigen::MatrixXcd H = V.cast<cplx>() + cplx(0, 1) * symplectic_form(K).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

class GaussianState {
   public:
    GaussianState(Eigen::MatrixXd V, Eigen::VectorXd mu) : V_(std::move(V)), mu_(std::move(mu)) {
        if (V_.rows() == 0 || V_.rows() % 2 != 0 || V_.rows() != V_.cols()) {
            throw std::invalid_argument("covariance matrix must be 2K x 2K");
        }
        if (mu_.size() != V_.rows()) {
            throw std::invalid_argument("mean vector length must equal 2K");
        }
        if ((V_ - V_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, V_.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("covariance matrix is not symmetric");
        }
        V_ = 0.5 * (V_ + V_.transpose()).eval();
        if (uncertainty_margin(V_) < -1e-9) {
            throw std::invalid_argument("covariance matrix violates V + i Omega >= 0");
        }
    }

    static GaussianState vacuum(int K) {
        return GaussianState(Eigen::MatrixXd::Identity(2 * K, 2 * K), Eigen::VectorXd::Zero(2 * K));
    }

    int modes() const {
        return static_cast<int>(V_.rows() / 2);
    }
    const Eigen::MatrixXd &covariance() const {
        return V_;
    }
    const Eigen::VectorXd &means() const {
        return mu_;
    }

   private:
    Eigen::MatrixXd V_;
    Eigen::VectorXd mu_;
};

/// Complex-amplitude form of the moments: with the augmented vector
/// y = (xi_1, xi_1^*, ..., xi_K, xi_K^*), chi = exp(-y^H Vt y / 2 + mut^H y).
struct AugmentedMoments {
    Eigen::MatrixXcd Vt;
    Eigen::VectorXcd mut;
};

/// Z = I_K (x) diag(1, -1).
inline Eigen::MatrixXcd augment_Z(int K) {
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(2 * K, 2 * K);
    for (int k = 0; k < K; ++k) {
        Z(2 * k, 2 * k) = 1.0;
        Z(2 * k + 1, 2 * k + 1) = -1.0;
    }
    return Z;
}

/// J = I_K (x) [1 i; 1 -i] / 2.
inline Eigen::MatrixXcd augment_J(int K) {
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * K, 2 * K);
    const cplx I(0, 1);
    for (int k = 0; k < K; ++k) {
        J(2 * k, 2 * k) = 0.5;
        J(2 * k, 2 * k + 1) = 0.5 * I;
        J(2 * k + 1, 2 * k) = 0.5;
        J(2 * k + 1, 2 * k + 1) = -0.5 * I;
    }
    return J;
}

/// X = I_K (x) [0 1; 1 0].
inline Eigen::MatrixXcd augment_X(int K) {
    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(2 * K, 2 * K);
    for (int k = 0; k < K; ++k) {
        X(2 * k, 2 * k + 1) = 1.0;
        X(2 * k + 1, 2 * k) = 1.0;
    }
    return X;
}

inline AugmentedMoments augment(const GaussianState &s) {
    const int K = s.modes();
    const Eigen::MatrixXcd Z = augment_Z(K);
    const Eigen::MatrixXcd J = augment_J(K);
    AugmentedMoments a;
    a.Vt = Z * J * s.covariance().cast<cplx>() * J.adjoint() * Z;
    a.mut = Z * J * s.means().cast<cplx>();
    return a;
}

/// (xi_1, xi_1^*, ..., xi_K, xi_K^*).
inline Eigen::VectorXcd augmented_point(std::span<const cplx> xi) {
    Eigen::VectorXcd y(2 * static_cast<Eigen::Index>(xi.size()));
    for (std::size_t k = 0; k < xi.size(); ++k) {
        y(2 * static_cast<Eigen::Index>(k)) = xi[k];
        y(2 * static_cast<Eigen::Index>(k) + 1) = std::conj(xi[k]);
    }
    return y;
}

inline cplx gaussian_cf(const AugmentedMoments &a, std::span<const cplx> xi) {
    if (2 * static_cast<Eigen::Index>(xi.size()) != a.Vt.rows()) {
        throw std::invalid_argument("gaussian_cf: point has the wrong number of modes");
    }
    const Eigen::VectorXcd y = augmented_point(xi);
    const cplx quad = y.dot(a.Vt * y);  // y^H Vt y
    const cplx lin = a.mut.dot(y);      // mut^H y
    return std::exp(-0.5 * quad + lin);
}

inline cplx gaussian_cf(const GaussianState &s, std::span<const cplx> xi) {
    if (static_cast<int>(xi.size()) != s.modes()) {
        throw std::invalid_argument("gaussian_cf: expected " + std::to_string(s.modes()) + " modes, got " +
                                    std::to_string(xi.size()));
    }
    return gaussian_cf(augment(s), xi);
}

namespace detail {

inline Eigen::MatrixXd tmsv_covariance(const SqueezingParam &sq) {
    const double V = sq.V(), c = sq.coupling();
    Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(4, 4) * V;
    cov(0, 2) = cov(2, 0) = c;
    cov(1, 3) = cov(3, 1) = -c;
    return cov;
}

}  // namespace detail

/// S(r)|0,0> with S(r) = exp(r (a1^dag a2^dag - a1 a2)).
inline GaussianState tmsv(const SqueezingParam &sq) {
    return GaussianState(detail::tmsv_covariance(sq), Eigen::VectorXd::Zero(4));
}

/// D1(z1) D2(z2) S(r)|0,0>: the TMSV covariance with mode amplitudes z1, z2.
inline GaussianState tmsc(const SqueezingParam &sq, cplx z1, cplx z2) {
    Eigen::VectorXd mu(4);
    mu << 2 * z1.real(), 2 * z1.imag(), 2 * z2.real(), 2 * z2.imag();
    return GaussianState(detail::tmsv_covariance(sq), mu);
}

/// Displacements for the reversed ordering S(r) D1(z1~) D2(z2~)|0,0> that
/// produce the same state as tmsc(r, z1, z2).
inline std::pair<cplx, cplx> tmsc_swapped_displacements(const SqueezingParam &sq, cplx z1, cplx z2) {
    const double ch = std::cosh(sq.r()), sh = std::sinh(sq.r());
    return {z1 * ch - std::conj(z2) * sh, z2 * ch - std::conj(z1) * sh};
}

/// S(r) (rho_th(nbar) (x) rho_th(nbar)) S(r)^dag.
inline GaussianState tmst(const SqueezingParam &sq, double nbar) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw std::invalid_argument("thermal occupation must be finite and >= 0");
    }
    return GaussianState(detail::tmsv_covariance(sq) * (2 * nbar + 1), Eigen::VectorXd::Zero(4));
}

/// Two independent pure-loss channels on a two-mode state.
inline GaussianState apply_loss(const GaussianState &s, const ChannelParams &ch) {
    if (s.modes() != 2) {
        throw std::invalid_argument("apply_loss expects a two-mode state");
    }
    ch.validate();
    Eigen::VectorXd d(4);
    d << std::sqrt(ch.T1), std::sqrt(ch.T1), std::sqrt(ch.T2), std::sqrt(ch.T2);
    const Eigen::MatrixXd S = d.asDiagonal();
    Eigen::MatrixXd noise = Eigen::MatrixXd::Identity(4, 4) - S * S;
    return GaussianState(S * s.covariance() * S + noise, S * s.means());
}

enum class ResourceFamily { tmsv, tmsc, tmst };

inline const char *to_string(ResourceFamily f) {
    switch (f) {
        case ResourceFamily::tmsv:
            return "tmsv";
        case ResourceFamily::tmsc:
            return "tmsc";
        case ResourceFamily::tmst:
            return "tmst";
    }
    return "?";
}

/// Parameters of a two-mode resource, optionally sent through loss.
struct ResourceDescriptor {
    ResourceFamily family = ResourceFamily::tmsv;
    double r_db = 8.0;
    cplx z1 = 0.0;
    cplx z2 = 0.0;
    double nbar = 0.0;
    std::optional<ChannelParams> loss;

    SqueezingParam squeezing() const {
        if (!(r_db >= 0.0) || !std::isfinite(r_db)) {
            throw std::invalid_argument("r_dB must be finite and >= 0");
        }
        return SqueezingParam::from_db(r_db);
    }

    /// The Gaussian state before any loss.
    GaussianState lossless_state() const {
        switch (family) {
            case ResourceFamily::tmsv:
                return tmsv(squeezing());
            case ResourceFamily::tmsc:
                return tmsc(squeezing(), z1, z2);
            case ResourceFamily::tmst:
                return tmst(squeezing(), nbar);
        }
        throw std::logic_error("unknown resource family");
    }

    GaussianState state() const {
        GaussianState s = lossless_state();
        return loss ? apply_loss(s, *loss) : s;
    }
};

}  // namespace pvtele
