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

// Photon-varied (photon-subtracted / photon-added) Gaussian states and the
// generalized two-mode operation sum_n e_n (a1^dag a2^dag)^n.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvtele/gaussian_states.hpp"
#include "pvtele/hermite.hpp"
#include "pvtele/numeric.hpp"

namespace pvtele {

/// Tolerance on the imaginary residue of quantities that must be real.
inline constexpr double kRealTolerance = 1e-10;

/// One mode's operation: t = -1 applies a^n, t = +1 applies (a^dag)^n.
struct PVMode {
    int t = -1;
    int n = 0;
};

class PVSpec {
   public:
    PVSpec() = default;
    explicit PVSpec(std::vector<PVMode> modes) : modes_(std::move(modes)) {
        for (const auto &m : modes_) {
            if (m.t != -1 && m.t != 1) {
                throw std::invalid_argument("PVSpec: t must be -1 (subtraction) or +1 (addition), got " +
                                            std::to_string(m.t));
            }
            if (m.n < 0) {
                throw std::invalid_argument("PVSpec: photon number must be >= 0");
            }
        }
    }

    static PVSpec subtraction(int n1, int n2) {
        return PVSpec({{-1, n1}, {-1, n2}});
    }
    static PVSpec addition(int n1, int n2) {
        return PVSpec({{1, n1}, {1, n2}});
    }

    int modes() const {
        return static_cast<int>(modes_.size());
    }
    const std::vector<PVMode> &entries() const {
        return modes_;
    }
    int total_photons() const {
        int s = 0;
        for (const auto &m : modes_) {
            s += m.n;
        }
        return s;
    }
    std::vector<int> t_vector() const {
        std::vector<int> t;
        for (const auto &m : modes_) {
            t.push_back(m.t);
        }
        return t;
    }
    /// (n1, n1, n2, n2, ...).
    MultiIndex hermite_index() const {
        std::vector<int> idx;
        for (const auto &m : modes_) {
            idx.push_back(m.n);
            idx.push_back(m.n);
        }
        return MultiIndex(std::move(idx));
    }

   private:
    std::vector<PVMode> modes_;
};

namespace detail {

/// Hermite data shared by every photon-varied CF of one Gaussian state:
/// Vt' = Vt + diag(t1, t1, t2, t2, ...) / 2 and M = -X Vt' / 2.
class PVKernel {
   public:
    PVKernel(const AugmentedMoments &a, const std::vector<int> &t) : mut_(a.mut) {
        const auto dim = a.Vt.rows();
        if (static_cast<Eigen::Index>(2 * t.size()) != dim) {
            throw std::invalid_argument("PV operation has " + std::to_string(t.size()) + " modes, state has " +
                                        std::to_string(dim / 2));
        }
        Vp_ = a.Vt;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(2 * k);
            Vp_(i, i) += 0.5 * t[k];
            Vp_(i + 1, i + 1) += 0.5 * t[k];
        }
        X_ = augment_X(static_cast<int>(dim / 2));
        Eigen::MatrixXcd M = -0.5 * X_ * Vp_;
        const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
        if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw std::logic_error("PV Hermite matrix is not symmetric");
        }
        M = (0.5 * (M + M.transpose())).eval();
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                auto &z = M(i, j);
                z = cplx(std::abs(z.real()) < 1e-15 * scale ? 0.0 : z.real(),
                         std::abs(z.imag()) < 1e-15 * scale ? 0.0 : z.imag());
            }
        }
        M_ = std::move(M);
    }

    /// X (Vt' y + mut).
    Eigen::VectorXcd argument(const Eigen::VectorXcd &y) const {
        return X_ * (Vp_ * y + mut_);
    }
    Eigen::VectorXcd origin_argument() const {
        return X_ * mut_;
    }

    cplx eval(const Eigen::VectorXcd &arg, const MultiIndex &idx, const PrecisionPolicy &policy, int cap) const {
        return hermite_general(HermiteParams(M_, arg), idx, policy, cap);
    }

    const Eigen::MatrixXcd &M() const {
        return M_;
    }

   private:
    Eigen::VectorXcd mut_;
    Eigen::MatrixXcd Vp_;
    Eigen::MatrixXcd X_;
    Eigen::MatrixXcd M_;
};

inline double checked_real(cplx z, const char *what) {
    if (std::abs(z.imag()) > kRealTolerance * std::max(1.0, std::abs(z.real()))) {
        throw NumericalError(std::string(what) + " has imaginary residue " + std::to_string(z.imag()));
    }
    return z.real();
}

inline std::array<cplx, 2> diagonal_point(cplx xi) {
    return {xi, std::conj(xi)};
}

}  // namespace detail

/// A Gaussian state after per-mode photon subtraction / addition.
class PhotonVariedState {
   public:
    PhotonVariedState(GaussianState base, PVSpec spec, PrecisionPolicy policy = {},
                      int degree_cap = kDefaultDegreeCap)
        : base_(std::move(base)),
          spec_(std::move(spec)),
          policy_(policy),
          cap_(degree_cap),
          kernel_(augment(base_), spec_.t_vector()),
          index_(spec_.hermite_index()) {
        policy_.validate();
        detail::check_degree(index_.total(), cap_);
        const double sign = spec_.total_photons() % 2 == 0 ? 1.0 : -1.0;
        const cplx n = sign * kernel_.eval(kernel_.origin_argument(), index_, policy_, cap_);
        if (std::abs(n.imag()) > kRealTolerance * std::abs(n.real()) || !(n.real() > 0.0)) {
            throw std::invalid_argument("photon-varied normalization is not positive (" + sci(n.real()) + ", " +
                                        sci(n.imag()) + "); the operation annihilates the state");
        }
        norm_ = n.real();
    }

    const GaussianState &base() const {
        return base_;
    }
    const PVSpec &spec() const {
        return spec_;
    }
    /// Squared norm of the unnormalized operated state.
    double norm() const {
        return norm_;
    }

    /// chi_PV(xi) / chi(xi).
    cplx ratio(std::span<const cplx> xi) const {
        if (spec_.total_photons() == 0) {
            return 1.0;
        }
        const double sign = spec_.total_photons() % 2 == 0 ? 1.0 : -1.0;
        const Eigen::VectorXcd y = augmented_point(xi);
        return sign * kernel_.eval(kernel_.argument(y), index_, policy_, cap_) / norm_;
    }

    cplx cf(std::span<const cplx> xi) const {
        return ratio(xi) * gaussian_cf(base_, xi);
    }

   private:
    GaussianState base_;
    PVSpec spec_;
    PrecisionPolicy policy_;
    int cap_;
    detail::PVKernel kernel_;
    MultiIndex index_;
    double norm_ = 1.0;
};

/// Coefficients of sum_{n=0}^N e_n O^n, with O = a1^dag a2^dag (dagger) or
/// a1 a2; stored with unit Euclidean norm.
class GeneralizedPVSpec {
   public:
    explicit GeneralizedPVSpec(std::vector<double> e, bool dagger = true) : e_(std::move(e)), dagger_(dagger) {
        if (e_.empty()) {
            throw std::invalid_argument("GeneralizedPVSpec: coefficient vector is empty");
        }
        double s = 0.0;
        for (double v : e_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("GeneralizedPVSpec: non-finite coefficient");
            }
            s += v * v;
        }
        if (!(s > 0.0)) {
            throw std::invalid_argument("GeneralizedPVSpec: coefficient vector is zero");
        }
        const double inv = 1.0 / std::sqrt(s);
        for (double &v : e_) {
            v *= inv;
        }
    }

    int N() const {
        return static_cast<int>(e_.size()) - 1;
    }
    const std::vector<double> &e() const {
        return e_;
    }
    bool dagger() const {
        return dagger_;
    }

   private:
    std::vector<double> e_;
    bool dagger_;
};

/// e-independent part of a generalized operation on a two-mode state:
/// the (N+1) x (N+1) matrices whose quadratic forms give its CF ratio.
class GeneralizedPVKernel {
   public:
    GeneralizedPVKernel(const GaussianState &base, int N, bool dagger, PrecisionPolicy policy = {},
                        int degree_cap = kDefaultDegreeCap)
        : N_(N),
          dagger_(dagger),
          policy_(policy),
          cap_(degree_cap),
          kernel_(augment(base), std::vector<int>(2, dagger ? 1 : -1)) {
        if (base.modes() != 2) {
            throw std::invalid_argument("generalized PV operation needs a two-mode state");
        }
        if (N < 0) {
            throw std::invalid_argument("truncation order N must be >= 0");
        }
        policy_.validate();
        detail::check_degree(4 * N, cap_);
        origin_ = matrix_at(kernel_.origin_argument());
    }

    int N() const {
        return N_;
    }
    bool dagger() const {
        return dagger_;
    }

    /// Entry (j, k) = H_{k,j,k,j} at the two-mode point (xi1, xi2).
    Eigen::MatrixXcd matrix(cplx xi1, cplx xi2) const {
        const std::array<cplx, 2> xi{xi1, xi2};
        return matrix_at(kernel_.argument(augmented_point(xi)));
    }
    const Eigen::MatrixXcd &origin_matrix() const {
        return origin_;
    }

   private:
    Eigen::MatrixXcd matrix_at(const Eigen::VectorXcd &arg) const {
        Eigen::MatrixXcd H(N_ + 1, N_ + 1);
        for (int j = 0; j <= N_; ++j) {
            for (int k = 0; k <= N_; ++k) {
                H(j, k) = kernel_.eval(arg, MultiIndex{k, j, k, j}, policy_, cap_);
            }
        }
        return H;
    }

    int N_;
    bool dagger_;
    PrecisionPolicy policy_;
    int cap_;
    detail::PVKernel kernel_;
    Eigen::MatrixXcd origin_;
};

/// e^T H e.
inline cplx quadratic_form(const Eigen::MatrixXcd &H, std::span<const double> e) {
    if (static_cast<Eigen::Index>(e.size()) != H.rows()) {
        throw std::invalid_argument("coefficient vector length does not match N + 1");
    }
    std::vector<cplx> terms;
    terms.reserve(e.size() * e.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        for (std::size_t k = 0; k < e.size(); ++k) {
            terms.push_back(e[j] * e[k] * H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
        }
    }
    return sorted_sum(terms);
}

/// A two-mode Gaussian state after a generalized operation.
class GeneralizedPVState {
   public:
    GeneralizedPVState(GaussianState base, GeneralizedPVSpec spec, PrecisionPolicy policy = {},
                       int degree_cap = kDefaultDegreeCap)
        : base_(std::move(base)), spec_(std::move(spec)), kernel_(base_, spec_.N(), spec_.dagger(), policy, degree_cap) {
        const cplx n = quadratic_form(kernel_.origin_matrix(), spec_.e());
        if (std::abs(n.imag()) > kRealTolerance * std::abs(n.real()) || !(n.real() > 0.0)) {
            throw std::invalid_argument("generalized PV normalization is not positive");
        }
        norm_ = n.real();
    }

    const GaussianState &base() const {
        return base_;
    }
    const GeneralizedPVSpec &spec() const {
        return spec_;
    }
    const GeneralizedPVKernel &kernel() const {
        return kernel_;
    }
    double norm() const {
        return norm_;
    }

    cplx ratio(std::span<const cplx> xi) const {
        if (xi.size() != 2) {
            throw std::invalid_argument("generalized PV state has two modes");
        }
        return quadratic_form(kernel_.matrix(xi[0], xi[1]), spec_.e()) / norm_;
    }
    cplx cf(std::span<const cplx> xi) const {
        return ratio(xi) * gaussian_cf(base_, xi);
    }

   private:
    GaussianState base_;
    GeneralizedPVSpec spec_;
    GeneralizedPVKernel kernel_;
    double norm_ = 1.0;
};

/// chi_PV(xi, xi*) / chi(xi, xi*) for a two-mode photon-varied state.
inline double response_ratio(const PhotonVariedState &s, cplx xi) {
    if (s.base().modes() != 2) {
        throw std::invalid_argument("response_ratio needs a two-mode resource");
    }
    if (xi == cplx(0.0)) {
        return 1.0;
    }
    return detail::checked_real(s.ratio(detail::diagonal_point(xi)), "response ratio");
}

inline double response_ratio(const GeneralizedPVState &s, cplx xi) {
    if (xi == cplx(0.0)) {
        return 1.0;
    }
    return detail::checked_real(s.ratio(detail::diagonal_point(xi)), "response ratio");
}

/// (N+1) x (N+1) matrix of the dagger operation on TMSV(r) at (xi, xi*),
/// entry (j, k) = H_{k,j,k,j}, from the closed two-mode kernel.
inline Eigen::MatrixXcd h_matrix(const SqueezingParam &r, int N, cplx xi, const PrecisionPolicy &policy = {},
                                 int degree_cap = kDefaultDegreeCap) {
    if (N < 0) {
        throw std::invalid_argument("truncation order N must be >= 0");
    }
    detail::check_degree(4 * N, degree_cap);
    const double AB = -(r.V() + 1.0) / 2.0;
    const double C = r.coupling() / 2.0;
    Eigen::MatrixXcd H(N + 1, N + 1);
    for (int j = 0; j <= N; ++j) {
        for (int k = 0; k <= N; ++k) {
            H(j, k) = hermite_two_mode_four_index(AB, AB, C, {k, j, k, j}, xi, std::conj(xi), policy, degree_cap);
        }
    }
    return H;
}

/// Coefficients that reproduce the order-N truncation of g^{n1} on TMSV(r):
/// e_m = lambda^m sum_{n=m}^N (ln g)^n / n! S(n, m), e_0 = 1, then unit-normalized.
inline std::vector<double> nla_coefficients(double g, int N, const SqueezingParam &r) {
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("gain g must be finite and > 0");
    }
    if (N < 0 || N > kStirlingMax) {
        throw std::invalid_argument("truncation order out of range: " + std::to_string(N));
    }
    const double lg = std::log(g);
    const double lam = r.lambda();
    std::vector<double> e(static_cast<std::size_t>(N) + 1, 0.0);
    e[0] = 1.0;
    for (int m = 1; m <= N; ++m) {
        CompensatedSum s;
        for (int n = m; n <= N; ++n) {
            const double S = stirling2(n, m).convert_to<double>();
            s.add(std::pow(lg, n) / factorial(n) * S);
        }
        e[static_cast<std::size_t>(m)] = std::pow(lam, m) * s.value();
    }
    double nrm = 0.0;
    for (double v : e) {
        nrm += v * v;
    }
    nrm = std::sqrt(nrm);
    for (double &v : e) {
        v /= nrm;
    }
    return e;
}

/// Limit of the gain for which the amplified TMSV stays normalizable.
inline double nla_gain_limit(const SqueezingParam &r) {
    if (r.r() == 0.0) {
        throw std::invalid_argument("gain limit is unbounded at zero squeezing");
    }
    return 1.0 / r.lambda();
}

}  // namespace pvtele
