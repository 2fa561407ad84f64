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

// Continuous-variable teleportation in the characteristic-function picture:
// chi_out(xi) = chi_res(xi, xi^*) chi_in(xi), averaged over outcomes.

#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pvtele/gaussian_states.hpp"
#include "pvtele/numeric.hpp"
#include "pvtele/parallel.hpp"
#include "pvtele/pv_ops.hpp"
#include "pvtele/quadrature.hpp"

namespace pvtele {

/// Pure single-mode state to be teleported, given by its CF.
class InputState {
   public:
    enum class Kind { coherent, squeezed_vacuum, fock, custom };

    static InputState coherent(cplx alpha) {
        InputState s(Kind::coherent);
        s.alpha_ = alpha;
        return s;
    }
    /// Quadrature variances e^{-2s} and e^{2s}.
    static InputState squeezed_vacuum(double s) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("squeezing must be finite");
        }
        InputState in(Kind::squeezed_vacuum);
        in.s_ = s;
        return in;
    }
    static InputState fock(int n) {
        if (n < 0 || n > 170) {
            throw std::invalid_argument("Fock input level must lie in [0, 170]");
        }
        InputState s(Kind::fock);
        s.n_ = n;
        return s;
    }
    /// Arbitrary pure-state CF. `radial` declares |cf| rotationally symmetric.
    static InputState custom(std::function<cplx(cplx)> cf, bool radial, std::string label = "custom") {
        if (!cf) {
            throw std::invalid_argument("custom input needs a CF");
        }
        InputState s(Kind::custom);
        s.custom_ = std::move(cf);
        s.radial_ = radial;
        s.label_ = std::move(label);
        if (std::abs(s.cf(0.0) - 1.0) > 1e-12) {
            throw std::invalid_argument("custom input CF must equal 1 at the origin");
        }
        for (int i = 1; i <= 16; ++i) {
            const cplx xi = std::polar(0.4 * i, 2.39996 * i);
            if (std::abs(s.cf(xi)) > 1.0 + 1e-9) {
                throw std::invalid_argument("custom input CF exceeds 1 in modulus");
            }
        }
        return s;
    }

    Kind kind() const {
        return kind_;
    }
    cplx alpha() const {
        return alpha_;
    }
    double squeezing() const {
        return s_;
    }
    int photons() const {
        return n_;
    }
    std::string label() const {
        switch (kind_) {
            case Kind::coherent:
                return "coherent";
            case Kind::squeezed_vacuum:
                return "squeezed_vacuum";
            case Kind::fock:
                return "fock";
            case Kind::custom:
                return label_;
        }
        return "?";
    }

    cplx cf(cplx xi) const {
        const double x = std::norm(xi);
        switch (kind_) {
            case Kind::coherent:
                return std::exp(-0.5 * x + xi * std::conj(alpha_) - std::conj(xi) * alpha_);
            case Kind::squeezed_vacuum: {
                const cplx u = xi * std::cosh(s_) + std::conj(xi) * std::sinh(s_);
                return std::exp(-0.5 * std::norm(u));
            }
            case Kind::fock: {
                // Laguerre L_n(x) by recurrence.
                double l0 = 1.0, l1 = 1.0 - x;
                if (n_ == 0) {
                    return std::exp(-0.5 * x);
                }
                for (int k = 1; k < n_; ++k) {
                    const double l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
                    l0 = l1;
                    l1 = l2;
                }
                return std::exp(-0.5 * x) * l1;
            }
            case Kind::custom:
                return custom_(xi);
        }
        return 0.0;
    }

    bool radial() const {
        return kind_ == Kind::coherent || kind_ == Kind::fock || (kind_ == Kind::squeezed_vacuum && s_ == 0.0) ||
               (kind_ == Kind::custom && radial_);
    }

   private:
    explicit InputState(Kind k) : kind_(k) {
    }

    Kind kind_;
    cplx alpha_ = 0.0;
    double s_ = 0.0;
    int n_ = 0;
    bool radial_ = false;
    std::string label_;
    std::function<cplx(cplx)> custom_;
};

/// Two-mode resource CF: a Gaussian state, optionally photon-varied, with
/// loss channels applied after the operation.
class Resource {
   public:
    static Resource ideal() {
        return Resource();
    }
    explicit Resource(const GaussianState &g, std::optional<ChannelParams> loss = std::nullopt)
        : lossless_(g), loss_(loss) {
        init();
    }
    explicit Resource(PhotonVariedState s, std::optional<ChannelParams> loss = std::nullopt)
        : lossless_(s.base()), op_(std::move(s)), loss_(loss) {
        init();
    }
    explicit Resource(GeneralizedPVState s, std::optional<ChannelParams> loss = std::nullopt)
        : lossless_(s.base()), op_(std::move(s)), loss_(loss) {
        init();
    }

    bool is_ideal() const {
        return !lossless_.has_value();
    }
    const std::optional<ChannelParams> &loss() const {
        return loss_;
    }

    /// chi_res(xi1, xi2) / chi_gauss(xi1, xi2) where chi_gauss is the same
    /// Gaussian state sent through the same channels without the operation.
    cplx ratio(cplx xi1, cplx xi2) const {
        if (std::holds_alternative<std::monostate>(op_)) {
            return 1.0;
        }
        const double a = loss_ ? std::sqrt(loss_->T1) : 1.0;
        const double b = loss_ ? std::sqrt(loss_->T2) : 1.0;
        const std::array<cplx, 2> p{a * xi1, b * xi2};
        if (const auto *pv = std::get_if<PhotonVariedState>(&op_)) {
            return pv->ratio(p);
        }
        return std::get<GeneralizedPVState>(op_).ratio(p);
    }

    cplx cf(cplx xi1, cplx xi2) const {
        if (is_ideal()) {
            return 1.0;
        }
        const std::array<cplx, 2> p{xi1, xi2};
        return ratio(xi1, xi2) * gaussian_cf(*lossy_, p);
    }

    /// Response function chi_res(xi, xi^*).
    cplx response(cplx xi) const {
        return cf(xi, std::conj(xi));
    }

    /// True when the response depends on |xi| only: the underlying Gaussian
    /// state is centred and invariant under the phase rotation that the
    /// (phase-covariant) operations commute with.
    bool radial() const {
        return radial_;
    }

   private:
    Resource() = default;

    void init() {
        if (lossless_->modes() != 2) {
            throw std::invalid_argument("teleportation resource must have two modes");
        }
        lossy_ = loss_ ? apply_loss(*lossless_, *loss_) : *lossless_;
        radial_ = lossless_->means().norm() == 0.0 && rotation_invariant(lossless_->covariance());
    }

    static bool rotation_invariant(const Eigen::MatrixXd &V) {
        // xi -> e^{i phi} xi on the diagonal rotates mode 1 by phi and mode 2 by -phi.
        const double phi = 0.7390851332;
        Eigen::Matrix2d R;
        R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
        Eigen::Matrix4d U = Eigen::Matrix4d::Zero();
        U.topLeftCorner<2, 2>() = R;
        U.bottomRightCorner<2, 2>() = R.transpose();
        const Eigen::Matrix4d W = U * V * U.transpose();
        return (W - V).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, V.cwiseAbs().maxCoeff());
    }

    std::optional<GaussianState> lossless_;
    std::optional<GaussianState> lossy_;
    std::variant<std::monostate, PhotonVariedState, GeneralizedPVState> op_;
    std::optional<ChannelParams> loss_;
    bool radial_ = true;
};

/// Integration settings for the fidelity integral.
struct QuadratureGrid {
    double radial_cutoff = 6.0;
    int nodes = 400;
    int angular_nodes = 64;
    /// Relative change allowed between successive node doublings.
    double tolerance = 1e-8;
    int max_doublings = 5;
    /// The cutoff is extended until the input CF envelope drops below this.
    double tail_floor = 1e-17;

    void validate() const {
        if (!(radial_cutoff > 0.0)) {
            throw std::invalid_argument("radial cutoff must be > 0");
        }
        if (nodes < 16) {
            throw std::invalid_argument("radial nodes must be >= 16");
        }
        if (angular_nodes < 4) {
            throw std::invalid_argument("angular nodes must be >= 4");
        }
    }
};

/// Quadrature failed to settle; both estimates are kept.
class QuadratureError : public NumericalError {
   public:
    QuadratureError(double coarse, double fine)
        : NumericalError("fidelity quadrature did not converge: " + sci(coarse) + " vs " + sci(fine)),
          coarse_(coarse),
          fine_(fine) {
    }
    double coarse() const {
        return coarse_;
    }
    double fine() const {
        return fine_;
    }

   private:
    double coarse_, fine_;
};

inline cplx response_function(const Resource &res, cplx xi) {
    return res.response(xi);
}

inline cplx output_cf(const Resource &res, const InputState &in, cplx xi) {
    return res.response(xi) * in.cf(xi);
}

struct FidelityResult {
    double value = 0.0;  ///< clipped to [0, 1]
    double raw = 0.0;
    double cutoff = 0.0;
    int radial_nodes = 0;
    int angular_nodes = 0;  ///< 0 on the radial path
    bool radial_path = false;
};

namespace detail {

/// Radius beyond which max_phi |chi_in|^2 r^2 stays under `floor`.
inline double effective_cutoff(const InputState &in, const QuadratureGrid &g) {
    double L = g.radial_cutoff;
    auto envelope = [&](double r) {
        double m = 0.0;
        for (int k = 0; k < 64; ++k) {
            m = std::max(m, std::norm(in.cf(std::polar(r, 2 * M_PI * k / 64))));
        }
        return m * r * r;
    };
    while (envelope(L) > g.tail_floor && L < 1e3) {
        L += 0.5;
    }
    return L;
}

inline double radial_estimate(const Resource &res, const InputState &in, double L, int n, int threads) {
    const QuadratureRule q = gauss_legendre(n, 0.0, L);
    std::vector<double> vals(q.nodes.size());
    parallel_for(q.nodes.size(), threads, [&](std::size_t i) {
        const double r = q.nodes[i];
        vals[i] = 2.0 * q.weights[i] * r * (res.response(r).real() * std::norm(in.cf(r)));
    });
    CompensatedSum s;
    for (double v : vals) {
        s.add(v);
    }
    return s.value();
}

inline double polar_estimate(const Resource &res, const InputState &in, double L, int n, int m, int threads) {
    const QuadratureRule q = gauss_legendre(n, 0.0, L);
    std::vector<double> vals(q.nodes.size());
    parallel_for(q.nodes.size(), threads, [&](std::size_t i) {
        const double r = q.nodes[i];
        CompensatedSum ang;
        for (int k = 0; k < m; ++k) {
            const cplx xi = std::polar(r, 2 * M_PI * k / m);
            ang.add((res.response(xi) * std::norm(in.cf(xi))).real());
        }
        vals[i] = q.weights[i] * r * ang.value() * (2 * M_PI / m) / M_PI;
    });
    CompensatedSum s;
    for (double v : vals) {
        s.add(v);
    }
    return s.value();
}

}  // namespace detail

/// F = (1/pi) int chi_in(-xi) chi_out(xi) d(Re xi) d(Im xi) for a pure input.
inline FidelityResult fidelity_detail(const Resource &res, const InputState &in, const QuadratureGrid &grid = {},
                                      int threads = 1) {
    grid.validate();
    FidelityResult out;
    out.cutoff = detail::effective_cutoff(in, grid);
    out.radial_path = res.radial() && in.radial();
    int n = grid.nodes, m = grid.angular_nodes;
    auto estimate = [&](int nn, int mm) {
        return out.radial_path ? detail::radial_estimate(res, in, out.cutoff, nn, threads)
                               : detail::polar_estimate(res, in, out.cutoff, nn, mm, threads);
    };
    double prev = estimate(n, m);
    double cur = prev;
    bool converged = false;
    for (int d = 0; d < grid.max_doublings; ++d) {
        n *= 2;
        m *= 2;
        cur = estimate(n, m);
        if (std::abs(cur - prev) <= grid.tolerance * std::max(std::abs(cur), 1e-300)) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (!converged) {
        throw QuadratureError(prev, cur);
    }
    out.radial_nodes = n;
    out.angular_nodes = out.radial_path ? 0 : m;
    out.raw = cur;
    if (cur < -1e-9 || cur > 1.0 + 1e-9) {
        throw NumericalError("fidelity " + sci(cur) + " lies outside [0, 1]");
    }
    out.value = std::clamp(cur, 0.0, 1.0);
    return out;
}

inline double fidelity(const Resource &res, const InputState &in, const QuadratureGrid &grid = {}, int threads = 1) {
    return fidelity_detail(res, in, grid, threads).value;
}

/// 1 / |chi(xi, xi^*)| of the bare resource family: the ceiling on any
/// response ratio. TMSC shares the TMSV bound.
inline double h_max(const ResourceDescriptor &family, cplx xi) {
    const SqueezingParam r = family.squeezing();
    const double scale = family.family == ResourceFamily::tmst ? 2 * family.nbar + 1 : 1.0;
    return std::exp(scale * r.residual_noise() * std::norm(xi));
}

/// Response ratio with loss applied after the operation, relative to the
/// same state sent through the same channels without the operation.
inline double h_prime(const PhotonVariedState &s, const ChannelParams &ch, cplx xi) {
    const std::array<cplx, 2> p{std::sqrt(ch.T1) * xi, std::sqrt(ch.T2) * std::conj(xi)};
    return detail::checked_real(s.ratio(p), "lossy response ratio");
}

inline double h_prime(const GeneralizedPVState &s, const ChannelParams &ch, cplx xi) {
    const std::array<cplx, 2> p{std::sqrt(ch.T1) * xi, std::sqrt(ch.T2) * std::conj(xi)};
    return detail::checked_real(s.ratio(p), "lossy response ratio");
}

inline double h_prime(const SqueezingParam &r, const PVSpec &spec, const ChannelParams &ch, cplx xi) {
    return h_prime(PhotonVariedState(tmsv(r), spec), ch, xi);
}

inline double h_prime(const SqueezingParam &r, const GeneralizedPVSpec &spec, const ChannelParams &ch, cplx xi) {
    return h_prime(GeneralizedPVState(tmsv(r), spec), ch, xi);
}

}  // namespace pvtele
