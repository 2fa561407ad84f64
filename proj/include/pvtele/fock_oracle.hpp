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

// Brute-force truncated Fock-basis model of the same states and operations,
// used to cross-check the closed-form machinery. Slow by design.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvtele/gaussian_states.hpp"
#include "pvtele/numeric.hpp"
#include "pvtele/pv_ops.hpp"

namespace pvtele {

/// The truncated space cannot hold the state accurately.
class TruncationError : public NumericalError {
   public:
    using NumericalError::NumericalError;
};

/// Ladder and displacement operators on span{|0>, ..., |D-1>}.
class FockOperatorSet {
   public:
    explicit FockOperatorSet(int D) : D_(D), a_(Eigen::MatrixXd::Zero(D, D)) {
        if (D < 2) {
            throw std::invalid_argument("Fock truncation must be >= 2");
        }
        for (int n = 1; n < D; ++n) {
            a_(n - 1, n) = std::sqrt(static_cast<double>(n));
        }
    }

    int dim() const {
        return D_;
    }
    const Eigen::MatrixXd &a() const {
        return a_;
    }
    Eigen::MatrixXd adag() const {
        return a_.transpose();
    }

    /// <m|D(xi)|n> from associated Laguerre polynomials:
    /// sqrt(n!/m!) xi^(m-n) e^(-|xi|^2/2) L_n^(m-n)(|xi|^2) for m >= n, and
    /// sqrt(m!/n!) (-xi^*)^(n-m) e^(-|xi|^2/2) L_m^(n-m)(|xi|^2) otherwise.
    Eigen::MatrixXcd displacement(cplx xi) const {
        Eigen::MatrixXcd Dm = Eigen::MatrixXcd::Zero(D_, D_);
        const double x = std::norm(xi);
        if (x == 0.0) {
            Dm.setIdentity();
            return Dm;
        }
        const double logr = 0.5 * std::log(x);
        const double phase = std::arg(xi);
        const double phase_low = std::arg(-std::conj(xi));
        std::vector<double> L(static_cast<std::size_t>(D_));
        for (int alpha = 0; alpha < D_; ++alpha) {
            const int len = D_ - alpha;
            // L_k^(alpha)(x), k = 0..len-1, by the forward three-term recurrence.
            L[0] = 1.0;
            if (len > 1) {
                L[1] = 1.0 + alpha - x;
            }
            for (int k = 1; k + 1 < len; ++k) {
                L[static_cast<std::size_t>(k) + 1] =
                    ((2.0 * k + 1.0 + alpha - x) * L[static_cast<std::size_t>(k)] -
                     (k + alpha) * L[static_cast<std::size_t>(k) - 1]) /
                    (k + 1.0);
            }
            for (int n = 0; n < len; ++n) {
                const int m = n + alpha;
                const double logmag =
                    0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) + alpha * logr - 0.5 * x;
                const double mag = std::exp(logmag) * L[static_cast<std::size_t>(n)];
                Dm(m, n) = std::polar(1.0, alpha * phase) * mag;
                if (alpha > 0) {
                    Dm(n, m) = std::polar(1.0, alpha * phase_low) * mag;
                }
            }
        }
        return Dm;
    }

   private:
    int D_;
    Eigen::MatrixXd a_;
};

/// Density operator as an ensemble rho = sum_b Psi_b Psi_b^dag of
/// unnormalized pure branches. A branch is a D x D amplitude matrix
/// Psi(n1, n2) for two modes, or a D x 1 column for one mode.
class FockState {
   public:
    FockState(int modes, int D, std::vector<Eigen::MatrixXcd> branches)
        : modes_(modes), D_(D), branches_(std::move(branches)) {
        if (modes != 1 && modes != 2) {
            throw std::invalid_argument("FockState supports one or two modes");
        }
        for (const auto &b : branches_) {
            if (b.rows() != D || b.cols() != (modes == 2 ? D : 1)) {
                throw std::invalid_argument("FockState branch has the wrong shape");
            }
        }
    }

    int modes() const {
        return modes_;
    }
    int dim() const {
        return D_;
    }
    const std::vector<Eigen::MatrixXcd> &branches() const {
        return branches_;
    }
    /// Squared norm of the most recent operation before renormalization.
    double weight() const {
        return weight_;
    }
    void set_weight(double w) {
        weight_ = w;
    }

    double trace() const {
        double t = 0.0;
        for (const auto &b : branches_) {
            t += b.squaredNorm();
        }
        return t;
    }

    /// Probability of finding any mode at level >= D - levels.
    double tail_mass(int levels = 5) const {
        const int lo = std::max(0, D_ - levels);
        double t = 0.0;
        for (const auto &b : branches_) {
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                for (Eigen::Index j = 0; j < b.cols(); ++j) {
                    if (i >= lo || (modes_ == 2 && j >= lo)) {
                        t += std::norm(b(i, j));
                    }
                }
            }
        }
        return t / trace();
    }

    void check_tail(double tol = 1e-10) const {
        const double t = tail_mass();
        if (t > tol) {
            throw TruncationError("Fock truncation D=" + std::to_string(D_) + " too small: tail mass " + sci(t) +
                                  " exceeds " + sci(tol) + "; increase D");
        }
    }

    double mean_photons(int mode) const {
        double s = 0.0;
        for (const auto &b : branches_) {
            for (Eigen::Index i = 0; i < b.rows(); ++i) {
                for (Eigen::Index j = 0; j < b.cols(); ++j) {
                    s += static_cast<double>(mode == 0 ? i : j) * std::norm(b(i, j));
                }
            }
        }
        return s / trace();
    }

    void normalize() {
        const double t = trace();
        for (auto &b : branches_) {
            b /= std::sqrt(t);
        }
    }

   private:
    int modes_;
    int D_;
    std::vector<Eigen::MatrixXcd> branches_;
    double weight_ = 1.0;
};

namespace detail {

/// Block of exp(r (a1^dag a2^dag - a1 a2)) acting on |k + delta, k>, k = 0..len-1.
inline Eigen::MatrixXd squeeze_block(double r, int delta, int len) {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(len, len);
    for (int k = 0; k + 1 < len; ++k) {
        const double g = r * std::sqrt(static_cast<double>(k + delta + 1) * (k + 1));
        G(k + 1, k) = g;
        G(k, k + 1) = -g;
    }
    return G.exp();
}

inline Eigen::MatrixXd matrix_power(const Eigen::MatrixXd &A, int n) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(A.rows(), A.cols());
    for (int i = 0; i < n; ++i) {
        P = (P * A).eval();
    }
    return P;
}

inline Eigen::MatrixXcd mode_operator(const FockOperatorSet &ops, int t, int n) {
    return matrix_power(t < 0 ? ops.a() : ops.adag(), n).cast<cplx>();
}

inline FockState finish(FockState s, double tail_tol) {
    s.normalize();
    s.check_tail(tail_tol);
    return s;
}

}  // namespace detail

/// S(r) Psi for a two-mode amplitude matrix, block by block in n1 - n2.
inline Eigen::MatrixXcd oracle_squeeze(const Eigen::MatrixXcd &psi, double r) {
    const auto D = static_cast<int>(psi.rows());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
    for (int delta = -(D - 1); delta <= D - 1; ++delta) {
        const int ad = std::abs(delta), len = D - ad;
        Eigen::VectorXcd band(len);
        for (int k = 0; k < len; ++k) {
            band(k) = delta >= 0 ? psi(k + ad, k) : psi(k, k + ad);
        }
        const Eigen::VectorXcd res = detail::squeeze_block(r, ad, len).cast<cplx>() * band;
        for (int k = 0; k < len; ++k) {
            (delta >= 0 ? out(k + ad, k) : out(k, k + ad)) = res(k);
        }
    }
    return out;
}

inline FockState oracle_vacuum(int modes, int D) {
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(D, modes == 2 ? D : 1);
    psi(0, 0) = 1.0;
    return FockState(modes, D, {psi});
}

inline FockState oracle_fock(int n, int D) {
    if (n < 0 || n >= D) {
        throw std::invalid_argument("Fock level outside the truncated space");
    }
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(D, 1);
    psi(n, 0) = 1.0;
    return FockState(1, D, {psi});
}

inline FockState oracle_coherent(cplx alpha, int D, double tail_tol = 1e-10) {
    FockOperatorSet ops(D);
    Eigen::MatrixXcd psi = ops.displacement(alpha).col(0);
    return detail::finish(FockState(1, D, {psi}), tail_tol);
}

/// sqrt(1 - lambda^2) sum_n lambda^n |n, n>.
inline FockState oracle_tmsv(const SqueezingParam &r, int D, double tail_tol = 1e-10) {
    const double lam = r.lambda();
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(D, D);
    for (int n = 0; n < D; ++n) {
        psi(n, n) = std::sqrt(1 - lam * lam) * std::pow(lam, n);
    }
    return detail::finish(FockState(2, D, {psi}), tail_tol);
}

/// D1(z1) D2(z2) S(r)|0,0>.
inline FockState oracle_tmsc(const SqueezingParam &r, cplx z1, cplx z2, int D, double tail_tol = 1e-10) {
    FockOperatorSet ops(D);
    const FockState base = oracle_tmsv(r, D, tail_tol);
    Eigen::MatrixXcd psi = ops.displacement(z1) * base.branches()[0] * ops.displacement(z2).transpose();
    return detail::finish(FockState(2, D, {psi}), tail_tol);
}

/// S(r) (rho_th (x) rho_th) S(r)^dag as the ensemble {sqrt(p_n1 p_n2) S|n1, n2>}
/// with p_n = nbar^n / (nbar + 1)^(n + 1).
inline FockState oracle_tmst(const SqueezingParam &r, double nbar, int D, double tail_tol = 1e-10,
                             double weight_floor = 1e-18) {
    if (nbar < 0.0) {
        throw std::invalid_argument("thermal occupation must be >= 0");
    }
    std::vector<double> p;
    for (int n = 0; n < D; ++n) {
        const double w = std::pow(nbar, n) / std::pow(nbar + 1.0, n + 1);
        if (w < weight_floor && n > 0) {
            break;
        }
        p.push_back(w);
    }
    std::vector<Eigen::MatrixXd> blocks_pos, blocks_neg;  // delta >= 0, delta < 0
    std::vector<Eigen::MatrixXcd> branches;
    const int nmax = static_cast<int>(p.size());
    for (int delta = -(nmax - 1); delta <= nmax - 1; ++delta) {
        const int ad = std::abs(delta);
        const Eigen::MatrixXd B = detail::squeeze_block(r.r(), ad, D - ad);
        for (int n1 = 0; n1 < nmax; ++n1) {
            const int n2 = n1 - delta;
            if (n2 < 0 || n2 >= nmax) {
                continue;
            }
            const double w = p[static_cast<std::size_t>(n1)] * p[static_cast<std::size_t>(n2)];
            if (w < weight_floor) {
                continue;
            }
            const int start = std::min(n1, n2);
            Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(D, D);
            for (int k = 0; k < D - ad; ++k) {
                const int i = delta >= 0 ? k + ad : k;
                const int j = delta >= 0 ? k : k + ad;
                psi(i, j) = std::sqrt(w) * B(k, start);
            }
            branches.push_back(std::move(psi));
        }
    }
    return detail::finish(FockState(2, D, std::move(branches)), tail_tol);
}

/// Resource described by `desc`, including its loss channels if any.
inline FockState oracle_state(const ResourceDescriptor &desc, int D, double tail_tol = 1e-10);

/// rho -> O rho O^dag / tr(...) with O = prod_k (a_k or a_k^dag)^(n_k).
inline FockState oracle_apply(const FockState &s, const PVSpec &spec, double tail_tol = 1e-10) {
    if (spec.modes() != s.modes()) {
        throw std::invalid_argument("PVSpec mode count does not match the Fock state");
    }
    FockOperatorSet ops(s.dim());
    const Eigen::MatrixXcd O1 = detail::mode_operator(ops, spec.entries()[0].t, spec.entries()[0].n);
    const Eigen::MatrixXcd O2 = s.modes() == 2
                                    ? detail::mode_operator(ops, spec.entries()[1].t, spec.entries()[1].n)
                                    : Eigen::MatrixXcd::Identity(1, 1);
    std::vector<Eigen::MatrixXcd> out;
    for (const auto &b : s.branches()) {
        out.push_back(O1 * b * O2.transpose());
    }
    FockState r(s.modes(), s.dim(), std::move(out));
    const double w = r.trace() / s.trace();
    if (!(w > 1e-12)) {
        throw std::invalid_argument("operation annihilates the state (weight " + sci(w) + ")");
    }
    r = detail::finish(std::move(r), tail_tol);
    r.set_weight(w);
    return r;
}

/// rho -> A rho A^dag / tr(...) with A = sum_n e_n (a1^dag a2^dag)^n or
/// sum_n e_n (a1 a2)^n.
inline FockState oracle_apply(const FockState &s, const GeneralizedPVSpec &spec, double tail_tol = 1e-10) {
    if (s.modes() != 2) {
        throw std::invalid_argument("generalized operation needs a two-mode state");
    }
    FockOperatorSet ops(s.dim());
    const int t = spec.dagger() ? 1 : -1;
    std::vector<Eigen::MatrixXcd> powers;
    for (int n = 0; n <= spec.N(); ++n) {
        powers.push_back(detail::mode_operator(ops, t, n));
    }
    std::vector<Eigen::MatrixXcd> out;
    for (const auto &b : s.branches()) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(b.rows(), b.cols());
        for (int n = 0; n <= spec.N(); ++n) {
            acc += spec.e()[static_cast<std::size_t>(n)] * powers[static_cast<std::size_t>(n)] * b *
                   powers[static_cast<std::size_t>(n)].transpose();
        }
        out.push_back(std::move(acc));
    }
    FockState r(2, s.dim(), std::move(out));
    const double w = r.trace() / s.trace();
    if (!(w > 1e-12)) {
        throw std::invalid_argument("operation annihilates the state (weight " + sci(w) + ")");
    }
    r = detail::finish(std::move(r), tail_tol);
    r.set_weight(w);
    return r;
}

/// tr(rho D(xi_1) (x) D(xi_2)).
/// CF from precomputed displacement matrices D1 = D(xi1), D2 = D(xi2); pass a
/// 1 x 1 identity as D2 for one mode.
inline cplx oracle_cf(const FockState &s, const Eigen::MatrixXcd &D1, const Eigen::MatrixXcd &D2) {
    std::vector<cplx> terms;
    for (const auto &b : s.branches()) {
        // tr(Psi^dag D1 Psi D2^T) = sum_ij conj(Psi_ij) (D1 Psi D2^T)_ij
        const Eigen::MatrixXcd T = D1 * b * D2.transpose();
        terms.push_back(b.cwiseProduct(T.conjugate()).sum());
    }
    return std::conj(sorted_sum(terms));
}

inline cplx oracle_cf(const FockState &s, std::span<const cplx> xi) {
    if (static_cast<int>(xi.size()) != s.modes()) {
        throw std::invalid_argument("oracle_cf: point has the wrong number of modes");
    }
    FockOperatorSet ops(s.dim());
    const Eigen::MatrixXcd D1 = ops.displacement(xi[0]);
    const Eigen::MatrixXcd D2 =
        s.modes() == 2 ? Eigen::MatrixXcd(ops.displacement(xi[1])) : Eigen::MatrixXcd::Identity(1, 1);
    return oracle_cf(s, D1, D2);
}

/// Per-mode pure loss with Kraus operators sqrt((1-T)^k / k!) T^(n/2) a^k.
inline FockState oracle_loss(const FockState &s, const ChannelParams &ch, double branch_floor = 1e-24) {
    ch.validate();
    FockOperatorSet ops(s.dim());
    const int D = s.dim();
    auto kraus = [&](double T) {
        std::vector<Eigen::MatrixXcd> E;
        if (T == 1.0) {
            E.push_back(Eigen::MatrixXcd::Identity(D, D));
            return E;
        }
        Eigen::VectorXd damp(D);
        for (int n = 0; n < D; ++n) {
            damp(n) = std::pow(T, 0.5 * n);
        }
        Eigen::MatrixXd ak = Eigen::MatrixXd::Identity(D, D);
        for (int k = 0; k < D; ++k) {
            const double c = std::sqrt(std::pow(1.0 - T, k) / factorial(std::min(k, 170)));
            E.push_back((c * damp.asDiagonal() * ak).cast<cplx>());
            ak = (ak * ops.a()).eval();
        }
        return E;
    };
    const auto E1 = kraus(ch.T1);
    const auto E2 = s.modes() == 2 ? kraus(ch.T2) : std::vector<Eigen::MatrixXcd>{Eigen::MatrixXcd::Identity(1, 1)};
    std::vector<Eigen::MatrixXcd> out;
    const double total = s.trace();
    for (const auto &b : s.branches()) {
        for (const auto &e1 : E1) {
            const Eigen::MatrixXcd left = e1 * b;
            if (left.squaredNorm() < branch_floor * total) {
                continue;
            }
            for (const auto &e2 : E2) {
                Eigen::MatrixXcd nb = left * e2.transpose();
                if (nb.squaredNorm() >= branch_floor * total) {
                    out.push_back(std::move(nb));
                }
            }
        }
    }
    return FockState(s.modes(), D, std::move(out));
}

inline FockState oracle_state(const ResourceDescriptor &desc, int D, double tail_tol) {
    const SqueezingParam r = desc.squeezing();
    FockState s = [&] {
        switch (desc.family) {
            case ResourceFamily::tmsv:
                return oracle_tmsv(r, D, tail_tol);
            case ResourceFamily::tmsc:
                return oracle_tmsc(r, desc.z1, desc.z2, D, tail_tol);
            case ResourceFamily::tmst:
                return oracle_tmst(r, desc.nbar, D, tail_tol);
        }
        throw std::logic_error("unknown resource family");
    }();
    return desc.loss ? oracle_loss(s, *desc.loss) : s;
}

/// Smallest D = start + k * step whose built state has tail mass <= tail_tol.
inline int adequate_dimension(const std::function<FockState(int)> &build, int start = 60, int step = 20,
                              double tail_tol = 1e-13, int max_dim = 400) {
    for (int D = start; D <= max_dim; D += step) {
        try {
            if (build(D).tail_mass() <= tail_tol) {
                return D;
            }
        } catch (const TruncationError &) {
        }
    }
    throw TruncationError("no truncation up to " + std::to_string(max_dim) + " meets tail " + sci(tail_tol));
}

/// (1/pi) int conj(chi_in) chi_res(xi, xi^*) chi_in d^2 xi by the trapezoid
/// rule on the square [-L, L]^2 with spacing h.
inline double oracle_fidelity(const FockState &resource, const FockState &input, double L = 6.0, double h = 0.1) {
    if (resource.modes() != 2 || input.modes() != 1) {
        throw std::invalid_argument("oracle_fidelity expects a two-mode resource and a one-mode input");
    }
    const int n = static_cast<int>(std::lround(L / h));
    std::vector<double> terms;
    for (int i = -n; i <= n; ++i) {
        for (int j = -n; j <= n; ++j) {
            const cplx xi(i * h, j * h);
            const std::array<cplx, 1> p1{xi};
            const std::array<cplx, 2> p2{xi, std::conj(xi)};
            const cplx cin = oracle_cf(input, p1);
            const cplx v = std::norm(cin) * oracle_cf(resource, p2);
            terms.push_back(v.real());
        }
    }
    return sorted_sum(terms) * h * h / M_PI;
}

}  // namespace pvtele
