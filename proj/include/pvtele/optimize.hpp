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


// Maximization of the integrated response ratio of a generalized operation,
// either over the coefficient vector (scheme 1) or over an amplifier gain
// that fixes the coefficients (scheme 2), by particle swarm search.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pvtele/gaussian_states.hpp"
#include "pvtele/numeric.hpp"
#include "pvtele/parallel.hpp"
#include "pvtele/pv_ops.hpp"
#include "pvtele/quadrature.hpp"
#include "pvtele/teleport.hpp"

namespace pvtele {

enum class ObjectiveDomain { radial_line, disk };

inline std::string to_string(ObjectiveDomain d) {
    return d == ObjectiveDomain::radial_line ? "radial_line" : "disk";
}

inline ObjectiveDomain parse_objective_domain(const std::string &s) {
    if (s == "radial_line") {
        return ObjectiveDomain::radial_line;
    }
    if (s == "disk") {
        return ObjectiveDomain::disk;
    }
    throw std::invalid_argument("unknown objective domain '" + s + "' (expected radial_line or disk)");
}

struct ObjectiveConfig {
    double xi_lim = 2.0;
    int radial_nodes = 64;
    ObjectiveDomain domain = ObjectiveDomain::radial_line;
    /// Trapezoid nodes in the angle, disk domain only.
    int angular_nodes = 32;

    void validate() const {
        if (!(xi_lim > 0.0) || !std::isfinite(xi_lim)) {
            throw std::invalid_argument("xi_lim must be finite and > 0");
        }
        if (radial_nodes < 1 || angular_nodes < 1) {
            throw std::invalid_argument("objective node counts must be >= 1");
        }
    }
};

struct PSOConfig {
    int swarm = 50;
    int iters = 500;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    std::uint64_t seed = 0;
    int restarts = 4;
    int threads = 1;
    /// Search interval per dimension; scheme defaults apply when unset.
    std::optional<std::pair<double, double>> bounds;

    void validate() const {
        if (swarm < 2) {
            throw std::invalid_argument("PSO swarm must be >= 2");
        }
        if (iters < 1) {
            throw std::invalid_argument("PSO iters must be >= 1");
        }
        if (restarts < 1) {
            throw std::invalid_argument("PSO restarts must be >= 1");
        }
        if (bounds && !(bounds->first < bounds->second)) {
            throw std::invalid_argument("PSO bounds must satisfy lo < hi");
        }
    }
};

/// The integrated ratio for a fixed (state, N, branch) is
///   sum_i w_i e^T H_i e / e^T H_0 e = e^T A e / e^T B e,
/// so A and B are assembled once. The search runs in whitened coordinates
/// w = L^T D^{1/2} e, where D = diag(B) and L L^T = D^{-1/2} B D^{-1/2}; there
/// the ratio is w^T C w / w^T w.
class ObjectiveModel {
   public:
    ObjectiveModel(const GaussianState &base, int N, bool dagger, const ObjectiveConfig &cfg = {},
                   PrecisionPolicy policy = {}, int threads = 1)
        : cfg_(cfg) {
        cfg.validate();
        const GeneralizedPVKernel kernel(base, N, dagger, policy);
        const int n = N + 1;
        const Eigen::MatrixXcd H0 = kernel.origin_matrix();
        scale_.resize(n);
        for (int j = 0; j < n; ++j) {
            const double d = H0(j, j).real();
            if (!(d > 0.0)) {
                throw NumericalError("generalized operation has a vanishing component at order " + std::to_string(j));
            }
            scale_(j) = 1.0 / std::sqrt(d);
        }

        // Nodes and weights of the integration rule; the disk rule averages the
        // line integral over directions.
        std::vector<cplx> pts;
        std::vector<double> wts;
        const QuadratureRule q = gauss_legendre(cfg.radial_nodes, 0.0, cfg.xi_lim);
        const int m = cfg.domain == ObjectiveDomain::disk ? cfg.angular_nodes : 1;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            for (int k = 0; k < m; ++k) {
                pts.push_back(std::polar(q.nodes[i], 2 * M_PI * k / m));
                wts.push_back(q.weights[i] / m);
            }
        }
        std::vector<Eigen::MatrixXcd> Hs(pts.size());
        parallel_for(pts.size(), threads,
                     [&](std::size_t i) { Hs[i] = kernel.matrix(pts[i], std::conj(pts[i])); });

        const Eigen::MatrixXd S = scale_.asDiagonal();
        A_ = Eigen::MatrixXd::Zero(n, n);
        double imag = 0.0;
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                CompensatedSum re;
                CompensatedSum im;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const cplx h = 0.5 * (Hs[i](j, k) + Hs[i](k, j)) * scale_(j) * scale_(k);
                    re.add(wts[i] * h.real());
                    im.add(wts[i] * h.imag());
                }
                A_(j, k) = re.value();
                imag = std::max(imag, std::abs(im.value()));
            }
        }
        if (imag > 1e-8 * std::max(1.0, A_.cwiseAbs().maxCoeff())) {
            throw NumericalError("integrated response ratio is not real (imaginary part " + sci(imag) + ")");
        }
        B_ = S * (0.5 * (H0 + H0.transpose())).real() * S;
        chol_.compute(B_);
        if (chol_.info() != Eigen::Success) {
            throw NumericalError("normalization matrix is not positive definite");
        }
        const Eigen::MatrixXd Linv = chol_.matrixL().solve(Eigen::MatrixXd::Identity(n, n));
        C_ = Linv * A_ * Linv.transpose();
        C_ = 0.5 * (C_ + C_.transpose()).eval();
    }

    int N() const {
        return static_cast<int>(scale_.size()) - 1;
    }
    const ObjectiveConfig &config() const {
        return cfg_;
    }
    /// A and B in the diagonally scaled coordinates u = D^{1/2} e.
    const Eigen::MatrixXd &numerator() const {
        return A_;
    }
    const Eigen::MatrixXd &denominator() const {
        return B_;
    }
    /// C in the whitened coordinates.
    const Eigen::MatrixXd &whitened() const {
        return C_;
    }

    Eigen::VectorXd to_search(std::span<const double> e) const {
        check(e.size());
        Eigen::VectorXd u(scale_.size());
        for (Eigen::Index j = 0; j < u.size(); ++j) {
            u(j) = e[static_cast<std::size_t>(j)] / scale_(j);
        }
        return chol_.matrixU() * u;
    }
    /// Unit-norm e with the first nonzero component positive.
    std::vector<double> from_search(const Eigen::VectorXd &w) const {
        const Eigen::VectorXd u = chol_.matrixU().solve(w);
        std::vector<double> e(static_cast<std::size_t>(u.size()));
        for (Eigen::Index j = 0; j < u.size(); ++j) {
            e[static_cast<std::size_t>(j)] = u(j) * scale_(j);
        }
        return gauge(std::move(e));
    }

    double value_search(const Eigen::Ref<const Eigen::VectorXd> &w) const {
        const double den = w.squaredNorm();
        if (!(den > 0.0)) {
            return -std::numeric_limits<double>::infinity();
        }
        return w.dot(C_ * w) / den;
    }
    double value(std::span<const double> e) const {
        return value_search(to_search(e));
    }

    static std::vector<double> gauge(std::vector<double> e) {
        double n = 0.0;
        for (double v : e) {
            n += v * v;
        }
        n = std::sqrt(n);
        if (!(n > 0.0)) {
            throw std::invalid_argument("coefficient vector is zero");
        }
        double sign = 1.0;
        for (double v : e) {
            if (v != 0.0) {
                sign = v > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (double &v : e) {
            v *= sign / n;
        }
        return e;
    }

   private:
    void check(std::size_t len) const {
        if (static_cast<Eigen::Index>(len) != scale_.size()) {
            throw std::invalid_argument("coefficient vector length " + std::to_string(len) + " does not match N + 1 = " +
                                        std::to_string(scale_.size()));
        }
    }

    ObjectiveConfig cfg_;
    Eigen::VectorXd scale_;
    Eigen::MatrixXd A_;
    Eigen::MatrixXd B_;
    Eigen::MatrixXd C_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
};

/// Integrated response ratio of `spec` applied to `base`.
inline double objective(const GeneralizedPVSpec &spec, const GaussianState &base, const ObjectiveConfig &cfg = {},
                        PrecisionPolicy policy = {}) {
    const ObjectiveModel model(base, spec.N(), spec.dagger(), cfg, policy);
    return model.value(spec.e());
}

inline double objective(const GeneralizedPVSpec &spec, const SqueezingParam &r, const ObjectiveConfig &cfg = {},
                        PrecisionPolicy policy = {}) {
    return objective(spec, tmsv(r), cfg, policy);
}

/// The same integral taken over the bound h_max of the family.
inline double bound_objective(const ResourceDescriptor &family, const ObjectiveConfig &cfg = {}) {
    cfg.validate();
    const QuadratureRule q = gauss_legendre(cfg.radial_nodes, 0.0, cfg.xi_lim);
    CompensatedSum s;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        s.add(q.weights[i] * h_max(family, q.nodes[i]));
    }
    return s.value();
}

struct PSOResult {
    std::vector<double> x;
    double value = -std::numeric_limits<double>::infinity();
    /// Best value so far after each iteration, restarts concatenated.
    std::vector<double> trace;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    return std::mt19937_64(seq);
}

}  // namespace detail

/// Global-best particle swarm maximization on the box [lo, hi]^dim.
/// `project` maps a clamped position onto the feasible set; `anchors` are
/// placed as the first particles of the first restart.
inline PSOResult pso_maximize(const std::function<double(const std::vector<double> &)> &f, int dim, double lo,
                              double hi, const PSOConfig &cfg,
                              const std::function<void(std::vector<double> &)> &project = {},
                              const std::vector<std::vector<double>> &anchors = {}) {
    cfg.validate();
    if (dim < 1) {
        throw std::invalid_argument("PSO dimension must be >= 1");
    }
    const double vmax = 0.5 * (hi - lo);
    const auto S = static_cast<std::size_t>(cfg.swarm);
    PSOResult best;
    best.trace.reserve(static_cast<std::size_t>(cfg.iters) * static_cast<std::size_t>(cfg.restarts));

    for (int rs = 0; rs < cfg.restarts; ++rs) {
        std::mt19937_64 rng = detail::restart_engine(cfg.seed, rs);
        std::vector<std::vector<double>> x(S, std::vector<double>(static_cast<std::size_t>(dim)));
        std::vector<std::vector<double>> v = x;
        for (std::size_t p = 0; p < S; ++p) {
            for (int d = 0; d < dim; ++d) {
                x[p][static_cast<std::size_t>(d)] = lo + (hi - lo) * detail::unit_uniform(rng);
                v[p][static_cast<std::size_t>(d)] = vmax * (2.0 * detail::unit_uniform(rng) - 1.0);
            }
            if (rs == 0 && p < anchors.size()) {
                if (anchors[p].size() != static_cast<std::size_t>(dim)) {
                    throw std::invalid_argument("PSO anchor has the wrong dimension");
                }
                x[p] = anchors[p];
            }
            if (project) {
                project(x[p]);
            }
        }
        std::vector<double> fx(S);
        auto evaluate = [&] {
            parallel_for(S, cfg.threads, [&](std::size_t p) {
                const double val = f(x[p]);
                fx[p] = std::isnan(val) ? -std::numeric_limits<double>::infinity() : val;
            });
        };
        evaluate();
        std::vector<std::vector<double>> pbest = x;
        std::vector<double> pval = fx;
        std::size_t g = 0;
        for (std::size_t p = 1; p < S; ++p) {
            if (pval[p] > pval[g]) {
                g = p;
            }
        }
        std::vector<double> gbest = pbest[g];
        double gval = pval[g];

        for (int it = 0; it < cfg.iters; ++it) {
            for (std::size_t p = 0; p < S; ++p) {
                for (std::size_t d = 0; d < static_cast<std::size_t>(dim); ++d) {
                    const double r1 = detail::unit_uniform(rng), r2 = detail::unit_uniform(rng);
                    double vel = cfg.inertia * v[p][d] + cfg.cognitive * r1 * (pbest[p][d] - x[p][d]) +
                                 cfg.social * r2 * (gbest[d] - x[p][d]);
                    vel = std::clamp(vel, -vmax, vmax);
                    v[p][d] = vel;
                    x[p][d] = std::clamp(x[p][d] + vel, lo, hi);
                }
                if (project) {
                    project(x[p]);
                }
            }
            evaluate();
            for (std::size_t p = 0; p < S; ++p) {
                if (fx[p] > pval[p]) {
                    pval[p] = fx[p];
                    pbest[p] = x[p];
                    if (fx[p] > gval) {
                        gval = fx[p];
                        gbest = x[p];
                    }
                }
            }
            if (gval > best.value) {
                best.value = gval;
                best.x = gbest;
            }
            best.trace.push_back(best.value);
        }
    }
    return best;
}

struct SchemeOneResult {
    std::vector<double> e_opt;
    double objective = 0.0;
    std::vector<double> trace;
};

struct SchemeTwoResult {
    double g_opt = 1.0;
    std::vector<double> e_of_g;
    double objective = 0.0;
    std::vector<double> trace;
};

/// Scheme 1 on a prepared model. The search runs over the whitened unit
/// sphere; `warm` coefficient vectors, if any, join the initial swarm.
inline SchemeOneResult optimize_e(const ObjectiveModel &model, const PSOConfig &pcfg,
                                  const std::vector<std::vector<double>> &warm = {}) {
    const int dim = model.N() + 1;
    SchemeOneResult out;
    if (dim == 1) {
        out.e_opt = {1.0};
        out.objective = model.value(out.e_opt);
        out.trace.assign(static_cast<std::size_t>(pcfg.iters) * static_cast<std::size_t>(pcfg.restarts), out.objective);
        return out;
    }
    const auto [lo, hi] = pcfg.bounds.value_or(std::pair{-1.0, 1.0});
    auto project = [](std::vector<double> &u) {
        double n = 0.0;
        for (double v : u) {
            n += v * v;
        }
        n = std::sqrt(n);
        if (n > 0.0) {
            for (double &v : u) {
                v /= n;
            }
        } else {
            u[0] = 1.0;
        }
    };
    auto f = [&](const std::vector<double> &u) {
        return model.value_search(Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size())));
    };
    std::vector<std::vector<double>> anchors;
    for (const auto &e : warm) {
        const Eigen::VectorXd u = model.to_search(e).normalized();
        anchors.emplace_back(u.data(), u.data() + u.size());
    }
    const PSOResult r = pso_maximize(f, dim, lo, hi, pcfg, project, anchors);
    out.e_opt = model.from_search(Eigen::Map<const Eigen::VectorXd>(r.x.data(), dim));
    out.objective = model.value(out.e_opt);
    out.trace = r.trace;
    return out;
}

inline SchemeOneResult optimize_e(int N, const GaussianState &base, bool dagger, const ObjectiveConfig &ocfg,
                                  const PSOConfig &pcfg, PrecisionPolicy policy = {}) {
    const ObjectiveModel model(base, N, dagger, ocfg, policy, pcfg.threads);
    return optimize_e(model, pcfg);
}

inline SchemeOneResult optimize_e(int N, const SqueezingParam &r, const ObjectiveConfig &ocfg = {},
                                  const PSOConfig &pcfg = {}, PrecisionPolicy policy = {}) {
    return optimize_e(N, tmsv(r), true, ocfg, pcfg, policy);
}

/// Scheme 2: coefficients from the truncated amplifier expansion, searched
/// over g in [1, g_max] by default. The lower bound is the first particle,
/// so a flat objective returns it.
inline SchemeTwoResult optimize_g(const ObjectiveModel &model, const SqueezingParam &r, const PSOConfig &pcfg) {
    const int N = model.N();
    const auto [lo, hi] = pcfg.bounds.value_or(std::pair{1.0, nla_gain_limit(r)});
    auto f = [&](const std::vector<double> &g) { return model.value(nla_coefficients(g[0], N, r)); };
    const PSOResult res = pso_maximize(f, 1, lo, hi, pcfg, {}, {{lo}});
    SchemeTwoResult out;
    out.g_opt = res.x[0];
    out.e_of_g = nla_coefficients(out.g_opt, N, r);
    out.objective = model.value(out.e_of_g);
    out.trace = res.trace;
    return out;
}

inline SchemeTwoResult optimize_g(int N, const SqueezingParam &r, const ObjectiveConfig &ocfg = {},
                                  const PSOConfig &pcfg = {}, PrecisionPolicy policy = {}) {
    const ObjectiveModel model(tmsv(r), N, true, ocfg, policy, pcfg.threads);
    return optimize_g(model, r, pcfg);
}

}  // namespace pvtele
