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

#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "pvtele/fock_oracle.hpp"
#include "pvtele/quadrature.hpp"
#include "pvtele/teleport.hpp"

namespace pvtele {
namespace {

const SqueezingParam k8dB = SqueezingParam::from_db(8.0);

TEST(Quadrature, IntegratesPolynomialsExactly) {
    for (int n : {1, 2, 5, 16, 33}) {
        const QuadratureRule &q = gauss_legendre(n);
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                s += q.weights[i] * std::pow(q.nodes[i], k);
            }
            const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
            EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " k=" << k;
        }
    }
}

TEST(Quadrature, GaussianIntegralOnMappedInterval) {
    const QuadratureRule q = gauss_legendre(200, 0.0, 8.0);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        s += q.weights[i] * std::exp(-q.nodes[i] * q.nodes[i]);
    }
    EXPECT_NEAR(s, std::sqrt(M_PI) / 2, 1e-14);
    EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(InputState, CfValues) {
    const cplx xi(0.3, -0.4);
    EXPECT_NEAR(std::abs(InputState::coherent({1.0, 0.5}).cf(0.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(InputState::fock(1).cf(xi) - std::exp(-0.125) * (1 - 0.25)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(InputState::squeezed_vacuum(0.0).cf(xi) - std::exp(-0.125)), 0.0, 1e-15);
    // Fock CF against the oracle at n = 3.
    const FockState f = oracle_fock(3, 30);
    const std::array<cplx, 1> p{xi};
    EXPECT_NEAR(std::abs(InputState::fock(3).cf(xi) - oracle_cf(f, p)), 0.0, 1e-12);
    EXPECT_TRUE(InputState::fock(2).radial());
    EXPECT_FALSE(InputState::squeezed_vacuum(0.5).radial());
}

TEST(InputState, CustomValidation) {
    EXPECT_THROW(InputState::custom([](cplx) { return cplx(2.0); }, true), std::invalid_argument);
    EXPECT_THROW(InputState::custom([](cplx xi) { return std::exp(std::norm(xi)); }, true), std::invalid_argument);
    const InputState ok = InputState::custom([](cplx xi) { return std::exp(-0.5 * std::norm(xi)); }, true);
    EXPECT_DOUBLE_EQ(fidelity(Resource::ideal(), ok), 1.0);
}

TEST(Teleport, ResponseFunctionTmsv) {
    const Resource res(tmsv(k8dB));
    EXPECT_NEAR(std::abs(response_function(res, 0.0) - 1.0), 0.0, 1e-15);
    for (double x : {0.3, 1.0, 2.5}) {
        const cplx xi = std::polar(x, 0.9);
        EXPECT_NEAR(std::abs(response_function(res, xi) - std::exp(-k8dB.residual_noise() * x * x)), 0.0, 1e-13);
    }
    const Resource flat(tmsv(SqueezingParam(10.0)));
    EXPECT_NEAR(response_function(flat, 1.0).real(), 1.0, 1e-8);
    EXPECT_TRUE(res.radial());
    EXPECT_FALSE(Resource(tmsc(k8dB, 0.5, 0.5)).radial());
    EXPECT_TRUE(Resource(tmst(k8dB, 0.5), ChannelParams{0.9, 0.5}).radial());
}

TEST(Teleport, OutputCfProducts) {
    const cplx alpha(0.7, -0.2), xi(0.4, 0.9);
    const InputState in = InputState::coherent(alpha);
    const Resource bare(tmsv(k8dB));
    const cplx expect = std::exp(-k8dB.residual_noise() * std::norm(xi)) *
                        std::exp(-0.5 * std::norm(xi) + xi * std::conj(alpha) - std::conj(xi) * alpha);
    EXPECT_NEAR(std::abs(output_cf(bare, in, xi) - expect), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(output_cf(Resource::ideal(), in, xi) - in.cf(xi)), 0.0, 0.0);

    const PhotonVariedState pv(tmsv(k8dB), PVSpec::subtraction(1, 1));
    const Resource res(pv);
    const cplx lhs = output_cf(res, in, xi);
    const cplx rhs = response_ratio(pv, xi) * response_function(bare, xi) * in.cf(xi);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
}

TEST(Teleport, FidelityClosedForm) {
    for (double db : {0.0, 4.0, 8.0, 12.0}) {
        const SqueezingParam r = SqueezingParam::from_db(db);
        const double F = fidelity(Resource(tmsv(r)), InputState::coherent({0.4, 0.3}));
        EXPECT_NEAR(F, 1.0 / (1.0 + r.residual_noise()), 1e-6) << db;
    }
    EXPECT_NEAR(fidelity(Resource(tmsv(k8dB)), InputState::coherent(0.0)), 1.0 / (1.0 + std::pow(10.0, -0.8)), 1e-6);
}

TEST(Teleport, IdentityChannelIsExact) {
    const Resource ideal = Resource::ideal();
    EXPECT_NEAR(fidelity(ideal, InputState::coherent({1.0, -0.5})), 1.0, 1e-9);
    for (double s : {0.0, 0.5, 1.0, 1.5}) {
        const FidelityResult f = fidelity_detail(ideal, InputState::squeezed_vacuum(s));
        EXPECT_NEAR(f.raw, 1.0, 1e-9) << "s=" << s;
    }
    for (int n = 0; n <= 3; ++n) {
        EXPECT_NEAR(fidelity_detail(ideal, InputState::fock(n)).raw, 1.0, 1e-9) << "n=" << n;
    }
}

TEST(Teleport, FockInputMatchesOracle) {
    const SqueezingParam r(0.7);
    const FockState res = oracle_tmsv(r, 40);
    const FockState one = oracle_fock(1, 40);
    EXPECT_NEAR(fidelity(Resource(tmsv(r)), InputState::fock(1)), oracle_fidelity(res, one, 6.0, 0.2), 1e-6);

    const PVSpec spec = PVSpec::subtraction(1, 1);
    const FockState pv = oracle_apply(res, spec);
    EXPECT_NEAR(fidelity(Resource(PhotonVariedState(tmsv(r), spec)), InputState::fock(1)), oracle_fidelity(pv, one, 6.0, 0.2),
                1e-6);
}

TEST(Teleport, NonRadialResourceMatchesOracle) {
    const SqueezingParam r(0.5);
    const FockState res = oracle_tmsc(r, 0.3, 0.3, 40);
    const FockState vac = oracle_vacuum(1, 40);
    const Resource analytic(tmsc(r, 0.3, 0.3));
    const FidelityResult f = fidelity_detail(analytic, InputState::coherent(0.0));
    EXPECT_FALSE(f.radial_path);
    EXPECT_NEAR(f.value, oracle_fidelity(res, vac, 6.0, 0.2), 1e-6);
}

TEST(Teleport, SubtractionImprovesFidelity) {
    const Resource bare(tmsv(k8dB));
    for (int n = 1; n <= 3; ++n) {
        const Resource pv(PhotonVariedState(tmsv(k8dB), PVSpec::subtraction(n, n)));
        for (const InputState &in : {InputState::coherent(0.5), InputState::fock(1), InputState::fock(2)}) {
            const double Fb = fidelity(bare, in), Fp = fidelity(pv, in);
            EXPECT_GT(Fp, Fb) << "n=" << n << " input=" << in.label();
            EXPECT_LE(Fp, 1.0);
            EXPECT_GE(Fb, 0.0);
        }
    }
}

TEST(Teleport, FidelityThreadInvariant) {
    const Resource pv(PhotonVariedState(tmsv(k8dB), PVSpec::subtraction(1, 1)));
    const InputState in = InputState::squeezed_vacuum(0.4);
    const double a = fidelity(pv, in, {}, 1), b = fidelity(pv, in, {}, 4);
    EXPECT_EQ(a, b);
}

TEST(Teleport, HMax) {
    ResourceDescriptor d;
    EXPECT_DOUBLE_EQ(h_max(d, 0.0), 1.0);
    EXPECT_NEAR(h_max(d, std::polar(1.0, 0.4)), std::exp(std::pow(10.0, -0.8)), 1e-12);
    EXPECT_NEAR(h_max(d, 1.0), 1.1718, 1e-4);
    ResourceDescriptor t = d;
    t.family = ResourceFamily::tmst;
    t.nbar = 0.5;
    for (double x : {0.5, 1.3}) {
        EXPECT_NEAR(h_max(t, x), std::pow(h_max(d, x), 2.0), 1e-12);
    }
}

TEST(Teleport, HPrimeProperties) {
    const PVSpec spec = PVSpec::subtraction(1, 1);
    const PhotonVariedState pv(tmsv(k8dB), spec);
    EXPECT_NEAR(h_prime(k8dB, spec, {0.8, 0.8}, 0.0), 1.0, 1e-14);
    for (double x : {0.2, 1.0, 2.2}) {
        const cplx xi = std::polar(x, 0.3);
        EXPECT_NEAR(h_prime(pv, {1.0, 1.0}, xi), response_ratio(pv, xi), 1e-12);
        EXPECT_NEAR(h_prime(pv, {1 - 1e-6, 1 - 1e-6}, xi), response_ratio(pv, xi), 1e-4);
    }
    for (int i = -15; i <= 15; ++i) {
        for (int j = -15; j <= 15; ++j) {
            if (i == 0 && j == 0) continue;
            EXPECT_GT(h_prime(pv, {0.8, 0.8}, cplx(0.2 * i, 0.2 * j)), 1.0);
        }
    }
    bool below = false;
    for (int i = 0; i < 50 && !below; ++i) {
        for (int j = 0; j < 50 && !below; ++j) {
            const cplx xi(-3.0 + 6.0 * i / 49, -3.0 + 6.0 * j / 49);
            below = h_prime(pv, {0.9, 0.5}, xi) < 1.0;
        }
    }
    EXPECT_TRUE(below);
}

TEST(Teleport, LossyResourceMatchesOracle) {
    const SqueezingParam r(0.6);
    const ChannelParams ch{0.9, 0.5};
    const PVSpec spec = PVSpec::subtraction(1, 1);
    const Resource analytic(PhotonVariedState(tmsv(r), spec), ch);
    const FockState lossy = oracle_loss(oracle_apply(oracle_tmsv(r, 60), spec), ch);
    for (double x : {0.3, 1.1, 2.4}) {
        for (double phi : {0.0, 1.0}) {
            const cplx xi = std::polar(x, phi);
            const std::array<cplx, 2> p{xi, std::conj(xi)};
            EXPECT_NEAR(std::abs(analytic.response(xi) - oracle_cf(lossy, p)), 0.0, 1e-8);
        }
    }
    // Ratio form: lossy PV response over lossy Gaussian response.
    const Resource bare(tmsv(r), ch);
    const cplx xi(0.7, 0.4);
    EXPECT_NEAR(analytic.response(xi).real() / bare.response(xi).real(), h_prime(r, spec, ch, xi), 1e-12);
}

}  // namespace
}  // namespace pvtele
