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
#include <random>

#include "pvtele/fock_oracle.hpp"
#include "pvtele/hermite.hpp"
#include "pvtele/pv_ops.hpp"
#include "test_support.hpp"

namespace pvtele {
namespace {

using testing::random_cplx;

cplx cf1(const FockState &s, cplx x) {
    const std::array<cplx, 1> xi{x};
    return oracle_cf(s, xi);
}
cplx cf2(const FockState &s, cplx a, cplx b) {
    const std::array<cplx, 2> xi{a, b};
    return oracle_cf(s, xi);
}
cplx gcf2(const GaussianState &s, cplx a, cplx b) {
    const std::array<cplx, 2> xi{a, b};
    return gaussian_cf(s, xi);
}

TEST(FockOperators, LadderAndDisplacementBasics) {
    const FockOperatorSet ops(30);
    EXPECT_NEAR(ops.a()(3, 4), 2.0, 1e-15);
    const cplx xi(0.8, -1.1);
    const Eigen::MatrixXcd D = ops.displacement(xi);
    EXPECT_NEAR(std::abs(D(0, 0) - std::exp(-0.5 * std::norm(xi))), 0.0, 1e-15);
    // Column 0 holds coherent amplitudes.
    for (int m = 0; m < 30; ++m) {
        const cplx want = std::exp(-0.5 * std::norm(xi)) * std::pow(xi, m) / std::sqrt(factorial(m));
        EXPECT_NEAR(std::abs(D(m, 0) - want), 0.0, 1e-14);
    }
    EXPECT_EQ(ops.displacement(0.0), Eigen::MatrixXcd::Identity(30, 30));
    EXPECT_THROW(FockOperatorSet(1), std::invalid_argument);
}

TEST(FockOperators, DisplacementIsUnitaryOnLowBlock) {
    const int D = 120;
    const FockOperatorSet ops(D);
    for (cplx xi : {cplx(1.5, 0.5), cplx(-0.3, 2.8)}) {
        const Eigen::MatrixXcd P = ops.displacement(xi) * ops.displacement(-xi);
        const Eigen::MatrixXcd blk = P.topLeftCorner(20, 20);
        EXPECT_LE((blk - Eigen::MatrixXcd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-10);
        // D(xi)^dag = D(-xi)
        EXPECT_LE((ops.displacement(xi).adjoint() - ops.displacement(-xi)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(FockOracle, SimpleCfs) {
    std::mt19937_64 rng(21);
    const auto vac = oracle_vacuum(1, 40);
    const auto one = oracle_fock(1, 40);
    for (int i = 0; i < 20; ++i) {
        const cplx x = random_cplx(rng, 3.0);
        const double g = std::exp(-0.5 * std::norm(x));
        EXPECT_NEAR(std::abs(cf1(vac, x) - g), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(cf1(one, x) - g * (1 - std::norm(x))), 0.0, 1e-14);
    }
}

TEST(FockOracle, TmsvAmplitudes) {
    const auto s0 = oracle_tmsv(SqueezingParam(0.0), 10);
    EXPECT_EQ(s0.branches()[0](0, 0), cplx(1.0));
    EXPECT_NEAR(s0.branches()[0].squaredNorm(), 1.0, 1e-15);
    const auto s = oracle_tmsv(SqueezingParam::from_lambda(0.5), 60);
    for (int n = 0; n < 60; ++n) {
        EXPECT_NEAR(s.branches()[0](n, n).real(), std::sqrt(0.75) * std::pow(0.5, n), 1e-15);
    }
    EXPECT_NEAR(s.trace(), 1.0, 1e-12);
    EXPECT_THROW(oracle_tmsv(SqueezingParam(1.2), 20), TruncationError);
}

TEST(FockOracle, TmsvCfMatchesGaussian) {
    std::mt19937_64 rng(22);
    for (double r : {0.3, 0.7, 1.2}) {
        const SqueezingParam sq(r);
        const int D = adequate_dimension([&](int d) { return oracle_tmsv(sq, d); });
        const auto s = oracle_tmsv(sq, D);
        for (int i = 0; i < 10; ++i) {
            const cplx a = random_cplx(rng, 3.0), b = random_cplx(rng, 3.0);
            EXPECT_NEAR(std::abs(cf2(s, a, b) - gcf2(tmsv(sq), a, b)), 0.0, 1e-9) << "r=" << r << " D=" << D;
        }
    }
}

TEST(FockOracle, SqueezeOperatorReproducesTmsv) {
    const SqueezingParam sq(0.6);
    const int D = 60;
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(D, D);
    vac(0, 0) = 1.0;
    const Eigen::MatrixXcd psi = oracle_squeeze(vac, sq.r());
    EXPECT_LE((psi - oracle_tmsv(sq, D).branches()[0]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(FockOracle, TmscCfAndSwappedOrder) {
    std::mt19937_64 rng(23);
    const SqueezingParam sq(0.5);
    const cplx z1(0.4, -0.2), z2(0.3, 0.5);
    const int D = 60;
    const auto s = oracle_tmsc(sq, z1, z2, D);
    const auto g = tmsc(sq, z1, z2);
    // Swapped order: S(r) D1(z1~) D2(z2~)|0,0>.
    const auto [t1, t2] = tmsc_swapped_displacements(sq, z1, z2);
    const FockOperatorSet ops(D);
    const Eigen::MatrixXcd coh = ops.displacement(t1).col(0) * ops.displacement(t2).col(0).transpose();
    const FockState swapped(2, D, {oracle_squeeze(coh, sq.r())});
    for (int i = 0; i < 10; ++i) {
        const cplx a = random_cplx(rng, 2.5), b = random_cplx(rng, 2.5);
        EXPECT_NEAR(std::abs(cf2(s, a, b) - gcf2(g, a, b)), 0.0, 1e-9);
        EXPECT_NEAR(std::abs(cf2(swapped, a, b) - gcf2(g, a, b)), 0.0, 1e-9);
    }
}

TEST(FockOracle, TmstMatchesGaussianAndZeroTemperature) {
    std::mt19937_64 rng(24);
    const SqueezingParam sq(0.4);
    const auto zero = oracle_tmst(sq, 0.0, 50);
    const auto ref = oracle_tmsv(sq, 50);
    const auto th = oracle_tmst(sq, 0.3, 70);
    EXPECT_NEAR(th.trace(), 1.0, 1e-10);
    for (int i = 0; i < 8; ++i) {
        const cplx a = random_cplx(rng, 2.5), b = random_cplx(rng, 2.5);
        EXPECT_NEAR(std::abs(cf2(zero, a, b) - cf2(ref, a, b)), 0.0, 1e-10);
        EXPECT_NEAR(std::abs(cf2(th, a, b) - gcf2(tmst(sq, 0.3), a, b)), 0.0, 1e-9);
    }
}

TEST(FockOracle, ApplyBasics) {
    EXPECT_THROW(oracle_apply(oracle_vacuum(1, 10), PVSpec({{-1, 1}})), std::invalid_argument);
    const auto one = oracle_apply(oracle_vacuum(1, 10), PVSpec({{1, 1}}));
    EXPECT_NEAR(std::abs(one.branches()[0](1, 0)), 1.0, 1e-15);
    const auto sq = SqueezingParam::from_db(8.0);
    const auto sub = oracle_apply(oracle_tmsv(sq, 60), PVSpec::subtraction(1, 1));
    const double sh = std::sinh(sq.r());
    EXPECT_NEAR(sub.weight(), sq.V() * sh * sh, 1e-8);
}

TEST(FockOracle, LossChannel) {
    const auto one = oracle_fock(1, 20);
    const auto same = oracle_loss(one, ChannelParams(1.0, 1.0));
    EXPECT_NEAR(std::abs(cf1(same, cplx(0.7, 0.2)) - cf1(one, cplx(0.7, 0.2))), 0.0, 1e-15);
    const auto lossy = oracle_loss(one, ChannelParams(0.6, 1.0));
    EXPECT_NEAR(lossy.trace(), 1.0, 1e-12);
    EXPECT_NEAR(lossy.mean_photons(0), 0.6, 1e-12);

    std::mt19937_64 rng(25);
    const SqueezingParam sq(0.5);
    const ChannelParams ch(0.9, 0.5);
    const auto l = oracle_loss(oracle_tmsv(sq, 40), ch);
    EXPECT_NEAR(l.trace(), 1.0, 1e-10);
    const auto g = apply_loss(tmsv(sq), ch);
    for (int i = 0; i < 5; ++i) {
        const cplx a = random_cplx(rng, 2.5), b = random_cplx(rng, 2.5);
        EXPECT_NEAR(std::abs(cf2(l, a, b) - gcf2(g, a, b)), 0.0, 1e-8);
    }
}

TEST(FockOracle, TransferIdentity) {
    // a2^dag |TMSV> / sqrt(V+1) = a1 |TMSV> / sqrt(V-1)
    const auto sq = SqueezingParam::from_db(8.0);
    const int D = 60;
    const FockOperatorSet ops(D);
    const Eigen::MatrixXcd psi = oracle_tmsv(sq, D).branches()[0];
    const Eigen::MatrixXcd lhs = psi * ops.adag().transpose().cast<cplx>() / std::sqrt(sq.V() + 1);
    const Eigen::MatrixXcd rhs = ops.a().cast<cplx>() * psi / std::sqrt(sq.V() - 1);
    EXPECT_LE((lhs - rhs).norm(), 1e-9);
}

TEST(FockOracle, NumberOperatorStirlingExpansion) {
    const int D = 30;
    const FockOperatorSet ops(D);
    const Eigen::MatrixXd num = ops.adag() * ops.a();
    for (int n = 1; n <= 6; ++n) {
        Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(D, D);
        for (int i = 0; i < n; ++i) {
            lhs = (lhs * num).eval();
        }
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(D, D);
        Eigen::MatrixXd ad = Eigen::MatrixXd::Identity(D, D), a = Eigen::MatrixXd::Identity(D, D);
        for (int m = 1; m <= n; ++m) {
            ad = (ad * ops.adag()).eval();
            a = (a * ops.a()).eval();
            rhs += stirling2(n, m).convert_to<double>() * ad * a;
        }
        const int b = D - n;
        EXPECT_LE((lhs - rhs).topLeftCorner(b, b).cwiseAbs().maxCoeff(), 1e-9 * lhs.cwiseAbs().maxCoeff());
    }
}

TEST(FockOracle, PhotonVariedMatchesAnalytic) {
    const auto sq = SqueezingParam::from_db(8.0);
    for (const auto &spec : {PVSpec::subtraction(1, 1), PVSpec::addition(2, 1), PVSpec({{-1, 1}, {1, 2}})}) {
        const int D = adequate_dimension([&](int d) { return oracle_apply(oracle_tmsv(sq, d), spec); });
        const auto o = oracle_apply(oracle_tmsv(sq, D), spec);
        const PhotonVariedState a(tmsv(sq), spec);
        EXPECT_NEAR(o.weight(), a.norm(), 1e-8 * a.norm());
        for (double rho : {0.5, 1.5, 3.0}) {
            const cplx xi = std::polar(rho, 0.3);
            const std::array<cplx, 2> p{xi, std::conj(xi)};
            EXPECT_NEAR(std::abs(oracle_cf(o, p) - a.cf(p)), 0.0, 1e-8);
            EXPECT_NEAR(oracle_cf(o, p).real() / oracle_cf(oracle_tmsv(sq, D), p).real(), response_ratio(a, xi), 1e-8);
        }
    }
}

TEST(FockOracle, GeneralizedOnTmscAndTmst) {
    const auto sq = SqueezingParam(0.6);
    const GeneralizedPVSpec spec({0.7, -0.4, 0.3}, true);
    const GeneralizedPVSpec plain({0.7, -0.4, 0.3}, false);
    const ResourceDescriptor dc{ResourceFamily::tmsc, sq.r_db(), 0.5, 0.5, 0.0, std::nullopt};
    const ResourceDescriptor dt{ResourceFamily::tmst, sq.r_db(), 0.0, 0.0, 0.2, std::nullopt};
    for (const auto &d : {dc, dt}) {
        for (const auto &sp : {spec, plain}) {
            const auto o = oracle_apply(oracle_state(d, 70), sp);
            const GeneralizedPVState a(d.state(), sp);
            for (double rho : {0.5, 1.5, 2.5}) {
                const cplx xi = std::polar(rho, 0.8);
                const std::array<cplx, 2> p{xi, std::conj(xi)};
                EXPECT_NEAR(std::abs(oracle_cf(o, p) - a.cf(p)), 0.0, 1e-8) << to_string(d.family);
            }
        }
    }
}

TEST(FockOracle, TmstBranchesDiffer) {
    const ResourceDescriptor d{ResourceFamily::tmst, 4.0, 0.0, 0.0, 0.3, std::nullopt};
    const std::vector<double> e{0.8, 0.5, 0.3};
    const int D = adequate_dimension([&](int n) { return oracle_apply(oracle_state(d, n), GeneralizedPVSpec(e, true)); },
                                     40, 10, 1e-11);
    const auto base = oracle_state(d, D);
    const auto od = oracle_apply(base, GeneralizedPVSpec(e, true));
    const auto on = oracle_apply(base, GeneralizedPVSpec(e, false));
    const cplx xi(1.0, 0.0);
    const std::array<cplx, 2> p{xi, std::conj(xi)};
    const double hd = (oracle_cf(od, p) / oracle_cf(base, p)).real();
    const double hn = (oracle_cf(on, p) / oracle_cf(base, p)).real();
    EXPECT_GT(std::abs(hd - hn), 1e-3);
    EXPECT_NEAR(hd, response_ratio(GeneralizedPVState(d.state(), GeneralizedPVSpec(e, true)), xi), 1e-8);
    EXPECT_NEAR(hn, response_ratio(GeneralizedPVState(d.state(), GeneralizedPVSpec(e, false)), xi), 1e-8);
}

}  // namespace
}  // namespace pvtele
