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

// Multi-index multi-variable Hermite functions.
//
// H_n(x; M) is defined by the generating function
//
//     sum_n  prod_i (u_i^{n_i} / n_i!) H_n(x; M) = exp(u^T M u + x^T u)
//
// for a complex symmetric matrix M. Expanding the exponential factor by
// factor gives a finite sum over the exponents of every monomial
// M_ii u_i^2, 2 M_ij u_i u_j (i < j) and x_i u_i; the diagonal exponent
// n_ii contributes 2 n_ii to the degree of u_i.

#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvtele/numeric.hpp"

namespace pvtele {

inline constexpr int kDefaultDegreeCap = 40;

/// Symmetric matrix M and argument x of H_n(x; M).
class HermiteParams {
   public:
    HermiteParams(Eigen::MatrixXcd M, Eigen::VectorXcd x) : M_(std::move(M)), x_(std::move(x)) {
        if (M_.rows() == 0 || M_.rows() != M_.cols()) {
            throw std::invalid_argument("HermiteParams: M must be a non-empty square matrix");
        }
        if (x_.size() != M_.rows()) {
            throw std::invalid_argument("HermiteParams: x length " + std::to_string(x_.size()) +
                                        " does not match dim " + std::to_string(M_.rows()));
        }
        for (Eigen::Index i = 0; i < M_.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < M_.cols(); ++j) {
                if (M_(i, j) != M_(j, i)) {
                    throw std::invalid_argument("HermiteParams: M is not symmetric");
                }
            }
        }
    }

    int dim() const {
        return static_cast<int>(M_.rows());
    }
    const Eigen::MatrixXcd &M() const {
        return M_;
    }
    const Eigen::VectorXcd &x() const {
        return x_;
    }

   private:
    Eigen::MatrixXcd M_;
    Eigen::VectorXcd x_;
};

struct MultiIndex {
    std::vector<int> indices;

    MultiIndex(std::initializer_list<int> il) : indices(il) {
        check();
    }
    explicit MultiIndex(std::vector<int> v) : indices(std::move(v)) {
        check();
    }

    int size() const {
        return static_cast<int>(indices.size());
    }
    int total() const {
        return std::accumulate(indices.begin(), indices.end(), 0);
    }
    int operator[](int i) const {
        return indices[static_cast<std::size_t>(i)];
    }

   private:
    void check() const {
        for (int n : indices) {
            if (n < 0) {
                throw std::invalid_argument("MultiIndex entries must be non-negative");
            }
        }
    }
};

namespace detail {

inline void check_degree(int total, int cap) {
    if (total > cap) {
        throw std::domain_error("Hermite total degree " + std::to_string(total) + " exceeds the configured cap " +
                                std::to_string(cap));
    }
}

struct HermitePair {
    int i;
    int j;
    cplx coef;  // M_ii on the diagonal, 2 M_ij off it
};

struct PairLayout {
    std::vector<HermitePair> pairs;
    std::vector<int> last_use;  // last pair index touching each variable, -1 if none
    std::vector<char> x_zero;
};

inline PairLayout make_layout(const HermiteParams &p) {
    PairLayout L;
    const int d = p.dim();
    L.last_use.assign(static_cast<std::size_t>(d), -1);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            cplx c = (i == j) ? p.M()(i, i) : 2.0 * p.M()(i, j);
            if (c != cplx(0.0)) {
                L.last_use[static_cast<std::size_t>(i)] = static_cast<int>(L.pairs.size());
                L.last_use[static_cast<std::size_t>(j)] = static_cast<int>(L.pairs.size());
                L.pairs.push_back({i, j, c});
            }
        }
    }
    for (int i = 0; i < d; ++i) {
        L.x_zero.push_back(p.x()(i) == cplx(0.0) ? 1 : 0);
    }
    return L;
}

// Depth-first walk over all exponent assignments {n_ij} with every q_i >= 0,
// in lexicographic order. Sink::push(depth, count) is called on descent and
// Sink::leaf(q) with the remaining x exponents.
template <class Sink>
void walk_pairs(const PairLayout &L, std::vector<int> &rem, Sink &sink, std::size_t depth = 0) {
    if (depth == L.pairs.size()) {
        sink.leaf(rem);
        return;
    }
    const HermitePair &p = L.pairs[depth];
    const auto i = static_cast<std::size_t>(p.i);
    const auto j = static_cast<std::size_t>(p.j);
    const bool diag = p.i == p.j;
    const int max_count = diag ? rem[i] / 2 : std::min(rem[i], rem[j]);
    const int d = static_cast<int>(depth);
    for (int c = 0; c <= max_count; ++c) {
        rem[i] -= diag ? 2 * c : c;
        if (!diag) {
            rem[j] -= c;
        }
        // A vanishing x_i forces q_i = 0 once its last pair has been assigned.
        bool dead = (L.x_zero[i] && L.last_use[i] == d && rem[i] != 0) ||
                    (!diag && L.x_zero[j] && L.last_use[j] == d && rem[j] != 0);
        if (!dead) {
            sink.push(depth, c);
            walk_pairs(L, rem, sink, depth + 1);
        }
        rem[i] += diag ? 2 * c : c;
        if (!diag) {
            rem[j] += c;
        }
    }
}

// Table of z^k / k! for k = 0..kmax, with 0^0 = 1.
inline std::vector<cplx> scaled_powers(cplx z, int kmax) {
    std::vector<cplx> t(static_cast<std::size_t>(kmax) + 1);
    t[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k) - 1] * z / static_cast<double>(k);
    }
    return t;
}

inline std::vector<BigComplex> scaled_powers_big(cplx z, int kmax, mpfr_prec_t prec) {
    std::vector<BigComplex> t;
    t.reserve(static_cast<std::size_t>(kmax) + 1);
    t.emplace_back(cplx(1.0), prec);
    BigComplex zb(z, prec);
    BigReal scratch(prec);
    for (int k = 1; k <= kmax; ++k) {
        BigComplex next(prec);
        next.set_product(t.back(), zb, scratch);
        next.re.div_ui(static_cast<unsigned long>(k));
        next.im.div_ui(static_cast<unsigned long>(k));
        t.push_back(std::move(next));
    }
    return t;
}

class MachineSink {
   public:
    MachineSink(const PairLayout &L, const HermiteParams &p, const MultiIndex &idx) {
        const int d = p.dim();
        double pre = 1.0;
        for (int i = 0; i < d; ++i) {
            pre *= factorial(idx[i]);
            xpow_.push_back(scaled_powers(p.x()(i), idx[i]));
        }
        for (const auto &pair : L.pairs) {
            cpow_.push_back(scaled_powers(pair.coef, idx[pair.i]));
        }
        partial_.assign(L.pairs.size() + 1, cplx(0.0));
        partial_[0] = pre;
    }

    void push(std::size_t depth, int count) {
        partial_[depth + 1] = partial_[depth] * cpow_[depth][static_cast<std::size_t>(count)];
    }

    void leaf(const std::vector<int> &q) {
        cplx t = partial_.back();
        for (std::size_t i = 0; i < q.size(); ++i) {
            t *= xpow_[i][static_cast<std::size_t>(q[i])];
        }
        if (!is_finite(t)) {
            throw PrecisionError("non-finite Hermite term in machine precision");
        }
        if (t != cplx(0.0)) {
            terms_.push_back(t);
        }
    }

    cplx result() {
        cplx r = sorted_sum(terms_);
        if (!is_finite(r)) {
            throw PrecisionError("non-finite Hermite sum in machine precision");
        }
        return r;
    }

   private:
    std::vector<std::vector<cplx>> xpow_;
    std::vector<std::vector<cplx>> cpow_;
    std::vector<cplx> partial_;
    std::vector<cplx> terms_;
};

class ExtendedSink {
   public:
    ExtendedSink(const PairLayout &L, const HermiteParams &p, const MultiIndex &idx, mpfr_prec_t prec)
        : acc_(prec), tmp_a_(prec), tmp_b_(prec), scratch_(prec) {
        const int d = p.dim();
        BigReal pre(1.0, prec);
        for (int i = 0; i < d; ++i) {
            for (int k = 2; k <= idx[i]; ++k) {
                mpfr_mul_ui(pre.get(), pre.get(), static_cast<unsigned long>(k), MPFR_RNDN);
            }
            xpow_.push_back(scaled_powers_big(p.x()(i), idx[i], prec));
        }
        for (const auto &pair : L.pairs) {
            cpow_.push_back(scaled_powers_big(pair.coef, idx[pair.i], prec));
        }
        for (std::size_t k = 0; k <= L.pairs.size(); ++k) {
            partial_.emplace_back(prec);
        }
        partial_[0].re.set(pre);
    }

    void push(std::size_t depth, int count) {
        partial_[depth + 1].set_product(partial_[depth], cpow_[depth][static_cast<std::size_t>(count)], scratch_);
    }

    void leaf(const std::vector<int> &q) {
        BigComplex *cur = &partial_.back();
        BigComplex *out = &tmp_a_;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (q[i] == 0) {
                continue;
            }
            out->set_product(*cur, xpow_[i][static_cast<std::size_t>(q[i])], scratch_);
            cur = out;
            out = (out == &tmp_a_) ? &tmp_b_ : &tmp_a_;
        }
        acc_.add(*cur);
    }

    cplx result() const {
        cplx r = acc_.to_cplx();
        if (!is_finite(r)) {
            throw NumericalError("Hermite sum overflows double range even in extended precision");
        }
        return r;
    }

   private:
    std::vector<std::vector<BigComplex>> xpow_;
    std::vector<std::vector<BigComplex>> cpow_;
    std::vector<BigComplex> partial_;
    BigComplex acc_, tmp_a_, tmp_b_;
    BigReal scratch_;
};

}  // namespace detail

/// H_{n_1..n_dim}(x; M) by exhaustive enumeration of the generating-function
/// expansion. The all-zero index returns exactly 1.
inline cplx hermite_general(const HermiteParams &params, const MultiIndex &idx,
                            const PrecisionPolicy &policy = PrecisionPolicy{}, int degree_cap = kDefaultDegreeCap) {
    if (idx.size() != params.dim()) {
        throw std::invalid_argument("MultiIndex length " + std::to_string(idx.size()) + " does not match dim " +
                                    std::to_string(params.dim()));
    }
    policy.validate();
    const int total = idx.total();
    detail::check_degree(total, degree_cap);
    if (total == 0) {
        return 1.0;
    }
    const detail::PairLayout L = detail::make_layout(params);
    for (int i = 0; i < params.dim(); ++i) {
        if (L.last_use[static_cast<std::size_t>(i)] < 0 && L.x_zero[static_cast<std::size_t>(i)] && idx[i] > 0) {
            return 0.0;
        }
    }
    std::vector<int> rem = idx.indices;
    if (policy.use_extended(total)) {
        detail::ExtendedSink sink(L, params, idx, static_cast<mpfr_prec_t>(policy.mantissa_bits));
        detail::walk_pairs(L, rem, sink);
        return sink.result();
    }
    detail::MachineSink sink(L, params, idx);
    detail::walk_pairs(L, rem, sink);
    return sink.result();
}

/// Pair couplings of the two-mode kernel: A links variables (1,2), B links
/// (3,4), C links (1,3) and (2,4). These are the 2 M_ij entries of the
/// Hermite matrix, so H depends on A, B, C exactly as on 2 M_ij.
struct TwoModeCoupling {
    double A;
    double B;
    double C;
};

/// Real scales of the argument x = (s1 w, s2 v, s3 v, s4 w), where v plays
/// the role of xi and w that of conj(xi).
struct TwoModeScales {
    double s1;
    double s2;
    double s3;
    double s4;

    /// Scales on the teleportation diagonal of an unperturbed resource.
    static TwoModeScales diagonal(const TwoModeCoupling &c) {
        return {-(c.A + c.C), -(c.A + c.C), -(c.B + c.C), -(c.B + c.C)};
    }
};

/// The dim-4 problem that the two-mode kernel evaluates.
inline HermiteParams two_mode_equivalent_params(const TwoModeCoupling &c, const TwoModeScales &s, cplx v, cplx w) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(4, 4);
    M(0, 1) = M(1, 0) = c.A / 2.0;
    M(2, 3) = M(3, 2) = c.B / 2.0;
    M(0, 2) = M(2, 0) = c.C / 2.0;
    M(1, 3) = M(3, 1) = c.C / 2.0;
    Eigen::VectorXcd x(4);
    x << s.s1 * w, s.s2 * v, s.s3 * v, s.s4 * w;
    return HermiteParams(std::move(M), std::move(x));
}

namespace detail {

// Real coefficient of v^a w^b, bucketed by (a, b) with a = q2 + q3 and
// b = q1 + q4, summed over the four pair exponents (n5, n6, n7, n8).
template <class Emit>
void two_mode_terms(const TwoModeCoupling &c, const TwoModeScales &s, const std::array<int, 4> &n, Emit &&emit) {
    const int n1 = n[0], n2 = n[1], n3 = n[2], n4 = n[3];
    for (int n5 = 0; n5 <= std::min(n1, n2); ++n5) {
        if (n5 > 0 && c.A == 0.0) {
            break;
        }
        for (int n6 = 0; n6 <= std::min(n3, n4); ++n6) {
            if (n6 > 0 && c.B == 0.0) {
                break;
            }
            for (int n7 = 0; n7 <= std::min(n1 - n5, n3 - n6); ++n7) {
                for (int n8 = 0; n8 <= std::min(n2 - n5, n4 - n6); ++n8) {
                    if ((n7 + n8) > 0 && c.C == 0.0) {
                        break;
                    }
                    std::array<int, 4> q{n1 - n5 - n7, n2 - n5 - n8, n3 - n6 - n7, n4 - n6 - n8};
                    std::array<int, 4> pair{n5, n6, n7, n8};
                    emit(pair, q);
                }
            }
        }
    }
}

}  // namespace detail

/// Two-mode Hermite kernel with couplings `c` at x = (s1 w, s2 v, s3 v, s4 w).
/// Equal to hermite_general on two_mode_equivalent_params(c, s, v, w).
inline cplx two_mode_hermite(const TwoModeCoupling &c, const TwoModeScales &s, const std::array<int, 4> &n, cplx v,
                             cplx w, const PrecisionPolicy &policy = PrecisionPolicy{},
                             int degree_cap = kDefaultDegreeCap) {
    for (int k : n) {
        if (k < 0) {
            throw std::invalid_argument("two_mode_hermite: negative index");
        }
    }
    policy.validate();
    const int total = n[0] + n[1] + n[2] + n[3];
    detail::check_degree(total, degree_cap);
    if (total == 0) {
        return 1.0;
    }
    const std::array<double, 4> scale{s.s1, s.s2, s.s3, s.s4};
    const int amax = n[1] + n[2];
    const int bmax = n[0] + n[3];
    const auto bucket = [bmax](int a, int b) { return static_cast<std::size_t>(a * (bmax + 1) + b); };
    const std::size_t nbuckets = static_cast<std::size_t>((amax + 1) * (bmax + 1));

    if (policy.use_extended(total)) {
        const auto prec = static_cast<mpfr_prec_t>(policy.mantissa_bits);
        const auto big_table = [prec](double z, int kmax) {
            std::vector<BigReal> t;
            t.emplace_back(1.0, prec);
            BigReal zb(z, prec);
            for (int k = 1; k <= kmax; ++k) {
                BigReal next(t.back());
                next.mul(zb);
                next.div_ui(static_cast<unsigned long>(k));
                t.push_back(std::move(next));
            }
            return t;
        };
        BigReal pre(1.0, prec);
        for (int k : n) {
            for (int f = 2; f <= k; ++f) {
                mpfr_mul_ui(pre.get(), pre.get(), static_cast<unsigned long>(f), MPFR_RNDN);
            }
        }
        const int mx = std::max({n[0], n[1], n[2], n[3]});
        auto At = big_table(c.A, mx), Bt = big_table(c.B, mx), Ct = big_table(c.C, mx);
        std::array<std::vector<BigReal>, 4> St;
        for (std::size_t i = 0; i < 4; ++i) {
            St[i] = big_table(scale[i], n[i]);
        }
        std::vector<BigReal> acc;
        for (std::size_t k = 0; k < nbuckets; ++k) {
            acc.emplace_back(prec);
        }
        BigReal t(prec), scratch(prec);
        detail::two_mode_terms(c, s, n, [&](const std::array<int, 4> &pr, const std::array<int, 4> &q) {
            for (std::size_t i = 0; i < 4; ++i) {
                if (q[i] > 0 && scale[i] == 0.0) {
                    return;
                }
            }
            t.set_product(pre, At[static_cast<std::size_t>(pr[0])]);
            t.mul(Bt[static_cast<std::size_t>(pr[1])]);
            t.mul(Ct[static_cast<std::size_t>(pr[2])]);
            t.mul(Ct[static_cast<std::size_t>(pr[3])]);
            for (std::size_t i = 0; i < 4; ++i) {
                t.mul(St[i][static_cast<std::size_t>(q[i])]);
            }
            acc[bucket(q[1] + q[2], q[0] + q[3])].add(t);
        });
        // Combine sum_{a,b} coef_ab v^a w^b.
        auto vp = detail::scaled_powers_big(v, amax, prec);
        auto wp = detail::scaled_powers_big(w, bmax, prec);
        // scaled_powers_big divides by k!; undo it with the factorials below.
        BigComplex total_sum(prec), term(prec), tmp(prec);
        BigReal fa(prec);
        for (int a = 0; a <= amax; ++a) {
            for (int b = 0; b <= bmax; ++b) {
                const BigReal &coef = acc[bucket(a, b)];
                if (coef.is_zero()) {
                    continue;
                }
                tmp.set_product(vp[static_cast<std::size_t>(a)], wp[static_cast<std::size_t>(b)], scratch);
                fa.set(coef);
                for (int f = 2; f <= a; ++f) {
                    mpfr_mul_ui(fa.get(), fa.get(), static_cast<unsigned long>(f), MPFR_RNDN);
                }
                for (int f = 2; f <= b; ++f) {
                    mpfr_mul_ui(fa.get(), fa.get(), static_cast<unsigned long>(f), MPFR_RNDN);
                }
                tmp.scale(fa);
                total_sum.add(tmp);
            }
        }
        cplx r = total_sum.to_cplx();
        if (!is_finite(r)) {
            throw NumericalError("two-mode Hermite sum overflows double range even in extended precision");
        }
        return r;
    }

    const double pre = factorial(n[0]) * factorial(n[1]) * factorial(n[2]) * factorial(n[3]);
    const int mx = std::max({n[0], n[1], n[2], n[3]});
    const auto table = [](double z, int kmax) {
        std::vector<double> t(static_cast<std::size_t>(kmax) + 1);
        t[0] = 1.0;
        for (int k = 1; k <= kmax; ++k) {
            t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k) - 1] * z / k;
        }
        return t;
    };
    const auto At = table(c.A, mx), Bt = table(c.B, mx), Ct = table(c.C, mx);
    std::array<std::vector<double>, 4> St;
    for (std::size_t i = 0; i < 4; ++i) {
        St[i] = table(scale[i], n[i]);
    }
    std::vector<std::vector<double>> buckets(nbuckets);
    detail::two_mode_terms(c, s, n, [&](const std::array<int, 4> &pr, const std::array<int, 4> &q) {
        double t = pre * At[static_cast<std::size_t>(pr[0])] * Bt[static_cast<std::size_t>(pr[1])] *
                   Ct[static_cast<std::size_t>(pr[2])] * Ct[static_cast<std::size_t>(pr[3])];
        for (std::size_t i = 0; i < 4; ++i) {
            t *= St[i][static_cast<std::size_t>(q[i])];
        }
        if (!std::isfinite(t)) {
            throw PrecisionError("non-finite two-mode Hermite term in machine precision");
        }
        if (t != 0.0) {
            buckets[bucket(q[1] + q[2], q[0] + q[3])].push_back(t);
        }
    });
    std::vector<cplx> parts;
    for (int a = 0; a <= amax; ++a) {
        for (int b = 0; b <= bmax; ++b) {
            auto &bk = buckets[bucket(a, b)];
            if (bk.empty()) {
                continue;
            }
            const double coef = sorted_sum(bk);
            cplx mono = 1.0;
            for (int k = 0; k < a; ++k) {
                mono *= v;
            }
            for (int k = 0; k < b; ++k) {
                mono *= w;
            }
            parts.push_back(coef * mono);
        }
    }
    cplx r = sorted_sum(parts);
    if (!is_finite(r)) {
        throw PrecisionError("non-finite two-mode Hermite sum in machine precision");
    }
    return r;
}

/// H_{n1,n2,n3,n4}(xi, xi*) for the two-mode resource with couplings A, B, C.
///
/// `conj_point` is the value substituted for xi*; pass std::conj(xi) on the
/// physical diagonal. The result carries the sign (-1)^{n1+n2+n3+n4} relative
/// to the commonly printed form, so that it equals hermite_general on the
/// equivalent dim-4 problem; the sign cancels in every response ratio.
inline cplx hermite_two_mode_four_index(double A, double B, double C, const std::array<int, 4> &idx4, cplx xi,
                                        cplx conj_point, const PrecisionPolicy &policy = PrecisionPolicy{},
                                        int degree_cap = kDefaultDegreeCap) {
    if (!std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C)) {
        throw std::invalid_argument("hermite_two_mode_four_index: non-finite coupling");
    }
    const TwoModeCoupling c{A, B, C};
    return two_mode_hermite(c, TwoModeScales::diagonal(c), idx4, xi, conj_point, policy, degree_cap);
}

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kStirlingMax = 64;

/// Stirling number of the second kind S(n, m), exact, for 0 <= m <= n <= 64.
inline const BigInt &stirling2(int n, int m) {
    if (n < 0 || m < 0 || m > n || n > kStirlingMax) {
        throw std::out_of_range("stirling2 requires 0 <= m <= n <= 64, got n=" + std::to_string(n) +
                                " m=" + std::to_string(m));
    }
    static const std::vector<std::vector<BigInt>> table = [] {
        std::vector<std::vector<BigInt>> S(kStirlingMax + 1, std::vector<BigInt>(kStirlingMax + 1, 0));
        S[0][0] = 1;
        for (int i = 1; i <= kStirlingMax; ++i) {
            for (int k = 1; k <= i; ++k) {
                S[i][k] = BigInt(k) * S[i - 1][k] + S[i - 1][k - 1];
            }
        }
        return S;
    }();
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)];
}

}  // namespace pvtele
