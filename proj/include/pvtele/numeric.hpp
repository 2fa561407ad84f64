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

#pragma once

#include <mpfr.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pvtele {

using cplx = std::complex<double>;

/// Raised when a computation cannot produce a trustworthy number.
class NumericalError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Machine-precision evaluation overflowed or lost all significance.
class PrecisionError : public NumericalError {
   public:
    explicit PrecisionError(const std::string &what)
        : NumericalError(what + " (retry with extended precision, e.g. --precision extended:256)") {
    }
};

enum class PrecisionMode { machine, extended };

/// How Hermite sums are accumulated.
///
/// In machine mode sums whose total index degree exceeds
/// `promote_above_degree` are transparently evaluated in extended precision;
/// set it to a large value to force double arithmetic everywhere.
struct PrecisionPolicy {
    PrecisionMode mode = PrecisionMode::machine;
    unsigned mantissa_bits = 256;
    int promote_above_degree = 24;

    static PrecisionPolicy machine() {
        return {};
    }
    static PrecisionPolicy machine_only() {
        return {PrecisionMode::machine, 256, 1 << 30};
    }
    static PrecisionPolicy extended(unsigned bits = 256) {
        PrecisionPolicy p{PrecisionMode::extended, bits, 24};
        p.validate();
        return p;
    }

    void validate() const {
        if (mantissa_bits < 53) {
            throw std::invalid_argument("mantissa_bits must be >= 53, got " + std::to_string(mantissa_bits));
        }
    }

    bool use_extended(int total_degree) const {
        return mode == PrecisionMode::extended || total_degree > promote_above_degree;
    }

    /// Parses "machine" or "extended:<bits>" (bare "extended" means 256 bits).
    static PrecisionPolicy parse(std::string_view text) {
        if (text == "machine") {
            return machine();
        }
        if (text == "extended") {
            return extended();
        }
        constexpr std::string_view prefix = "extended:";
        if (text.substr(0, prefix.size()) == prefix) {
            auto digits = text.substr(prefix.size());
            unsigned bits = 0;
            auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bits);
            if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
                throw std::invalid_argument("bad precision bits: '" + std::string(digits) + "'");
            }
            return extended(bits);
        }
        throw std::invalid_argument("precision must be 'machine' or 'extended:<bits>', got '" + std::string(text) + "'");
    }

    std::string to_string() const {
        if (mode == PrecisionMode::machine) {
            return "machine";
        }
        return "extended:" + std::to_string(mantissa_bits);
    }
};

/// Short scientific rendering for error messages.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const {
        return sum_ + comp_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sorts by magnitude (ascending) then compensated-sums; the result does not
/// depend on the order in which terms were produced.
inline double sorted_sum(std::vector<double> &terms) {
    std::sort(terms.begin(), terms.end(), [](double a, double b) {
        double fa = std::abs(a), fb = std::abs(b);
        return fa < fb || (fa == fb && a < b);
    });
    CompensatedSum s;
    for (double t : terms) {
        s.add(t);
    }
    return s.value();
}

inline cplx sorted_sum(std::vector<cplx> &terms) {
    std::vector<double> re, im;
    re.reserve(terms.size());
    im.reserve(terms.size());
    for (const auto &t : terms) {
        re.push_back(t.real());
        im.push_back(t.imag());
    }
    return {sorted_sum(re), sorted_sum(im)};
}

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// n! as a double (exact up to 22!, correctly rounded beyond).
inline double factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(171, 1.0);
        for (int i = 1; i < 171; ++i) {
            t[i] = t[i - 1] * i;
        }
        return t;
    }();
    if (n < 0 || n > 170) {
        throw std::out_of_range("factorial argument out of range: " + std::to_string(n));
    }
    return table[static_cast<std::size_t>(n)];
}

/// Owning RAII handle for an MPFR real with an explicit precision.
///
/// Every value carries its own precision, so nothing depends on global MPFR
/// state and values can be used from any thread.
class BigReal {
   public:
    explicit BigReal(mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    BigReal(double d, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, MPFR_RNDN);
    }
    BigReal(const BigReal &o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigReal(BigReal &&o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    BigReal &operator=(const BigReal &o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal &operator=(BigReal &&o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigReal() {
        mpfr_clear(v_);
    }

    mpfr_ptr get() {
        return v_;
    }
    mpfr_srcptr get() const {
        return v_;
    }
    mpfr_prec_t precision() const {
        return mpfr_get_prec(v_);
    }
    double to_double() const {
        return mpfr_get_d(v_, MPFR_RNDN);
    }
    bool is_zero() const {
        return mpfr_zero_p(v_) != 0;
    }

    void set(double d) {
        mpfr_set_d(v_, d, MPFR_RNDN);
    }
    void set(const BigReal &o) {
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    void add(const BigReal &o) {
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    }
    void mul(const BigReal &o) {
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    }
    void div_ui(unsigned long k) {
        mpfr_div_ui(v_, v_, k, MPFR_RNDN);
    }
    void neg() {
        mpfr_neg(v_, v_, MPFR_RNDN);
    }
    /// this = a * b
    void set_product(const BigReal &a, const BigReal &b) {
        mpfr_mul(v_, a.v_, b.v_, MPFR_RNDN);
    }
    /// this += a * b
    void add_product(const BigReal &a, const BigReal &b, BigReal &scratch) {
        mpfr_mul(scratch.v_, a.v_, b.v_, MPFR_RNDN);
        mpfr_add(v_, v_, scratch.v_, MPFR_RNDN);
    }

   private:
    mpfr_t v_;
};

/// Complex number over BigReal with explicit scratch-based arithmetic.
struct BigComplex {
    BigReal re;
    BigReal im;

    explicit BigComplex(mpfr_prec_t prec) : re(prec), im(prec) {
    }
    BigComplex(cplx z, mpfr_prec_t prec) : re(z.real(), prec), im(z.imag(), prec) {
    }

    cplx to_cplx() const {
        return {re.to_double(), im.to_double()};
    }

    void add(const BigComplex &o) {
        re.add(o.re);
        im.add(o.im);
    }

    /// this = a * b; `t` must not alias any operand.
    void set_product(const BigComplex &a, const BigComplex &b, BigReal &t) {
        BigReal &r = re;
        // re = a.re*b.re - a.im*b.im, im = a.re*b.im + a.im*b.re
        mpfr_mul(t.get(), a.im.get(), b.im.get(), MPFR_RNDN);
        mpfr_fms(r.get(), a.re.get(), b.re.get(), t.get(), MPFR_RNDN);
        mpfr_mul(t.get(), a.im.get(), b.re.get(), MPFR_RNDN);
        mpfr_fma(im.get(), a.re.get(), b.im.get(), t.get(), MPFR_RNDN);
    }

    /// this *= real scalar
    void scale(const BigReal &s) {
        re.mul(s);
        im.mul(s);
    }
};

}  // namespace pvtele
