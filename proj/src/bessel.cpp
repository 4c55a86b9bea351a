#include "ltwist/specfun.hpp"

#include <cmath>
#include <mutex>

namespace ltwist {

namespace {
constexpr double kTau = 1.4;
}

BesselK::BesselK(const mp_complex& nu, const PrecisionContext& ctx)
    : nu_(nu), ctx_(ctx), mutex_(std::make_shared<std::mutex>()) {
    if (abs(nu.real()) >= 1) throw PreconditionError("bessel_k: |Re nu| must be < 1");
    const double im = std::abs(to_double(nu.imag()));
    guard_bits_ = ctx.work_bits + 20 + static_cast<unsigned>(std::ceil(M_PI * im / (2 * M_LN2)));
}

const BesselK::Level& BesselK::level(int depth) const {
    std::lock_guard<std::mutex> lock(*static_cast<std::mutex*>(mutex_.get()));
    while (static_cast<int>(levels_.size()) <= depth) {
        const int d = static_cast<int>(levels_.size());
        auto lv = std::make_unique<Level>();
        const double w = guard_bits_ * M_LN2;
        const double im = std::abs(to_double(nu_.imag()));
        lv->h = mp_real(2 * M_PI * kTau / (w + im * kTau)) / mp_real(std::ldexp(1.0, d));
        levels_.push_back(std::move(lv));
    }
    return *levels_[depth];
}

mp_real BesselK::scale(const mp_real& y) const {
    return exp(-pi() * abs(nu_.imag()) / 2 - y) * sqrt(pi() / (2 * y + 1));
}

mp_complex BesselK::trapezoid(const Level& lvc, const mp_real& y, int stride) const {
    auto& lv = const_cast<Level&>(lvc);
    const mp_real cut = mp_real(guard_bits_ * M_LN2 + 8);
    const mp_real re_nu = abs(nu_.real());
    mp_complex sum(mp_real(0));
    for (size_t k = 0;; k += stride) {
        if (k >= lv.cosh_t.size()) {
            std::lock_guard<std::mutex> lock(*static_cast<std::mutex*>(mutex_.get()));
            while (lv.cosh_t.size() <= k) {
                mp_real t = lv.h * mp_real(lv.cosh_t.size());
                lv.cosh_t.push_back(cosh(t));
                lv.cosh_nut.push_back(std::cosh(nu_ * t));
            }
        }
        mp_real t = lv.h * mp_real(k);
        mp_real e = y * lv.cosh_t[k] - re_nu * t;
        if (k > 0 && e > cut) break;
        mp_complex term = exp(-y * lv.cosh_t[k]) * lv.cosh_nut[k];
        sum += k == 0 ? term / mp_real(2) : term;
    }
    return sum * lv.h * mp_real(stride);
}

mp_complex BesselK::asymptotic(const mp_real& y, bool* ok) const {
    const mp_real eps = ldexp(mp_real(1), -static_cast<int>(guard_bits_));
    const mp_complex mu = mp_real(4) * nu_ * nu_;
    mp_complex term(mp_real(1)), sum(mp_real(1));
    mp_real last = 1;
    *ok = false;
    for (int k = 1; k < 4000; ++k) {
        mp_real odd(2 * k - 1);
        term *= (mu - odd * odd) / (mp_real(8 * k) * y);
        mp_real a = abs(term);
        sum += term;
        if (a < eps * abs(sum)) {
            *ok = true;
            break;
        }
        if (a > last && k > 2) break;
        last = a;
    }
    return sum * sqrt(pi() / (2 * y)) * exp(-y);
}

mp_complex BesselK::eval(const mp_real& y_in, mp_real* err) const {
    if (y_in <= 0) throw PreconditionError("bessel_k: y must be positive");
    ScopedPrecision sp(guard_bits_);
    mp_real y = y_in;
    if (y > mp_real(ctx_.work_bits * M_LN2 / 2)) {
        bool ok = false;
        mp_complex v = asymptotic(y, &ok);
        if (ok) {
            if (err) *err = abs(v) * ldexp(mp_real(1), -static_cast<int>(ctx_.work_bits));
            return v;
        }
    }
    const mp_real accept = mp_real(ctx_.tol);
    for (int d = 1; d <= ctx_.max_quad_depth; ++d) {
        const Level& fine = level(d);
        mp_complex t1 = trapezoid(fine, y, 1);
        mp_complex t0 = trapezoid(fine, y, 2);
        mp_real e = abs(t1 - t0);
        if (e <= accept * mp_max(abs(t1), scale(y))) {
            if (err) *err = e;
            return t1;
        }
        if (d == ctx_.max_quad_depth) throw ConvergenceError("bessel_k: refinement cap reached", to_double(e));
    }
    throw ConvergenceError("bessel_k: unreachable", 0);
}

mp_complex BesselK::operator()(const mp_real& y) const { return eval(y, nullptr); }

mp_complex bessel_k(const mp_complex& nu, const mp_real& y, const PrecisionContext& ctx) {
    return BesselK(nu, ctx)(y);
}

}  // namespace ltwist
