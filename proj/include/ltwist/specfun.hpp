#pragma once

#include "ltwist/errors.hpp"
#include "ltwist/precision.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace ltwist {

// Gamma family, complex argument, current precision.
mp_complex gamma(const mp_complex& z);
mp_complex rgamma(const mp_complex& z);  // 1/Gamma, entire
mp_complex lgamma(const mp_complex& z);  // some branch of log Gamma
mp_complex trigamma(const mp_complex& z);

mp_complex gamma_r(const mp_complex& s, const PrecisionContext& ctx);
// psi_R'(s) with psi_R = Gamma_R'/Gamma_R.
mp_complex trigamma_r(const mp_complex& s);
// Gamma_R(x) / Gamma_R(x - 2n) for integer n >= 0.
mp_complex gamma_r_shift_ratio(const mp_complex& x, unsigned n);

mp_complex trigamma(const mp_complex& s, const PrecisionContext& ctx);

mp_complex gen_binom(const mp_complex& s, unsigned l);

// K_nu(y) for fixed nu, sharing trapezoid nodes across y.
class BesselK {
public:
    BesselK(const mp_complex& nu, const PrecisionContext& ctx);
    mp_complex operator()(const mp_real& y) const;
    // Value together with the trapezoid error estimate.
    mp_complex eval(const mp_real& y, mp_real* err) const;
    const mp_complex& nu() const { return nu_; }

private:
    struct Level {
        mp_real h;
        std::vector<mp_real> cosh_t;
        std::vector<mp_complex> cosh_nut;
    };
    const Level& level(int depth) const;
    mp_complex trapezoid(const Level& lv, const mp_real& y, int stride) const;
    mp_complex asymptotic(const mp_real& y, bool* ok) const;
    mp_real scale(const mp_real& y) const;

    mp_complex nu_;
    PrecisionContext ctx_;
    unsigned guard_bits_;
    mp_real t_max_ref_;
    mutable std::vector<std::unique_ptr<Level>> levels_;
    mutable std::shared_ptr<void> mutex_;
};

mp_complex bessel_k(const mp_complex& nu, const mp_real& y, const PrecisionContext& ctx);

// 2F1(a,b;c;z) for real z <= 0, standard normalisation F(a,b;c;0) = 1.
mp_complex hyp2f1(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_real& z,
                  const PrecisionContext& ctx);
// Plain Gauss series, |z| < 1, for tests and overlap checks.
mp_complex hyp2f1_series(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_complex& z);

struct QuadResult {
    mp_complex value;
    mp_real error;
    int levels = 0;
};

using ComplexFn = std::function<mp_complex(const mp_real&)>;

// Double-exponential rules. err_scale: tolerance is tol * max(err_scale, |value|)
// when relative, else tol * err_scale.
struct QuadOptions {
    bool relative = false;
    mp_real err_scale = 1;
    double h0 = 0.5;
};

QuadResult quad_finite(const ComplexFn& f, const mp_real& a, const mp_real& b, const PrecisionContext& ctx,
                       QuadOptions opt = {});
// Exponential-type map; meant for integrands decaying at least exponentially.
QuadResult quad_half_line(const ComplexFn& f, const mp_real& a, const PrecisionContext& ctx, QuadOptions opt = {});
// int_0^inf g(y) y^{s-1/2} dy/y.
QuadResult quad_mellin(const ComplexFn& g, const mp_complex& s, const PrecisionContext& ctx, QuadOptions opt = {});

struct GaussLegendre {
    std::vector<mp_real> x;  // on [-1, 1]
    std::vector<mp_real> w;
};
const GaussLegendre& gauss_legendre(unsigned n);

}  // namespace ltwist
