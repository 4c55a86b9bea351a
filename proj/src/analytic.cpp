#include "ltwist/analytic.hpp"

#include "ltwist/errors.hpp"

#include <cmath>

namespace ltwist {

namespace {

const mp_complex I(mp_real(0), mp_real(1));

mp_complex cx(double v) { return mp_complex(mp_real(v)); }

// Shifts (d1, d2) of gamma^{sign}: Gamma_R(s + d1 + nu) Gamma_R(s + d2 - nu).
std::pair<int, int> shifts(int k, int eps, int sign) {
    int pk = k == 0 ? 1 : -1;
    return {(1 - sign * pk * eps) / 2, (1 - sign * eps) / 2};
}

mp_complex csc2(const mp_complex& x) {
    mp_complex sn = std::sin(x);
    return mp_complex(mp_real(1)) / (sn * sn);
}

double log_kbound(double x) {
    // |K_mu(x)| <= K_1(x) <= sqrt(pi/(2x)) e^{-x} (1 + 1/x) for |Re mu| <= 1
    return 0.5 * std::log(M_PI / (2 * x)) - x + std::log1p(1 / x);
}

}  // namespace

FormParams FormParams::dual() const {
    FormParams d = *this;
    d.nu = k == 1 ? -nu : std::conj(nu);
    return d;
}

mp_complex gamma_factor(const GammaFactorSpec& spec, const mp_complex& s, const PrecisionContext& ctx) {
    auto [d1, d2] = shifts(spec.k, spec.eps, spec.sign);
    return gamma_r(s + mp_real(d1) + spec.nu, ctx) * gamma_r(s + mp_real(d2) - spec.nu, ctx);
}

mp_complex gamma_factor(const FormParams& p, int sign, const mp_complex& s, const PrecisionContext& ctx) {
    return gamma_factor(GammaFactorSpec{p.k, p.eps, p.nu, sign}, s, ctx);
}

mp_complex psi_f_prime(const FormParams& p, const mp_complex& s) {
    auto [d1, d2] = shifts(p.k, p.eps, 1);
    return trigamma_r(s + mp_real(d1) + p.nu) + trigamma_r(s + mp_real(d2) - p.nu);
}

VProfile::VProfile(const FormParams& p, int sign, const PrecisionContext& ctx) : k_(p.k) {
    if (p.k == 0) {
        if (p.eps == sign) bessel_.emplace(p.nu, ctx);
    } else {
        bessel_.emplace(p.nu + mp_real(sign * p.eps) / 2, ctx);
    }
}

mp_complex VProfile::operator()(const mp_real& y) const {
    if (!bessel_) return mp_complex(mp_real(0));
    mp_real w = k_ == 0 ? 4 * sqrt(y) : 4 * y;
    return (*bessel_)(2 * pi() * y) * w;
}

mp_complex v_profile(const FormParams& p, int sign, const mp_real& y, const PrecisionContext& ctx) {
    if (y <= 0) throw PreconditionError("v_profile: y must be positive");
    return VProfile(p, sign, ctx)(y);
}

mp_real v_scale(const FormParams& p) { return exp(-pi() * abs(p.nu.imag()) / 2); }

double log_v_bound(const FormParams& p, double y) {
    double lw = p.k == 0 ? 0.5 * std::log(y) : std::log(y);
    return std::log(4.0) + lw + log_kbound(2 * M_PI * y);
}

mp_real v_bound(const FormParams& p, const mp_real& y) { return mp_real(std::exp(log_v_bound(p, to_double(y)))); }

FormEvaluator::FormEvaluator(const MaassForm& f, const PrecisionContext& ctx)
    : FormEvaluator(f, hecke_table(f, f.coeff_bound), mp_real(0), ctx) {}

FormEvaluator::FormEvaluator(const MaassForm& f, std::vector<mp_complex> coeffs, mp_real log_power,
                             const PrecisionContext& ctx)
    : params_(FormParams::of(f)),
      ctx_(ctx),
      vp_(params_, 1, ctx),
      vm_(params_, -1, ctx),
      coeffs_(std::move(coeffs)),
      log_power_(std::move(log_power)),
      bound_(static_cast<std::int64_t>(coeffs_.size()) - 1) {}

std::int64_t FormEvaluator::terms_needed(const mp_real& y) const {
    // |coeff(n)| / sqrt(n) <= 4 n^theta (1 + log n)^P since d(n) <= 2 sqrt(n)
    const double yd = to_double(y);
    const double P = to_double(log_power_);
    const double target = std::log(ctx_.tol) + to_double(log(v_scale(params_)));
    auto log_term = [&](double n) {
        double u = n * yd;
        double lw = params_.k == 0 ? 0.5 * std::log(u) : std::log(u);
        return std::log(16.0) + (7.0 / 64) * std::log(n) + P * std::log1p(std::log(n)) + lw +
               log_kbound(2 * M_PI * u);
    };
    // terms decay at least geometrically with ratio e^{-pi y} once 2 pi n y is past the bump
    const double r = std::exp(-M_PI * yd);
    for (std::int64_t M = 1;; ++M) {
        double n = static_cast<double>(M + 1);
        if (2 * M_PI * n * yd < 4) continue;
        double tail = log_term(n) - std::log1p(-r);
        if (tail < target) return M;
        if (M > 100000000) throw TailError("eval_form: truncation does not converge", 0);
    }
}

FormValue FormEvaluator::operator()(const mp_real& x, const mp_real& y) const {
    if (y <= 0) throw PreconditionError("eval_form: y must be positive");
    std::int64_t M = terms_needed(y);
    if (M > bound_) throw TailError("eval_form: needs " + std::to_string(M) + " coefficients", 0);
    const mp_real tp = 2 * pi();
    mp_complex acc(mp_real(0));
    for (std::int64_t n = 1; n <= M; ++n) {
        const mp_complex& c = coeffs_[n];
        if (c.real() == 0 && c.imag() == 0) continue;
        mp_real ny = y * n, arg = tp * n * x;
        mp_complex t(mp_real(0));
        if (!vp_.zero()) t += vp_(ny) * cos(arg);
        if (!vm_.zero()) t += I * vm_(ny) * sin(arg);
        acc += c * t / sqrt(mp_real(n));
    }
    return {acc, mp_real(ctx_.tol) * v_scale(params_), M};
}

FormValue eval_form(const MaassForm& f, const mp_real& x, const mp_real& y, const PrecisionContext& ctx) {
    return FormEvaluator(f, ctx)(x, y);
}

ModularityResult modularity_residual(const MaassForm& f, const mp_complex& z, const PrecisionContext& ctx) {
    ScopedPrecision sp(ctx);
    FormEvaluator ev(f, ctx);
    FormEvaluator evd(dual_form(f), ctx);
    const mp_complex w = -mp_complex(mp_real(1)) / (mp_real(f.level) * z);
    ModularityResult r;
    r.lhs = ev(z.real(), z.imag()).value;
    mp_complex phase = I * mp_complex(abs(z)) / z;
    r.rhs = f.eta * evd(w.real(), w.imag()).value;
    if (f.weight == 1) r.rhs *= phase;
    r.residual = abs(r.lhs - r.rhs);
    r.relative = r.residual / mp_max(abs(r.lhs), v_scale(FormParams::of(f)));
    return r;
}

mp_complex h_hyp(const FormParams& p, const mp_complex& s, const mp_real& omega, const PrecisionContext& ctx) {
    const mp_real z = -omega * omega;
    const mp_complex half(mp_real(0.5));
    const mp_real e(p.eps);
    if (p.k == 0) {
        mp_complex sh = s + (1 - e) / 2;
        mp_complex F = hyp2f1((sh + p.nu) / mp_real(2), (sh - p.nu) / mp_real(2), cx(1) - e / 2, z, ctx);
        if (p.eps == 1) return F;
        return mp_real(2) * pi() * I * omega * F;
    }
    mp_complex F1 = hyp2f1((s + (1 + e) / 2 + p.nu) / mp_real(2), (s + (1 - e) / 2 - p.nu) / mp_real(2), half, z, ctx);
    if (omega == 0) return F1;
    mp_complex F2 = hyp2f1((s + (3 - e) / 2 + p.nu) / mp_real(2), (s + (3 + e) / 2 - p.nu) / mp_real(2),
                           cx(1.5), z, ctx);
    // gamma^-(s+1) / gamma^+(s) = (s - eps nu) / (2 pi)
    return F1 + I * omega * (s - e * p.nu) * F2;
}

mp_complex g_hyp(const FormParams& p, const mp_complex& s, const mp_real& omega, GMode mode,
                 const PrecisionContext& ctx) {
    if (mode == GMode::Closed) return gamma_factor(p, 1, s, ctx) * h_hyp(p, s, omega, ctx);
    const mp_real lim = mp_real(0.5) + abs(p.nu.real());
    if (s.real() <= lim - mp_real(0.5)) throw PreconditionError("g_hyp: quadrature needs Re(s) > |Re nu|");
    VProfile vp(p, 1, ctx), vm(p, -1, ctx);
    const mp_real tpo = 2 * pi() * omega;
    ComplexFn g = [&](const mp_real& y) {
        mp_complex t(mp_real(0));
        if (!vp.zero()) t += vp(y) * cos(tpo * y);
        if (!vm.zero()) t += I * vm(y) * sin(tpo * y);
        return t;
    };
    QuadOptions opt;
    opt.relative = true;
    opt.err_scale = mp_real(1e-30);
    return quad_mellin(g, s, ctx, opt).value;
}

FeResult feofg_residual(const FormParams& p, const mp_complex& s, const mp_real& omega, const PrecisionContext& ctx) {
    FeResult r;
    r.lhs = h_hyp(p, s, omega, ctx);
    const mp_complex one(mp_real(1));
    mp_complex rhs = h_hyp(p.dual(), one - s, -omega, ctx);
    rhs *= std::exp((mp_real(0.5) - s) * log(1 + omega * omega));
    if (p.k == 0) {
        if (p.eps == -1) rhs = -rhs;
    } else {
        mp_complex w(omega, mp_real(1));
        rhs *= I * mp_complex(abs(w)) / w;
    }
    r.rhs = rhs;
    r.residual = abs(r.lhs - r.rhs) / mp_max(mp_real(1), abs(r.lhs));
    return r;
}

MellinPairResult mellin_pair_check(const mp_complex& lambda, const mp_complex& mu, const mp_real& a,
                                   const mp_real& b, TrigKindM kind, const PrecisionContext& ctx) {
    if (a <= 0) throw PreconditionError("mellin_pair_check: a must be positive");
    const mp_real lo = kind == TrigKindM::Sin ? mp_real(-1) : mp_real(0);
    if ((lambda + mp_real(1) + mu).real() <= lo || (lambda + mp_real(1) - mu).real() <= lo)
        throw PreconditionError("mellin_pair_check: integral diverges at 0");
    MellinPairResult r;
    BesselK K(mu, ctx);
    ComplexFn g = [&](const mp_real& x) {
        mp_real t = kind == TrigKindM::Sin ? sin(b * x) : cos(b * x);
        return K(a * x) * t;
    };
    QuadOptions opt;
    opt.relative = true;
    opt.err_scale = mp_real(1e-30);
    // x^{lambda+1} dx/x is y^{s-1/2} dy/y with s = lambda + 3/2
    r.quadrature = quad_mellin(g, lambda + mp_real(1.5), ctx, opt).value;
    const mp_real z = -(b * b) / (a * a);
    const mp_complex two(mp_real(2));
    if (kind == TrigKindM::Sin) {
        mp_complex A = (two + lambda + mu) / two, B = (two + lambda - mu) / two;
        mp_complex core = std::pow(two, lambda) * b * gamma(A) * gamma(B) * hyp2f1(A, B, cx(1.5), z, ctx);
        r.closed_as_printed = core;
        r.closed = core * std::pow(mp_complex(a), -lambda - two);
    } else {
        mp_complex A = (mp_real(1) + lambda + mu) / two, B = (mp_real(1) + lambda - mu) / two;
        mp_complex core = std::pow(two, lambda - mp_real(1)) / std::pow(mp_complex(a), lambda + mp_real(1)) *
                          gamma(A) * gamma(B) * hyp2f1(A, B, cx(0.5), z, ctx);
        r.closed = r.closed_as_printed = core;
    }
    r.residual = abs(r.quadrature - r.closed) / mp_max(mp_real(1), abs(r.closed));
    return r;
}

mp_complex p_factor(const FormParams& p, const mp_complex& s, int a, unsigned m, const PrecisionContext& ctx) {
    const int sa = (a % 2 == 0) ? 1 : -1;
    if (p.k == 0 && sa == -p.eps) return mp_complex(mp_real(0));
    const unsigned M = m / 2;
    auto [d1, d2] = shifts(p.k, p.eps, sa);
    const mp_complex one(mp_real(1));
    mp_complex x1 = one - s + mp_real(d1) + p.nu, x2 = one - s + mp_real(d2) - p.nu;
    // denominator Gamma_R(x - 2M) must be finite
    for (const auto& x : {x1, x2}) {
        mp_complex y = x - mp_real(2 * M);
        mp_real n = round(y.real());
        if (n <= 0 && abs(y - mp_complex(n)) < mp_real(ctx.tol) && boost::multiprecision::fmod(n, mp_real(2)) == 0)
            throw PoleError("p_factor: denominator gamma factor at a pole");
    }
    mp_complex r = gamma_r_shift_ratio(x1, M) * gamma_r_shift_ratio(x2, M);
    if (p.k == 1 && m % 2 == 1) r *= (s + mp_real(2 * M) - mp_real(sa * p.eps) * p.nu) / (2 * pi());
    return r;
}

mpq p_factor_rational(int k, int eps, const mpq& s, const mpq& nu, int a, unsigned m) {
    const int sa = (a % 2 == 0) ? 1 : -1;
    if (k == 0 && sa == -eps) return 0;
    const unsigned M = m / 2;
    auto [d1, d2] = shifts(k, eps, sa);
    mpq x1 = 1 - s + d1 + nu, x2 = 1 - s + d2 - nu;
    mpq r = 1;
    for (unsigned i = 1; i <= M; ++i) r *= (x1 - 2 * i) * (x2 - 2 * i);
    if (k == 1 && m % 2 == 1) r *= s + 2 * M - sa * eps * nu;
    return r;
}

namespace {

// Rational part of Gamma_R(x + 2m) / Gamma_R(x).
mpq rising2(const mpq& x, int m) {
    if (m < 0) throw PreconditionError("rising2: negative shift");
    mpq r = 1;
    for (int i = 0; i < m; ++i) r *= x + 2 * i;
    return r;
}

bool is_gamma_r_pole(const mpq& x) {
    return denominator(x) == 1 && x <= 0 && numerator(x) % 2 == 0;
}

}  // namespace

ReductionResult reduction_check(int k, unsigned t, const mpq& s, const mpq& nu, int a, int eps) {
    if (k != 0 && k != 1) throw PreconditionError("reduction_check: k must be 0 or 1");
    const mpq half(1, 2);
    ReductionResult r;
    // poles of the Gamma_R ratios being reduced
    for (int sg : {1, -1}) {
        auto [d1, d2] = shifts(k, eps, sg);
        for (unsigned m = 0; m <= t + 1; ++m) {
            if (is_gamma_r_pole(1 - s + d1 + nu - 2 * m) || is_gamma_r_pole(1 - s + d2 - nu - 2 * m) ||
                is_gamma_r_pole(s + t + d1 - nu) || is_gamma_r_pole(s + t + d2 + nu))
                throw PoleSampleError("reduction_check: sample hits a pole, resample s");
        }
    }
    r.chu_vandermonde = true;
    for (unsigned j = 0; j <= t; ++j) {
        const unsigned L = (t - j) / 2;
        mpq lhs = 0;
        for (unsigned l = 0; l <= L; ++l)
            lhs += gen_binom(mpq(j + L) + mpq(k, 2) - 1, L - l) * gen_binom(half - s - t - j, l);
        mpq rhs = gen_binom(mpq(L) + mpq(k - 1, 2) - s - t, L);
        if (lhs != rhs) r.chu_vandermonde = false;
    }
    mpq lhs = 0, rhs = 0;
    const int sat = ((a + t) % 2 == 0) ? 1 : -1;
    if (k == 0) {
        rhs = p_factor_rational(0, eps, s, nu, a + t, t) / factorial(t);
        if (sat == eps) {
            const unsigned n = t / 2, b = t % 2;
            for (unsigned q = 0; q <= n; ++q) {
                mpq term = 1 / factorial(2 * q + b);
                for (unsigned i = 0; i < q; ++i) term *= (s + t + b + nu + 2 * i) * (s + t + b - nu + 2 * i);
                term *= gen_binom(mpq(n - q) - half - s - t, n - q);
                lhs += term;
            }
        }
    } else {
        rhs = p_factor_rational(1, eps, s, nu, a + t, t) / factorial(t);
        if (t % 2) rhs = -rhs;
        const mpq nub = -nu;
        const int s_den = (a % 2 == 0) ? 1 : -1;
        for (unsigned j = 0; j <= t; ++j) {
            const int s_num = ((a + j) % 2 == 0) ? 1 : -1;
            auto [n1, n2] = shifts(1, eps, s_num);
            auto [e1, e2] = shifts(1, eps, s_den);
            // factor shifts are even and non-negative
            int m1 = static_cast<int>(j) + n1 - e1, m2 = static_cast<int>(j) + n2 - e2;
            mpq Rj = rising2(s + t + e1 + nub, m1 / 2) * rising2(s + t + e2 - nub, m2 / 2);
            const unsigned L = (t - j) / 2;
            mpq term = Rj / factorial(j) * gen_binom(mpq(L) - s - t, L);
            if (j % 2) term = -term;
            lhs += term;
        }
    }
    r.lhs = QComplex(lhs);
    r.rhs = QComplex(rhs);
    r.collapse = lhs == rhs;
    return r;
}

mp_complex phi_kernel(const mp_complex& nu, const mp_real& u) {
    const mp_real tiny = ldexp(mp_real(1), -static_cast<int>(current_bits()) / 4);
    mp_real ratio;
    if (abs(u) < tiny) {
        ratio = 2 * (1 - u * u / 24);
    } else {
        ratio = u / sinh(u / 2);
    }
    return std::cosh(nu * u) * ratio;
}

PhiResult phi_machinery(const mp_complex& nu, const mp_complex& s, const PrecisionContext& ctx) {
    if (s.real() <= abs(nu.real())) throw PreconditionError("phi_machinery: Re(s) <= |Re nu|");
    PhiResult r;
    r.trigamma_side = trigamma(s + nu, ctx) + trigamma(s - nu, ctx);
    const mp_complex e = mp_real(0.5) - s;
    ComplexFn g = [&](const mp_real& u) { return phi_kernel(nu, u) * std::exp(e * u); };
    QuadOptions opt;
    opt.relative = true;
    opt.err_scale = mp_real(1e-30);
    r.quadrature_side = quad_half_line(g, mp_real(0), ctx, opt).value;
    r.residual = abs(r.trigamma_side - r.quadrature_side);
    return r;
}

mp_complex x_f(const FormParams& p, const mp_complex& s) {
    const mp_real hp = pi() / 2;
    const int pk = p.k == 0 ? 1 : -1;
    mp_complex a1 = hp * (s + mp_real(1 + pk * p.eps) / 2 + p.nu);
    mp_complex a2 = hp * (s + mp_real(1 + p.eps) / 2 - p.nu);
    return (pi() * pi() / 4) * (csc2(a1) + csc2(a2));
}

DigammaResult digamma_xf_residual(const FormParams& p, const mp_complex& s, const PrecisionContext& ctx) {
    DigammaResult r;
    const mp_complex one(mp_real(1));
    r.lhs = psi_f_prime(p, s) - psi_f_prime(p.dual(), one - s);
    r.rhs = trigamma(s + p.nu, ctx) + trigamma(s - p.nu, ctx) - x_f(p, s);
    if (!finite(r.lhs) || !finite(r.rhs)) throw PoleError("digamma_xf_residual: pole");
    r.residual = abs(r.lhs - r.rhs);
    return r;
}

namespace {

// One hypergeometric term pref * omega^delta * F(a, b; c; -omega^2) of H_f.
struct HTerm {
    mp_complex pref;
    int delta;
    mp_complex a, b, c;
};

std::vector<HTerm> h_terms(const FormParams& p, const mp_complex& s, const mp_complex& nu) {
    const mp_real e(p.eps);
    const mp_real two(2);
    std::vector<HTerm> out;
    if (p.k == 0) {
        mp_complex sh = s + (1 - e) / 2;
        mp_complex pref = p.eps == 1 ? cx(1) : mp_complex(mp_real(0), 2 * pi());
        out.push_back({pref, p.eps == 1 ? 0 : 1, (sh + nu) / two, (sh - nu) / two, cx(1) - e / 2});
    } else {
        out.push_back({cx(1), 0, (s + (1 + e) / 2 + nu) / two, (s + (1 - e) / 2 - nu) / two, cx(0.5)});
        out.push_back({I * (s - e * nu), 1, (s + (3 - e) / 2 + nu) / two, (s + (3 + e) / 2 - nu) / two, cx(1.5)});
    }
    return out;
}

// Coefficients of y^{j + 1/2 +- nu} (index by sign) after the 1/z connection.
void branch_coeffs(const FormParams& p, const mpq& alpha, const mp_complex& s, const mp_complex& nu, unsigned J,
                   std::vector<mp_complex>& plus, std::vector<mp_complex>& minus) {
    plus.assign(J, mp_complex(mp_real(0)));
    minus.assign(J, mp_complex(mp_real(0)));
    const mp_real al = abs(mp_real(alpha.convert_to<mp_real>()));
    const int sg = alpha > 0 ? 1 : -1;
    for (const auto& h : h_terms(p, s, nu)) {
        for (int br = 0; br < 2; ++br) {
            const mp_complex& ea = br == 0 ? h.a : h.b;
            const mp_complex& eb = br == 0 ? h.b : h.a;
            // F(a,b;c;z) ~ G(c)G(b-a)/(G(b)G(c-a)) (-z)^{-a} F(a, a-c+1; a-b+1; 1/z)
            mp_complex C = gamma(h.c) * gamma(eb - ea) * rgamma(eb) * rgamma(h.c - ea);
            // omega^delta (-z)^{-a} y^{1/2-s} = sgn^delta |alpha|^{delta-2a} y^{2a-delta+1/2-s}
            C *= std::exp((mp_real(h.delta) - mp_real(2) * ea) * log(al));
            if (h.delta && sg < 0) C = -C;
            C *= h.pref;
            mp_complex ex = mp_real(2) * ea - mp_real(h.delta) - s;
            // ex = j0 +- nu
            mp_complex jp = ex - nu, jm = ex + nu;
            bool is_plus = abs(jp - mp_complex(round(jp.real()))) < abs(jm - mp_complex(round(jm.real())));
            int j0 = static_cast<int>(to_double(round((is_plus ? jp : jm).real())));
            auto& dst = is_plus ? plus : minus;
            mp_complex term = C;
            const mp_complex a1 = ea - h.c + mp_real(1), a2 = ea - eb + mp_real(1);
            for (unsigned m = 0;; ++m) {
                int j = j0 + 2 * static_cast<int>(m);
                if (j >= static_cast<int>(J)) break;
                if (j >= 0) dst[j] += term;
                // (1/z)^m = (-1)^m (y/alpha)^{2m}
                term *= -(ea + mp_real(m)) * (a1 + mp_real(m)) / ((a2 + mp_real(m)) * mp_real(m + 1)) / (al * al);
            }
        }
    }
}

}  // namespace

mp_complex GSeriesCoeffs::sum(const mp_real& y, const mp_complex& nu) const {
    mp_complex acc(mp_real(0));
    const mp_real ly = log(y);
    for (size_t j = 0; j < a.size(); ++j) {
        mp_real yp = pow(y, mp_real(j) + mp_real(0.5));
        if (logarithmic)
            acc += yp * (a[j] + b[j] * ly);
        else
            acc += yp * (a[j] * std::exp(nu * ly) + b[j] * std::exp(-nu * ly));
    }
    return acc;
}

GSeriesCoeffs gseries_coeffs(const FormParams& p, const mpq& alpha, const mp_complex& s, unsigned J,
                             const PrecisionContext& ctx) {
    if (alpha == 0) throw PreconditionError("gseries_coeffs: alpha must be nonzero");
    GSeriesCoeffs g;
    const bool degenerate = p.k == 0 && abs(p.nu) < mp_real(ctx.tol);
    if (!degenerate) {
        branch_coeffs(p, alpha, s, p.nu, J, g.a, g.b);
        return g;
    }
    // nu = k = 0: a_j = lim (T+ + T-), b_j = lim nu (T+ - T-), both by circle means in nu
    g.logarithmic = true;
    g.a.assign(J, mp_complex(mp_real(0)));
    g.b.assign(J, mp_complex(mp_real(0)));
    const unsigned M = current_bits() / 2 + 8;
    const mp_real r(0.25);
    for (unsigned m = 0; m < M; ++m) {
        mp_real th = 2 * pi() * (mp_real(m) + mp_real(0.5)) / mp_real(M);
        mp_complex nu(r * cos(th), r * sin(th));
        std::vector<mp_complex> pl, mi;
        branch_coeffs(p, alpha, s, nu, J, pl, mi);
        for (unsigned j = 0; j < J; ++j) {
            g.a[j] += pl[j] + mi[j];
            g.b[j] += nu * (pl[j] - mi[j]);
        }
    }
    for (unsigned j = 0; j < J; ++j) {
        g.a[j] /= mp_real(M);
        g.b[j] /= mp_real(M);
    }
    return g;
}

}  // namespace ltwist
