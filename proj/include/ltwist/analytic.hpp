#pragma once

#include "ltwist/forms.hpp"
#include "ltwist/rational.hpp"
#include "ltwist/specfun.hpp"

#include <optional>

namespace ltwist {

// Archimedean data (k, eps, nu) of a form.
struct FormParams {
    int k = 0;
    int eps = 1;
    mp_complex nu{mp_real(0)};

    static FormParams of(const MaassForm& f) { return {f.weight, f.eps, f.nu}; }
    // Spectral parameter of the dual. Equals conj(nu) on admissible forms; for k = 1 the
    // gamma factors are not even in nu, and the dual carries -nu.
    FormParams dual() const;
};

struct GammaFactorSpec {
    int k = 0;
    int eps = 1;
    mp_complex nu;
    int sign = 1;
};

mp_complex gamma_factor(const GammaFactorSpec& spec, const mp_complex& s, const PrecisionContext& ctx);
mp_complex gamma_factor(const FormParams& p, int sign, const mp_complex& s, const PrecisionContext& ctx);
// psi_f'(s), derivative of gamma_f^+'/gamma_f^+.
mp_complex psi_f_prime(const FormParams& p, const mp_complex& s);

// V_f^{sign}(y).
class VProfile {
public:
    VProfile(const FormParams& p, int sign, const PrecisionContext& ctx);
    mp_complex operator()(const mp_real& y) const;
    bool zero() const { return !bessel_; }

private:
    int k_;
    std::optional<BesselK> bessel_;
};

mp_complex v_profile(const FormParams& p, int sign, const mp_real& y, const PrecisionContext& ctx);

// Size of V for y near 1: exp(-pi |Im nu| / 2).
mp_real v_scale(const FormParams& p);
// Upper bound for |V^{+-}(y)|.
mp_real v_bound(const FormParams& p, const mp_real& y);
double log_v_bound(const FormParams& p, double y);

struct FormValue {
    mp_complex value;
    mp_real tail_bound;
    std::int64_t terms = 0;
};

// Fourier expansion with certified truncation; coefficients taken from `coeffs` (lambda or c).
class FormEvaluator {
public:
    FormEvaluator(const MaassForm& f, const PrecisionContext& ctx);
    // Uses the given coefficient table instead of lambda(n).
    FormEvaluator(const MaassForm& f, std::vector<mp_complex> coeffs, mp_real coeff_growth_log_power,
                  const PrecisionContext& ctx);
    FormValue operator()(const mp_real& x, const mp_real& y) const;
    std::int64_t terms_needed(const mp_real& y) const;

private:
    FormParams params_;
    PrecisionContext ctx_;
    VProfile vp_, vm_;
    std::vector<mp_complex> coeffs_;
    mp_real log_power_;
    std::int64_t bound_;
};

FormValue eval_form(const MaassForm& f, const mp_real& x, const mp_real& y, const PrecisionContext& ctx);

struct ModularityResult {
    mp_complex lhs, rhs;
    mp_real residual;  // |lhs - rhs|
    mp_real relative;  // residual / max(|lhs|, v_scale)
};

ModularityResult modularity_residual(const MaassForm& f, const mp_complex& z, const PrecisionContext& ctx);

enum class GMode { Closed, Quadrature };

// G_f(s, omega), the Mellin transform of V^+ cos(2 pi omega y) + i V^- sin(2 pi omega y).
mp_complex g_hyp(const FormParams& p, const mp_complex& s, const mp_real& omega, GMode mode,
                 const PrecisionContext& ctx);
// H_f = G_f / gamma_f^+.
mp_complex h_hyp(const FormParams& p, const mp_complex& s, const mp_real& omega, const PrecisionContext& ctx);

struct FeResult {
    mp_complex lhs, rhs;
    mp_real residual;  // |lhs - rhs| / max(1, |lhs|)
};

FeResult feofg_residual(const FormParams& p, const mp_complex& s, const mp_real& omega, const PrecisionContext& ctx);

enum class TrigKindM { Sin, Cos };

struct MellinPairResult {
    mp_complex quadrature, closed, closed_as_printed;
    mp_real residual;  // |quadrature - closed| / max(1, |closed|)
};

// int_0^inf x^{lambda+1} K_mu(a x) trig(b x) dx/x against its closed form.
MellinPairResult mellin_pair_check(const mp_complex& lambda, const mp_complex& mu, const mp_real& a,
                                   const mp_real& b, TrigKindM kind, const PrecisionContext& ctx);

mp_complex p_factor(const FormParams& p, const mp_complex& s, int a, unsigned m, const PrecisionContext& ctx);

// Exact reductions behind P_f(s; a+t, t).
struct ReductionResult {
    bool chu_vandermonde = false;
    bool collapse = false;
    QComplex lhs, rhs;
    bool ok() const { return chu_vandermonde && collapse; }
};

ReductionResult reduction_check(int k, unsigned t, const mpq& s, const mpq& nu, int a, int eps = 1);
// Rational part of P_f(s; a, m) after removing (2 pi)^{-m}.
mpq p_factor_rational(int k, int eps, const mpq& s, const mpq& nu, int a, unsigned m);

// phi(x) = cosh(nu log x) log x / sinh(log x / 2), written in u = log x.
mp_complex phi_kernel(const mp_complex& nu, const mp_real& u);

struct PhiResult {
    mp_complex trigamma_side, quadrature_side;
    mp_real residual;
};

// psi'(s+nu) + psi'(s-nu) against int_1^inf phi(x) x^{1/2-s} dx/x.
PhiResult phi_machinery(const mp_complex& nu, const mp_complex& s, const PrecisionContext& ctx);

mp_complex x_f(const FormParams& p, const mp_complex& s);

struct DigammaResult {
    mp_complex lhs, rhs;
    mp_real residual;
};

DigammaResult digamma_xf_residual(const FormParams& p, const mp_complex& s, const PrecisionContext& ctx);

// Coefficients of H_f(s, alpha/y) y^{1/2-s} = sum_j y^{j+1/2} (a_j y^nu + b_j y^-nu), or
// a_j + b_j log y when nu = k = 0.
struct GSeriesCoeffs {
    std::vector<mp_complex> a, b;
    bool logarithmic = false;
    mp_complex sum(const mp_real& y, const mp_complex& nu) const;
};

GSeriesCoeffs gseries_coeffs(const FormParams& p, const mpq& alpha, const mp_complex& s, unsigned J,
                             const PrecisionContext& ctx);

}  // namespace ltwist
