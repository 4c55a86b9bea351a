#include "ltwist/series.hpp"

#include "ltwist/dirichlet.hpp"
#include "ltwist/errors.hpp"

#include <numeric>

namespace ltwist {

CoeffTable lambda_coeffs(const MaassForm& f, std::int64_t X) {
    return {CoeffKind::Lambda, hecke_table(f, X)};
}

CoeffTable a_coeffs(const MaassForm& f, std::int64_t X) {
    if (X > f.coeff_bound) throw MissingPrimeError("a_coeffs: X exceeds coeff_bound");
    CoeffTable t{CoeffKind::A, std::vector<mp_complex>(X + 1, mp_complex(mp_real(0)))};
    for (auto p : primes_up_to(X)) {
        mp_real lp = log(mp_real(p));
        unsigned m = 1;
        for (std::int64_t pm = p; pm <= X; pm *= p, ++m) {
            t.values[pm] = prime_power_a(f, p, m) * lp;
            if (pm > X / p) break;
        }
    }
    return t;
}

CoeffTable c_coeffs(const MaassForm& f, std::int64_t X) {
    auto lam = hecke_table(f, X);
    CoeffTable t{CoeffKind::C, std::vector<mp_complex>(X + 1, mp_complex(mp_real(0)))};
    for (auto p : primes_up_to(X)) {
        mp_real lp = log(mp_real(p));
        unsigned m = 1;
        for (std::int64_t pm = p;; pm *= p, ++m) {
            // Lambda(p^m) a_{p^m} log(p^m)
            mp_complex w = prime_power_a(f, p, m) * (lp * lp * mp_real(m));
            for (std::int64_t n = pm; n <= X; n += pm) t.values[n] += lam[n / pm] * w;
            if (pm > X / p) break;
        }
    }
    return t;
}

TrigTable::TrigTable(const mpq& alpha, unsigned deriv) : deriv_(deriv % 4) {
    mpz n = numerator(alpha), d = denominator(alpha);
    if (n == 0) throw PreconditionError("TrigTable: alpha must be nonzero");
    if (d > 1000000) throw PreconditionError("TrigTable: denominator too large");
    num_ = n.convert_to<std::int64_t>();
    den_ = d.convert_to<std::int64_t>();
    cos_.resize(den_);
    sin_.resize(den_);
    const mp_real tp = 2 * pi();
    for (std::int64_t r = 0; r < den_; ++r) {
        mp_real th = tp * mp_real(r) / mp_real(den_);
        cos_[r] = cos(th);
        sin_[r] = sin(th);
    }
}

mp_real TrigTable::operator()(std::int64_t n) const {
    __int128 prod = static_cast<__int128>(n) * num_;
    std::int64_t r = static_cast<std::int64_t>(prod % den_);
    if (r < 0) r += den_;
    switch (deriv_) {
        case 0: return cos_[r];
        case 1: return -sin_[r];
        case 2: return -cos_[r];
        default: return sin_[r];
    }
}

namespace {

// int_L^inf e^{-c u} u^m du
mp_real exp_moment(const mp_real& c, const mp_real& L, unsigned m) {
    mp_real cl = c * L, term = 1, acc = 1;
    for (unsigned j = 1; j <= m; ++j) {
        term *= cl / j;
        acc += term;
    }
    mp_real fact = 1;
    for (unsigned j = 2; j <= m; ++j) fact *= j;
    return fact * exp(-cl) * acc / pow(c, m + 1);
}

}  // namespace

mp_real tail_bound(CoeffKind kind, std::int64_t X, const mp_real& sigma) {
    const mp_real a = sigma - mp_real(7) / 64;
    if (a <= 1) return mp_real(std::numeric_limits<double>::infinity());
    const mp_real L = log(mp_real(X));
    const mp_real c = a - 1;
    // int_X^inf x^{-a} log^m x dx
    auto I = [&](unsigned m) { return exp_moment(c, L, m); };
    switch (kind) {
        case CoeffKind::Lambda:
            // |lambda(n)| <= d(n) n^theta, partial summation with D(x) <= x(log x + 1)
            return a * (I(1) + I(0));
        case CoeffKind::A: {
            // |Lambda(n) a_n| <= 2 n^theta log n; the summand decreases once log x > 1/a
            if (L * a <= 1) return mp_real(std::numeric_limits<double>::infinity());
            return 2 * I(1);
        }
        case CoeffKind::C:
            // |c(n)| <= 2 n^theta d(n) log^2 n
            return 2 * a * (I(3) + I(2));
    }
    return 0;
}

SeriesValue evaluate_truncated(const CoeffTable& t, const mp_complex& s, const std::optional<TwistSpec>& twist) {
    std::optional<TrigTable> trig;
    if (twist) trig.emplace(twist->alpha, twist->deriv);
    mp_complex acc(mp_real(0));
    const std::int64_t X = t.size();
    for (std::int64_t n = 1; n <= X; ++n) {
        const mp_complex& v = t.values[n];
        if (v.real() == 0 && v.imag() == 0) continue;
        mp_complex term = v * std::exp(-s * log(mp_real(n)));
        if (trig) term *= (*trig)(n);
        acc += term;
    }
    return {acc, tail_bound(t.kind, X, s.real())};
}

SeriesValue eval_series(const CoeffTable& t, const mp_complex& s, const std::optional<TwistSpec>& twist,
                        const PrecisionContext& ctx) {
    const mp_real margin = t.kind == CoeffKind::C ? mp_real(1.5) : mp_real(1.5) + mp_real(7) / 64;
    if (s.real() <= margin) throw PreconditionError("eval_series: Re(s) outside absolute convergence");
    SeriesValue v = evaluate_truncated(t, s, twist);
    if (v.tail_bound > ctx.tol) throw TailError("eval_series: tail bound exceeds tol", to_double(v.tail_bound));
    return v;
}

TwistDecomposition twist_decomposition(const MaassForm& f, std::int64_t q, const mp_complex& s, std::int64_t X) {
    if (f.level % q == 0) throw PreconditionError("twist_decomposition: q divides N");
    if (s.real() <= mp_real(1.5)) throw PreconditionError("twist_decomposition: Re(s) <= 3/2");
    auto c = c_coeffs(f, X);
    auto expn = trig_coeffs(q, TrigKind::Cos);
    // n^{-s} c(n), shared by all twists
    std::vector<mp_complex> base(X + 1);
    for (std::int64_t n = 1; n <= X; ++n) base[n] = c.values[n] * std::exp(-s * log(mp_real(n)));
    TrigTable cosq(mpq(1, q), 0);
    mp_complex lhs(mp_real(0)), d(mp_real(0)), d0(mp_real(0));
    std::vector<mp_complex> dchi(expn.chars.size(), mp_complex(mp_real(0)));
    for (std::int64_t n = 1; n <= X; ++n) {
        lhs += base[n] * cosq(n);
        d += base[n];
        if (n % q) d0 += base[n];
        for (size_t i = 0; i < dchi.size(); ++i) dchi[i] += base[n] * expn.chars[i](n);
    }
    mp_complex rhs = d + expn.principal_coeff * d0;
    for (size_t i = 0; i < dchi.size(); ++i) rhs += expn.char_coeffs[i] * dchi[i];
    // each twisted tail is bounded by the untwisted one; RHS weights sum to at most 1 + q/(q-1) + sqrt(q)/2
    mp_real tb = tail_bound(CoeffKind::C, X, s.real());
    mp_real weight = 2 + mp_real(q) / mp_real(q - 1) + sqrt(mp_real(q)) / 2;
    return {lhs, rhs, abs(lhs - rhs), tb * weight};
}

mp_complex PrincipalTwistReport::pole(int root, std::int64_t m, std::int64_t q) const {
    mp_real lq = log(mp_real(q));
    return {sigma[root], -(theta[root] + 2 * pi() * mp_real(m)) / lq};
}

PrincipalTwistReport principal_twist(const MaassForm& f, std::int64_t q, std::int64_t X) {
    if (!is_prime(q)) throw NotPrimeError("principal_twist: q not prime");
    if (f.level % q == 0) throw PreconditionError("principal_twist: q divides N");
    PrincipalTwistReport r;
    auto lam = hecke_table_exact(f, X);
    const QComplex lq = exact_lambda_p(f, q);
    const QComplex xq = exact_xi(f, q);
    for (std::int64_t n = 1; n <= X; ++n) {
        QComplex lhs = n % q ? lam[n] : QComplex();
        QComplex rhs = lam[n];
        if (n % q == 0) rhs -= lq * lam[n / q];
        if (n % (q * q) == 0) rhs += xq * lam[n / (q * q)];
        ++r.checked;
        if (lhs != rhs) {
            r.exact = false;
            if (!r.first_failure) r.first_failure = n;
        }
    }
    const mp_complex l = f.lambda_p(q), x = f.xi_at(q);
    mp_complex disc = l * l - mp_real(4) * x;
    if (abs(disc) < mp_eps() * 64) throw DegenerateError("principal_twist: Euler polynomial has a double root");
    mp_complex sq = std::sqrt(disc);
    // roots of x X^2 - l X + 1
    r.roots[0] = (l + sq) / (mp_real(2) * x);
    r.roots[1] = (l - sq) / (mp_real(2) * x);
    const mp_real logq = log(mp_real(q));
    for (int i = 0; i < 2; ++i) {
        // q^{-s} = X  =>  s = -(log|X| + i(arg X + 2 pi m)) / log q
        r.sigma[i] = -log(abs(r.roots[i])) / logq;
        r.theta[i] = atan2(r.roots[i].imag(), r.roots[i].real());
    }
    r.spacing = 2 * pi() / logq;
    return r;
}

RsReport rs_average(const MaassForm& f, std::int64_t x) {
    RsReport r;
    mp_real acc = 0;
    for (auto p : primes_up_to(x)) {
        const mp_complex& l = f.lambda_p(p);
        mp_real a = abs(l);
        acc += a * a;
        ++r.prime_count;
        if (r.prime_count == 1 || a < r.min_abs) {
            r.min_abs = a;
            r.min_prime = p;
        }
        if (!r.first_small && f.level % p && a < 2) r.first_small = p;
    }
    if (r.prime_count == 0) throw PreconditionError("rs_average: no primes up to x");
    r.average = acc / r.prime_count;
    return r;
}

}  // namespace ltwist
