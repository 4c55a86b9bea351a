#include "ltwist/specfun.hpp"

#include <cmath>

namespace ltwist {

namespace {

struct Tracked {
    mp_complex v;
    mp_real mag;  // largest intermediate magnitude, for cancellation estimates
};

Tracked series(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_complex& z) {
    const mp_real eps = mp_eps();
    mp_complex term(mp_real(1)), sum(mp_real(1));
    mp_real mag = 1;
    const mp_real az = abs(z);
    for (long j = 0; j < 200000; ++j) {
        mp_real jj(j);
        term *= (a + jj) * (b + jj) / ((c + jj) * (jj + 1)) * z;
        sum += term;
        mp_real at = abs(term);
        if (at > mag) mag = at;
        // tail is geometric once the term ratio is below 1
        if (at <= eps * abs(sum)) {
            mp_real ratio = abs((a + (jj + 1)) * (b + (jj + 1)) / ((c + (jj + 1)) * (jj + 2))) * az;
            if (ratio < mp_real(0.9) || at == 0) return {sum, mag};
        }
    }
    throw ConvergenceError("hyp2f1: series did not converge", 1.0);
}

Tracked connection(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_real& z) {
    // z <= -1: w = 1/(1-z) in (0, 1/2]
    const mp_real omz = 1 - z;
    const mp_real w = 1 / omz;
    const mp_real lomz = log(omz);
    const mp_complex gc = gamma(c);
    Tracked s1 = series(a, c - b, a - b + mp_real(1), mp_complex(w));
    Tracked s2 = series(b, c - a, b - a + mp_real(1), mp_complex(w));
    mp_complex p1 = gc * gamma(b - a) * rgamma(b) * rgamma(c - a) * std::exp(-a * lomz);
    mp_complex p2 = gc * gamma(a - b) * rgamma(a) * rgamma(c - b) * std::exp(-b * lomz);
    Tracked r;
    r.v = p1 * s1.v + p2 * s2.v;
    r.mag = mp_max(abs(p1) * s1.mag, abs(p2) * s2.mag);
    return r;
}

bool near_integer(const mp_complex& x, const mp_real& thr) {
    mp_real n = round(x.real());
    return abs(x - mp_complex(n)) < thr;
}

Tracked evaluate(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_real& z,
                 const PrecisionContext& ctx) {
    if (z == 0) return {mp_complex(mp_real(1)), mp_real(1)};
    if (z >= mp_real(-0.5)) return series(a, b, c, mp_complex(z));
    if (z > -1) {
        // Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))
        mp_complex pre = std::exp(-a * log(1 - z));
        Tracked s = series(a, c - b, c, mp_complex(z / (z - 1)));
        return {pre * s.v, abs(pre) * s.mag};
    }
    const mp_real thr = mp_real(std::max(10 * ctx.tol, 1e-30));
    if (!near_integer(a - b, thr)) return connection(a, b, c, z);
    // Removable singularity in a - b: mean over a circle in a.
    const unsigned M = 2 * ((current_bits() / 2 + 8) / 2 + 1);
    const mp_real r(0.25);
    const mp_real tp = 2 * pi();
    Tracked acc{mp_complex(mp_real(0)), mp_real(0)};
    for (unsigned m = 0; m < M; ++m) {
        mp_real th = tp * (mp_real(m) + mp_real(0.5)) / mp_real(M);
        mp_complex da(r * cos(th), r * sin(th));
        Tracked t = connection(a + da, b, c, z);
        acc.v += t.v;
        if (t.mag > acc.mag) acc.mag = t.mag;
    }
    acc.v /= mp_real(M);
    return acc;
}

}  // namespace

mp_complex hyp2f1_series(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_complex& z) {
    return series(a, b, c, z).v;
}

mp_complex hyp2f1(const mp_complex& a, const mp_complex& b, const mp_complex& c, const mp_real& z,
                  const PrecisionContext& ctx) {
    if (z > 0) throw PreconditionError("hyp2f1: z must be <= 0");
    if (near_integer(c, mp_real(ctx.tol)) && c.real() < mp_real(0.5))
        throw PoleError("hyp2f1: c is a non-positive integer");
    unsigned bits = ctx.work_bits + 24;
    for (int attempt = 0; attempt < 4; ++attempt) {
        ScopedPrecision sp(bits);
        Tracked t = evaluate(mp_complex(a), mp_complex(b), mp_complex(c), mp_real(z), ctx);
        if (!finite(t.v)) throw DegenerateError("hyp2f1: non-finite value");
        mp_real av = abs(t.v);
        double loss = av == 0 ? 1e9 : std::max(0.0, to_double(log2(t.mag / av)));
        if (loss + ctx.work_bits + 8 <= bits) return t.v;
        if (loss > 8 * ctx.work_bits) throw DegenerateError("hyp2f1: catastrophic cancellation");
        bits = ctx.work_bits + static_cast<unsigned>(loss) + 32;
    }
    throw DegenerateError("hyp2f1: could not resolve cancellation");
}

}  // namespace ltwist
