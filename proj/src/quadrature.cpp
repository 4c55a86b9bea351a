#include "ltwist/specfun.hpp"

#include <map>
#include <mutex>

namespace ltwist {

namespace {

// Trapezoid on the real line for an already-mapped integrand, halving h.
// term(v) returns f(phi(v)) phi'(v), or nullopt when phi(v) left the domain.
using Mapped = std::function<bool(const mp_real& v, mp_complex& out)>;

QuadResult de_trapezoid(const Mapped& term, const PrecisionContext& ctx, const QuadOptions& opt, double vcap) {
    const mp_real small = ldexp(mp_real(1), -static_cast<int>(current_bits()) - 8);
    mp_real maxabs = 0;
    auto sweep = [&](const mp_real& h, bool odd_only, mp_complex& acc) {
        // v = k h, k = 0, +-1, ...; only odd k when refining
        for (int dir = -1; dir <= 1; dir += 2) {
            int quiet = 0;
            for (long k = (dir < 0 ? 1 : 0); ; ++k) {
                if (odd_only && k % 2 == 0) continue;
                mp_real v = h * mp_real(dir * k);
                if (abs(v) > vcap) break;
                mp_complex t;
                if (!term(v, t)) break;
                mp_real a = abs(t);
                if (!boost::multiprecision::isfinite(a)) throw ConvergenceError("quadrature: non-finite integrand", 0);
                acc += t;
                if (a > maxabs) maxabs = a;
                if (a <= small * maxabs) {
                    if (++quiet >= 4) break;
                } else {
                    quiet = 0;
                }
            }
        }
    };
    mp_real h(opt.h0);
    mp_complex sum(mp_real(0));
    sweep(h, false, sum);
    mp_complex prev = sum * h;
    QuadResult r;
    for (int lvl = 1; lvl <= ctx.max_quad_depth; ++lvl) {
        h /= 2;
        sweep(h, true, sum);
        mp_complex cur = sum * h;
        mp_real err = abs(cur - prev);
        r.value = cur;
        r.error = err;
        r.levels = lvl;
        mp_real target = mp_real(ctx.tol) * (opt.relative ? mp_max(opt.err_scale, abs(cur)) : opt.err_scale);
        if (lvl >= 2 && err <= target) return r;
        prev = cur;
    }
    throw ConvergenceError("quadrature did not reach tolerance", to_double(r.error));
}

}  // namespace

QuadResult quad_finite(const ComplexFn& f, const mp_real& a, const mp_real& b, const PrecisionContext& ctx,
                       QuadOptions opt) {
    const mp_real mid = (a + b) / 2, half = (b - a) / 2;
    const mp_real hp = pi() / 2;
    Mapped term = [&](const mp_real& v, mp_complex& out) {
        mp_real sh = hp * sinh(v);
        mp_real e = exp(-2 * abs(sh));
        // 1 - |tanh(sh)| = 2e/(1+e) keeps the distance to the endpoint exact
        mp_real dist = 2 * e / (1 + e);
        if (dist == 0) return false;
        mp_real x = sh >= 0 ? b - half * dist : a + half * dist;
        if (x <= a || x >= b) return false;
        mp_real ch = cosh(sh);
        mp_real w = half * hp * cosh(v) / (ch * ch);
        out = f(x) * w;
        return true;
    };
    return de_trapezoid(term, ctx, opt, 7.0);
}

QuadResult quad_half_line(const ComplexFn& f, const mp_real& a, const PrecisionContext& ctx, QuadOptions opt) {
    Mapped term = [&](const mp_real& v, mp_complex& out) {
        mp_real ev = exp(-v);
        mp_real d = exp(v - ev);
        if (d == 0) return false;
        out = f(a + d) * (d * (1 + ev));
        return true;
    };
    return de_trapezoid(term, ctx, opt, 7.0);
}

QuadResult quad_mellin(const ComplexFn& g, const mp_complex& s, const PrecisionContext& ctx, QuadOptions opt) {
    const mp_complex sh = s - mp_real(0.5);
    Mapped term = [&](const mp_real& v, mp_complex& out) {
        mp_real ev = exp(-v);
        mp_real u = v - ev;
        mp_real y = exp(u);
        if (y == 0) return false;
        out = g(y) * std::exp(sh * u) * (1 + ev);
        return true;
    };
    return de_trapezoid(term, ctx, opt, 7.0);
}

const GaussLegendre& gauss_legendre(unsigned n) {
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, std::unique_ptr<GaussLegendre>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, current_bits());
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto gl = std::make_unique<GaussLegendre>();
    gl->x.resize(n);
    gl->w.resize(n);
    const mp_real p = pi();
    const mp_real tol = ldexp(mp_real(1), -static_cast<int>(current_bits()) + 4);
    for (unsigned i = 0; i < (n + 1) / 2; ++i) {
        mp_real x = cos(p * (mp_real(i) + mp_real(0.75)) / (mp_real(n) + mp_real(0.5)));
        mp_real dp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            mp_real p0 = 1, p1 = x;
            for (unsigned k = 2; k <= n; ++k) {
                mp_real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (x * p1 - p0) / (x * x - 1);
            mp_real dx = p1 / dp;
            x -= dx;
            if (abs(dx) < tol) {
                // refresh derivative at the converged node
                p0 = 1;
                p1 = x;
                for (unsigned k = 2; k <= n; ++k) {
                    mp_real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1);
                break;
            }
        }
        mp_real w = 2 / ((1 - x * x) * dp * dp);
        gl->x[i] = -x;
        gl->x[n - 1 - i] = x;
        gl->w[i] = w;
        gl->w[n - 1 - i] = w;
    }
    auto& ref = *gl;
    cache.emplace(key, std::move(gl));
    return ref;
}

}  // namespace ltwist
