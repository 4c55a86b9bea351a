#include "ltwist/rational.hpp"
#include "ltwist/specfun.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace ltwist {

namespace bmp = boost::multiprecision;

namespace {

mp_real to_real(const mpq& q) {
    mp_real n(bmp::numerator(q));
    mp_real d(bmp::denominator(q));
    return n / d;
}

// B_{2k} at current precision, cached per precision.
const std::vector<mp_real>& bernoulli_even(unsigned count) {
    static std::mutex mu;
    static std::unordered_map<unsigned, std::vector<mp_real>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& v = cache[current_bits()];
    while (v.size() < count) v.push_back(to_real(bernoulli(2 * static_cast<unsigned>(v.size()))));
    return v;
}

mp_real shift_bound() { return mp_real(0.12 * current_bits() + 6); }

mp_complex stirling_lgamma(const mp_complex& w) {
    const mp_real eps = mp_eps();
    mp_complex r = (w - mp_real(0.5)) * std::log(w) - w + log(2 * pi()) / 2;
    const mp_complex w2 = w * w;
    mp_complex p = w;
    for (unsigned k = 1; k < 4000; ++k) {
        const auto& B = bernoulli_even(k + 1);
        mp_complex term = B[k] / (mp_real(2 * k) * mp_real(2 * k - 1) * p);
        r += term;
        if (abs(term) < eps * abs(r)) break;
        p *= w2;
    }
    return r;
}

mp_complex asymptotic_trigamma(const mp_complex& w) {
    const mp_real eps = mp_eps();
    mp_complex r = mp_real(1) / w + mp_real(1) / (mp_real(2) * w * w);
    const mp_complex w2 = w * w;
    mp_complex p = w2 * w;
    for (unsigned k = 1; k < 4000; ++k) {
        const auto& B = bernoulli_even(k + 1);
        mp_complex term = B[k] / p;
        r += term;
        if (abs(term) < eps * abs(r)) break;
        p *= w2;
    }
    return r;
}

unsigned shift_count(const mp_complex& z) {
    const mp_real B = shift_bound();
    if (abs(z) >= B && z.real() >= 0) return 0;
    mp_real need = B - z.real();
    return need > 0 ? static_cast<unsigned>(ceil(need).convert_to<long>()) : 0u;
}

}  // namespace

mp_complex lgamma(const mp_complex& z) {
    if (z.real() < mp_real(0.5)) {
        const mp_real p = pi();
        return log(p) - std::log(std::sin(p * z)) - lgamma(mp_real(1) - z);
    }
    const unsigned n = shift_count(z);
    if (n == 0) return stirling_lgamma(z);
    mp_complex prod = z;
    for (unsigned k = 1; k < n; ++k) prod *= (z + mp_real(k));
    return stirling_lgamma(z + mp_real(n)) - std::log(prod);
}

mp_complex gamma(const mp_complex& z) {
    if (z.real() < mp_real(0.5)) {
        const mp_real p = pi();
        return p / (std::sin(p * z) * gamma(mp_real(1) - z));
    }
    return std::exp(lgamma(z));
}

mp_complex rgamma(const mp_complex& z) {
    if (z.real() < mp_real(0.5)) {
        const mp_real p = pi();
        return std::sin(p * z) * gamma(mp_real(1) - z) / p;
    }
    return std::exp(-lgamma(z));
}

mp_complex trigamma(const mp_complex& z) {
    if (z.real() < mp_real(0.5)) {
        const mp_real p = pi();
        mp_complex sn = std::sin(p * z);
        return p * p / (sn * sn) - trigamma(mp_real(1) - z);
    }
    const unsigned n = shift_count(z);
    mp_complex r(mp_real(0));
    for (unsigned k = 0; k < n; ++k) {
        mp_complex w = z + mp_real(k);
        r += mp_real(1) / (w * w);
    }
    return r + asymptotic_trigamma(z + mp_real(n));
}

namespace {
void check_integer_pole(const mp_complex& s, const PrecisionContext& ctx, int step, const char* what) {
    // poles at 0, -step, -2 step, ...
    mp_real m = round(-s.real() / step);
    if (m < 0) return;
    mp_complex d = s + mp_real(step) * m;
    if (abs(d) < mp_real(ctx.tol)) throw PoleError(std::string(what) + ": argument at a pole");
}
}  // namespace

mp_complex gamma_r(const mp_complex& s, const PrecisionContext& ctx) {
    check_integer_pole(s, ctx, 2, "gamma_r");
    const mp_complex h = s / mp_real(2);
    return std::exp(-h * log(pi())) * gamma(h);
}

mp_complex trigamma(const mp_complex& s, const PrecisionContext& ctx) {
    check_integer_pole(s, ctx, 1, "trigamma");
    return trigamma(s);
}

mp_complex trigamma_r(const mp_complex& s) { return trigamma(s / mp_real(2)) / mp_real(4); }

mp_complex gamma_r_shift_ratio(const mp_complex& x, unsigned n) {
    mp_complex r(mp_real(1));
    const mp_real tp = 2 * pi();
    for (unsigned i = 1; i <= n; ++i) r *= (x - mp_real(2 * i)) / tp;
    return r;
}

mp_complex gen_binom(const mp_complex& s, unsigned l) {
    mp_complex r(mp_real(1));
    for (unsigned i = 0; i < l; ++i) r *= (s - mp_real(i)) / mp_real(i + 1);
    return r;
}

}  // namespace ltwist
