#include "ltwist/dirichlet.hpp"

#include "ltwist/errors.hpp"

namespace ltwist {

namespace {

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    __int128 r = 1, x = b % m;
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

mp_complex unit(const mp_real& turns) {
    mp_real th = 2 * pi() * turns;
    return {cos(th), sin(th)};
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::int64_t primitive_root(std::int64_t q) {
    if (!is_prime(q)) throw NotPrimeError("primitive_root: modulus " + std::to_string(q) + " is not prime");
    if (q == 2) return 1;
    auto fac = prime_factors(q - 1);
    for (std::int64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (auto p : fac)
            if (powmod(g, (q - 1) / p, q) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw NotPrimeError("primitive_root: none found");
}

DirichletCharacter DirichletCharacter::conj() const {
    DirichletCharacter c = *this;
    c.index = index == 0 ? 0 : (modulus - 1) - index;
    for (auto& v : c.values) v = std::conj(v);
    return c;
}

std::vector<DirichletCharacter> characters(std::int64_t q) {
    if (!is_prime(q) || q < 3) throw NotPrimeError("characters: modulus " + std::to_string(q) + " is not an odd prime");
    const std::int64_t g = primitive_root(q);
    const std::int64_t order = q - 1;
    // discrete log table
    std::vector<std::int64_t> dlog(q, -1);
    std::int64_t x = 1;
    for (std::int64_t i = 0; i < order; ++i) {
        dlog[x] = i;
        x = x * g % q;
    }
    std::vector<DirichletCharacter> out;
    out.reserve(order);
    for (std::int64_t j = 0; j < order; ++j) {
        DirichletCharacter chi;
        chi.modulus = q;
        chi.index = j;
        chi.principal = j == 0;
        chi.values.assign(q, mp_complex(mp_real(0)));
        for (std::int64_t n = 1; n < q; ++n) {
            // exact exponent reduction before embedding
            std::int64_t e = (j * dlog[n]) % order;
            if (e == 0)
                chi.values[n] = mp_complex(mp_real(1));
            else if (2 * e == order)
                chi.values[n] = mp_complex(mp_real(-1));
            else if (4 * e == order)
                chi.values[n] = mp_complex(mp_real(0), mp_real(1));
            else if (4 * e == 3 * order)
                chi.values[n] = mp_complex(mp_real(0), mp_real(-1));
            else
                chi.values[n] = unit(mp_real(e) / mp_real(order));
        }
        // chi(-1) = (-1)^j since dlog(-1) = (q-1)/2
        chi.parity = (j % 2 == 0) ? 1 : -1;
        out.push_back(std::move(chi));
    }
    return out;
}

mp_complex gauss_sum(const DirichletCharacter& chi) {
    if (chi.principal) throw PrincipalError("gauss_sum: principal character");
    const std::int64_t q = chi.modulus;
    mp_complex tau(mp_real(0));
    for (std::int64_t n = 1; n < q; ++n) tau += chi.values[n] * unit(mp_real(n) / mp_real(q));
    return tau;
}

mp_complex root_number(const DirichletCharacter& chi) {
    mp_complex tau = gauss_sum(chi);
    mp_complex denom = mp_complex(sqrt(mp_real(chi.modulus)));
    if (chi.parity < 0) denom *= mp_complex(mp_real(0), mp_real(1));
    return tau / denom;
}

mp_complex TrigExpansion::evaluate(std::int64_t n) const {
    mp_complex v = constant_term;
    if (n % modulus != 0) v += principal_coeff;
    for (size_t i = 0; i < chars.size(); ++i) v += char_coeffs[i] * chars[i](n);
    return v;
}

TrigExpansion trig_coeffs(std::int64_t q, TrigKind kind) {
    TrigExpansion e;
    e.kind = kind;
    e.modulus = q;
    const mp_real qm1(q - 1);
    const mp_real sq = sqrt(mp_real(q));
    for (auto& chi : characters(q)) {
        if (chi.principal) continue;
        if (kind == TrigKind::Cos && chi.parity == 1) {
            e.char_coeffs.push_back(sq / qm1 * std::conj(root_number(chi)));
            e.chars.push_back(chi);
        } else if (kind == TrigKind::Sin && chi.parity == -1) {
            e.char_coeffs.push_back(sq / qm1 * std::conj(root_number(chi)));
            e.chars.push_back(chi);
        }
    }
    if (kind == TrigKind::Cos) {
        e.constant_term = mp_complex(mp_real(1));
        e.principal_coeff = mp_complex(-mp_real(q) / qm1);
    } else {
        e.constant_term = mp_complex(mp_real(0));
        e.principal_coeff = mp_complex(mp_real(0));
    }
    return e;
}

}  // namespace ltwist
