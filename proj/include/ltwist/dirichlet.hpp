#pragma once

#include "ltwist/precision.hpp"

#include <cstdint>
#include <vector>

namespace ltwist {

bool is_prime(std::int64_t n);
std::int64_t primitive_root(std::int64_t q);

// chi(g^i) = exp(2 pi i j i / (q-1)) for a fixed primitive root g.
struct DirichletCharacter {
    std::int64_t modulus = 0;
    std::int64_t index = 0;         // j above; 0 is principal
    std::vector<mp_complex> values;  // indexed by residue 0..q-1
    int parity = 1;
    bool principal = false;

    const mp_complex& operator()(std::int64_t n) const {
        std::int64_t r = n % modulus;
        return values[r < 0 ? r + modulus : r];
    }
    DirichletCharacter conj() const;
};

std::vector<DirichletCharacter> characters(std::int64_t q);

mp_complex gauss_sum(const DirichletCharacter& chi);
mp_complex root_number(const DirichletCharacter& chi);

enum class TrigKind { Cos, Sin };

struct TrigExpansion {
    TrigKind kind = TrigKind::Cos;
    std::int64_t modulus = 0;
    mp_complex constant_term;
    mp_complex principal_coeff;
    std::vector<DirichletCharacter> chars;
    std::vector<mp_complex> char_coeffs;

    // constant + principal*chi0(n) + sum c_chi chi(n)
    mp_complex evaluate(std::int64_t n) const;
};

TrigExpansion trig_coeffs(std::int64_t q, TrigKind kind);

}  // namespace ltwist
