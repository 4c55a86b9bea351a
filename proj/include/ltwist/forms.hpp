#pragma once

#include "ltwist/precision.hpp"
#include "ltwist/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ltwist {

struct MaassForm {
    std::int64_t level = 1;
    int weight = 0;
    int eps = 1;
    mp_complex eta{mp_real(1)};
    mp_complex nu{mp_real(0)};
    // xi[r] for residues r mod N; empty means trivial
    std::vector<mp_complex> xi;
    std::map<std::int64_t, mp_complex> prime_coeffs;
    std::int64_t coeff_bound = 1;
    std::string prec = "0";
    std::string provenance;
    // source text of decimals, so serialisation round-trips bit-exactly
    std::map<std::string, std::string> raw;

    mp_complex xi_at(std::int64_t n) const;
    bool xi_trivial() const { return xi.empty(); }
    const mp_complex& lambda_p(std::int64_t p) const;
};

MaassForm parse_form(std::istream& in);
MaassForm parse_form_file(const std::string& path);
MaassForm parse_form_text(const std::string& text);
std::string serialize_form(const MaassForm& f);

// Kim-Sarnak: |lambda(p)| <= p^{7/64} + p^{-7/64}.
mp_real kim_sarnak_bound(std::int64_t p);
// Validates all invariants; throws InvariantError.
void validate(const MaassForm& f, double tol);

mp_complex hecke_coeff(const MaassForm& f, std::int64_t n);
// lambda(1..X), index 0 unused.
std::vector<mp_complex> hecke_table(const MaassForm& f, std::int64_t X);
mp_complex prime_power_a(const MaassForm& f, std::int64_t p, unsigned m);

// Exact values: the source decimal when available, else the binary value.
QComplex exact_lambda_p(const MaassForm& f, std::int64_t p);
QComplex exact_xi(const MaassForm& f, std::int64_t n);
std::vector<QComplex> hecke_table_exact(const MaassForm& f, std::int64_t X);

MaassForm dual_form(const MaassForm& f);
bool equivalent(const MaassForm& a, const MaassForm& b, double tol);

// Sieve helpers shared by the series layer.
std::vector<std::int64_t> primes_up_to(std::int64_t n);
// smallest prime factor table, spf[n] for n <= X
std::vector<std::int64_t> smallest_prime_factors(std::int64_t X);

}  // namespace ltwist
