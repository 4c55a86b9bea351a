#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <string>

namespace ltwist {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;
using mp_complex = std::complex<mp_real>;

struct PrecisionContext {
    unsigned work_bits = 128;
    double tol = 1e-10;
    int max_quad_depth = 12;

    unsigned digits10() const { return static_cast<unsigned>(work_bits * 0.30103) + 1; }
    PrecisionContext with_bits(unsigned bits) const {
        PrecisionContext c = *this;
        c.work_bits = bits;
        return c;
    }
};

// MPFR default precision is process-wide; set it before spawning workers.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned bits);
    explicit ScopedPrecision(const PrecisionContext& ctx) : ScopedPrecision(ctx.work_bits) {}
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

unsigned current_bits();

mp_real pi();
mp_real ln2();
mp_real mp_eps();  // 2^-current_bits

mp_real parse_real(const std::string& text);
std::string to_string(const mp_real& x, int digits = 20);
std::string to_string(const mp_complex& z, int digits = 20);

inline bool finite(const mp_complex& z) {
    return boost::multiprecision::isfinite(z.real()) && boost::multiprecision::isfinite(z.imag());
}

inline double to_double(const mp_real& x) { return x.convert_to<double>(); }
inline mp_real mp_max(const mp_real& a, const mp_real& b) { return a < b ? b : a; }
inline mp_real mp_min(const mp_real& a, const mp_real& b) { return b < a ? b : a; }

}  // namespace ltwist
