#include "ltwist/precision.hpp"

#include <cmath>
#include <sstream>

namespace ltwist {

namespace {
unsigned bits_to_digits(unsigned bits) { return static_cast<unsigned>(std::ceil(bits * 0.30103)) + 1; }
unsigned digits_to_bits(unsigned d) { return static_cast<unsigned>(std::ceil(d / 0.30103)); }
}  // namespace

ScopedPrecision::ScopedPrecision(unsigned bits) : saved_(mp_real::default_precision()) {
    mp_real::default_precision(bits_to_digits(bits));
}

ScopedPrecision::~ScopedPrecision() { mp_real::default_precision(saved_); }

unsigned current_bits() { return digits_to_bits(mp_real::default_precision()); }

mp_real pi() {
    mp_real r;
    mpfr_const_pi(r.backend().data(), GMP_RNDN);
    return r;
}

mp_real ln2() {
    mp_real r;
    mpfr_const_log2(r.backend().data(), GMP_RNDN);
    return r;
}

mp_real mp_eps() { return boost::multiprecision::ldexp(mp_real(1), -static_cast<int>(current_bits())); }

mp_real parse_real(const std::string& text) { return mp_real(text); }

std::string to_string(const mp_real& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string to_string(const mp_complex& z, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << boost::multiprecision::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace ltwist
