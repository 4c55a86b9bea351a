#include "ltwist/forms.hpp"

#include "ltwist/dirichlet.hpp"
#include "ltwist/errors.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

namespace ltwist {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

mp_real decimal(const std::string& tok, int line) {
    try {
        return parse_real(tok);
    } catch (const std::exception&) {
        throw ParseError(line, "bad decimal '" + tok + "'");
    }
}

std::int64_t integer(const std::string& tok, int line) {
    try {
        size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(line, "bad integer '" + tok + "'");
    }
}

mp_complex complex_pair(const std::vector<std::string>& w, int line, std::string& raw) {
    if (w.size() != 2) throw ParseError(line, "expected '<re> <im>'");
    raw = w[0] + " " + w[1];
    return {decimal(w[0], line), decimal(w[1], line)};
}

std::string fmt(const mp_complex& z) {
    return to_string(z.real(), 30) + " " + to_string(z.imag(), 30);
}

}  // namespace

mp_complex MaassForm::xi_at(std::int64_t n) const {
    std::int64_t r = n % level;
    if (r < 0) r += level;
    if (xi.empty()) return std::gcd(r, level) == 1 || level == 1 ? mp_complex(mp_real(1)) : mp_complex(mp_real(0));
    return xi[r];
}

const mp_complex& MaassForm::lambda_p(std::int64_t p) const {
    auto it = prime_coeffs.find(p);
    if (it == prime_coeffs.end()) throw MissingPrimeError("lambda(" + std::to_string(p) + ") not in form data");
    return it->second;
}

mp_real kim_sarnak_bound(std::int64_t p) {
    mp_real e = pow(mp_real(p), mp_real(7) / 64);
    return e + 1 / e;
}

void validate(const MaassForm& f, double tol) {
    if (f.level < 1) throw InvariantError("level must be positive");
    if (f.weight != 0 && f.weight != 1) throw InvariantError("weight must be 0 or 1");
    if (f.eps != 1 && f.eps != -1) throw InvariantError("eps must be +1 or -1");
    if (abs(abs(f.eta) - 1) > tol) throw InvariantError("|eta| != 1");
    const mp_real re = f.nu.real(), im = f.nu.imag();
    const bool imaginary = abs(re) <= tol && im >= -tol;
    const bool small_real = abs(im) <= tol && re > 0 && re <= mp_real(7) / 64 + tol;
    if (f.weight == 0 && !imaginary && !small_real) throw InvariantError("nu outside i[0,inf) u (0,7/64]");
    if (f.weight == 1 && !imaginary) throw InvariantError("nu outside i[0,inf) for weight 1");
    if (!f.xi.empty()) {
        if (static_cast<std::int64_t>(f.xi.size()) != f.level) throw InvariantError("xi table has wrong length");
        if (abs(f.xi[1 % f.level] - mp_complex(mp_real(1))) > tol) throw InvariantError("xi(1) != 1");
    }
    if (f.provenance.empty()) throw InvariantError("provenance is empty");
    for (const auto& [p, l] : f.prime_coeffs) {
        if (!is_prime(p)) throw InvariantError(std::to_string(p) + " is not prime");
        if (abs(l) > kim_sarnak_bound(p)) throw InvariantError("Kim-Sarnak bound violated at p=" + std::to_string(p));
    }
}

MaassForm parse_form(std::istream& in) {
    MaassForm f;
    std::string line;
    int ln = 0;
    auto next = [&](std::string& out) {
        while (std::getline(in, out)) {
            ++ln;
            out = trim(out);
            if (!out.empty()) return true;
        }
        return false;
    };
    if (!next(line) || line != "FORM v1") throw ParseError(ln, "missing 'FORM v1' header");
    bool seen_coeffs = false;
    std::map<std::string, bool> seen;
    while (next(line)) {
        if (line == "coeffs") {
            seen_coeffs = true;
            break;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(ln, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (seen[key]) throw ParseError(ln, "duplicate key '" + key + "'");
        seen[key] = true;
        auto w = split_ws(val);
        if (key == "N") {
            if (w.size() != 1) throw ParseError(ln, "N takes one value");
            f.level = integer(w[0], ln);
            if (f.level < 1) throw ParseError(ln, "N must be positive");
        } else if (key == "k") {
            if (w.size() != 1 || (w[0] != "0" && w[0] != "1")) throw ParseError(ln, "k must be 0 or 1");
            f.weight = w[0] == "1";
        } else if (key == "eps") {
            if (w.size() != 1) throw ParseError(ln, "eps takes one value");
            if (w[0] == "+1" || w[0] == "1")
                f.eps = 1;
            else if (w[0] == "-1")
                f.eps = -1;
            else
                throw ParseError(ln, "eps must be +1 or -1");
        } else if (key == "eta") {
            f.eta = complex_pair(w, ln, f.raw["eta"]);
        } else if (key == "nu") {
            f.nu = complex_pair(w, ln, f.raw["nu"]);
        } else if (key == "xi") {
            if (val == "trivial") continue;
            if (w.empty() || w[0] != "values:") throw ParseError(ln, "xi must be 'trivial' or 'values: ...'");
            if (!seen["N"]) throw ParseError(ln, "xi values given before N");
            if (static_cast<std::int64_t>(w.size()) - 1 != f.level - 1)
                throw ParseError(ln, "xi needs N-1 values");
            f.xi.assign(f.level, mp_complex(mp_real(0)));
            f.xi[0] = f.level == 1 ? mp_complex(mp_real(1)) : mp_complex(mp_real(0));
            for (std::int64_t r = 1; r < f.level; ++r) {
                const std::string& t = w[r];
                auto c = t.find(',');
                if (c == std::string::npos) throw ParseError(ln, "xi value '" + t + "' is not 're,im'");
                f.xi[r] = mp_complex(decimal(t.substr(0, c), ln), decimal(t.substr(c + 1), ln));
            }
            f.raw["xi"] = val;
        } else if (key == "prec") {
            if (w.size() != 1) throw ParseError(ln, "prec takes one value");
            decimal(w[0], ln);
            f.prec = w[0];
        } else if (key == "provenance") {
            f.provenance = val;
        } else {
            throw ParseError(ln, "unknown key '" + key + "'");
        }
    }
    if (!seen_coeffs) throw ParseError(ln, "missing 'coeffs' section");
    for (const char* req : {"N", "k", "eps", "eta", "nu", "xi", "prec", "provenance"})
        if (!seen[req]) throw ParseError(ln, std::string("missing key '") + req + "'");
    bool ended = false;
    while (next(line)) {
        if (line == "end") {
            ended = true;
            break;
        }
        auto w = split_ws(line);
        if (w.size() != 2 && w.size() != 3) throw ParseError(ln, "expected '<p> <re> [<im>]'");
        std::int64_t p = integer(w[0], ln);
        if (f.prime_coeffs.count(p)) throw ParseError(ln, "duplicate prime " + w[0]);
        mp_complex v(decimal(w[1], ln), w.size() == 3 ? decimal(w[2], ln) : mp_real(0));
        f.prime_coeffs[p] = v;
        f.raw["p" + w[0]] = w.size() == 3 ? w[1] + " " + w[2] : w[1];
    }
    if (!ended) throw ParseError(ln, "missing 'end'");
    // largest n whose prime factors all have data
    std::int64_t bound = 1;
    for (std::int64_t p = 2;; ++p) {
        if (!is_prime(p)) continue;
        if (!f.prime_coeffs.count(p)) {
            bound = p - 1;
            break;
        }
    }
    f.coeff_bound = bound;
    validate(f, 1e-12);
    return f;
}

MaassForm parse_form_text(const std::string& text) {
    std::istringstream is(text);
    return parse_form(is);
}

MaassForm parse_form_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open " + path);
    return parse_form(in);
}

std::string serialize_form(const MaassForm& f) {
    auto rawor = [&](const std::string& key, const std::string& fallback) {
        auto it = f.raw.find(key);
        return it == f.raw.end() ? fallback : it->second;
    };
    std::ostringstream os;
    os << "FORM v1\n";
    os << "N = " << f.level << "\n";
    os << "k = " << f.weight << "\n";
    os << "eps = " << (f.eps > 0 ? "+1" : "-1") << "\n";
    os << "eta = " << rawor("eta", fmt(f.eta)) << "\n";
    os << "nu = " << rawor("nu", fmt(f.nu)) << "\n";
    if (f.xi.empty()) {
        os << "xi = trivial\n";
    } else {
        std::string vals = "values:";
        for (std::int64_t r = 1; r < f.level; ++r)
            vals += " " + to_string(f.xi[r].real(), 30) + "," + to_string(f.xi[r].imag(), 30);
        os << "xi = " << rawor("xi", vals) << "\n";
    }
    os << "prec = " << f.prec << "\n";
    os << "provenance = " << f.provenance << "\n";
    os << "coeffs\n";
    for (const auto& [p, v] : f.prime_coeffs) {
        std::string fallback = to_string(v.real(), 30);
        if (v.imag() != 0) fallback += " " + to_string(v.imag(), 30);
        os << p << " " << rawor("p" + std::to_string(p), fallback) << "\n";
    }
    os << "end\n";
    return os.str();
}

std::vector<std::int64_t> smallest_prime_factors(std::int64_t X) {
    std::vector<std::int64_t> spf(X + 1, 0);
    for (std::int64_t i = 2; i <= X; ++i) {
        if (spf[i]) continue;
        for (std::int64_t j = i; j <= X; j += i)
            if (!spf[j]) spf[j] = i;
    }
    return spf;
}

std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    auto spf = smallest_prime_factors(n);
    for (std::int64_t i = 2; i <= n; ++i)
        if (spf[i] == i) out.push_back(i);
    return out;
}

namespace {

// lambda(p^e) from the Hecke recurrence.
mp_complex prime_power_lambda(const MaassForm& f, std::int64_t p, unsigned e) {
    const mp_complex& l = f.lambda_p(p);
    const mp_complex x = f.xi_at(p);
    mp_complex prev(mp_real(1)), cur = l;
    if (e == 0) return prev;
    for (unsigned j = 1; j < e; ++j) {
        mp_complex nxt = l * cur - x * prev;
        prev = cur;
        cur = nxt;
    }
    return cur;
}

}  // namespace

mp_complex hecke_coeff(const MaassForm& f, std::int64_t n) {
    if (n < 1) throw PreconditionError("hecke_coeff: n must be positive");
    mp_complex r(mp_real(1));
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        r *= prime_power_lambda(f, p, e);
    }
    if (m > 1) r *= prime_power_lambda(f, m, 1);
    return r;
}

std::vector<mp_complex> hecke_table(const MaassForm& f, std::int64_t X) {
    if (X > f.coeff_bound) throw MissingPrimeError("hecke_table: X exceeds coeff_bound");
    std::vector<mp_complex> t(X + 1, mp_complex(mp_real(0)));
    if (X >= 1) t[1] = mp_complex(mp_real(1));
    auto spf = smallest_prime_factors(X);
    for (std::int64_t n = 2; n <= X; ++n) {
        std::int64_t p = spf[n], m = n;
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (m == 1)
            t[n] = prime_power_lambda(f, p, e);
        else
            t[n] = t[n / m] * t[m];
    }
    return t;
}

mp_complex prime_power_a(const MaassForm& f, std::int64_t p, unsigned m) {
    if (m == 0) throw PreconditionError("prime_power_a: m must be positive");
    const mp_complex& l = f.lambda_p(p);
    const mp_complex x = f.xi_at(p);
    // Newton: s_m = e1 s_{m-1} - e2 s_{m-2}, s_0 = 2
    mp_complex s0(mp_real(2)), s1 = l;
    for (unsigned j = 1; j < m; ++j) {
        mp_complex s2 = l * s1 - x * s0;
        s0 = s1;
        s1 = s2;
    }
    return s1;
}

QComplex exact_lambda_p(const MaassForm& f, std::int64_t p) {
    const mp_complex& v = f.lambda_p(p);
    auto it = f.raw.find("p" + std::to_string(p));
    if (it != f.raw.end()) {
        auto w = split_ws(it->second);
        return {parse_rational(w[0]), w.size() > 1 ? parse_rational(w[1]) : mpq(0)};
    }
    return {v.real().convert_to<mpq>(), v.imag().convert_to<mpq>()};
}

QComplex exact_xi(const MaassForm& f, std::int64_t n) {
    mp_complex v = f.xi_at(n);
    return {v.real().convert_to<mpq>(), v.imag().convert_to<mpq>()};
}

std::vector<QComplex> hecke_table_exact(const MaassForm& f, std::int64_t X) {
    if (X > f.coeff_bound) throw MissingPrimeError("hecke_table_exact: X exceeds coeff_bound");
    std::vector<QComplex> t(X + 1);
    if (X >= 1) t[1] = QComplex(1);
    auto spf = smallest_prime_factors(X);
    for (std::int64_t n = 2; n <= X; ++n) {
        std::int64_t p = spf[n], m = n, pe = 1;
        while (m % p == 0) {
            m /= p;
            pe *= p;
        }
        if (m != 1) {
            t[n] = t[pe] * t[m];
        } else if (pe == p) {
            t[n] = exact_lambda_p(f, p);
        } else {
            t[n] = t[p] * t[pe / p] - exact_xi(f, p) * t[pe / (p * p)];
        }
    }
    return t;
}

MaassForm dual_form(const MaassForm& f) {
    MaassForm g = f;
    g.eta = std::conj(f.eta);
    // weight 0 data is even in nu, so the admissible representative is kept
    if (f.weight == 1) g.nu = std::conj(f.nu);
    for (auto& v : g.xi) v = std::conj(v);
    for (auto& [p, v] : g.prime_coeffs) v = std::conj(v);
    g.raw.clear();
    return g;
}

bool equivalent(const MaassForm& a, const MaassForm& b, double tol) {
    if (a.level != b.level || a.weight != b.weight || a.eps != b.eps) return false;
    if (abs(a.eta - b.eta) > tol || abs(a.nu - b.nu) > tol) return false;
    for (std::int64_t r = 0; r < a.level; ++r)
        if (abs(a.xi_at(r) - b.xi_at(r)) > tol) return false;
    if (a.prime_coeffs.size() != b.prime_coeffs.size()) return false;
    for (const auto& [p, v] : a.prime_coeffs) {
        auto it = b.prime_coeffs.find(p);
        if (it == b.prime_coeffs.end() || abs(it->second - v) > tol) return false;
    }
    return true;
}

}  // namespace ltwist
