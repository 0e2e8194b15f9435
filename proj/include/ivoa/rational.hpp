#pragma once

// Exact rational scalars. GMP's mpq_class already provides arbitrary-precision
// canonical fractions (reduced, denominator > 0 after canonicalize()), so the
// project-wide Rat type is an alias plus a handful of helpers that GMP does not
// ship: string round-trips in "p/q" form, floor/ceil to mpz, and exact integer
// square roots used by the lattice enumeration.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ivoa {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p", or "p/q" (no decimals, no whitespace).
inline Rat parse_rat(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    for (char ch : text) {
        if (!(ch == '-' || ch == '/' || (ch >= '0' && ch <= '9')))
            throw std::invalid_argument("bad rational literal: " + text);
    }
    Rat r;
    if (r.set_str(text, 10) != 0 || (text.find('/') != std::string::npos &&
                                     mpz_sgn(r.get_den().get_mpz_t()) == 0))
        throw std::invalid_argument("bad rational literal: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("bad rational literal: " + text);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline Int floor_int(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline Int ceil_int(const Rat& r) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

// floor(sqrt(n)) for n >= 0.
inline Int isqrt(const Int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative value");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline long long to_ll(const Int& n) {
    if (!n.fits_slong_p()) throw std::overflow_error("integer does not fit in long long");
    return n.get_si();
}

// GMP classes have no long long overloads; long is 64-bit on every platform
// this project targets.
inline Int to_int(long long v) { return Int(static_cast<long>(v)); }

// Largest integer m with m <= u + sqrt(s); requires s >= 0.
inline Int floor_add_sqrt(const Rat& u, const Rat& s) {
    if (s < 0) throw std::domain_error("floor_add_sqrt: negative radicand");
    // sqrt(s) = sqrt(num*den)/den, bracketed by the integer square root.
    Int nd = s.get_num() * s.get_den();
    Int w = isqrt(nd);
    Rat root_lb(w, s.get_den());
    root_lb.canonicalize();
    Int m = floor_int(u + root_lb);
    // At most one correction step: candidate m+1 is valid iff m+1-u <= sqrt(s).
    Rat diff = Rat(m + 1) - u;
    if (diff <= 0 || diff * diff <= s) m = m + 1;
    return m;
}

// Smallest integer m with m >= u - sqrt(s); requires s >= 0.
inline Int ceil_sub_sqrt(const Rat& u, const Rat& s) {
    if (s < 0) throw std::domain_error("ceil_sub_sqrt: negative radicand");
    Rat nu = -u;
    Int m = floor_add_sqrt(nu, s);   // largest m with m <= -u + sqrt(s)
    return -m;
}

}  // namespace ivoa
