#pragma once

// Truncated q-expansions with an exact rational leading exponent:
//
//     f = q^a * (c_0 + c_1 q + ... + c_N q^N) + O(q^{a+N+1}),
//
// all c_k exact rationals. Supports live on a + Z ("the grid of f"), so adding
// two series whose offsets differ by a non-integer is a domain error. Every
// operation records the tightest valid order of its result; comparisons past
// that window throw instead of silently truncating.
//
// Canonical form: either c_0 != 0, or the series is identically zero within its
// window (all coefficients zero, offset 0 by convention, slot count retained as
// the order that was actually checked).

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ivoa/errors.hpp"
#include "ivoa/rational.hpp"

namespace ivoa {

class QSeries {
  public:
    QSeries() : offset_(0), coeffs_(1, Rat(0)) {}

    QSeries(Rat offset, std::vector<Rat> coeffs) : offset_(std::move(offset)), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.assign(1, Rat(0));
        canonicalize();
    }

    static QSeries zero(int order = 0) {
        return QSeries(Rat(0), std::vector<Rat>(static_cast<size_t>(order) + 1, Rat(0)));
    }

    static QSeries constant(const Rat& c, int order = 0) {
        std::vector<Rat> v(static_cast<size_t>(order) + 1, Rat(0));
        v[0] = c;
        return QSeries(Rat(0), std::move(v));
    }

    static QSeries one(int order = 0) { return constant(Rat(1), order); }

    // q^e, exact, with `order` further slots known to vanish.
    static QSeries monomial(const Rat& e, int order = 0) {
        std::vector<Rat> v(static_cast<size_t>(order) + 1, Rat(0));
        v[0] = 1;
        return QSeries(e, std::move(v));
    }

    const Rat& offset() const { return offset_; }
    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rat>& coeffs() const { return coeffs_; }
    const Rat& coeff(int k) const {
        if (k < 0 || k > order()) throw InsufficientOrder("coefficient index outside valid window");
        return coeffs_[static_cast<size_t>(k)];
    }

    bool is_zero() const {
        for (const Rat& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    // Exponent of the last slot this expansion is valid through.
    Rat valid_through() const { return offset_ + order(); }

    // Coefficient at absolute exponent e; zero off the grid, error past the window.
    Rat coeff_at(const Rat& e) const {
        if (is_zero()) {
            if (e > Rat(order())) throw InsufficientOrder("coefficient query past valid window");
            return Rat(0);
        }
        if (e > valid_through()) throw InsufficientOrder("coefficient query past valid window");
        Rat rel = e - offset_;
        if (!is_integer(rel) || rel < 0) return Rat(0);
        long long k = to_ll(floor_int(rel));
        return coeffs_[static_cast<size_t>(k)];
    }

    // Reduce the recorded valid order to n (n <= order()).
    QSeries truncated(int n) const {
        if (n < 0) throw std::invalid_argument("negative order");
        if (n > order()) throw InsufficientOrder("truncation past valid order");
        std::vector<Rat> v(coeffs_.begin(), coeffs_.begin() + n + 1);
        return QSeries(offset_, std::move(v));
    }

  private:
    void canonicalize() {
        size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
        if (lead == coeffs_.size()) {
            offset_ = 0;
            std::fill(coeffs_.begin(), coeffs_.end(), Rat(0));
            return;
        }
        if (lead > 0) {
            offset_ += static_cast<long>(lead);
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        }
    }

    Rat offset_;
    std::vector<Rat> coeffs_;
};

inline QSeries operator-(const QSeries& f) {
    std::vector<Rat> v = f.coeffs();
    for (Rat& c : v) c = -c;
    return QSeries(f.offset(), std::move(v));
}

inline QSeries operator*(const Rat& s, const QSeries& f) {
    if (s == 0) return QSeries::zero(f.order());
    std::vector<Rat> v = f.coeffs();
    for (Rat& c : v) c *= s;
    return QSeries(f.offset(), std::move(v));
}

inline QSeries operator*(const QSeries& f, const Rat& s) { return s * f; }

inline QSeries operator+(const QSeries& a, const QSeries& b) {
    if (a.is_zero() || b.is_zero()) {
        const QSeries& f = a.is_zero() ? b : a;
        int n = std::min(a.order(), b.order());
        return f.is_zero() ? QSeries::zero(n) : f.truncated(std::min(n, f.order()));
    }
    Rat d = b.offset() - a.offset();
    if (!is_integer(d))
        throw OffsetMismatch("offsets " + rat_str(a.offset()) + " and " + rat_str(b.offset()) +
                             " differ by a non-integer");
    const Rat base = std::min(a.offset(), b.offset());
    long long sa = to_ll(floor_int(a.offset() - base));
    long long sb = to_ll(floor_int(b.offset() - base));
    long long last = std::min(sa + a.order(), sb + b.order());  // valid-through slot
    std::vector<Rat> v(static_cast<size_t>(last) + 1, Rat(0));
    for (long long k = 0; k <= a.order() && sa + k <= last; ++k) v[static_cast<size_t>(sa + k)] += a.coeffs()[static_cast<size_t>(k)];
    for (long long k = 0; k <= b.order() && sb + k <= last; ++k) v[static_cast<size_t>(sb + k)] += b.coeffs()[static_cast<size_t>(k)];
    return QSeries(base, std::move(v));
}

inline QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

inline QSeries operator*(const QSeries& a, const QSeries& b) {
    int n = std::min(a.order(), b.order());
    if (a.is_zero() || b.is_zero()) return QSeries::zero(n);
    std::vector<Rat> v(static_cast<size_t>(n) + 1, Rat(0));
    for (int i = 0; i <= n; ++i) {
        const Rat& ai = a.coeffs()[static_cast<size_t>(i)];
        if (ai == 0) continue;
        for (int j = 0; i + j <= n; ++j) {
            const Rat& bj = b.coeffs()[static_cast<size_t>(j)];
            if (bj != 0) v[static_cast<size_t>(i + j)] += ai * bj;
        }
    }
    return QSeries(a.offset() + b.offset(), std::move(v));
}

// q d/dq: multiplies the coefficient of q^{a+k} by (a+k).
inline QSeries theta_derivative(const QSeries& f) {
    std::vector<Rat> v = f.coeffs();
    for (int k = 0; k <= f.order(); ++k) v[static_cast<size_t>(k)] *= f.offset() + k;
    return QSeries(f.offset(), std::move(v));
}

// Multiplicative inverse of a series with nonzero leading coefficient.
inline QSeries inverse(const QSeries& f) {
    if (f.is_zero()) throw ZeroSeries("inverse of the zero series");
    const std::vector<Rat>& c = f.coeffs();
    int n = f.order();
    std::vector<Rat> b(static_cast<size_t>(n) + 1, Rat(0));
    b[0] = 1 / c[0];
    for (int m = 1; m <= n; ++m) {
        Rat s(0);
        for (int k = 1; k <= m; ++k)
            if (c[static_cast<size_t>(k)] != 0) s += c[static_cast<size_t>(k)] * b[static_cast<size_t>(m - k)];
        b[static_cast<size_t>(m)] = -s / c[0];
    }
    return QSeries(-f.offset(), std::move(b));
}

// f^alpha for rational alpha. Writing f = q^v * u with u(0) = 1, the result is
// q^{alpha v} * u^alpha where u^alpha comes from the J.C.P. Miller recurrence
//     n g_n = sum_{k<n} (alpha (n-k) - k) u_{n-k} g_k,
// i.e. the coefficient form of u g' = alpha u' g. Exact in rationals.
inline QSeries pow_rational(const QSeries& f, const Rat& alpha) {
    if (f.is_zero()) throw ZeroSeries("rational power of the zero series");
    if (f.coeffs()[0] != 1)
        throw NonUnitLeadingCoefficient("rational power requires leading coefficient 1, got " +
                                        rat_str(f.coeffs()[0]));
    int n = f.order();
    const std::vector<Rat>& u = f.coeffs();
    std::vector<Rat> g(static_cast<size_t>(n) + 1, Rat(0));
    g[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rat s(0);
        for (int k = 0; k < m; ++k) {
            const Rat& un = u[static_cast<size_t>(m - k)];
            if (un != 0) s += (alpha * (m - k) - k) * un * g[static_cast<size_t>(k)];
        }
        g[static_cast<size_t>(m)] = s / m;
    }
    return QSeries(alpha * f.offset(), std::move(g));
}

namespace detail {

// Multiplies `poly` in place by (1 - q^j), truncating at order n.
inline void apply_one_minus_qpow(std::vector<Rat>& poly, int j, int n) {
    if (j > n) return;
    for (int i = n - j; i >= 0; --i)
        if (poly[static_cast<size_t>(i)] != 0) poly[static_cast<size_t>(i + j)] -= poly[static_cast<size_t>(i)];
}

// Euler product prod_{j=1..n} (1 - q^j) truncated at order n.
inline std::vector<Rat> euler_product(int n) {
    std::vector<Rat> p(static_cast<size_t>(n) + 1, Rat(0));
    p[0] = 1;
    for (int j = 1; j <= n; ++j) apply_one_minus_qpow(p, j, n);
    return p;
}

}  // namespace detail

// 1/(q)_k = 1/((1-q)(1-q^2)...(1-q^k)) to order n: the generating function of
// partitions into parts of size at most k.
inline QSeries pochhammer_inv(int k, int n) {
    if (k < 0) throw DomainViolation("Pochhammer index must be nonnegative");
    if (n < 0) throw std::invalid_argument("negative order");
    std::vector<Rat> p(static_cast<size_t>(n) + 1, Rat(0));
    p[0] = 1;
    for (int j = 1; j <= k; ++j) detail::apply_one_minus_qpow(p, j, n);
    return inverse(QSeries(Rat(0), std::move(p)));
}

// 1/(q)_infinity^s to order n; s = 1 gives the partition numbers.
inline QSeries euler_inv_pow(int s, int n) {
    if (s < 0) throw DomainViolation("Euler power must be nonnegative");
    if (n < 0) throw std::invalid_argument("negative order");
    if (s == 0) return QSeries::one(n);
    QSeries base = inverse(QSeries(Rat(0), detail::euler_product(n)));
    QSeries acc = QSeries::one(n);
    for (int bit = s; bit > 0; bit >>= 1) {
        if (bit & 1) acc = acc * base;
        if (bit > 1) base = base * base;
    }
    return acc;
}

// Weight-k Eisenstein series in the normalization
//     E_k = -B_k/k! + (2/(k-1)!) sum_{j>=1} sigma_{k-1}(j) q^j,
// so E_2 = -1/12 + 2q + 6q^2 + ... and E_4 = 1/720 + q/3 + 3q^2 + ...
inline QSeries eisenstein(int k, int n) {
    if (k != 2 && k != 4) throw UnsupportedWeight("Eisenstein weight must be 2 or 4");
    if (n < 0) throw std::invalid_argument("negative order");
    std::vector<Rat> v(static_cast<size_t>(n) + 1, Rat(0));
    v[0] = (k == 2) ? rat(-1, 12) : rat(1, 720);
    for (int d = 1; d <= n; ++d) {
        // add the divisor power d^{k-1}, scaled by 2/(k-1)!, to every multiple of d
        Rat w;
        if (k == 2)
            w = Rat(2) * d;
        else
            w = Rat(Int(d) * d * d) / 3;
        for (int j = d; j <= n; j += d) v[static_cast<size_t>(j)] += w;
    }
    return QSeries(Rat(0), std::move(v));
}

// eta = q^{1/24} prod (1 - q^n); the unit part's nonzero coefficients sit at the
// pentagonal numbers with signs per Euler's theorem.
inline QSeries dedekind_eta(int n) {
    if (n < 0) throw std::invalid_argument("negative order");
    return QSeries(rat(1, 24), detail::euler_product(n));
}

struct EvalResult {
    double value = 0.0;
    double tail_bound = 0.0;  // crude bound |c_N| q0^{a+N+1} / (1 - q0) on the dropped tail
};

inline EvalResult eval_numeric(const QSeries& f, double q0) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw std::invalid_argument("evaluation point must satisfy 0 < q0 < 1");
    EvalResult r;
    double p = std::pow(q0, f.offset().get_d());
    for (int k = 0; k <= f.order(); ++k) {
        r.value += f.coeffs()[static_cast<size_t>(k)].get_d() * p;
        if (k == f.order()) r.tail_bound = std::abs(f.coeffs()[static_cast<size_t>(k)].get_d()) * p * q0 / (1.0 - q0);
        p *= q0;
    }
    return r;
}

// True iff a - b vanishes on every slot up to n above the smaller offset. A
// discrepancy visible inside the valid window returns false; claiming equality
// past either window throws InsufficientOrder. Distinct grids compare unequal.
inline bool equal_to_order(const QSeries& a, const QSeries& b, int n) {
    if (n < 0) throw std::invalid_argument("negative order");
    if (!a.is_zero() && !b.is_zero() && !is_integer(a.offset() - b.offset())) return false;
    QSeries d = a - b;
    if (d.is_zero()) {
        if (d.order() >= n) return true;
        throw InsufficientOrder("series only valid through relative order " + std::to_string(d.order()) +
                                ", comparison requested through " + std::to_string(n));
    }
    Rat base;
    if (a.is_zero())
        base = b.offset();
    else if (b.is_zero())
        base = a.offset();
    else
        base = std::min(a.offset(), b.offset());
    return d.offset() - base > n;
}

// Plain-text rendering: q^(p/q)*(c0 + c1q + c2q^2 + ...), zero terms skipped.
inline std::string to_text(const QSeries& f) {
    if (f.is_zero()) return "0";
    std::string unit;
    bool first = true;
    for (int k = 0; k <= f.order(); ++k) {
        const Rat& c = f.coeffs()[static_cast<size_t>(k)];
        if (c == 0) continue;
        Rat mag = abs(c);
        std::string term;
        if (k == 0) {
            term = rat_str(mag);
        } else {
            if (mag != 1) term = is_integer(mag) ? rat_str(mag) : "(" + rat_str(mag) + ")";
            term += "q";
            if (k > 1) term += "^" + std::to_string(k);
        }
        if (first) {
            unit = (c < 0 ? "-" : "") + term;
            first = false;
        } else {
            unit += (c < 0 ? " - " : " + ") + term;
        }
    }
    if (f.offset() == 0) return unit;
    return "q^(" + rat_str(f.offset()) + ")*(" + unit + ")";
}

}  // namespace ivoa
