#pragma once

// Positive-definite Gram lattices with exact rational arithmetic:
//   - LDL^T decomposition (doubles as the positive-definiteness check),
//   - dual basis vectors (columns of A^{-1}),
//   - complete enumeration of {k in Z^n : Q(k + t) <= B} for rational t, B by
//     the Fincke-Pohst recursion, run in pure integer arithmetic after exact
//     rescaling (int64 when a preflight bound check allows, GMP otherwise),
//   - a bucketed norm histogram used by the graded-dimension engine.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ivoa/errors.hpp"
#include "ivoa/rational.hpp"

namespace ivoa {

class GramLattice {
  public:
    explicit GramLattice(std::vector<std::vector<Rat>> gram) : gram_(std::move(gram)) {
        n_ = static_cast<int>(gram_.size());
        if (n_ == 0) throw Error("Gram matrix must be non-empty");
        for (const auto& row : gram_)
            if (static_cast<int>(row.size()) != n_) throw Error("Gram matrix must be square");
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (gram_[i][j] != gram_[j][i]) throw Error("Gram matrix must be symmetric");
        compute_ldl_();
        compute_inverse_();
    }

    // Built-in Cartan matrices ("A1", "E7", "E8"); nodes are 0-indexed with the
    // E8 diagram a 7-node chain plus one node attached to chain position 4, and
    // E7 the full subdiagram on the last seven E8 nodes.
    static GramLattice builtin(const std::string& name);

    int rank() const { return n_; }
    const std::vector<std::vector<Rat>>& gram() const { return gram_; }

    Rat qform(const std::vector<Rat>& v) const {
        check_dim_(v);
        Rat s(0);
        for (int i = 0; i < n_; ++i) {
            if (v[static_cast<size_t>(i)] == 0) continue;
            Rat row(0);
            for (int j = 0; j < n_; ++j) row += gram_[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
            s += v[static_cast<size_t>(i)] * row;
        }
        return s;
    }

    Rat pairing(const std::vector<Rat>& u, const std::vector<Rat>& v) const {
        check_dim_(u);
        check_dim_(v);
        Rat s(0);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                s += u[static_cast<size_t>(i)] * gram_[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[static_cast<size_t>(j)];
        return s;
    }

    // i-th dual basis vector (column i of A^{-1}): the fundamental weight dual
    // to basis vector i when A is a Cartan matrix.
    std::vector<Rat> dual_weight(int i) const {
        if (i < 0 || i >= n_) throw DimensionMismatch("dual weight index out of range");
        std::vector<Rat> w(static_cast<size_t>(n_));
        for (int r = 0; r < n_; ++r) w[static_cast<size_t>(r)] = inv_[static_cast<size_t>(r)][static_cast<size_t>(i)];
        return w;
    }

    Rat determinant() const {
        Rat d(1);
        for (const Rat& x : D_) d *= x;
        return d;
    }

    const std::vector<std::vector<Rat>>& ldl_L() const { return L_; }
    const std::vector<Rat>& ldl_D() const { return D_; }
    const std::vector<std::vector<Rat>>& inverse() const { return inv_; }

    // Integer entries with even diagonal, so Q(k) is even for integer k.
    bool is_even_integral() const {
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const Rat& e = gram_[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!is_integer(e)) return false;
                if (i == j && !is_integer(e / 2)) return false;
            }
        return true;
    }

    // A t has integer entries, so Q(k + t) - Q(t) is even for integer k when
    // the lattice is even integral.
    bool has_integral_pairing(const std::vector<Rat>& t) const {
        check_dim_(t);
        for (int i = 0; i < n_; ++i) {
            Rat s(0);
            for (int j = 0; j < n_; ++j) s += gram_[static_cast<size_t>(i)][static_cast<size_t>(j)] * t[static_cast<size_t>(j)];
            if (!is_integer(s)) return false;
        }
        return true;
    }

  private:
    void check_dim_(const std::vector<Rat>& v) const {
        if (static_cast<int>(v.size()) != n_)
            throw DimensionMismatch("vector length " + std::to_string(v.size()) + " does not match rank " +
                                    std::to_string(n_));
    }

    // A = L D L^T with unit lower-triangular L; all D_i > 0 iff A is positive
    // definite (checked as we go, before any division).
    void compute_ldl_() {
        L_.assign(static_cast<size_t>(n_), std::vector<Rat>(static_cast<size_t>(n_), Rat(0)));
        D_.assign(static_cast<size_t>(n_), Rat(0));
        for (int i = 0; i < n_; ++i) {
            L_[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
            Rat d = gram_[static_cast<size_t>(i)][static_cast<size_t>(i)];
            for (int k = 0; k < i; ++k)
                d -= L_[static_cast<size_t>(i)][static_cast<size_t>(k)] * L_[static_cast<size_t>(i)][static_cast<size_t>(k)] * D_[static_cast<size_t>(k)];
            if (d <= 0) throw NotPositiveDefinite("Gram matrix is not positive definite");
            D_[static_cast<size_t>(i)] = d;
            for (int j = i + 1; j < n_; ++j) {
                Rat v = gram_[static_cast<size_t>(j)][static_cast<size_t>(i)];
                for (int k = 0; k < i; ++k)
                    v -= L_[static_cast<size_t>(j)][static_cast<size_t>(k)] * L_[static_cast<size_t>(i)][static_cast<size_t>(k)] * D_[static_cast<size_t>(k)];
                L_[static_cast<size_t>(j)][static_cast<size_t>(i)] = v / d;
            }
        }
    }

    void compute_inverse_() {
        // Gauss-Jordan with partial pivoting on [A | I].
        std::vector<std::vector<Rat>> m(static_cast<size_t>(n_), std::vector<Rat>(static_cast<size_t>(2 * n_), Rat(0)));
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) m[static_cast<size_t>(i)][static_cast<size_t>(j)] = gram_[static_cast<size_t>(i)][static_cast<size_t>(j)];
            m[static_cast<size_t>(i)][static_cast<size_t>(n_ + i)] = 1;
        }
        for (int c = 0; c < n_; ++c) {
            int p = c;
            while (p < n_ && m[static_cast<size_t>(p)][static_cast<size_t>(c)] == 0) ++p;
            if (p == n_) throw NotPositiveDefinite("Gram matrix is singular");
            std::swap(m[static_cast<size_t>(p)], m[static_cast<size_t>(c)]);
            Rat piv = m[static_cast<size_t>(c)][static_cast<size_t>(c)];
            for (int j = c; j < 2 * n_; ++j) m[static_cast<size_t>(c)][static_cast<size_t>(j)] /= piv;
            for (int r = 0; r < n_; ++r) {
                if (r == c || m[static_cast<size_t>(r)][static_cast<size_t>(c)] == 0) continue;
                Rat f = m[static_cast<size_t>(r)][static_cast<size_t>(c)];
                for (int j = c; j < 2 * n_; ++j)
                    m[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(c)][static_cast<size_t>(j)];
            }
        }
        inv_.assign(static_cast<size_t>(n_), std::vector<Rat>(static_cast<size_t>(n_), Rat(0)));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) inv_[static_cast<size_t>(i)][static_cast<size_t>(j)] = m[static_cast<size_t>(i)][static_cast<size_t>(n_ + j)];
    }

    int n_ = 0;
    std::vector<std::vector<Rat>> gram_;
    std::vector<std::vector<Rat>> L_;
    std::vector<Rat> D_;
    std::vector<std::vector<Rat>> inv_;
};

namespace detail {

inline std::vector<std::vector<Rat>> cartan_matrix(int n, std::initializer_list<std::pair<int, int>> edges) {
    std::vector<std::vector<Rat>> a(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n), Rat(0)));
    for (int i = 0; i < n; ++i) a[static_cast<size_t>(i)][static_cast<size_t>(i)] = 2;
    for (auto [u, v] : edges) {
        a[static_cast<size_t>(u)][static_cast<size_t>(v)] = -1;
        a[static_cast<size_t>(v)][static_cast<size_t>(u)] = -1;
    }
    return a;
}

}  // namespace detail

inline GramLattice GramLattice::builtin(const std::string& name) {
    if (name == "A1") return GramLattice(detail::cartan_matrix(1, {}));
    if (name == "E7")
        return GramLattice(detail::cartan_matrix(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 6}}));
    if (name == "E8")
        return GramLattice(detail::cartan_matrix(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {4, 7}}));
    throw UnknownLattice("unknown lattice name: " + name);
}

namespace detail {

constexpr long long kNoLowerBound = std::numeric_limits<long long>::min() / 4;

// The enumeration problem rescaled to integers. With A = L D L^T and x = k + t,
//   Q(x) = sum_i D_i y_i^2,  y_i = x_i + sum_{j>i} L[j][i] x_j,
// so after clearing denominators (M for the linear data, Dd for D, W = M^2 Dd)
// every partial norm W * sum D_i y_i^2 is the integer sum of dhat_i * chat_i^2
// with chat_i = M k_i + That_i + sum_{j>i} Lhat[j][i] k_j.
struct ScaledZ {
    int n = 0;
    Int M, W, twoW, Bhat;
    std::vector<Int> dhat;                // D_i * Dd
    std::vector<std::vector<Int>> Lhat;   // Lhat[j][i] = M * L[j][i] for i < j
    std::vector<Int> That;                // M * (t_i + sum_{j>i} L[j][i] t_j)
    std::vector<long long> klow;          // per-coordinate lower bound on k_i
    std::vector<Int> kext;                // |k_i| never exceeds kext[i]
};

inline ScaledZ build_scaled(const GramLattice& lat, const std::vector<Rat>& center, const Rat& bound,
                            const std::vector<long long>& klow) {
    const int n = lat.rank();
    const auto& L = lat.ldl_L();
    const auto& D = lat.ldl_D();
    ScaledZ P;
    P.n = n;
    P.klow = klow;

    std::vector<Rat> T(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Rat s = center[static_cast<size_t>(i)];
        for (int j = i + 1; j < n; ++j) s += L[static_cast<size_t>(j)][static_cast<size_t>(i)] * center[static_cast<size_t>(j)];
        T[static_cast<size_t>(i)] = s;
    }

    Int M(1), Dd(1);
    for (int j = 0; j < n; ++j) {
        mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), T[static_cast<size_t>(j)].get_den().get_mpz_t());
        mpz_lcm(Dd.get_mpz_t(), Dd.get_mpz_t(), D[static_cast<size_t>(j)].get_den().get_mpz_t());
        for (int i = 0; i < j; ++i)
            mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), L[static_cast<size_t>(j)][static_cast<size_t>(i)].get_den().get_mpz_t());
    }
    P.M = M;
    P.W = M * M * Dd;
    P.twoW = 2 * P.W;
    P.Bhat = floor_int(bound * Rat(P.W));

    P.dhat.resize(static_cast<size_t>(n));
    P.That.resize(static_cast<size_t>(n));
    P.Lhat.assign(static_cast<size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        P.dhat[static_cast<size_t>(i)] = Rat(D[static_cast<size_t>(i)] * Rat(Dd)).get_num();
        P.That[static_cast<size_t>(i)] = Rat(T[static_cast<size_t>(i)] * Rat(M)).get_num();
    }
    for (int j = 0; j < n; ++j) {
        P.Lhat[static_cast<size_t>(j)].resize(static_cast<size_t>(j));
        for (int i = 0; i < j; ++i)
            P.Lhat[static_cast<size_t>(j)][static_cast<size_t>(i)] = Rat(L[static_cast<size_t>(j)][static_cast<size_t>(i)] * Rat(M)).get_num();
    }

    P.kext.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        // |k_i + t_i| <= sqrt(B * (A^{-1})_{ii}) on the ellipsoid
        Rat invd = lat.inverse()[static_cast<size_t>(i)][static_cast<size_t>(i)];
        Rat t = center[static_cast<size_t>(i)];
        if (t < 0) t = -t;
        Rat rad = bound * invd;
        if (rad < 0) rad = 0;
        P.kext[static_cast<size_t>(i)] = floor_add_sqrt(t, rad) + 1;
    }
    return P;
}

struct ScaledLL {
    int n = 0;
    long long M = 0, twoW = 0, Bhat = 0;
    std::vector<long long> dhat;
    std::vector<std::vector<long long>> Lhat;
    std::vector<long long> That;
    std::vector<long long> klow;
};

// Overflow preflight: every intermediate the int64 recursion forms stays below
// 2^62 if these bounds hold (interval endpoints |M k_i + S| <= H + extra slack,
// partial sums |S| bounded through the per-coordinate extents).
inline bool fits_int64(const ScaledZ& P) {
    const Int LIM = Int(1) << 62;
    if (P.Bhat >= LIM || P.twoW >= LIM || P.M >= LIM) return false;
    for (int i = 0; i < P.n; ++i) {
        if (P.dhat[static_cast<size_t>(i)] >= LIM) return false;
        Int s = abs(P.That[static_cast<size_t>(i)]);
        for (int j = i + 1; j < P.n; ++j)
            s += abs(P.Lhat[static_cast<size_t>(j)][static_cast<size_t>(i)]) * P.kext[static_cast<size_t>(j)];
        s += P.M * (P.kext[static_cast<size_t>(i)] + 2);
        if (s >= LIM) return false;
    }
    return true;
}

inline ScaledLL to_int64(const ScaledZ& P) {
    ScaledLL Q;
    Q.n = P.n;
    Q.M = to_ll(P.M);
    Q.twoW = to_ll(P.twoW);
    Q.Bhat = to_ll(P.Bhat);
    Q.klow = P.klow;
    Q.dhat.reserve(P.dhat.size());
    for (const Int& v : P.dhat) Q.dhat.push_back(to_ll(v));
    Q.That.reserve(P.That.size());
    for (const Int& v : P.That) Q.That.push_back(to_ll(v));
    Q.Lhat.resize(P.Lhat.size());
    for (size_t j = 0; j < P.Lhat.size(); ++j)
        for (const Int& v : P.Lhat[j]) Q.Lhat[j].push_back(to_ll(v));
    return Q;
}

template <class I>
struct IntOps;

template <>
struct IntOps<long long> {
    static long long floordiv(long long a, long long b) {
        long long q = a / b, r = a % b;
        return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
    }
    static long long ceildiv(long long a, long long b) { return -floordiv(-a, b); }
    static long long isqrt_nn(long long a) {
        long long r = static_cast<long long>(std::sqrt(static_cast<double>(a)));
        while (r > 0 && r * r > a) --r;
        while ((r + 1) * (r + 1) <= a) ++r;
        return r;
    }
    static long long as_ll(long long v) { return v; }
};

template <>
struct IntOps<Int> {
    static Int floordiv(const Int& a, const Int& b) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
    static Int ceildiv(const Int& a, const Int& b) {
        Int q;
        mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return q;
    }
    static Int isqrt_nn(const Int& a) { return isqrt(a); }
    static long long as_ll(const Int& v) { return to_ll(v); }
};

template <class Sc, class I, class Visit>
void fp_level(const Sc& P, int l, const I& qabove, std::vector<std::vector<I>>& S,
              std::vector<long long>& k, Visit& visit) {
    using Ops = IntOps<I>;
    const I& Sl = S[static_cast<size_t>(l + 1)][static_cast<size_t>(l)];
    I rem = P.Bhat - qabove;
    I H = Ops::isqrt_nn(rem / P.dhat[static_cast<size_t>(l)]);
    long long lo = Ops::as_ll(Ops::ceildiv(-H - Sl, P.M));
    long long hi = Ops::as_ll(Ops::floordiv(H - Sl, P.M));
    if (lo < P.klow[static_cast<size_t>(l)]) lo = P.klow[static_cast<size_t>(l)];
    if (l == 0) {
        for (long long kk = lo; kk <= hi; ++kk) {
            k[0] = kk;
            I kI(static_cast<long>(kk));
            I c = P.M * kI + Sl;
            I q = qabove + P.dhat[0] * c * c;
            visit(k, q);
        }
        return;
    }
    for (long long kk = lo; kk <= hi; ++kk) {
        k[static_cast<size_t>(l)] = kk;
        I kI(static_cast<long>(kk));
        I c = P.M * kI + Sl;
        I q = qabove + P.dhat[static_cast<size_t>(l)] * c * c;
        for (int i = 0; i < l; ++i)
            S[static_cast<size_t>(l)][static_cast<size_t>(i)] =
                S[static_cast<size_t>(l + 1)][static_cast<size_t>(i)] + P.Lhat[static_cast<size_t>(l)][static_cast<size_t>(i)] * kI;
        fp_level(P, l - 1, q, S, k, visit);
    }
}

template <class Sc, class I, class Visit>
void fp_run(const Sc& P, Visit&& visit) {
    if (P.Bhat < 0) return;
    std::vector<std::vector<I>> S(static_cast<size_t>(P.n) + 1, std::vector<I>(static_cast<size_t>(P.n), I(0)));
    for (int i = 0; i < P.n; ++i) S[static_cast<size_t>(P.n)][static_cast<size_t>(i)] = P.That[static_cast<size_t>(i)];
    std::vector<long long> k(static_cast<size_t>(P.n), 0);
    I zero(0);
    fp_level<Sc, I>(P, P.n - 1, zero, S, k, visit);
}

}  // namespace detail

// Visits every k in Z^n with Q(k + center) <= bound exactly once, as
// visit(const std::vector<long long>& k, const Rat& norm). Coordinates run in
// ascending order with the last coordinate outermost.
template <class Visit>
void enumerate_below(const GramLattice& lat, const std::vector<Rat>& center, const Rat& bound, Visit&& visit) {
    if (static_cast<int>(center.size()) != lat.rank())
        throw DimensionMismatch("center length does not match lattice rank");
    std::vector<long long> unbounded(static_cast<size_t>(lat.rank()), detail::kNoLowerBound);
    detail::ScaledZ PZ = detail::build_scaled(lat, center, bound, unbounded);
    const Int W = PZ.W;
    if (detail::fits_int64(PZ)) {
        detail::ScaledLL P = detail::to_int64(PZ);
        detail::fp_run<detail::ScaledLL, long long>(P, [&](const std::vector<long long>& k, long long q) {
            Rat norm(to_int(q), W);
            norm.canonicalize();
            visit(k, norm);
        });
    } else {
        detail::fp_run<detail::ScaledZ, Int>(PZ, [&](const std::vector<long long>& k, const Int& q) {
            Rat norm(q, W);
            norm.canonicalize();
            visit(k, norm);
        });
    }
}

// Norm histogram bucketed by the first `bucket_coords` coordinates of k.
// Requires an even integral Gram matrix and A * center integral, so that all
// exponents Q(k + center)/2 live on exponent_base + Z; slot s of a bucket
// counts the k with Q(k + center)/2 == exponent_base + s. When
// `nonneg_bucket_coords` is set, only k with those coordinates >= 0 are
// counted.
struct HalfNormBuckets {
    Rat exponent_base;
    long long slots = 0;
    std::map<std::vector<long long>, std::vector<long long>> buckets;
};

inline HalfNormBuckets half_norm_buckets(const GramLattice& lat, const std::vector<Rat>& center,
                                         const Rat& bound, int bucket_coords, bool nonneg_bucket_coords) {
    const int n = lat.rank();
    const int r = bucket_coords;
    if (static_cast<int>(center.size()) != n) throw DimensionMismatch("center length does not match lattice rank");
    if (r < 0 || r > n) throw DimensionMismatch("bucket coordinate count out of range");
    if (!lat.is_even_integral())
        throw Error("norm histogram requires an even integral Gram matrix");
    if (!lat.has_integral_pairing(center))
        throw Error("norm histogram requires the center to pair integrally with the lattice");

    // Permute so the bucket coordinates sit outermost (highest recursion
    // levels): new index a holds old coordinate old(a).
    auto old_of = [&](int a) { return a < n - r ? a + r : a - (n - r); };
    std::vector<std::vector<Rat>> g(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(n)));
    std::vector<Rat> c(static_cast<size_t>(n));
    std::vector<long long> klow(static_cast<size_t>(n), detail::kNoLowerBound);
    for (int a = 0; a < n; ++a) {
        c[static_cast<size_t>(a)] = center[static_cast<size_t>(old_of(a))];
        if (a >= n - r && nonneg_bucket_coords) klow[static_cast<size_t>(a)] = 0;
        for (int b = 0; b < n; ++b) g[static_cast<size_t>(a)][static_cast<size_t>(b)] = lat.gram()[static_cast<size_t>(old_of(a))][static_cast<size_t>(old_of(b))];
    }
    GramLattice plat(std::move(g));
    detail::ScaledZ PZ = detail::build_scaled(plat, c, bound, klow);

    HalfNormBuckets out;
    // Every scaled norm is congruent to W*Q(center) mod 2W (evenness), so the
    // slot index (qscaled - rho) / 2W is a nonnegative integer.
    Int rho;
    {
        Int qc = Rat(plat.qform(c) * Rat(PZ.W)).get_num();
        mpz_fdiv_r(rho.get_mpz_t(), qc.get_mpz_t(), PZ.twoW.get_mpz_t());
    }
    out.exponent_base = Rat(rho, PZ.twoW);
    out.exponent_base.canonicalize();
    out.slots = (PZ.Bhat >= rho) ? to_ll((PZ.Bhat - rho) / PZ.twoW) + 1 : 0;
    if (out.slots == 0) return out;

    std::vector<long long>* counts = nullptr;
    std::vector<long long> key(static_cast<size_t>(r), 0);
    bool have_key = false;
    auto bucket_for = [&](const std::vector<long long>& k) -> std::vector<long long>* {
        // bucket key = original first-r coordinates = permuted top-r coordinates
        bool same = have_key;
        for (int i = 0; same && i < r; ++i) same = (key[static_cast<size_t>(i)] == k[static_cast<size_t>(n - r + i)]);
        if (!same) {
            for (int i = 0; i < r; ++i) key[static_cast<size_t>(i)] = k[static_cast<size_t>(n - r + i)];
            have_key = true;
            auto it = out.buckets.find(key);
            if (it == out.buckets.end())
                it = out.buckets.emplace(key, std::vector<long long>(static_cast<size_t>(out.slots), 0)).first;
            counts = &it->second;
        }
        return counts;
    };

    if (detail::fits_int64(PZ)) {
        detail::ScaledLL P = detail::to_int64(PZ);
        const long long rho_ll = to_ll(rho);
        detail::fp_run<detail::ScaledLL, long long>(P, [&](const std::vector<long long>& k, long long q) {
            (*bucket_for(k))[static_cast<size_t>((q - rho_ll) / P.twoW)]++;
        });
    } else {
        detail::fp_run<detail::ScaledZ, Int>(PZ, [&](const std::vector<long long>& k, const Int& q) {
            (*bucket_for(k))[static_cast<size_t>(to_ll((q - rho) / PZ.twoW))]++;
        });
    }
    return out;
}

}  // namespace ivoa
