#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "field.hpp"

namespace sl2lce {

// 2x2 matrix over Z/M
struct Mat {
    i64 a = 1, b = 0, c = 0, d = 1;
    friend bool operator==(const Mat&, const Mat&) = default;
};

inline Mat mat_mul(const Mat& x, const Mat& y, i64 M)
{
    return {mod(x.a * y.a + x.b * y.c, M), mod(x.a * y.b + x.b * y.d, M), mod(x.c * y.a + x.d * y.c, M),
            mod(x.c * y.b + x.d * y.d, M)};
}

inline Mat mat_inv(const Mat& x, i64 M) { return {x.d, mod(-x.b, M), mod(-x.c, M), x.a}; }

inline Mat mat_reduce(const Mat& x, i64 M) { return {mod(x.a, M), mod(x.b, M), mod(x.c, M), mod(x.d, M)}; }

// SL(2, Z/p^m) with its conjugacy classes.
class FiniteQuotient {
public:
    static constexpr i64 MAX_ORDER = 10'000'000;

    int p = 0;
    int m = 0;
    i64 M = 0;

    static i64 expected_order(int p, int m) { return ipow(p, 3 * (m - 1)) * p * (i64{p} * p - 1); }

    FiniteQuotient(int p_, int m_) : p(p_), m(m_), M(ipow(p_, m_))
    {
        if (p < 3 || p % 2 == 0 || !is_prime(p)) throw DomainError("p must be an odd prime");
        if (m < 1) throw DomainError("modulus exponent must be >= 1");
        if (expected_order(p, m) > MAX_ORDER) throw DomainError("resource guard: group order exceeds 10^7");
        enumerate();
        compute_classes();
    }

    std::size_t order() const { return keys_.size(); }
    std::size_t num_classes() const { return class_rep_.size(); }

    Mat element(std::size_t i) const { return decode(keys_[i]); }

    std::size_t index_of(const Mat& g) const
    {
        auto k = encode(mat_reduce(g, M));
        auto it = std::lower_bound(keys_.begin(), keys_.end(), k);
        if (it == keys_.end() || *it != k) throw DomainError("matrix is not in SL(2, Z/p^m)");
        return static_cast<std::size_t>(it - keys_.begin());
    }

    int class_of_index(std::size_t i) const { return cls_[i]; }
    int class_of(const Mat& g) const { return cls_[index_of(g)]; }
    Mat class_rep(int k) const { return element(class_rep_[static_cast<std::size_t>(k)]); }
    i64 class_size(int k) const { return class_size_[static_cast<std::size_t>(k)]; }
    int identity_class() const { return class_of(Mat{}); }
    int neg_class(int k) const
    {
        Mat g = class_rep(k);
        return class_of({M - g.a, M - g.b, M - g.c, M - g.d});
    }

    Mat mul(const Mat& x, const Mat& y) const { return mat_mul(x, y, M); }
    Mat inv(const Mat& x) const { return mat_inv(x, M); }

private:
    std::vector<std::uint64_t> keys_;
    std::vector<int> cls_;
    std::vector<std::size_t> class_rep_;
    std::vector<i64> class_size_;

    std::uint64_t encode(const Mat& g) const
    {
        auto u = static_cast<std::uint64_t>(M);
        return ((static_cast<std::uint64_t>(g.a) * u + static_cast<std::uint64_t>(g.b)) * u +
                static_cast<std::uint64_t>(g.c)) * u + static_cast<std::uint64_t>(g.d);
    }

    Mat decode(std::uint64_t k) const
    {
        auto u = static_cast<std::uint64_t>(M);
        Mat g;
        g.d = static_cast<i64>(k % u);
        k /= u;
        g.c = static_cast<i64>(k % u);
        k /= u;
        g.b = static_cast<i64>(k % u);
        g.a = static_cast<i64>(k / u);
        return g;
    }

    void enumerate()
    {
        keys_.reserve(static_cast<std::size_t>(expected_order(p, m)));
        for (i64 a = 0; a < M; ++a) {
            if (a % p != 0) {
                i64 ai = invmod(a, M);
                for (i64 b = 0; b < M; ++b)
                    for (i64 c = 0; c < M; ++c) keys_.push_back(encode({a, b, c, mulmod(1 + b * c, ai, M)}));
            } else {
                for (i64 b = 0; b < M; ++b) {
                    if (b % p == 0) continue;
                    i64 bi = invmod(b, M);
                    for (i64 d = 0; d < M; ++d) keys_.push_back(encode({a, b, mulmod(a * d - 1, bi, M), d}));
                }
            }
        }
        std::sort(keys_.begin(), keys_.end());
        if (static_cast<i64>(keys_.size()) != expected_order(p, m)) throw DomainError("enumeration count mismatch");
    }

    // orbits under conjugation by the elementary generators [[1,1],[0,1]] and [[1,0],[1,1]]
    void compute_classes()
    {
        cls_.assign(keys_.size(), -1);
        std::vector<std::size_t> queue;
        for (std::size_t s = 0; s < keys_.size(); ++s) {
            if (cls_[s] >= 0) continue;
            int k = static_cast<int>(class_rep_.size());
            class_rep_.push_back(s);
            cls_[s] = k;
            queue.clear();
            queue.push_back(s);
            for (std::size_t h = 0; h < queue.size(); ++h) {
                Mat g = element(queue[h]);
                Mat x{mod(g.a + g.c, M), mod(g.b + g.d - g.a - g.c, M), g.c, mod(g.d - g.c, M)};
                Mat y{mod(g.a - g.b, M), g.b, mod(g.a + g.c - g.b - g.d, M), mod(g.b + g.d, M)};
                for (const Mat& n : {x, y}) {
                    std::size_t j = index_of(n);
                    if (cls_[j] < 0) {
                        cls_[j] = k;
                        queue.push_back(j);
                    }
                }
            }
            class_size_.push_back(static_cast<i64>(queue.size()));
        }
    }
};

using QuotientPtr = std::shared_ptr<const FiniteQuotient>;

inline QuotientPtr build_quotient(int p, int m)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, QuotientPtr> cache;
    {
        std::lock_guard lk(mu);
        auto it = cache.find({p, m});
        if (it != cache.end()) return it->second;
    }
    auto q = std::make_shared<const FiniteQuotient>(p, m);
    std::lock_guard lk(mu);
    return cache.try_emplace({p, m}, q).first->second;
}

struct ClassFunction {
    QuotientPtr Q;
    std::vector<cplx> v;

    ClassFunction() = default;
    explicit ClassFunction(QuotientPtr q) : Q(std::move(q)), v(Q->num_classes(), cplx{}) {}

    cplx at(const Mat& g) const { return v[static_cast<std::size_t>(Q->class_of(g))]; }
    cplx degree() const { return v[static_cast<std::size_t>(Q->identity_class())]; }

    ClassFunction& operator+=(const ClassFunction& o)
    {
        check(o);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.v[k];
        return *this;
    }
    ClassFunction& operator-=(const ClassFunction& o)
    {
        check(o);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.v[k];
        return *this;
    }
    ClassFunction& operator*=(cplx s)
    {
        for (auto& x : v) x *= s;
        return *this;
    }
    friend ClassFunction operator+(ClassFunction a, const ClassFunction& b) { return a += b; }
    friend ClassFunction operator-(ClassFunction a, const ClassFunction& b) { return a -= b; }
    friend ClassFunction operator*(cplx s, ClassFunction a) { return a *= s; }

    void check(const ClassFunction& o) const
    {
        if (Q != o.Q) throw DomainError("class functions on different quotients");
    }
};

inline cplx inner_product(const ClassFunction& f, const ClassFunction& g)
{
    f.check(g);
    cplx s{};
    for (std::size_t k = 0; k < f.v.size(); ++k)
        s += static_cast<double>(f.Q->class_size(static_cast<int>(k))) * f.v[k] * std::conj(g.v[k]);
    return s / static_cast<double>(f.Q->order());
}

inline constexpr double INT_TOL = 1e-6;

// nearest integer to a complex number that must be an integer within INT_TOL
inline i64 round_integer(cplx z, const char* what = "value")
{
    double r = std::round(z.real());
    if (std::abs(z - cplx{r, 0}) > INT_TOL) throw DomainError(std::string(what) + " is not an integer within tolerance");
    return static_cast<i64>(r);
}

inline ClassFunction constant_function(QuotientPtr Q, cplx c)
{
    ClassFunction f(std::move(Q));
    for (auto& x : f.v) x = c;
    return f;
}

inline ClassFunction regular_character(QuotientPtr Q)
{
    ClassFunction f(Q);
    f.v[static_cast<std::size_t>(Q->identity_class())] = static_cast<double>(Q->order());
    return f;
}

// image of G_x / G_{x,m'} pulled back to a finer quotient
inline ClassFunction inflate(const ClassFunction& f, QuotientPtr big)
{
    if (big->p != f.Q->p || big->m < f.Q->m) throw DomainError("inflate: incompatible quotients");
    ClassFunction out(big);
    for (std::size_t k = 0; k < out.v.size(); ++k)
        out.v[k] = f.at(mat_reduce(big->class_rep(static_cast<int>(k)), f.Q->M));
    return out;
}

struct SubgroupSpec {
    QuotientPtr Q;
    std::vector<std::size_t> elems;  // sorted element indices

    std::size_t size() const { return elems.size(); }
    bool contains(std::size_t i) const { return std::binary_search(elems.begin(), elems.end(), i); }
    bool contains(const Mat& g) const { return contains(Q->index_of(g)); }
    std::size_t position(std::size_t i) const
    {
        auto it = std::lower_bound(elems.begin(), elems.end(), i);
        if (it == elems.end() || *it != i) throw DomainError("element not in subgroup");
        return static_cast<std::size_t>(it - elems.begin());
    }
};

inline SubgroupSpec subgroup_where(QuotientPtr Q, const std::function<bool(const Mat&)>& pred)
{
    SubgroupSpec H{Q, {}};
    for (std::size_t i = 0; i < Q->order(); ++i)
        if (pred(Q->element(i))) H.elems.push_back(i);
    return H;
}

inline bool is_closed_subgroup(const SubgroupSpec& H, std::uint64_t seed = 7)
{
    if (!H.contains(Mat{})) return false;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, H.size() - 1);
    std::size_t pairs = std::min<std::size_t>(H.size() * H.size(), 4000);
    for (std::size_t t = 0; t < pairs; ++t) {
        Mat x = H.Q->element(H.elems[pick(rng)]);
        Mat y = H.Q->element(H.elems[pick(rng)]);
        if (!H.contains(H.Q->mul(x, y)) || !H.contains(H.Q->inv(x))) return false;
    }
    return true;
}

// eta given as values aligned with H.elems. Multiplicativity is checked on all pairs for
// |H| <= 512 and on 4000 seeded random pairs otherwise.
inline void check_multiplicative(const SubgroupSpec& H, const std::vector<cplx>& eta, double tol = 1e-9)
{
    auto test = [&](std::size_t i, std::size_t j) {
        Mat x = H.Q->element(H.elems[i]);
        Mat y = H.Q->element(H.elems[j]);
        std::size_t k = H.position(H.Q->index_of(H.Q->mul(x, y)));
        if (std::abs(eta[k] - eta[i] * eta[j]) > tol) throw DomainError("character is not multiplicative");
    };
    if (H.size() <= 512) {
        for (std::size_t i = 0; i < H.size(); ++i)
            for (std::size_t j = 0; j < H.size(); ++j) test(i, j);
        return;
    }
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, H.size() - 1);
    for (int t = 0; t < 4000; ++t) test(pick(rng), pick(rng));
}

// Ind_H^G eta(g) = |G| / (|H| |cl(g)|) * sum_{h in H cap cl(g)} eta(h)
inline ClassFunction induce(const SubgroupSpec& H, const std::vector<cplx>& eta, bool verify = true)
{
    if (eta.size() != H.size()) throw DomainError("induce: value count mismatch");
    if (verify) check_multiplicative(H, eta);
    ClassFunction f(H.Q);
    for (std::size_t i = 0; i < H.size(); ++i) f.v[static_cast<std::size_t>(H.Q->class_of_index(H.elems[i]))] += eta[i];
    double scale = static_cast<double>(H.Q->order()) / static_cast<double>(H.size());
    for (std::size_t k = 0; k < f.v.size(); ++k) f.v[k] *= scale / static_cast<double>(H.Q->class_size(static_cast<int>(k)));
    return f;
}

inline ClassFunction induce(const SubgroupSpec& H, const std::function<cplx(const Mat&)>& eta, bool verify = true)
{
    std::vector<cplx> vals(H.size());
    for (std::size_t i = 0; i < H.size(); ++i) vals[i] = eta(H.Q->element(H.elems[i]));
    return induce(H, vals, verify);
}

// ---------------------------------------------------------------------------
// Character table of SL(2, p)

enum class Series { TRIV, STEINBERG, PS, CUSPIDAL, PS_HALF, CUSP_HALF };

struct IrredLabel {
    Series series = Series::TRIV;
    int param = 0;                     // PS: torus character index j; CUSPIDAL: index k
    SquareClass u = SquareClass::ONE;  // halves: the GG label
    i64 degree = 1;

    friend bool operator==(const IrredLabel& x, const IrredLabel& y)
    {
        return x.series == y.series && x.param == y.param && x.u == y.u;
    }
};

inline std::string to_string(const IrredLabel& L)
{
    switch (L.series) {
    case Series::TRIV: return "triv";
    case Series::STEINBERG: return "St";
    case Series::PS: return "PS(" + std::to_string(L.param) + ")";
    case Series::CUSPIDAL: return "cusp(" + std::to_string(L.param) + ")";
    case Series::PS_HALF: return std::string("ps-half(") + to_string(L.u) + ")";
    case Series::CUSP_HALF: return std::string("cusp-half(") + to_string(L.u) + ")";
    }
    return "?";
}

inline i64 series_degree(Series s, i64 q)
{
    switch (s) {
    case Series::TRIV: return 1;
    case Series::STEINBERG: return q;
    case Series::PS: return q + 1;
    case Series::CUSPIDAL: return q - 1;
    case Series::PS_HALF: return (q + 1) / 2;
    case Series::CUSP_HALF: return (q - 1) / 2;
    }
    return 0;
}

struct Irred {
    IrredLabel label;
    ClassFunction chi;
};

struct CharTable {
    FieldConfig F;
    QuotientPtr Q;
    std::vector<Irred> rows;

    const Irred& find(const IrredLabel& L) const
    {
        for (auto& r : rows)
            if (r.label == L) return r;
        throw DomainError("irreducible not in table: " + to_string(L));
    }
};

inline i64 primitive_root(i64 p)
{
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (i64 d = 1; d < p - 1; ++d)
            if (powmod(g, d, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;
}

namespace detail {

// Ind from the upper Borel of the torus character a -> exp(2 pi i j log(a)/(q-1))
inline ClassFunction borel_induced(const FieldConfig& F, QuotientPtr Q, int j)
{
    i64 p = F.p;
    i64 g = primitive_root(p);
    std::vector<int> lg(static_cast<std::size_t>(p), 0);
    for (i64 e = 0, x = 1; e < p - 1; ++e, x = x * g % p) lg[static_cast<std::size_t>(x)] = static_cast<int>(e);
    auto B = subgroup_where(Q, [](const Mat& x) { return x.c == 0; });
    return induce(B, [&](const Mat& x) {
        return std::polar(1.0, 2.0 * std::numbers::pi * j * lg[static_cast<std::size_t>(x.a % p)] / double(p - 1));
    });
}

struct AnisoTorus {
    std::vector<Mat> powers;  // powers of a generator, order q+1
};

inline AnisoTorus aniso_torus(const FieldConfig& F, QuotientPtr Q)
{
    i64 p = F.p, e = F.eps;
    for (i64 x = 0; x < p; ++x)
        for (i64 y = 1; y < p; ++y) {
            if (mod(x * x - e * y * y, p) != 1) continue;
            Mat t{x, mod(e * y, p), y, x};
            AnisoTorus T;
            Mat cur{};
            do {
                T.powers.push_back(cur);
                cur = Q->mul(cur, t);
            } while (!(cur == Mat{}));
            if (static_cast<i64>(T.powers.size()) == p + 1) return T;
        }
    throw DomainError("no generator of the anisotropic torus");
}

inline ClassFunction torus_induced(QuotientPtr Q, const AnisoTorus& T, int k)
{
    std::size_t n = T.powers.size();
    std::vector<std::pair<std::size_t, cplx>> vals;
    SubgroupSpec H{Q, {}};
    for (std::size_t j = 0; j < n; ++j)
        vals.push_back({Q->index_of(T.powers[j]), std::polar(1.0, 2.0 * std::numbers::pi * double(j * k) / double(n))});
    std::sort(vals.begin(), vals.end(), [](auto& x, auto& y) { return x.first < y.first; });
    std::vector<cplx> eta;
    for (auto& [i, z] : vals) {
        H.elems.push_back(i);
        eta.push_back(z);
    }
    return induce(H, eta);
}

// Ind from Z * (lower unipotent) of zeta(s) psi_u(t) on s [[1,0],[t,1]]
inline ClassFunction center_unipotent_induced(const FieldConfig& F, QuotientPtr Q, int zeta_sign, i64 u)
{
    i64 p = F.p;
    auto H = subgroup_where(Q, [&](const Mat& x) { return x.b == 0 && (x.a == 1 || x.a == p - 1) && x.a == x.d; });
    return induce(H, [&](const Mat& x) {
        bool minus = x.a == p - 1;
        i64 t = minus ? mod(-x.c, p) : x.c;
        cplx z = psi_residue(F, u * t);
        return minus ? static_cast<double>(zeta_sign) * z : z;
    });
}

// central projection onto constituents with zeta(-I) = sign
inline ClassFunction central_part(const ClassFunction& f, int sign)
{
    ClassFunction out(f.Q);
    for (std::size_t k = 0; k < f.v.size(); ++k)
        out.v[k] = 0.5 * (f.v[k] + static_cast<double>(sign) * f.v[static_cast<std::size_t>(f.Q->neg_class(static_cast<int>(k)))]);
    return out;
}

}  // namespace detail

// Gel'fand-Graev character as the induction of psi_u(t) = psi(u t) from the lower unipotent group
inline ClassFunction gg_induced(const FieldConfig& F, SquareClass u)
{
    if (has_pi(u)) throw DomainError("residue GG label must be 1 or eps");
    auto Q = build_quotient(F.p, 1);
    i64 uu = has_eps(u) ? F.eps : 1;
    auto Ubar = subgroup_where(Q, [](const Mat& x) { return x.a == 1 && x.b == 0 && x.d == 1; });
    return induce(Ubar, [&](const Mat& x) { return psi_residue(F, uu * x.c); });
}

// closed formula: q^2-1 at I, 2 sum_{t square} psi(-u s t) at the class of [[1,s],[0,1]], 0 otherwise
inline ClassFunction gg_character(const FieldConfig& F, SquareClass u)
{
    if (has_pi(u)) throw DomainError("residue GG label must be 1 or eps");
    auto Q = build_quotient(F.p, 1);
    i64 p = F.p, uu = has_eps(u) ? F.eps : 1;
    ClassFunction f(Q);
    for (std::size_t k = 0; k < f.v.size(); ++k) {
        Mat g = Q->class_rep(static_cast<int>(k));
        if (g == Mat{}) {
            f.v[k] = static_cast<double>(p * p - 1);
            continue;
        }
        if (mod(g.a + g.d, p) != 2) continue;
        i64 s = g.b != 0 ? g.b : mod(-g.c, p);
        cplx sum{};
        for (i64 t = 1; t < p; ++t)
            if (legendre(t, p) == 1) sum += psi_residue(F, -uu * s * t);
        f.v[k] = 2.0 * sum;
    }
    return f;
}

inline CharTable char_table(const FieldConfig& F)
{
    if (F.p > 11) throw DomainError("char_table: p <= 11 required");
    auto Q = build_quotient(F.p, 1);
    i64 q = F.p;
    CharTable T{F, Q, {}};
    auto add_row = [&](Series s, int param, SquareClass u, ClassFunction chi) {
        IrredLabel L{s, param, u, series_degree(s, q)};
        if (round_integer(inner_product(chi, chi), "norm") != 1) throw DomainError("not irreducible: " + to_string(L));
        if (round_integer(chi.degree(), "degree") != L.degree) throw DomainError("degree mismatch: " + to_string(L));
        T.rows.push_back({L, std::move(chi)});
    };

    ClassFunction triv = constant_function(Q, 1.0);
    add_row(Series::TRIV, 0, SquareClass::ONE, triv);
    ClassFunction st = detail::borel_induced(F, Q, 0) - triv;
    add_row(Series::STEINBERG, 0, SquareClass::ONE, st);

    ClassFunction known = st;
    for (int j = 1; j <= (q - 3) / 2; ++j) {
        ClassFunction ps = detail::borel_induced(F, Q, j);
        known += ps;
        add_row(Series::PS, j, SquareClass::ONE, std::move(ps));
    }

    auto Tor = detail::aniso_torus(F, Q);
    auto cusp_virtual = [&](int k) {
        int zs = (k % 2 == 0) ? 1 : -1;
        ClassFunction v = detail::center_unipotent_induced(F, Q, zs, 1) +
                          detail::center_unipotent_induced(F, Q, zs, F.eps);
        return v - detail::torus_induced(Q, Tor, k);
    };
    for (int k = 1; k <= (q - 1) / 2; ++k) {
        ClassFunction c = cusp_virtual(k);
        known += c;
        add_row(Series::CUSPIDAL, k, SquareClass::ONE, std::move(c));
    }

    int ps_sign = F.minus_one_sign();
    for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) {
        ClassFunction rest = gg_induced(F, u) - known;
        add_row(Series::PS_HALF, 0, u, detail::central_part(rest, ps_sign));
    }
    for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) {
        ClassFunction rest = gg_induced(F, u) - known;
        add_row(Series::CUSP_HALF, 0, u, detail::central_part(rest, -ps_sign));
    }
    if (static_cast<i64>(T.rows.size()) != q + 4) throw DomainError("char_table: wrong number of irreducibles");
    return T;
}

// multiplicity of every table row in a class function
inline std::vector<i64> decompose(const CharTable& T, const ClassFunction& f)
{
    std::vector<i64> out;
    for (auto& r : T.rows) out.push_back(round_integer(inner_product(f, r.chi), "multiplicity"));
    return out;
}

inline std::vector<IrredLabel> gg_decompose(const CharTable& T, SquareClass u)
{
    auto mult = decompose(T, gg_character(T.F, u));
    std::vector<IrredLabel> out;
    for (std::size_t i = 0; i < mult.size(); ++i) {
        if (mult[i] < 0 || mult[i] > 1) throw DomainError("Gel'fand-Graev decomposition is not multiplicity-free");
        if (mult[i] == 1) out.push_back(T.rows[i].label);
    }
    return out;
}

}  // namespace sl2lce
