#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sl2lce {

using i64 = std::int64_t;
using i128 = __int128;
using cplx = std::complex<double>;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline i64 ipow(i64 b, int e)
{
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

inline i64 mod(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m)
{
    return static_cast<i64>(mod(static_cast<i64>((static_cast<i128>(a) * b) % m), m));
}

inline i64 powmod(i64 b, i64 e, i64 m)
{
    i64 r = 1 % m;
    b = mod(b, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

// inverse of a modulo m via extended Euclid; a must be coprime to m
inline i64 invmod(i64 a, i64 m)
{
    i64 g = m, x = 0, r = mod(a, m), y = 1;
    while (r != 0) {
        i64 t = g / r;
        g -= t * r;
        std::swap(g, r);
        x -= t * y;
        std::swap(x, y);
    }
    if (g != 1) throw DomainError("invmod: not invertible");
    return mod(x, m);
}

inline bool is_prime(i64 n)
{
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// +1 for nonzero squares mod p, -1 for nonresidues, 0 for multiples of p
inline int legendre(i64 a, i64 p)
{
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

enum class SquareClass : std::uint8_t { ONE = 0, EPS = 1, PI = 2, EPSPI = 3 };

inline SquareClass operator*(SquareClass a, SquareClass b)
{
    return static_cast<SquareClass>(static_cast<int>(a) ^ static_cast<int>(b));
}

inline bool has_pi(SquareClass c) { return (static_cast<int>(c) & 2) != 0; }
inline bool has_eps(SquareClass c) { return (static_cast<int>(c) & 1) != 0; }

inline const char* to_string(SquareClass c)
{
    switch (c) {
    case SquareClass::ONE: return "1";
    case SquareClass::EPS: return "eps";
    case SquareClass::PI: return "pi";
    case SquareClass::EPSPI: return "eps*pi";
    }
    return "?";
}

inline constexpr SquareClass all_square_classes[4] = {SquareClass::ONE, SquareClass::EPS,
                                                      SquareClass::PI, SquareClass::EPSPI};

struct FieldConfig {
    int p = 3;
    int N = 8;
    int eps = 2;
    i64 pN = 6561;
    // psi is replaced by x -> psi(psi_twist * x); must be a unit
    i64 psi_twist = 1;

    static FieldConfig make(int p, int N = 8, i64 psi_twist = 1)
    {
        if (p < 3 || p % 2 == 0 || !is_prime(p)) throw DomainError("p must be an odd prime");
        if (N < 1) throw DomainError("precision must be positive");
        if (ipow(p, N) > (i64{1} << 40)) throw DomainError("p^N too large");
        if (mod(psi_twist, p) == 0) throw DomainError("psi twist must be a unit");
        FieldConfig c;
        c.p = p;
        c.N = N;
        c.pN = ipow(p, N);
        c.psi_twist = psi_twist;
        c.eps = 2;
        while (legendre(c.eps, p) != -1) ++c.eps;
        return c;
    }

    // Legendre symbol of -1
    int minus_one_sign() const { return legendre(-1, p); }
    SquareClass class_of_minus_one() const
    {
        return minus_one_sign() == 1 ? SquareClass::ONE : SquareClass::EPS;
    }
};

// Element of Q_p at finite relative precision: pi^val * unit, with `prec` known unit digits.
struct PadicScalar {
    static constexpr i64 INF = std::numeric_limits<i64>::max();

    i64 val = INF;
    i64 unit = 0;
    int prec = 0;

    bool is_zero() const { return val == INF; }

    static PadicScalar zero() { return {}; }

    static PadicScalar make(const FieldConfig& F, i64 v, i64 u)
    {
        if (u == 0) return zero();
        while (u % F.p == 0) {
            u /= F.p;
            ++v;
        }
        return {v, mod(u, F.pN), F.N};
    }

    static PadicScalar from_int(const FieldConfig& F, i64 n) { return make(F, 0, n); }

    // residue of the unit part mod p^k (k <= prec)
    i64 unit_mod(const FieldConfig& F, int k) const
    {
        if (k > prec) throw PrecisionError("unit digits not known");
        return mod(unit, ipow(F.p, k));
    }

    // the integer p^val * unit mod p^k, valid when val >= 0
    i64 to_residue(const FieldConfig& F, int k) const
    {
        if (is_zero() || val >= k) return 0;
        if (val < 0) throw DomainError("to_residue: negative valuation");
        int need = k - static_cast<int>(val);
        if (need > prec) throw PrecisionError("to_residue: insufficient precision");
        return mod(ipow(F.p, static_cast<int>(val)) * mod(unit, ipow(F.p, need)), ipow(F.p, k));
    }
};

inline bool same(const FieldConfig& F, const PadicScalar& a, const PadicScalar& b)
{
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (a.val != b.val) return false;
    i64 m = ipow(F.p, std::min(a.prec, b.prec));
    return mod(a.unit, m) == mod(b.unit, m);
}

inline PadicScalar neg(const FieldConfig& F, const PadicScalar& a)
{
    if (a.is_zero()) return a;
    i64 m = ipow(F.p, a.prec);
    return {a.val, mod(-a.unit, m), a.prec};
}

inline PadicScalar mul(const FieldConfig& F, const PadicScalar& a, const PadicScalar& b)
{
    if (a.is_zero() || b.is_zero()) return PadicScalar::zero();
    int pr = std::min(a.prec, b.prec);
    return {a.val + b.val, mulmod(a.unit, b.unit, ipow(F.p, pr)), pr};
}

inline PadicScalar inv(const FieldConfig& F, const PadicScalar& a)
{
    if (a.is_zero()) throw DomainError("division by exact zero");
    i64 m = ipow(F.p, a.prec);
    return {-a.val, invmod(a.unit, m), a.prec};
}

// Cancellation down to zero at the known precision returns exact zero; otherwise the
// result keeps only the digits determined by both operands.
inline PadicScalar add(const FieldConfig& F, const PadicScalar& a, const PadicScalar& b)
{
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const PadicScalar& lo = a.val <= b.val ? a : b;
    const PadicScalar& hi = a.val <= b.val ? b : a;
    i64 k = hi.val - lo.val;
    int known = lo.prec;
    if (k < F.N) known = std::min<i64>(known, hi.prec + k);
    i64 m = ipow(F.p, known);
    i64 s = lo.unit;
    if (k < known) s += mulmod(hi.unit, ipow(F.p, static_cast<int>(k)), m);
    s = mod(s, m);
    if (s == 0) return PadicScalar::zero();
    int t = 0;
    while (s % F.p == 0) {
        s /= F.p;
        ++t;
    }
    return {lo.val + t, s, known - t};
}

inline PadicScalar sub(const FieldConfig& F, const PadicScalar& a, const PadicScalar& b)
{
    return add(F, a, neg(F, b));
}

enum class ArithKind { ADD, MUL, NEG, INV };

inline PadicScalar arith(const FieldConfig& F, const PadicScalar& a, const PadicScalar& b,
                         ArithKind kind)
{
    switch (kind) {
    case ArithKind::ADD: return add(F, a, b);
    case ArithKind::MUL: return mul(F, a, b);
    case ArithKind::NEG: return neg(F, a);
    case ArithKind::INV: return inv(F, a);
    }
    throw DomainError("arith: unknown kind");
}

inline SquareClass square_class(const FieldConfig& F, const PadicScalar& a)
{
    if (a.is_zero()) throw DomainError("square_class of zero");
    int bits = 0;
    if (mod(a.val, 2) == 1) bits |= 2;
    if (legendre(a.unit, F.p) == -1) bits |= 1;
    return static_cast<SquareClass>(bits);
}

inline SquareClass gamma_of_extension(const FieldConfig& F, SquareClass cls_uv)
{
    switch (cls_uv) {
    case SquareClass::ONE: throw DomainError("split extension has no norm class gamma");
    case SquareClass::EPS: return SquareClass::EPS;
    default: return F.class_of_minus_one() * cls_uv;
    }
}

// psi(x) = exp(2 pi i frac(c x / p)) with c = F.psi_twist
inline cplx psi(const FieldConfig& F, const PadicScalar& a, int level)
{
    if (a.is_zero() || a.val >= 1) return {1.0, 0.0};
    if (a.val < -level) throw DomainError("psi: valuation below level");
    int digits = static_cast<int>(1 - a.val);
    if (digits > a.prec) throw PrecisionError("psi: fractional part undetermined");
    i64 m = ipow(F.p, digits);
    i64 t = mulmod(a.unit, F.psi_twist, m);
    double ang = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m);
    return std::polar(1.0, ang);
}

// additive character of the residue field induced by psi on the integers
inline cplx psi_residue(const FieldConfig& F, i64 t)
{
    i64 s = mulmod(t, F.psi_twist, F.p);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(s) / F.p);
}

inline PadicScalar scalar_of_class(const FieldConfig& F, SquareClass c)
{
    return PadicScalar::make(F, has_pi(c) ? 1 : 0, has_eps(c) ? F.eps : 1);
}

// "v:u" or a plain integer
inline PadicScalar parse_scalar(const FieldConfig& F, const std::string& s)
{
    auto colon = s.find(':');
    try {
        if (colon == std::string::npos) return PadicScalar::from_int(F, std::stoll(s));
        i64 v = std::stoll(s.substr(0, colon));
        i64 u = std::stoll(s.substr(colon + 1));
        if (mod(u, F.p) == 0) throw DomainError("scalar literal: unit part divisible by p");
        return PadicScalar::make(F, v, u);
    } catch (const std::invalid_argument&) {
        throw DomainError("malformed scalar literal: " + s);
    } catch (const std::out_of_range&) {
        throw DomainError("malformed scalar literal: " + s);
    }
}

}  // namespace sl2lce
