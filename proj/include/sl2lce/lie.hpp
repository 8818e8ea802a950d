#pragma once

#include <algorithm>
#include <bit>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "field.hpp"

namespace sl2lce {

// Element of (1/2)Z stored as twice its value, or +infinity.
struct Half {
    static constexpr i64 INF = std::numeric_limits<i64>::max();
    i64 twice = 0;

    static Half integer(i64 n) { return {2 * n}; }
    static Half halves(i64 t) { return {t}; }
    static Half infinity() { return {INF}; }

    bool is_inf() const { return twice == INF; }
    bool is_integer() const { return !is_inf() && twice % 2 == 0; }
    i64 floor() const { return twice >= 0 ? twice / 2 : -((-twice + 1) / 2); }
    i64 ceil() const { return -Half{-twice}.floor(); }
    double value() const { return static_cast<double>(twice) / 2.0; }

    friend auto operator<=>(const Half&, const Half&) = default;

    std::string str() const
    {
        if (is_inf()) return "inf";
        if (twice % 2 == 0) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }
};

inline Half parse_half(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Half::integer(std::stoll(s));
        i64 num = std::stoll(s.substr(0, slash));
        i64 den = std::stoll(s.substr(slash + 1));
        if (den == 1) return Half::integer(num);
        if (den != 2) throw DomainError("only halves are supported: " + s);
        return Half::halves(num);
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const DomainError*>(&e)) throw;
        throw DomainError("malformed rational: " + s);
    }
}

// [[a, b], [c, -a]]
struct Sl2Element {
    PadicScalar a, b, c;

    bool is_zero() const { return a.is_zero() && b.is_zero() && c.is_zero(); }
};

inline Sl2Element make_element(const FieldConfig& F, i64 a, i64 b, i64 c)
{
    return {PadicScalar::from_int(F, a), PadicScalar::from_int(F, b), PadicScalar::from_int(F, c)};
}

inline Sl2Element scale(const FieldConfig& F, const PadicScalar& t, const Sl2Element& X)
{
    return {mul(F, t, X.a), mul(F, t, X.b), mul(F, t, X.c)};
}

inline Sl2Element scale_pi(const FieldConfig& F, i64 k, const Sl2Element& X)
{
    return scale(F, PadicScalar::make(F, k, 1), X);
}

inline Sl2Element plus(const FieldConfig& F, const Sl2Element& X, const Sl2Element& Y)
{
    return {add(F, X.a, Y.a), add(F, X.b, Y.b), add(F, X.c, Y.c)};
}

// a^2 + bc = -det
inline PadicScalar minus_det(const FieldConfig& F, const Sl2Element& X)
{
    return add(F, mul(F, X.a, X.a), mul(F, X.b, X.c));
}

// conjugation by [[1,y],[0,1]]
inline Sl2Element conj_upper(const FieldConfig& F, const PadicScalar& y, const Sl2Element& X)
{
    PadicScalar yc = mul(F, y, X.c);
    PadicScalar two = PadicScalar::from_int(F, 2);
    PadicScalar b = sub(F, sub(F, X.b, mul(F, two, mul(F, y, X.a))), mul(F, y, yc));
    return {add(F, X.a, yc), b, X.c};
}

// conjugation by [[1,0],[x,1]]
inline Sl2Element conj_lower(const FieldConfig& F, const PadicScalar& x, const Sl2Element& X)
{
    PadicScalar xb = mul(F, x, X.b);
    PadicScalar two = PadicScalar::from_int(F, 2);
    PadicScalar c = sub(F, add(F, X.c, mul(F, two, mul(F, x, X.a))), mul(F, x, xb));
    return {sub(F, X.a, xb), X.b, c};
}

// conjugation by diag(pi^k, pi^-k)
inline Sl2Element conj_diag(const FieldConfig& F, i64 k, const Sl2Element& X)
{
    return {X.a, mul(F, PadicScalar::make(F, 2 * k, 1), X.b),
            mul(F, PadicScalar::make(F, -2 * k, 1), X.c)};
}

// conjugation by w = [[0,1],[-1,0]]
inline Sl2Element conj_weyl(const FieldConfig& F, const Sl2Element& X)
{
    return {neg(F, X.a), neg(F, X.c), neg(F, X.b)};
}

// eta = diag(1, pi) (in GL2): eta X eta^-1 = [[a, b/pi], [pi c, -a]]
inline Sl2Element conj_eta(const FieldConfig& F, const Sl2Element& X)
{
    return {X.a, mul(F, PadicScalar::make(F, -1, 1), X.b), mul(F, PadicScalar::make(F, 1, 1), X.c)};
}

inline Sl2Element conj_eta_inv(const FieldConfig& F, const Sl2Element& X)
{
    return {X.a, mul(F, PadicScalar::make(F, 1, 1), X.b), mul(F, PadicScalar::make(F, -1, 1), X.c)};
}

enum class FilterPoint { X0, X1, Z0 };

inline const char* to_string(FilterPoint pt)
{
    switch (pt) {
    case FilterPoint::X0: return "x0";
    case FilterPoint::X1: return "x1";
    case FilterPoint::Z0: return "z0";
    }
    return "?";
}

inline FilterPoint parse_vertex(const std::string& s)
{
    if (s == "x0") return FilterPoint::X0;
    if (s == "x1") return FilterPoint::X1;
    throw DomainError("vertex must be x0 or x1: " + s);
}

struct OrbitLabel {
    bool zero = true;
    SquareClass u = SquareClass::ONE;

    static OrbitLabel zero_orbit() { return {}; }
    static OrbitLabel regular(SquareClass c) { return {false, c}; }

    int index() const { return zero ? 0 : 1 + static_cast<int>(u); }
    friend bool operator==(const OrbitLabel& x, const OrbitLabel& y) { return x.index() == y.index(); }
};

inline std::string to_string(const OrbitLabel& L) { return L.zero ? "0" : to_string(L.u); }

inline OrbitLabel parse_orbit(const std::string& s)
{
    if (s == "0") return OrbitLabel::zero_orbit();
    for (SquareClass c : all_square_classes)
        if (s == to_string(c)) return OrbitLabel::regular(c);
    throw DomainError("unknown orbit label: " + s);
}

// Subset of the five nilpotent orbits, iterated in the order 0, 1, eps, pi, eps*pi.
struct LabelSet {
    std::uint8_t mask = 0;

    static LabelSet all_regular() { return {0x1e}; }
    static LabelSet of(std::initializer_list<OrbitLabel> ls)
    {
        LabelSet s;
        for (auto& l : ls) s.insert(l);
        return s;
    }

    void insert(const OrbitLabel& L) { mask |= static_cast<std::uint8_t>(1u << L.index()); }
    bool contains(const OrbitLabel& L) const { return (mask >> L.index()) & 1u; }
    bool subset_of(const LabelSet& o) const { return (mask & ~o.mask) == 0; }
    std::size_t size() const { return static_cast<std::size_t>(std::popcount(mask)); }
    bool empty() const { return mask == 0; }

    std::vector<OrbitLabel> labels() const
    {
        std::vector<OrbitLabel> out;
        if (mask & 1u) out.push_back(OrbitLabel::zero_orbit());
        for (SquareClass c : all_square_classes)
            if (contains(OrbitLabel::regular(c))) out.push_back(OrbitLabel::regular(c));
        return out;
    }

    LabelSet operator|(const LabelSet& o) const { return {static_cast<std::uint8_t>(mask | o.mask)}; }
    LabelSet operator&(const LabelSet& o) const { return {static_cast<std::uint8_t>(mask & o.mask)}; }
    friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

inline std::string to_string(const LabelSet& s)
{
    std::string out = "{";
    bool first = true;
    for (auto& l : s.labels()) {
        if (!first) out += ", ";
        out += to_string(l);
        first = false;
    }
    return out + "}";
}

enum class ElementKind { ZERO, NILPOTENT, SPLIT_SS, ANISO_SS };

struct ElementClass {
    ElementKind kind = ElementKind::ZERO;
    OrbitLabel label;          // NILPOTENT
    SquareClass minus_det{};   // ANISO_SS: class of a^2+bc
};

namespace detail {
inline i64 vmin(std::initializer_list<i64> vs)
{
    i64 m = PadicScalar::INF;
    for (i64 v : vs)
        if (v != PadicScalar::INF) m = std::min(m, v);
    return m;
}
inline i64 shift(i64 v, i64 s) { return v == PadicScalar::INF ? v : v + s; }
}  // namespace detail

inline Half depth_at(const Sl2Element& X, FilterPoint pt)
{
    if (X.is_zero()) return Half::infinity();
    using detail::shift;
    switch (pt) {
    case FilterPoint::X0: return Half::integer(detail::vmin({X.a.val, X.b.val, X.c.val}));
    case FilterPoint::X1:
        return Half::integer(detail::vmin({X.a.val, shift(X.b.val, 1), shift(X.c.val, -1)}));
    case FilterPoint::Z0: {
        auto tw = [](i64 v, i64 s) { return v == PadicScalar::INF ? v : 2 * v + s; };
        return Half::halves(detail::vmin({tw(X.a.val, 0), tw(X.b.val, 1), tw(X.c.val, -1)}));
    }
    }
    throw DomainError("depth_at: bad point");
}

inline bool in_filtration(const Sl2Element& X, FilterPoint pt, Half r, bool strict)
{
    Half d = depth_at(X, pt);
    return strict ? d > r : d >= r;
}

// X is declared nilpotent when a^2+bc cancels to zero or its valuation exceeds 2(N-2)
// above twice the x0-depth of X.
inline ElementClass classify(const FieldConfig& F, const Sl2Element& X)
{
    ElementClass out;
    if (X.is_zero()) return out;
    PadicScalar s = minus_det(F, X);
    i64 base = 2 * depth_at(X, FilterPoint::X0).floor();
    if (s.is_zero() || s.val - base > 2 * (F.N - 2)) {
        out.kind = ElementKind::NILPOTENT;
        SquareClass u = !X.b.is_zero() ? square_class(F, X.b) : square_class(F, neg(F, X.c));
        out.label = OrbitLabel::regular(u);
        return out;
    }
    SquareClass cs = square_class(F, s);
    if (cs == SquareClass::ONE) {
        out.kind = ElementKind::SPLIT_SS;
    } else {
        out.kind = ElementKind::ANISO_SS;
        out.minus_det = cs;
    }
    return out;
}

// Label of the regular orbit met by the degenerate coset of Gamma at a vertex, or nullopt.
inline std::optional<OrbitLabel> coset_orbit(const FieldConfig& F, const Sl2Element& G, FilterPoint pt)
{
    if (G.is_zero()) throw DomainError("coset_orbit of zero");
    if (pt == FilterPoint::Z0) throw DomainError("coset_orbit: vertex required");
    if (pt == FilterPoint::X1) {
        auto r = coset_orbit(F, conj_eta_inv(F, G), FilterPoint::X0);
        if (r) r->u = r->u * SquareClass::PI;
        return r;
    }
    i64 D = depth_at(G, FilterPoint::X0).floor();
    auto res = [&](const PadicScalar& s) -> i64 {
        if (s.is_zero() || s.val != D) return 0;
        return s.unit_mod(F, 1);
    };
    i64 a0 = res(G.a), b0 = res(G.b), c0 = res(G.c);
    if (mod(a0 * a0 + b0 * c0, F.p) != 0) return std::nullopt;
    int leg = b0 != 0 ? legendre(b0, F.p) : legendre(-c0, F.p);
    SquareClass u = leg == 1 ? SquareClass::ONE : SquareClass::EPS;
    if (mod(D, 2) == 1) u = u * SquareClass::PI;
    return OrbitLabel::regular(u);
}

inline LabelSet nil_support(const FieldConfig& F, const Sl2Element& G)
{
    ElementClass ec = classify(F, G);
    switch (ec.kind) {
    case ElementKind::ZERO: throw DomainError("nil_support of zero");
    case ElementKind::NILPOTENT: return LabelSet::of({ec.label});
    case ElementKind::SPLIT_SS: return LabelSet::all_regular();
    case ElementKind::ANISO_SS: {
        SquareClass u = square_class(F, G.b);
        SquareClass g = gamma_of_extension(F, ec.minus_det);
        return LabelSet::of({OrbitLabel::regular(u), OrbitLabel::regular(u * g)});
    }
    }
    throw DomainError("nil_support: bad class");
}

namespace detail {
inline PadicScalar random_scalar(const FieldConfig& F, std::mt19937_64& rng, int vlo, int vhi)
{
    std::uniform_int_distribution<int> vd(vlo, vhi);
    std::uniform_int_distribution<i64> ud(1, F.pN - 1);
    i64 u;
    do u = ud(rng);
    while (u % F.p == 0);
    return PadicScalar::make(F, vd(rng), u);
}
}  // namespace detail

// Conjugates Gamma by random g = lower * diag(pi^k) * upper and collects the labels of
// the degenerate x0-cosets met along the way.
inline LabelSet cone_oracle(const FieldConfig& F, const Sl2Element& G, int samples, std::uint64_t seed)
{
    if (G.is_zero()) throw DomainError("cone_oracle of zero");
    if (samples < 1) throw DomainError("cone_oracle needs samples >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> kd(-F.N / 2, F.N / 2);
    std::uniform_int_distribution<int> coin(0, 7);
    LabelSet out;
    for (int i = 0; i < samples; ++i) {
        int k = kd(rng);
        PadicScalar x = coin(rng) == 0 ? PadicScalar::zero() : detail::random_scalar(F, rng, -2, F.N);
        PadicScalar y = coin(rng) == 0 ? PadicScalar::zero() : detail::random_scalar(F, rng, -2, F.N);
        Sl2Element H = conj_lower(F, x, conj_diag(F, k, conj_upper(F, y, G)));
        if (H.is_zero()) continue;
        try {
            if (auto l = coset_orbit(F, H, FilterPoint::X0)) out.insert(*l);
        } catch (const PrecisionError&) {
        }
    }
    return out;
}

enum class Parity { EVEN, ODD };

inline Parity parity_depth(const OrbitLabel& L, FilterPoint pt)
{
    if (L.zero) throw DomainError("parity_depth of the zero orbit");
    if (pt == FilterPoint::Z0) throw DomainError("parity_depth: vertex required");
    bool odd = has_pi(L.u);
    if (pt == FilterPoint::X1) odd = !odd;
    return odd ? Parity::ODD : Parity::EVEN;
}

// One representative [[0, pi^v u0], [0, 0]] per G_x-orbit in O_u, for depths D in [-d_max, -d_min].
inline std::vector<Sl2Element> gx_orbit_reps(const FieldConfig& F, const OrbitLabel& L, FilterPoint pt,
                                             i64 d_min, i64 d_max)
{
    if (L.zero) throw DomainError("gx_orbit_reps of the zero orbit");
    if (pt == FilterPoint::Z0) throw DomainError("gx_orbit_reps: vertex required");
    if (d_min > d_max) throw DomainError("gx_orbit_reps: d_min > d_max");
    i64 want = parity_depth(L, pt) == Parity::ODD ? 1 : 0;
    i64 u0 = has_eps(L.u) ? F.eps : 1;
    std::vector<Sl2Element> out;
    for (i64 D = -d_max; D <= -d_min; ++D) {
        if (mod(D, 2) != want) continue;
        i64 v = pt == FilterPoint::X0 ? D : D - 1;
        out.push_back({PadicScalar::zero(), PadicScalar::make(F, v, u0), PadicScalar::zero()});
    }
    return out;
}

enum class Transport { OMEGA, ETA };

inline OrbitLabel transport(const FieldConfig& F, const OrbitLabel& L, Transport by)
{
    if (L.zero) return L;
    SquareClass f = by == Transport::ETA ? SquareClass::PI : F.class_of_minus_one() * SquareClass::PI;
    return OrbitLabel::regular(L.u * f);
}

// "a,b,c" in scalar syntax
inline Sl2Element parse_matrix(const FieldConfig& F, const std::string& s)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto comma = s.find(',', start);
        parts.push_back(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 3) throw DomainError("matrix literal must be a,b,c: " + s);
    return {parse_scalar(F, parts[0]), parse_scalar(F, parts[1]), parse_scalar(F, parts[2])};
}

}  // namespace sl2lce
