#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fingrp.hpp"
#include "lie.hpp"
#include "shalika.hpp"

namespace sl2lce {

enum class Family { PS, PS_HALF, TRIV, STEINBERG, UNRAM_SC, SPECIAL_SC, RAM_SC };

// the three nontrivial quadratic characters sgn_tau, tau in {eps, -pi, -eps*pi}
enum class HTau { EPS, MINUS_PI, MINUS_EPSPI };

inline const char* to_string(HTau t)
{
    switch (t) {
    case HTau::EPS: return "eps";
    case HTau::MINUS_PI: return "-pi";
    case HTau::MINUS_EPSPI: return "-eps*pi";
    }
    return "?";
}

struct RepParam {
    Family family = Family::TRIV;
    Half depth;               // integer for split/unramified, half-integer for ramified
    bool regular = true;      // PS only
    int chi = 0;              // PS depth 0: residue character index; PS r > 0: conductor twist; UNRAM_SC r = 0: cuspidal index
    HTau tau = HTau::EPS;     // PS_HALF
    int sign = 1;             // PS_HALF
    int home = 0;             // UNRAM_SC, SPECIAL_SC
    SquareClass u = SquareClass::ONE;  // SPECIAL_SC
    CentralSign zeta;
};

inline bool is_depth_zero(const RepParam& pi) { return pi.depth.twice == 0; }

inline int vertex_index(FilterPoint v)
{
    if (v == FilterPoint::Z0) throw DomainError("vertex required");
    return v == FilterPoint::X1 ? 1 : 0;
}

// -------------------------------------------------------------------------- construction

namespace rep {

inline RepParam base(Family f, Half r)
{
    RepParam p;
    p.family = f;
    p.depth = r;
    return p;
}

inline RepParam triv() { return base(Family::TRIV, Half::integer(0)); }
inline RepParam steinberg() { return base(Family::STEINBERG, Half::integer(0)); }

inline RepParam ps(const FieldConfig& F, i64 r, CentralSign zeta = {}, std::optional<int> chi = std::nullopt)
{
    if (r < 0) throw DomainError("principal series depth must be >= 0");
    RepParam p = base(Family::PS, Half::integer(r));
    p.zeta = zeta;
    if (r == 0) {
        int j = chi ? *chi : (zeta.value == 1 ? 0 : 1);
        j = static_cast<int>(mod(j, F.p - 1));
        if ((j % 2 == 0 ? 1 : -1) != zeta.value) throw DomainError("residue character parity contradicts zeta");
        p.chi = j;
    } else {
        int k = chi ? *chi : (zeta.value == 1 ? 2 : 1);
        if (k % F.p == 0) throw DomainError("conductor twist must be prime to p");
        if ((k % 2 == 0 ? 1 : -1) != zeta.value) throw DomainError("character parity contradicts zeta");
        p.chi = k;
    }
    return p;
}

inline CentralSign h_zeta(const FieldConfig& F, HTau t)
{
    return {t == HTau::EPS ? 1 : F.minus_one_sign()};
}

inline RepParam ps_half(const FieldConfig& F, HTau t, int sign)
{
    if (sign != 1 && sign != -1) throw DomainError("sign must be + or -");
    RepParam p = base(Family::PS_HALF, Half::integer(0));
    p.tau = t;
    p.sign = sign;
    p.regular = false;
    p.zeta = h_zeta(F, t);
    return p;
}

inline RepParam unram_sc(const FieldConfig& F, int home, i64 r, CentralSign zeta = {}, std::optional<int> k = std::nullopt)
{
    if (home != 0 && home != 1) throw DomainError("home vertex must be 0 or 1");
    if (r < 0) throw DomainError("depth must be >= 0");
    RepParam p = base(Family::UNRAM_SC, Half::integer(r));
    p.home = home;
    p.zeta = zeta;
    if (r == 0) {
        int kk = 0;
        if (k) {
            kk = *k;
        } else {
            for (int c = 1; c <= (F.p - 1) / 2; ++c)
                if ((c % 2 == 0 ? 1 : -1) == zeta.value) {
                    kk = c;
                    break;
                }
        }
        if (kk < 1 || kk > (F.p - 1) / 2) throw DomainError("no depth-zero cuspidal with this index or central sign");
        if ((kk % 2 == 0 ? 1 : -1) != zeta.value) throw DomainError("cuspidal index parity contradicts zeta");
        p.chi = kk;
    }
    return p;
}

inline CentralSign special_zeta(const FieldConfig& F) { return {-F.minus_one_sign()}; }

inline RepParam special(const FieldConfig& F, int home, SquareClass u)
{
    if (home != 0 && home != 1) throw DomainError("home vertex must be 0 or 1");
    if (has_pi(u)) throw DomainError("special label must be 1 or eps");
    RepParam p = base(Family::SPECIAL_SC, Half::integer(0));
    p.home = home;
    p.u = u;
    p.zeta = special_zeta(F);
    return p;
}

inline RepParam ram_sc(Half r, CentralSign zeta = {})
{
    if (r.is_integer() || r.twice < 1) throw DomainError("ramified depth must lie in 1/2 + Z>=0");
    RepParam p = base(Family::RAM_SC, r);
    p.zeta = zeta;
    return p;
}

}  // namespace rep

inline std::string to_string(const RepParam& pi)
{
    std::ostringstream os;
    switch (pi.family) {
    case Family::TRIV: return "triv";
    case Family::STEINBERG: return "st";
    case Family::PS:
        os << "ps:r=" << pi.depth.str() << ",chi=" << pi.chi;
        break;
    case Family::PS_HALF:
        os << "ps-half:tau=" << to_string(pi.tau) << ",sign=" << (pi.sign > 0 ? "+" : "-");
        return os.str();
    case Family::UNRAM_SC:
        os << "unram-sc:i=" << pi.home << ",r=" << pi.depth.str();
        if (is_depth_zero(pi)) os << ",k=" << pi.chi;
        break;
    case Family::SPECIAL_SC:
        os << "special:i=" << pi.home << ",u=" << to_string(pi.u);
        return os.str();
    case Family::RAM_SC:
        os << "ram-sc:r=" << pi.depth.str();
        break;
    }
    if (pi.zeta.value != 1) os << ",zeta=-1";
    return os.str();
}

// e.g. "ps:r=1", "ps-half:tau=eps,sign=+", "unram-sc:i=0,r=2", "special:i=1,u=eps", "ram-sc:r=1/2,zeta=-1"
inline RepParam parse_rep(const FieldConfig& F, const std::string& text)
{
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto comma = rest.find(',', start);
            std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            auto eq = item.find('=');
            if (eq == std::string::npos) throw DomainError("malformed representation literal: " + text);
            kv[item.substr(0, eq)] = item.substr(eq + 1);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::logic_error&) {
            throw DomainError("malformed integer in representation literal: " + s);
        }
    };
    CentralSign zeta{1};
    bool zeta_given = false;
    if (auto z = take("zeta")) {
        zeta_given = true;
        if (*z == "-1" || *z == "-") zeta.value = -1;
        else if (*z == "1" || *z == "+1" || *z == "+") zeta.value = 1;
        else throw DomainError("zeta must be +1 or -1");
    }
    auto fixed_zeta = [&](RepParam p) {
        if (zeta_given && p.zeta != zeta) throw DomainError("zeta is fixed for this representation");
        return p;
    };
    RepParam out;
    if (head == "triv") {
        out = fixed_zeta(rep::triv());
    } else if (head == "st") {
        out = fixed_zeta(rep::steinberg());
    } else if (head == "ps") {
        auto r = take("r");
        std::optional<int> chi;
        if (auto c = take("chi")) chi = to_int(*c);
        out = rep::ps(F, r ? to_int(*r) : 0, zeta, chi);
    } else if (head == "ps-half") {
        auto t = take("tau");
        auto s = take("sign");
        if (!t || !s) throw DomainError("ps-half needs tau and sign");
        HTau tau;
        if (*t == "eps") tau = HTau::EPS;
        else if (*t == "-pi") tau = HTau::MINUS_PI;
        else if (*t == "-eps*pi") tau = HTau::MINUS_EPSPI;
        else throw DomainError("tau must be eps, -pi or -eps*pi");
        int sign = (*s == "+" || *s == "+1") ? 1 : (*s == "-" || *s == "-1") ? -1 : 0;
        if (sign == 0) throw DomainError("sign must be + or -");
        out = fixed_zeta(rep::ps_half(F, tau, sign));
    } else if (head == "unram-sc") {
        auto i = take("i");
        auto r = take("r");
        std::optional<int> k;
        if (auto kk = take("k")) k = to_int(*kk);
        if (!i || !r) throw DomainError("unram-sc needs i and r");
        out = rep::unram_sc(F, to_int(*i), to_int(*r), zeta, k);
    } else if (head == "special") {
        auto i = take("i");
        auto u = take("u");
        if (!i || !u) throw DomainError("special needs i and u");
        SquareClass uc;
        if (*u == "1") uc = SquareClass::ONE;
        else if (*u == "eps") uc = SquareClass::EPS;
        else throw DomainError("u must be 1 or eps");
        out = fixed_zeta(rep::special(F, to_int(*i), uc));
    } else if (head == "ram-sc") {
        auto r = take("r");
        if (!r) throw DomainError("ram-sc needs r");
        out = rep::ram_sc(parse_half(*r), zeta);
    } else {
        throw DomainError("unknown representation family: " + head);
    }
    if (!kv.empty()) throw DomainError("unexpected key in representation literal: " + kv.begin()->first);
    return out;
}

// -------------------------------------------------------------------------- Gamma and WF

inline Sl2Element gamma_of(const FieldConfig& F, const RepParam& pi)
{
    if (pi.depth.twice <= 0) throw DomainError("gamma_of: depth-zero representations carry no Gamma");
    PadicScalar z = PadicScalar::zero();
    switch (pi.family) {
    case Family::PS: {
        i64 r = pi.depth.floor();
        return {PadicScalar::make(F, -r, 1), z, z};
    }
    case Family::UNRAM_SC: {
        i64 r = pi.depth.floor();
        Sl2Element Y{z, PadicScalar::make(F, 0, 1), PadicScalar::make(F, 0, F.eps)};
        if (pi.home == 1) Y = conj_eta(F, Y);
        return scale_pi(F, -r, Y);
    }
    case Family::RAM_SC: {
        i64 k = (pi.depth.twice + 1) / 2;
        return scale_pi(F, -k, {z, PadicScalar::make(F, 0, 1), PadicScalar::make(F, 1, 1)});
    }
    default: throw DomainError("gamma_of: family has no positive depth");
    }
}

inline FilterPoint home_point(const RepParam& pi)
{
    switch (pi.family) {
    case Family::UNRAM_SC:
    case Family::SPECIAL_SC: return pi.home == 1 ? FilterPoint::X1 : FilterPoint::X0;
    case Family::RAM_SC: return FilterPoint::Z0;
    default: return FilterPoint::X0;
    }
}

inline LabelSet h_wavefront(HTau t, int sign)
{
    using S = SquareClass;
    auto L = [](S a, S b) { return LabelSet::of({OrbitLabel::regular(a), OrbitLabel::regular(b)}); };
    switch (t) {
    case HTau::EPS: return sign > 0 ? L(S::ONE, S::EPS) : L(S::PI, S::EPSPI);
    case HTau::MINUS_PI: return sign > 0 ? L(S::ONE, S::PI) : L(S::EPS, S::EPSPI);
    case HTau::MINUS_EPSPI: return sign > 0 ? L(S::ONE, S::EPSPI) : L(S::EPS, S::PI);
    }
    return {};
}

inline LabelSet wavefront(const FieldConfig& F, const RepParam& pi)
{
    if (!is_depth_zero(pi)) return nil_support(F, gamma_of(F, pi));
    SquareClass h = pi.home == 1 ? SquareClass::PI : SquareClass::ONE;
    switch (pi.family) {
    case Family::TRIV: return LabelSet::of({OrbitLabel::zero_orbit()});
    case Family::STEINBERG:
    case Family::PS: return LabelSet::all_regular();
    case Family::UNRAM_SC:
        return LabelSet::of({OrbitLabel::regular(h), OrbitLabel::regular(SquareClass::EPS * h)});
    case Family::SPECIAL_SC: return LabelSet::of({OrbitLabel::regular(pi.u * h)});
    case Family::PS_HALF: return h_wavefront(pi.tau, pi.sign);
    case Family::RAM_SC: break;
    }
    throw DomainError("wavefront: bad parameter");
}

// -------------------------------------------------------------------------- depth-zero components

inline IrredLabel irred(const FieldConfig& F, Series s, int param = 0, SquareClass u = SquareClass::ONE)
{
    return {s, param, u, series_degree(s, F.p)};
}

// pi^{G_{x,0+}} as a multiset of SL(2, F_p) irreducibles
inline std::vector<IrredLabel> depth_zero_component(const FieldConfig& F, const RepParam& pi, FilterPoint vertex)
{
    if (!is_depth_zero(pi)) throw DomainError("depth_zero_component: positive-depth input");
    int x = vertex_index(vertex);
    using S = SquareClass;
    switch (pi.family) {
    case Family::TRIV: return {irred(F, Series::TRIV)};
    case Family::STEINBERG: return {irred(F, Series::STEINBERG)};
    case Family::PS: {
        int j = pi.chi, h = (F.p - 1) / 2;
        if (j == 0) return {irred(F, Series::TRIV), irred(F, Series::STEINBERG)};
        if (j == h) return {irred(F, Series::PS_HALF, 0, S::ONE), irred(F, Series::PS_HALF, 0, S::EPS)};
        return {irred(F, Series::PS, std::min(j, F.p - 1 - j))};
    }
    case Family::UNRAM_SC:
        if (x != pi.home) return {};
        return {irred(F, Series::CUSPIDAL, pi.chi)};
    case Family::SPECIAL_SC:
        if (x != pi.home) return {};
        return {irred(F, Series::CUSP_HALF, 0, pi.u)};
    case Family::PS_HALF: {
        if (pi.tau == HTau::EPS) {
            bool st = (pi.sign > 0) == (x == 0);
            return {irred(F, st ? Series::STEINBERG : Series::TRIV)};
        }
        S v = pi.sign > 0 ? S::ONE : S::EPS;
        if (pi.tau == HTau::MINUS_EPSPI && x == 1) v = v * S::EPS;
        return {irred(F, Series::PS_HALF, 0, v)};
    }
    case Family::RAM_SC: break;
    }
    throw DomainError("depth_zero_component: bad parameter");
}

inline LabelSet wavefront_via_gg(const CharTable& T, const RepParam& pi)
{
    if (!is_depth_zero(pi)) throw DomainError("wavefront_via_gg: depth-zero input required");
    LabelSet out;
    for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
        auto comps = depth_zero_component(T.F, pi, v);
        for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) {
            auto gg = gg_decompose(T, u);
            bool hit = false;
            for (auto& c : comps)
                if (std::find(gg.begin(), gg.end(), c) != gg.end()) hit = true;
            if (hit) out.insert(OrbitLabel::regular(v == FilterPoint::X1 ? u * SquareClass::PI : u));
        }
    }
    if (out.empty()) out.insert(OrbitLabel::zero_orbit());
    return out;
}

// -------------------------------------------------------------------------- dimensions

inline bool at_home(const RepParam& pi, FilterPoint vertex) { return vertex_index(vertex) == pi.home; }

// dim pi^{G_{x,r+}}
inline i64 core_dim(const FieldConfig& F, const RepParam& pi, FilterPoint vertex)
{
    i64 q = F.p;
    if (is_depth_zero(pi)) {
        i64 s = 0;
        for (auto& c : depth_zero_component(F, pi, vertex)) s += c.degree;
        return s;
    }
    i64 r = pi.depth.floor();
    switch (pi.family) {
    case Family::PS: return (q + 1) * ipow(q, static_cast<int>(r));
    case Family::UNRAM_SC: return at_home(pi, vertex) ? (q - 1) * ipow(q, static_cast<int>(r)) : 0;
    case Family::RAM_SC: return 0;
    default: throw DomainError("core_dim: bad parameter");
    }
}

inline i64 n_coefficient(const FieldConfig& F, const RepParam& pi, FilterPoint vertex)
{
    i64 q = F.p;
    if (is_depth_zero(pi)) return core_dim(F, pi, vertex);
    switch (pi.family) {
    case Family::PS: return q + 1;
    case Family::UNRAM_SC: {
        i64 r = pi.depth.floor(), qr = ipow(q, static_cast<int>(r));
        bool even = r % 2 == 0;
        if (at_home(pi, vertex)) return even ? q - qr : 1 - qr;
        return even ? 1 - qr : q - qr;
    }
    case Family::RAM_SC: {
        i64 k = (pi.depth.twice - 1) / 2;  // r - 1/2
        return (1 - ipow(q, static_cast<int>(k))) * (q + 1) / 2;
    }
    default: throw DomainError("n_coefficient: bad parameter");
    }
}

// dim pi^{G_{x,n}}: components of depth <= n-1 plus the constant term. Zero when n <= depth > 0.
inline i64 fixed_dim_branching(const FieldConfig& F, const RepParam& pi, FilterPoint vertex, i64 n)
{
    if (n < 1) throw DomainError("level must be a positive integer");
    if (!is_depth_zero(pi) && 2 * n <= pi.depth.twice) return 0;
    i64 s = n_coefficient(F, pi, vertex);
    for (auto& O : wavefront(F, pi).labels()) {
        if (O.zero) continue;
        s += tau_fixed_dim(F.p, parity_depth(O, vertex), Half::integer(n - 1));
    }
    return s;
}

// same count, summing explicitly enumerated tau components
inline i64 fixed_dim_ledger(const FieldConfig& F, const RepParam& pi, FilterPoint vertex, i64 n)
{
    if (!is_depth_zero(pi) && 2 * n <= pi.depth.twice) return 0;
    i64 s = n_coefficient(F, pi, vertex);
    if (n < 2) return s;
    for (auto& O : wavefront(F, pi).labels()) {
        if (O.zero) continue;
        for (auto& c : tau_rep(F, vertex, O, pi.zeta, n - 1).components)
            if (c.depth <= n - 1) s += c.degree;
    }
    return s;
}

// dim pi^{G_{x,2n}} from the closed polynomials; unramified rows exchanged for odd r.
// Only meaningful for 2n > depth.
inline i64 fixed_dim_closed_form(const FieldConfig& F, const RepParam& pi, FilterPoint vertex, i64 n)
{
    if (n < 1) throw DomainError("n must be >= 1");
    i64 q = F.p;
    i64 A = ipow(q, static_cast<int>(2 * n)), Bm = ipow(q, static_cast<int>(2 * n - 1));
    auto unram = [&](bool home, i64 r) {
        i64 qr = ipow(q, static_cast<int>(r));
        if (r % 2 == 1) home = !home;
        return home ? Bm - qr : A - qr;
    };
    switch (pi.family) {
    case Family::PS: return A + Bm;
    case Family::STEINBERG: return A + Bm - 1;
    case Family::TRIV: return 1;
    case Family::UNRAM_SC: return unram(at_home(pi, vertex), pi.depth.floor());
    case Family::SPECIAL_SC: return unram(at_home(pi, vertex), 0) / 2;
    case Family::RAM_SC: {
        i64 k = (pi.depth.twice - 1) / 2;
        return (q + 1) * (Bm - ipow(q, static_cast<int>(k))) / 2;
    }
    case Family::PS_HALF: {
        if (pi.tau != HTau::EPS) return (A + Bm) / 2;
        auto L = wavefront(F, pi).labels().front();
        return parity_depth(L, vertex) == Parity::EVEN ? Bm : A;
    }
    }
    throw DomainError("fixed_dim_closed_form: bad parameter");
}

struct Frac {
    i64 num = 0;
    i64 den = 1;
    friend bool operator==(const Frac&, const Frac&) = default;
};

inline std::string to_string(const Frac& f)
{
    if (f.den == 1) return std::to_string(f.num);
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

inline Frac c0_lce(const FieldConfig& F, const RepParam& pi)
{
    i64 q = F.p;
    switch (pi.family) {
    case Family::UNRAM_SC: return {-ipow(q, static_cast<int>(pi.depth.floor())), 1};
    case Family::SPECIAL_SC: return {-1, 2};
    case Family::RAM_SC: {
        i64 k = (pi.depth.twice - 1) / 2;
        return {ipow(q, static_cast<int>(k)) * (q + 1) / 2, 1};
    }
    case Family::STEINBERG: return {-1, 1};
    case Family::TRIV: return {1, 1};
    case Family::PS:
    case Family::PS_HALF: return {0, 1};
    }
    throw DomainError("c0_lce: bad parameter");
}

// -------------------------------------------------------------------------- finite-level characters

namespace detail {

// chi on Z_p^x of depth r >= 1: exp(2 pi i k e(a) / ((p-1) p^r)), e = discrete log mod p^{r+1}
inline std::function<cplx(i64)> positive_depth_torus_char(int p, i64 r, int k)
{
    i64 M = ipow(p, static_cast<int>(r + 1));
    i64 g = primitive_root(p);
    if (powmod(g, p - 1, static_cast<i64>(p) * p) == 1) g += p;  // primitive mod p^2, hence mod every p^m
    i64 order = (p - 1) * ipow(p, static_cast<int>(r));
    auto lg = std::make_shared<std::vector<i64>>(static_cast<std::size_t>(M), -1);
    for (i64 e = 0, x = 1; e < order; ++e, x = mulmod(x, g, M)) (*lg)[static_cast<std::size_t>(x)] = e;
    return [lg, M, order, k](i64 a) {
        i64 e = (*lg)[static_cast<std::size_t>(mod(a, M))];
        return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(mod(e * k, order)) / static_cast<double>(order));
    };
}

inline ClassFunction borel_character(QuotientPtr Q, const std::function<cplx(i64)>& chi)
{
    auto B = subgroup_where(Q, [](const Mat& x) { return x.c == 0; });
    return induce(B, [&](const Mat& x) { return chi(x.a); });
}

// Res_{G_x} of c-Ind from the vertex of parity `home` of sigma, at level Q->m, in the model at `vertex`
inline ClassFunction cuspidal_restriction(const ClassFunction& sigma, int parity, QuotientPtr Q)
{
    ClassFunction f(Q);
    i64 p = Q->p;
    for (int j = parity; j < Q->m; j += 2) {
        if (j == 0) {
            f += inflate(sigma, Q);
            continue;
        }
        i64 pj = ipow(p, j);
        auto H = subgroup_where(Q, [&](const Mat& x) { return x.c % pj == 0; });
        f += induce(
            H, [&](const Mat& x) { return sigma.at({x.a % p, 0, (x.c / pj) % p, x.d % p}); }, false);
    }
    return f;
}

}  // namespace detail

// Character of Res_{G_x} pi on G_x / G_{x,m} computed without the branching theorem, when available.
inline std::optional<ClassFunction> restriction_character(const CharTable& T, const RepParam& pi, FilterPoint vertex,
                                                          QuotientPtr Q)
{
    const FieldConfig& F = T.F;
    int x = vertex_index(vertex);
    switch (pi.family) {
    case Family::TRIV: return constant_function(Q, 1.0);
    case Family::STEINBERG: return detail::borel_induced(F, Q, 0) - constant_function(Q, 1.0);
    case Family::PS:
        if (is_depth_zero(pi)) return detail::borel_induced(F, Q, pi.chi);
        if (Q->m <= pi.depth.floor()) return ClassFunction(Q);
        return detail::borel_character(Q, detail::positive_depth_torus_char(F.p, pi.depth.floor(), pi.chi));
    case Family::UNRAM_SC:
        if (!is_depth_zero(pi)) return std::nullopt;
        return detail::cuspidal_restriction(T.find(irred(F, Series::CUSPIDAL, pi.chi)).chi, (pi.home + x) % 2, Q);
    case Family::SPECIAL_SC:
        return detail::cuspidal_restriction(T.find(irred(F, Series::CUSP_HALF, 0, pi.u)).chi, (pi.home + x) % 2, Q);
    default: return std::nullopt;
    }
}

// sum over WF of Shalika characters of depths lo..Q->m-1, on the quotient Q
inline ClassFunction shalika_sum(const FieldConfig& F, const RepParam& pi, FilterPoint vertex, i64 lo, QuotientPtr Q)
{
    ClassFunction f(Q);
    for (auto& O : wavefront(F, pi).labels()) {
        if (O.zero) continue;
        for (auto& c : tau_rep(F, vertex, O, pi.zeta, std::max<i64>(1, Q->m - 1)).components)
            if (c.depth >= lo && c.depth < Q->m) f += shalika_character(F, {vertex, c.rep, pi.zeta, {}}, Q);
    }
    return f;
}

// max |a - b| over classes inside G_{x,lvl}
inline double max_abs_diff(const ClassFunction& a, const ClassFunction& b, i64 lvl = 0)
{
    a.check(b);
    i64 pl = ipow(a.Q->p, static_cast<int>(lvl));
    double e = 0;
    for (std::size_t k = 0; k < a.v.size(); ++k) {
        Mat g = a.Q->class_rep(static_cast<int>(k));
        if (mod(g.a - 1, pl) || mod(g.d - 1, pl) || g.b % pl || g.c % pl) continue;
        e = std::max(e, std::abs(a.v[k] - b.v[k]));
    }
    return e;
}

// -------------------------------------------------------------------------- exp and mu-hat

// exp X reduced mod p^m, in the model coordinates of `vertex`; X must lie in g_{x,1}.
// For traceless X, X^2 = delta I, so exp X = C I + S X with C, S the even/odd series in delta.
inline Mat exp_in_quotient(const FieldConfig& F, const Sl2Element& X, FilterPoint vertex, int m)
{
    if (vertex == FilterPoint::Z0) throw DomainError("exp_in_quotient: vertex required");
    Half dep = depth_at(X, vertex);
    if (dep < Half::integer(1)) throw DomainError("exp: X must lie in g_{x,1}");
    Sl2Element Y = vertex == FilterPoint::X1 ? conj_eta_inv(F, X) : X;
    PadicScalar delta = minus_det(F, Y);
    PadicScalar C = PadicScalar::from_int(F, 1), S = PadicScalar::from_int(F, 1);
    PadicScalar term = PadicScalar::from_int(F, 1);  // delta^k / (2k)!
    for (int k = 1; k <= 4 * m + 8; ++k) {
        term = mul(F, term, mul(F, delta, inv(F, PadicScalar::from_int(F, (2 * k - 1) * (2 * k)))));
        if (term.is_zero()) break;
        C = add(F, C, term);
        S = add(F, S, mul(F, term, inv(F, PadicScalar::from_int(F, 2 * k + 1))));
    }
    PadicScalar Sa = mul(F, S, Y.a);
    i64 M = ipow(F.p, m);
    Mat g{add(F, C, Sa).to_residue(F, m), mul(F, S, Y.b).to_residue(F, m), mul(F, S, Y.c).to_residue(F, m),
          sub(F, C, Sa).to_residue(F, m)};
    if (mod(g.a * g.d - g.b * g.c, M) != 1) throw PrecisionError("exp: determinant lost to precision");
    return g;
}

struct MuHat {
    cplx value;
    bool regular = true;  // false: X not regular semisimple, value still computed
};

// q/2 + tau(exp X) at even parity, 1/2 + tau(exp X) at odd; tau_chi from tau_character at level m
inline MuHat mu_hat_value(const FieldConfig& F, const OrbitLabel& orbit, FilterPoint vertex, const Sl2Element& X,
                          const ClassFunction& tau_chi)
{
    if (orbit.zero) throw DomainError("mu_hat: regular orbit required");
    if (tau_chi.Q->m < 2) throw DomainError("mu_hat: level must be >= 2");
    Mat g = exp_in_quotient(F, X, vertex, tau_chi.Q->m);
    auto kind = classify(F, X).kind;
    double base = parity_depth(orbit, vertex) == Parity::EVEN ? F.p / 2.0 : 0.5;
    return {base + tau_chi.at(g), kind == ElementKind::SPLIT_SS || kind == ElementKind::ANISO_SS};
}

inline MuHat mu_hat_value(const FieldConfig& F, const OrbitLabel& orbit, FilterPoint vertex, const Sl2Element& X,
                          int m, CentralSign zeta = {})
{
    auto Q = build_quotient(F.p, m);
    return mu_hat_value(F, orbit, vertex, X, tau_character(F, vertex, orbit, zeta, Q));
}

// -------------------------------------------------------------------------- verifier

struct LevelRow {
    i64 n = 0;
    i64 branching = 0;
    i64 ledger = 0;
    std::optional<i64> closed;  // set at even levels 2n > depth
};

struct BranchingReport {
    RepParam pi;
    FilterPoint vertex = FilterPoint::X0;
    i64 n_x = 0;
    i64 core = 0;
    LabelSet wf;
    std::vector<LevelRow> rows;
    std::vector<std::string> character_checks;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

inline BranchingReport verify_main_theorem(const FieldConfig& F, const RepParam& pi, FilterPoint vertex, i64 n_max,
                                           bool characters = true)
{
    BranchingReport R;
    R.pi = pi;
    R.vertex = vertex;
    R.n_x = n_coefficient(F, pi, vertex);
    R.core = core_dim(F, pi, vertex);
    R.wf = wavefront(F, pi);
    std::string tag = to_string(pi) + " at " + to_string(vertex);
    auto fail = [&](const std::string& s) { R.failures.push_back(tag + ": " + s); };

    i64 prev = 0;
    for (i64 n = 1; n <= n_max; ++n) {
        LevelRow row{n, fixed_dim_branching(F, pi, vertex, n), fixed_dim_ledger(F, pi, vertex, n), std::nullopt};
        if (n % 2 == 0 && n > pi.depth.value()) row.closed = fixed_dim_closed_form(F, pi, vertex, n / 2);
        if (row.branching != row.ledger) fail("level " + std::to_string(n) + ": branching " + std::to_string(row.branching) + " != ledger " + std::to_string(row.ledger));
        if (row.closed && *row.closed != row.branching) fail("level " + std::to_string(n) + ": closed form " + std::to_string(*row.closed) + " != " + std::to_string(row.branching));
        if (row.branching < 0 || row.branching < prev) fail("level " + std::to_string(n) + ": dimension negative or decreasing");
        prev = row.branching;
        R.rows.push_back(row);
    }

    // core part at level r+ and the constant term identity
    i64 lvl = pi.depth.floor() + 1;
    if (fixed_dim_branching(F, pi, vertex, lvl) != R.core) fail("core part mismatch at level r+");
    i64 tsum = 0;
    for (auto& O : R.wf.labels())
        if (!O.zero) tsum += tau_fixed_dim(F.p, parity_depth(O, vertex), pi.depth);
    if (R.n_x != R.core - tsum) fail("n_x differs from dim pi^{G_{x,r+}} minus the tau contributions");

    if (characters && F.p == 3 && pi.depth.is_integer()) {
        CharTable T = char_table(F);
        i64 r = pi.depth.floor();
        auto Qcore = build_quotient(F.p, static_cast<int>(r + 1));
        auto core_chi = restriction_character(T, pi, vertex, Qcore);
        for (int m = static_cast<int>(r) + 2; m <= std::min<i64>(n_max, 3); ++m) {
            auto Q = build_quotient(F.p, m);
            auto full = restriction_character(T, pi, vertex, Q);
            if (!full || !core_chi) break;
            ClassFunction lhs = *full - inflate(*core_chi, Q);
            ClassFunction rhs = shalika_sum(F, pi, vertex, r + 1, Q);
            // positive depth: the identity is one of G_{x,r+}-representations
            double err = max_abs_diff(lhs, rhs, r == 0 ? 0 : r + 1);
            std::ostringstream os;
            os << "level " << m << ": max |difference| = " << err;
            R.character_checks.push_back(os.str());
            if (err > INT_TOL) fail("character-level identity fails at level " + std::to_string(m));
        }
    }
    return R;
}

// every family exercised by the verifier
inline std::vector<RepParam> exceptional_depth_zero(const FieldConfig& F)
{
    std::vector<RepParam> out{rep::triv(), rep::steinberg()};
    for (HTau t : {HTau::EPS, HTau::MINUS_PI, HTau::MINUS_EPSPI})
        for (int s : {1, -1}) out.push_back(rep::ps_half(F, t, s));
    for (int i : {0, 1})
        for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) out.push_back(rep::special(F, i, u));
    return out;
}

inline std::vector<RepParam> all_families(const FieldConfig& F)
{
    auto out = exceptional_depth_zero(F);
    out.push_back(rep::ps(F, 0));
    out.push_back(rep::ps(F, 1));
    out.push_back(rep::ps(F, 2));
    for (int i : {0, 1}) {
        out.push_back(rep::unram_sc(F, i, 0, {-1}));
        for (int r : {1, 2}) out.push_back(rep::unram_sc(F, i, r));
    }
    out.push_back(rep::ram_sc(Half::halves(1)));
    out.push_back(rep::ram_sc(Half::halves(3)));
    return out;
}

}  // namespace sl2lce
