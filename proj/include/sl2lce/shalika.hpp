#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fingrp.hpp"
#include "lie.hpp"

namespace sl2lce {

// value of zeta at -I
struct CentralSign {
    int value = 1;
    friend bool operator==(const CentralSign&, const CentralSign&) = default;
};

struct ShalikaDatum {
    FilterPoint vertex = FilterPoint::X0;
    Sl2Element gamma;
    CentralSign zeta;
    // character of the centralizer image; defaults to the central-sign extension for nilpotent gamma
    std::function<cplx(const Mat&)> theta;
};

// Quotients at x1 are modelled by SL(2, Z/p^m) through g -> eta g eta^-1, eta = diag(1, pi).
struct MatP {
    PadicScalar a, b, c, d;
};

inline MatP model_to_actual(const FieldConfig& F, FilterPoint vertex, const Mat& g)
{
    MatP x{PadicScalar::from_int(F, g.a), PadicScalar::from_int(F, g.b), PadicScalar::from_int(F, g.c),
           PadicScalar::from_int(F, g.d)};
    if (vertex == FilterPoint::X1) {
        x.b = mul(F, PadicScalar::make(F, -1, 1), x.b);
        x.c = mul(F, PadicScalar::make(F, 1, 1), x.c);
    }
    return x;
}

inline i64 shalika_depth(const Sl2Element& G, FilterPoint vertex)
{
    Half h = depth_at(G, vertex);
    if (h.is_inf() || !h.is_integer() || h.floor() >= 0) throw DomainError("Shalika datum needs negative integer depth");
    return -h.floor();
}

inline SubgroupSpec build_J(FilterPoint vertex, i64 d, QuotientPtr Q)
{
    if (vertex == FilterPoint::Z0) throw DomainError("build_J: vertex required");
    if (d < 1) throw DomainError("build_J: d must be positive");
    if (Q->m <= d) throw DomainError("build_J: modulus too small");
    i64 m1 = ipow(Q->p, static_cast<int>((d + 1) / 2));
    i64 m2 = ipow(Q->p, static_cast<int>((d + 2) / 2));
    return subgroup_where(Q, [&](const Mat& g) {
        return mod(g.a - 1, m1) == 0 && mod(g.d - 1, m1) == 0 && g.b % m1 == 0 && g.c % m2 == 0;
    });
}

// eta(g) = psi(tr(Gamma (g - I)))
inline std::vector<cplx> eta_character(const FieldConfig& F, const Sl2Element& G, FilterPoint vertex,
                                       const SubgroupSpec& J)
{
    std::vector<cplx> out;
    out.reserve(J.size());
    for (std::size_t i : J.elems) {
        MatP x = model_to_actual(F, vertex, J.Q->element(i));
        PadicScalar diag = sub(F, x.a, x.d);
        PadicScalar t = add(F, add(F, mul(F, G.a, diag), mul(F, G.b, x.c)), mul(F, G.c, x.b));
        out.push_back(psi(F, t, J.Q->m + 1));
    }
    return out;
}

// Gamma in model coordinates, scaled to a primitive integral matrix, reduced mod p^m
inline Mat primitive_residue(const FieldConfig& F, const Sl2Element& G, FilterPoint vertex, int m)
{
    Sl2Element X = vertex == FilterPoint::X1 ? conj_eta_inv(F, G) : G;
    i64 delta = depth_at(X, FilterPoint::X0).floor();
    X = scale_pi(F, -delta, X);
    i64 a = X.a.to_residue(F, m), b = X.b.to_residue(F, m), c = X.c.to_residue(F, m);
    return {a, b, c, mod(-a, ipow(F.p, m))};
}

inline SubgroupSpec centralizer_in_quotient(const FieldConfig& F, const Sl2Element& G, QuotientPtr Q,
                                            FilterPoint vertex)
{
    if (G.is_zero()) throw DomainError("centralizer of zero");
    Mat P = primitive_residue(F, G, vertex, Q->m);
    return subgroup_where(Q, [&](const Mat& g) { return Q->mul(g, P) == Q->mul(P, g); });
}

// zeta(z) on Z U for nilpotent Gamma: the sign is read off the trace mod p
inline std::function<cplx(const Mat&)> central_sign_theta(int p, CentralSign zeta)
{
    return [p, zeta](const Mat& g) -> cplx {
        return mod(g.a + g.d + 2, p) == 0 ? cplx(static_cast<double>(zeta.value)) : cplx(1.0);
    };
}

// Ind_{C J}^{G_x} of theta(c) eta(j)
inline ClassFunction shalika_character(const FieldConfig& F, const ShalikaDatum& D, QuotientPtr Q)
{
    i64 d = shalika_depth(D.gamma, D.vertex);
    if (Q->m <= d) throw DomainError("shalika_character: quotient level must exceed the depth");
    auto theta = D.theta;
    if (!theta) {
        if (classify(F, D.gamma).kind != ElementKind::NILPOTENT)
            throw DomainError("shalika_character: explicit theta needed for non-nilpotent gamma");
        theta = central_sign_theta(F.p, D.zeta);
    }
    SubgroupSpec J = build_J(D.vertex, d, Q);
    std::vector<cplx> eta = eta_character(F, D.gamma, D.vertex, J);
    SubgroupSpec C = centralizer_in_quotient(F, D.gamma, Q, D.vertex);

    std::vector<std::int32_t> slot(Q->order(), -1);
    std::vector<cplx> vals;
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < J.size(); ++j) {
        slot[J.elems[j]] = static_cast<std::int32_t>(vals.size());
        vals.push_back(eta[j]);
        members.push_back(J.elems[j]);
    }
    for (std::size_t ci : C.elems) {
        Mat c = Q->element(ci);
        cplx th = theta(c);
        if (slot[ci] >= 0) {
            if (std::abs(vals[static_cast<std::size_t>(slot[ci])] - th) > 1e-9)
                throw DomainError("theta incompatible with eta on the intersection");
            continue;
        }
        for (std::size_t j = 0; j < J.size(); ++j) {
            std::size_t k = Q->index_of(Q->mul(c, Q->element(J.elems[j])));
            if (slot[k] >= 0) throw DomainError("C J coset bookkeeping failed");
            slot[k] = static_cast<std::int32_t>(vals.size());
            vals.push_back(th * eta[j]);
            members.push_back(k);
        }
    }
    std::vector<std::size_t> order(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return members[x] < members[y]; });
    SubgroupSpec H{Q, {}};
    std::vector<cplx> hv;
    for (std::size_t i : order) {
        H.elems.push_back(members[i]);
        hv.push_back(vals[i]);
    }
    return induce(H, hv);
}

inline i64 tau_component_degree(i64 q, i64 d) { return ipow(q, static_cast<int>(d - 1)) * (q * q - 1) / 2; }

struct TauComponent {
    i64 depth = 0;
    i64 degree = 0;
    OrbitLabel orbit;
    FilterPoint vertex = FilterPoint::X0;
    Sl2Element rep;
};

struct TauRep {
    FilterPoint vertex = FilterPoint::X0;
    OrbitLabel orbit;
    CentralSign zeta;
    // the zero orbit carries the trivial representation and no components
    bool trivial = false;
    std::vector<TauComponent> components;
};

inline TauRep tau_rep(const FieldConfig& F, FilterPoint vertex, const OrbitLabel& orbit, CentralSign zeta,
                      i64 d_max = 6)
{
    if (d_max < 1) throw DomainError("tau_rep: d_max must be >= 1");
    TauRep t{vertex, orbit, zeta, orbit.zero, {}};
    if (orbit.zero) return t;
    auto reps = gx_orbit_reps(F, orbit, vertex, 1, d_max);
    for (auto it = reps.rbegin(); it != reps.rend(); ++it) {
        i64 d = -depth_at(*it, vertex).floor();
        t.components.push_back({d, tau_component_degree(F.p, d), orbit, vertex, *it});
    }
    return t;
}

// sum of the degrees of components of depth <= r (components enumerated as far as needed)
inline i64 tau_fixed_dim(i64 q, Parity parity, Half r)
{
    if (r.twice < 0) throw DomainError("tau_fixed_dim: level must be >= 0");
    i64 s = 0;
    for (i64 d = parity == Parity::EVEN ? 2 : 1; 2 * d <= r.twice; d += 2) s += tau_component_degree(q, d);
    return s;
}

inline i64 tau_fixed_dim(const FieldConfig& F, const TauRep& t, Half r)
{
    if (t.trivial) return 0;
    return tau_fixed_dim(F.p, parity_depth(t.orbit, t.vertex), r);
}

inline i64 tau_fixed_closed_even(i64 q, i64 r) { return q * (ipow(q, static_cast<int>(2 * (r / 2))) - 1) / 2; }
inline i64 tau_fixed_closed_odd(i64 q, i64 r) { return (ipow(q, static_cast<int>(2 * ((r + 1) / 2))) - 1) / 2; }
inline i64 tau_fixed_closed_pair(i64 q, i64 r) { return (q + 1) * (ipow(q, static_cast<int>(r)) - 1) / 2; }

// sum of the Shalika characters of tau_x(O, zeta) of depth < Q->m, as a class function on Q
inline ClassFunction tau_character(const FieldConfig& F, FilterPoint vertex, const OrbitLabel& orbit,
                                   CentralSign zeta, QuotientPtr Q)
{
    ClassFunction f(Q);
    if (orbit.zero || Q->m < 2) return f;
    for (auto& comp : tau_rep(F, vertex, orbit, zeta, Q->m - 1).components)
        f += shalika_character(F, {vertex, comp.rep, zeta, {}}, Q);
    return f;
}

// Compares the two Shalika characters on the image of G_{x,s+}.
inline bool check_shalika_equiv(const FieldConfig& F, const Sl2Element& G1, const Sl2Element& G2, Half s,
                                FilterPoint vertex, QuotientPtr Q, CentralSign zeta = {}, bool enforce = true)
{
    i64 d1 = shalika_depth(G1, vertex), d2 = shalika_depth(G2, vertex);
    if (enforce) {
        if (d1 != d2) throw DomainError("check_shalika_equiv: depths differ");
        if (!coset_orbit(F, G1, vertex) || !coset_orbit(F, G2, vertex))
            throw DomainError("check_shalika_equiv: coset not degenerate");
        Sl2Element diff = plus(F, G1, scale(F, PadicScalar::from_int(F, -1), G2));
        if (!in_filtration(diff, vertex, Half{-s.twice}, false))
            throw DomainError("check_shalika_equiv: difference not in the -s filtration");
    }
    ClassFunction a = shalika_character(F, {vertex, G1, zeta, {}}, Q);
    ClassFunction b = shalika_character(F, {vertex, G2, zeta, {}}, Q);
    i64 lvl = s.floor() + 1;
    if (lvl >= Q->m) return true;
    i64 pm = ipow(Q->p, static_cast<int>(lvl));
    for (std::size_t i = 0; i < Q->order(); ++i) {
        Mat g = Q->element(i);
        if (mod(g.a - 1, pm) || mod(g.d - 1, pm) || g.b % pm || g.c % pm) continue;
        auto k = static_cast<std::size_t>(Q->class_of_index(i));
        if (std::abs(a.v[k] - b.v[k]) > 1e-9) return false;
    }
    return true;
}

}  // namespace sl2lce
