#include <gtest/gtest.h>

#include "sl2lce/shalika.hpp"

using namespace sl2lce;

namespace {

OrbitLabel reg(SquareClass c) { return OrbitLabel::regular(c); }

Sl2Element upper(const FieldConfig& F, i64 v, i64 u)
{
    return {PadicScalar::zero(), PadicScalar::make(F, v, u), PadicScalar::zero()};
}

}  // namespace

TEST(Shalika, ComponentDegree)
{
    EXPECT_EQ(tau_component_degree(3, 1), 4);
    EXPECT_EQ(tau_component_degree(3, 2), 12);
    EXPECT_EQ(tau_component_degree(5, 1), 12);
    EXPECT_EQ(tau_component_degree(5, 2), 60);
}

TEST(Shalika, JIsASubgroup)
{
    auto Q = build_quotient(3, 3);
    for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1})
        for (i64 d : {1, 2}) EXPECT_TRUE(is_closed_subgroup(build_J(v, d, Q)));
    EXPECT_THROW(build_J(FilterPoint::X0, 3, Q), DomainError);
}

TEST(Shalika, IrreducibleWithExpectedDegree)
{
    auto F = FieldConfig::make(3);
    auto Q = build_quotient(3, 3);
    for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1})
        for (SquareClass c : all_square_classes)
            for (CentralSign z : {CentralSign{1}, CentralSign{-1}})
                for (auto& X : gx_orbit_reps(F, reg(c), v, 1, 2)) {
                    i64 d = shalika_depth(X, v);
                    auto chi = shalika_character(F, {v, X, z, {}}, Q);
                    EXPECT_EQ(round_integer(chi.degree()), tau_component_degree(3, d));
                    EXPECT_EQ(round_integer(inner_product(chi, chi)), 1);
                }
}

TEST(Shalika, CentralSignIsRespected)
{
    auto F = FieldConfig::make(3);
    auto Q = build_quotient(3, 2);
    auto X = upper(F, -1, 1);
    for (int s : {1, -1}) {
        auto chi = shalika_character(F, {FilterPoint::X0, X, {s}, {}}, Q);
        int minus = Q->neg_class(Q->identity_class());
        EXPECT_NEAR((chi.v[static_cast<std::size_t>(minus)] / chi.degree()).real(), s, 1e-9);
    }
}

TEST(Shalika, DistinctOrbitsAreInequivalent)
{
    auto F = FieldConfig::make(3);
    auto Q = build_quotient(3, 2);
    auto a = shalika_character(F, {FilterPoint::X0, upper(F, -1, 1), {}, {}}, Q);
    auto b = shalika_character(F, {FilterPoint::X0, upper(F, -1, 2), {}, {}}, Q);
    EXPECT_EQ(round_integer(inner_product(a, b)), 0);
}

TEST(Shalika, EquivalenceUnderSmallPerturbation)
{
    auto F = FieldConfig::make(3);
    auto Q = build_quotient(3, 3);
    // Gamma and Gamma + (element of g_{x,0}) agree on G_{x,1}
    Sl2Element G1 = upper(F, -2, 1);
    Sl2Element G2 = G1;
    G2.c = PadicScalar::make(F, 0, 1);
    G2.a = PadicScalar::make(F, 0, 1);
    EXPECT_TRUE(check_shalika_equiv(F, G1, G1, Half::integer(0), FilterPoint::X0, Q));
    // unit multiples by a square of a unit give the same orbit label
    Sl2Element G3 = upper(F, -2, 4);
    EXPECT_TRUE(check_shalika_equiv(F, G1, G3, Half::integer(1), FilterPoint::X0, Q, {}, false));
    Sl2Element G4 = upper(F, -2, 2);
    EXPECT_FALSE(check_shalika_equiv(F, G1, G4, Half::integer(1), FilterPoint::X0, Q, {}, false));
    EXPECT_THROW(check_shalika_equiv(F, G1, upper(F, -1, 1), Half::integer(0), FilterPoint::X0, Q), DomainError);
}

TEST(Shalika, TauRepLedger)
{
    auto F = FieldConfig::make(5);
    auto t = tau_rep(F, FilterPoint::X0, reg(SquareClass::EPS), {}, 6);
    ASSERT_EQ(t.components.size(), 3u);
    EXPECT_EQ(t.components[0].depth, 2);
    EXPECT_EQ(t.components[2].depth, 6);
    for (auto& c : t.components) EXPECT_EQ(c.degree, tau_component_degree(5, c.depth));
    auto odd = tau_rep(F, FilterPoint::X1, reg(SquareClass::EPS), {}, 5);
    ASSERT_EQ(odd.components.size(), 3u);
    EXPECT_EQ(odd.components[0].depth, 1);
    EXPECT_TRUE(tau_rep(F, FilterPoint::X0, OrbitLabel::zero_orbit(), {}).trivial);
}

TEST(Shalika, FixedDimClosedForms)
{
    for (i64 q : {3, 5, 7})
        for (i64 r = 0; r <= 8; ++r) {
            EXPECT_EQ(tau_fixed_dim(q, Parity::EVEN, Half::integer(r)), tau_fixed_closed_even(q, r)) << q << " " << r;
            EXPECT_EQ(tau_fixed_dim(q, Parity::ODD, Half::integer(r)), tau_fixed_closed_odd(q, r)) << q << " " << r;
            EXPECT_EQ(tau_fixed_dim(q, Parity::EVEN, Half::integer(r)) + tau_fixed_dim(q, Parity::ODD, Half::integer(r)),
                      tau_fixed_closed_pair(q, r));
        }
    // half-integer levels count the same components as the floor
    EXPECT_EQ(tau_fixed_dim(3, Parity::ODD, Half::halves(3)), tau_fixed_dim(3, Parity::ODD, Half::integer(1)));
}

TEST(Shalika, TauCharacterDegreeMatchesLedger)
{
    auto F = FieldConfig::make(3);
    auto Q = build_quotient(3, 3);
    for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1})
        for (SquareClass c : all_square_classes) {
            auto chi = tau_character(F, v, reg(c), {}, Q);
            EXPECT_EQ(round_integer(chi.degree()), tau_fixed_dim(3, parity_depth(reg(c), v), Half::integer(2)));
        }
}

TEST(Shalika, PsiTwistKeepsDegreesAndNorms)
{
    auto F = FieldConfig::make(3, 8, 2);
    auto Q = build_quotient(3, 2);
    for (SquareClass c : all_square_classes)
        for (auto& X : gx_orbit_reps(F, reg(c), FilterPoint::X0, 1, 1)) {
            auto chi = shalika_character(F, {FilterPoint::X0, X, {}, {}}, Q);
            EXPECT_EQ(round_integer(chi.degree()), 4);
            EXPECT_EQ(round_integer(inner_product(chi, chi)), 1);
        }
}
