#include <gtest/gtest.h>

#include <random>

#include "sl2lce/field.hpp"

using namespace sl2lce;

namespace {

PadicScalar random_unitish(const FieldConfig& F, std::mt19937_64& rng, int vlo, int vhi)
{
    std::uniform_int_distribution<int> vd(vlo, vhi);
    std::uniform_int_distribution<i64> ud(1, F.pN - 1);
    i64 u;
    do u = ud(rng);
    while (u % F.p == 0);
    return PadicScalar::make(F, vd(rng), u);
}

}  // namespace

TEST(Field, SmallestNonresidue)
{
    EXPECT_EQ(FieldConfig::make(3).eps, 2);
    EXPECT_EQ(FieldConfig::make(5).eps, 2);
    EXPECT_EQ(FieldConfig::make(7).eps, 3);
    EXPECT_EQ(FieldConfig::make(11).eps, 2);
    EXPECT_EQ(FieldConfig::make(13).eps, 2);
}

TEST(Field, RejectsBadPrimes)
{
    EXPECT_THROW(FieldConfig::make(2), DomainError);
    EXPECT_THROW(FieldConfig::make(9), DomainError);
    EXPECT_THROW(FieldConfig::make(3, 8, 3), DomainError);
}

TEST(Field, LegendreMatchesSquares)
{
    for (int p : {3, 5, 7, 11}) {
        std::vector<bool> sq(static_cast<std::size_t>(p), false);
        for (int x = 1; x < p; ++x) sq[static_cast<std::size_t>(x * x % p)] = true;
        for (int a = 1; a < p; ++a) EXPECT_EQ(legendre(a, p), sq[static_cast<std::size_t>(a)] ? 1 : -1) << p << " " << a;
    }
}

TEST(Field, MakeNormalizesUnit)
{
    auto F = FieldConfig::make(3);
    auto s = PadicScalar::make(F, 1, 18);  // 3 * 18 = 3^3 * 2
    EXPECT_EQ(s.val, 3);
    EXPECT_EQ(s.unit, 2);
    EXPECT_TRUE(PadicScalar::from_int(F, 0).is_zero());
}

TEST(Field, SquareClassExamples)
{
    auto F = FieldConfig::make(3);
    EXPECT_EQ(square_class(F, PadicScalar::from_int(F, 1)), SquareClass::ONE);
    EXPECT_EQ(square_class(F, PadicScalar::from_int(F, 2)), SquareClass::EPS);
    EXPECT_EQ(square_class(F, PadicScalar::from_int(F, 3)), SquareClass::PI);
    EXPECT_EQ(square_class(F, PadicScalar::from_int(F, 6)), SquareClass::EPSPI);
    EXPECT_EQ(square_class(F, PadicScalar::from_int(F, 9 * 7)), SquareClass::ONE);
    EXPECT_THROW(square_class(F, PadicScalar::zero()), DomainError);
}

TEST(Field, SquareClassIsHomomorphism)
{
    for (int p : {3, 5, 7}) {
        auto F = FieldConfig::make(p);
        std::mt19937_64 rng(p);
        for (int t = 0; t < 500; ++t) {
            auto a = random_unitish(F, rng, -4, 4), b = random_unitish(F, rng, -4, 4);
            EXPECT_EQ(square_class(F, mul(F, a, b)), square_class(F, a) * square_class(F, b));
            EXPECT_EQ(square_class(F, inv(F, a)), square_class(F, a));
        }
    }
}

TEST(Field, KleinGroupLaw)
{
    for (SquareClass a : all_square_classes) {
        EXPECT_EQ(a * a, SquareClass::ONE);
        EXPECT_EQ(a * SquareClass::ONE, a);
        for (SquareClass b : all_square_classes) EXPECT_EQ(a * b, b * a);
    }
    EXPECT_EQ(SquareClass::EPS * SquareClass::PI, SquareClass::EPSPI);
}

TEST(Field, MinusOneClass)
{
    EXPECT_EQ(FieldConfig::make(3).class_of_minus_one(), SquareClass::EPS);
    EXPECT_EQ(FieldConfig::make(5).class_of_minus_one(), SquareClass::ONE);
    EXPECT_EQ(FieldConfig::make(7).class_of_minus_one(), SquareClass::EPS);
}

TEST(Field, GammaOfExtension)
{
    auto F3 = FieldConfig::make(3), F5 = FieldConfig::make(5);
    EXPECT_EQ(gamma_of_extension(F3, SquareClass::EPS), SquareClass::EPS);
    EXPECT_EQ(gamma_of_extension(F3, SquareClass::PI), SquareClass::EPSPI);
    EXPECT_EQ(gamma_of_extension(F3, SquareClass::EPSPI), SquareClass::PI);
    EXPECT_EQ(gamma_of_extension(F5, SquareClass::PI), SquareClass::PI);
    EXPECT_EQ(gamma_of_extension(F5, SquareClass::EPSPI), SquareClass::EPSPI);
    EXPECT_THROW(gamma_of_extension(F3, SquareClass::ONE), DomainError);
}

// gamma is a nontrivial norm class from F[sqrt(t)]: check with the Hilbert symbol
// (a,b) = (-1)^{v(a)v(b)(p-1)/2} (a0/p)^{v(b)} (b0/p)^{v(a)} for odd p
TEST(Field, GammaIsANorm)
{
    auto hilbert = [](const FieldConfig& F, SquareClass a, SquareClass b) {
        int va = has_pi(a), vb = has_pi(b);
        int a0 = has_eps(a) ? -1 : 1, b0 = has_eps(b) ? -1 : 1;
        int s = (va * vb * (F.p - 1) / 2) % 2 ? -1 : 1;
        if (vb) s *= a0;
        if (va) s *= b0;
        return s;
    };
    for (int p : {3, 5, 7, 11}) {
        auto F = FieldConfig::make(p);
        for (SquareClass t : {SquareClass::EPS, SquareClass::PI, SquareClass::EPSPI}) {
            SquareClass g = gamma_of_extension(F, t);
            EXPECT_NE(g, SquareClass::ONE);
            EXPECT_EQ(hilbert(F, g, t), 1) << p << " " << to_string(t);
        }
    }
}

TEST(Field, AddCancellationGivesZero)
{
    auto F = FieldConfig::make(3);
    auto a = PadicScalar::make(F, -2, 5);
    EXPECT_TRUE(add(F, a, neg(F, a)).is_zero());
    EXPECT_TRUE(sub(F, a, a).is_zero());
}

TEST(Field, AddTracksKnownDigits)
{
    auto F = FieldConfig::make(3, 6);
    auto a = PadicScalar::make(F, 0, 1);
    auto b = PadicScalar::make(F, 0, 2);  // 1 + 2 = 3
    auto s = add(F, a, b);
    EXPECT_EQ(s.val, 1);
    EXPECT_EQ(s.unit_mod(F, 1), 1);
    EXPECT_EQ(s.prec, 5);
    EXPECT_THROW(s.unit_mod(F, 6), PrecisionError);
}

TEST(Field, ArithmeticRingLaws)
{
    auto F = FieldConfig::make(5);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 300; ++t) {
        auto a = random_unitish(F, rng, 0, 3), b = random_unitish(F, rng, 0, 3), c = random_unitish(F, rng, 0, 3);
        EXPECT_TRUE(same(F, add(F, a, b), add(F, b, a)));
        EXPECT_TRUE(same(F, mul(F, a, add(F, b, c)), add(F, mul(F, a, b), mul(F, a, c))));
        EXPECT_TRUE(same(F, mul(F, a, inv(F, a)), PadicScalar::from_int(F, 1)));
    }
    EXPECT_THROW(inv(F, PadicScalar::zero()), DomainError);
}

TEST(Field, ArithDispatch)
{
    auto F = FieldConfig::make(3);
    auto a = PadicScalar::from_int(F, 4), b = PadicScalar::from_int(F, 5);
    EXPECT_TRUE(same(F, arith(F, a, b, ArithKind::ADD), PadicScalar::from_int(F, 9)));
    EXPECT_TRUE(same(F, arith(F, a, b, ArithKind::MUL), PadicScalar::from_int(F, 20)));
    EXPECT_TRUE(same(F, arith(F, a, b, ArithKind::NEG), PadicScalar::from_int(F, -4)));
}

TEST(Field, PsiIsAdditiveCharacter)
{
    for (i64 c : {1, 2}) {
        auto F = FieldConfig::make(3, 8, c);
        std::mt19937_64 rng(17);
        for (int t = 0; t < 300; ++t) {
            auto a = random_unitish(F, rng, -3, 2), b = random_unitish(F, rng, -3, 2);
            auto s = add(F, a, b);
            EXPECT_NEAR(std::abs(psi(F, s, 4) - psi(F, a, 4) * psi(F, b, 4)), 0.0, 1e-9);
        }
        // trivial on p Z_p, not on Z_p
        EXPECT_NEAR(std::abs(psi(F, PadicScalar::from_int(F, 6), 1) - 1.0), 0.0, 1e-12);
        EXPECT_GT(std::abs(psi(F, PadicScalar::from_int(F, 1), 1) - 1.0), 0.5);
    }
}

TEST(Field, PsiConductor)
{
    auto F = FieldConfig::make(5);
    cplx z = psi(F, PadicScalar::make(F, -1, 1), 1);
    EXPECT_NEAR(std::arg(z), 2.0 * std::numbers::pi / 25.0, 1e-12);
    EXPECT_THROW(psi(F, PadicScalar::make(F, -3, 1), 2), DomainError);
    EXPECT_NEAR(std::abs(psi_residue(F, 2) - psi(F, PadicScalar::from_int(F, 2), 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::arg(psi_residue(F, 1)), 2.0 * std::numbers::pi / 5.0, 1e-12);
}

TEST(Field, ParseScalar)
{
    auto F = FieldConfig::make(3);
    auto s = parse_scalar(F, "-2:5");
    EXPECT_EQ(s.val, -2);
    EXPECT_EQ(s.unit, 5);
    EXPECT_TRUE(parse_scalar(F, "0").is_zero());
    EXPECT_EQ(parse_scalar(F, "18").val, 2);
    EXPECT_THROW(parse_scalar(F, "1:3"), DomainError);
    EXPECT_THROW(parse_scalar(F, "x"), DomainError);
    EXPECT_EQ(square_class(F, scalar_of_class(F, SquareClass::EPSPI)), SquareClass::EPSPI);
}
