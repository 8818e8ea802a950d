// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sl2lce/sl2lce.hpp"

using namespace sl2lce;

namespace {

constexpr double TOL = 1e-6;

// integer outputs of a criterion, kept for the psi-independence check
using Ints = std::vector<i64>;

struct Outcome {
    bool pass = true;
    std::string detail;
    Ints ints;
};

void fail(Outcome& o, const std::string& why)
{
    if (o.pass) o.detail = why;
    o.pass = false;
}

OrbitLabel reg(SquareClass c) { return OrbitLabel::regular(c); }

FieldConfig field(int p, int twist_class)
{
    // twist_class 0: psi, 1: psi(eps .)
    int c = twist_class == 0 ? 1 : static_cast<int>(FieldConfig::make(p).eps);
    return FieldConfig::make(p, 8, c);
}

// 1. Shalika characters are irreducible of degree q^{d-1}(q^2-1)/2
Outcome shalika_irreducible(int tw)
{
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    for (int p : {3, 5}) {
        auto F = field(p, tw);
        for (i64 d : {1, 2}) {
            auto Q = build_quotient(p, static_cast<int>(d) + 1);
            std::vector<i64> seen;
            for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1})
                for (SquareClass c : all_square_classes)
                    for (auto& X : gx_orbit_reps(F, reg(c), v, d, d)) {
                        auto chi = shalika_character(F, {v, X, {}, {}}, Q);
                        cplx n = inner_product(chi, chi);
                        if (std::abs(n - 1.0) > TOL) fail(o, "norm != 1 at p=" + std::to_string(p));
                        i64 deg = round_integer(chi.degree());
                        seen.push_back(deg);
                        o.ints.push_back(deg);
                    }
            i64 want = d == 1 ? (p == 3 ? 4 : 12) : (p == 3 ? 12 : 60);
            for (i64 s : seen)
                if (s != want) fail(o, "degree " + std::to_string(s) + " != " + std::to_string(want));
            // at a fixed depth only the two labels of matching parity occur, at each vertex
            if (seen.size() != 4) fail(o, "found " + std::to_string(seen.size()) + " data at depth " + std::to_string(d));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60) fail(o, "runtime " + std::to_string(secs) + " s");
    std::ostringstream os;
    os << "p in {3,5}, d in {1,2}, both vertices, " << secs << " s";
    if (o.pass) o.detail = os.str();
    return o;
}

// 2. Gelfand-Graev suite
Outcome gelfand_graev(int tw)
{
    Outcome o;
    for (int q : {3, 5, 7}) {
        auto F = field(q, tw);
        auto T = char_table(F);
        for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) {
            auto closed = gg_character(F, u);
            auto ind = gg_induced(F, u);
            for (std::size_t k = 0; k < closed.v.size(); ++k)
                if (std::abs(closed.v[k] - ind.v[k]) > TOL) fail(o, "closed formula != induction, q=" + std::to_string(q));
            auto mult = decompose(T, closed);
            i64 deg = 0;
            int ps = 0, cusp = 0, st = 0, triv = 0;
            int half_ps = 0, half_cusp = 0;
            for (std::size_t i = 0; i < mult.size(); ++i) {
                o.ints.push_back(mult[i]);
                if (mult[i] > 1) fail(o, "multiplicity > 1 at q=" + std::to_string(q));
                if (mult[i] == 0) continue;
                auto& L = T.rows[i].label;
                deg += L.degree * mult[i];
                switch (L.series) {
                case Series::TRIV: ++triv; break;
                case Series::STEINBERG: ++st; break;
                case Series::PS: ++ps; break;
                case Series::CUSPIDAL: ++cusp; break;
                case Series::PS_HALF: ++half_ps; break;
                case Series::CUSP_HALF: ++half_cusp; break;
                }
            }
            int all_ps = 0, all_cusp = 0;
            for (auto& r : T.rows) {
                all_ps += r.label.series == Series::PS;
                all_cusp += r.label.series == Series::CUSPIDAL;
            }
            if (deg != i64{q} * q - 1) fail(o, "degree sum at q=" + std::to_string(q));
            if (st != 1 || triv != 0) fail(o, "St/triv content at q=" + std::to_string(q));
            if (ps != all_ps || cusp != all_cusp) fail(o, "missing PS or cuspidal at q=" + std::to_string(q));
            if (half_ps != 1 || half_cusp != 1) fail(o, "half-pairs at q=" + std::to_string(q));
        }
    }
    if (o.pass) o.detail = "q in {3,5,7}, u in {1,eps}";
    return o;
}

Sl2Element random_semisimple(const FieldConfig& F, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> vd(-3, 2);
    std::uniform_int_distribution<i64> ud(0, F.pN - 1);
    while (true) {
        Sl2Element X{PadicScalar::make(F, vd(rng), ud(rng)), PadicScalar::make(F, vd(rng), ud(rng)),
                     PadicScalar::make(F, vd(rng), ud(rng))};
        if (X.is_zero()) continue;
        auto k = classify(F, X).kind;
        if (k == ElementKind::SPLIT_SS || k == ElementKind::ANISO_SS) return X;
    }
}

// 3. sampled cone oracle against nil_support
Outcome cone(int tw)
{
    Outcome o;
    std::ostringstream os;
    for (int p : {3, 5}) {
        auto F = field(p, tw);
        std::mt19937_64 rng(20240 + p);
        int equal = 0;
        const int n = 200;
        for (int t = 0; t < n; ++t) {
            Sl2Element G = random_semisimple(F, rng);
            auto alg = nil_support(F, G);
            auto orc = cone_oracle(F, G, 1000, 7919u * static_cast<unsigned>(t) + static_cast<unsigned>(p));
            o.ints.push_back(static_cast<i64>(alg.size()));
            if (!orc.subset_of(alg)) fail(o, "oracle not contained in nil_support at p=" + std::to_string(p));
            equal += orc == alg;
        }
        o.ints.push_back(equal);
        os << "p=" << p << " equal " << equal << "/" << n << "; ";
        if (equal * 100 < 95 * n) fail(o, "equality rate below 95% at p=" + std::to_string(p));
        auto Y = [&](i64 vb, i64 vc, i64 uc) {
            return Sl2Element{PadicScalar::zero(), PadicScalar::make(F, vb, 1), PadicScalar::make(F, vc, uc)};
        };
        Sl2Element split{PadicScalar::make(F, 0, 1), PadicScalar::zero(), PadicScalar::zero()};
        if (nil_support(F, split).size() != 4) fail(o, "split Gamma");
        if (nil_support(F, Y(0, 0, F.eps)) != LabelSet::of({reg(SquareClass::ONE), reg(SquareClass::EPS)}))
            fail(o, "Y(1,eps)");
        if (p == 3 && nil_support(F, Y(0, 1, 1)) != LabelSet::of({reg(SquareClass::ONE), reg(SquareClass::EPSPI)}))
            fail(o, "Y(1,pi) at p=3");
    }
    if (o.pass) o.detail = os.str() + "explicit cases ok";
    return o;
}

// 4. dimension identity for every family
Outcome main_theorem(int tw)
{
    Outcome o;
    int checked = 0;
    for (int q : {3, 5}) {
        auto F = field(q, tw);
        for (auto& pi : all_families(F))
            for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
                auto R = verify_main_theorem(F, pi, v, 6, false);
                ++checked;
                if (!R.pass()) fail(o, R.failures.front());
                o.ints.push_back(R.n_x);
                o.ints.push_back(R.core);
                for (auto& row : R.rows) o.ints.push_back(row.branching);
            }
    }
    if (o.pass) o.detail = std::to_string(checked) + " (rep, vertex) pairs, levels 1..6";
    return o;
}

// 5. character identity at level p^2 for depth-zero PS and St
Outcome character_level(int tw)
{
    Outcome o;
    auto F = field(3, tw);
    auto T = char_table(F);
    auto Q1 = build_quotient(3, 1), Q2 = build_quotient(3, 2);
    double worst = 0;
    for (auto& pi : {rep::ps(F, 0), rep::ps(F, 0, {-1}), rep::steinberg()})
        for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
            auto lhs = *restriction_character(T, pi, v, Q2) - inflate(*restriction_character(T, pi, v, Q1), Q2);
            auto rhs = shalika_sum(F, pi, v, 1, Q2);
            double e = max_abs_diff(lhs, rhs);
            worst = std::max(worst, e);
            o.ints.push_back(round_integer(lhs.degree()));
            if (e > TOL) fail(o, to_string(pi) + " at " + to_string(v) + ": diff " + std::to_string(e));
        }
    if (o.pass) {
        std::ostringstream os;
        os << "q=3, level 2, max |diff| " << worst;
        o.detail = os.str();
    }
    return o;
}

// 6. closed polynomials at even levels
Outcome corollary(int tw, std::vector<std::string>* skipped)
{
    Outcome o;
    for (int q : {3, 5}) {
        auto F = field(q, tw);
        for (auto& pi : all_families(F))
            for (i64 n = 1; n <= 3; ++n) {
                if (2 * n <= pi.depth.value()) {
                    if (skipped) skipped->push_back("q=" + std::to_string(q) + " " + to_string(pi) + " n=" + std::to_string(n));
                    continue;
                }
                for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
                    i64 c = fixed_dim_closed_form(F, pi, v, n), b = fixed_dim_branching(F, pi, v, 2 * n);
                    o.ints.push_back(c);
                    if (c != b)
                        fail(o, to_string(pi) + " at " + to_string(v) + " n=" + std::to_string(n) + ": " +
                                    std::to_string(c) + " != " + std::to_string(b));
                }
            }
    }
    auto F = field(3, tw);
    const i64 ps[] = {12, 108, 972}, st[] = {11, 107, 971}, ram[] = {4, 52, 484};
    for (i64 n = 1; n <= 3; ++n) {
        if (fixed_dim_closed_form(F, rep::ps(F, 0), FilterPoint::X0, n) != ps[n - 1]) fail(o, "PS reference value");
        if (fixed_dim_closed_form(F, rep::steinberg(), FilterPoint::X0, n) != st[n - 1]) fail(o, "St reference value");
        if (fixed_dim_closed_form(F, rep::ram_sc(Half::halves(1)), FilterPoint::X0, n) != ram[n - 1])
            fail(o, "ramified reference value");
    }
    if (o.pass) o.detail = "q in {3,5}, n in {1,2,3}";
    return o;
}

// 7. golden tables
Outcome golden(int tw)
{
    Outcome o;
    int files = 0;
    for (int p : {3, 5}) {
        auto F = field(p, tw);
        for (auto& name : table_names()) {
            std::string path = std::string(GOLDEN_DIR) + "/" + name + "_p" + std::to_string(p) + ".txt";
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            std::string got = render_table(name, F);
            ++files;
            o.ints.push_back(static_cast<i64>(std::hash<std::string>{}(got) & 0x7fffffff));
            if (!in || buf.str() != got) fail(o, "mismatch in " + path);
        }
    }
    if (o.pass) o.detail = std::to_string(files) + " files byte-identical";
    return o;
}

// 8. mu-hat against the special branching character
Outcome mu_hat(int tw)
{
    Outcome o;
    auto F = field(3, tw);
    auto T = char_table(F);
    auto Q = build_quotient(3, 2);
    std::mt19937_64 rng(88);
    std::uniform_int_distribution<i64> ud(0, 26);
    double worst = 0;
    int total = 0;
    for (int i : {0, 1})
        for (SquareClass u : {SquareClass::ONE, SquareClass::EPS})
            for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
                auto pi = rep::special(F, i, u);
                auto O = wavefront(F, pi).labels().front();
                auto theta = *restriction_character(T, pi, v, Q);
                auto tau = tau_character(F, v, O, pi.zeta, Q);
                int got = 0;
                while (got < 20) {
                    auto r = [&](i64 val) { return PadicScalar::make(F, val, ud(rng)); };
                    bool x1 = v == FilterPoint::X1;
                    Sl2Element X{r(1), r(x1 ? 0 : 1), r(x1 ? 2 : 1)};
                    if (depth_at(X, v) < Half::integer(1)) continue;
                    auto mh = mu_hat_value(F, O, v, X, tau);
                    if (!mh.regular) continue;
                    ++got;
                    ++total;
                    double e = std::abs(theta.at(exp_in_quotient(F, X, v, 2)) - (mh.value - 0.5));
                    worst = std::max(worst, e);
                }
            }
    if (worst > TOL) fail(o, "max |diff| " + std::to_string(worst));
    if (o.pass) {
        std::ostringstream os;
        os << total << " regular X (20 per special rep and vertex), max |diff| " << worst;
        o.detail = os.str();
    }
    return o;
}

void line(int k, const Outcome& o, bool& all)
{
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << k << ": " << o.detail << "\n";
    all = all && o.pass;
}

}  // namespace

int main()
{
    bool all = true;
    std::vector<std::string> skipped;
    std::vector<Outcome> base;
    try {
        base.push_back(shalika_irreducible(0));
        base.push_back(gelfand_graev(0));
        base.push_back(cone(0));
        base.push_back(main_theorem(0));
        base.push_back(character_level(0));
        base.push_back(corollary(0, &skipped));
        base.push_back(golden(0));
        for (int k = 0; k < 7; ++k) line(k + 1, base[static_cast<std::size_t>(k)], all);
        line(8, mu_hat(0), all);

        Outcome nine;
        std::vector<Outcome> tw{shalika_irreducible(1), gelfand_graev(1), cone(1), main_theorem(1), character_level(1),
                                corollary(1, nullptr), golden(1)};
        for (int k = 0; k < 7; ++k) {
            auto& a = base[static_cast<std::size_t>(k)];
            auto& b = tw[static_cast<std::size_t>(k)];
            if (a.ints != b.ints || a.pass != b.pass) fail(nine, "criterion " + std::to_string(k + 1) + " changes under psi(eps .)");
        }
        if (nine.pass) nine.detail = "integer outputs of 1-7 identical for psi and psi(eps .)";
        line(9, nine, all);
    } catch (const std::exception& e) {
        std::cout << "FAIL  aborted: " << e.what() << "\n";
        return 1;
    }
    std::cout << "criterion 6 skipped " << skipped.size() << " (family, n) pairs with 2n <= r:";
    for (auto& s : skipped) std::cout << "\n  " << s;
    std::cout << "\n";
    return all ? 0 : 1;
}
