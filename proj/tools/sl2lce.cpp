#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sl2lce/sl2lce.hpp"

using namespace sl2lce;
using nlohmann::json;

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Out {
    json j;
    std::ostringstream text;
    int code = 0;
};

double round9(double x)
{
    double r = std::round(x * 1e9) / 1e9;
    return r == 0.0 ? 0.0 : r;
}

std::string cstr(cplx z)
{
    std::ostringstream os;
    os << std::setprecision(9) << "(" << round9(z.real()) << ", " << round9(z.imag()) << ")";
    return os.str();
}

json cjson(cplx z) { return json::array({round9(z.real()), round9(z.imag())}); }

std::string mat_str(const Mat& g)
{
    return "[[" + std::to_string(g.a) + "," + std::to_string(g.b) + "],[" + std::to_string(g.c) + "," +
           std::to_string(g.d) + "]]";
}

std::string scalar_str(const PadicScalar& s)
{
    if (s.is_zero()) return "0";
    return std::to_string(s.val) + ":" + std::to_string(s.unit);
}

std::string element_str(const Sl2Element& X)
{
    return scalar_str(X.a) + "," + scalar_str(X.b) + "," + scalar_str(X.c);
}

FilterPoint vertex_arg(const std::string& s)
{
    FilterPoint v = parse_vertex(s);
    if (v == FilterPoint::Z0) throw Usage("--vertex must be x0 or x1");
    return v;
}

json labels_json(const LabelSet& s)
{
    json a = json::array();
    for (auto& L : s.labels()) a.push_back(to_string(L));
    return a;
}

json class_function_json(const ClassFunction& f)
{
    json a = json::array();
    for (auto& z : f.v) a.push_back(cjson(z));
    return a;
}

void classes_out(const QuotientPtr& Q, Out& o)
{
    json cls = json::array();
    o.text << "classes:";
    for (std::size_t k = 0; k < Q->num_classes(); ++k) {
        Mat g = Q->class_rep(static_cast<int>(k));
        cls.push_back({{"rep", {g.a, g.b, g.c, g.d}}, {"size", Q->class_size(static_cast<int>(k))}});
        o.text << " " << mat_str(g) << "x" << Q->class_size(static_cast<int>(k));
    }
    o.text << "\n";
    o.j["classes"] = cls;
}

void report_out(const FieldConfig& F, const BranchingReport& R, Out& o)
{
    o.j["rep"] = to_string(R.pi);
    o.j["vertex"] = to_string(R.vertex);
    o.j["n_x"] = R.n_x;
    o.j["core_dim"] = R.core;
    o.j["wavefront"] = labels_json(R.wf);
    json levels = json::array();
    o.text << to_string(R.pi) << " at " << to_string(R.vertex) << "\n";
    o.text << "n_x = " << R.n_x << ", core dim = " << R.core << ", WF = " << to_string(R.wf) << "\n";
    o.text << "level  branching  ledger  closed\n";
    for (auto& row : R.rows) {
        json r{{"n", row.n}, {"branching", row.branching}, {"ledger", row.ledger}};
        if (row.closed) r["closed"] = *row.closed;
        levels.push_back(r);
        o.text << std::setw(5) << row.n << "  " << std::setw(9) << row.branching << "  " << std::setw(6) << row.ledger
               << "  " << (row.closed ? std::to_string(*row.closed) : "-") << "\n";
    }
    o.j["levels"] = levels;
    o.j["character_checks"] = R.character_checks;
    for (auto& c : R.character_checks) o.text << "character check " << c << "\n";
    o.j["failures"] = R.failures;
    for (auto& f : R.failures) o.text << "  " << f << "\n";
    o.j["pass"] = R.pass();
    o.text << (R.pass() ? "PASS" : "FAIL") << "\n";
    (void)F;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sl2lce: branching and local character expansions for SL(2, Q_p)"};
    app.require_subcommand(1);
    app.fallthrough();

    int p = 3, precision = 8;
    std::uint64_t seed = 1;
    i64 twist = 1;
    bool as_json = false;
    app.add_option("--p,--q", p, "odd prime")->capture_default_str();
    app.add_option("--precision", precision, "p-adic precision N")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--psi-twist", twist, "replace psi by x -> psi(c x)")->capture_default_str();
    app.add_flag("--json", as_json, "JSON output");

    std::string scalar_s, gamma_s, rep_s, vertex_s = "x0", orbit_s = "1", zeta_s = "+1", x_s, table_s, golden_s;
    int nmax = 6, dmax = 6, samples = 0, level = 2;
    bool no_chars = false;

    auto* sc = app.add_subcommand("square-class", "square class of a scalar");
    sc->add_option("--x", scalar_s, "scalar v:u")->required();

    auto* ns = app.add_subcommand("nil-support", "nilpotent support of a semisimple Gamma");
    ns->add_option("--gamma", gamma_s, "matrix a,b,c")->required();
    ns->add_option("--samples", samples, "also run the cone oracle with this many samples");

    auto* oc = app.add_subcommand("orbit-of-coset", "nilpotent orbit of a degenerate coset");
    oc->add_option("--gamma", gamma_s, "matrix a,b,c")->required();
    oc->add_option("--vertex", vertex_s, "x0, x1 or z0");

    auto* wf = app.add_subcommand("wavefront", "wave front set of a representation");
    wf->add_option("--rep", rep_s, "representation literal")->required();

    auto* br = app.add_subcommand("branch", "branching decomposition at a vertex");
    br->add_option("--rep", rep_s, "representation literal")->required();
    br->add_option("--vertex", vertex_s, "x0 or x1");
    br->add_option("--nmax", nmax, "largest level");

    auto* dm = app.add_subcommand("dims", "dim pi^{G_{x,n}} per level");
    dm->add_option("--rep", rep_s, "representation literal")->required();
    dm->add_option("--vertex", vertex_s, "x0 or x1");
    dm->add_option("--nmax", nmax, "largest level");

    auto* vf = app.add_subcommand("verify", "verification drivers");
    vf->require_subcommand(1);
    auto* vmain = vf->add_subcommand("main", "main theorem for one representation");
    vmain->add_option("--rep", rep_s, "representation literal")->required();
    vmain->add_option("--vertex", vertex_s, "x0 or x1");
    vmain->add_option("--nmax", nmax, "largest level");
    vmain->add_flag("--no-characters", no_chars, "dimension level only");
    auto* vall = vf->add_subcommand("all", "main theorem for every family at both vertices");
    vall->add_option("--nmax", nmax, "largest level");
    vall->add_flag("--no-characters", no_chars, "dimension level only");
    auto* vtab = vf->add_subcommand("tables", "compare rendered tables with fixtures");
    vtab->add_option("--golden", golden_s, "fixture directory")->required();

    auto* gg = app.add_subcommand("gg-table", "Gel'fand-Graev characters and decompositions");
    auto* ct = app.add_subcommand("char-table", "character table of SL(2, F_p)");

    auto* sh = app.add_subcommand("shalika", "Shalika character on a finite quotient");
    sh->add_option("--gamma", gamma_s, "nilpotent matrix a,b,c")->required();
    sh->add_option("--vertex", vertex_s, "x0 or x1");
    sh->add_option("--depth-level", level, "quotient level m")->required();
    sh->add_option("--zeta", zeta_s, "central sign");

    auto* ta = app.add_subcommand("tau", "component ledger of tau_x(O, zeta)");
    ta->add_option("--orbit", orbit_s, "orbit label");
    ta->add_option("--vertex", vertex_s, "x0 or x1");
    ta->add_option("--zeta", zeta_s, "central sign");
    ta->add_option("--dmax", dmax, "largest component depth");

    auto* mh = app.add_subcommand("mu-hat", "mu-hat of a regular orbit at X in g_{x,1}");
    mh->add_option("--orbit", orbit_s, "orbit label");
    mh->add_option("--vertex", vertex_s, "x0 or x1");
    mh->add_option("--x", x_s, "matrix a,b,c")->required();
    mh->add_option("--level", level, "quotient level m");
    mh->add_option("--zeta", zeta_s, "central sign");

    auto* tb = app.add_subcommand("table", "render a reference table");
    tb->add_option("name", table_s, "nx, c0, hplus, depthzero or wf")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Out o;
    try {
        if (precision < 4) throw Usage("--precision must be >= 4");
        FieldConfig F = FieldConfig::make(p, precision, twist);
        auto zeta_arg = [&]() {
            if (zeta_s == "+1" || zeta_s == "1" || zeta_s == "+") return CentralSign{1};
            if (zeta_s == "-1" || zeta_s == "-") return CentralSign{-1};
            throw Usage("--zeta must be +1 or -1");
        };
        auto finite_guard = [&]() {
            if (p > 11) throw Usage("finite-group subcommands need p <= 11");
        };

        if (*sc) {
            auto c = square_class(F, parse_scalar(F, scalar_s));
            o.j = {{"class", to_string(c)}};
            o.text << to_string(c) << "\n";
        } else if (*ns) {
            auto G = parse_matrix(F, gamma_s);
            auto s = nil_support(F, G);
            o.j = {{"nil_support", labels_json(s)}};
            o.text << to_string(s) << "\n";
            if (samples > 0) {
                auto c = cone_oracle(F, G, samples, seed);
                o.j["cone_oracle"] = labels_json(c);
                o.text << "cone oracle: " << to_string(c) << "\n";
            }
        } else if (*oc) {
            auto G = parse_matrix(F, gamma_s);
            auto L = coset_orbit(F, G, parse_vertex(vertex_s));
            o.j = {{"orbit", L ? json(to_string(*L)) : json(nullptr)}};
            o.text << (L ? to_string(*L) : std::string("not degenerate")) << "\n";
        } else if (*wf) {
            auto pi = parse_rep(F, rep_s);
            auto s = wavefront(F, pi);
            o.j = {{"rep", to_string(pi)}, {"wavefront", labels_json(s)}, {"c0", to_string(c0_lce(F, pi))}};
            o.text << to_string(s) << "\n";
            if (is_depth_zero(pi) && p <= 11) {
                auto g = wavefront_via_gg(char_table(F), pi);
                o.j["via_gg"] = labels_json(g);
                o.text << "via GG: " << to_string(g) << "\n";
            } else if (!is_depth_zero(pi)) {
                o.j["gamma"] = element_str(gamma_of(F, pi));
                o.text << "Gamma: " << element_str(gamma_of(F, pi)) << "\n";
            }
        } else if (*br) {
            auto pi = parse_rep(F, rep_s);
            auto v = vertex_arg(vertex_s);
            o.j = {{"rep", to_string(pi)}, {"vertex", to_string(v)}, {"n_x", n_coefficient(F, pi, v)}};
            o.text << "Res " << to_string(pi) << " at " << to_string(v) << " = " << n_coefficient(F, pi, v) << " triv";
            if (is_depth_zero(pi)) {
                json comps = json::array();
                for (auto& c : depth_zero_component(F, pi, v)) comps.push_back(to_string(c));
                o.j["depth_zero_part"] = comps;
                o.text << " [depth-zero part " << join_labels(depth_zero_component(F, pi, v)) << "]";
            }
            json taus = json::array();
            for (auto& O : wavefront(F, pi).labels()) {
                if (O.zero) continue;
                auto t = tau_rep(F, v, O, pi.zeta, nmax);
                json comps = json::array();
                for (auto& c : t.components)
                    if (c.depth > pi.depth.value() && c.depth < nmax)
                        comps.push_back({{"depth", c.depth}, {"degree", c.degree}, {"rep", element_str(c.rep)}});
                const char* par = parity_depth(O, v) == Parity::EVEN ? "even" : "odd";
                taus.push_back({{"orbit", to_string(O)}, {"parity", par}, {"components", comps}});
                o.text << " + tau(" << to_string(O) << ", " << par << ")";
            }
            o.text << "\n";
            o.j["tau"] = taus;
            json dims = json::array();
            for (i64 n = 1; n <= nmax; ++n) {
                i64 d = fixed_dim_branching(F, pi, v, n);
                dims.push_back(d);
                o.text << "level " << n << ": " << d << "\n";
            }
            o.j["dims"] = dims;
        } else if (*dm) {
            auto pi = parse_rep(F, rep_s);
            auto v = vertex_arg(vertex_s);
            json rows = json::array();
            o.text << "level        dim     closed\n";
            for (i64 n = 1; n <= nmax; ++n) {
                json r{{"n", n}, {"dim", fixed_dim_branching(F, pi, v, n)}};
                std::string closed = "-";
                if (n % 2 == 0 && n > pi.depth.value()) {
                    r["closed"] = fixed_dim_closed_form(F, pi, v, n / 2);
                    closed = std::to_string(fixed_dim_closed_form(F, pi, v, n / 2));
                }
                rows.push_back(r);
                o.text << std::setw(5) << n << "  " << std::setw(9) << r["dim"].get<i64>() << "  " << std::setw(9) << closed << "\n";
            }
            o.j = {{"rep", to_string(pi)}, {"vertex", to_string(v)}, {"levels", rows}};
        } else if (*vmain) {
            auto pi = parse_rep(F, rep_s);
            auto R = verify_main_theorem(F, pi, vertex_arg(vertex_s), nmax, !no_chars);
            report_out(F, R, o);
            o.code = R.pass() ? 0 : 1;
        } else if (*vall) {
            json reports = json::array();
            bool ok = true;
            for (auto& pi : all_families(F))
                for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
                    auto R = verify_main_theorem(F, pi, v, nmax, !no_chars);
                    ok = ok && R.pass();
                    reports.push_back({{"rep", to_string(pi)}, {"vertex", to_string(v)}, {"pass", R.pass()},
                                       {"failures", R.failures}});
                    o.text << (R.pass() ? "PASS " : "FAIL ") << to_string(pi) << " at " << to_string(v) << "\n";
                    for (auto& f : R.failures) o.text << "  " << f << "\n";
                }
            o.j = {{"reports", reports}, {"pass", ok}};
            o.code = ok ? 0 : 1;
        } else if (*vtab) {
            bool ok = true;
            json res = json::object();
            for (auto& name : table_names()) {
                std::string path = golden_s + "/" + name + "_p" + std::to_string(p) + ".txt";
                std::ifstream in(path, std::ios::binary);
                std::stringstream buf;
                buf << in.rdbuf();
                bool same = in && buf.str() == render_table(name, F);
                ok = ok && same;
                res[name] = same;
                o.text << (same ? "PASS " : "FAIL ") << name << "\n";
            }
            o.j = {{"tables", res}, {"pass", ok}};
            o.code = ok ? 0 : 1;
        } else if (*ct) {
            finite_guard();
            auto T = char_table(F);
            classes_out(T.Q, o);
            json rows = json::array();
            for (auto& r : T.rows) {
                rows.push_back({{"label", to_string(r.label)}, {"degree", r.label.degree}, {"values", class_function_json(r.chi)}});
                o.text << to_string(r.label) << " (" << r.label.degree << "):";
                for (auto& z : r.chi.v) o.text << " " << cstr(z);
                o.text << "\n";
            }
            o.j["rows"] = rows;
        } else if (*gg) {
            finite_guard();
            auto T = char_table(F);
            classes_out(T.Q, o);
            json out = json::array();
            for (SquareClass u : {SquareClass::ONE, SquareClass::EPS}) {
                auto chi = gg_character(F, u);
                json comps = json::array();
                for (auto& L : gg_decompose(T, u)) comps.push_back(to_string(L));
                out.push_back({{"u", to_string(u)}, {"values", class_function_json(chi)}, {"decomposition", comps}});
                o.text << "gamma_" << to_string(u) << ":";
                for (auto& z : chi.v) o.text << " " << cstr(z);
                o.text << "\n  = " << join_labels(gg_decompose(T, u)) << "\n";
            }
            o.j["gg"] = out;
        } else if (*sh) {
            finite_guard();
            auto G = parse_matrix(F, gamma_s);
            auto v = vertex_arg(vertex_s);
            if (G.is_zero()) throw Usage("--gamma must be nonzero");
            if (FiniteQuotient::expected_order(p, level) > FiniteQuotient::MAX_ORDER)
                throw Usage("quotient too large");
            auto Q = build_quotient(p, level);
            auto chi = shalika_character(F, {v, G, zeta_arg(), {}}, Q);
            i64 deg = round_integer(chi.degree(), "degree");
            cplx norm = inner_product(chi, chi);
            classes_out(Q, o);
            o.j["degree"] = deg;
            o.j["norm"] = cjson(norm);
            o.j["values"] = class_function_json(chi);
            o.text << "degree " << deg << "\nnorm " << cstr(norm) << "\nvalues:";
            for (auto& z : chi.v) o.text << " " << cstr(z);
            o.text << "\n";
        } else if (*ta) {
            auto v = vertex_arg(vertex_s);
            auto t = tau_rep(F, v, parse_orbit(orbit_s), zeta_arg(), dmax);
            json comps = json::array();
            o.text << "tau_" << to_string(v) << "(" << orbit_s << ", " << zeta_s << ")";
            if (t.trivial) o.text << " trivial";
            else o.text << " parity " << (parity_depth(t.orbit, v) == Parity::EVEN ? "even" : "odd");
            o.text << "\ndepth  degree  Gamma\n";
            for (auto& c : t.components) {
                comps.push_back({{"depth", c.depth}, {"degree", c.degree}, {"rep", element_str(c.rep)}});
                o.text << std::setw(5) << c.depth << "  " << std::setw(6) << c.degree << "  " << element_str(c.rep) << "\n";
            }
            o.j = {{"orbit", orbit_s}, {"vertex", to_string(v)}, {"trivial", t.trivial}, {"components", comps}};
        } else if (*mh) {
            finite_guard();
            auto v = vertex_arg(vertex_s);
            if (level < 2) throw Usage("--level must be >= 2");
            auto r = mu_hat_value(F, parse_orbit(orbit_s), v, parse_matrix(F, x_s), level, zeta_arg());
            o.j = {{"value", cjson(r.value)}, {"regular", r.regular}};
            o.text << cstr(r.value) << (r.regular ? "" : "  (X not regular)") << "\n";
        } else if (*tb) {
            std::string s = render_table(table_s, F);
            o.j = {{"table", table_s}, {"text", s}};
            o.text << s;
        }
    } catch (const Usage& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 2;
    }

    if (as_json) std::cout << o.j.dump(2) << "\n";
    else std::cout << o.text.str();
    return o.code;
}
