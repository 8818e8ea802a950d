#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "reps.hpp"

namespace sl2lce {

using TextRow = std::vector<std::string>;

// left-aligned columns separated by two spaces, no trailing blanks
inline std::string render_columns(const std::vector<TextRow>& rows)
{
    std::vector<std::size_t> w;
    for (auto& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (w.size() <= i) w.push_back(0);
            w[i] = std::max(w[i], r[i].size());
        }
    std::ostringstream os;
    for (auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            line += r[i];
            if (i + 1 < r.size()) line += std::string(w[i] - r[i].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    return os.str();
}

inline std::string join_labels(const std::vector<IrredLabel>& ls)
{
    if (ls.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < ls.size(); ++i) s += (i ? " + " : "") + to_string(ls[i]);
    return s;
}

inline std::string table_nx(const FieldConfig& F)
{
    std::vector<TextRow> rows{{"rep", "r", "n_x0", "n_x1"}};
    auto add = [&](const RepParam& pi) {
        rows.push_back({to_string(pi), pi.depth.str(), std::to_string(n_coefficient(F, pi, FilterPoint::X0)),
                        std::to_string(n_coefficient(F, pi, FilterPoint::X1))});
    };
    for (int r = 1; r <= 3; ++r) add(rep::ps(F, r));
    for (int r = 1; r <= 3; ++r) add(rep::unram_sc(F, 0, r));
    for (int r = 1; r <= 3; ++r) add(rep::unram_sc(F, 1, r));
    for (int t = 1; t <= 5; t += 2) add(rep::ram_sc(Half::halves(t)));
    return "# n_x(pi), q = " + std::to_string(F.p) + "\n" + render_columns(rows);
}

inline std::string table_c0(const FieldConfig& F)
{
    std::vector<TextRow> rows{{"rep", "c0"}};
    auto add = [&](const RepParam& pi) { rows.push_back({to_string(pi), to_string(c0_lce(F, pi))}); };
    add(rep::unram_sc(F, 0, 0, {-1}));
    for (int r = 1; r <= 3; ++r) add(rep::unram_sc(F, 0, r));
    add(rep::special(F, 0, SquareClass::ONE));
    for (int t = 1; t <= 5; t += 2) add(rep::ram_sc(Half::halves(t)));
    add(rep::steinberg());
    add(rep::triv());
    add(rep::ps(F, 0));
    add(rep::ps(F, 1));
    return "# constant term c0(pi), q = " + std::to_string(F.p) + "\n" + render_columns(rows);
}

inline std::string table_hplus(const FieldConfig& F)
{
    std::vector<TextRow> rows{{"vertex"}};
    std::vector<RepParam> hs;
    for (HTau t : {HTau::EPS, HTau::MINUS_PI, HTau::MINUS_EPSPI})
        for (int s : {1, -1}) {
            hs.push_back(rep::ps_half(F, t, s));
            rows[0].push_back(std::string("H[") + to_string(t) + "," + (s > 0 ? "+" : "-") + "]");
        }
    for (FilterPoint v : {FilterPoint::X0, FilterPoint::X1}) {
        TextRow r{to_string(v)};
        for (auto& pi : hs) r.push_back(join_labels(depth_zero_component(F, pi, v)));
        rows.push_back(r);
    }
    return "# depth-zero components of the reducible principal series, q = " + std::to_string(F.p) + "\n" +
           render_columns(rows);
}

inline std::string table_depthzero(const FieldConfig& F)
{
    std::vector<TextRow> rows{{"rep", "x0", "x1"}};
    auto add = [&](const RepParam& pi) {
        rows.push_back({to_string(pi), join_labels(depth_zero_component(F, pi, FilterPoint::X0)),
                        join_labels(depth_zero_component(F, pi, FilterPoint::X1))});
    };
    for (int j = 0; j < F.p - 1; ++j) add(rep::ps(F, 0, {j % 2 == 0 ? 1 : -1}, j));
    add(rep::steinberg());
    for (int i : {0, 1})
        for (int k = 1; k <= (F.p - 1) / 2; ++k) add(rep::unram_sc(F, i, 0, {k % 2 == 0 ? 1 : -1}, k));
    return "# depth-zero components, q = " + std::to_string(F.p) + "\n" + render_columns(rows);
}

inline std::string table_wf(const FieldConfig& F)
{
    std::vector<TextRow> rows{{"rep", "WF"}};
    auto add = [&](const RepParam& pi) { rows.push_back({to_string(pi), to_string(wavefront(F, pi))}); };
    add(rep::ps(F, 0));
    for (int i : {0, 1}) add(rep::unram_sc(F, i, 0, {-1}));
    for (auto& pi : exceptional_depth_zero(F)) add(pi);
    return "# wave front sets of depth-zero representations, q = " + std::to_string(F.p) + "\n" +
           render_columns(rows);
}

inline const std::vector<std::string>& table_names()
{
    static const std::vector<std::string> names{"nx", "c0", "hplus", "depthzero", "wf"};
    return names;
}

inline std::string render_table(const std::string& name, const FieldConfig& F)
{
    if (name == "nx") return table_nx(F);
    if (name == "c0") return table_c0(F);
    if (name == "hplus") return table_hplus(F);
    if (name == "depthzero") return table_depthzero(F);
    if (name == "wf") return table_wf(F);
    throw DomainError("unknown table: " + name);
}

}  // namespace sl2lce
