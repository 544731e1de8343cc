#include "drillfem/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace drillfem::bench {

namespace {

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

const char* to_string(Case c) {
    return c == Case::Manufactured ? "manufactured" : "console";
}

const char* to_string(Method m) {
    switch (m) {
        case Method::Standard: return "standard";
        case Method::Mixed: return "mixed";
        case Method::Hughes: return "hughes";
    }
    return "?";
}

const char* to_string(ElementPair e) {
    switch (e) {
        case ElementPair::Q1: return "q1";
        case ElementPair::P1: return "p1";
        case ElementPair::Q1Q1: return "q1q1";
        case ElementPair::Q1P0: return "q1p0";
        case ElementPair::P1P1: return "p1p1";
        case ElementPair::P1P0: return "p1p0";
    }
    return "?";
}

Case case_from_string(const std::string& s) {
    if (s == "manufactured")
        return Case::Manufactured;
    if (s == "console")
        return Case::Console;
    throw std::invalid_argument("unknown case '" + s + "' (manufactured|console)");
}

Method method_from_string(const std::string& s) {
    if (s == "standard")
        return Method::Standard;
    if (s == "mixed")
        return Method::Mixed;
    if (s == "hughes")
        return Method::Hughes;
    throw std::invalid_argument("unknown method '" + s + "' (standard|mixed|hughes)");
}

ElementPair element_from_string(const std::string& s) {
    if (s == "q1") return ElementPair::Q1;
    if (s == "p1") return ElementPair::P1;
    if (s == "q1q1") return ElementPair::Q1Q1;
    if (s == "q1p0") return ElementPair::Q1P0;
    if (s == "p1p1") return ElementPair::P1P1;
    if (s == "p1p0") return ElementPair::P1P0;
    throw std::invalid_argument("unknown element pair '" + s +
                                "' (q1|p1|q1q1|q1p0|p1p1|p1p0)");
}

MaterialSource material_from_string(const std::string& s) {
    MaterialSource src;
    const auto open = s.find('(');
    const auto comma = s.find(',', open);
    const auto close = s.find(')', open);
    if (open == std::string::npos || comma == std::string::npos || close == std::string::npos ||
        !(open < comma && comma < close))
        throw std::invalid_argument("material must be lame(a,b) or plane_strain(a,b), got '" + s + "'");
    const std::string name = trim(s.substr(0, open));
    if (name == "lame")
        src.kind = MaterialSource::Kind::Lame;
    else if (name == "plane_strain")
        src.kind = MaterialSource::Kind::PlaneStrain;
    else
        throw std::invalid_argument("unknown material kind '" + name + "'");
    try {
        src.a = std::stod(trim(s.substr(open + 1, comma - open - 1)));
        src.b = std::stod(trim(s.substr(comma + 1, close - comma - 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad material parameters in '" + s + "'");
    }
    return src;
}

std::vector<int> n_list_from_string(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad mesh size '" + item + "' in n_list");
        }
        if (out.back() < 1)
            throw std::invalid_argument("mesh sizes must be >= 1");
    }
    if (out.empty())
        throw std::invalid_argument("n_list is empty");
    if (std::adjacent_find(out.begin(), out.end(), std::greater_equal<int>()) != out.end())
        throw std::invalid_argument("n_list must be strictly increasing");
    return out;
}

CellKind element_cell_kind(ElementPair e) {
    switch (e) {
        case ElementPair::Q1:
        case ElementPair::Q1Q1:
        case ElementPair::Q1P0: return CellKind::Quad;
        default: return CellKind::Tri;
    }
}

ElemKind element_v_space(ElementPair e) {
    return element_cell_kind(e) == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1;
}

ScalarSpace element_q_space(ElementPair e) {
    switch (e) {
        case ElementPair::Q1:
        case ElementPair::P1: return ScalarSpace::None;
        case ElementPair::Q1Q1: return ScalarSpace::Q1;
        case ElementPair::P1P1: return ScalarSpace::P1;
        case ElementPair::Q1P0:
        case ElementPair::P1P0: return ScalarSpace::P0;
    }
    return ScalarSpace::None;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

RunConfig make_config(const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& overrides) {
    std::map<std::string, std::string> kv = file_values;
    for (const auto& [key, value] : overrides)
        kv[key] = value;

    static const char* known[] = {"case", "method", "element", "n_list", "material", "out", "check"};
    for (const auto& [key, value] : kv) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw std::invalid_argument("unknown config key '" + key + "'");
    }

    RunConfig config;
    if (auto it = kv.find("case"); it != kv.end())
        config.benchmark_case = case_from_string(it->second);
    if (auto it = kv.find("method"); it != kv.end())
        config.method = method_from_string(it->second);
    if (auto it = kv.find("element"); it != kv.end())
        config.element = element_from_string(it->second);
    if (auto it = kv.find("n_list"); it != kv.end())
        config.n_list = n_list_from_string(it->second);
    if (auto it = kv.find("material"); it != kv.end())
        config.material = material_from_string(it->second);
    if (auto it = kv.find("out"); it != kv.end())
        config.out = it->second;
    if (auto it = kv.find("check"); it != kv.end()) {
        if (it->second == "true" || it->second == "1")
            config.check = true;
        else if (it->second == "false" || it->second == "0")
            config.check = false;
        else
            throw std::invalid_argument("check must be true|false");
    }

    const bool has_q = element_q_space(config.element) != ScalarSpace::None;
    if (config.method == Method::Standard && has_q)
        throw std::invalid_argument(std::string("element pair ") + to_string(config.element) +
                                    " carries a curl space; use mixed or hughes");
    if (config.method != Method::Standard && !has_q)
        throw std::invalid_argument(std::string("element pair ") + to_string(config.element) +
                                    " has no curl space; use method standard");
    return config;
}

Material resolve_material(const RunConfig& config) {
    MaterialSource src;
    if (config.material) {
        src = *config.material;
    } else if (config.benchmark_case == Case::Console) {
        src = {MaterialSource::Kind::PlaneStrain, 1.0, 0.3};
    } else {
        src = {MaterialSource::Kind::Lame, 1.0, 1.0};
    }
    if (src.kind == MaterialSource::Kind::PlaneStrain)
        return from_plane_strain(src.a, src.b);
    Material mat{src.a, src.b};
    if (!(mat.mu > 0.0) || mat.lambda < 0.0)
        throw std::invalid_argument("material requires mu > 0 and lambda >= 0");
    return mat;
}

BoundarySpec console_boundary() {
    BoundarySpec spec;
    spec.dirichlet = {{0, 0.0, 1e-12}};
    spec.traction = AxisPredicate{1, 1.0, 1e-12};
    spec.traction_value = Eigen::Vector2d(0.0, -1.0);
    return spec;
}

BoundarySpec clamped_boundary() {
    BoundarySpec spec;
    spec.dirichlet = {{0, 0.0, 1e-12}, {0, 1.0, 1e-12}, {1, 0.0, 1e-12}, {1, 1.0, 1e-12}};
    return spec;
}

namespace {

Mesh build_tagged_mesh(ElementPair element, int n, const BoundarySpec& spec) {
    Mesh mesh = element_cell_kind(element) == CellKind::Quad ? build_structured_quad_mesh(n)
                                                             : build_structured_tri_mesh(n);
    return tag_boundary(std::move(mesh), spec);
}

MethodConfig method_config(Method method, ElementPair element) {
    MethodConfig mc;
    mc.method = method;
    mc.v_space = element_v_space(element);
    mc.q_space = element_q_space(element);
    return mc;
}

struct SolvedRun {
    FieldSolution solution;
    int dofs = 0;
};

SolvedRun solve_on(const Mesh& mesh, Method method, ElementPair element, const Material& mat,
                   const LoadSpec& loads) {
    const BlockSystem sys = apply_dirichlet(assemble(mesh, method_config(method, element), mat, loads));
    SolvedRun run;
    run.solution = solve(sys);
    run.dofs = sys.n_u() + sys.n_p();
    return run;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot open output file '" + path + "'");
    out << contents;
    if (!out)
        throw std::runtime_error("failed writing '" + path + "'");
}

std::string manufactured_csv(const ErrorReport& report, bool has_curl) {
    std::string csv = "n,h,err_u,rate_u,err_p,rate_p\n";
    for (const auto& row : report.rows) {
        csv += std::to_string(row.n) + ',' + fmt12(row.h) + ',' + fmt12(row.err_u) + ',';
        if (row.rate_u)
            csv += fmt12(*row.rate_u);
        csv += ',';
        if (has_curl)
            csv += fmt12(row.err_p);
        csv += ',';
        if (has_curl && row.rate_p)
            csv += fmt12(*row.rate_p);
        csv += '\n';
    }
    return csv;
}

void check_manufactured(const ErrorReport& report, const RunConfig& config) {
    std::vector<std::string> failures;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        if (!row.rate_u || *row.rate_u < 1.85 || *row.rate_u > 2.15)
            failures.push_back("displacement rate at n=" + std::to_string(row.n) + " is " +
                               (row.rate_u ? fmt12(*row.rate_u) : std::string("absent")) +
                               ", expected [1.85, 2.15]");
    }
    const bool p0_pair = config.element == ElementPair::Q1P0 || config.element == ElementPair::P1P0;
    const double curl_floor = config.element == ElementPair::Q1Q1 ? 1.8 : (p0_pair ? 0.9 : 0.0);
    if (curl_floor > 0.0 && report.rows.size() >= 2) {
        const auto& last = report.rows.back();
        if (!last.rate_p || *last.rate_p < curl_floor)
            failures.push_back("curl rate on the finest pair is " +
                               (last.rate_p ? fmt12(*last.rate_p) : std::string("absent")) +
                               ", expected >= " + fmt12(curl_floor));
    }
    if (!failures.empty()) {
        std::string msg = "manufactured check failed:";
        for (const auto& f : failures)
            msg += "\n  " + f;
        throw CheckFailure(msg);
    }
}

}  // namespace

ErrorReport run_manufactured(const RunConfig& config) {
    if (config.benchmark_case != Case::Manufactured)
        throw std::invalid_argument("run_manufactured: config case is not manufactured");
    const Material mat = resolve_material(config);
    if (mat.lambda != 1.0 || mat.mu != 1.0)
        throw std::invalid_argument(
            "run_manufactured: the reference fields assume lame(1,1); other materials are not supported");

    const ExactSolution exact = manufactured();
    LoadSpec loads;
    loads.volume_force = exact.rhs;
    const BoundarySpec boundary = clamped_boundary();
    const ScalarSpace q_space = element_q_space(config.element);

    std::vector<ErrorRow> rows;
    for (int n : config.n_list) {
        const Mesh mesh = build_tagged_mesh(config.element, n, boundary);
        const SolvedRun run = solve_on(mesh, config.method, config.element, mat, loads);
        ErrorRow row;
        row.n = n;
        row.h = 1.0 / n;
        row.err_u = l2_error_u(mesh, run.solution.u, exact);
        if (q_space != ScalarSpace::None)
            row.err_p = l2_error_p(mesh, q_space, run.solution.p, exact, mat.mu);
        row.energy = energy_sigma(mesh, run.solution.u, mat);
        rows.push_back(row);
    }

    const ErrorReport report = convergence_rates(std::move(rows));
    if (!config.out.empty())
        write_file(config.out, manufactured_csv(report, q_space != ScalarSpace::None));
    if (config.check)
        check_manufactured(report, config);
    return report;
}

namespace {

std::string console_csv(const std::vector<ConsoleRow>& rows) {
    std::string csv = "method,element,n,dofs,energy\n";
    for (const auto& row : rows)
        csv += std::string(to_string(row.method)) + ',' + to_string(row.element) + ',' +
               std::to_string(row.n) + ',' + std::to_string(row.dofs) + ',' + fmt12(row.energy) +
               '\n';
    csv += std::string("reference,,,,") + fmt12(kConsoleReferenceEnergy) + '\n';
    return csv;
}

double console_energy(const std::vector<ConsoleRow>& rows, Method m, ElementPair e, int n) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const ConsoleRow& r) {
        return r.method == m && r.element == e && r.n == n;
    });
    if (it == rows.end())
        throw std::logic_error("console row missing");
    return it->energy;
}

void check_console(const std::vector<ConsoleRow>& rows, const std::vector<int>& n_list) {
    constexpr double tie = 1e-12;
    std::vector<std::string> failures;

    struct Family {
        ElementPair standard, equal_order, constant_curl;
    };
    const Family families[] = {{ElementPair::Q1, ElementPair::Q1Q1, ElementPair::Q1P0},
                               {ElementPair::P1, ElementPair::P1P1, ElementPair::P1P0}};

    for (const auto& fam : families) {
        for (int n : n_list) {
            const double e_hughes = console_energy(rows, Method::Hughes, fam.equal_order, n);
            const double e_std = console_energy(rows, Method::Standard, fam.standard, n);
            const double e_mixed = console_energy(rows, Method::Mixed, fam.equal_order, n);
            const double e_p0 = console_energy(rows, Method::Mixed, fam.constant_curl, n);
            const std::string where =
                std::string(to_string(fam.standard)) + " family, n=" + std::to_string(n);
            if (e_hughes > e_std + tie)
                failures.push_back("hughes energy above standard (" + where + ")");
            if (e_std > e_mixed + tie)
                failures.push_back("standard energy above mixed (" + where + ")");
            if (e_p0 > e_mixed + tie)
                failures.push_back("constant-curl mixed energy above equal-order (" + where + ")");
        }
    }

    for (std::size_t i = 1; i < n_list.size(); ++i) {
        const double prev = console_energy(rows, Method::Standard, ElementPair::Q1, n_list[i - 1]);
        const double cur = console_energy(rows, Method::Standard, ElementPair::Q1, n_list[i]);
        if (cur < prev - tie)
            failures.push_back("standard q1 energy not increasing from n=" +
                               std::to_string(n_list[i - 1]) + " to n=" + std::to_string(n_list[i]));
    }

    if (n_list.back() >= 64) {
        const double finest = console_energy(rows, Method::Standard, ElementPair::Q1, n_list.back());
        if (std::abs(finest - kConsoleReferenceEnergy) > 0.02 * kConsoleReferenceEnergy)
            failures.push_back("standard q1 energy at n=" + std::to_string(n_list.back()) + " is " +
                               fmt12(finest) + ", more than 2% from " +
                               fmt12(kConsoleReferenceEnergy));
    }

    if (!failures.empty()) {
        std::string msg = "console check failed:";
        for (const auto& f : failures)
            msg += "\n  " + f;
        throw CheckFailure(msg);
    }
}

}  // namespace

std::vector<ConsoleRow> run_console(const RunConfig& config) {
    if (config.benchmark_case != Case::Console)
        throw std::invalid_argument("run_console: config case is not console");
    const Material mat = resolve_material(config);

    const BoundarySpec boundary = console_boundary();
    LoadSpec loads;
    const Eigen::Vector2d g = boundary.traction_value;
    loads.traction = [g](const Eigen::Vector2d&) { return g; };

    std::vector<std::pair<Method, ElementPair>> runs;
    if (config.check) {
        runs = {{Method::Standard, ElementPair::Q1},   {Method::Mixed, ElementPair::Q1Q1},
                {Method::Mixed, ElementPair::Q1P0},    {Method::Hughes, ElementPair::Q1Q1},
                {Method::Standard, ElementPair::P1},   {Method::Mixed, ElementPair::P1P1},
                {Method::Mixed, ElementPair::P1P0},    {Method::Hughes, ElementPair::P1P1}};
    } else {
        runs = {{config.method, config.element}};
    }

    std::vector<ConsoleRow> rows;
    for (const auto& [method, element] : runs) {
        for (int n : config.n_list) {
            const Mesh mesh = build_tagged_mesh(element, n, boundary);
            const SolvedRun run = solve_on(mesh, method, element, mat, loads);
            ConsoleRow row;
            row.method = method;
            row.element = element;
            row.n = n;
            row.dofs = run.dofs;
            row.energy = energy_sigma(mesh, run.solution.u, mat);
            rows.push_back(row);
        }
    }

    if (!config.out.empty())
        write_file(config.out, console_csv(rows));
    if (config.check)
        check_console(rows, config.n_list);
    return rows;
}

void emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& out_path) {
    if (csv_paths.empty())
        throw std::invalid_argument("emit_plot_script: no CSV files given");
    for (const auto& path : csv_paths)
        if (!std::filesystem::exists(path))
            throw std::invalid_argument("emit_plot_script: missing CSV '" + path + "'");

    std::string file_list;
    for (const auto& path : csv_paths) {
        std::string escaped;
        for (char c : path) {
            if (c == '\\' || c == '"')
                escaped += '\\';
            escaped += c;
        }
        file_list += "    \"" + escaped + "\",\n";
    }

    std::string script = R"PY(#!/usr/bin/env python3
"""Plot benchmark tables produced by the bench CLI.

Log-log error plots for convergence tables (columns n,h,err_u,...) and
energy-versus-resolution plots for console tables (columns
method,element,n,dofs,energy). One PNG is written per input table.
"""
import csv
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

REFERENCE_ENERGY = 1.903697
CSV_FILES = [
)PY";
    script += file_list;
    script += R"PY(]


def load(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def plot_convergence(rows, stem):
    h = [float(r["h"]) for r in rows]
    err_u = [float(r["err_u"]) for r in rows]
    plt.figure()
    plt.loglog(h, err_u, "o-", label="displacement")
    err_p = [r.get("err_p", "") for r in rows]
    if all(err_p):
        plt.loglog(h, [float(v) for v in err_p], "s-", label="curl")
    ref = [err_u[0] * (hi / h[0]) ** 2 for hi in h]
    plt.loglog(h, ref, "k--", linewidth=0.8, label="h^2")
    plt.xlabel("h")
    plt.ylabel("L2 error")
    plt.grid(True, which="both", linewidth=0.3)
    plt.legend()
    plt.title(stem)
    plt.savefig(stem + ".png", dpi=150, bbox_inches="tight")


def plot_console(rows, stem):
    series = {}
    for r in rows:
        if r["method"] == "reference":
            continue
        series.setdefault(r["method"] + "-" + r["element"], []).append(
            (int(r["n"]), float(r["energy"]))
        )
    plt.figure()
    for label in sorted(series):
        pts = sorted(series[label])
        plt.plot([p[0] for p in pts], [p[1] for p in pts], "o-", label=label)
    plt.axhline(REFERENCE_ENERGY, color="k", linestyle="--", linewidth=0.8, label="reference")
    plt.xscale("log", base=2)
    plt.xlabel("cells per side")
    plt.ylabel("energy")
    plt.grid(True, linewidth=0.3)
    plt.legend()
    plt.title(stem)
    plt.savefig(stem + ".png", dpi=150, bbox_inches="tight")


def main():
    for path in CSV_FILES:
        rows = load(path)
        if not rows:
            continue
        stem = os.path.splitext(os.path.basename(path))[0]
        if "err_u" in rows[0]:
            plot_convergence(rows, stem)
        else:
            plot_console(rows, stem)
    print("plotted", len(CSV_FILES), "tables")


if __name__ == "__main__":
    main()
)PY";

    write_file(out_path, script);
}

void run(const RunConfig& config) {
    if (config.benchmark_case == Case::Manufactured)
        run_manufactured(config);
    else
        run_console(config);
}

}  // namespace drillfem::bench
