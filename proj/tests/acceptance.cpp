// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. argv[1] is the bench CLI binary (used by the determinism
// criterion).

#include "drillfem/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace drillfem;
namespace bench = drillfem::bench;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    int id;
    std::string label;
    std::function<std::string()> body;  // empty string = pass, else failure reason
    double time_budget_s = 0.0;         // 0 = no budget
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

MethodConfig config_of(Method m, ElemKind v, ScalarSpace q) {
    MethodConfig c;
    c.method = m;
    c.v_space = v;
    c.q_space = q;
    return c;
}

LoadSpec console_loads() {
    LoadSpec loads;
    loads.traction = [](const Eigen::Vector2d&) { return Eigen::Vector2d(0.0, -1.0); };
    return loads;
}

Mesh console_mesh(CellKind kind, int n) {
    Mesh mesh = kind == CellKind::Quad ? build_structured_quad_mesh(n) : build_structured_tri_mesh(n);
    return tag_boundary(std::move(mesh), bench::console_boundary());
}

// reports for criterion 4, reused by criterion 5
std::map<std::string, ErrorReport> g_manufactured_reports;

std::string criterion_identity_pointwise() {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int d : {2, 3}) {
        for (int trial = 0; trial < 1000; ++trial) {
            Eigen::MatrixXd gu(d, d), gv(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    gu(r, c) = coef(rng);
                    gv(r, c) = coef(rng);
                }
            const double res = std::abs(strain_identity_residual(gu, gv));
            if (!(res < 1e-12))
                return "residual " + fmt(res) + " at d=" + std::to_string(d) + " trial " +
                       std::to_string(trial);
        }
    }
    return "";
}

std::string criterion_identity_discrete() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lam(0.0, 10.0);
    std::uniform_real_distribution<double> mu(0.1, 10.0);

    // per element, every cell of both kinds
    for (const Mesh& mesh : {build_structured_quad_mesh(4), build_structured_tri_mesh(4)}) {
        const ReferenceElement& elem = geometry_element(mesh.cell_kind);
        const QuadratureRule rule = quadrature_for(mesh.cell_kind, QuadPurpose::Stiffness);
        for (int cell = 0; cell < mesh.n_cells(); ++cell) {
            const Material mat{lam(rng), mu(rng)};
            const CellGeometry geom = map_to_cell(mesh, cell, rule);
            const Eigen::MatrixXd full = elem_K_full(geom, elem, mat);
            const Eigen::MatrixXd split = elem_K_a(geom, elem, mat) + mat.mu * elem_K_cc(geom, elem);
            const double rel =
                (full - split).cwiseAbs().maxCoeff() / full.cwiseAbs().maxCoeff();
            if (!(rel < 1e-12))
                return "element splitting off by " + fmt(rel) + " on cell " + std::to_string(cell);
        }
    }

    // globally assembled operators
    for (const CellKind kind : {CellKind::Quad, CellKind::Tri}) {
        const Mesh mesh = console_mesh(kind, 8);
        const ElemKind v = kind == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1;
        const ScalarSpace q = kind == CellKind::Quad ? ScalarSpace::Q1 : ScalarSpace::P1;
        for (int trial = 0; trial < 3; ++trial) {
            const Material mat{lam(rng), mu(rng)};
            const Eigen::MatrixXd a_std = Eigen::MatrixXd(
                assemble(mesh, config_of(Method::Standard, v, ScalarSpace::None), mat, LoadSpec{}).A);
            const Eigen::MatrixXd a_mixed = Eigen::MatrixXd(
                assemble(mesh, config_of(Method::Mixed, v, q), mat, LoadSpec{}).A);
            const Eigen::MatrixXd cc =
                Eigen::MatrixXd(assemble_operator(mesh, mat, DisplacementOperator::CurlCurl));
            const double rel = (a_mixed + mat.mu * cc - a_std).cwiseAbs().maxCoeff() /
                               a_std.cwiseAbs().maxCoeff();
            if (!(rel < 1e-12))
                return "global splitting off by " + fmt(rel);
        }
    }
    return "";
}

std::string criterion_equivalence() {
    const Material mat = from_plane_strain(1.0, 0.3);
    for (int n : {4, 8, 16}) {
        const Mesh mesh = console_mesh(CellKind::Tri, n);
        const BlockSystem mixed =
            assemble(mesh, config_of(Method::Mixed, ElemKind::P1, ScalarSpace::P0), mat,
                     console_loads());
        const FieldSolution u_std = solve(apply_dirichlet(assemble(
            mesh, config_of(Method::Standard, ElemKind::P1, ScalarSpace::None), mat,
            console_loads())));
        const FieldSolution u_mixed = solve(apply_dirichlet(mixed));
        const FieldSolution u_cond = solve(apply_dirichlet(condense_p(mixed)));

        const double rel_mixed = (u_mixed.u - u_std.u).norm() / u_std.u.norm();
        const double rel_cond = (u_cond.u - u_std.u).norm() / u_std.u.norm();
        if (!(rel_mixed <= 1e-9))
            return "uncondensed p1p0 differs from standard p1 by " + fmt(rel_mixed) + " at n=" +
                   std::to_string(n);
        if (!(rel_cond <= 1e-9))
            return "condensed p1p0 differs from standard p1 by " + fmt(rel_cond) + " at n=" +
                   std::to_string(n);
    }
    return "";
}

std::string criterion_convergence() {
    const std::vector<std::pair<Method, bench::ElementPair>> studies = {
        {Method::Standard, bench::ElementPair::Q1},
        {Method::Mixed, bench::ElementPair::Q1Q1},
        {Method::Mixed, bench::ElementPair::Q1P0},
        {Method::Standard, bench::ElementPair::P1},
        {Method::Mixed, bench::ElementPair::P1P1},
    };
    for (const auto& [method, element] : studies) {
        bench::RunConfig config;
        config.benchmark_case = bench::Case::Manufactured;
        config.method = method;
        config.element = element;
        config.n_list = {8, 16, 32, 64};
        const ErrorReport report = bench::run_manufactured(config);
        const std::string name =
            std::string(bench::to_string(method)) + " " + bench::to_string(element);
        g_manufactured_reports[bench::to_string(element)] = report;
        for (std::size_t i = 1; i < report.rows.size(); ++i) {
            const auto& rate = report.rows[i].rate_u;
            if (!rate || *rate < 1.85 || *rate > 2.15)
                return name + ": displacement rate " + (rate ? fmt(*rate) : "absent") + " at n=" +
                       std::to_string(report.rows[i].n) + " outside [1.85, 2.15]";
        }
    }
    return "";
}

std::string criterion_curl_convergence() {
    const auto q1q1 = g_manufactured_reports.find("q1q1");
    const auto q1p0 = g_manufactured_reports.find("q1p0");
    if (q1q1 == g_manufactured_reports.end() || q1p0 == g_manufactured_reports.end())
        return "criterion 4 did not run";
    const auto& last_equal = q1q1->second.rows.back().rate_p;
    if (!last_equal || *last_equal < 1.8)
        return "q1q1 curl rate on the finest pair is " + (last_equal ? fmt(*last_equal) : "absent") +
               ", expected >= 1.8";
    const auto& last_const = q1p0->second.rows.back().rate_p;
    if (!last_const || *last_const < 0.9)
        return "q1p0 curl rate on the finest pair is " + (last_const ? fmt(*last_const) : "absent") +
               ", expected >= 0.9";
    return "";
}

// console energies for criteria 6 and 7
std::map<std::string, std::map<int, double>> g_console_energies;

void run_console_suite() {
    const std::vector<std::pair<Method, bench::ElementPair>> family = {
        {Method::Standard, bench::ElementPair::Q1}, {Method::Mixed, bench::ElementPair::Q1Q1},
        {Method::Hughes, bench::ElementPair::Q1Q1}, {Method::Standard, bench::ElementPair::P1},
        {Method::Mixed, bench::ElementPair::P1P1},  {Method::Hughes, bench::ElementPair::P1P1}};
    for (const auto& [method, element] : family) {
        bench::RunConfig config;
        config.benchmark_case = bench::Case::Console;
        config.method = method;
        config.element = element;
        config.n_list = {8, 16, 32, 64};
        for (const auto& row : bench::run_console(config))
            g_console_energies[std::string(bench::to_string(row.method)) + " " +
                               bench::to_string(row.element)][row.n] = row.energy;
    }
}

std::string criterion_console_energy() {
    if (g_console_energies.empty())
        run_console_suite();
    const auto& energies = g_console_energies.at("standard q1");
    double prev = 0.0;
    for (const auto& [n, e] : energies) {
        if (e < prev - 1e-12)
            return "energy not increasing at n=" + std::to_string(n);
        prev = e;
    }
    const double finest = energies.at(64);
    const double rel = std::abs(finest - bench::kConsoleReferenceEnergy) /
                       bench::kConsoleReferenceEnergy;
    if (!(rel <= 0.02))
        return "energy at n=64 is " + fmt(finest) + ", " + fmt(100.0 * rel) + "% from " +
               fmt(bench::kConsoleReferenceEnergy);
    return "";
}

std::string criterion_stiffness_ordering() {
    if (g_console_energies.empty())
        return "console suite did not run";
    constexpr double tie = 1e-12;
    const struct {
        const char* hughes;
        const char* standard;
        const char* mixed;
    } families[] = {{"hughes q1q1", "standard q1", "mixed q1q1"},
                    {"hughes p1p1", "standard p1", "mixed p1p1"}};
    for (const auto& fam : families) {
        for (int n : {8, 16, 32, 64}) {
            const double eh = g_console_energies.at(fam.hughes).at(n);
            const double es = g_console_energies.at(fam.standard).at(n);
            const double em = g_console_energies.at(fam.mixed).at(n);
            if (!(eh <= es + tie))
                return std::string(fam.hughes) + " above " + fam.standard + " at n=" +
                       std::to_string(n);
            if (!(es <= em + tie))
                return std::string(fam.standard) + " above " + fam.mixed + " at n=" +
                       std::to_string(n);
        }
    }
    return "";
}

std::string criterion_projection() {
    struct Probe {
        CellKind kind;
        ScalarSpace q_space;
        int n;
    };
    const Material console_mat = from_plane_strain(1.0, 0.3);
    for (const Probe& probe : {Probe{CellKind::Quad, ScalarSpace::Q1, 8},
                               Probe{CellKind::Quad, ScalarSpace::P0, 16},
                               Probe{CellKind::Tri, ScalarSpace::P1, 8},
                               Probe{CellKind::Tri, ScalarSpace::P0, 16}}) {
        const Mesh mesh = console_mesh(probe.kind, probe.n);
        const ElemKind v = probe.kind == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1;
        const BlockSystem sys = assemble(mesh, config_of(Method::Mixed, v, probe.q_space),
                                         console_mat, console_loads());
        const FieldSolution sol = solve(apply_dirichlet(sys));
        const Eigen::VectorXd bu = sys.B * sol.u;
        const double rel = (sys.C * sol.p - bu).norm() / bu.norm();
        if (!(rel <= 1e-10))
            return "projection residual " + fmt(rel) + " for n=" + std::to_string(probe.n);
    }

    // manufactured load path
    const ExactSolution exact = manufactured();
    LoadSpec loads;
    loads.volume_force = exact.rhs;
    const Mesh mesh = tag_boundary(build_structured_quad_mesh(8), bench::clamped_boundary());
    const BlockSystem sys = assemble(mesh, config_of(Method::Mixed, ElemKind::Q1, ScalarSpace::Q1),
                                     Material{1.0, 1.0}, loads);
    const FieldSolution sol = solve(apply_dirichlet(sys));
    const Eigen::VectorXd bu = sys.B * sol.u;
    const double rel = (sys.C * sol.p - bu).norm() / bu.norm();
    if (!(rel <= 1e-10))
        return "projection residual " + fmt(rel) + " on the manufactured problem";
    return "";
}

std::string criterion_stability() {
    const Material mat = from_plane_strain(1.0, 0.3);
    for (int n : {2, 4, 8}) {
        for (const CellKind kind : {CellKind::Quad, CellKind::Tri}) {
            const Mesh mesh = console_mesh(kind, n);
            const ElemKind v = kind == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1;
            const ScalarSpace q = kind == CellKind::Quad ? ScalarSpace::Q1 : ScalarSpace::P1;
            const double probe = stability_probe(
                apply_dirichlet(assemble(mesh, config_of(Method::Mixed, v, q), mat, console_loads())));
            if (!(probe > 1e-8))
                return "probe " + fmt(probe) + " at n=" + std::to_string(n) + " not above 1e-8";
        }
    }
    const Mesh unconstrained = tag_boundary(build_structured_quad_mesh(4), BoundarySpec{});
    const double probe = stability_probe(apply_dirichlet(assemble(
        unconstrained, config_of(Method::Standard, ElemKind::Q1, ScalarSpace::None), mat,
        LoadSpec{})));
    if (!(probe < 1e-12))
        return "unconstrained standard probe " + fmt(probe) + " not below 1e-12";
    return "";
}

std::string g_cli_path;

std::string criterion_determinism() {
    if (g_cli_path.empty())
        return "bench CLI path not provided";
    const fs::path tmp = fs::temp_directory_path() / "drillfem_acceptance";
    fs::create_directories(tmp);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto run_cli = [&](const std::string& args, const fs::path& out) {
        const std::string cmd =
            g_cli_path + " " + args + " --out " + out.string() + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };

    const std::string mms_args = "--case manufactured --method mixed --element q1q1 --n-list 8,16";
    const std::string console_args = "--case console --method standard --element q1 --n-list 4,8";
    for (const auto& [args, stem] :
         {std::pair<std::string, std::string>{mms_args, "mms"}, {console_args, "console"}}) {
        const fs::path first = tmp / (stem + "_1.csv");
        const fs::path second = tmp / (stem + "_2.csv");
        if (run_cli(args, first) != 0 || run_cli(args, second) != 0)
            return "CLI run failed for '" + args + "'";
        const std::string a = slurp(first);
        if (a.empty() || a != slurp(second))
            return "CSV output differs between identical runs of '" + args + "'";
    }
    std::error_code ec;
    fs::remove_all(tmp, ec);
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1)
        g_cli_path = argv[1];

    const std::vector<Criterion> criteria = {
        {1, "pointwise strain rearrangement identity", criterion_identity_pointwise, 1.0},
        {2, "discrete operator splitting", criterion_identity_discrete, 5.0},
        {3, "p1p0/standard equivalence on the console", criterion_equivalence, 10.0},
        {4, "second-order displacement convergence", criterion_convergence, 60.0},
        {5, "curl convergence", criterion_curl_convergence, 0.0},
        {6, "console energy versus the reference", criterion_console_energy, 0.0},
        {7, "stiffness ordering across methods", criterion_stiffness_ordering, 0.0},
        {8, "curl variable is the projected displacement curl", criterion_projection, 0.0},
        {9, "stability probe", criterion_stability, 0.0},
        {10, "deterministic CLI output", criterion_determinism, 0.0},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            error = criterion.body();
        } catch (const std::exception& e) {
            error = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && criterion.time_budget_s > 0.0 && elapsed > criterion.time_budget_s)
            error = "time budget exceeded: " + fmt(elapsed) + " s > " +
                    fmt(criterion.time_budget_s) + " s";
        if (error.empty()) {
            std::cout << "PASS criterion " << criterion.id << ": " << criterion.label << " ("
                      << fmt(elapsed) << " s)\n";
        } else {
            std::cout << "FAIL criterion " << criterion.id << ": " << criterion.label << ": "
                      << error << "\n";
            ++failures;
        }
    }

    if (failures == 0)
        std::cout << "all 10 criteria passed\n";
    else
        std::cout << failures << " criterio" << (failures == 1 ? "n" : "ns") << " failed\n";
    return failures == 0 ? 0 : 1;
}
