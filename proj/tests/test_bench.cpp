#include "drillfem/bench.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace drillfem;
namespace bench = drillfem::bench;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("drillfem_bench_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, sep))
        out.push_back(item);
    return out;
}

}  // namespace

TEST_SUITE("bench") {

TEST_CASE("string round trips and validation") {
    CHECK(bench::case_from_string("console") == bench::Case::Console);
    CHECK(bench::method_from_string("hughes") == Method::Hughes);
    CHECK(bench::element_from_string("q1p0") == bench::ElementPair::Q1P0);
    CHECK_THROWS_AS(bench::case_from_string("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(bench::method_from_string(""), std::invalid_argument);
    CHECK_THROWS_AS(bench::element_from_string("q2"), std::invalid_argument);

    const bench::MaterialSource lame = bench::material_from_string("lame(2, 0.5)");
    CHECK(lame.kind == bench::MaterialSource::Kind::Lame);
    CHECK(lame.a == 2.0);
    CHECK(lame.b == 0.5);
    const bench::MaterialSource ps = bench::material_from_string("plane_strain(1,0.3)");
    CHECK(ps.kind == bench::MaterialSource::Kind::PlaneStrain);
    CHECK_THROWS_AS(bench::material_from_string("lame"), std::invalid_argument);
    CHECK_THROWS_AS(bench::material_from_string("rubber(1,2)"), std::invalid_argument);
    CHECK_THROWS_AS(bench::material_from_string("lame(x,2)"), std::invalid_argument);

    CHECK(bench::n_list_from_string("8, 16,32") == std::vector<int>{8, 16, 32});
    CHECK_THROWS_AS(bench::n_list_from_string(""), std::invalid_argument);
    CHECK_THROWS_AS(bench::n_list_from_string("8,4"), std::invalid_argument);
    CHECK_THROWS_AS(bench::n_list_from_string("0,4"), std::invalid_argument);
}

TEST_CASE("element pair properties") {
    using EP = bench::ElementPair;
    CHECK(bench::element_cell_kind(EP::Q1Q1) == CellKind::Quad);
    CHECK(bench::element_cell_kind(EP::P1P0) == CellKind::Tri);
    CHECK(bench::element_q_space(EP::Q1) == ScalarSpace::None);
    CHECK(bench::element_q_space(EP::Q1P0) == ScalarSpace::P0);
    CHECK(bench::element_q_space(EP::P1P1) == ScalarSpace::P1);
    CHECK(bench::element_v_space(EP::P1P1) == ElemKind::P1);
}

TEST_CASE("config file parsing and overrides") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# comment line\n"
            << "case = console\n"
            << "method = mixed\n"
            << "element = q1q1   # trailing comment\n"
            << "n_list = 2,4\n";
    }
    const auto file_values = bench::read_config_file(cfg.string());
    CHECK(file_values.at("case") == "console");
    CHECK(file_values.at("element") == "q1q1");

    const bench::RunConfig config = bench::make_config(file_values, {{"method", "hughes"}});
    CHECK(config.benchmark_case == bench::Case::Console);
    CHECK(config.method == Method::Hughes);
    CHECK(config.element == bench::ElementPair::Q1Q1);
    CHECK(config.n_list == std::vector<int>{2, 4});

    CHECK_THROWS_AS(bench::read_config_file((tmp.path / "missing.cfg").string()),
                    std::invalid_argument);
    {
        std::ofstream out(tmp.path / "bad.cfg");
        out << "case console\n";
    }
    CHECK_THROWS_AS(bench::read_config_file((tmp.path / "bad.cfg").string()),
                    std::invalid_argument);

    CHECK_THROWS_AS(bench::make_config({}, {{"turbo", "on"}}), std::invalid_argument);
    CHECK_THROWS_AS(bench::make_config({}, {{"method", "standard"}, {"element", "q1q1"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bench::make_config({}, {{"method", "mixed"}, {"element", "q1"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(bench::make_config({}, {{"check", "maybe"}}), std::invalid_argument);
}

TEST_CASE("material defaults per case") {
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Manufactured;
    const Material lame = bench::resolve_material(config);
    CHECK(lame.lambda == 1.0);
    CHECK(lame.mu == 1.0);

    config.benchmark_case = bench::Case::Console;
    const Material ps = bench::resolve_material(config);
    CHECK(ps.mu == doctest::Approx(0.38461538461538464).epsilon(1e-14));
    CHECK(ps.lambda == doctest::Approx(0.57692307692307687).epsilon(1e-14));
}

TEST_CASE("manufactured run writes the expected table") {
    TempDir tmp;
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Manufactured;
    config.method = Method::Mixed;
    config.element = bench::ElementPair::Q1Q1;
    config.n_list = {2, 4};
    config.out = (tmp.path / "mms.csv").string();

    const ErrorReport report = bench::run_manufactured(config);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].err_u > report.rows[1].err_u);
    CHECK(report.rows[1].rate_u.has_value());

    const std::string csv = slurp(config.out);
    const auto lines = split(csv, '\n');
    REQUIRE(lines.size() >= 3);
    CHECK(lines[0] == "n,h,err_u,rate_u,err_p,rate_p");
    const auto first = split(lines[1] + " ", ',');
    REQUIRE(first.size() == 6);
    CHECK(first[0] == "2");
    CHECK(first[3].empty());   // no rate on the coarsest row
    CHECK(!first[4].empty());  // curl error present for mixed

    // standard method leaves the curl columns empty
    config.method = Method::Standard;
    config.element = bench::ElementPair::Q1;
    config.out = (tmp.path / "std.csv").string();
    bench::run_manufactured(config);
    const auto std_lines = split(slurp(config.out), '\n');
    const auto std_first = split(std_lines[1] + " ", ',');
    REQUIRE(std_first.size() == 6);
    CHECK(std_first[4].empty());
}

TEST_CASE("manufactured run rejects foreign materials") {
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Manufactured;
    config.material = bench::MaterialSource{bench::MaterialSource::Kind::Lame, 2.0, 1.0};
    CHECK_THROWS_AS(bench::run_manufactured(config), std::invalid_argument);
    config.benchmark_case = bench::Case::Console;
    CHECK_THROWS_AS(bench::run_manufactured(config), std::invalid_argument);
}

TEST_CASE("p1p0 reproduces the standard p1 errors row by row") {
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Manufactured;
    config.method = Method::Mixed;
    config.element = bench::ElementPair::P1P0;
    config.n_list = {4, 8};
    const ErrorReport mixed = bench::run_manufactured(config);

    config.method = Method::Standard;
    config.element = bench::ElementPair::P1;
    const ErrorReport standard = bench::run_manufactured(config);

    REQUIRE(mixed.rows.size() == standard.rows.size());
    for (std::size_t i = 0; i < mixed.rows.size(); ++i)
        CHECK(std::abs(mixed.rows[i].err_u - standard.rows[i].err_u) <=
              1e-9 * standard.rows[i].err_u);
}

TEST_CASE("csv output is byte-identical across runs") {
    TempDir tmp;
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Manufactured;
    config.method = Method::Mixed;
    config.element = bench::ElementPair::P1P0;
    config.n_list = {2, 4};

    config.out = (tmp.path / "a.csv").string();
    bench::run_manufactured(config);
    config.out = (tmp.path / "b.csv").string();
    bench::run_manufactured(config);
    CHECK(slurp(tmp.path / "a.csv") == slurp(tmp.path / "b.csv"));
}

TEST_CASE("console run emits energies and the reference row") {
    TempDir tmp;
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Console;
    config.method = Method::Standard;
    config.element = bench::ElementPair::Q1;
    config.n_list = {2, 4, 8};
    config.out = (tmp.path / "console.csv").string();

    const auto rows = bench::run_console(config);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].energy > 0.0);
        CHECK(rows[i].energy < bench::kConsoleReferenceEnergy);
        if (i > 0)
            CHECK(rows[i].energy > rows[i - 1].energy);
    }
    // reduced displacement DOFs plus curl DOFs
    CHECK(rows[0].dofs == 2 * 9 - 2 * 3);

    const std::string csv = slurp(config.out);
    const auto lines = split(csv, '\n');
    CHECK(lines[0] == "method,element,n,dofs,energy");
    CHECK(csv.find("reference,,,,1.903697000000e+00") != std::string::npos);
    CHECK(csv.find("standard,q1,4,") != std::string::npos);
}

TEST_CASE("console orderings hold on coarse meshes") {
    bench::RunConfig config;
    config.benchmark_case = bench::Case::Console;
    config.n_list = {4, 8};
    config.check = true;  // raises CheckFailure when an ordering is violated
    const auto rows = bench::run_console(config);
    CHECK(rows.size() == 8 * 2);
}

TEST_CASE("plot script emission") {
    TempDir tmp;
    const fs::path csv_a = tmp.path / "a.csv";
    const fs::path csv_b = tmp.path / "b.csv";

    CHECK_THROWS_AS(bench::emit_plot_script({}, (tmp.path / "plot.py").string()),
                    std::invalid_argument);
    CHECK_THROWS_AS(bench::emit_plot_script({csv_a.string()}, (tmp.path / "plot.py").string()),
                    std::invalid_argument);

    bench::RunConfig mms;
    mms.benchmark_case = bench::Case::Manufactured;
    mms.method = Method::Mixed;
    mms.element = bench::ElementPair::Q1Q1;
    mms.n_list = {2, 4};
    mms.out = csv_a.string();
    bench::run_manufactured(mms);

    bench::RunConfig console;
    console.benchmark_case = bench::Case::Console;
    console.method = Method::Standard;
    console.element = bench::ElementPair::Q1;
    console.n_list = {2, 4};
    console.out = csv_b.string();
    bench::run_console(console);

    const fs::path script = tmp.path / "plot.py";
    bench::emit_plot_script({csv_a.string(), csv_b.string()}, script.string());
    const std::string text = slurp(script);
    CHECK(text.find(csv_a.string()) != std::string::npos);
    CHECK(text.find(csv_b.string()) != std::string::npos);
    CHECK(text.find("1.903697") != std::string::npos);

    // the script must run under a stock python + matplotlib
    const std::string cmd = "cd " + tmp.path.string() + " && python3 " + script.string() +
                            " > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(tmp.path / "a.png"));
    CHECK(fs::exists(tmp.path / "b.png"));
}

}  // TEST_SUITE
