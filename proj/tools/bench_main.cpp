// Benchmark driver: convergence studies on the manufactured solution and the
// clamped-console energy comparison, for the standard, mixed, and Hughes
// formulations.

#include "drillfem/bench.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace bench = drillfem::bench;

int main(int argc, char** argv) {
    CLI::App app{"2D elasticity benchmarks with an independent curl unknown"};

    std::string config_path;
    std::string case_name, method_name, element_name, n_list, material, out;
    bool check = false;
    std::string plot_out;
    std::vector<std::string> plot_csvs;

    app.add_option("config", config_path, "flat key = value config file");
    app.add_option("--case", case_name, "manufactured | console");
    app.add_option("--method", method_name, "standard | mixed | hughes");
    app.add_option("--element", element_name, "q1 | p1 | q1q1 | q1p0 | p1p1 | p1p0");
    app.add_option("--n-list", n_list, "comma-separated mesh sizes (default 8,16,32,64)");
    app.add_option("--material", material, "lame(l,m) | plane_strain(E,nu)");
    app.add_option("--out", out, "output CSV path");
    app.add_flag("--check", check, "assert the expected rates/orderings, exit 3 on failure");
    app.add_option("--emit-plot", plot_out, "write a Python plot script for the given CSVs");
    app.add_option("--csv", plot_csvs, "CSV tables for --emit-plot");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!plot_out.empty()) {
            bench::emit_plot_script(plot_csvs, plot_out);
            std::cout << "wrote " << plot_out << "\n";
            return 0;
        }

        std::map<std::string, std::string> file_values;
        if (!config_path.empty())
            file_values = bench::read_config_file(config_path);

        std::map<std::string, std::string> overrides;
        if (!case_name.empty()) overrides["case"] = case_name;
        if (!method_name.empty()) overrides["method"] = method_name;
        if (!element_name.empty()) overrides["element"] = element_name;
        if (!n_list.empty()) overrides["n_list"] = n_list;
        if (!material.empty()) overrides["material"] = material;
        if (!out.empty()) overrides["out"] = out;
        if (check) overrides["check"] = "true";

        bench::RunConfig config = bench::make_config(file_values, overrides);
        if (config.out.empty())
            config.out = std::string(bench::to_string(config.benchmark_case)) + ".csv";

        bench::run(config);
        std::cout << "wrote " << config.out << "\n";
        return 0;
    } catch (const bench::CheckFailure& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    }
}
