#pragma once

#include "drillfem/analysis.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace drillfem::bench {

enum class Case { Manufactured, Console };

enum class ElementPair { Q1, P1, Q1Q1, Q1P0, P1P1, P1P0 };

struct MaterialSource {
    enum class Kind { Lame, PlaneStrain };
    Kind kind = Kind::Lame;
    double a = 1.0;  // lambda or E
    double b = 1.0;  // mu or nu
};

/// One benchmark run. The material defaults to lame(1,1) for the
/// manufactured case and plane_strain(1,0.3) for the console case.
struct RunConfig {
    Case benchmark_case = Case::Manufactured;
    Method method = Method::Standard;
    ElementPair element = ElementPair::Q1;
    std::vector<int> n_list = {8, 16, 32, 64};
    std::optional<MaterialSource> material;
    std::string out;
    bool check = false;
};

/// Raised when a --check assertion fails (CLI exit code 3).
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const char* to_string(Case c);
const char* to_string(Method m);
const char* to_string(ElementPair e);
Case case_from_string(const std::string& s);
Method method_from_string(const std::string& s);
ElementPair element_from_string(const std::string& s);
MaterialSource material_from_string(const std::string& s);  // lame(a,b) | plane_strain(a,b)
std::vector<int> n_list_from_string(const std::string& s);  // comma-separated

CellKind element_cell_kind(ElementPair e);
ElemKind element_v_space(ElementPair e);
ScalarSpace element_q_space(ElementPair e);

/// Flat `key = value` config file; '#' starts a comment. Recognized keys:
/// case, method, element, n_list, material, out, check.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Builds a RunConfig from file values overridden by CLI values, validating
/// method/element consistency. Throws std::invalid_argument on bad input.
RunConfig make_config(const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& overrides);

Material resolve_material(const RunConfig& config);

BoundarySpec console_boundary();
BoundarySpec clamped_boundary();  // Dirichlet on the whole square boundary

/// Convergence study against the manufactured solution (whole boundary
/// clamped, lambda = mu = 1). Writes the CSV when config.out is set and
/// checks the expected rates when config.check is set.
ErrorReport run_manufactured(const RunConfig& config);

struct ConsoleRow {
    Method method = Method::Standard;
    ElementPair element = ElementPair::Q1;
    int n = 0;
    int dofs = 0;
    double energy = 0.0;
};

inline constexpr double kConsoleReferenceEnergy = 1.903697;

/// Clamped-edge console under unit downward traction, plane strain
/// E = 1, nu = 0.3. Without check: the single configured (method, element).
/// With check: the full Q1 and P1 method families, with the energy-ordering
/// and reference-energy assertions. Writes the CSV when config.out is set.
std::vector<ConsoleRow> run_console(const RunConfig& config);

/// Writes a standalone Python script plotting the given CSV tables.
/// Throws when the list is empty or a file is missing.
void emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& out_path);

/// Dispatches on config.benchmark_case. Throws on failure; returns normally
/// on success.
void run(const RunConfig& config);

}  // namespace drillfem::bench
