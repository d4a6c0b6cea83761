#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "schro/models.hpp"
#include "schro/resources.hpp"

namespace schro {

using json = nlohmann::json;

enum class ModelKind { Heat, Convection, BlackScholes, FokkerPlanck, Boltzmann, Liouville, LinearODE };

const char* model_kind_name(ModelKind k);

// A scalar field from the function catalog, with analytic derivatives when the entry has them.
struct FieldSpec {
    ScalarField f;
    VectorField grad;
    ScalarField lap;
};

// catalog: sin_pi, cos_pi, const, gaussian, quadratic, samples
FieldSpec parse_field(const json& j, const Grid& grid, const std::string& where);
// catalog: linear (F = coef q), const (F = value)
VectorField parse_vector_field(const json& j, int d, const std::string& where);

struct ProfileSpec {
    enum class Axis { PAtMode, XAtP };
    Axis axis = Axis::PAtMode;
    std::optional<long long> l_star;  // auto when absent
    std::optional<double> p_star;     // XAtP; recovery p* when absent
};

struct ExperimentConfig {
    json source;  // the config as given, echoed into the manifest
    ModelKind kind = ModelKind::Heat;
    std::optional<Grid> grid;
    json pgrid;   // validated PGrid fields; L may be absent (resolved from the domain estimate)
    json params;
    EvolutionPlan plan;
    Recovery recovery;
    bool diag_norm = true;
    bool diag_mass = true;
    bool diag_error = true;
    std::optional<ProfileSpec> profile;
    std::string out_dir;
    long long seed = 0;
};

// Schema check only; every key is validated and unknown keys are rejected.
ExperimentConfig parse_config(const json& j);
// Accepts either a config or a run manifest (whose "config" entry is re-run).
ExperimentConfig load_config(const std::string& path);

CostQuery parse_cost_query(const json& j);

// (coordinate, |amplitude|) rows as CSV text
std::string emit_profile(const WarpedState& w, ProfileSpec::Axis axis, double index_or_p);

struct RunResult {
    int exit_code = 0;
    std::string message;
    std::vector<std::string> files;
};

// exit codes: 0 ok, 2 schema or CFL violation, 3 blow-up (partial outputs kept), 1 other failure
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir_override = "");

std::string format_double(double v);
void write_atomic(const std::string& path, const std::string& content);

}  // namespace schro
