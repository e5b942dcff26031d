// scenario.cpp — Scenario parsing, run/sweep execution, artifact emission

#include "oqs/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"

namespace oqs {

using nlohmann::json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::lambda: return "lambda";
        case ModelKind::optomech: return "optomech";
        case ModelKind::random_bipartite: return "random_bipartite";
    }
    return "unknown";
}

namespace {

std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario parse error: ") + e.what());
    }
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed,
                const std::vector<std::string>& required) {
    if (!obj.is_object()) throw ValidationError("expected an object at '" + path + "'");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ValidationError("unknown key '" + path + item.key() + "'");
    for (const auto& key : required)
        if (!obj.contains(key)) throw ValidationError("missing key '" + path + key + "'");
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ValidationError("key '" + path + key + "' must be a number");
    return v.get<double>();
}

int get_integer(const json& obj, const std::string& path, const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ValidationError("key '" + path + key + "' must be an integer");
    return v.get<int>();
}

std::vector<double> get_number_array(const json& obj, const std::string& path,
                                     const std::string& key) {
    const json& v = obj.at(key);
    if (!v.is_array()) throw ValidationError("key '" + path + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number())
            throw ValidationError("key '" + path + key + "' must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

int system_dim_for(const Scenario& s) {
    switch (s.model) {
        case ModelKind::lambda: return 2;
        case ModelKind::optomech: return s.optomech.n_mech;
        case ModelKind::random_bipartite: return 2;
    }
    return 0;
}

const std::set<std::string>& allowed_outputs_for(ModelKind model) {
    static const std::set<std::string> lambda_outputs{"occupation", "pop_a", "pop_b", "pop_e",
                                                      "trace_distance"};
    static const std::set<std::string> optomech_outputs{"occupation", "cavity_occupation",
                                                        "trace_distance"};
    static const std::set<std::string> random_outputs{"occupation", "trace_distance"};
    switch (model) {
        case ModelKind::lambda: return lambda_outputs;
        case ModelKind::optomech: return optomech_outputs;
        case ModelKind::random_bipartite: return random_outputs;
    }
    return random_outputs;
}

void validate_scenario(const Scenario& s) {
    if (s.name.empty() ||
        s.name.find_first_not_of(
            "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-") !=
            std::string::npos)
        throw ValidationError("scenario name must be nonempty and use only [A-Za-z0-9_-]");
    s.grid.validate();

    switch (s.model) {
        case ModelKind::lambda:
            if (s.lambda.bigdelta == 0.0) throw ValidationError("bigdelta must be nonzero");
            break;
        case ModelKind::optomech:
            s.optomech.validate();
            break;
        case ModelKind::random_bipartite:
            if (s.random_bipartite.bath_rate <= 0.0)
                throw ValidationError("bath_rate must be positive");
            if (s.random_bipartite.hs_norm < 0.0 || s.random_bipartite.hb_norm < 0.0 ||
                s.random_bipartite.v_norm < 0.0)
                throw ValidationError("norm bounds must be nonnegative");
            break;
    }

    if (s.initial.preset == InitialState::Preset::thermal) {
        if (s.model != ModelKind::optomech)
            throw ValidationError("initial preset 'thermal' is only valid for model optomech");
        if (s.initial.nbar < 0.0) throw ValidationError("initial.nbar must be nonnegative");
    }
    if (s.initial.preset == InitialState::Preset::superposition) {
        const int dim = system_dim_for(s);
        if (static_cast<int>(s.initial.amplitudes.size()) != dim)
            throw ValidationError("initial.amplitudes length must equal the system dimension " +
                                  std::to_string(dim));
        double norm = 0.0;
        for (const Complex& c : s.initial.amplitudes) norm += std::norm(c);
        if (std::abs(norm - 1.0) > 1e-9)
            throw ValidationError("initial.amplitudes must be normalized (|psi|^2 = 1)");
    }

    const auto& allowed = allowed_outputs_for(s.model);
    for (const auto& name : s.outputs)
        if (!allowed.count(name))
            throw ValidationError("output '" + name + "' is not available for model " +
                                  to_string(s.model));
    if (s.outputs.empty()) throw ValidationError("outputs must not be empty");
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    const json root = parse_json_text(text);
    check_keys(root, "", {"name", "model", "params", "grid", "initial", "outputs", "seed"},
               {"name", "model", "params", "grid", "initial"});

    Scenario s;
    if (!root.at("name").is_string()) throw ValidationError("key 'name' must be a string");
    s.name = root.at("name").get<std::string>();

    const std::string model_tag = root.at("model").is_string()
                                      ? root.at("model").get<std::string>()
                                      : throw ValidationError("key 'model' must be a string");
    if (model_tag == "lambda")
        s.model = ModelKind::lambda;
    else if (model_tag == "optomech")
        s.model = ModelKind::optomech;
    else if (model_tag == "random_bipartite")
        s.model = ModelKind::random_bipartite;
    else
        throw ValidationError("unrecognized model tag '" + model_tag + "'");

    const json& params = root.at("params");
    switch (s.model) {
        case ModelKind::lambda: {
            check_keys(params, "params.",
                       {"omega_a_re", "omega_a_im", "omega_b_re", "omega_b_im", "delta",
                        "bigdelta"},
                       {"omega_a_re", "omega_a_im", "omega_b_re", "omega_b_im", "delta",
                        "bigdelta"});
            s.lambda.omega_a = Complex(get_number(params, "params.", "omega_a_re"),
                                       get_number(params, "params.", "omega_a_im"));
            s.lambda.omega_b = Complex(get_number(params, "params.", "omega_b_re"),
                                       get_number(params, "params.", "omega_b_im"));
            s.lambda.delta = get_number(params, "params.", "delta");
            s.lambda.bigdelta = get_number(params, "params.", "bigdelta");
            break;
        }
        case ModelKind::optomech: {
            check_keys(params, "params.",
                       {"omega_m", "delta", "kappa", "gamma_m", "nbar", "g_re", "g_im", "n_cav",
                        "n_mech"},
                       {"omega_m", "delta", "kappa", "gamma_m", "nbar", "g_re", "g_im", "n_cav",
                        "n_mech"});
            s.optomech.omega_m = get_number(params, "params.", "omega_m");
            s.optomech.delta = get_number(params, "params.", "delta");
            s.optomech.kappa = get_number(params, "params.", "kappa");
            s.optomech.gamma_m = get_number(params, "params.", "gamma_m");
            s.optomech.nbar = get_number(params, "params.", "nbar");
            s.optomech.g = Complex(get_number(params, "params.", "g_re"),
                                   get_number(params, "params.", "g_im"));
            s.optomech.n_cav = get_integer(params, "params.", "n_cav");
            s.optomech.n_mech = get_integer(params, "params.", "n_mech");
            break;
        }
        case ModelKind::random_bipartite: {
            check_keys(params, "params.", {"hs_norm", "hb_norm", "v_norm", "bath_rate"},
                       {"hs_norm", "hb_norm", "v_norm", "bath_rate"});
            s.random_bipartite.hs_norm = get_number(params, "params.", "hs_norm");
            s.random_bipartite.hb_norm = get_number(params, "params.", "hb_norm");
            s.random_bipartite.v_norm = get_number(params, "params.", "v_norm");
            s.random_bipartite.bath_rate = get_number(params, "params.", "bath_rate");
            break;
        }
    }

    if (s.model == ModelKind::random_bipartite) {
        if (!root.contains("seed"))
            throw ValidationError("missing key 'seed' (required for model random_bipartite)");
        const json& seed = root.at("seed");
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
            throw ValidationError("key 'seed' must be a nonnegative integer");
        s.seed = seed.get<std::uint64_t>();
    } else if (root.contains("seed")) {
        throw ValidationError("key 'seed' is only valid for model random_bipartite");
    }

    const json& grid = root.at("grid");
    check_keys(grid, "grid.", {"t0", "t1", "steps"}, {"t0", "t1"});
    s.grid.t0 = get_number(grid, "grid.", "t0");
    s.grid.t1 = get_number(grid, "grid.", "t1");
    s.grid.steps = grid.contains("steps") ? get_integer(grid, "grid.", "steps") : 4000;

    const json& initial = root.at("initial");
    check_keys(initial, "initial.", {"preset", "nbar", "amplitudes_re", "amplitudes_im"},
               {"preset"});
    const std::string preset = initial.at("preset").is_string()
                                   ? initial.at("preset").get<std::string>()
                                   : throw ValidationError("key 'initial.preset' must be a string");
    if (preset == "ground") {
        s.initial.preset = InitialState::Preset::ground;
        check_keys(initial, "initial.", {"preset"}, {});
    } else if (preset == "thermal") {
        s.initial.preset = InitialState::Preset::thermal;
        check_keys(initial, "initial.", {"preset", "nbar"}, {"nbar"});
        s.initial.nbar = get_number(initial, "initial.", "nbar");
    } else if (preset == "superposition") {
        s.initial.preset = InitialState::Preset::superposition;
        check_keys(initial, "initial.", {"preset", "amplitudes_re", "amplitudes_im"},
                   {"amplitudes_re", "amplitudes_im"});
        const auto re = get_number_array(initial, "initial.", "amplitudes_re");
        const auto im = get_number_array(initial, "initial.", "amplitudes_im");
        if (re.size() != im.size())
            throw ValidationError("initial.amplitudes_re and initial.amplitudes_im differ in length");
        for (std::size_t i = 0; i < re.size(); ++i) s.initial.amplitudes.emplace_back(re[i], im[i]);
    } else {
        throw ValidationError("unrecognized initial preset '" + preset + "'");
    }

    if (root.contains("outputs")) {
        const json& outputs = root.at("outputs");
        if (!outputs.is_array()) throw ValidationError("key 'outputs' must be an array");
        for (const auto& e : outputs) {
            if (!e.is_string()) throw ValidationError("key 'outputs' must contain only strings");
            s.outputs.push_back(e.get<std::string>());
        }
    } else {
        s.outputs = {"occupation"};
    }

    validate_scenario(s);
    return s;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct TrajectoryTable {
    std::vector<double> times;
    // observable name -> complex series, separately for full and reduced
    std::map<std::string, std::vector<Complex>> full;
    std::map<std::string, std::vector<Complex>> reduced;
    std::vector<double> trace_distances;
};

// Maps a requested output to the recorded observable name for the model.
std::string principal_observable(ModelKind model, const std::string& output) {
    if (output == "occupation") {
        if (model == ModelKind::lambda) return "pop_b";
        return "occupation";
    }
    return output;
}

std::string build_trajectory_csv(const Scenario& s, const TrajectoryTable& table) {
    std::vector<std::string> headers{"t"};
    // (column source: 0 = full, 1 = reduced) x (0 = re, 1 = im), or trace distance
    struct Column {
        const std::vector<Complex>* series = nullptr;
        const std::vector<double>* plain = nullptr;
        bool imag = false;
    };
    std::vector<Column> columns;

    for (const auto& output : s.outputs) {
        if (output == "trace_distance") {
            headers.push_back("trace_distance");
            columns.push_back({nullptr, &table.trace_distances, false});
            continue;
        }
        const std::string key = principal_observable(s.model, output);
        const auto full_it = table.full.find(key);
        if (full_it != table.full.end()) {
            headers.push_back(output + "_full_re");
            columns.push_back({&full_it->second, nullptr, false});
            headers.push_back(output + "_full_im");
            columns.push_back({&full_it->second, nullptr, true});
        }
        const auto red_it = table.reduced.find(key);
        if (red_it != table.reduced.end()) {
            headers.push_back(output + "_reduced_re");
            columns.push_back({&red_it->second, nullptr, false});
            headers.push_back(output + "_reduced_im");
            columns.push_back({&red_it->second, nullptr, true});
        }
    }

    std::string csv;
    for (std::size_t c = 0; c < headers.size(); ++c) {
        if (c) csv += ',';
        csv += headers[c];
    }
    csv += '\n';
    for (std::size_t i = 0; i < table.times.size(); ++i) {
        csv += fmt17(table.times[i]);
        for (const auto& col : columns) {
            csv += ',';
            if (col.plain) {
                csv += fmt17((*col.plain)[i]);
            } else {
                const Complex z = (*col.series)[i];
                csv += fmt17(col.imag ? z.imag() : z.real());
            }
        }
        csv += '\n';
    }
    return csv;
}

DensityMatrix pure_state(const Vector& psi) {
    return DensityMatrix{psi * psi.adjoint()};
}

DensityMatrix system_initial_state(const Scenario& s) {
    const int dim = system_dim_for(s);
    switch (s.initial.preset) {
        case InitialState::Preset::ground: {
            Vector psi = Vector::Zero(dim);
            psi(0) = 1.0;
            return pure_state(psi);
        }
        case InitialState::Preset::thermal:
            return thermal_state(dim, s.initial.nbar);
        case InitialState::Preset::superposition: {
            Vector psi(dim);
            for (int i = 0; i < dim; ++i) psi(i) = s.initial.amplitudes[i];
            return pure_state(psi);
        }
    }
    throw ValidationError("unhandled initial preset");
}

void record_trace_distances(const Trajectory& full, const Trajectory& reduced,
                            const TensorSpace& space, TrajectoryTable& table) {
    table.trace_distances.reserve(full.states.size());
    for (std::size_t i = 0; i < full.states.size(); ++i) {
        DensityMatrix system_block = partial_trace(full.states[i], space, 0);
        table.trace_distances.push_back(trace_distance(system_block, reduced.states[i]));
    }
}

void require_finite(const std::map<std::string, double>& values) {
    for (const auto& [key, value] : values)
        if (!std::isfinite(value))
            throw NumericalError("summary value '" + key + "' is not finite");
}

std::string summary_to_json(const Scenario& s, const RunSummary& summary) {
    json j;
    j["name"] = summary.scenario_name;
    j["model"] = to_string(summary.model);
    j["grid"] = {{"t0", s.grid.t0}, {"t1", s.grid.t1}, {"steps", s.grid.steps}};
    j["metrics"] = summary.values;
    j["structure_residuals"] = {{"ls_p_commutator", summary.structure.ls_p_commutator},
                                {"lb_p", summary.structure.lb_p},
                                {"p_lb", summary.structure.p_lb},
                                {"p_lint_p", summary.structure.p_lint_p},
                                {"bath_stationarity", summary.structure.bath_stationarity},
                                {"max", summary.structure.max_residual()}};
    j["warnings"] = summary.warnings;
    return j.dump(2) + "\n";
}

RunResult run_lambda(const Scenario& s) {
    const LambdaParams& p = s.lambda;
    LambdaModel model = build_lambda(p);

    LiouvillianSpec full_spec;
    full_spec.hilbert_dim = 3;
    full_spec.static_parts.push_back({commutator_superop(model.h_full), Part::system});

    Matrix unit = Matrix::Zero(3, 3);
    std::map<std::string, Matrix> full_obs;
    unit(0, 0) = 1.0;
    full_obs["pop_a"] = unit;
    unit.setZero();
    unit(1, 1) = 1.0;
    full_obs["pop_b"] = unit;
    unit.setZero();
    unit(2, 2) = 1.0;
    full_obs["pop_e"] = unit;

    DensityMatrix rho0_sys = system_initial_state(s);
    Matrix rho0_full_mat = Matrix::Zero(3, 3);
    rho0_full_mat.topLeftCorner(2, 2) = rho0_sys.mat;
    Trajectory full = propagate(full_spec, DensityMatrix{rho0_full_mat}, s.grid, full_obs);

    const Matrix h_eff = lambda_effective_hamiltonian(p);
    LiouvillianSpec reduced_spec;
    reduced_spec.hilbert_dim = 2;
    reduced_spec.static_parts.push_back({commutator_superop(h_eff), Part::system});

    std::map<std::string, Matrix> red_obs;
    Matrix unit2 = Matrix::Zero(2, 2);
    unit2(0, 0) = 1.0;
    red_obs["pop_a"] = unit2;
    unit2.setZero();
    unit2(1, 1) = 1.0;
    red_obs["pop_b"] = unit2;
    Trajectory reduced = propagate(reduced_spec, rho0_sys, s.grid, red_obs);

    TrajectoryTable table;
    table.times = full.times;
    table.full = full.observables;
    table.reduced = reduced.observables;
    table.trace_distances.reserve(full.states.size());
    double max_pop_b_error = 0.0;
    double max_excited = 0.0;
    double max_td = 0.0;
    for (std::size_t i = 0; i < full.states.size(); ++i) {
        DensityMatrix block{full.states[i].mat.topLeftCorner(2, 2)};
        const double td = trace_distance(block, reduced.states[i]);
        table.trace_distances.push_back(td);
        max_td = std::max(max_td, td);
        max_pop_b_error = std::max(max_pop_b_error,
                                   std::abs(full.observables.at("pop_b")[i].real() -
                                            reduced.observables.at("pop_b")[i].real()));
        max_excited = std::max(max_excited, full.observables.at("pop_e")[i].real());
    }

    // Cross-check of the generic second-order engine against the closed form,
    // on the {|a>, |b>} block of the product-space generator.
    ReducedGenerator engine =
        second_order_generator(model.bath_generator, model.interaction, model.bath_state, true);
    const std::array<int, 4> block_idx{0, 1, 3, 4}; // (m, n) in {a, b} of the 3-dim factor
    Matrix engine_block(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            engine_block(r, c) = engine.generator.mat(block_idx[r], block_idx[c]);
    const Matrix oracle = commutator_superop(h_eff - model.h_s).mat;
    const double elimination_residual = max_abs(engine_block - oracle);

    RunSummary summary;
    summary.scenario_name = s.name;
    summary.model = s.model;
    summary.warnings = model.warnings;
    for (const auto& w : engine.warnings) summary.warnings.push_back(w);
    summary.structure = check_structure(model.enlarged, build_projector(model.bath_state, model.space));
    summary.values["max_pop_b_error"] = max_pop_b_error;
    summary.values["max_excited_population"] = max_excited;
    summary.values["max_trace_distance"] = max_td;
    summary.values["elimination_block_residual"] = elimination_residual;
    summary.values["pop_b_full_final"] = full.observables.at("pop_b").back().real();
    summary.values["pop_b_reduced_final"] = reduced.observables.at("pop_b").back().real();
    require_finite(summary.values);

    RunResult result;
    result.summary = std::move(summary);
    result.trajectory_csv = build_trajectory_csv(s, table);
    result.summary_json = summary_to_json(s, result.summary);
    return result;
}

RunResult run_optomech(const Scenario& s) {
    const OptomechParams& p = s.optomech;
    OptomechModel model = build_optomech(p);

    DensityMatrix rho0_mech = system_initial_state(s);
    DensityMatrix rho0_full{kron(rho0_mech.mat, model.bath_state.mat)};

    std::map<std::string, Matrix> full_obs{{"occupation", model.ops.at("num_mech")},
                                           {"cavity_occupation", model.ops.at("num_cav")}};
    Trajectory full = propagate(model.spec_schrodinger, rho0_full, s.grid, full_obs);

    // Reduced generator in the same (Schrodinger) frame: the closed-form
    // sideband generator plus the free mechanical rotation, which commutes
    // with every other term.
    ReducedGenerator sideband = sideband_generator(p);
    const Matrix b = fock_annihilation(p.n_mech);
    const Matrix num_local = b.adjoint() * b;
    LiouvillianSpec reduced_spec;
    reduced_spec.hilbert_dim = p.n_mech;
    reduced_spec.static_parts.push_back(
        {sideband.generator + commutator_superop(p.omega_m * num_local), Part::system});
    Trajectory reduced =
        propagate(reduced_spec, rho0_mech, s.grid, {{"occupation", num_local}});

    TrajectoryTable table;
    table.times = full.times;
    table.full = full.observables;
    table.reduced = reduced.observables;
    record_trace_distances(full, reduced, model.space, table);

    RunSummary summary;
    summary.scenario_name = s.name;
    summary.model = s.model;
    summary.warnings = model.warnings;
    summary.structure =
        check_structure(model.spec_schrodinger, build_projector(model.bath_state, model.space));

    const SidebandRates rates = sideband_rates(p);
    summary.values["gamma_h"] = rates.gamma_h;
    summary.values["gamma_c"] = rates.gamma_c;
    summary.values["delta_m"] = rates.delta_m;
    if (p.gamma_m > 0.0) summary.values["cooperativity"] = cooperativity(p);

    const double occ_formula = steady_occupation(p);
    summary.values["occupation_formula"] = occ_formula;

    // The closed-form check needs an adequate cutoff; the trajectory cutoff is
    // the caller's choice and may truncate the tail of the steady state. The
    // cap keeps hot, weakly cooled scenarios affordable (their tail bias then
    // shows up in the summary value, which stays deterministic).
    OptomechParams adequate = p;
    adequate.n_mech = std::max(
        p.n_mech, std::min(60, static_cast<int>(std::ceil(10.0 * occ_formula + 20.0))));
    ReducedGenerator sideband_adequate = sideband_generator(adequate);
    DensityMatrix reduced_ss = steady_state(sideband_adequate.generator);
    const Matrix b_ad = fock_annihilation(adequate.n_mech);
    summary.values["occupation_reduced_steady"] =
        expectation(b_ad.adjoint() * b_ad, reduced_ss).real();

    DensityMatrix full_ss = steady_state(model.spec_schrodinger.static_part());
    summary.values["occupation_full_steady"] =
        expectation(model.ops.at("num_mech"), full_ss).real();

    summary.values["occupation_full_final"] = full.observables.at("occupation").back().real();
    summary.values["occupation_reduced_final"] =
        reduced.observables.at("occupation").back().real();
    double max_td = 0.0;
    for (double td : table.trace_distances) max_td = std::max(max_td, td);
    summary.values["max_trace_distance"] = max_td;
    require_finite(summary.values);

    RunResult result;
    result.summary = std::move(summary);
    result.trajectory_csv = build_trajectory_csv(s, table);
    result.summary_json = summary_to_json(s, result.summary);
    return result;
}

RunResult run_random_bipartite(const Scenario& s) {
    RandomBipartiteModel model = build_random_bipartite(s.seed, s.random_bipartite);

    DensityMatrix rho0_sys = system_initial_state(s);
    DensityMatrix rho0_full{kron(rho0_sys.mat, model.bath_state.mat)};

    Matrix excited = Matrix::Zero(2, 2);
    excited(1, 1) = 1.0;
    const Matrix eye2 = Matrix::Identity(2, 2);
    std::map<std::string, Matrix> full_obs{{"occupation", kron(excited, eye2)}};
    Trajectory full = propagate(model.spec, rho0_full, s.grid, full_obs);

    ReducedGenerator engine = second_order_generator(model.bath_generator, model.interaction,
                                                     model.bath_state, true);
    LiouvillianSpec reduced_spec;
    reduced_spec.hilbert_dim = 2;
    reduced_spec.static_parts.push_back(
        {commutator_superop(model.h_system) + engine.generator, Part::system});
    Trajectory reduced = propagate(reduced_spec, rho0_sys, s.grid, {{"occupation", excited}});

    TrajectoryTable table;
    table.times = full.times;
    table.full = full.observables;
    table.reduced = reduced.observables;
    record_trace_distances(full, reduced, model.space, table);

    ProjectorPair proj = build_projector(model.bath_state, model.space);
    NzReport nz = nz_consistency(model.spec, proj, rho0_sys, s.grid);

    RunSummary summary;
    summary.scenario_name = s.name;
    summary.model = s.model;
    summary.warnings = engine.warnings;
    summary.structure = check_structure(model.spec, proj);
    double max_td = 0.0;
    for (double td : table.trace_distances) max_td = std::max(max_td, td);
    summary.values["max_trace_distance"] = max_td;
    summary.values["nz_max_residual"] = nz.max_residual;
    summary.values["occupation_full_final"] = full.observables.at("occupation").back().real();
    summary.values["occupation_reduced_final"] =
        reduced.observables.at("occupation").back().real();
    require_finite(summary.values);

    RunResult result;
    result.summary = std::move(summary);
    result.trajectory_csv = build_trajectory_csv(s, table);
    result.summary_json = summary_to_json(s, result.summary);
    return result;
}

} // namespace

RunResult run_scenario(const Scenario& scenario) {
    validate_scenario(scenario);
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    switch (scenario.model) {
        case ModelKind::lambda: result = run_lambda(scenario); break;
        case ModelKind::optomech: result = run_optomech(scenario); break;
        case ModelKind::random_bipartite: result = run_random_bipartite(scenario); break;
    }
    result.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

using ParamSetter = std::function<void(Scenario&, double)>;

int integral_value(const std::string& path, double value) {
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9)
        throw ValidationError("parameter '" + path + "' requires an integer value");
    return static_cast<int>(rounded);
}

ParamSetter resolve_param_path(const Scenario& scenario, const std::string& path) {
    static const std::map<std::string, ParamSetter> grid_setters{
        {"grid.t0", [](Scenario& s, double v) { s.grid.t0 = v; }},
        {"grid.t1", [](Scenario& s, double v) { s.grid.t1 = v; }},
        {"grid.steps",
         [](Scenario& s, double v) { s.grid.steps = integral_value("grid.steps", v); }},
    };
    if (auto it = grid_setters.find(path); it != grid_setters.end()) return it->second;

    std::map<std::string, ParamSetter> setters;
    switch (scenario.model) {
        case ModelKind::lambda:
            setters = {
                {"params.delta", [](Scenario& s, double v) { s.lambda.delta = v; }},
                {"params.bigdelta", [](Scenario& s, double v) { s.lambda.bigdelta = v; }},
                {"params.omega_a_re",
                 [](Scenario& s, double v) { s.lambda.omega_a.real(v); }},
                {"params.omega_a_im",
                 [](Scenario& s, double v) { s.lambda.omega_a.imag(v); }},
                {"params.omega_b_re",
                 [](Scenario& s, double v) { s.lambda.omega_b.real(v); }},
                {"params.omega_b_im",
                 [](Scenario& s, double v) { s.lambda.omega_b.imag(v); }},
            };
            break;
        case ModelKind::optomech:
            setters = {
                {"params.omega_m", [](Scenario& s, double v) { s.optomech.omega_m = v; }},
                {"params.delta", [](Scenario& s, double v) { s.optomech.delta = v; }},
                {"params.kappa", [](Scenario& s, double v) { s.optomech.kappa = v; }},
                {"params.gamma_m", [](Scenario& s, double v) { s.optomech.gamma_m = v; }},
                {"params.nbar", [](Scenario& s, double v) { s.optomech.nbar = v; }},
                {"params.g_re", [](Scenario& s, double v) { s.optomech.g.real(v); }},
                {"params.g_im", [](Scenario& s, double v) { s.optomech.g.imag(v); }},
                {"params.n_cav",
                 [](Scenario& s, double v) { s.optomech.n_cav = integral_value("params.n_cav", v); }},
                {"params.n_mech",
                 [](Scenario& s, double v) {
                     s.optomech.n_mech = integral_value("params.n_mech", v);
                 }},
            };
            break;
        case ModelKind::random_bipartite:
            setters = {
                {"params.hs_norm", [](Scenario& s, double v) { s.random_bipartite.hs_norm = v; }},
                {"params.hb_norm", [](Scenario& s, double v) { s.random_bipartite.hb_norm = v; }},
                {"params.v_norm", [](Scenario& s, double v) { s.random_bipartite.v_norm = v; }},
                {"params.bath_rate",
                 [](Scenario& s, double v) { s.random_bipartite.bath_rate = v; }},
            };
            break;
    }
    if (auto it = setters.find(path); it != setters.end()) return it->second;
    throw ValidationError("unresolvable parameter path '" + path + "' for model " +
                          to_string(scenario.model));
}

std::vector<std::string> sweep_columns(ModelKind model) {
    switch (model) {
        case ModelKind::lambda:
            return {"max_pop_b_error", "max_excited_population", "max_trace_distance",
                    "elimination_block_residual", "pop_b_full_final", "pop_b_reduced_final",
                    "structure_max_residual"};
        case ModelKind::optomech:
            return {"gamma_h", "gamma_c", "delta_m", "cooperativity", "occupation_formula",
                    "occupation_reduced_steady", "occupation_full_steady",
                    "occupation_full_final", "occupation_reduced_final", "max_trace_distance",
                    "structure_max_residual"};
        case ModelKind::random_bipartite:
            return {"nz_max_residual", "max_trace_distance", "occupation_full_final",
                    "occupation_reduced_final", "structure_max_residual"};
    }
    return {};
}

} // namespace

std::string sweep_scenario(const Scenario& scenario, const std::string& param_path,
                           const std::vector<double>& values) {
    validate_scenario(scenario);
    ParamSetter setter = resolve_param_path(scenario, param_path);

    const std::vector<std::string> columns = sweep_columns(scenario.model);
    std::string csv = param_path;
    for (const auto& col : columns) csv += "," + col;
    csv += '\n';

    // Points are independent; run them concurrently, emit rows in input order.
    std::vector<std::future<RunSummary>> futures;
    futures.reserve(values.size());
    for (double value : values) {
        Scenario point = scenario;
        setter(point, value);
        futures.push_back(std::async(std::launch::async, [point]() {
            return run_scenario(point).summary;
        }));
    }

    for (std::size_t i = 0; i < values.size(); ++i) {
        RunSummary summary = futures[i].get();
        csv += fmt17(values[i]);
        for (const auto& col : columns) {
            csv += ',';
            if (col == "structure_max_residual") {
                csv += fmt17(summary.structure.max_residual());
            } else if (auto it = summary.values.find(col); it != summary.values.end()) {
                csv += fmt17(it->second);
            }
            // absent optional values (e.g. cooperativity at gamma_m = 0) stay empty
        }
        csv += '\n';
    }
    return csv;
}

// ---------------------------------------------------------------------------
// File emission

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    return dir;
}

} // namespace

void write_run_outputs(const RunResult& result, const std::string& out_dir) {
    const auto dir = prepare_out_dir(out_dir);
    write_file(dir / (result.summary.scenario_name + "_trajectory.csv"), result.trajectory_csv);
    write_file(dir / (result.summary.scenario_name + "_summary.json"), result.summary_json);
}

void write_sweep_output(const Scenario& scenario, const std::string& csv,
                        const std::string& out_dir) {
    const auto dir = prepare_out_dir(out_dir);
    write_file(dir / (scenario.name + "_sweep.csv"), csv);
}

} // namespace oqs
