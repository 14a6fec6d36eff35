#include "curltrace/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "curltrace/errors.hpp"
#include "curltrace/rng.hpp"
#include "curltrace/trace.hpp"

#include "CLI11.hpp"
#include "json.hpp"

namespace curltrace {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("unknown key \"" + key + "\" in " + where);
        }
    }
}

Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(where + ": expected an array of 3 numbers");
    }
    const Vec3 v{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
    if (!is_finite(v)) throw ConfigError(where + ": components must be finite");
    return v;
}

std::shared_ptr<const FinitePerimeterSet> parse_shape(const json& j) {
    if (!j.is_object()) throw ConfigError("shape: expected an object");
    const std::string kind = j.value("shape", "");
    try {
        if (kind == "ball") {
            reject_unknown_keys(j, {"shape", "center", "radius"}, "shape");
            return std::make_shared<FinitePerimeterSet>(FinitePerimeterSet::ball(
                parse_vec3(j.at("center"), "shape.center"), j.at("radius").get<double>()));
        }
        if (kind == "half_space") {
            reject_unknown_keys(j, {"shape", "inner_normal", "offset", "window"}, "shape");
            std::optional<Window> window;
            if (j.contains("window")) {
                const json& w = j.at("window");
                reject_unknown_keys(w, {"center", "half_side"}, "shape.window");
                window = Window{parse_vec3(w.at("center"), "window.center"),
                                w.at("half_side").get<double>()};
            }
            return std::make_shared<FinitePerimeterSet>(FinitePerimeterSet::half_space(
                parse_vec3(j.at("inner_normal"), "shape.inner_normal"),
                j.at("offset").get<double>(), window));
        }
        if (kind == "cube") {
            reject_unknown_keys(j, {"shape", "face_normal", "corner", "side"}, "shape");
            return std::make_shared<FinitePerimeterSet>(FinitePerimeterSet::oriented_cube(
                parse_vec3(j.at("face_normal"), "shape.face_normal"),
                parse_vec3(j.at("corner"), "shape.corner"), j.at("side").get<double>()));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("shape: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("shape: ") + e.what());
    }
    throw ConfigError("shape: unknown kind \"" + kind + "\"");
}

GoldenScenario scenario_from_specs(const json& field_spec,
                                   std::shared_ptr<const FinitePerimeterSet> set);

GoldenScenario parse_inline_scenario(const json& j) {
    reject_unknown_keys(j, {"field", "shape"}, "scenario");
    if (!j.contains("field") || !j.contains("shape")) {
        throw ConfigError("inline scenario needs both \"field\" and \"shape\"");
    }
    return scenario_from_specs(j.at("field"), parse_shape(j.at("shape")));
}

GoldenScenario scenario_from_specs(const json& field_spec,
                                   std::shared_ptr<const FinitePerimeterSet> set) {
    if (!field_spec.is_object()) throw ConfigError("field: expected an object");
    const std::string kind = field_spec.value("field", "");
    try {
        if (kind == "half_space_jump") {
            reject_unknown_keys(field_spec, {"field", "F1", "F2"}, "field");
            if (set->kind() != FinitePerimeterSet::Kind::HalfSpace) {
                throw ConfigError("half_space_jump requires a half_space shape");
            }
            const Vec3 F1 = parse_vec3(field_spec.at("F1"), "field.F1");
            const Vec3 F2 = parse_vec3(field_spec.at("F2"), "field.F2");
            GoldenScenario s = golden_half_space(F1, F2);
            // Rebuild on the user's plane and window.
            const Vec3 nu = set->half_space_normal();
            s.set = set;
            s.field = VectorField::piecewise(set, VectorField::constant(F1),
                                             VectorField::constant(F2));
            s.curl = CurlMeasure::zero().add_surface_part(
                set, [F1, F2, nu](const Vec3&) { return cross(F2 - F1, nu); });
            s.interior_trace = [F1, nu](const Vec3&) { return cross(F1, nu); };
            s.exterior_trace = [F2, nu](const Vec3&) { return cross(F2, nu); };
            return s;
        }
        if (kind == "ball_rotation") {
            reject_unknown_keys(field_spec, {"field"}, "field");
            const GoldenScenario reference = golden_ball();
            if (!set->same_shape(*reference.set)) {
                throw ConfigError(
                    "ball_rotation has a closed-form curl only on the unit ball at the origin");
            }
            return reference;
        }
        if (kind == "cube_sin") {
            reject_unknown_keys(field_spec, {"field"}, "field");
            const GoldenScenario reference = golden_cube();
            if (set->kind() != FinitePerimeterSet::Kind::Cube ||
                std::abs(dot(set->cube_corner(), Vec3{1, 1, 1})) > 1e-12 ||
                norm(set->cube_rotation().column(2) - reference.set->cube_rotation().column(2)) >
                    1e-12) {
                throw ConfigError(
                    "cube_sin requires a cube with one face in the plane x+y+z=0");
            }
            if (std::abs(set->cube_side() - 1.0) > 1e-12) {
                throw ConfigError("cube_sin is defined for the unit cube");
            }
            return reference;
        }
        if (kind == "gradient_perturbed") {
            reject_unknown_keys(field_spec, {"field", "base", "f", "coeffs"}, "field");
            if (field_spec.value("f", "") != "linear") {
                throw ConfigError("gradient_perturbed: only \"linear\" potentials are supported");
            }
            const Vec3 coeffs = parse_vec3(field_spec.at("coeffs"), "field.coeffs");
            const GoldenScenario base = scenario_from_specs(field_spec.at("base"), set);
            return perturb_with_gradient(base, GradientField::linear(coeffs));
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field: ") + e.what());
    }
    throw ConfigError("field: unknown kind \"" + kind + "\"");
}

}  // namespace

std::vector<ScenarioInfo> builtin_scenarios() {
    return {
        {"half_space",
         "piecewise-constant field jumping across the plane z = 0; curl concentrates on the "
         "plane with density (F2 - F1) x nu"},
        {"ball",
         "rotation about the z-axis, doubled outside the unit ball; spherical sheet density "
         "(-xz, -yz, 1 - z^2) plus constant volume curl on each side"},
        {"cube",
         "bounded field sin(1/(x+y+z))(1,1,1) with vanishing curl measure; unit cube with one "
         "face in the singular plane x + y + z = 0"},
        {"cube_gradient",
         "the cube field plus grad(x): same curl measure, traces shifted by (1,0,0) x nu"},
    };
}

GoldenScenario make_builtin_scenario(const std::string& name) {
    if (name == "half_space") return golden_half_space({1, 0, 0}, {0, 1, 0});
    if (name == "ball") return golden_ball();
    if (name == "cube") return golden_cube();
    if (name == "cube_gradient") {
        return perturb_with_gradient(golden_cube(), GradientField::linear({1, 0, 0}));
    }
    throw ConfigError("unknown builtin scenario \"" + name + "\"");
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(doc, {"scenario", "seed", "points", "trace", "quadrature", "mollify"},
                        "config");
    if (!doc.contains("seed") || !doc.at("seed").is_number_integer()) {
        throw ConfigError("config: integer \"seed\" is required");
    }

    RunConfig out{make_builtin_scenario("ball"), VerifyConfig{}};
    if (!doc.contains("scenario")) throw ConfigError("config: \"scenario\" is required");
    const json& sc = doc.at("scenario");
    if (sc.is_string()) {
        out.scenario = make_builtin_scenario(sc.get<std::string>());
    } else if (sc.is_object()) {
        out.scenario = parse_inline_scenario(sc);
    } else {
        throw ConfigError("config: \"scenario\" must be a name or an object");
    }

    VerifyConfig& v = out.verify;
    v.seed = doc.at("seed").get<std::uint64_t>();
    v.points = doc.value("points", std::size_t{100});
    if (v.points < 1) throw ConfigError("config: \"points\" must be >= 1");

    try {
        if (doc.contains("trace")) {
            const json& t = doc.at("trace");
            reject_unknown_keys(t, {"r0", "levels", "samples_per_radius", "seed"},
                                "config.trace");
            v.trace.r0 = t.value("r0", 0.0);
            v.trace.levels = t.value("levels", 6);
            v.trace.samples_per_radius = t.value("samples_per_radius", std::size_t{200000});
            v.trace.seed = t.value("seed", std::uint64_t{0});
            if (v.trace.levels < 3) throw ConfigError("config.trace: need levels >= 3");
        }
        if (doc.contains("quadrature")) {
            const json& q = doc.at("quadrature");
            reject_unknown_keys(q, {"volume_samples", "surface_samples", "seed"},
                                "config.quadrature");
            v.quad.volume_samples = q.value("volume_samples", std::size_t{200000});
            v.quad.surface_samples = q.value("surface_samples", std::size_t{2000});
            v.quad.seed = q.value("seed", std::uint64_t{0});
        }
        if (doc.contains("mollify")) {
            const json& m = doc.at("mollify");
            reject_unknown_keys(m, {"eps0", "levels", "samples", "seed"}, "config.mollify");
            v.mollify.eps0 = m.value("eps0", 0.0);
            v.mollify.levels = m.value("levels", 7);
            v.mollify.samples = m.value("samples", std::size_t{50000});
            v.mollify.seed = m.value("seed", std::uint64_t{0});
            if (v.mollify.levels < 3) throw ConfigError("config.mollify: need levels >= 3");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return out;
}

std::string run_trace_csv(const RunConfig& config) {
    const VerifyConfig cfg = config.verify.resolved(config.scenario);
    return trace_table_csv(trace_table(config.scenario, cfg.points, cfg.trace));
}

CheckOutput run_check(const RunConfig& config) {
    const VerifyConfig cfg = config.verify.resolved(config.scenario);
    const ScenarioReport report = run_invariant_suite(config.scenario, cfg);
    CheckOutput out;
    out.trace_csv = trace_table_csv(report.trace_rows);
    out.report_json = report_json(report, "trace_table.csv");
    out.all_pass = report.all_pass();
    for (const CheckRecord& c : report.checks) {
        std::fprintf(stderr, "[%s] %-38s residual=%.6g tol=%.6g (%.0f ms)\n",
                     c.pass ? "pass" : "FAIL", c.name.c_str(), c.residual, c.tolerance,
                     c.runtime_ms);
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"tangential-trace scenario runner"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "list builtin scenarios");
    bool list_json = false;
    list_cmd->add_flag("--json", list_json, "emit a JSON array");

    std::string config_path, out_dir;
    auto* trace_cmd = app.add_subcommand("trace", "write the per-point trace table");
    trace_cmd->add_option("--config", config_path, "JSON run configuration")->required();
    trace_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* check_cmd = app.add_subcommand("check", "run the verification suite");
    check_cmd->add_option("--config", config_path, "JSON run configuration")->required();
    check_cmd->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) {
            if (list_json) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const ScenarioInfo& s : builtin_scenarios()) {
                    arr.push_back({{"name", s.name}, {"anchor", s.anchor}});
                }
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const ScenarioInfo& s : builtin_scenarios()) {
                    std::cout << s.name << " — " << s.anchor << "\n";
                }
            }
            return 0;
        }

        const RunConfig config = parse_run_config(read_file(config_path));
        std::filesystem::create_directories(out_dir);
        if (trace_cmd->parsed()) {
            write_file_atomic(out_dir + "/trace_table.csv", run_trace_csv(config));
            return 0;
        }
        const CheckOutput result = run_check(config);
        write_file_atomic(out_dir + "/trace_table.csv", result.trace_csv);
        write_file_atomic(out_dir + "/report.json", result.report_json);
        return result.all_pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace curltrace
