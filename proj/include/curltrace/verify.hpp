#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "curltrace/measure.hpp"
#include "curltrace/mollify.hpp"
#include "curltrace/scenarios.hpp"
#include "curltrace/trace.hpp"

namespace curltrace {

/// One verification record: what was checked, the identity it pins (as an
/// explicit formula string), the measured residual and its tolerance.
struct CheckRecord {
    std::string name;
    std::string anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<CheckRecord> checks;
    std::vector<TraceRow> trace_rows;

    bool all_pass() const;
};

/// Budgets and seeds for a full scenario verification run. Non-positive r0
/// or eps0 are resolved from the scenario's feature size.
struct VerifyConfig {
    std::size_t points = 100;
    TraceConfig trace{0.0, 6, 200000, 0};
    QuadConfig quad{200000, 2000, 0};
    MollifyConfig mollify{0.0, 7, 50000, 0};
    std::uint64_t seed = 42;

    /// Copy with defaults and per-section seeds filled in for a scenario.
    VerifyConfig resolved(const GoldenScenario& scenario) const;
};

/// Where a verification obtains boundary traces from.
enum class TraceSource { Auto, ClosedFormOnly, NumericOnly };

/// Residual of the Gauss-Green identity on one side, against one test
/// function: boundary integral of phi times the trace vs. the measure
/// pairing minus the volume term. Numeric traces (when no closed form is
/// available) are extrapolated at a reduced set of surface points.
double gauss_green_residual(const GoldenScenario& scenario, SideSelector side,
                            const TestFunction& phi, const QuadConfig& quad,
                            TraceSource source = TraceSource::Auto,
                            const std::optional<TraceConfig>& trace_cfg = std::nullopt);

/// |integral of Curl F over E - boundary integral of F x nu| for a smooth
/// field with closed-form curl over a bounded shape.
double lipschitz_global_check(const VectorField& field, const FinitePerimeterSet& set,
                              const Box& box, const QuadConfig& quad);

/// Interior and exterior traces at n boundary points with their tangential
/// defects.
struct TangentialSweep {
    std::vector<TraceRow> rows;
    double max_defect = 0.0;
    double mean_defect = 0.0;
};

TangentialSweep tangential_sweep(const GoldenScenario& scenario, std::size_t n_points,
                                 const TraceConfig& cfg);

/// Weighted sum of the trace over boundary samples. Closed-form trace by
/// default; the numeric variant extrapolates at each sample point.
enum class TraceSide { Interior, Exterior };
Vec3 surface_integral_of_trace(const GoldenScenario& scenario, TraceSide which,
                               std::size_t n_samples, const QuadConfig& quad,
                               TraceSource source = TraceSource::Auto,
                               const std::optional<TraceConfig>& trace_cfg = std::nullopt);

/// Executes every module invariant applicable to the scenario plus the
/// Gauss-Green, product-rule, compact-support and global checks, in a fixed
/// declared order. Deterministic given (scenario, config, seed).
ScenarioReport run_invariant_suite(const GoldenScenario& scenario, const VerifyConfig& cfg);

/// Five smooth bumps seeded on/near the reduced boundary plus one plateau
/// covering the set.
std::vector<TestFunction> default_test_family(const GoldenScenario& scenario,
                                              std::uint64_t seed);

/// JSON rendering of a report (stable key order; timings are reported on
/// the console, not in the document, so identical runs serialize
/// identically).
std::string report_json(const ScenarioReport& report, const std::string& trace_csv_path);

}  // namespace curltrace
