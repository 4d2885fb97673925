// Command line front end: verification, generation, independence checks and
// geodesic flow for quadratically-integrable systems.

#include "stackel/errors.hpp"
#include "stackel/frame_diag.hpp"
#include "stackel/frame_lab.hpp"
#include "stackel/geodesic_flow.hpp"
#include "stackel/report.hpp"
#include "stackel/stackel.hpp"
#include "stackel/system_file.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace stk;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

struct CommonOptions {
    std::string file;
    int samples = 16;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string out;
    std::string backend; // empty = take the file's tag
};

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

SystemDescription load_description(const CommonOptions& options, std::string& bytes) {
    if (options.samples < 0) throw SchemaError("--samples must be non-negative");
    bytes = read_file_bytes(options.file);
    SystemDescription description = parse_system_description(bytes);
    if (options.backend == "exact")
        description.backend = Backend::Exact;
    else if (options.backend == "numeric")
        description.backend = Backend::Numeric;
    else if (!options.backend.empty())
        throw SchemaError("--backend must be exact or numeric");
    return description;
}

void emit_report(const Report& report, const std::string& out_path) {
    std::string json = report.to_json();
    std::cout << json;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw SchemaError("cannot write report to " + out_path);
        out << json;
    }
}

// Pole-guarded rational sample points: every matrix entry of the system must
// evaluate, including the lowered metric (whose denominators carry det g).
std::vector<Eigen::VectorXd> sample_points(const BuiltSystem& system, int count,
                                           std::uint64_t seed) {
    std::vector<ScalarField> guards;
    const int n = system.metric.dimension();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            guards.push_back(system.metric.inverse_components().at(i, j));
            guards.push_back(system.metric.lowered().at(i, j));
            for (const QuadraticIntegral& k : system.integrals)
                guards.push_back(k.components.at(i, j));
        }
    }
    SeededRng rng(derive_seed(seed, 0x90123ULL));
    std::vector<Eigen::VectorXd> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::vector<Rational> point = sample_rational_point(guards, n, rng);
        Eigen::VectorXd x(n);
        for (int k = 0; k < n; ++k) x[k] = to_double(point[static_cast<std::size_t>(k)]);
        points.push_back(std::move(x));
    }
    return points;
}

CombinationSpec seeded_combination(int count, std::uint64_t seed) {
    SeededRng rng(derive_seed(seed, 0x1a3b0ULL));
    std::vector<Rational> coefficients;
    coefficients.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) coefficients.push_back(rng.rational(8, 4, /*nonzero=*/true));
    return CombinationSpec(std::move(coefficients));
}

bool matrices_diagonal(const BuiltSystem& system) {
    const int n = system.metric.dimension();
    for (const QuadraticIntegral& k : system.integrals)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && !k.components.at(i, j).is_identically_zero()) return false;
    return true;
}

std::string format_residual(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

// Killing residuals, pairwise involution and the pointwise frame checks.
int cmd_verify(const CommonOptions& options) {
    std::string bytes;
    SystemDescription description = load_description(options, bytes);
    BuiltSystem system = build_system(description);
    const int n = system.metric.dimension();

    Report report;
    report.command = "verify";
    report.input_digest = fnv1a_hex(bytes);
    report.seed = options.seed;
    report.tol = options.tol;
    report.samples = options.samples;

    bool exact = system.metric.backend() == Backend::Exact;
    auto zero_pass = [&](const ZeroReport& z) { return exact ? z.zero : z.residual < options.tol; };

    for (const QuadraticIntegral& k : system.integrals) {
        ZeroReport z =
            killing_residual(system.metric, k).zero_report(derive_seed(options.seed, 0x417ULL));
        report.add("killing:" + k.label, zero_pass(z), z.residual);
    }

    std::vector<MomentaPolynomial> polys;
    polys.reserve(system.integrals.size());
    for (const QuadraticIntegral& k : system.integrals) polys.push_back(quadratic_to_poly(k));
    for (std::size_t a = 0; a < polys.size(); ++a) {
        for (std::size_t b = a + 1; b < polys.size(); ++b) {
            ZeroReport z =
                poisson_bracket(polys[a], polys[b]).zero_report(derive_seed(options.seed, 0x417ULL));
            report.add("involution:" + system.integrals[a].label + "," + system.integrals[b].label,
                       zero_pass(z), z.residual);
        }
    }

    std::vector<Eigen::VectorXd> points = sample_points(system, options.samples, options.seed);
    CombinationSpec lambda =
        n > 1 ? seeded_combination(n - 1, options.seed) : CombinationSpec(std::vector<Rational>{});
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::VectorXd& x = points[i];
        std::string tag = "point" + std::to_string(i);
        Eigen::MatrixXd g_at = evaluate_to_matrix(system.metric.inverse_components(), x);
        std::vector<Eigen::MatrixXd> ks_at;
        for (const QuadraticIntegral& k : system.integrals)
            ks_at.push_back(evaluate_to_matrix(k.components, x));

        DiagOutcome outcome = simultaneous_diagonalize(
            x, g_at, ks_at, options.tol, derive_seed(options.seed, 0xd1a60000ULL + i));
        report.add("diagonalize:" + tag, outcome.ok(), 0.0,
                   outcome.ok() ? ""
                                : std::string(diag_status_name(outcome.status)) + ": " +
                                      outcome.detail);
        if (!outcome.ok()) continue;

        int rank = restriction_rank(*outcome.frame);
        report.add("restriction-rank:" + tag, rank == n, static_cast<double>(rank),
                   "rank " + std::to_string(rank) + " of " + std::to_string(n));

        if (n > 1) {
            QuadraticIntegral combo = generic_combination(
                std::span<const QuadraticIntegral>(system.integrals).subspan(1), lambda);
            EigenvalueGapReport gaps = distinct_eigenvalue_check(
                g_at, evaluate_to_matrix(combo.components, x), options.tol);
            report.add("distinct-eigenvalues:" + tag, gaps.distinct, gaps.min_gap,
                       gaps.reason.empty() ? "min gap " + format_residual(gaps.min_gap)
                                           : gaps.reason);
        }
    }

    emit_report(report, options.out);
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

// Builds the system S I = P and writes it as a system file.
int cmd_generate(const CommonOptions& options, const std::string& system_out, int hamiltonian_row) {
    std::string bytes;
    SystemDescription description = load_description(options, bytes);
    StackelMatrix s = build_stackel_matrix(description);

    StackelDiagnostics diagnostics = validate_stackel(s, hamiltonian_row - 1);
    if (!diagnostics.valid() || !diagnostics.first_row_zeros.empty()) {
        // A well-formed file whose matrix fails validation is a check
        // failure, not an input error.
        Report report;
        report.command = "generate";
        report.input_digest = fnv1a_hex(bytes);
        report.seed = options.seed;
        report.tol = options.tol;
        report.samples = 0;
        report.add("validate", false, 0.0, diagnostics.summary());
        emit_report(report, options.out);
        return kExitCheckFailure;
    }

    StackelSystem system = stackel_integrals(s, hamiltonian_row - 1);
    std::string system_json = system_description_to_json(describe_system(system));
    if (system_out.empty()) {
        std::cout << system_json;
    } else {
        std::ofstream out(system_out, std::ios::binary);
        if (!out) throw SchemaError("cannot write system to " + system_out);
        out << system_json;
    }

    Report report;
    report.command = "generate";
    report.input_digest = fnv1a_hex(bytes);
    report.seed = options.seed;
    report.tol = options.tol;
    report.samples = 0;
    report.add("validate", true, 0.0, diagnostics.summary());

    bool exact = system.metric.backend() == Backend::Exact;
    for (const QuadraticIntegral& k : system.integrals) {
        ZeroReport z = killing_residual(system.metric, k).zero_report();
        report.add("killing:" + k.label, exact ? z.zero : z.residual < options.tol, z.residual);
    }
    std::vector<MomentaPolynomial> polys = system.integral_polys();
    auto matrix = involution_matrix(polys);
    bool all_involutive = true;
    double worst = 0.0;
    for (const auto& row : matrix) {
        for (const ZeroReport& entry : row) {
            all_involutive = all_involutive && (exact ? entry.zero : entry.residual < options.tol);
            worst = std::max(worst, entry.residual);
        }
    }
    report.add("involution", all_involutive, worst);

    std::ostream& summary = system_out.empty() ? std::cerr : std::cout;
    summary << report.to_json();
    if (!options.out.empty()) {
        std::ofstream out(options.out, std::ios::binary);
        if (!out) throw SchemaError("cannot write report to " + options.out);
        out << report.to_json();
    }
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

// Pointwise linear-independence witness plus the solution-space bound.
int cmd_theorem1(const CommonOptions& options) {
    std::string bytes;
    SystemDescription description = load_description(options, bytes);
    BuiltSystem system = build_system(description);
    const int n = system.metric.dimension();

    Report report;
    report.command = "theorem1";
    report.input_digest = fnv1a_hex(bytes);
    report.seed = options.seed;
    report.tol = options.tol;
    report.samples = options.samples;

    std::vector<Eigen::VectorXd> points = sample_points(system, options.samples, options.seed);
    CombinationSpec lambda =
        n > 1 ? seeded_combination(n - 1, options.seed) : CombinationSpec(std::vector<Rational>{});

    int min_rank = n;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Eigen::VectorXd& x = points[i];
        std::string tag = "point" + std::to_string(i);
        Eigen::MatrixXd g_at = evaluate_to_matrix(system.metric.inverse_components(), x);
        std::vector<Eigen::MatrixXd> ks_at;
        for (const QuadraticIntegral& k : system.integrals)
            ks_at.push_back(evaluate_to_matrix(k.components, x));

        DiagOutcome outcome = simultaneous_diagonalize(
            x, g_at, ks_at, options.tol, derive_seed(options.seed, 0xd1a60000ULL + i));
        if (!outcome.ok()) {
            report.add("restriction-rank:" + tag, false, 0.0,
                       std::string(diag_status_name(outcome.status)) + ": " + outcome.detail);
            min_rank = 0;
            continue;
        }
        int rank = restriction_rank(*outcome.frame);
        min_rank = std::min(min_rank, rank);
        report.add("restriction-rank:" + tag, rank == n, static_cast<double>(rank),
                   "rank " + std::to_string(rank) + " of " + std::to_string(n));
        if (n > 1) {
            QuadraticIntegral combo = generic_combination(
                std::span<const QuadraticIntegral>(system.integrals).subspan(1), lambda);
            EigenvalueGapReport gaps = distinct_eigenvalue_check(
                g_at, evaluate_to_matrix(combo.components, x), options.tol);
            min_gap = std::min(min_gap, gaps.min_gap);
            report.add("distinct-eigenvalues:" + tag, gaps.distinct, gaps.min_gap,
                       gaps.reason.empty() ? "min gap " + format_residual(gaps.min_gap)
                                           : gaps.reason);
        }
    }

    if (matrices_diagonal(system) && n > 1) {
        // The frame rows carry sqrt(sign * g^{jj}), so the solution-space
        // witness runs inside one signature chamber: keep the largest group
        // of sample points sharing the metric diagonal's signs.
        auto signature = [&](const Eigen::VectorXd& x) {
            std::vector<double> p(x.data(), x.data() + x.size());
            std::vector<int> signs;
            for (int j = 0; j < n; ++j)
                signs.push_back(system.metric.inverse_components().at(j, j).evaluate(p) > 0 ? 1
                                                                                            : -1);
            return signs;
        };
        std::vector<std::vector<Eigen::VectorXd>> chambers;
        std::vector<std::vector<int>> chamber_signs;
        for (const Eigen::VectorXd& x : points) {
            std::vector<int> signs = signature(x);
            bool placed = false;
            for (std::size_t c = 0; c < chambers.size(); ++c) {
                if (chamber_signs[c] == signs) {
                    chambers[c].push_back(x);
                    placed = true;
                    break;
                }
            }
            if (!placed) {
                chambers.push_back({x});
                chamber_signs.push_back(std::move(signs));
            }
        }
        std::size_t best = 0;
        for (std::size_t c = 1; c < chambers.size(); ++c)
            if (chambers[c].size() > chambers[best].size()) best = c;
        const std::vector<Eigen::VectorXd>& used = chambers[best];

        FrameField frame = coordinate_frame(
            system.metric, std::span<const QuadraticIntegral>(system.integrals).subspan(1), lambda,
            used.front(), options.tol);
        SolutionSpaceReport space =
            solution_space_bound(system.metric, system.integrals, frame, used, options.tol);
        std::ostringstream detail;
        detail << "bound m = " << space.bound << ", witness rank = " << space.witness_rank
               << ", n = " << n << " (" << used.size() << " of " << points.size()
               << " points in one signature chamber)";
        if (!space.detail.empty()) detail << "; " << space.detail;
        report.add("solution-space", !space.counterexample && space.n_equals_m,
                   static_cast<double>(space.witness_rank), detail.str());
    } else if (n > 1) {
        report.add("solution-space", true, 0.0,
                   "skipped: system is not diagonal in chart coordinates (coordinate frames only)");
    }

    report.add("summary", min_rank == n, static_cast<double>(min_rank),
               "min rank " + std::to_string(min_rank) + ", min eigen gap " +
                   format_residual(min_gap));

    emit_report(report, options.out);
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

// Integrates the geodesic flow and reports integral drift.
int cmd_flow(const CommonOptions& options, const std::string& init_text, double dt, long steps,
             const std::string& csv_path) {
    std::string bytes;
    SystemDescription description = load_description(options, bytes);
    BuiltSystem system = build_system(description);
    const int n = system.metric.dimension();

    std::vector<double> init_values;
    {
        std::istringstream in(init_text);
        std::string token;
        while (std::getline(in, token, ',')) {
            try {
                std::size_t used = 0;
                init_values.push_back(std::stod(token, &used));
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw SchemaError("cannot parse --init value '" + token + "'");
            }
        }
    }
    if (init_values.size() != static_cast<std::size_t>(2 * n))
        throw SchemaError("--init must list 2n = " + std::to_string(2 * n) + " numbers");
    PhaseState start;
    start.position.assign(init_values.begin(), init_values.begin() + n);
    start.momentum.assign(init_values.begin() + n, init_values.end());

    Report report;
    report.command = "flow";
    report.input_digest = fnv1a_hex(bytes);
    report.seed = options.seed;
    report.tol = options.tol;
    report.samples = 0;

    std::vector<Monitor> monitors;
    for (const QuadraticIntegral& k : system.integrals)
        monitors.push_back({k.label, quadratic_to_poly(k)});
    MomentaPolynomial hamiltonian =
        quadratic_to_poly(system.integrals.front()).scaled(rational(1, 2));
    HamiltonianFlow flow(hamiltonian);

    try {
        auto [trajectory, drift] = flow.integrate(start, dt, steps, monitors);
        for (const DriftEntry& entry : drift.entries) {
            report.add("drift:" + entry.label, true, entry.relative_drift,
                       "initial " + format_residual(entry.initial_value) + ", max |dI| " +
                           format_residual(entry.max_abs_drift));
        }
        if (!csv_path.empty()) {
            std::ofstream csv(csv_path, std::ios::binary);
            if (!csv) throw SchemaError("cannot write trajectory to " + csv_path);
            write_trajectory_csv(csv, trajectory, monitors);
        }
    } catch (const FlowError& e) {
        report.add("integration", false, 0.0, e.what());
        emit_report(report, options.out);
        return kExitCheckFailure;
    }

    emit_report(report, options.out);
    return report.all_pass() ? kExitOk : kExitCheckFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stackel-separable integrable geodesic flows: construction and verification"};
    app.require_subcommand(1);

    CommonOptions options;

    auto add_common = [&](CLI::App* cmd, bool with_samples = true) {
        cmd->add_option("file", options.file, "system description (JSON)")->required();
        if (with_samples) cmd->add_option("--samples", options.samples, "number of sample points");
        cmd->add_option("--seed", options.seed, "seed for all randomized checks");
        cmd->add_option("--tol", options.tol, "numeric tolerance");
        cmd->add_option("--out", options.out, "write the report JSON here as well");
        cmd->add_option("--backend", options.backend,
                        "override the file's backend (exact|numeric)");
    };

    CLI::App* verify = app.add_subcommand("verify", "check the quadratic-integrability conditions");
    add_common(verify);

    CLI::App* generate = app.add_subcommand("generate", "build a system from a Stackel matrix");
    std::string system_out;
    int hamiltonian_row = 1;
    add_common(generate, /*with_samples=*/false);
    generate->add_option("--system-out", system_out, "write the generated system file here");
    generate->add_option("--hamiltonian-row", hamiltonian_row,
                         "row of S^-1 used as the inverse metric (1-based)");

    CLI::App* theorem1 = app.add_subcommand(
        "theorem1", "linear independence of integral restrictions at sample points");
    add_common(theorem1);

    CLI::App* flowcmd =
        app.add_subcommand("flow", "integrate the geodesic flow, monitor integrals");
    std::string init_text;
    double dt = 1e-3;
    long steps = 1000;
    std::string csv_path;
    add_common(flowcmd, /*with_samples=*/false);
    flowcmd->add_option("--init", init_text, "initial state x1..xn,p1..pn")->required();
    flowcmd->add_option("--dt", dt, "step size");
    flowcmd->add_option("--steps", steps, "number of steps");
    flowcmd->add_option("--csv", csv_path, "write the trajectory CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(verify)) return cmd_verify(options);
        if (app.got_subcommand(generate)) return cmd_generate(options, system_out, hamiltonian_row);
        if (app.got_subcommand(theorem1)) return cmd_theorem1(options);
        if (app.got_subcommand(flowcmd)) return cmd_flow(options, init_text, dt, steps, csv_path);
    } catch (const SchemaError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "check failure: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return kExitInputError;
}
