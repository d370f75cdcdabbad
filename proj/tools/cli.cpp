#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "ccfd/derivative.hpp"
#include "ccfd/errors.hpp"
#include "io.hpp"

namespace ccfd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* output_dir_env = "CCFD_OUTPUT_DIR";

std::string_view to_string(OutputFormat format)
{
    return format == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_format(std::string_view name)
{
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw UsageError("unknown format '" + std::string(name) + "'");
}

std::string_view to_string(ErrorNodes nodes)
{
    return nodes == ErrorNodes::interior ? "interior" : "all";
}

ErrorNodes parse_error_nodes(std::string_view name)
{
    if (name == "interior") return ErrorNodes::interior;
    if (name == "all") return ErrorNodes::all;
    throw UsageError("unknown error node set '" + std::string(name) + "'");
}

/// Library parse errors become usage errors at this layer.
template <class Fn>
auto as_usage(Fn&& fn)
{
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
}

std::vector<AxisFamily> parse_families(const std::vector<std::string>& names)
{
    std::vector<AxisFamily> out;
    for (const auto& n : names) out.push_back(as_usage([&] { return parse_axis_family(n); }));
    return out;
}

std::vector<Method> methods_of(MethodChoice choice)
{
    switch (choice) {
    case MethodChoice::fdm: return {Method::fdm};
    case MethodChoice::ccfdm: return {Method::ccfdm};
    case MethodChoice::both: break;
    }
    return {Method::fdm, Method::ccfdm};
}

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream f(path, mode);
    if (!f) throw io::IoError("cannot open " + path.string() + " for writing");
    return f;
}

void finish(std::ofstream& f, const fs::path& path)
{
    f.flush();
    if (!f) throw io::IoError("failed writing " + path.string());
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    auto f = open_output(path);
    body(f);
    finish(f, path);
}

std::string extension(OutputFormat format)
{
    return format == OutputFormat::csv ? ".csv" : ".json";
}

TensorGrid config_grid(const RunConfig& config)
{
    return build_grid(study_axes(problem_dimension(config.problem), config.families, config.gamma,
                                 config.size));
}

int run_solve(const RunConfig& config, const fs::path& dir, std::ostream& out)
{
    const auto problem = problem_catalog(config.problem);
    const auto grid = config_grid(config);
    const auto solver = solver_config(config);
    int status = exit_ok;
    for (Method method : methods_of(config.method)) {
        const auto report = solve(method, problem, grid, solver);
        const auto errors = compute_errors(report.solution, problem, grid, config.error_nodes);
        char line[256];
        std::snprintf(line, sizeof line,
                      "%-6s size %zu: e_max %s  e_ave %s  sweeps %zu  passes %zu  seconds %.3f%s\n",
                      std::string(ccfd::to_string(method)).c_str(), config.size,
                      io::sci(errors.e_max).c_str(), io::sci(errors.e_ave).c_str(),
                      report.inner_iterations, report.correction_passes_used, report.wall_time,
                      report.converged ? "" : "  (not converged)");
        out << line;
        if (config.verbose && !report.residual_history.empty()) {
            out << "  final residual " << io::sci(report.residual_history.back()) << '\n';
            for (std::size_t k = 0; k < report.correction_changes.size(); ++k) {
                out << "  correction pass " << k + 1 << " change "
                    << io::sci(report.correction_changes[k]) << '\n';
            }
        }
        const std::string stem = "solution_" + std::string(ccfd::to_string(method));
        if (config.format == OutputFormat::csv) {
            write_text(dir / (stem + ".csv"), [&](std::ostream& f) {
                io::write_solution_csv(f, grid, report.solution, &problem);
            });
        } else {
            io::write_field_binary(dir / (stem + ".bin"), grid, report.solution);
        }
        const auto extents = grid.extents();
        const bool compact_ok = std::all_of(extents.begin(), extents.end(), [&](std::size_t n) {
            return n >= min_compact_nodes(config.closure);
        });
        if (config.dump_derivatives && compact_ok) {
            const StencilSet stencils(grid, config.closure);
            const auto high = field_second_derivatives(report.solution, grid, stencils, Scheme::high);
            const auto low = field_second_derivatives(report.solution, grid, stencils, Scheme::low);
            write_text(dir / ("derivatives_" + std::string(ccfd::to_string(method)) + ".csv"),
                       [&](std::ostream& f) { io::write_derivatives_csv(f, grid, high, low); });
        }
        if (!report.converged) status = exit_not_converged;
    }
    return status;
}

int run_study_command(const RunConfig& config, const fs::path& dir, std::ostream& out)
{
    int status = exit_ok;
    for (Method method : methods_of(config.method)) {
        StudySpec spec;
        spec.problem = config.problem;
        spec.method = method;
        spec.families = config.families;
        spec.gamma = config.gamma;
        spec.levels = config.levels;
        spec.solver = solver_config(config);
        spec.error_nodes = config.error_nodes;
        const auto result = run_study(spec);
        io::print_study_table(out, result);
        out << '\n';
        const auto path = dir / ("study_" + std::string(ccfd::to_string(method)) + extension(config.format));
        write_text(path, [&](std::ostream& f) {
            if (config.format == OutputFormat::csv) io::write_study_csv(f, result);
            else f << io::study_to_json(result).dump(2) << '\n';
        });
        if (!result.all_converged()) status = exit_not_converged;
    }
    return status;
}

int run_gamma_sweep(const RunConfig& config, const fs::path& dir, std::ostream& out)
{
    int status = exit_ok;
    for (Method method : methods_of(config.method)) {
        GammaSweepSpec spec;
        spec.problem = config.problem;
        spec.method = method;
        spec.family = config.families.front();
        spec.intervals = config.size;
        spec.gammas = config.gammas;
        spec.solver = solver_config(config);
        spec.error_nodes = config.error_nodes;
        const auto points = gamma_sweep(spec);
        out << "problem " << config.problem << ", " << ccfd::to_string(method) << ", "
            << ccfd::to_string(spec.family) << " " << config.size << '\n';
        out << "gamma      e_ave\n";
        for (const auto& p : points) {
            char line[96];
            std::snprintf(line, sizeof line, "%-10.4g %s%s\n", p.gamma,
                          p.failure ? "failed" : io::sci(p.e_ave).c_str(),
                          p.failure || p.converged ? "" : "  (not converged)");
            out << line;
            if (p.failure || !p.converged) status = exit_not_converged;
        }
        out << '\n';
        const auto path = dir / ("gamma_" + std::string(ccfd::to_string(method)) + extension(config.format));
        write_text(path, [&](std::ostream& f) {
            if (config.format == OutputFormat::csv) io::write_gamma_csv(f, points);
            else f << io::gamma_to_json(points).dump(2) << '\n';
        });
    }
    return status;
}

int run_dump_stencils(const RunConfig& config, const fs::path& dir, std::ostream& out)
{
    const auto grid = config_grid(config);
    const auto stencils = build_axis_stencils(grid.axis(config.axis), config.closure);
    std::ostringstream csv;
    io::write_stencils_csv(csv, stencils);
    out << csv.str();
    write_text(dir / ("stencils_axis" + std::to_string(config.axis) + ".csv"),
               [&](std::ostream& f) { f << csv.str(); });
    return exit_ok;
}

int run_dump_grid(const RunConfig& config, const fs::path& dir, std::ostream& out)
{
    const auto grid = config_grid(config);
    std::ostringstream csv;
    io::write_axes_csv(csv, grid);
    out << csv.str();
    write_text(dir / "grid.csv", [&](std::ostream& f) { f << csv.str(); });
    return exit_ok;
}

}  // namespace

std::string_view to_string(Subcommand subcommand)
{
    switch (subcommand) {
    case Subcommand::solve: return "solve";
    case Subcommand::study: return "study";
    case Subcommand::gamma_sweep: return "gamma-sweep";
    case Subcommand::dump_stencils: return "dump-stencils";
    case Subcommand::dump_grid: return "dump-grid";
    }
    return "unknown";
}

Subcommand parse_subcommand(std::string_view name)
{
    for (auto s : {Subcommand::solve, Subcommand::study, Subcommand::gamma_sweep,
                   Subcommand::dump_stencils, Subcommand::dump_grid}) {
        if (name == to_string(s)) return s;
    }
    throw UsageError("unknown subcommand '" + std::string(name) + "'");
}

std::string_view to_string(MethodChoice method)
{
    switch (method) {
    case MethodChoice::fdm: return "fdm";
    case MethodChoice::ccfdm: return "ccfdm";
    case MethodChoice::both: return "both";
    }
    return "unknown";
}

MethodChoice parse_method_choice(std::string_view name)
{
    if (name == "fdm") return MethodChoice::fdm;
    if (name == "ccfdm") return MethodChoice::ccfdm;
    if (name == "both") return MethodChoice::both;
    throw UsageError("unknown method '" + std::string(name) + "'");
}

json to_json(const RunConfig& c)
{
    std::vector<std::string> families;
    for (auto f : c.families) families.emplace_back(ccfd::to_string(f));
    return {
        {"subcommand", to_string(c.subcommand)},
        {"problem", c.problem},
        {"method", to_string(c.method)},
        {"families", families},
        {"gamma", c.gamma},
        {"size", c.size},
        {"levels", c.levels},
        {"gammas", c.gammas},
        {"axis", c.axis},
        {"residual_tolerance", c.residual_tolerance},
        {"max_sweeps", c.max_sweeps},
        {"residual", ccfd::to_string(c.residual)},
        {"correction", ccfd::to_string(c.correction)},
        {"max_correction_passes", c.max_correction_passes},
        {"correction_tolerance", c.correction_tolerance},
        {"closure", ccfd::to_string(c.closure)},
        {"error_nodes", to_string(c.error_nodes)},
        {"output_dir", c.output_dir},
        {"format", to_string(c.format)},
        {"verbose", c.verbose},
        {"dump_derivatives", c.dump_derivatives},
    };
}

RunConfig merge_json(RunConfig c, const json& j)
{
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "subcommand") c.subcommand = parse_subcommand(v.get<std::string>());
            else if (key == "problem") c.problem = v.get<int>();
            else if (key == "method") c.method = parse_method_choice(v.get<std::string>());
            else if (key == "families") c.families = parse_families(v.get<std::vector<std::string>>());
            else if (key == "gamma") c.gamma = v.get<double>();
            else if (key == "size") c.size = v.get<std::size_t>();
            else if (key == "levels") c.levels = v.get<std::vector<std::size_t>>();
            else if (key == "gammas") c.gammas = v.get<std::vector<double>>();
            else if (key == "axis") c.axis = v.get<std::size_t>();
            else if (key == "residual_tolerance") c.residual_tolerance = v.get<double>();
            else if (key == "max_sweeps") c.max_sweeps = v.get<std::size_t>();
            else if (key == "residual") c.residual = as_usage([&] { return parse_residual_reading(v.get<std::string>()); });
            else if (key == "correction") c.correction = as_usage([&] { return parse_correction_mode(v.get<std::string>()); });
            else if (key == "max_correction_passes") c.max_correction_passes = v.get<std::size_t>();
            else if (key == "correction_tolerance") c.correction_tolerance = v.get<double>();
            else if (key == "closure") c.closure = as_usage([&] { return parse_boundary_closure(v.get<std::string>()); });
            else if (key == "error_nodes") c.error_nodes = parse_error_nodes(v.get<std::string>());
            else if (key == "output_dir") c.output_dir = v.get<std::string>();
            else if (key == "format") c.format = parse_format(v.get<std::string>());
            else if (key == "verbose") c.verbose = v.get<bool>();
            else if (key == "dump_derivatives") c.dump_derivatives = v.get<bool>();
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    return c;
}

void validate(const RunConfig& c)
{
    if (c.problem < 1 || c.problem > 4) {
        throw UsageError("problem must be 1..4, got " + std::to_string(c.problem));
    }
    const std::size_t dim = problem_dimension(c.problem);
    if (c.families.size() != 1 && c.families.size() != dim) {
        throw UsageError("give 1 or " + std::to_string(dim) + " grid families");
    }
    if (!(c.gamma > 0.0)) throw UsageError("gamma must be positive");
    const std::size_t min_size = c.method == MethodChoice::fdm ? 2 : min_compact_nodes(c.closure) - 1;
    if (c.size < min_size) throw UsageError("size must be at least " + std::to_string(min_size));
    if (c.levels.empty()) throw UsageError("levels must not be empty");
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        if (c.levels[i] < min_size) throw UsageError("every level needs at least " + std::to_string(min_size) + " intervals");
        if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw UsageError("levels must be strictly increasing");
    }
    if (c.gammas.empty()) throw UsageError("gammas must not be empty");
    for (std::size_t i = 0; i < c.gammas.size(); ++i) {
        if (!(c.gammas[i] > 0.0)) throw UsageError("gammas must be positive");
        if (i > 0 && !(c.gammas[i] > c.gammas[i - 1])) throw UsageError("gammas must be ascending");
    }
    if (c.subcommand == Subcommand::gamma_sweep && c.families.front() == AxisFamily::uniform) {
        throw UsageError("gamma-sweep needs a stretched family (--family sinh or tanh)");
    }
    if (c.axis >= dim) throw UsageError("axis must be below " + std::to_string(dim));
    if (c.output_dir.empty()) throw UsageError("output directory must not be empty");
    as_usage([&] {
        validate(solver_config(c));
        return 0;
    });
}

SolverConfig solver_config(const RunConfig& c)
{
    SolverConfig s;
    s.residual_tolerance = c.residual_tolerance;
    s.max_sweeps = c.max_sweeps;
    s.residual_reading = c.residual;
    s.correction_mode = c.correction;
    s.max_correction_passes = c.max_correction_passes;
    s.correction_tolerance = c.correction_tolerance;
    s.closure = c.closure;
    return s;
}

ParseResult parse_args(const std::vector<std::string>& args)
{
    CLI::App app{"Poisson solver: classical and compact-correction finite differences", "ccfd"};
    app.require_subcommand(1, 1);

    struct {
        int problem = 0;
        std::string method, residual, correction, closure, error_nodes, config, output_dir, format;
        std::vector<std::string> families;
        double gamma = 0, tolerance = 0, correction_tolerance = 0;
        std::size_t size = 0, axis = 0, max_sweeps = 0, max_correction_passes = 0;
        std::vector<std::size_t> levels;
        std::vector<double> gammas;
        bool verbose = false, dump_derivatives = false;
    } f;

    app.add_option("--problem", f.problem, "Problem id 1..4");
    app.add_option("--method", f.method, "fdm, ccfdm or both");
    app.add_option("--family,--grid", f.families, "Grid family per axis: uniform, sinh, tanh")->delimiter(',');
    app.add_option("--gamma", f.gamma, "Stretch parameter");
    app.add_option("--size", f.size, "Intervals per axis")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
    app.add_option("--levels", f.levels, "Comma separated intervals per level")->delimiter(',');
    app.add_option("--gammas", f.gammas, "Comma separated gamma values for gamma-sweep")->delimiter(',');
    app.add_option("--axis", f.axis, "Axis for dump-stencils");
    app.add_option("--tolerance", f.tolerance, "Mean scaled residual tolerance");
    app.add_option("--max-sweeps", f.max_sweeps, "Gauss-Seidel sweep limit");
    app.add_option("--residual", f.residual, "absolute or relative");
    app.add_option("--correction", f.correction, "single-pass or fixed-point");
    app.add_option("--max-correction-passes", f.max_correction_passes, "Fixed-point pass limit");
    app.add_option("--correction-tolerance", f.correction_tolerance, "Fixed-point tolerance on the scaled change of b*");
    app.add_option("--closure", f.closure, "three-point or four-point");
    app.add_option("--error-nodes", f.error_nodes, "interior or all");
    app.add_option("--config", f.config, "JSON config file");
    app.add_option("--output-dir", f.output_dir, std::string("Output directory (default $") + output_dir_env + " or .)");
    app.add_option("--format", f.format, "csv or json");
    app.add_flag("--verbose,-v", f.verbose, "Print residual and correction details");
    app.add_flag("--dump-derivatives", f.dump_derivatives, "Write derivative fields of each solution");

    const std::pair<Subcommand, const char*> subcommands[] = {
        {Subcommand::solve, "Solve one problem on one grid and report errors"},
        {Subcommand::study, "Grid refinement study with convergence orders"},
        {Subcommand::gamma_sweep, "Average error against the stretch parameter"},
        {Subcommand::dump_stencils, "Print the stencil coefficients of one axis"},
        {Subcommand::dump_grid, "Print node coordinates and spacings"},
    };
    for (const auto& [sub, description] : subcommands) {
        app.add_subcommand(std::string(to_string(sub)), description)->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {RunConfig{}, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {RunConfig{}, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    RunConfig c;
    if (const char* env = std::getenv(output_dir_env); env && *env) c.output_dir = env;
    if (app.count("--config")) {
        std::ifstream in(f.config);
        if (!in) throw UsageError("cannot read config file " + f.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError("config file " + f.config + ": " + e.what());
        }
        c = merge_json(c, j);
    }
    c.subcommand = parse_subcommand(app.get_subcommands().front()->get_name());

    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--problem")) c.problem = f.problem;
    if (given("--method")) c.method = parse_method_choice(f.method);
    if (given("--family")) c.families = parse_families(f.families);
    if (given("--gamma")) c.gamma = f.gamma;
    if (given("--size")) c.size = f.size;
    if (given("--levels")) c.levels = f.levels;
    if (given("--gammas")) c.gammas = f.gammas;
    if (given("--axis")) c.axis = f.axis;
    if (given("--tolerance")) c.residual_tolerance = f.tolerance;
    if (given("--max-sweeps")) c.max_sweeps = f.max_sweeps;
    if (given("--residual")) c.residual = as_usage([&] { return parse_residual_reading(f.residual); });
    if (given("--correction")) c.correction = as_usage([&] { return parse_correction_mode(f.correction); });
    if (given("--max-correction-passes")) c.max_correction_passes = f.max_correction_passes;
    if (given("--correction-tolerance")) c.correction_tolerance = f.correction_tolerance;
    if (given("--closure")) c.closure = as_usage([&] { return parse_boundary_closure(f.closure); });
    if (given("--error-nodes")) c.error_nodes = parse_error_nodes(f.error_nodes);
    if (given("--output-dir")) c.output_dir = f.output_dir;
    if (given("--format")) c.format = parse_format(f.format);
    if (given("--verbose")) c.verbose = f.verbose;
    if (given("--dump-derivatives")) c.dump_derivatives = f.dump_derivatives;

    validate(c);
    return {c, std::nullopt};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        validate(config);
        const fs::path dir(config.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec || !fs::is_directory(dir)) {
            err << "error: cannot create output directory " << dir.string() << '\n';
            return exit_io;
        }
        if (config.verbose) out << to_json(config).dump(2) << '\n';
        switch (config.subcommand) {
        case Subcommand::solve: return run_solve(config, dir, out);
        case Subcommand::study: return run_study_command(config, dir, out);
        case Subcommand::gamma_sweep: return run_gamma_sweep(config, dir, out);
        case Subcommand::dump_stencils: return run_dump_stencils(config, dir, out);
        case Subcommand::dump_grid: return run_dump_grid(config, dir, out);
        }
        return exit_usage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const io::IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_not_converged;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    ParseResult parsed;
    try {
        parsed = parse_args(args);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nrun with --help for usage\n";
        return exit_usage;
    }
    if (parsed.help) {
        out << *parsed.help;
        return exit_ok;
    }
    return run(parsed.config, out, err);
}

}  // namespace ccfd::cli
