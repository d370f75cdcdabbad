#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "ccfd/errors.hpp"

namespace ccfd::io {

namespace {

std::string grid_label(std::size_t intervals, std::size_t dimension)
{
    std::string label = std::to_string(intervals);
    for (std::size_t d = 1; d < dimension; ++d) label += "x" + std::to_string(intervals);
    return label;
}

std::string optional_sci(const std::optional<double>& value)
{
    return value ? sci(*value) : std::string();
}

std::string row_status(const StudyRow& row)
{
    if (row.failure) return "failed";
    return row.converged ? "ok" : "not-converged";
}

}  // namespace

std::string sci(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", value);
    return buf;
}

void write_axes_csv(std::ostream& out, const TensorGrid& grid)
{
    out << "axis,index,coordinate,spacing\n";
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
        const auto& axis = grid.axis(d);
        for (std::size_t i = 0; i < axis.size(); ++i) {
            out << d << ',' << i << ',' << sci(axis.coord(i)) << ',';
            if (i < axis.intervals()) out << sci(axis.spacing(i));
            out << '\n';
        }
    }
}

void write_stencils_csv(std::ostream& out, const AxisStencils& stencils)
{
    out << "node,kind,lhs_prev,lhs_center,lhs_next,a,b,c,d,classical_a,classical_b,classical_c\n";
    const std::size_t n = stencils.size();
    auto closure = [&](std::size_t node, const char* kind, const CompactBoundaryRow& row,
                       bool left) {
        out << node << ',' << kind << ',';
        if (left) {
            out << sci(0.0) << ',' << sci(row.boundary_weight) << ',' << sci(row.adjacent_weight);
        } else {
            out << sci(row.adjacent_weight) << ',' << sci(row.boundary_weight) << ',' << sci(0.0);
        }
        for (double w : row.weights) out << ',' << sci(w);
        out << ",,,\n";
    };
    for (std::size_t i = 0; i < n; ++i) {
        const bool boundary = i == 0 || i + 1 == n;
        if (boundary && !stencils.has_compact) {
            out << i << ",boundary,,,,,,,,,,\n";
            continue;
        }
        if (i == 0) {
            closure(i, "closure-left", stencils.left, true);
            continue;
        }
        if (i + 1 == n) {
            closure(i, "closure-right", stencils.right, false);
            continue;
        }
        const auto& c = stencils.classical[i];
        out << i << ",interior,";
        if (stencils.has_compact) {
            const auto& r = stencils.interior[i];
            out << sci(r.alpha) << ',' << sci(1.0) << ',' << sci(r.beta) << ',' << sci(r.a) << ','
                << sci(r.b) << ',' << sci(r.c) << ',' << sci(0.0);
        } else {
            out << ",,,,,,";
        }
        out << ',' << sci(c.a) << ',' << sci(c.b) << ',' << sci(c.c) << '\n';
    }
}

void write_solution_csv(std::ostream& out, const TensorGrid& grid, const ScalarField& field,
                        const PoissonProblem* problem)
{
    require_matching(field, grid);
    const bool with_exact = problem && problem->exact;
    const std::size_t dim = grid.dimension();
    for (std::size_t d = 0; d < dim; ++d) out << "index_" << d << ',';
    for (std::size_t d = 0; d < dim; ++d) out << "x_" << d << ',';
    out << "value";
    if (with_exact) out << ",exact,error";
    out << '\n';
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t> index,
                            std::span<const double> x) {
        for (std::size_t d = 0; d < dim; ++d) out << index[d] << ',';
        for (std::size_t d = 0; d < dim; ++d) out << sci(x[d]) << ',';
        out << sci(field[linear]);
        if (with_exact) {
            const double e = (*problem->exact)(x);
            out << ',' << sci(e) << ',' << sci(field[linear] - e);
        }
        out << '\n';
    });
}

nlohmann::json field_header(const TensorGrid& grid)
{
    nlohmann::json axes = nlohmann::json::array();
    for (std::size_t d = 0; d < grid.dimension(); ++d) {
        axes.push_back(std::vector<double>(grid.axis(d).coords().begin(), grid.axis(d).coords().end()));
    }
    return {
        {"dimension", grid.dimension()},
        {"extents", std::vector<std::size_t>(grid.extents().begin(), grid.extents().end())},
        {"index_order", "axis 0 fastest"},
        {"dtype", "float64 little-endian"},
        {"coordinates", axes},
    };
}

void write_field_binary(const std::filesystem::path& data_path, const TensorGrid& grid,
                        const ScalarField& field)
{
    require_matching(field, grid);
    std::ofstream data(data_path, std::ios::binary);
    data.write(reinterpret_cast<const char*>(field.values().data()),
               static_cast<std::streamsize>(field.size() * sizeof(double)));
    auto header_path = data_path;
    header_path.replace_extension(".json");
    std::ofstream header(header_path);
    auto h = field_header(grid);
    h["data"] = data_path.filename().string();
    header << h.dump(2) << '\n';
    if (!data || !header) throw IoError("could not write " + data_path.string());
}

void write_derivatives_csv(std::ostream& out, const TensorGrid& grid,
                           const std::vector<ScalarField>& high,
                           const std::vector<ScalarField>& low)
{
    const std::size_t dim = grid.dimension();
    for (std::size_t d = 0; d < dim; ++d) out << "index_" << d << ',';
    for (std::size_t d = 0; d < dim; ++d) out << "compact_" << d << ",classical_" << d << (d + 1 < dim ? "," : "");
    out << '\n';
    for_each_node(grid, [&](std::size_t linear, std::span<const std::size_t> index,
                            std::span<const double>) {
        for (std::size_t d = 0; d < dim; ++d) out << index[d] << ',';
        for (std::size_t d = 0; d < dim; ++d) {
            out << sci(high[d][linear]) << ',' << sci(low[d][linear]) << (d + 1 < dim ? "," : "");
        }
        out << '\n';
    });
}

void write_study_csv(std::ostream& out, const StudyResult& result)
{
    const std::size_t dim = problem_dimension(result.spec.problem);
    out << "grid,e_max,order_max,e_ave,order_ave,sweeps,correction_passes,seconds,status\n";
    for (const auto& row : result.rows) {
        out << grid_label(row.intervals, dim) << ',';
        if (row.failure) {
            out << ",,,,,,," << row_status(row) << '\n';
            continue;
        }
        out << sci(row.errors.e_max) << ',' << optional_sci(row.errors.order_max) << ','
            << sci(row.errors.e_ave) << ',' << optional_sci(row.errors.order_ave) << ','
            << row.sweeps << ',' << row.correction_passes << ',' << sci(row.seconds) << ','
            << row_status(row) << '\n';
    }
}

nlohmann::json study_to_json(const StudyResult& result)
{
    const auto& spec = result.spec;
    nlohmann::json families = nlohmann::json::array();
    for (auto f : spec.families) families.push_back(std::string(to_string(f)));
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : result.rows) {
        nlohmann::json r{{"intervals", row.intervals}, {"status", row_status(row)}};
        if (row.failure) {
            r["failure"] = *row.failure;
        } else {
            r["e_max"] = row.errors.e_max;
            r["e_ave"] = row.errors.e_ave;
            r["order_max"] = row.errors.order_max ? nlohmann::json(*row.errors.order_max) : nlohmann::json();
            r["order_ave"] = row.errors.order_ave ? nlohmann::json(*row.errors.order_ave) : nlohmann::json();
            r["sweeps"] = row.sweeps;
            r["correction_passes"] = row.correction_passes;
            r["seconds"] = row.seconds;
        }
        rows.push_back(std::move(r));
    }
    return {
        {"problem", spec.problem},
        {"method", std::string(to_string(spec.method))},
        {"families", families},
        {"gamma", spec.gamma},
        {"correction", std::string(to_string(spec.solver.correction_mode))},
        {"rows", rows},
    };
}

void print_study_table(std::ostream& out, const StudyResult& result)
{
    const std::size_t dim = problem_dimension(result.spec.problem);
    char line[160];
    std::snprintf(line, sizeof line, "%-14s %-12s %-6s %-12s %-6s %-9s %-10s\n", "grid", "e_max",
                  "order", "e_ave", "order", "sweeps", "seconds");
    out << "problem " << result.spec.problem << ", " << to_string(result.spec.method) << '\n' << line;
    for (const auto& row : result.rows) {
        const auto label = grid_label(row.intervals, dim);
        if (row.failure) {
            out << label << "  failed: " << *row.failure << '\n';
            continue;
        }
        auto order = [](const std::optional<double>& o) {
            char b[16];
            if (o) std::snprintf(b, sizeof b, "%.2f", *o);
            else std::snprintf(b, sizeof b, "-");
            return std::string(b);
        };
        std::snprintf(line, sizeof line, "%-14s %-12s %-6s %-12s %-6s %-9zu %-10.3f%s\n",
                      label.c_str(), sci(row.errors.e_max).c_str(), order(row.errors.order_max).c_str(),
                      sci(row.errors.e_ave).c_str(), order(row.errors.order_ave).c_str(), row.sweeps,
                      row.seconds, row.converged ? "" : "  (not converged)");
        out << line;
    }
}

void write_gamma_csv(std::ostream& out, const std::vector<GammaPoint>& points)
{
    out << "gamma,e_ave\n";
    for (const auto& p : points) {
        out << sci(p.gamma) << ',';
        if (!p.failure) out << sci(p.e_ave);
        out << '\n';
    }
}

nlohmann::json gamma_to_json(const std::vector<GammaPoint>& points)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : points) {
        nlohmann::json j{{"gamma", p.gamma}, {"converged", p.converged}};
        if (p.failure) {
            j["failure"] = *p.failure;
        } else {
            j["e_ave"] = p.e_ave;
            j["e_max"] = p.e_max;
        }
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace ccfd::io
