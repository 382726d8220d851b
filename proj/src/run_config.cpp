#include "varfrac/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace varfrac {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(where + ": unknown key '" + key + "'");
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
    return obj.contains(key) ? obj[key].get<double>() : fallback;
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    if (!obj[key].is_string()) throw ConfigError(where + "." + key + ": expected a string");
    return obj[key].get<std::string>();
}

std::vector<std::vector<double>> load_table(const std::filesystem::path& file,
                                            std::size_t columns, const std::string& where) {
    std::ifstream in(file);
    if (!in) throw ConfigError(where + ": cannot open table file " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (row.empty()) continue;
        if (row.size() != columns)
            throw ConfigError(where + ": expected " + std::to_string(columns) +
                              " columns in " + file.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError(where + ": empty table " + file.string());
    return rows;
}

// piecewise-linear interpolation of a two-column (x, value) table
std::vector<double> interp_table(const std::vector<std::vector<double>>& rows,
                                 const std::vector<double>& points) {
    std::vector<double> out(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        double x = points[j];
        if (x <= rows.front()[0]) {
            out[j] = rows.front()[1];
            continue;
        }
        if (x >= rows.back()[0]) {
            out[j] = rows.back()[1];
            continue;
        }
        std::size_t hi = 1;
        while (rows[hi][0] < x) ++hi;
        double t = (x - rows[hi - 1][0]) / (rows[hi][0] - rows[hi - 1][0]);
        out[j] = (1.0 - t) * rows[hi - 1][1] + t * rows[hi][1];
    }
    return out;
}

Field build_field(const SpatialGridPtr& grid, const json& spec,
                  const std::filesystem::path& base, const std::string& where) {
    std::string kind = require_string(spec, "kind", where);
    if (kind == "constant") {
        check_keys(spec, {"kind", "value"}, where);
        return Field::constant(grid, require_number(spec, "value", where));
    }
    if (kind == "linear") {
        check_keys(spec, {"kind", "from", "to"}, where);
        double a = require_number(spec, "from", where);
        double b = require_number(spec, "to", where);
        std::vector<double> v(grid->size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            double s = (grid->points()[j] - grid->left()) / grid->measure();
            v[j] = a + s * (b - a);
        }
        return Field(grid, std::move(v));
    }
    if (kind == "bump") {
        check_keys(spec, {"kind", "center", "width", "amplitude", "offset"}, where);
        double c = require_number(spec, "center", where);
        double w = require_number(spec, "width", where);
        double amp = require_number(spec, "amplitude", where);
        double off = number_or(spec, "offset", 0.0);
        std::vector<double> v(grid->size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            double d = (grid->points()[j] - c) / w;
            v[j] = off + amp * std::exp(-d * d);
        }
        return Field(grid, std::move(v));
    }
    if (kind == "table") {
        check_keys(spec, {"kind", "file"}, where);
        auto rows = load_table(base / require_string(spec, "file", where), 2, where);
        return Field(grid, interp_table(rows, grid->points()));
    }
    throw ConfigError(where + ".kind: unknown field profile '" + kind + "'");
}

OrderField build_alpha(const SpatialGridPtr& grid, const json& spec,
                       const std::filesystem::path& base) {
    const std::string where = "alpha";
    std::string kind = require_string(spec, "kind", where);
    if (kind == "constant") {
        check_keys(spec, {"kind", "value"}, where);
        return OrderField::constant(grid, require_number(spec, "value", where));
    }
    if (kind == "linear") {
        check_keys(spec, {"kind", "from", "to"}, where);
        return OrderField::linear(grid, require_number(spec, "from", where),
                                  require_number(spec, "to", where));
    }
    if (kind == "piecewise") {
        check_keys(spec, {"kind", "regions"}, where);
        if (!spec.contains("regions") || !spec["regions"].is_array())
            throw ConfigError("alpha.regions: expected an array");
        std::vector<OrderRegion> regions;
        double lo = grid->left();
        for (const auto& r : spec["regions"]) {
            check_keys(r, {"to", "value"}, "alpha.regions[]");
            double hi = require_number(r, "to", "alpha.regions[]");
            regions.push_back({lo, hi, require_number(r, "value", "alpha.regions[]")});
            lo = hi;
        }
        return OrderField::piecewise(grid, std::move(regions));
    }
    if (kind == "table") {
        check_keys(spec, {"kind", "file"}, where);
        auto rows = load_table(base / require_string(spec, "file", where), 2, where);
        return OrderField::from_values(grid, interp_table(rows, grid->points()));
    }
    throw ConfigError("alpha.kind: unknown profile '" + kind + "'");
}

BoundedOperator build_operator(const SpatialGridPtr& grid, const json& spec,
                               const std::filesystem::path& base) {
    const std::string where = "operator";
    std::string kind = require_string(spec, "kind", where);
    if (kind == "zero") {
        check_keys(spec, {"kind"}, where);
        return BoundedOperator::zero(grid);
    }
    if (kind == "multiplication") {
        check_keys(spec, {"kind", "psi"}, where);
        if (!spec.contains("psi")) throw ConfigError("operator: missing key 'psi'");
        return BoundedOperator::multiplication(build_field(grid, spec["psi"], base, "operator.psi"));
    }
    if (kind == "volterra") {
        check_keys(spec, {"kind"}, where);
        return BoundedOperator::volterra(grid);
    }
    if (kind == "dense") {
        check_keys(spec, {"kind", "file"}, where);
        auto rows = load_table(base / require_string(spec, "file", where), grid->size(), where);
        if (rows.size() != grid->size())
            throw ConfigError("operator: dense matrix must be nx by nx");
        std::vector<double> m;
        m.reserve(grid->size() * grid->size());
        for (const auto& r : rows) m.insert(m.end(), r.begin(), r.end());
        return BoundedOperator::dense(grid, std::move(m));
    }
    throw ConfigError("operator.kind: unknown operator '" + kind + "'");
}

SemilinearRhs build_rhs(const SpatialGridPtr& grid, const json& spec,
                        const std::filesystem::path& base) {
    const std::string where = "rhs";
    std::string kind = require_string(spec, "kind", where);
    SemilinearRhs f;
    if (kind == "quadratic") {
        check_keys(spec, {"kind", "coefficient"}, where);
        double c = number_or(spec, "coefficient", 1.0);
        f.evaluator = [c](double, const Field& u) {
            Field out = u;
            for (auto& v : out.values) v = c * v * v;
            return out;
        };
        return f;
    }
    if (kind == "decay") {
        check_keys(spec, {"kind", "coefficient"}, where);
        double c = number_or(spec, "coefficient", 1.0);
        f.evaluator = [c](double, const Field& u) { return -c * u; };
        f.lipschitz_hint = c;
        return f;
    }
    if (kind == "table") {
        // pointwise map u -> f(u) by piecewise-linear interpolation
        check_keys(spec, {"kind", "file"}, where);
        auto rows = load_table(base / require_string(spec, "file", where), 2, where);
        f.evaluator = [rows](double, const Field& u) {
            Field out = u;
            out.values = interp_table(rows, u.values);
            return Field(u.grid, out.values);
        };
        return f;
    }
    throw ConfigError("rhs.kind: unknown right-hand side '" + kind + "'");
}

void print_row(std::FILE* f, std::initializer_list<double> vals) {
    bool first = true;
    for (double v : vals) {
        std::fprintf(f, first ? "%.17g" : ",%.17g", v);
        first = false;
    }
    std::fprintf(f, "\n");
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file " + file.string());
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config parse failure: " + std::string(e.what()));
    }
    std::filesystem::path base = file.parent_path();

    check_keys(doc,
               {"problem", "grid", "time", "p", "scheme", "seed", "alpha", "operator",
                "initial", "rhs", "sir", "picard", "blowup_threshold", "output",
                "diagnostics"},
               "config");
    RunConfig rc;
    rc.problem = require_string(doc, "problem", "config");
    if (rc.problem != "linear" && rc.problem != "semilinear" && rc.problem != "sir")
        throw ConfigError("config.problem: must be linear, semilinear, or sir");

    if (doc.contains("grid")) {
        check_keys(doc["grid"], {"nx", "left", "right"}, "grid");
        rc.nx = static_cast<std::size_t>(require_number(doc["grid"], "nx", "grid"));
        rc.left = number_or(doc["grid"], "left", 0.0);
        rc.right = number_or(doc["grid"], "right", 1.0);
    }
    if (doc.contains("time")) {
        check_keys(doc["time"], {"steps", "horizon"}, "time");
        rc.nt = static_cast<std::size_t>(require_number(doc["time"], "steps", "time"));
        rc.horizon = require_number(doc["time"], "horizon", "time");
    }
    if (doc.contains("p")) rc.p = doc["p"].get<double>();
    if (doc.contains("seed")) rc.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("blowup_threshold")) rc.blowup_threshold = doc["blowup_threshold"].get<double>();
    if (doc.contains("output")) rc.output = doc["output"].get<std::string>();
    if (doc.contains("diagnostics")) rc.diagnostics = doc["diagnostics"].get<std::string>();
    if (doc.contains("scheme")) {
        std::string s = doc["scheme"].get<std::string>();
        if (s == "rectangle") rc.scheme = Scheme::Rectangle;
        else if (s == "l1linear") rc.scheme = Scheme::L1Linear;
        else throw ConfigError("config.scheme: must be rectangle or l1linear");
    }
    if (doc.contains("picard")) {
        check_keys(doc["picard"], {"tol", "max_iter"}, "picard");
        rc.picard.fixed_point_tol = number_or(doc["picard"], "tol", rc.picard.fixed_point_tol);
        rc.picard.max_iter =
            static_cast<int>(number_or(doc["picard"], "max_iter", rc.picard.max_iter));
    }

    if (rc.nx < 1) throw ConfigError("grid.nx: must be at least 1");
    if (!(rc.right > rc.left)) throw ConfigError("grid: right must exceed left");
    rc.grid = SpatialGrid::uniform_cells(rc.left, rc.right, rc.nx);

    if (!doc.contains("alpha")) throw ConfigError("config: missing key 'alpha'");
    try {
        rc.alpha = build_alpha(rc.grid, doc["alpha"], base);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("alpha: " + std::string(e.what()));
    }

    if (rc.problem == "linear") {
        if (!doc.contains("operator")) throw ConfigError("config: missing key 'operator'");
        rc.op = build_operator(rc.grid, doc["operator"], base);
        if (!doc.contains("initial")) throw ConfigError("config: missing key 'initial'");
        rc.initial = build_field(rc.grid, doc["initial"], base, "initial");
    } else if (rc.problem == "semilinear") {
        if (doc.contains("operator")) rc.op = build_operator(rc.grid, doc["operator"], base);
        if (!doc.contains("initial")) throw ConfigError("config: missing key 'initial'");
        rc.initial = build_field(rc.grid, doc["initial"], base, "initial");
        if (!doc.contains("rhs")) throw ConfigError("config: missing key 'rhs'");
        rc.rhs = build_rhs(rc.grid, doc["rhs"], base);
    } else {
        if (!doc.contains("sir")) throw ConfigError("config: missing key 'sir'");
        const json& sir = doc["sir"];
        check_keys(sir, {"beta", "gamma", "coupling", "s0", "i0", "r0"}, "sir");
        rc.sir_params.beta = number_or(sir, "beta", 0.5);
        rc.sir_params.gamma = number_or(sir, "gamma", 0.2);
        std::string coupling =
            sir.contains("coupling") ? sir["coupling"].get<std::string>() : "nonlocal";
        if (coupling == "nonlocal") rc.sir_params.coupling = SirCoupling::NonlocalPaper;
        else if (coupling == "classical") rc.sir_params.coupling = SirCoupling::LocalClassical;
        else throw ConfigError("sir.coupling: must be nonlocal or classical");
        SirState init;
        if (!sir.contains("s0") || !sir.contains("i0"))
            throw ConfigError("sir: missing key 's0' or 'i0'");
        init.s = build_field(rc.grid, sir["s0"], base, "sir.s0");
        init.i = build_field(rc.grid, sir["i0"], base, "sir.i0");
        init.r = sir.contains("r0") ? build_field(rc.grid, sir["r0"], base, "sir.r0")
                                    : Field::constant(rc.grid, 0.0);
        rc.sir_initial = std::move(init);
    }
    return rc;
}

void write_solution_csv(const std::string& path, const SolveReport& rep) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open output file " + path);
    std::fprintf(f, "t,x,u\n");
    const auto& grid = rep.trajectory.grid();
    for (std::size_t n = 0; n < rep.trajectory.num_slices(); ++n) {
        double t = rep.trajectory.time().node(n);
        for (std::size_t j = 0; j < grid->size(); ++j)
            print_row(f, {t, grid->points()[j], rep.trajectory.at(n, j)});
    }
    for (const auto& [t, field] : rep.chase_tail)
        for (std::size_t j = 0; j < grid->size(); ++j)
            print_row(f, {t, grid->points()[j], field.values[j]});
    std::fprintf(f, "# status,%s\n",
                 rep.status == SolveStatus::Completed ? "completed" : "blowup");
    if (rep.status == SolveStatus::BlowUp)
        std::fprintf(f, "# omega_estimate,%.17g\n# final_norm,%.17g\n", rep.omega_estimate,
                     rep.final_norm);
    std::fclose(f);
}

void write_sir_csv(const std::string& path, const SirReport& rep) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open output file " + path);
    std::fprintf(f, "t,x,S,I,R\n");
    for (std::size_t k = 0; k < rep.times.size(); ++k) {
        const auto& st = rep.states[k];
        for (std::size_t j = 0; j < st.s.size(); ++j)
            print_row(f, {rep.times[k], st.s.grid->points()[j], st.s.values[j],
                          st.i.values[j], st.r.values[j]});
    }
    std::fprintf(f, "# status,%s\n",
                 rep.status == SolveStatus::Completed ? "completed" : "blowup");
    std::fclose(f);
}

void write_sir_diagnostics_csv(const std::string& path, const SirReport& rep) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open output file " + path);
    std::fprintf(f, "t,defect_norm,total_population_norm\n");
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        print_row(f, {rep.times[k], rep.defect_norm[k], rep.total_norm[k]});
    std::fclose(f);
}

}  // namespace varfrac
