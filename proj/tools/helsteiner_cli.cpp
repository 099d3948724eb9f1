// Command line surface over the helical Steiner library: point generation,
// ratio evaluation and minimization, parameter scans, the exact small-case
// oracle, and chain stability reports. CSV goes to figures, JSON to reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <helsteiner/helsteiner.hpp>

namespace {

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const std::string& body, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + output_path);
    out << body;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string("bad integer list for ") + flag + ": " + text);
        }
    }
    if (out.empty()) throw std::invalid_argument(std::string("empty list for ") + flag);
    return out;
}

// Axis syntax: a bare value, or lo:hi:steps with inclusive endpoints where
// steps counts grid points.
helsteiner::ScanAxis parse_axis(const std::string& name, const std::string& text) {
    helsteiner::ScanAxis axis;
    axis.variable = name;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 1) {
            axis.lo = axis.hi = std::stod(parts[0]);
            axis.steps = 1;
        } else if (parts.size() == 3) {
            axis.lo = std::stod(parts[0]);
            axis.hi = std::stod(parts[1]);
            axis.steps = std::stoi(parts[2]);
        } else {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad axis for --" + name + ": expected value or lo:hi:steps");
    }
    if (axis.steps < 1) throw std::invalid_argument("axis steps must be >= 1 for --" + name);
    return axis;
}

std::vector<helsteiner::Vec3> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    std::vector<helsteiner::Vec3> points;
    std::string line;
    bool header = true;
    int x_col = 0, y_col = 1, z_col = 2, kind_col = -1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (header) {
            header = false;
            bool named = false;
            for (size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == "x") { x_col = static_cast<int>(i); named = true; }
                if (fields[i] == "y") y_col = static_cast<int>(i);
                if (fields[i] == "z") z_col = static_cast<int>(i);
                if (fields[i] == "kind") kind_col = static_cast<int>(i);
            }
            if (named) continue;  // header row consumed
            kind_col = -1;        // headerless: treat as bare x,y,z rows
            x_col = 0; y_col = 1; z_col = 2;
        }
        if (kind_col >= 0 && fields[static_cast<size_t>(kind_col)] != "P") continue;
        const size_t need = static_cast<size_t>(std::max({x_col, y_col, z_col})) + 1;
        if (fields.size() < need) throw std::invalid_argument("short row in " + path + ": " + line);
        try {
            points.push_back({std::stod(fields[static_cast<size_t>(x_col)]),
                              std::stod(fields[static_cast<size_t>(y_col)]),
                              std::stod(fields[static_cast<size_t>(z_col)])});
        } catch (const std::exception&) {
            throw std::invalid_argument("bad point row in " + path + ": " + line);
        }
    }
    return points;
}

struct CommonParams {
    double omega;
    double alpha;
};

ordered_json network_json(const helsteiner::TreeNetwork& net) {
    ordered_json j;
    j["topology_id"] = net.topology_id;
    j["edges"] = ordered_json::array();
    for (const auto& [u, v] : net.edges) j["edges"].push_back({u, v});
    j["steiner_points"] = ordered_json::array();
    for (const auto& s : net.steiner_points) j["steiner_points"].push_back({s.x, s.y, s.z});
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"helical Steiner tree constructions, ratio minimization, and stability checks"};
    app.require_subcommand(1);

    const auto reference = helsteiner::closed_form_minimum();

    // points
    auto* points_cmd = app.add_subcommand("points", "emit helical point sets as CSV");
    int points_n = 0;
    int points_m = 1;
    CommonParams points_p{reference.omega, reference.alpha};
    bool include_steiner = false;
    std::string points_output;
    points_cmd->add_option("--n", points_n, "number of terminal points")->required();
    points_cmd->add_option("--m", points_m, "skip modulus");
    points_cmd->add_option("--omega", points_p.omega, "angular step (radians)");
    points_cmd->add_option("--alpha", points_p.alpha, "pitch factor");
    points_cmd->add_flag("--include-steiner", include_steiner, "also emit inner-helix junction points");
    points_cmd->add_option("--output", points_output, "write to file instead of stdout");

    // srf
    auto* srf_cmd = app.add_subcommand("srf", "evaluate the ratio function at one parameter point");
    CommonParams srf_p{reference.omega, reference.alpha};
    int srf_m_max = 12;
    std::string srf_output;
    srf_cmd->add_option("--omega", srf_p.omega, "angular step (radians)");
    srf_cmd->add_option("--alpha", srf_p.alpha, "pitch factor");
    srf_cmd->add_option("--m-max", srf_m_max, "largest skip modulus considered");
    srf_cmd->add_option("--output", srf_output, "write to file instead of stdout");

    // minimize
    auto* min_cmd = app.add_subcommand("minimize", "locate the ratio function minimum");
    const auto default_box = helsteiner::default_search_box();
    helsteiner::SearchBox box = default_box;
    int min_m_max = 12;
    double min_tol = 1e-9;
    int min_restarts = 8;
    unsigned min_seed = 0;
    std::string min_output;
    min_cmd->add_option("--omega-lo", box.omega_lo, "search box omega lower bound");
    min_cmd->add_option("--omega-hi", box.omega_hi, "search box omega upper bound");
    min_cmd->add_option("--alpha-lo", box.alpha_lo, "search box alpha lower bound");
    min_cmd->add_option("--alpha-hi", box.alpha_hi, "search box alpha upper bound");
    min_cmd->add_option("--m-max", min_m_max, "largest skip modulus considered");
    min_cmd->add_option("--tol", min_tol, "simplex diameter tolerance");
    min_cmd->add_option("--restarts", min_restarts, "number of refinement starts");
    min_cmd->add_option("--seed", min_seed, "seed for restart jitter");
    min_cmd->add_option("--output", min_output, "write to file instead of stdout");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "tabulate a quantity over a parameter grid");
    std::string scan_quantity = "srf";
    std::string scan_m = "1";
    int scan_m_max = 12;
    std::string scan_omega = format_double(reference.omega);
    std::string scan_alpha = format_double(reference.alpha);
    std::string scan_format = "csv";
    std::string scan_output;
    scan_cmd->add_option("--quantity", scan_quantity,
                         "srf, rho_m, cos_theta_m, or per_point_lengths");
    scan_cmd->add_option("--m", scan_m, "comma-separated skip moduli");
    scan_cmd->add_option("--m-max", scan_m_max, "largest skip modulus for srf");
    scan_cmd->add_option("--omega", scan_omega, "omega value or lo:hi:steps");
    scan_cmd->add_option("--alpha", scan_alpha, "alpha value or lo:hi:steps");
    scan_cmd->add_option("--format", scan_format, "csv or json");
    scan_cmd->add_option("--output", scan_output, "write to file instead of stdout");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "exact minimal Steiner tree on a small point set");
    std::string oracle_input;
    int oracle_n = 0;
    CommonParams oracle_p{reference.omega, reference.alpha};
    int oracle_cap = helsteiner::kDefaultOracleCap;
    std::string oracle_output;
    oracle_cmd->add_option("--input", oracle_input, "points CSV (x,y,z columns; P rows of a points file)");
    oracle_cmd->add_option("--n", oracle_n, "use the first n helical terminal points instead");
    oracle_cmd->add_option("--omega", oracle_p.omega, "angular step for --n");
    oracle_cmd->add_option("--alpha", oracle_p.alpha, "pitch factor for --n");
    oracle_cmd->add_option("--n-cap", oracle_cap, "topology enumeration cap");
    oracle_cmd->add_option("--output", oracle_output, "write to file instead of stdout");

    // stability
    auto* stab_cmd = app.add_subcommand("stability", "chain equilibrium and stationarity report");
    int stab_n = 0;
    int stab_p = 3;
    CommonParams stab_params{reference.omega, reference.alpha};
    double stab_radius = 0.0;
    bool stab_full_sum = false;
    std::string stab_output;
    stab_cmd->add_option("--n", stab_n, "number of terminal points")->required();
    stab_cmd->add_option("--p", stab_p, "junction regularity parameter");
    stab_cmd->add_option("--omega", stab_params.omega, "angular step (radians)");
    stab_cmd->add_option("--alpha", stab_params.alpha, "pitch factor");
    stab_cmd->add_option("--radius", stab_radius,
                         "junction helix radius (default: balancing radius)");
    stab_cmd->add_flag("--full-sum", stab_full_sum,
                       "sum stationarity terms over all terminals, not just adjacent ones");
    stab_cmd->add_option("--output", stab_output, "write to file instead of stdout");

    // compare-p
    auto* cmp_cmd = app.add_subcommand("compare-p", "optimized chain lengths across p values");
    int cmp_n = 0;
    std::string cmp_p = "3,5";
    CommonParams cmp_params{reference.omega, reference.alpha};
    std::string cmp_output;
    cmp_cmd->add_option("--n", cmp_n, "number of terminal points")->required();
    cmp_cmd->add_option("--p", cmp_p, "comma-separated p values");
    cmp_cmd->add_option("--omega", cmp_params.omega, "angular step (radians)");
    cmp_cmd->add_option("--alpha", cmp_params.alpha, "pitch factor");
    cmp_cmd->add_option("--output", cmp_output, "write to file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[invalid-flags]: " << e.what() << "\n";
        return 2;
    }

    if (points_cmd->parsed()) {
        if (points_n < 1) throw std::invalid_argument("points: --n must be >= 1");
        if (points_m < 1) throw std::invalid_argument("points: --m must be >= 1");
        const helsteiner::HelixParams params{points_p.omega, points_p.alpha};
        std::string body = "kind,subsequence_start,index,x,y,z\n";
        auto add_row = [&](char kind, int start, int index, const helsteiner::Vec3& v) {
            body += kind;
            body += ',' + std::to_string(start) + ',' + std::to_string(index) + ',' +
                    format_double(v.x) + ',' + format_double(v.y) + ',' + format_double(v.z) + '\n';
        };
        for (int j = 0; j < points_m && j < points_n; ++j) {
            for (int idx : helsteiner::subsequence_indices(j, points_m, points_n,
                                                          helsteiner::SequenceKind::terminal)) {
                add_row('P', j, idx, helsteiner::terminal_point(idx, params));
            }
        }
        if (include_steiner) {
            if (points_n < points_m + 2) {
                throw std::invalid_argument("points: --include-steiner needs n >= m + 2");
            }
            for (int k = 1; k <= points_m; ++k) {
                for (int idx : helsteiner::subsequence_indices(k, points_m, points_n,
                                                              helsteiner::SequenceKind::steiner)) {
                    add_row('S', k, idx, helsteiner::steiner_point(idx, params, points_m));
                }
            }
        }
        emit(body, points_output);
        return 0;
    }

    if (srf_cmd->parsed()) {
        const helsteiner::SrfValue value = helsteiner::srf({srf_p.omega, srf_p.alpha}, srf_m_max);
        ordered_json j;
        j["command"] = "srf";
        j["input"] = {{"omega", srf_p.omega}, {"alpha", srf_p.alpha}, {"m_max", srf_m_max}};
        j["value"] = value.value;
        j["m_star"] = value.m_star;
        j["feasible_m1"] = value.feasible_m1;
        j["min_at_cap"] = value.min_at_cap;
        j["library_version"] = helsteiner::library_version;
        emit(dump_json(j), srf_output);
        return 0;
    }

    if (min_cmd->parsed()) {
        const helsteiner::MinimizationResult result =
            helsteiner::minimize_srf(box, min_m_max, min_tol, min_restarts, min_seed);
        ordered_json j;
        j["command"] = "minimize";
        j["input"] = {{"omega_lo", box.omega_lo}, {"omega_hi", box.omega_hi},
                      {"alpha_lo", box.alpha_lo}, {"alpha_hi", box.alpha_hi},
                      {"m_max", min_m_max},       {"tol", min_tol},
                      {"restarts", min_restarts}, {"seed", min_seed}};
        j["omega_star"] = result.omega_star;
        j["alpha_star"] = result.alpha_star;
        j["rho_star"] = result.rho_star;
        j["evaluations"] = result.evaluations;
        j["converged"] = result.converged;
        j["restarts_used"] = result.restarts_used;
        j["restart_results"] = ordered_json::array();
        for (const auto& r : result.restart_results) {
            j["restart_results"].push_back({{"omega", r.omega},
                                            {"alpha", r.alpha},
                                            {"value", r.value},
                                            {"converged", r.converged},
                                            {"evaluations", r.evaluations}});
        }
        j["library_version"] = helsteiner::library_version;
        emit(dump_json(j), min_output);
        return 0;
    }

    if (scan_cmd->parsed()) {
        helsteiner::ScanQuantity quantity;
        if (scan_quantity == "srf") quantity = helsteiner::ScanQuantity::srf_value;
        else if (scan_quantity == "rho_m") quantity = helsteiner::ScanQuantity::srf_branch;
        else if (scan_quantity == "cos_theta_m") quantity = helsteiner::ScanQuantity::junction_angle_cos;
        else if (scan_quantity == "per_point_lengths") quantity = helsteiner::ScanQuantity::per_point_lengths;
        else throw std::invalid_argument("scan: unknown --quantity " + scan_quantity);
        if (scan_format != "csv" && scan_format != "json") {
            throw std::invalid_argument("scan: --format must be csv or json");
        }
        const std::vector<helsteiner::ScanAxis> axes = {parse_axis("omega", scan_omega),
                                                        parse_axis("alpha", scan_alpha)};
        const std::vector<int> ms = parse_int_list(scan_m, "--m");
        const helsteiner::ScanTable table = helsteiner::scan_grid(axes, quantity, ms, scan_m_max);
        std::string body;
        if (scan_format == "csv") {
            body = "omega,alpha";
            for (const auto& c : table.columns) body += ',' + c;
            body += '\n';
            for (const auto& row : table.rows) {
                body += format_double(row.omega) + ',' + format_double(row.alpha);
                for (const auto& cell : row.values) {
                    body += ',';
                    if (cell.has_value()) body += format_double(*cell);
                }
                body += '\n';
            }
        } else {
            ordered_json j;
            j["command"] = "scan";
            j["input"] = {{"quantity", scan_quantity},
                          {"m_list", ms},
                          {"m_max", scan_m_max},
                          {"omega", {{"lo", axes[0].lo}, {"hi", axes[0].hi}, {"steps", axes[0].steps}}},
                          {"alpha", {{"lo", axes[1].lo}, {"hi", axes[1].hi}, {"steps", axes[1].steps}}}};
            j["columns"] = table.columns;
            j["rows"] = ordered_json::array();
            for (const auto& row : table.rows) {
                ordered_json r = {row.omega, row.alpha};
                for (const auto& cell : row.values) {
                    if (cell.has_value()) r.push_back(*cell);
                    else r.push_back(nullptr);
                }
                j["rows"].push_back(std::move(r));
            }
            j["library_version"] = helsteiner::library_version;
            body = dump_json(j);
        }
        emit(body, scan_output);
        return 0;
    }

    if (oracle_cmd->parsed()) {
        std::vector<helsteiner::Vec3> points;
        ordered_json input;
        if (!oracle_input.empty()) {
            points = read_points_csv(oracle_input);
            input = {{"source", oracle_input}, {"n", static_cast<int>(points.size())},
                     {"n_cap", oracle_cap}};
        } else {
            if (oracle_n < 3) {
                throw std::invalid_argument("oracle: need --input or --n with at least 3 points");
            }
            const helsteiner::HelixParams params{oracle_p.omega, oracle_p.alpha};
            for (int j = 0; j < oracle_n; ++j) {
                points.push_back(helsteiner::terminal_point(j, params));
            }
            input = {{"source", "helical"}, {"n", oracle_n}, {"omega", oracle_p.omega},
                     {"alpha", oracle_p.alpha}, {"n_cap", oracle_cap}};
        }
        const helsteiner::OracleResult result = helsteiner::smt(points, oracle_cap);
        ordered_json j;
        j["command"] = "oracle";
        j["input"] = input;
        j["smt_length"] = result.smt_length;
        j["mst_length"] = result.mst_length;
        j["ratio"] = result.ratio;
        j["topologies_examined"] = result.topologies_examined;
        j["best_topology"] = network_json(result.best_topology);
        j["library_version"] = helsteiner::library_version;
        emit(dump_json(j), oracle_output);
        return 0;
    }

    if (stab_cmd->parsed()) {
        const helsteiner::HelixParams params{stab_params.omega, stab_params.alpha};
        double radius = stab_radius;
        if (!(radius > 0.0)) radius = helsteiner::chain_equilibrium_radius(params);
        const helsteiner::PChainSpec spec =
            helsteiner::make_p_chain_spec(stab_n, stab_p, params, radius);
        const helsteiner::EquilibriumReport report =
            helsteiner::stationarity_report(spec, !stab_full_sum);
        ordered_json j;
        j["command"] = "stability";
        j["input"] = {{"n", stab_n},     {"p", stab_p},
                      {"omega", params.omega}, {"alpha", params.alpha},
                      {"radius", radius}, {"full_sum", stab_full_sum}};
        j["q"] = spec.q;
        j["fermat_residuals"] = report.fermat_residuals;
        j["gradient_norm"] = report.gradient_norm;
        j["gradient_norm_all"] = report.gradient_norm_all;
        j["length_geometric"] = report.length_geometric;
        j["length_force_form"] = report.length_force_form;
        j["t_sum_residuals"] = report.t_sum_residuals;
        j["library_version"] = helsteiner::library_version;
        emit(dump_json(j), stab_output);
        return 0;
    }

    if (cmp_cmd->parsed()) {
        const helsteiner::HelixParams params{cmp_params.omega, cmp_params.alpha};
        const std::vector<int> p_list = parse_int_list(cmp_p, "--p");
        const auto rows = helsteiner::compare_p_lengths(cmp_n, params, p_list);
        ordered_json j;
        j["command"] = "compare-p";
        j["input"] = {{"n", cmp_n}, {"p_list", p_list}, {"omega", params.omega},
                      {"alpha", params.alpha}};
        j["rows"] = ordered_json::array();
        for (const auto& row : rows) {
            ordered_json r;
            r["p"] = row.p;
            r["feasible"] = row.feasible;
            if (row.feasible) r["length"] = row.length;
            else r["length"] = nullptr;
            j["rows"].push_back(std::move(r));
        }
        j["library_version"] = helsteiner::library_version;
        emit(dump_json(j), cmp_output);
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const helsteiner::infeasible_error& e) {
        std::cerr << "error[infeasible]: " << e.what() << "\n";
        return 4;
    } catch (const std::domain_error& e) {
        std::cerr << "error[domain]: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[invalid-flags]: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error[invalid-flags]: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
}
