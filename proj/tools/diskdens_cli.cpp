#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "diskdens/errors.hpp"
#include "diskdens/orbits.hpp"
#include "diskdens/profiles.hpp"
#include "diskdens/quantum.hpp"
#include "diskdens/semiclassical.hpp"

using namespace diskdens;
using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 2;
constexpr int exit_validity = 3;

using Cell = std::variant<double, long long, std::string>;

struct Table {
    json meta = json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string meta_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

void write_csv(std::ostream& os, const Table& t) {
    for (const auto& [k, v] : t.meta.items()) os << "# " << k << ": " << meta_text(v) << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            std::visit(
                [&os](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, double>) os << format_double(x);
                    else os << x;
                },
                row[i]);
        }
        os << "\n";
    }
}

void write_json(std::ostream& os, const Table& t) {
    json doc;
    doc["meta"] = t.meta;
    doc["columns"] = t.columns;
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) {
            std::visit(
                [&r](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(x)) r.push_back(x);
                        else r.push_back(nullptr);
                    } else {
                        r.push_back(x);
                    }
                },
                c);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(1) << "\n";
}

void emit(const Table& t, const std::string& out, const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty() && out != "-") {
        file.open(out);
        if (!file) throw DomainError("cannot open output file '" + out + "'");
        os = &file;
    }
    if (format == "json") write_json(*os, t);
    else write_csv(*os, t);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

json config_meta(const TruncationConfig& c) {
    json pf = json::array();
    for (auto [v, w] : c.pitchfork_classes) pf.push_back(std::to_string(v) + "," + std::to_string(w));
    return json{{"k_max_radial", c.k_max_radial},
                {"k_max_diameter", c.k_max_diameter},
                {"include_tangent_pairs", c.include_tangent_pairs},
                {"pitchfork_classes", pf},
                {"switch_fraction", c.switch_fraction},
                {"overlap_threshold_hbar", c.overlap_threshold}};
}

struct DensityOpts {
    int N = 0;
    int grid = 200;
    std::string channels = "rho";
    std::string method = "quantum";
    int kmax_radial = 2;
    int kmax_diameter = 10;
    bool tangent = false;
    double switch_fraction = 0.5;
    double overlap = 1.0;
};

Table run_density(const DensityOpts& o) {
    std::vector<Channel> chans;
    for (const auto& c : split(o.channels, ',')) chans.push_back(parse_channel(c));
    if (chans.empty()) throw DomainError("no channels given");
    bool qm = o.method == "quantum" || o.method == "both";
    bool sc = o.method == "semiclassical" || o.method == "both";
    auto grid = linear_grid(o.grid);
    double lt = smooth_fermi_energy(o.N);

    Table t;
    t.meta["command"] = "density";
    t.meta["N"] = o.N;
    t.meta["method"] = o.method;
    t.meta["lambda_tilde"] = lt;
    t.meta["p_lambda"] = std::sqrt(lt);
    t.columns.push_back("r");
    std::vector<std::vector<double>> cols;

    if (qm) {
        QuantumSystem sys(o.N);
        t.meta["lambda"] = sys.lambda();
        for (auto ch : chans) {
            auto full = quantum_profile(sys, ch, grid, false);
            double smooth = tf_value(ch, lt);
            std::vector<double> d(full.values);
            for (auto& x : d) x -= smooth;
            t.columns.push_back("qm_" + channel_name(ch));
            cols.push_back(full.values);
            t.columns.push_back("qm_delta_" + channel_name(ch));
            cols.push_back(d);
        }
    }
    bool kinetic_sc = false;
    double r_trunc = 0;
    if (sc) {
        TruncationConfig cfg;
        cfg.k_max_radial = o.kmax_radial;
        cfg.k_max_diameter = o.kmax_diameter;
        cfg.include_tangent_pairs = o.tangent;
        cfg.switch_fraction = o.switch_fraction;
        cfg.overlap_threshold = o.overlap;
        cfg.pitchfork_classes.clear();
        for (int k = 1; k <= o.kmax_radial; ++k) cfg.pitchfork_classes.push_back({2 * k + 1, k});
        SemiclassicalDensity dens(o.N, cfg);
        t.meta["truncation"] = config_meta(cfg);
        r_trunc = dens.kinetic_truncation_radius();
        for (auto ch : chans) {
            t.columns.push_back("sc_delta_" + channel_name(ch));
            cols.push_back(semiclassical_profile(dens, o.N, ch, grid).values);
            kinetic_sc = kinetic_sc || ch != Channel::rho;
        }
        if (kinetic_sc) {
            t.meta["kinetic_truncated_above_r"] = r_trunc;
            t.columns.push_back("sc_truncated");
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        for (const auto& c : cols) row.push_back(c[i]);
        if (kinetic_sc) row.push_back(static_cast<long long>(grid[i] > r_trunc ? 1 : 0));
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct OrbitOpts {
    std::string classes = "3,1";
    double r_min = 0.01;
    double r_max = 1.0;
    int steps = 100;
    int N = 606;
};

void add_orbit_row(Table& t, const std::string& cls, const OrbitInstance& o) {
    t.rows.push_back({cls, o.r, o.cls.label(), o.alpha, o.beta, o.length, o.jacobian, o.q_mismatch,
                      static_cast<long long>(o.morse ? *o.morse : -1), static_cast<long long>(o.ghost ? 1 : 0),
                      static_cast<long long>(o.degeneracy)});
}

Table run_orbits(const OrbitOpts& o, const std::string& command) {
    std::vector<std::pair<int, int>> classes;
    for (const auto& c : split(o.classes, ';')) {
        auto parts = split(c, ',');
        if (parts.size() != 2) throw DomainError("class must be given as v,w, got '" + c + "'");
        int v = std::stoi(parts[0]), w = std::stoi(parts[1]);
        validate_npo_class(v, w);
        classes.push_back({v, w});
    }
    if (o.steps < 2) throw DomainError("steps must be >= 2");
    if (!(o.r_min > 0 && o.r_max <= units::R && o.r_min < o.r_max)) throw DomainError("need 0 < rmin < rmax <= R");
    double p = std::sqrt(smooth_fermi_energy(o.N));
    Table t;
    t.meta["command"] = command;
    t.meta["N"] = o.N;
    t.meta["p_lambda"] = p;
    t.meta["morse_note"] = "-1 marks a critical starting point or a ghost";
    json events = json::array();
    for (auto [v, w] : classes) {
        for (const auto& e : bifurcations(v, w)) {
            std::string kids;
            for (const auto& c : e.children) kids += (kids.empty() ? "" : " ") + c.label();
            events.push_back(std::to_string(v) + "," + std::to_string(w) + " " + bifurcation_type_name(e.type) +
                             " at r=" + format_double(e.radius) + ": " + e.parent.label() + " -> " + kids);
        }
    }
    t.meta["bifurcations"] = events;
    t.columns = {"class", "r", "orbit", "alpha", "beta", "L", "J", "Q", "mu", "ghost", "degeneracy"};
    for (auto [v, w] : classes) {
        std::string name = std::to_string(v) + "," + std::to_string(w);
        auto fam = npo_family(v, w);
        for (int i = 0; i < o.steps; ++i) {
            double r = o.r_min + (o.r_max - o.r_min) * i / (o.steps - 1);
            if (fam == NpoFamily::Odd) {
                add_orbit_row(t, name, odd_npo_continued(w, r, p));
            } else {
                for (const auto& inst : solve_npo(v, w, r, p)) add_orbit_row(t, name, inst);
            }
            add_orbit_row(t, name, po_properties(v, w, r, p));
        }
    }
    return t;
}

struct ShellOpts {
    int n_min = 2;
    int n_max = 650;
    int v_max = 10;
    int w_max = 3;
};

Table run_shells(const ShellOpts& o) {
    if (o.n_min < 2 || o.n_max < o.n_min) throw DomainError("need 2 <= nmin <= nmax");
    if (o.v_max < 2 || o.w_max < 1) throw DomainError("need vmax >= 2 and wmax >= 1");
    auto spec = build_spectrum(1.2 * smooth_fermi_energy(o.n_max) + 50.0);
    Table t;
    t.meta["command"] = "shells";
    t.meta["n_min"] = o.n_min;
    t.meta["n_max"] = o.n_max;
    t.meta["v_max"] = o.v_max;
    t.meta["w_max"] = o.w_max;
    t.columns = {"N", "lambda", "lambda_tilde", "dE_exact", "dE_semiclassical", "dN_at_lambda_tilde"};
    int count = 0;
    double energy = 0;
    int valid = 0;
    for (const auto& lv : spec.levels) {
        count += lv.degeneracy;
        energy += lv.degeneracy * lv.energy;
        if (count > o.n_max) break;
        if (count < o.n_min) continue;
        double lt = smooth_fermi_energy(count);
        t.rows.push_back({static_cast<long long>(count), lv.energy, lt, energy - smooth_total_energy(lt),
                          shell_correction_semiclassical(count, o.v_max, o.w_max),
                          static_cast<long long>(counting_exact(spec, lt) - count)});
        ++valid;
    }
    int even = o.n_max / 2 - (o.n_min + 1) / 2 + 1;
    t.meta["skipped_open_shell_even_N"] = even - valid;
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum and semiclassical spatial densities of the circular billiard"};
    app.require_subcommand(1);
    std::string out, format = "csv";
    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--out", out, "output file (default stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    DensityOpts dopt;
    auto* density = app.add_subcommand("density", "density profiles on a radial grid");
    density->add_option("--N", dopt.N, "even particle number")->required();
    density->add_option("--grid", dopt.grid, "number of grid points on [0, R]")->check(CLI::Range(2, 1000000));
    density->add_option("--channels", dopt.channels, "comma list of rho,tau,tau1,xi");
    density->add_option("--method", dopt.method)->check(CLI::IsMember({"quantum", "semiclassical", "both"}));
    density->add_option("--kmax-radial", dopt.kmax_radial);
    density->add_option("--kmax-diameter", dopt.kmax_diameter);
    density->add_flag("--tangent-pairs", dopt.tangent, "include tangent-bifurcation pairs as isolated orbits");
    density->add_option("--switch-fraction", dopt.switch_fraction);
    density->add_option("--overlap-threshold", dopt.overlap, "minimal action gap between bifurcations (hbar)");
    add_io(density);

    OrbitOpts oopt;
    int v = 3, w = 1;
    auto* orbits = app.add_subcommand("orbits", "sweep one (v,w) class over r");
    orbits->add_option("--v", v)->required();
    orbits->add_option("--w", w)->required();
    orbits->add_option("--rmin", oopt.r_min);
    orbits->add_option("--rmax", oopt.r_max);
    orbits->add_option("--steps", oopt.steps);
    orbits->add_option("--N", oopt.N, "particle number fixing p for the Jacobian");
    add_io(orbits);

    OrbitOpts bopt;
    bopt.classes = "2,1;3,1;4,1;5,1;5,2";
    auto* bif = app.add_subcommand("bifurcations", "orbit sweep over a list of classes");
    bif->add_option("--classes", bopt.classes, "semicolon list such as 3,1;4,1");
    bif->add_option("--rmin", bopt.r_min);
    bif->add_option("--rmax", bopt.r_max);
    bif->add_option("--steps", bopt.steps);
    bif->add_option("--N", bopt.N);
    add_io(bif);

    ShellOpts sopt;
    auto* shells = app.add_subcommand("shells", "exact and semiclassical shell-correction energies");
    shells->add_option("--nmin", sopt.n_min);
    shells->add_option("--nmax", sopt.n_max);
    shells->add_option("--vmax", sopt.v_max);
    shells->add_option("--wmax", sopt.w_max);
    add_io(shells);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        Table t;
        if (*density) t = run_density(dopt);
        else if (*orbits) {
            oopt.classes = std::to_string(v) + "," + std::to_string(w);
            t = run_orbits(oopt, "orbits");
        } else if (*bif) t = run_orbits(bopt, "bifurcations");
        else t = run_shells(sopt);
        emit(t, out, format);
    } catch (const OpenShellError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const OverlapError& e) {
        std::cerr << "error: semiclassical plan not valid here: " << e.what() << "\n";
        return exit_validity;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        // amplitude or ghost failures mean the requested evaluation is outside the method
        std::cerr << "error: " << e.what() << "\n";
        return exit_validity;
    }
    return exit_ok;
}
