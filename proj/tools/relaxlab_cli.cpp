// relaxlab: energy accounting and sweeps for n-axially symmetric harmonic maps with defects.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relaxlab/experiments.hpp"
#include "relaxlab/minimal_connection.hpp"
#include "relaxlab/report_io.hpp"

using namespace relaxlab;

namespace {

constexpr int exit_input_error = 2;
constexpr int exit_not_converged = 3;

struct Common {
    std::string out;
    std::string format = "csv";
    std::string spec_path;
    std::size_t workers = 1;
};

nlohmann::json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open " + path);
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

// values from --spec fill in whatever was not given on the command line
template <class T>
void take(const nlohmann::json& spec, const char* key, T& dst, const CLI::Option* opt) {
    if (spec.contains(key) && (opt == nullptr || opt->count() == 0)) dst = spec.at(key).get<T>();
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::invalid_argument("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void emit(const Common& c, const Table& t) {
    Output out(c.out);
    write_table(out.stream(), t, parse_format(c.format));
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Output file (default stdout)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--spec", c.spec_path, "JSON file with parameters");
    sub->add_option("--workers", c.workers, "Concurrent sweep points")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relaxlab: relaxed energies of axially symmetric harmonic maps"};
    app.require_subcommand(1);

    // t0-energy
    Common t0c;
    int t0_n = 2;
    double t0_alpha = 0.25;
    std::size_t t0_nodes = 4096;
    auto* t0 = app.add_subcommand("t0-energy", "Energy of T0: graph of u0 plus the axis with multiplicity n");
    auto* t0_n_opt = t0->add_option("--n", t0_n, "Degree n >= 1");
    auto* t0_a_opt = t0->add_option("--alpha", t0_alpha, "alpha in [0, 1/4]");
    auto* t0_nodes_opt = t0->add_option("--nodes", t0_nodes, "Radial nodes");
    add_common(t0, t0c);

    // relaxation-check
    Common rc;
    int rc_n = 2;
    double rc_alpha = 0.25;
    std::vector<double> rc_eps{0.2, 0.1, 0.05, 0.025};
    std::size_t rc_nodes = 32768;
    auto* rel = app.add_subcommand("relaxation-check", "Slice energy of u_eps against its eps -> 0 limit");
    auto* rc_n_opt = rel->add_option("--n", rc_n, "Degree n >= 1");
    auto* rc_a_opt = rel->add_option("--alpha", rc_alpha, "alpha in (0, 1/4]");
    auto* rc_e_opt = rel->add_option("--eps", rc_eps, "eps values in (0, 1]");
    auto* rc_nodes_opt = rel->add_option("--nodes", rc_nodes, "Radial nodes");
    add_common(rel, rc);

    // proposition-sweep
    Common sc;
    SweepSpec sw;
    auto* sweep = app.add_subcommand("proposition-sweep", "Cone-constrained profile problem over (alpha, a, C0, s~)");
    auto* sw_n_opt = sweep->add_option("--n", sw.n, "Degree n >= 1");
    auto* sw_a_opt = sweep->add_option("--alpha", sw.alphas, "alpha values in (0, 1/4]");
    auto* sw_f_opt = sweep->add_option("--a-fraction", sw.a_fractions, "a / alpha values in (0, 1]");
    auto* sw_c_opt = sweep->add_option("--c0", sw.c0s, "C0 values (s = C0 a)");
    auto* sw_nodes_opt = sweep->add_option("--nodes", sw.nodes, "Grid nodes on [s, 1]");
    auto* sw_b_opt = sweep->add_option("--b", sw.b, "")->group("");
    std::string escape_out;
    sweep->add_option("--escape-out", escape_out, "Also write the escape-case table here");
    add_common(sweep, sc);

    // dipole-tradeoff
    Common dc;
    DipoleSpec dp;
    auto* dip = app.add_subcommand("dipole-tradeoff", "Remove an axis segment and relax the map in a box around it");
    auto* dp_n_opt = dip->add_option("--n", dp.n, "Degree n >= 1");
    auto* dp_a_opt = dip->add_option("--alpha", dp.alpha, "alpha in (0, 1/4]");
    auto* dp_d_opt = dip->add_option("--delta", dp.deltas, "Half-lengths of the removed segment, in (0, 0.5]");
    auto* dp_b_opt = dip->add_option("--box", dp.box_factors, "r_box / delta values");
    auto* dp_nodes_opt = dip->add_option("--nodes", dp.r_nodes, "Radial nodes (z uses 4/3 as many)");
    auto* dp_seed_opt = dip->add_option("--seed", dp.seed, "Seed for the initial perturbation");
    add_common(dip, dc);

    // sigma
    Common gc;
    std::string sigma_file;
    auto* sig = app.add_subcommand("sigma", "Minimal connection of a charge configuration");
    sig->add_option("config", sigma_file, "Charge configuration JSON");
    add_common(sig, gc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    try {
        if (t0->parsed()) {
            if (!t0c.spec_path.empty()) {
                const auto s = load_json(t0c.spec_path);
                take(s, "n", t0_n, t0_n_opt);
                take(s, "alpha", t0_alpha, t0_a_opt);
                take(s, "nodes", t0_nodes, t0_nodes_opt);
            }
            emit(t0c, to_table(t0_energy(t0_n, t0_alpha, t0_nodes)));
            return 0;
        }
        if (rel->parsed()) {
            if (!rc.spec_path.empty()) {
                const auto s = load_json(rc.spec_path);
                take(s, "n", rc_n, rc_n_opt);
                take(s, "alpha", rc_alpha, rc_a_opt);
                take(s, "eps", rc_eps, rc_e_opt);
                take(s, "nodes", rc_nodes, rc_nodes_opt);
            }
            emit(rc, to_table(relaxation_check(rc_n, rc_alpha, rc_eps, rc_nodes)));
            return 0;
        }
        if (sweep->parsed()) {
            if (!sc.spec_path.empty()) {
                const auto s = load_json(sc.spec_path);
                take(s, "n", sw.n, sw_n_opt);
                take(s, "alpha", sw.alphas, sw_a_opt);
                take(s, "a_fraction", sw.a_fractions, sw_f_opt);
                take(s, "c0", sw.c0s, sw_c_opt);
                take(s, "nodes", sw.nodes, sw_nodes_opt);
                take(s, "b", sw.b, sw_b_opt);
            }
            sw.workers = sc.workers;
            const SweepReport rep = proposition_sweep(sw);
            emit(sc, to_table(rep));
            if (!escape_out.empty()) {
                Output out(escape_out);
                write_table(out.stream(), escape_table(rep), parse_format(sc.format));
            }
            if (!rep.all_converged) {
                std::cerr << "proposition-sweep: optimizer did not converge at some points\n";
                return exit_not_converged;
            }
            return 0;
        }
        if (dip->parsed()) {
            if (!dc.spec_path.empty()) {
                const auto s = load_json(dc.spec_path);
                take(s, "n", dp.n, dp_n_opt);
                take(s, "alpha", dp.alpha, dp_a_opt);
                take(s, "delta", dp.deltas, dp_d_opt);
                take(s, "box", dp.box_factors, dp_b_opt);
                take(s, "nodes", dp.r_nodes, dp_nodes_opt);
                take(s, "seed", dp.seed, dp_seed_opt);
            }
            dp.z_nodes = 2 * ((dp.r_nodes * 4 / 3) / 2) + 1;
            dp.workers = dc.workers;
            const DipoleReport rep = dipole_tradeoff(dp);
            emit(dc, to_table(rep));
            if (!rep.all_converged) {
                std::cerr << "dipole-tradeoff: optimizer did not converge at some points\n";
                return exit_not_converged;
            }
            return 0;
        }
        if (sig->parsed()) {
            const std::string path = !sigma_file.empty() ? sigma_file : gc.spec_path;
            if (path.empty()) throw std::invalid_argument("sigma: give a configuration file");
            const SigmaReport rep = sigma_report(config_from_json(load_json(path)));
            Output out(gc.out);
            if (parse_format(gc.format) == OutputFormat::json) {
                out.stream() << to_json(rep).dump(2) << '\n';
            } else {
                Table t;
                t.columns = {"length", "mass", "primal", "dual", "matching"};
                std::string m;
                for (std::size_t i = 0; i < rep.primal.matching.size(); ++i) {
                    m += (i ? " " : "") + std::to_string(rep.primal.matching[i]);
                }
                t.add_row({rep.primal.length, rep.primal.mass, rep.primal.length, rep.dual, m});
                write_csv(out.stream(), t);
            }
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
