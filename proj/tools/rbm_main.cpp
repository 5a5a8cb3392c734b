// Command-line front end: validate / curve / transform / density / boundary
// / simulate / check / compare over a JSON model file. Outputs are
// deterministic: JSON with sorted keys, floats at 12 significant digits,
// CSV grids with fixed formatting.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rbm/bvp.hpp"
#include "rbm/curve.hpp"
#include "rbm/gluing.hpp"
#include "rbm/inversion.hpp"
#include "rbm/json_io.hpp"
#include "rbm/model.hpp"
#include "rbm/simulate.hpp"

namespace fs = std::filesystem;
using namespace rbm;
using rbm::io::json;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", io::round12(x));
    return buf;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    os << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
        os << "\n";
    }
    io::write_file(path.string(), os.str());
}

json transform_to_json(const TransformValue& tv) {
    json j;
    j["value_re"] = io::num(tv.value.real());
    j["value_im"] = io::num(tv.value.imag());
    j["est_error"] = io::num(tv.estimated_error);
    switch (tv.domain_tag) {
        case DomainTag::Interior: j["domain_tag"] = "interior"; break;
        case DomainTag::Boundary: j["domain_tag"] = "boundary"; break;
        case DomainTag::Continued: j["domain_tag"] = "continued"; break;
    }
    return j;
}

json mode_summary(const ModelParams& m) {
    json j;
    j["params"] = io::params_to_json(m);
    const BranchPoints bp = branch_points(m);
    j["branch_points"] = {{"q1", io::num(bp.q1)},
                          {"q2", io::num(bp.q2)},
                          {"p1", io::num(bp.p1)},
                          {"p2", io::num(bp.p2)}};
    const HyperbolaBranch h = bvp_contour(m, 8, bp.q2 + 10.0 * (bp.q2 - bp.q1));
    const char* side = h.side == HyperbolaSide::Plus
                           ? "plus"
                           : (h.side == HyperbolaSide::Minus ? "minus" : "degenerate_line");
    j["hyperbola_side"] = side;
    j["hyperbola_vertex"] = io::num(h.vertex);
    j["gluing_argument_sign"] = (m.wedge == Wedge::ThreeQuarter) ? 1 : -1;
    j["gluing_exponent"] = io::num(kPi / m.beta);
    j["index_evaluated_at"] = (m.wedge == Wedge::ThreeQuarter) ? "q2" : "q1";
    j["p0"] = io::num(pole_p0(m));
    j["chi"] = index_chi(m);
    return j;
}

int fail(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stationary reflected Brownian motion in the three-quarter plane"};
    app.require_subcommand(1);

    std::string model_path, out_dir = ".";
    double tol = 1e-10;
    app.add_option("-m,--model", model_path, "model parameter JSON")->required();
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("--tol", tol, "global tolerance")->check(CLI::Range(1e-14, 1e-2));

    auto* c_validate = app.add_subcommand("validate", "validate parameters, print key quantities");

    auto* c_curve = app.add_subcommand("curve", "emit contour, gluing and uniformization data");
    int curve_n = 400;
    double curve_qmax_mult = 20.0;
    c_curve->add_option("--n", curve_n, "contour sample count");
    c_curve->add_option("--qmax-mult", curve_qmax_mult, "contour extent in units of q2-q1");

    auto* c_transform = app.add_subcommand("transform", "evaluate A, B or L at a point");
    std::string which = "A";
    std::vector<double> at;
    c_transform->add_option("--which", which, "A, B or L")
        ->check(CLI::IsMember({"A", "B", "L"}));
    c_transform->add_option("--at", at, "p_re,p_im[,q_re,q_im]")->required()->delimiter(',');

    auto* c_density = app.add_subcommand("density", "invert the interior density on a grid");
    double dz1_min = -4.0, dz1_max = 7.0, dz2_min = -3.0, dz2_max = 4.0;
    int dn1 = 44, dn2 = 28;
    c_density->add_option("--z1-min", dz1_min);
    c_density->add_option("--z1-max", dz1_max);
    c_density->add_option("--z2-min", dz2_min);
    c_density->add_option("--z2-max", dz2_max);
    c_density->add_option("--n1", dn1);
    c_density->add_option("--n2", dn2);

    auto* c_boundary = app.add_subcommand("boundary", "invert the boundary densities");
    double bz_min = -12.0;
    int bn = 240;
    c_boundary->add_option("--z-min", bz_min);
    c_boundary->add_option("--n", bn);

    auto* c_simulate = app.add_subcommand("simulate", "Euler simulation of the reflected diffusion");
    SimConfig sim_cfg;
    c_simulate->add_option("--horizon", sim_cfg.horizon);
    c_simulate->add_option("--dt", sim_cfg.dt);
    c_simulate->add_option("--paths", sim_cfg.n_paths);
    c_simulate->add_option("--seed", sim_cfg.seed);
    c_simulate->add_option("--burn-in", sim_cfg.burn_in);

    auto* c_check = app.add_subcommand("check", "simulate and cross-validate the analytic pipeline");
    c_check->add_option("--horizon", sim_cfg.horizon);
    c_check->add_option("--dt", sim_cfg.dt);
    c_check->add_option("--paths", sim_cfg.n_paths);
    c_check->add_option("--seed", sim_cfg.seed);
    bool check_richardson = true;
    c_check->add_flag("--richardson,!--no-richardson", check_richardson,
                      "companion run at 2 dt to cancel the O(dt) bias");

    auto* c_compare = app.add_subcommand("compare", "three-quarter vs quarter formula table");

    CLI11_PARSE(app, argc, argv);

    try {
        const RawParams raw = io::load_raw_params(model_path);
        fs::create_directories(out_dir);
        const fs::path out(out_dir);

        if (c_compare->parsed()) {
            json j;
            for (Wedge w : {Wedge::ThreeQuarter, Wedge::Quarter}) {
                RawParams r = raw;
                r.wedge = w;
                const char* key = (w == Wedge::ThreeQuarter) ? "three_quarter" : "quarter";
                try {
                    j[key] = mode_summary(validate_params(r));
                } catch (const ModelError& e) {
                    j[key] = {{"invalid", e.what()}};
                }
            }
            const std::string text = io::dump_sorted(j);
            io::write_file((out / "compare.json").string(), text);
            std::cout << text;
            return 0;
        }

        const ModelParams m = validate_params(raw);

        if (c_validate->parsed()) {
            const MassConstants mc = mass_constants(m);
            json j;
            j["params"] = io::params_to_json(m);
            j["beta"] = io::num(m.beta);
            j["A0"] = io::num(mc.A0);
            j["B0"] = io::num(mc.B0);
            j["p0"] = io::num(pole_p0(m));
            j["chi"] = index_chi(m);
            if (m.quarter_convention)
                j["note"] = "quarter-mode ergodicity follows the quadrant convention";
            std::cout << io::dump_sorted(j);
            return 0;
        }

        if (c_curve->parsed()) {
            const BranchPoints bp = branch_points(m);
            json bpj;
            bpj["params"] = io::params_to_json(m);
            bpj["q1"] = io::num(bp.q1);
            bpj["q2"] = io::num(bp.q2);
            bpj["p1"] = io::num(bp.p1);
            bpj["p2"] = io::num(bp.p2);
            io::write_file((out / "branch_points.json").string(), io::dump_sorted(bpj));

            const double q_anchor = (m.wedge == Wedge::ThreeQuarter) ? bp.q2 : bp.q1;
            const HyperbolaBranch h =
                bvp_contour(m, curve_n, q_anchor + curve_qmax_mult * (bp.q2 - bp.q1));
            std::vector<std::vector<double>> rows;
            const Gluing gl = make_gluing(m);
            std::vector<std::vector<double>> wrows;
            for (const auto& n : h.nodes) {
                rows.push_back({n.q, n.t.real(), n.t.imag()});
                const Complex w = gl.w(n.t);
                wrows.push_back({n.t.real(), n.t.imag(), w.real(), w.imag()});
            }
            write_csv(out / "contour.csv", "q,t_re,t_im", rows);
            write_csv(out / "gluing.csv", "p_re,p_im,w_re,w_im", wrows);

            std::vector<std::vector<double>> urows;
            for (int k = 0; k < 256; ++k) {
                const double ang = 2.0 * kPi * k / 256;
                for (double rad : {0.5, 1.0, 2.0}) {
                    const UniformizationPoint up = uniformize(m, std::polar(rad, ang));
                    urows.push_back({up.s.real(), up.s.imag(), up.p_of_s.real(),
                                     up.p_of_s.imag(), up.q_of_s.real(), up.q_of_s.imag()});
                }
            }
            write_csv(out / "uniformization.csv", "s_re,s_im,p_re,p_im,q_re,q_im", urows);
            std::cout << "wrote branch_points.json, contour.csv, gluing.csv, "
                         "uniformization.csv to "
                      << out_dir << "\n";
            return 0;
        }

        if (c_transform->parsed()) {
            BvpSolution::Options opt;
            opt.tol = std::min(tol, 1e-8);
            const Transforms tr(m, opt);
            TransformValue tv;
            if (which == "L") {
                if (at.size() != 4) return fail("--which L needs --at p_re,p_im,q_re,q_im");
                tv = tr.eval_L(Complex(at[0], at[1]), Complex(at[2], at[3]));
            } else {
                if (at.size() != 2) return fail("--which A|B needs --at re,im");
                tv = (which == "A") ? tr.eval_A(Complex(at[0], at[1]))
                                    : tr.eval_B(Complex(at[0], at[1]));
            }
            json j = transform_to_json(tv);
            j["params"] = io::params_to_json(m);
            j["which"] = which;
            std::cout << io::dump_sorted(j);
            return 0;
        }

        if (c_density->parsed()) {
            const Transforms tr(m);
            const AxisSpec ax1{dz1_min, dz1_max, dn1};
            const AxisSpec ax2{dz2_min, dz2_max, dn2};
            const DensityGrid g = interior_density_grid(tr, ax1, ax2);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < ax1.n; ++i)
                for (int k = 0; k < ax2.n; ++k)
                    rows.push_back({ax1.center(i), ax2.center(k),
                                    g.values[static_cast<size_t>(i) * ax2.n + k],
                                    g.raw[static_cast<size_t>(i) * ax2.n + k]});
            write_csv(out / "density.csv", "z1,z2,pi,pi_raw", rows);
            json j;
            j["params"] = io::params_to_json(m);
            j["mass"] = io::num(g.mass);
            j["mass_target"] = 1.0;
            j["min_raw"] = io::num(g.min_raw);
            io::write_file((out / "density_mass.json").string(), io::dump_sorted(j));
            std::cout << "mass = " << fmt(g.mass) << " (target 1)\n";
            return 0;
        }

        if (c_boundary->parsed()) {
            const Transforms tr(m);
            const MassConstants mc = mass_constants(m);
            const AxisSpec ax{bz_min, 0.0, bn};
            const DensityGrid g1 = boundary_density_grid(tr, 1, ax);
            const DensityGrid g2 = boundary_density_grid(tr, 2, ax);
            std::vector<std::vector<double>> rows;
            for (int i = 0; i < ax.n; ++i)
                rows.push_back({ax.center(i), g1.values[i], g2.values[i]});
            write_csv(out / "boundary.csv", "z,nu1,nu2", rows);
            json j;
            j["params"] = io::params_to_json(m);
            j["nu1_mass"] = io::num(g1.mass);
            j["nu1_target"] = io::num(mc.A0);
            j["nu2_mass"] = io::num(g2.mass);
            j["nu2_target"] = io::num(mc.B0);
            io::write_file((out / "boundary_mass.json").string(), io::dump_sorted(j));
            std::cout << "nu1 mass = " << fmt(g1.mass) << " (target " << fmt(mc.A0)
                      << "), nu2 mass = " << fmt(g2.mass) << " (target " << fmt(mc.B0)
                      << ")\n";
            return 0;
        }

        if (c_simulate->parsed() || c_check->parsed()) {
            if (m.wedge != Wedge::ThreeQuarter)
                return fail("simulation is defined for the three-quarter wedge");
            const EmpiricalMeasures meas = run(m, sim_cfg);

            if (c_simulate->parsed()) {
                const HistSpec& hs = sim_cfg.hist;
                std::vector<std::vector<double>> rows;
                for (int i = 0; i < hs.nx; ++i)
                    for (int k = 0; k < hs.ny; ++k)
                        rows.push_back(
                            {hs.x_min + (i + 0.5) * (hs.x_max - hs.x_min) / hs.nx,
                             hs.y_min + (k + 0.5) * (hs.y_max - hs.y_min) / hs.ny,
                             meas.hist[static_cast<size_t>(i) * hs.ny + k],
                             meas.hist_s1[static_cast<size_t>(i) * hs.ny + k]});
                write_csv(out / "sim_hist.csv", "z1,z2,pi_hat,pi_hat_s1", rows);

                std::vector<std::vector<double>> brows;
                const double dxb = hs.boundary_extent / hs.n_boundary_bins;
                for (int b = 0; b < hs.n_boundary_bins; ++b)
                    brows.push_back({-(b + 0.5) * dxb, meas.boundary1[b], meas.boundary2[b]});
                write_csv(out / "sim_boundary.csv", "z,nu1_hat,nu2_hat", brows);

                json j;
                j["params"] = io::params_to_json(m);
                j["horizon"] = io::num(sim_cfg.horizon);
                j["dt"] = io::num(sim_cfg.dt);
                j["paths"] = sim_cfg.n_paths;
                j["seed"] = sim_cfg.seed;
                j["l1_rate"] = io::num(meas.l1_rate);
                j["l1_rate_se"] = io::num(meas.l1_rate_se);
                j["l2_rate"] = io::num(meas.l2_rate);
                j["l2_rate_se"] = io::num(meas.l2_rate_se);
                j["mass_s1"] = io::num(meas.mass_s1);
                j["mass_s2"] = io::num(meas.mass_s2);
                j["corner_resamples"] = meas.corner_resamples;
                io::write_file((out / "sim_report.json").string(), io::dump_sorted(j));
                std::cout << io::dump_sorted(j);
                return 0;
            }

            const Transforms tr(m);
            std::optional<EmpiricalMeasures> coarse;
            if (check_richardson) {
                SimConfig c2 = sim_cfg;
                c2.dt *= 2.0;
                c2.seed = sim_cfg.seed + 1;
                coarse = run(m, c2);
            }
            const ValidationReport rep =
                validation_report(tr, meas, coarse ? &*coarse : nullptr);
            json j;
            j["params"] = io::params_to_json(m);
            j["n_pass"] = rep.n_pass;
            j["n_points"] = static_cast<int>(rep.rows.size());
            j["n_pass_catalytic"] = rep.n_pass_F;
            j["max_residual_over_se"] = io::num(rep.max_residual_over_se);
            j["richardson"] = check_richardson;
            json rows = json::array();
            for (const auto& row : rep.rows) {
                rows.push_back({{"x", io::num(row.x)},
                                {"y", io::num(row.y)},
                                {"residual_abs", io::num(std::abs(row.residual))},
                                {"three_se", io::num(3.0 * row.se)},
                                {"pass", row.pass},
                                {"catalytic_gap", io::num(std::abs(row.F1 - row.F2))},
                                {"three_se_catalytic", io::num(3.0 * row.se_F)},
                                {"pass_catalytic", row.pass_F}});
            }
            j["rows"] = rows;
            io::write_file((out / "check_report.json").string(), io::dump_sorted(j));
            std::cout << "functional equation: " << rep.n_pass << "/" << rep.rows.size()
                      << " points within 3 SE (catalytic: " << rep.n_pass_F << "/"
                      << rep.rows.size() << ")\n";
            return 0;
        }

        return fail("no subcommand handled");
    } catch (const io::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        return fail(e.what());
    } catch (const BvpError& e) {
        return fail(e.what());
    } catch (const InversionError& e) {
        return fail(e.what());
    } catch (const SimulationError& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}
