// cli.hpp
// Batch front end. Every subcommand writes one machine-readable report and returns
// 0 when all checked invariants hold, 1 when one fails, 2 on invalid input.

#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hardycheck/discrimination.hpp"
#include "hardycheck/geometry.hpp"
#include "hardycheck/hardy.hpp"
#include "hardycheck/json_io.hpp"
#include "hardycheck/lhv.hpp"
#include "hardycheck/postselect.hpp"
#include "hardycheck/qstate.hpp"
#include "hardycheck/sweep.hpp"
#include "hardycheck/wxhh.hpp"

namespace hardycheck::cli {

inline constexpr const char* tool_version = "hardycheck 1.0.0";

enum exit_code : int { ok = 0, check_failed = 1, bad_input = 2 };

inline json tolerances() {
    return json{{"input_norm", tol::input_norm},
                {"constructed", tol::constructed},
                {"angle_margin", tol::angle_margin},
                {"vanishing", tol::vanishing},
                {"route_agreement", 1e-12},
                {"ledger_section2", 1e-12},
                {"ledger_postselected", 1e-10},
                {"rewrite_residual", 1e-10},
                {"max_entangled_gap", 1e-12},
                {"lhv_residual", 1e-8},
                {"lhv_margin", 1e-10}};
}

inline json envelope(const std::string& command, json config) {
    return json{{"tool", tool_version}, {"command", command}, {"config", std::move(config)}, {"tolerances", tolerances()}};
}

// ---------------------------------------------------------------------------

inline int hardy_max(json& report) {
    HardyOptimum o = optimize_hardy();
    const double a_closed = hardy_a_star_closed();
    const double p_closed = hardy_p_max_closed();
    const bool pass = std::abs(o.p_max - p_closed) <= 1e-9 && std::abs(o.a_star - a_closed) <= 1e-6;
    report["a_star"] = o.a_star;
    report["p_max"] = o.p_max;
    report["a_star_closed_form"] = a_closed;
    report["p_max_closed_form"] = p_closed;
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

inline int ledger(json& report, double theta) {
    HardyParams p = HardyParams::from_theta(theta);
    BipartiteKet psi = hardy_state(theta);
    Ledger hardy = hardy_ledger(theta);
    Ledger gold = goldstein_ledger(theta);
    report["state"] = to_json(psi);
    report["a"] = p.a;
    report["b"] = p.b;
    report["N"] = p.n;
    report["partial_entropy"] = partial_entropy(psi);
    report["p_ominus_ominus_closed_form"] = p_hardy(p.a);
    report["hardy"] = to_json(hardy);
    report["goldstein"] = to_json(gold);
    bool pass = true;
    for (const Ledger* l : {&hardy, &gold})
        for (const auto& c : l->claims())
            if (c.target.kind == TargetKind::exact && !c.pass) pass = false;
    if (theta > 0.0 && theta < pi / 2.0) {
        Ledger forms = verify_rewrite_forms(theta);
        report["rewrite_forms"] = to_json(forms);
        pass = pass && forms.all_pass();
    }
    const double direct = joint_prob(psi, hardy_b_basis(theta).ominus, hardy_b_basis(theta).ominus);
    report["closed_form_deviation"] = std::abs(direct - p_hardy(p.a));
    pass = pass && std::abs(direct - p_hardy(p.a)) <= 1e-12;
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

inline int generalized(json& report, const ProofAngles& angles) {
    ProofContext c(angles);
    OminusClosed closed = p_joint_ominus_closed(c.geometry, angles);
    const double direct = c.p_ominus_ominus();
    Ledger residuals = rewrite_residuals(angles);
    Ledger lh = generalized_ledger(c, ProofVersion::hardy);
    Ledger lg = generalized_ledger(c, ProofVersion::goldstein);
    TwoRoutes minus = p_inconclusive_minus(c);
    TwoRoutes ominus = p_inconclusive_ominus(c);
    GapPair g = gaps(c);

    report["geometry"] = to_json(c.geometry);
    report["overlap"] = c.bases.hat1.overlap();
    report["rewrite_residuals"] = to_json(residuals);
    report["hardy_ledger"] = to_json(lh);
    report["goldstein_ledger"] = to_json(lg);
    report["p_ominus_ominus"] = json{{"direct", direct},
                                     {"mm1", closed.mm1},
                                     {"mm2_consistent", closed.mm2_consistent},
                                     {"mm2_printed", closed.mm2_printed}};
    report["p_inconclusive_minus"] = to_json(minus);
    report["p_inconclusive_ominus"] = to_json(ominus);
    report["gap_hardy"] = g.hardy.gap;
    report["gap_goldstein"] = g.goldstein.gap;
    report["typo_report"] = json{{"mm2_printed_deviation", std::abs(closed.mm2_printed - closed.mm1)},
                                 {"delta_consistent", c.geometry.delta},
                                 {"delta_printed", number(c.geometry.delta_printed)},
                                 {"delta_printed_deviation", number(delta_printed_deviation(c.geometry))}};

    bool pass = residuals.all_pass() && std::abs(closed.mm1 - direct) <= 1e-12 &&
                std::abs(closed.mm2_consistent - closed.mm1) <= 1e-12 && minus.disagreement() <= 1e-12 &&
                ominus.disagreement() <= 1e-12;
    for (const Ledger* l : {&lh, &lg})
        for (const auto& cl : l->claims())
            if (cl.target.kind == TargetKind::exact && !cl.pass) pass = false;
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

inline int sweep_report(const SweepResult& r, json& report, std::string& csv, bool want_csv) {
    report["result"] = to_json(r);
    bool pass = true;
    json checks = json::array();
    for (const auto& s : r.slices) {
        if (s.points == 0) continue;
        bool slice_ok = s.max_route_deviation <= 1e-12 && s.max_mm1_deviation <= 1e-12 &&
                        s.min_probability >= -1e-12 && s.max_probability <= 1.0 + 1e-12;
        // Maximally entangled slice: no admissible angles may give a positive gap.
        const bool maximal = std::abs(s.theta - pi / 2.0) <= 1e-6;
        if (maximal) slice_ok = slice_ok && s.hardy.value <= 1e-12 && s.goldstein.value <= 1e-12;
        checks.push_back(json{{"theta", s.theta}, {"maximally_entangled", maximal}, {"pass", slice_ok}});
        pass = pass && slice_ok;
    }
    report["checks"] = checks;
    report["pass"] = pass;
    if (want_csv) csv = sweep_csv(r);
    return pass ? ok : check_failed;
}

inline int wxhh(json& report, double tau1, double tau2) {
    TapResult t = tap_postselect({tau1, tau2});
    report["tau1"] = tau1;
    report["tau2"] = tau2;
    report["Q"] = t.q;
    report["keep_probability"] = t.keep_probability;
    report["effective_state"] = to_json(t.effective);
    report["entropy"] = partial_entropy(t.effective);
    bool pass = std::abs(t.keep_probability - (1.0 + t.q * t.q) / 2.0) <= 1e-12;
    if (t.q > 0.0 && t.q < 1.0) {
        WxhhAnalysis w = wxhh_ledger(t.q);
        report["theta_equivalent"] = w.theta_eff;
        report["a_equivalent"] = w.a_eff;
        report["settings"] = json{{"A1", to_json(w.settings.a1)},
                                  {"B1", to_json(w.settings.b1)},
                                  {"A2", to_json(w.settings.a2)},
                                  {"B2", to_json(w.settings.b2)}};
        report["ledger"] = to_json(w.ledger);
        const double dev = selection_order_deviation({tau1, tau2}, w.settings.b1, w.settings.b2);
        report["selection_order_deviation"] = dev;
        pass = pass && w.ledger.all_pass() && dev <= 1e-12 && w.entropy < ln2;
    } else {
        report["ledger"] = nullptr;
        report["note"] = t.q == 0.0 ? "Q = 0: the kept branch is a product state"
                                    : "Q = 1: the kept state is maximally entangled and no Hardy ledger exists";
    }
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

inline int lhv(json& report, double theta, bool postselected, double alpha, double beta) {
    CorrelationTable table = postselected ? postselected_table({theta, alpha, beta}) : hardy_table(theta);
    LhvVerdict v = lhv_feasible(table);
    report["table"] = to_json(table);
    report["verdict"] = to_json(v);
    const bool pass = v.feasible ? v.residual <= 1e-8 : (v.certificate_value > 1e-10 && v.certificate_max_strategy <= 1e-12);
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

inline int povm(json& report, double alpha, double beta, int random_trials, unsigned seed) {
    BasisPair hat1{{std::cos(alpha), std::sin(alpha)}, {-std::sin(beta), std::cos(beta)}};
    Povm p = ud_povm(hat1);
    PovmCheck c = check_povm(p);
    const double expected = 1.0 - std::abs(std::sin(alpha - beta));
    report["overlap"] = hat1.overlap();
    report["povm"] = to_json(p);
    report["check"] = to_json(c);
    bool pass = c.valid() && std::abs(c.success_plus - expected) <= 1e-12 && std::abs(c.success_minus - expected) <= 1e-12;
    if (random_trials > 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> angle(-pi, pi);
        PovmCheck worst;
        worst.min_eigenvalue = 1.0;
        double success_dev = 0.0;
        int evaluated = 0;
        while (evaluated < random_trials) {
            const double a = angle(rng);
            const double b = angle(rng);
            if (std::abs(std::sin(a - b)) >= 1.0 - 1e-6) continue;
            BasisPair pair{{std::cos(a), std::sin(a)}, {-std::sin(b), std::cos(b)}};
            PovmCheck k = check_povm(ud_povm(pair));
            worst.completeness = std::max(worst.completeness, k.completeness);
            worst.min_eigenvalue = std::min(worst.min_eigenvalue, k.min_eigenvalue);
            worst.max_eigenvalue = std::max(worst.max_eigenvalue, k.max_eigenvalue);
            worst.hermiticity = std::max(worst.hermiticity, k.hermiticity);
            worst.misidentification = std::max(worst.misidentification, k.misidentification);
            success_dev = std::max(success_dev, std::abs(k.success_plus - (1.0 - std::abs(std::sin(a - b)))));
            ++evaluated;
        }
        report["random"] = json{{"trials", random_trials},
                                {"seed", seed},
                                {"max_completeness", worst.completeness},
                                {"min_eigenvalue", worst.min_eigenvalue},
                                {"max_misidentification", worst.misidentification},
                                {"max_success_deviation", success_dev}};
        pass = pass && worst.valid() && success_dev <= 1e-12;
    }
    report["pass"] = pass;
    return pass ? ok : check_failed;
}

// ---------------------------------------------------------------------------

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) throw error(errc::invalid_input, "bad number in list: " + item);
        out.push_back(v);
    }
    return out;
}

inline std::pair<int, int> parse_shard(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) throw error(errc::invalid_input, "shard must look like k/n");
    int k = std::stoi(s.substr(0, slash));
    int n = std::stoi(s.substr(slash + 1));
    if (n <= 0 || k < 0 || k >= n) throw error(errc::invalid_input, "shard must satisfy 0 <= k < n");
    return {k, n};
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error(errc::invalid_input, "cannot open output file " + path);
    f << text;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Verification suite for Hardy-type nonlocality arguments", "hardycheck"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string output;
    app.add_option("-o,--output", output, "write the report to this file instead of stdout");

    auto* c_max = app.add_subcommand("hardy-max", "maximise the Hardy contradiction probability");

    double theta = 0.0;
    auto* c_ledger = app.add_subcommand("ledger", "Hardy and Goldstein ledgers for one state");
    c_ledger->add_option("--theta", theta, "state angle in [0, pi/2] (radians)")->required();

    ProofAngles angles;
    auto* c_gen = app.add_subcommand("generalized", "post-selected ledgers, inconclusive routes, gaps, typo report");
    c_gen->add_option("--theta", angles.theta, "state angle in (0, pi/2]")->required();
    c_gen->add_option("--alpha", angles.alpha, "angle of |+^>_1")->required();
    c_gen->add_option("--beta", angles.beta, "angle of |-^>_1")->required();

    std::string theta_list;
    int steps = 0, alpha_steps = 0, beta_steps = 0, jobs = 1;
    double margin = tol::sweep_margin, alpha_offset = 0.25, beta_offset = 0.75;
    std::size_t top_k = 100;
    bool full = false;
    std::string format = "json", shard;
    auto* c_sweep = app.add_subcommand("sweep", "grid evaluation of the gaps");
    c_sweep->add_option("--theta-list", theta_list, "comma-separated theta values")->required();
    c_sweep->add_option("--steps", steps, "alpha and beta steps");
    c_sweep->add_option("--alpha-steps", alpha_steps, "alpha steps (overrides --steps)");
    c_sweep->add_option("--beta-steps", beta_steps, "beta steps (overrides --steps)");
    c_sweep->add_option("--alpha-offset", alpha_offset, "alpha grid offset in cells");
    c_sweep->add_option("--beta-offset", beta_offset, "beta grid offset in cells");
    c_sweep->add_option("--margin", margin, "exclusion margin around singular sets (radians)");
    c_sweep->add_option("--top-k", top_k, "number of largest-gap points kept");
    c_sweep->add_flag("--full", full, "keep every grid point in the report");
    c_sweep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    c_sweep->add_option("--shard", shard, "evaluate shard k of n (0-based), as k/n");
    c_sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> inputs;
    auto* c_merge = app.add_subcommand("merge", "merge sharded sweep reports");
    c_merge->add_option("inputs", inputs, "shard report files")->required();
    c_merge->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    double tau1 = 1.0, tau2 = 1.0;
    auto* c_wxhh = app.add_subcommand("wxhh", "tap post-selection on the maximally entangled interferometer state");
    c_wxhh->add_option("--tau1", tau1, "tap transmittance on path c")->required();
    c_wxhh->add_option("--tau2", tau2, "tap transmittance on path d")->required();

    double alpha = 0.0, beta = 0.0;
    auto* c_lhv = app.add_subcommand("lhv", "local-hidden-variable feasibility of a correlation table");
    c_lhv->add_option("--theta", theta, "state angle")->required();
    auto* o_alpha = c_lhv->add_option("--alpha", alpha, "use the post-selected settings with this alpha");
    c_lhv->add_option("--beta", beta, "beta for the post-selected settings")->needs(o_alpha);

    int random_trials = 0;
    unsigned seed = 12345;
    auto* c_povm = app.add_subcommand("povm", "validity suite for the discrimination POVM");
    c_povm->add_option("--alpha", alpha, "angle of |+^>_1")->required();
    c_povm->add_option("--beta", beta, "angle of |-^>_1")->required();
    c_povm->add_option("--random", random_trials, "additional random (alpha, beta) trials");
    c_povm->add_option("--seed", seed, "seed for --random");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return bad_input;
    }

    try {
        int code = ok;
        json report;
        std::string csv;
        bool csv_out = false;
        if (*c_max) {
            report = envelope("hardy-max", json::object());
            code = hardy_max(report);
        } else if (*c_ledger) {
            report = envelope("ledger", json{{"theta", theta}});
            code = ledger(report, theta);
        } else if (*c_gen) {
            report = envelope("generalized", to_json(angles));
            code = generalized(report, angles);
        } else if (*c_sweep) {
            GridSpec g;
            g.theta_values = parse_list(theta_list);
            g.alpha_steps = alpha_steps > 0 ? alpha_steps : steps;
            g.beta_steps = beta_steps > 0 ? beta_steps : steps;
            g.alpha_offset = alpha_offset;
            g.beta_offset = beta_offset;
            g.margin = margin;
            g.top_k = top_k;
            g.keep_all = full;
            int k = 0, n = 1;
            if (!shard.empty()) std::tie(k, n) = parse_shard(shard);
            SweepResult r = sweep_shard(g, k, n, jobs);
            if (n == 1) require_points(r);
            report = envelope("sweep", json{{"format", format}});
            csv_out = format == "csv";
            code = sweep_report(r, report, csv, csv_out);
        } else if (*c_merge) {
            std::vector<SweepResult> parts;
            for (const auto& path : inputs) {
                std::ifstream f(path);
                if (!f) throw error(errc::invalid_input, "cannot read " + path);
                json j = json::parse(f);
                parts.push_back(sweep_from(j.at("result")));
            }
            SweepResult r = parts.front();
            for (std::size_t i = 1; i < parts.size(); ++i) r = merge(r, parts[i]);
            require_points(r);
            report = envelope("sweep", json{{"format", format}});
            csv_out = format == "csv";
            code = sweep_report(r, report, csv, csv_out);
        } else if (*c_wxhh) {
            report = envelope("wxhh", json{{"tau1", tau1}, {"tau2", tau2}});
            code = wxhh(report, tau1, tau2);
        } else if (*c_lhv) {
            const bool post = o_alpha->count() > 0;
            json cfg{{"theta", theta}};
            if (post) {
                cfg["alpha"] = alpha;
                cfg["beta"] = beta;
            }
            report = envelope("lhv", cfg);
            code = lhv(report, theta, post, alpha, beta);
        } else if (*c_povm) {
            report = envelope("povm", json{{"alpha", alpha}, {"beta", beta}, {"random", random_trials}, {"seed", seed}});
            code = povm(report, alpha, beta, random_trials, seed);
        }
        emit(csv_out ? csv : to_text(report), output, out);
        if (code == check_failed) err << "a checked invariant failed; see the report\n";
        return code;
    } catch (const error& e) {
        err << e.what() << "\n";
        return bad_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return bad_input;
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(std::move(args), out, err);
}

} // namespace hardycheck::cli
