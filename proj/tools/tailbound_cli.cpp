#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tailbound/bounds.hpp"
#include "tailbound/constants.hpp"
#include "tailbound/instance.hpp"
#include "tailbound/monotonicity.hpp"
#include "tailbound/normal.hpp"
#include "tailbound/oracle.hpp"
#include "tailbound/report_io.hpp"

namespace tb = tailbound;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> make_grid(double start, double stop, std::size_t points,
                              bool log_spaced) {
    if (!(start > 0.0) || !(stop > start) || points < 1) {
        throw UsageError("bad grid: need 0 < start < stop and points >= 1");
    }
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = start;
        return g;
    }
    for (std::size_t i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        g[i] = log_spaced ? start * std::pow(stop / start, f)
                          : start + (stop - start) * f;
    }
    return g;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
    // start:stop:points:lin|log
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t colon = spec.find(':', pos);
        parts.push_back(spec.substr(pos, colon - pos));
        if (colon == std::string::npos) break;
        pos = colon + 1;
    }
    if (parts.size() != 4 || (parts[3] != "lin" && parts[3] != "log")) {
        throw UsageError("bad --grid, expected start:stop:points:lin|log");
    }
    try {
        return make_grid(std::stod(parts[0]), std::stod(parts[1]),
                         std::stoul(parts[2]), parts[3] == "log");
    } catch (const std::invalid_argument&) {
        throw UsageError("bad --grid, expected start:stop:points:lin|log");
    }
}

std::vector<tb::BoundKind> parse_bounds_list(const std::string& list) {
    std::vector<tb::BoundKind> kinds;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const std::size_t comma = list.find(',', pos);
        const std::string name = list.substr(pos, comma - pos);
        const auto k = tb::parse_bound_name(name);
        if (!k) throw UsageError("unknown bound '" + name + "'");
        kinds.push_back(*k);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    // keep the fixed column order, drop duplicates
    std::vector<tb::BoundKind> ordered;
    for (const tb::BoundKind k : tb::kAllBoundKinds) {
        if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) {
            ordered.push_back(k);
        }
    }
    return ordered;
}

void emit(const tb::Table& t, const std::string& format,
          const std::string& out_path) {
    const std::string text =
        format == "json" ? tb::table_to_json(t) : tb::table_to_csv(t);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw UsageError("cannot open output file '" + out_path + "'");
        out << text;
    }
}

struct CommonOpts {
    double x = 0.0;
    bool have_x = false;
    std::string grid_spec;
    std::string bounds_list;
    std::string instance_path;
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out_path;
    bool strict = false;
};

std::vector<double> resolve_grid(const CommonOpts& o) {
    if (o.have_x) {
        if (!(o.x > 0.0) && o.strict) {
            throw UsageError("--x must be > 0 in strict mode");
        }
        return {o.x};
    }
    if (!o.grid_spec.empty()) return parse_grid_spec(o.grid_spec);
    return make_grid(0.1, 6.4, 64, true);  // default grid
}

int cmd_eval(const CommonOpts& o, bool all_bounds) {
    const std::vector<tb::BoundKind> kinds =
        (all_bounds || o.bounds_list.empty())
            ? std::vector<tb::BoundKind>(tb::kAllBoundKinds.begin(),
                                         tb::kAllBoundKinds.end())
            : parse_bounds_list(o.bounds_list);
    const std::vector<double> grid = resolve_grid(o);
    tb::Table t;
    t.headers.push_back("x");
    for (const tb::BoundKind k : kinds) t.headers.push_back(tb::bound_name(k));
    for (const double x : grid) {
        std::vector<std::string> row;
        row.push_back(tb::format_double(x));
        for (const tb::BoundKind k : kinds) {
            row.push_back(tb::format_double(tb::bound_value(k, x)));
        }
        t.rows.push_back(std::move(row));
    }
    emit(t, o.format, o.out_path);
    return kExitOk;
}

int cmd_crossings(const CommonOpts& o) {
    const tb::CrossingPoints c = tb::solve_crossings();
    tb::Table t;
    t.headers = {"name", "value", "residual"};
    t.rows = {
        {"z_v", tb::format_double(c.z_v),
         tb::format_double(tb::crossing_residual_v(c.z_v, tb::kLambda))},
        {"z_w", tb::format_double(c.z_w),
         tb::format_double(tb::crossing_residual_w(c.z_w, tb::kLambda))},
        {"z_wtilde", tb::format_double(c.z_wtilde),
         tb::format_double(
             tb::crossing_residual_wtilde(c.z_wtilde, tb::kLambda))},
    };
    emit(t, o.format, o.out_path);
    return kExitOk;
}

std::vector<tb::BoundKind> default_kinds(bool two_sided) {
    if (two_sided) return {tb::BoundKind::Wtilde, tb::BoundKind::Markov2};
    return {tb::BoundKind::Hoeffding, tb::BoundKind::V, tb::BoundKind::W,
            tb::BoundKind::Edelman15};
}

int run_verify(const CommonOpts& o, bool two_sided,
               const std::function<std::pair<double, double>(double)>& tail) {
    std::vector<tb::BoundKind> kinds = o.bounds_list.empty()
                                           ? default_kinds(two_sided)
                                           : parse_bounds_list(o.bounds_list);
    const tb::VerificationReport rep =
        tb::verify_instance(tail, two_sided, kinds, resolve_grid(o));
    emit(tb::to_table(rep), o.format, o.out_path);
    return rep.any_violation ? kExitViolation : kExitOk;
}

int cmd_verify_exact(const CommonOpts& o, bool two_sided) {
    if (o.instance_path.empty()) throw UsageError("--instance is required");
    const tb::Instance inst = tb::load_instance_file(o.instance_path);
    if (const auto* r = std::get_if<tb::RademacherInstance>(&inst)) {
        const auto mitm = std::make_shared<tb::RademacherMitm>(r->weights);
        return run_verify(o, two_sided, [mitm, two_sided](double x) {
            return std::make_pair(mitm->tail(x, two_sided), 0.0);
        });
    }
    if (const auto* b = std::get_if<tb::BoundedInstance>(&inst)) {
        const auto law = std::make_shared<
            std::vector<std::pair<double, double>>>(
            tb::convolve_bounded_sum(b->weights, b->dists));
        return run_verify(o, two_sided, [law, two_sided](double x) {
            return std::make_pair(tb::tail_of_law(*law, x, two_sided), 0.0);
        });
    }
    throw UsageError("verify-exact needs a rademacher or bounded instance; "
                     "use verify-mc for martingale/hilbert");
}

int cmd_verify_mc(const CommonOpts& o) {
    if (o.instance_path.empty()) throw UsageError("--instance is required");
    if (o.samples < 10000) throw UsageError("--samples must be >= 10000");
    const tb::Instance inst = tb::load_instance_file(o.instance_path);
    std::vector<double> sums;
    bool two_sided = false;
    if (const auto* m = std::get_if<tb::MartingaleInstance>(&inst)) {
        sums = tb::mc_martingale_samples(
            tb::make_seeded_martingale(m->weights, m->rule_seed), o.samples,
            o.seed);
    } else if (const auto* h = std::get_if<tb::HilbertInstance>(&inst)) {
        sums = tb::mc_hilbert_samples(*h, o.samples, o.seed);
        two_sided = true;  // norm tails pair with the two-sided bounds
    } else {
        throw UsageError("verify-mc needs a martingale or hilbert instance; "
                         "use verify-exact for rademacher/bounded");
    }
    std::sort(sums.begin(), sums.end());
    const double margin = tb::mc_margin(o.samples);
    auto tail = [&sums, margin](double x) {
        const std::size_t hits =
            sums.end() - std::lower_bound(sums.begin(), sums.end(), x);
        return std::make_pair(
            static_cast<double>(hits) / static_cast<double>(sums.size()),
            margin);
    };
    return run_verify(o, two_sided, tail);
}

bool report_check(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : ": ", detail.c_str());
    return ok;
}

int cmd_selfcheck(double lambda_perturb) {
    bool ok = true;
    const double lam = tb::kLambda + lambda_perturb;

    ok &= report_check("lambda_value",
                       std::fabs(tb::kLambda - (3.0 - std::log(4.5))) <= 1e-15,
                       "lambda = " + tb::format_double(tb::kLambda));
    ok &= report_check(
        "exp_lambda_identity",
        std::fabs(tb::kExpLambda - 2.0 * std::exp(3.0) / 9.0) <=
            std::ldexp(1.0, -50),
        "e^lambda = " + tb::format_double(tb::kExpLambda));

    const tb::CrossingPoints c = tb::solve_crossings();
    const double rv = tb::crossing_residual_v(c.z_v, lam);
    const double rw = tb::crossing_residual_w(c.z_w, lam);
    const double rwt = tb::crossing_residual_wtilde(c.z_wtilde, lam);
    ok &= report_check("crossing_residual_v", std::fabs(rv) <= 1e-12,
                       "z_v = " + tb::format_double(c.z_v) +
                           " residual = " + tb::format_double(rv));
    ok &= report_check("crossing_residual_w", std::fabs(rw) <= 1e-12,
                       "z_w = " + tb::format_double(c.z_w) +
                           " residual = " + tb::format_double(rw));
    ok &= report_check("crossing_residual_wtilde", std::fabs(rwt) <= 1e-12,
                       "z_wtilde = " + tb::format_double(c.z_wtilde) +
                           " residual = " + tb::format_double(rwt));

    // boundary values from the ratio cases
    const double r0 = tb::kExpLambda / 2.0;
    ok &= report_check("boundary_r0", std::fabs(r0 - 2.2317263247986297) < 1e-12,
                       "r(0) = " + tb::format_double(r0));
    const tb::RatioCase lw = tb::lemma_w_case();
    const double r1 = lw.f(1.0) / lw.g(1.0);
    ok &= report_check("boundary_r1", std::fabs(r1 - 1.1376597042519334) < 1e-9,
                       "r(1) = " + tb::format_double(r1));
    const tb::RatioCase ll = tb::lemma_less_case();
    const double rzv = ll.f(c.z_v) / ll.g(c.z_v);
    ok &= report_check("boundary_r_zv",
                       std::fabs(rzv - 1.0209193337250805) < 1e-9,
                       "r(z_v) = " + tb::format_double(rzv));
    const tb::RatioCase wt = tb::w_tilde_case();
    const double x0 = tb::kSqrtLambda + 1e-9;
    const double rsl = wt.f(x0) / wt.g(x0);
    ok &= report_check("boundary_r_sqrt_lambda",
                       std::fabs(rsl - tb::kLambda) < 1e-6,
                       "r(sqrt(lambda)) = " + tb::format_double(rsl));

    for (const tb::RatioCase& rc :
         {tb::lemma_v_case(), tb::lemma_w_case(), tb::lemma_less_case(),
          tb::w_tilde_case()}) {
        const tb::LHopitalReport rep = tb::verify_lhopital_case(rc, 10000);
        std::ostringstream d;
        d << "rho " << tb::pattern_name(rep.rho_report.detected) << ", r "
          << tb::pattern_name(rep.r_report.detected);
        if (rep.rho_report.switch_point) {
            d << ", switch = " << tb::format_double(*rep.rho_report.switch_point);
        }
        ok &= report_check(("monotonicity_" + rc.name).c_str(),
                           rep.premise_ok && rep.conclusion_ok &&
                               rep.above_one_ok,
                           d.str());
    }

    // W/V ratio approaches 1 from above
    double prev = 1e9;
    bool asym = true;
    for (const double x : {4.0, 6.0, 8.0, 10.0}) {
        const double dev = std::fabs(tb::w_bound(x) / tb::v_bound(x) - 1.0);
        asym = asym && dev < prev;
        prev = dev;
    }
    asym = asym && prev <= 0.01;
    ok &= report_check("wv_ratio_asymptotic", asym,
                       "|W(10)/V(10) - 1| = " + tb::format_double(prev));

    return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp Gaussian-shift tail bounds for normalized sums of "
                 "bounded random variables"};
    app.require_subcommand(1);

    CommonOpts o;
    double lambda_perturb = 0.0;

    auto add_common = [&o](CLI::App* cmd, bool with_instance, bool with_mc) {
        cmd->add_option("--x", o.x, "single evaluation point")
            ->each([&o](const std::string&) { o.have_x = true; });
        cmd->add_option("--grid", o.grid_spec, "start:stop:points:lin|log");
        cmd->add_option("--bounds", o.bounds_list, "comma list of bounds");
        cmd->add_option("--format", o.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", o.out_path, "output path (default stdout)");
        cmd->add_flag("--strict", o.strict, "reject trivial inputs");
        if (with_instance) {
            cmd->add_option("--instance", o.instance_path, "instance JSON file");
        }
        if (with_mc) {
            cmd->add_option("--samples", o.samples, "MC sample count (>= 1e4)");
            cmd->add_option("--seed", o.seed, "MC seed");
        }
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate bounds");
    add_common(eval, false, false);
    CLI::App* table =
        app.add_subcommand("table", "all bounds over the default grid");
    add_common(table, false, false);
    CLI::App* crossings =
        app.add_subcommand("crossings", "crossing points and residuals");
    add_common(crossings, false, false);
    CLI::App* vexact = app.add_subcommand(
        "verify-exact", "exact tails of an instance against the bounds");
    add_common(vexact, true, false);
    bool two_sided = false;
    vexact->add_flag("--two-sided", two_sided, "verify P(|S| >= x) bounds");
    CLI::App* vmc = app.add_subcommand(
        "verify-mc", "Monte Carlo tails of an instance against the bounds");
    add_common(vmc, true, true);
    CLI::App* selfcheck =
        app.add_subcommand("selfcheck", "internal consistency suite");
    selfcheck->add_option("--lambda-perturb", lambda_perturb,
                          "offset lambda in residual checks (test hook)")
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(o, false);
        if (table->parsed()) return cmd_eval(o, true);
        if (crossings->parsed()) return cmd_crossings(o);
        if (vexact->parsed()) return cmd_verify_exact(o, two_sided);
        if (vmc->parsed()) return cmd_verify_mc(o);
        if (selfcheck->parsed()) return cmd_selfcheck(lambda_perturb);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tb::InstanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const tb::CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
