#include "pellab/cli/run.hpp"

#include <cmath>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pellab/ellipticity/constants.hpp"
#include "pellab/io/json_io.hpp"
#include "pellab/numerics/lp_project.hpp"

namespace pellab::cli {

using ellipticity::ComplexMatrix;
using ellipticity::MatrixField;

namespace {

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path == "-") {
        out << text;
    } else {
        io::write_file(out_path, text);
    }
}

rvec parse_list(const std::string& csv) {
    rvec values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(std::stod(item));
    }
    if (values.empty()) throw ParameterError("empty list: " + csv);
    return values;
}

struct MatrixPairArgs {
    std::string a_path;
    std::string b_path;

    std::pair<ComplexMatrix, ComplexMatrix> load() const {
        ComplexMatrix A = io::load_matrix(a_path);
        ComplexMatrix B = b_path.empty() ? A : io::load_matrix(b_path);
        return {std::move(A), std::move(B)};
    }
};

io::Problem load_problem_checked(const std::string& path, std::ostream& err) {
    io::Problem prob = io::load_problem(path);
    if (!prob.domain.connected())
        err << "warning: the active node set of " << path << " is not connected\n";
    return prob;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"desk-scale experiments for p-ellipticity, Bellman convexity certificates, "
                 "divergence-form semigroups with potentials, and the heat-flow bilinear "
                 "functional"};
    app.require_subcommand(1);

    unsigned long long seed = kDefaultSeed;
    int threads = 1;
    std::string out_path = "-";
    app.add_option("--seed", seed, "global sampling seed (default " +
                                       std::to_string(kDefaultSeed) + ")");
    app.add_option("--threads", threads, "worker threads for sampling sweeps (default 1)");
    app.add_option("--out", out_path, "output file, '-' for standard output");

    int exit_code = 0;

    // ---- ellipticity constants ------------------------------------------
    auto* cmd_delta = app.add_subcommand(
        "delta-p", "p-ellipticity constant Delta_p(A): the essential infimum of "
                   "Re<A xi, xi + |1-2/p| conj(xi)> over unit xi");
    std::string matrix_path;
    double p_val = 2.0;
    double mu_val = -1.0;
    cmd_delta->add_option("--matrix", matrix_path, "matrix JSON document")->required()->check(CLI::ExistingFile);
    cmd_delta->add_option("--p", p_val, "Lebesgue exponent p");
    cmd_delta->add_option("--mu", mu_val, "raw mu >= 0 instead of an exponent")->check(CLI::NonNegativeNumber);
    cmd_delta->callback([&] {
        const ComplexMatrix A = io::load_matrix(matrix_path);
        const double value = mu_val >= 0.0
                                 ? ellipticity::delta_p(A, ellipticity::ExponentOrMu::from_mu(mu_val))
                                 : ellipticity::delta_p(A, p_val);
        emit(fmt17(value) + "\n", out_path, out);
    });

    auto* cmd_range = app.add_subcommand(
        "p-range", "maximal interval (p_min, p_max) around 2 with Delta_p(A) > 0");
    cmd_range->add_option("--matrix", matrix_path, "matrix JSON document")->required()->check(CLI::ExistingFile);
    cmd_range->callback([&] {
        const auto [pmin, pmax] = ellipticity::p_range(io::load_matrix(matrix_path));
        const std::string top = std::isinf(pmax) ? "inf" : fmt17(pmax);
        emit("p_min=" + fmt17(pmin) + " p_max=" + top + "\n", out_path, out);
    });

    auto* cmd_angle = app.add_subcommand(
        "angle", "ellipticity report: lambda, Lambda, Delta_p, sector angle "
                 "arctan(Lambda/lambda) (the literal arctan(lambda/Lambda) is recorded "
                 "alongside), p-range and the contractivity rotation angle");
    cmd_angle->add_option("--matrix", matrix_path, "matrix JSON document")->required()->check(CLI::ExistingFile);
    cmd_angle->add_option("--p", p_val, "exponent for Delta_p and the rotation angle");
    cmd_angle->callback([&] {
        const auto rep = ellipticity::make_report(io::load_matrix(matrix_path), p_val);
        std::string s;
        s += "lambda=" + fmt17(rep.lambda) + "\n";
        s += "Lambda=" + fmt17(rep.Lambda) + "\n";
        s += "delta_p=" + fmt17(rep.delta_p) + "\n";
        s += "mu=" + fmt17(rep.mu) + "\n";
        s += "omega0=" + fmt17(rep.omega0) + "\n";
        s += "omega0_literal=" + fmt17(rep.omega0_literal) + "\n";
        if (rep.omega0 != rep.omega0_literal)
            s += "# note: omega0 = arctan(Lambda/lambda) is used for resolvent-region "
                 "decisions; the literal arctan(lambda/Lambda) differs for this matrix\n";
        s += "p_min=" + fmt17(rep.p_min) + "\n";
        s += "p_max=" + (std::isinf(rep.p_max) ? std::string("inf") : fmt17(rep.p_max)) + "\n";
        s += "theta=" + fmt17(rep.theta) + "\n";
        emit(s, out_path, out);
    });

    // ---- Bellman certificates -------------------------------------------
    auto* cmd_verify = app.add_subcommand(
        "bellman-verify", "sampled convexity certificate for the Bellman function: minimal "
                          "ratios of the generalized Hessian and gradient products against "
                          "tau-weighted quadratics; fails (exit 1) if any ratio is <= 0");
    MatrixPairArgs pair;
    double delta_opt = -1.0;
    long n_samples = 100000;
    cmd_verify->add_option("--p", p_val, "exponent p >= 2")->required();
    cmd_verify->add_option("--A", pair.a_path, "matrix A JSON document")->required()->check(CLI::ExistingFile);
    cmd_verify->add_option("--B", pair.b_path, "matrix B JSON document (default: A)")->check(CLI::ExistingFile);
    cmd_verify->add_option("--delta", delta_opt, "Bellman delta (default: chosen threshold/2)");
    cmd_verify->add_option("--samples", n_samples, "number of (sigma, omega) samples");
    cmd_verify->callback([&] {
        const auto [A, B] = pair.load();
        const double delta = delta_opt > 0.0 ? delta_opt : bellman::choose_delta(p_val, A, B);
        const bellman::BellmanParams params(p_val, delta);
        const auto cert = bellman::verify_convexity(A, B, params, n_samples, seed, threads);
        emit(io::csv_convexity(cert), out_path, out);
        if (!(cert.c_hess > 0.0 && cert.c_gz > 0.0 && cert.c_ge > 0.0)) exit_code = 1;
    });

    auto* cmd_mollify = app.add_subcommand(
        "mollify-verify", "mollified convexity certificate: the convolved generalized "
                          "Hessian against the (tau * phi_kappa)-weighted right side at "
                          "sampled points; fails (exit 1) below 90% of the reference");
    double kappa = 0.1;
    int nodes = 8;
    int n_points = 100;
    cmd_mollify->add_option("--p", p_val, "exponent p >= 2")->required();
    cmd_mollify->add_option("--A", pair.a_path, "matrix A JSON document")->required()->check(CLI::ExistingFile);
    cmd_mollify->add_option("--B", pair.b_path, "matrix B JSON document (default: A)")->check(CLI::ExistingFile);
    cmd_mollify->add_option("--delta", delta_opt, "Bellman delta (default: chosen threshold/2)");
    cmd_mollify->add_option("--kappa", kappa, "mollification radius");
    cmd_mollify->add_option("--nodes", nodes, "quadrature nodes per axis (>= 5)");
    cmd_mollify->add_option("--points", n_points, "sample points");
    cmd_mollify->callback([&] {
        const auto [A, B] = pair.load();
        const double delta = delta_opt > 0.0 ? delta_opt : bellman::choose_delta(p_val, A, B);
        const bellman::BellmanParams params(p_val, delta);
        const auto cert =
            bellman::mollified_certificate(A, B, params, kappa, nodes, n_points, seed);
        emit("min_ratio,c_ref\n" + fmt17(cert.min_ratio) + "," + fmt17(cert.c_ref) + "\n",
             out_path, out);
        if (!(cert.min_ratio >= 0.9)) exit_code = 1;
    });

    auto* cmd_gap = app.add_subcommand(
        "quad-gap", "largest constant C with a x^2 - 2 b x y + c y^2 >= C (tau x^2 + y^2/tau)");
    double ga = 0.0, gb = 0.0, gc = 0.0;
    cmd_gap->add_option("--a", ga)->required();
    cmd_gap->add_option("--b", gb)->required();
    cmd_gap->add_option("--c", gc)->required();
    cmd_gap->callback([&] {
        const auto r = bellman::quadratic_gap(ga, gb, gc);
        if (r) {
            emit("C=" + fmt17(r->first) + " tau=" + fmt17(r->second) + "\n", out_path, out);
        } else {
            emit("empty\n", out_path, out);
        }
    });

    // ---- semigroup experiments ------------------------------------------
    std::string problem_path;
    auto* cmd_contract = app.add_subcommand(
        "semigroup-contract", "max over random data and times of ||T_t f||_p / ||f||_p for "
                              "the assembled semigroup");
    double phase_opt = std::numeric_limits<double>::quiet_NaN();
    std::string times_csv = "0.01,0.1,0.5";
    int n_trials = 20;
    double assert_tol = -1.0;
    cmd_contract->add_option("--problem", problem_path, "problem JSON document")->required()->check(CLI::ExistingFile);
    cmd_contract->add_option("--p", p_val, "exponent p > 1")->required();
    cmd_contract->add_option("--phase", phase_opt, "override the assembly rotation phase");
    cmd_contract->add_option("--times", times_csv, "comma-separated times");
    cmd_contract->add_option("--trials", n_trials, "random trials");
    cmd_contract->add_option("--assert-tol", assert_tol,
                             "fail (exit 1) if the ratio exceeds this bound");
    cmd_contract->callback([&] {
        const io::Problem prob = load_problem_checked(problem_path, err);
        const auto L = semigroup::assemble(prob.domain, prob.A, prob.V, prob.phase);
        const double phase = std::isnan(phase_opt) ? prob.phase : phase_opt;
        const double ratio = semigroup::contractivity_experiment(
            L, p_val, phase, parse_list(times_csv), n_trials, seed);
        emit("max_ratio\n" + fmt17(ratio) + "\n", out_path, out);
        if (assert_tol > 0.0 && ratio > assert_tol) exit_code = 1;
    });

    auto* cmd_dissip = app.add_subcommand(
        "dissipativity", "min over random fields of Re<L u, |u|^{p-2} u>_h (negative values "
                         "witness failure of L^p-dissipativity)");
    double assert_min = std::numeric_limits<double>::quiet_NaN();
    cmd_dissip->add_option("--problem", problem_path, "problem JSON document")->required()->check(CLI::ExistingFile);
    cmd_dissip->add_option("--p", p_val, "exponent p > 1")->required();
    cmd_dissip->add_option("--trials", n_trials, "random trials");
    cmd_dissip->add_option("--assert-min", assert_min,
                           "fail (exit 1) if the minimum is below this bound");
    cmd_dissip->callback([&] {
        const io::Problem prob = load_problem_checked(problem_path, err);
        const auto L = semigroup::assemble(prob.domain, prob.A, prob.V, prob.phase);
        const double value = semigroup::dissipativity_check(L, p_val, n_trials, seed);
        emit("min_value\n" + fmt17(value) + "\n", out_path, out);
        if (!std::isnan(assert_min) && value < assert_min) exit_code = 1;
    });

    auto* cmd_embed = app.add_subcommand(
        "embed", "bilinear functional: time integral of sqrt(|grad v|^2 + V|v|^2) "
                 "sqrt(|grad w|^2 + W|w|^2) along the two flows, with the ratio against "
                 "||f||_p ||g||_q");
    double tmin_opt = 0.0, rho_opt = 1.25, tail_opt = 0.01;
    cmd_embed->add_option("--problem", problem_path, "problem JSON document")->required()->check(CLI::ExistingFile);
    cmd_embed->add_option("--p", p_val, "exponent p > 1")->required();
    cmd_embed->add_option("--tmin", tmin_opt, "first geometric time (default h^2)");
    cmd_embed->add_option("--rho", rho_opt, "geometric ratio of the time grid");
    cmd_embed->add_option("--tail", tail_opt, "stop when the last decade contributes less");
    cmd_embed->callback([&] {
        const io::Problem prob = load_problem_checked(problem_path, err);
        const auto LA = semigroup::assemble(prob.domain, prob.A, prob.V, prob.phase);
        const auto LB = semigroup::assemble(prob.domain, prob.B, prob.W, prob.phase);
        semigroup::TimeGridSpec grid;
        grid.t_min = tmin_opt;
        grid.rho = rho_opt;
        grid.tail_fraction = tail_opt;
        const auto rep = semigroup::bilinear_embedding(LA, LB, prob.f, prob.g, p_val, grid);
        emit(io::csv_embedding(rep), out_path, out);
    });

    auto* cmd_flow = app.add_subcommand(
        "flow", "heat flow of the Bellman integral E(t) with its derivative decomposition "
                "-E' = I1 + I2 and the bilinear lower-bound integrand");
    double flow_rho = 1.02;
    cmd_flow->add_option("--problem", problem_path, "problem JSON document")->required()->check(CLI::ExistingFile);
    cmd_flow->add_option("--p", p_val, "exponent p >= 2")->required();
    cmd_flow->add_option("--delta", delta_opt, "Bellman delta (default: chosen threshold/2)");
    cmd_flow->add_option("--rho", flow_rho, "geometric ratio of the time grid");
    cmd_flow->callback([&] {
        const io::Problem prob = load_problem_checked(problem_path, err);
        const auto LA = semigroup::assemble(prob.domain, prob.A, prob.V, 0.0);
        const auto LB = semigroup::assemble(prob.domain, prob.B, prob.W, 0.0);
        const double delta =
            delta_opt > 0.0 ? delta_opt : bellman::choose_delta(p_val, prob.A, prob.B);
        const bellman::BellmanParams params(p_val, delta);
        semigroup::TimeGridSpec grid;
        grid.rho = flow_rho;
        const auto trace = semigroup::flow_trace(LA, LB, prob.f, prob.g, params, grid);
        if (trace.upsilon_hits > 0)
            err << "note: " << trace.upsilon_hits
                << " cell evaluations fell on the gluing set (one-sided branch used)\n";
        emit(io::csv_flow(trace), out_path, out);
    });

    auto* cmd_trunc = app.add_subcommand(
        "truncate", "resolvent convergence under truncated potentials min(V, n): gradient "
                    "and potential-weighted errors against the untruncated resolvent");
    double s_shift = 1.0;
    std::string n_list_csv = "1,2,4,8,16,32,64,128";
    cmd_trunc->add_option("--problem", problem_path, "problem JSON document")->required()->check(CLI::ExistingFile);
    cmd_trunc->add_option("--s", s_shift, "resolvent shift s > 0");
    cmd_trunc->add_option("--n-list", n_list_csv, "comma-separated truncation levels");
    cmd_trunc->callback([&] {
        const io::Problem prob = load_problem_checked(problem_path, err);
        const auto table = semigroup::truncation_convergence(
            prob.domain, prob.A, prob.V, s_shift, prob.f, parse_list(n_list_csv));
        emit(io::csv_truncation(table), out_path, out);
    });

    auto* cmd_project = app.add_subcommand(
        "project", "orthogonal projection of a discrete field onto the unit ball of the "
                   "weighted p-norm");
    std::string input_path;
    double cell_volume = 1.0;
    cmd_project->add_option("--input", input_path,
                            "field JSON document {\"re\": [...], \"im\": [...]}")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_project->add_option("--p", p_val, "exponent p > 1")->required();
    cmd_project->add_option("--volume", cell_volume, "cell volume weight");
    cmd_project->callback([&] {
        const auto doc = io::read_file(input_path);
        // reuse the table parser from problem data specs
        const auto j = nlohmann::json::parse(doc);
        const rvec re = j.at("re").get<rvec>();
        rvec im(re.size(), 0.0);
        if (j.contains("im")) im = j.at("im").get<rvec>();
        cvec u(re.size());
        for (std::size_t i = 0; i < re.size(); ++i) u[i] = cxd(re[i], im[i]);
        const cvec v = numerics::project_lp_ball(u, p_val, cell_volume);
        std::string s = "re,im\n";
        for (cxd z : v) s += fmt17(z.real()) + "," + fmt17(z.imag()) + "\n";
        emit(s, out_path, out);
    });

    // global flags (--seed, --threads, --out) may appear after the subcommand
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("pellab");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        const auto parsed = app.get_subcommands();
        out << (parsed.empty() ? app.help() : parsed.front()->help());
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}

}  // namespace pellab::cli
