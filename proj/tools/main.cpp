#include "cmfield/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
    long dk = 0, n = 0, p = 0, m = 0, big_n = 0, l = 0, power = 1;
};

void add_common(CLI::App* sub, cmf::JobConfig& cfg)
{
    sub->add_option("--prec", cfg.precision, "working precision in bits")->check(CLI::Range(64L, cmf::kMaxPrecision));
    sub->add_option("--format", cfg.output_format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--cache-dir", cfg.cache_dir, "result cache directory (default $CACHE_DIR)");
    sub->add_option("--threads", cfg.threads, "worker threads for conjugate evaluation (0 = all cores)");
}

} // namespace

int main(int argc, char** argv)
{
    cmf::JobConfig cfg;
    cfg.precision = cmf::default_precision();
    cfg.cache_dir = cmf::default_cache_dir();
    Flags f;

    CLI::App app{"Ring and ray class invariants from Siegel functions"};
    app.set_version_flag("--version", CMFIELD_VERSION);
    app.require_subcommand(1);

    auto* forms = app.add_subcommand("forms", "reduced forms, CM points, beta_Q matrices and degrees");
    forms->add_option("--dk", f.dk, "fundamental discriminant")->required();
    forms->add_option("--N", f.big_n, "conductor");

    auto* minpoly = app.add_subcommand("minpoly", "exact minimal polynomial of the ring class invariant");
    minpoly->add_option("--dk", f.dk)->required();
    minpoly->add_option("--N", f.big_n)->required();
    minpoly->add_option("--power", f.power, "raise the invariant to this power");
    minpoly->add_flag("--force", cfg.force, "compute outside the conductor bound");

    auto* bound = app.add_subcommand("bound", "largest conductor admitted by the bound");
    bound->add_option("--dk", f.dk)->required();

    auto* nb = app.add_subcommand("normal-basis", "conjugate magnitude ratios of the inverse invariant");
    nb->add_option("--dk", f.dk)->required();
    nb->add_option("--N", f.big_n)->required();

    auto* delta = app.add_subcommand("delta", "p^12 Delta(p^l theta) / Delta(p^(l-1) theta)");
    delta->add_option("--dk", f.dk)->required();
    delta->add_option("--p", f.p)->required();
    delta->add_option("--l", f.l)->required();

    auto* ray = app.add_subcommand("ray", "Gamma generators, fixed-field solutions and normal-basis values");
    ray->add_option("--dk", f.dk)->required();
    ray->add_option("--p", f.p)->required();
    ray->add_option("--m", f.m)->required();

    auto* hensel = app.add_subcommand("hensel", "Hensel-lifted beta_0 and the g(theta) product");
    hensel->add_option("--dk", f.dk)->required();
    hensel->add_option("--p", f.p)->required();
    hensel->add_option("--m", f.m)->required();
    hensel->add_option("--n", f.n)->required();
    hensel->add_option("--l", f.l)->required();

    auto* verify = app.add_subcommand("verify", "run self-check suites");
    verify->add_option("--suite", cfg.suite, "identities, frobenius, forms, paper-example or all")
        ->check(CLI::IsMember({"identities", "frobenius", "forms", "paper-example", "all"}));

    for (auto* sub : {forms, minpoly, bound, nb, delta, ray, hensel, verify}) add_common(sub, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto take = [&](const char* opt, const char* key, long value) {
        if (sub->get_option_no_throw(opt) && sub->count(opt) > 0) cfg.ints[key] = value;
    };
    take("--dk", "dk", f.dk);
    take("--N", "N", f.big_n);
    take("--p", "p", f.p);
    take("--m", "m", f.m);
    take("--n", "n", f.n);
    take("--l", "l", f.l);
    take("--power", "power", f.power);

    cmf::JobResult r = cmf::run_job(cfg);
    if (cfg.output_format == "text")
        std::cout << cmf::render_text(r.envelope);
    else
        std::cout << r.envelope.dump(2) << "\n";
    return r.exit_code;
}
