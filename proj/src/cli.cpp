#include "garland/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "garland/bv.hpp"
#include "garland/lab.hpp"
#include "garland/signsearch.hpp"
#include "garland/text.hpp"

namespace garland::cli {

namespace {

using calc::AlgebraParams;
using calc::Element;

/// Input problems that map to the usage exit code.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::string ring = "z2";
    int n = 1;
    int m = 2;
    bool boundary = false;
    std::string sign_rule = "zero";

    void add_to(CLI::App* app, bool with_ring = true) {
        if (with_ring) app->add_option("--ring", ring, "coefficient ring")->check(CLI::IsMember({"z2", "z"}));
        app->add_option("--n", n, "dimension of P");
        app->add_option("--m", m, "dimension of the target manifold");
        app->add_flag("--boundary", boundary, "P is a boundary");
        app->add_option("--sign-rule", sign_rule, "construction sign rule")->check(CLI::IsMember({"zero", "koszul"}));
    }

    AlgebraParams params() const {
        AlgebraParams p;
        p.ring = ring == "z" ? sign::Ring::Z : sign::Ring::Z2;
        p.n = n;
        p.m = m;
        p.p_is_boundary = boundary;
        p.sign_rule = calc::construction_sign_from_string(sign_rule);
        return p;
    }
};

std::string params_line(const AlgebraParams& p) {
    return "m=" + std::to_string(p.m) + " n=" + std::to_string(p.n) + " boundary=" +
           (p.p_is_boundary ? "true" : "false") + " ring=" + sign::to_string(p.ring) +
           " sign-rule=" + calc::to_string(p.sign_rule);
}

void header(std::ostream& out, const std::string& command) {
    out << "tool: " << kToolVersion << "\n";
    out << "command: " << command << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read file '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    if (in.bad()) throw InputError("cannot read file '" + path + "'");
    return s.str();
}

Element load_element(const std::string& path, const AlgebraParams& params) {
    const auto content = read_file(path);
    try {
        return text::parse_element(content, params);
    } catch (const text::ParseError& e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         e.message());
    }
}

void print_inputs(std::ostream& out, const std::string& prefix, const lab::Inputs& in, const AlgebraParams& params) {
    for (std::size_t i = 0; i < in.slots.size(); ++i)
        out << prefix << ".input." << i << ": "
            << text::print_element(lab::slot_element(in.slots[i], in.family, params)) << "\n";
    out << prefix << ".grading-1-marks:";
    for (const auto& s : in.slots) out << " " << lab::grading_one_marks(s);
    out << "\n";
}

void print_evaluation(std::ostream& out, const std::string& prefix, const lab::Evaluation& e) {
    out << prefix << ".part: " << e.part << "\n";
    out << prefix << ".left: " << text::print_element(e.left) << "\n";
    out << prefix << ".right: " << text::print_element(e.right) << "\n";
    out << prefix << ".diff: " << text::print_element(calc::subtract(e.left, e.right)) << "\n";
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("GARLAND_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("GARLAND_SEED is not an unsigned integer");
        }
    }
    return 1;
}

// check ------------------------------------------------------------------

struct CheckArgs {
    std::string identity;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::string family = "general";
    ParamFlags flags;
};

int do_check(const CheckArgs& a, std::ostream& out) {
    lab::Identity id;
    lab::Family family;
    try {
        id = lab::identity_from_string(a.identity);
        family = lab::family_from_string(a.family);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    const auto seed = a.seed ? *a.seed : default_seed();
    const auto r = lab::check(id, a.trials, seed, a.flags.params(), family);
    header(out, "check " + lab::to_string(id));
    out << "identity: " << lab::to_string(id) << "\n";
    out << "family: " << lab::to_string(r.family) << "\n";
    out << "params: " << params_line(r.params) << "\n";
    out << "effective-ring: " << sign::to_string(r.effective.ring) << "\n";
    out << "seed: " << r.seed << "\n";
    out << "trials: " << r.trials << "\n";
    out << "passes: " << r.passes << "\n";
    out << "m-component-trials: " << r.m_component_trials << "\n";
    out << "claimed: " << (r.claimed ? "true" : "false") << "\n";
    if (r.first_failure) {
        const auto& f = *r.first_failure;
        out << "counterexample.trial: " << f.trial << "\n";
        out << "counterexample.trial-seed: " << f.trial_seed << "\n";
        print_inputs(out, "counterexample", f.inputs, r.effective);
        print_evaluation(out, "counterexample", f.evaluation);
        print_inputs(out, "minimized", f.minimized, r.effective);
        print_evaluation(out, "minimized", f.minimized_evaluation);
    }
    out << "verdict: " << r.verdict() << "\n";
    return r.diverges() ? kExitDiverges : kExitOk;
}

// eval -------------------------------------------------------------------

struct EvalArgs {
    std::string op;
    std::vector<std::string> files;
    ParamFlags flags;
};

int do_eval(const EvalArgs& a, std::ostream& out) {
    const bool binary = a.op == "product" || a.op == "bracket";
    const std::size_t needed = binary ? 2 : 1;
    if (a.files.size() != needed)
        throw InputError("--op " + a.op + " takes " + std::to_string(needed) + " input file(s), got " +
                         std::to_string(a.files.size()));
    const auto params = a.flags.params();
    std::vector<Element> in;
    for (const auto& f : a.files) in.push_back(load_element(f, params));
    Element result;
    if (a.op == "product") result = calc::product(in[0], in[1]);
    else if (a.op == "bracket") result = calc::bracket(in[0], in[1]);
    else if (a.op == "lift") result = calc::lift(in[0]);
    else if (a.op == "proj") result = calc::proj(in[0]);
    else result = calc::delta(in[0]);
    header(out, "eval " + a.op);
    out << "params: " << params_line(params) << "\n";
    for (std::size_t i = 0; i < in.size(); ++i) out << "input." << i << ": " << text::print_element(in[i]) << "\n";
    out << "result: " << text::print_element(result) << "\n";
    out << "result-terms: " << result.size() << "\n";
    return kExitOk;
}

// bv verify --------------------------------------------------------------

struct BvArgs {
    int bound = 2;
    bool no_bv = false;
    bool no_delta_squared = false;
    std::optional<std::uint64_t> shuffle_seed;
};

int do_bv(const BvArgs& a, std::ostream& out) {
    bv::VerifyOptions opts;
    opts.word_bound = a.bound;
    opts.use_bv_relation = !a.no_bv;
    opts.use_delta_squared = !a.no_delta_squared;
    opts.shuffle_seed = a.shuffle_seed;
    bv::Prop51Report report;
    try {
        report = bv::verify_prop51(opts);
    } catch (const bv::WordBoundExceeded& e) {
        throw InputError(e.what());
    }
    header(out, "bv verify");
    out << "bound: " << opts.word_bound << "\n";
    out << "relations: bv=" << (opts.use_bv_relation ? "on" : "off")
        << " delta-squared=" << (opts.use_delta_squared ? "on" : "off")
        << " shuffle=" << (opts.shuffle_seed ? std::to_string(*opts.shuffle_seed) : "none") << "\n";
    for (const auto& r : report.results) {
        out << "result: " << bv::assignment_string(r.assignment) << " " << bv::to_string(r.law) << " "
            << (r.member ? "member" : "non-member") << " certificate-size=" << r.certificate.size()
            << " relations-available=" << r.relations_available << "\n";
        for (std::size_t i = 0; i < r.certificate.size(); ++i)
            out << "certificate: " << r.coefficients[i].str() << " * " << r.certificate[i].label << "\n";
        if (!r.member) out << "residual: " << bv::to_string(r.residual) << "\n";
    }
    out << "members: " << report.members() << "/" << report.results.size() << "\n";
    out << "verdict: " << (report.all_members() ? "PASS" : "DIVERGES-FROM-PAPER") << "\n";
    return report.all_members() ? kExitOk : kExitDiverges;
}

// signs search -----------------------------------------------------------

struct SignsArgs {
    int degree = 2;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::size_t list = 256;
    std::size_t shadow_trials = 20;
    int n = 1;
    int m = 2;
};

std::string assignment_text(std::uint64_t s) {
    const auto& names = signs::variable_names();
    std::string t;
    for (unsigned i = 0; i < signs::kVariables; ++i)
        t += (i ? " " : "") + names[i] + "=" + std::to_string(s >> i & 1);
    return t;
}

int do_signs(const SignsArgs& a, std::ostream& out) {
    const auto seed = a.seed ? *a.seed : default_seed();
    AlgebraParams p;
    p.ring = sign::Ring::Z;
    p.n = a.n;
    p.m = a.m;
    signs::SearchReport r;
    try {
        r = signs::search(a.degree, a.trials, seed, p, signs::SearchOptions{a.list});
    } catch (const signs::UnsupportedBound& e) {
        throw InputError(e.what());
    }
    header(out, "signs search");
    out << "degree: " << r.degree_bound << "\n";
    out << "params: m=" << r.params.m << " n=" << r.params.n << " ring=z selectors=";
    for (std::size_t i = 0; i < signs::selectors().size(); ++i)
        out << (i ? "," : "") << calc::to_string(signs::selectors()[i]);
    out << "\n";
    out << "seed: " << seed << "\n";
    out << "trials: " << r.trials << "\n";
    out << "untested: " << (r.untested() ? "true" : "false") << "\n";
    out << "enumerated: " << r.enumerated << "\n";
    for (std::size_t i = 0; i < signs::selectors().size(); ++i)
        out << "survivors." << calc::to_string(signs::selectors()[i]) << ": " << r.survivors_per_selector[i] << "\n";
    out << "survivors: " << r.survivor_count() << "\n";
    out << "survivors-listed: " << r.survivors.size() << (r.survivors_truncated ? " (truncated)" : "") << "\n";
    for (const auto& s : r.survivors) out << "survivor: " << signs::to_string(s) << " passes=" << r.trials << "\n";
    for (const auto& e : r.eliminations) {
        out << "elimination: selector=" << calc::to_string(e.selector) << " trial=" << e.trial << " "
            << assignment_text(e.assignment) << " pattern=(" << (e.pattern & 1) << "," << (e.pattern >> 1 & 1) << ","
            << (e.pattern >> 2 & 1) << ")";
        if (e.rules_eliminated) out << " rules=" << *e.rules_eliminated;
        out << "\n";
        out << "elimination.residual: " << text::print_element(e.residual) << "\n";
    }
    for (auto sel : signs::selectors()) {
        const auto shadow = signs::mod2_shadow(signs::SignRule{sel, {}}, a.shadow_trials, seed, p);
        out << "mod2-shadow." << calc::to_string(sel) << ": passes=" << shadow.passes << "/" << shadow.trials
            << " verdict=" << shadow.verdict() << "\n";
    }
    out << "verdict: SEARCHED\n";
    return kExitOk;
}

// export-dot -------------------------------------------------------------

int do_export_dot(const std::string& file, const ParamFlags& flags, std::ostream& out) {
    const auto e = load_element(file, flags.params());
    const auto terms = e.term_list();
    if (terms.size() == 1) {
        out << text::export_dot(terms[0].key.shape);
        return kExitOk;
    }
    for (std::size_t i = 0; i < terms.size(); ++i)
        out << text::export_dot(terms[i].key.shape, "garland_" + std::to_string(i));
    return kExitOk;
}

// selftest ---------------------------------------------------------------

int do_selftest(std::ostream& out) {
    header(out, "selftest");
    bool ok = true;
    auto line = [&](const std::string& name, bool pass) {
        out << "selftest." << name << ": " << (pass ? "ok" : "FAILED") << "\n";
        ok = ok && pass;
    };

    AlgebraParams z2;
    const std::string sample = "gen(a, deg=2, copies=2, marks=[{g=1;(0,p),(1,q)}{g=2;(1,q)}])";
    const auto e = text::parse_element(sample, z2);
    line("round-trip", text::parse_element(text::print_element(e), z2) == e);
    line("unit", text::parse_element("gen(u, deg=0, copies=0, marks=[{g=1;}])", z2) == calc::unit(z2));

    GarlandShape s{3, {Mark{1, {{0, 0}, {2, 1}}}, Mark{2, {{1, 0}}}}};
    GarlandShape permuted{3, {Mark{2, {{0, 0}}}, Mark{1, {{1, 0}, {2, 1}}}}};
    line("canonical-form", canonicalize(s) == canonicalize(permuted) && canonicalize(canonicalize(s)) == canonicalize(s));

    AlgebraParams bnd = z2;
    bnd.p_is_boundary = true;
    line("prop42", lab::check(lab::Identity::Prop42, 30, 1, z2).verdict() == "PASS");
    line("unit-law-restricted",
         lab::check(lab::Identity::UnitLaw, 30, 1, z2, lab::Family::OneGradingOne).verdict() == "PASS");
    line("delta-squared", lab::check(lab::Identity::DeltaSq, 30, 1, bnd).verdict() == "PASS");

    const auto sym = bv::verify_law(bv::Law::GradedSymmetry, 0, {});
    const auto der = bv::verify_law(bv::Law::Derivation, 0b1011, {});
    line("bv-certificates", sym.member && sym.certificate.empty() && der.member && der.certificate.size() == 1);

    out << "verdict: " << (ok ? "PASS" : "FAILED") << "\n";
    return ok ? kExitOk : kExitInternal;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shape-level calculus for string operations on garlands", "garland"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    auto* selftest = app.add_subcommand("selftest", "run internal consistency checks");

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "test an identity on random inputs");
    check->add_option("identity", check_args.identity, "identity name")->required();
    check->add_option("--trials", check_args.trials, "number of trials");
    check->add_option("--seed", check_args.seed, "master seed (default: GARLAND_SEED or 1)");
    check->add_option("--family", check_args.family, "input family");
    check_args.flags.add_to(check);

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "apply an operation to elements read from files");
    eval->add_option("files", eval_args.files, "element files")->required();
    eval->add_option("--op", eval_args.op, "operation")
        ->required()
        ->check(CLI::IsMember({"product", "bracket", "lift", "proj", "delta"}));
    eval_args.flags.add_to(eval);

    BvArgs bv_args;
    auto* bv = app.add_subcommand("bv", "BV relation engine");
    bv->require_subcommand(1);
    auto* verify = bv->add_subcommand("verify", "verify the Gerstenhaber identities from the BV relation");
    verify->add_option("--bound", bv_args.bound, "maximum Δ-nesting depth");
    verify->add_flag("--no-bv-relation", bv_args.no_bv, "drop the seven-term relation");
    verify->add_flag("--no-delta-squared", bv_args.no_delta_squared, "drop Δ²=0");
    verify->add_option("--shuffle-seed", bv_args.shuffle_seed, "permute relation order");

    SignsArgs signs_args;
    auto* signs_cmd = app.add_subcommand("signs", "Jacobi sign conventions");
    signs_cmd->require_subcommand(1);
    auto* search = signs_cmd->add_subcommand("search", "search sign rules against the calculus over Z");
    search->add_option("--degree", signs_args.degree, "exponent degree bound (1 or 2)");
    search->add_option("--trials", signs_args.trials, "number of trials");
    search->add_option("--seed", signs_args.seed, "master seed (default: GARLAND_SEED or 1)");
    search->add_option("--list", signs_args.list, "maximum survivors listed");
    search->add_option("--shadow-trials", signs_args.shadow_trials, "trials for the mod-2 shadow check");
    search->add_option("--n", signs_args.n, "dimension of P");
    search->add_option("--m", signs_args.m, "dimension of the target manifold");

    std::string dot_file;
    ParamFlags dot_flags;
    auto* dot = app.add_subcommand("export-dot", "render the garland shapes of an element as DOT");
    dot->add_option("file", dot_file, "element file")->required();
    dot_flags.add_to(dot);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (selftest->parsed()) return do_selftest(out);
        if (check->parsed()) return do_check(check_args, out);
        if (eval->parsed()) return do_eval(eval_args, out);
        if (verify->parsed()) return do_bv(bv_args, out);
        if (search->parsed()) return do_signs(signs_args, out);
        if (dot->parsed()) return do_export_dot(dot_file, dot_flags, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    err << "error: no command\n";
    return kExitUsage;
}

}  // namespace garland::cli
