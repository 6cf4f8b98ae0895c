// lf: command-line driver for scripts, verification suites, the Fock oracle,
// patch geometry and the twisted zero modes.
//
// Exit codes: 0 all checks pass, 1 some check fails, 2 usage/input/resource error.

#include "lf/dsl.hpp"
#include "lf/fock.hpp"
#include "lf/models.hpp"
#include "lf/script.hpp"
#include "lf/suite.hpp"
#include "lf/twist.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace lf;

namespace {

constexpr const char* schema = "lf-report/1";

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string format = "text";
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string max_weight = "2";
    std::string cutoff;
};

struct Output {
    std::string command;
    std::vector<suite::Report> reports;
    json data = json::object();
    std::vector<std::string> text; // extra lines for text output
    bool ok() const
    {
        for (auto& r : reports)
            if (!r.ok()) return false;
        return true;
    }
};

// "5/2" or "2" → twice the value, which must be an integer
int half_units(const std::string& s, const char* what)
{
    Q q;
    if (q.set_str(s, 10) != 0) throw Usage(std::string("bad ") + what + ": " + s);
    q.canonicalize();
    Q t = 2 * q;
    if (t.get_den() != 1 || t < 0 || t > 200) throw Usage(std::string(what) + " must be a non-negative half-integer");
    return int(t.get_num().get_si());
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Usage("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// a script with its source, for diagnostics
struct Loaded {
    std::string path, source;
    dsl::Script script;
    std::unique_ptr<dsl::Interpreter> interp;
};

struct ScriptFailure : std::runtime_error {
    std::string rendered;
    explicit ScriptFailure(std::string r) : std::runtime_error("script error"), rendered(std::move(r)) {}
};

Loaded load_script(const std::string& path)
{
    Loaded L;
    L.path = path;
    L.source = read_file(path);
    auto pr = dsl::parse(L.source);
    std::string diag;
    for (auto& d : pr.errors) diag += d.render(L.source, path);
    if (!pr.ok()) throw ScriptFailure(diag);
    L.script = *pr.script;
    for (auto& d : dsl::resolve(L.script)) diag += d.render(L.source, path);
    if (!diag.empty()) throw ScriptFailure(diag);
    std::string base = std::filesystem::path(path).parent_path().string();
    try {
        L.interp = std::make_unique<dsl::Interpreter>(L.script, base.empty() ? "." : base);
    } catch (const dsl::ScriptError& e) {
        throw ScriptFailure(dsl::Diagnostic{e.loc, e.what(), {}}.render(L.source, path));
    }
    return L;
}

dsl::Expr parse_arg(const std::string& text)
{
    dsl::Expr e;
    auto pr = dsl::parse_expr(text, e);
    if (!pr.errors.empty()) throw ScriptFailure(pr.errors[0].render(text, "<argument>"));
    return e;
}

// evaluate in a script, reporting errors against the argument text
template <class F>
auto with_arg(const std::string& text, F&& f)
{
    try {
        return f(parse_arg(text));
    } catch (const dsl::ScriptError& e) {
        throw ScriptFailure(dsl::Diagnostic{e.loc, e.what(), {}}.render(text, "<argument>"));
    }
}

json report_json(const suite::Report& r)
{
    json checks = json::array();
    for (auto& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    return {{"title", r.title}, {"ok", r.ok()}, {"seconds", r.seconds}, {"checks", checks}};
}

int emit(const Output& out, const Options& o)
{
    if (o.format == "json") {
        json j = {{"schema", schema}, {"command", out.command}, {"ok", out.ok()}};
        json reps = json::array();
        for (auto& r : out.reports) reps.push_back(report_json(r));
        j["reports"] = reps;
        j["data"] = out.data;
        std::cout << j.dump(2) << "\n";
    } else {
        for (auto& line : out.text) std::cout << line << "\n";
        std::size_t n = 0, failed = 0;
        for (auto& r : out.reports) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
            std::cout << "== " << r.title << " (" << buf << "s)\n";
            for (auto& c : r.checks) {
                ++n;
                if (!c.ok) ++failed;
                std::cout << (c.ok ? "PASS " : "FAIL ") << c.name;
                if (!c.detail.empty()) std::cout << " | " << c.detail;
                std::cout << "\n";
            }
        }
        if (!out.reports.empty()) std::cout << n << " checks, " << failed << " failed\n";
    }
    return out.ok() ? 0 : 1;
}

// ---------------------------------------------------------------- commands

Output cmd_run(const std::string& path)
{
    Output out;
    out.command = "run";
    auto L = load_script(path);
    try {
        out.reports.push_back(L.interp->run_checks());
    } catch (const dsl::ScriptError& e) {
        throw ScriptFailure(dsl::Diagnostic{e.loc, e.what(), {}}.render(L.source, path));
    }
    json rules = json::object();
    for (auto& [k, v] : L.interp->engine().rule_counts()) rules[k] = v;
    out.data["rules_fired"] = rules;
    return out;
}

Output cmd_normalize(const std::string& path, const std::vector<std::string>& exprs)
{
    Output out;
    out.command = "normalize";
    auto L = load_script(path);
    json fields = json::array();
    auto show = [&](const std::string& name, const State& s) {
        std::string c = L.interp->render(s);
        fields.push_back({{"name", name}, {"canonical", c}, {"terms", s.size()}});
        out.text.push_back(name + " = " + c);
    };
    if (exprs.empty())
        for (auto& [n, s] : L.interp->fields()) show(n, s);
    for (auto& x : exprs) show(x, with_arg(x, [&](const dsl::Expr& e) { return L.interp->eval_state(e); }));
    out.data["fields"] = fields;
    return out;
}

Output cmd_bracket(const std::string& path, const std::string& a, const std::string& b)
{
    Output out;
    out.command = "bracket";
    auto L = load_script(path);
    State sa = with_arg(a, [&](const dsl::Expr& e) { return L.interp->eval_state(e); });
    State sb = with_arg(b, [&](const dsl::Expr& e) { return L.interp->eval_state(e); });
    Br r = L.interp->engine().bracket(sa, sb);
    std::string s = L.interp->render(r);
    out.text.push_back("[" + a + "_L " + b + "] = " + s);
    json terms = json::array();
    for (auto& [m, c] : r.terms())
        terms.push_back({{"lam", even_power(m, LAM)}, {"chi", odd_power(m, LAM)}, {"coefficient", L.interp->render(c)}});
    out.data = {{"left", a}, {"right", b}, {"result", s}, {"terms", terms}};
    return out;
}

Output cmd_axioms(const Options& o, const std::string& path, int samples, const std::vector<int>& dims)
{
    Output out;
    out.command = "verify-axioms";
    suite::AxiomOptions ao;
    ao.samples = samples;
    ao.seed = o.seed;
    ao.pair_weight2 = half_units(o.max_weight, "--max-weight");
    ao.triple_weight2 = std::max(0, ao.pair_weight2 - 1);
    if (!path.empty()) {
        auto L = load_script(path);
        out.reports.push_back(suite::axioms(L.interp->pres(), ao));
    } else {
        for (int n : dims) {
            if (n < 1 || n > 4) throw Usage("--n must be between 1 and 4");
            out.reports.push_back(suite::axioms(n, ao));
        }
    }
    out.data = {{"samples", samples}, {"seed", o.seed}, {"pair_weight2", ao.pair_weight2},
                {"triple_weight2", ao.triple_weight2}};
    return out;
}

NamedFields script_fields(Loaded& L)
{
    NamedFields nf;
    for (auto [name, dst] : {std::pair<const char*, State*>{"Jp", &nf.Jp}, {"Jm", &nf.Jm}, {"Hp", &nf.Hp}, {"Hm", &nf.Hm}}) {
        auto f = L.interp->field(name);
        if (!f) throw Usage(L.path + ": verify-n22 needs fields Jp, Jm, Hp, Hm; missing " + name);
        *dst = *f;
    }
    return nf;
}

Gauss parse_number(const std::string& text)
{
    return with_arg(text, [&](const dsl::Expr& e) {
        dsl::Script empty;
        dsl::Interpreter in(empty);
        return in.eval_number(e);
    });
}

Output cmd_n22(const std::string& path, const std::string& c_text, int n)
{
    Output out;
    out.command = "verify-n22";
    if (path.empty()) {
        if (n < 1 || n > 4) throw Usage("--n must be between 1 and 4");
        out.reports.push_back(suite::n22(n));
        return out;
    }
    auto L = load_script(path);
    std::optional<Gauss> c;
    if (!c_text.empty()) c = parse_number(c_text);
    else c = L.interp->n22_charge();
    if (!c) throw Usage("central charge unknown: pass --c or add check n22(c) to the script");
    suite::Report r;
    r.title = "N=2,2 relations, " + path + ", c = " + c->str();
    auto t0 = std::chrono::steady_clock::now();
    auto nf = script_fields(L);
    for (auto& res : verify_n22(L.interp->engine(), nf, *c))
        r.add(res.name, res.ok(), res.ok() ? "0" : L.interp->render(res.value));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.reports.push_back(r);
    out.data = {{"c", c->str()}};
    return out;
}

Output cmd_n2(const std::string& path, const std::string& J, const std::string& H, const std::string& c_text)
{
    Output out;
    out.command = "verify-n2";
    auto L = load_script(path);
    State sj = with_arg(J, [&](const dsl::Expr& e) { return L.interp->eval_state(e); });
    State sh = with_arg(H, [&](const dsl::Expr& e) { return L.interp->eval_state(e); });
    Gauss c = parse_number(c_text);
    suite::Report r;
    r.title = "N=2 relations, J = " + J + ", H = " + H + ", c = " + c.str();
    auto t0 = std::chrono::steady_clock::now();
    for (auto& res : verify_single_n2(L.interp->engine(), sj, sh, c))
        r.add(res.name, res.ok(), res.ok() ? "0" : L.interp->render(res.value));
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.reports.push_back(r);
    return out;
}

struct DumpRequest {
    std::string field, mode = "0|1", file;
};

Output cmd_oracle(const Options& o, const std::string& path, int n, int letters, int zeros, const DumpRequest& dump)
{
    Output out;
    out.command = "oracle-compare";
    suite::OracleOptions oo;
    oo.max_weight2 = half_units(o.max_weight, "--max-weight");
    oo.cutoff2 = o.cutoff.empty() ? 5 : half_units(o.cutoff, "--cutoff");
    oo.stable_cutoff2 = oo.cutoff2 + 2;
    oo.max_letters = letters;
    oo.max_zero = zeros;
    oo.jobs = o.jobs;
    std::unique_ptr<Loaded> L;
    if (!path.empty()) {
        L = std::make_unique<Loaded>(load_script(path));
        out.reports.push_back(suite::oracle(L->interp->pres(), oo, 0));
    } else {
        if (n < 1 || n > 2) throw Usage("--n must be 1 or 2");
        out.reports.push_back(suite::oracle(n, oo));
    }
    out.data = {{"max_weight2", oo.max_weight2}, {"cutoff2", oo.cutoff2}, {"max_letters", letters}, {"max_zero", zeros}};
    if (!dump.field.empty()) {
        auto bar = dump.mode.find('|');
        if (bar == std::string::npos) throw Usage("--mode must look like j|J, e.g. 0|1");
        long j = std::stol(dump.mode.substr(0, bar));
        int J = std::stoi(dump.mode.substr(bar + 1));
        if (J != 0 && J != 1) throw Usage("--mode: J must be 0 or 1");
        std::unique_ptr<Engine> own;
        Engine* e;
        if (L) {
            e = &L->interp->engine();
        } else {
            own = std::make_unique<Engine>(free_sigma_model(n));
            e = own.get();
        }
        fock::Model M(e->pres());
        fock::Evaluator ev(M);
        State s;
        if (L) {
            s = with_arg(dump.field, [&](const dsl::Expr& x) { return L->interp->eval_state(x); });
        } else {
            dsl::Script sc;
            dsl::Interpreter tmp(sc);
            // names of the free model resolve through a throwaway script
            std::string src;
            for (auto& g : e->pres().generators())
                src += "gen " + g.name + (g.odd ? " odd" : " even") + " weight " + std::to_string(g.weight2) + "/2;\n";
            for (auto& [k, v] : e->pres().bracket_table()) {
                (void)v;
                src += "bracket [" + e->pres().gen(k.first).name + ", " + e->pres().gen(k.second).name + "] = 1;\n";
            }
            auto pr = dsl::parse(src);
            dsl::Interpreter in(*pr.script);
            s = with_arg(dump.field, [&](const dsl::Expr& x) { return in.eval_state(x); });
            s = e->no(State::vac(), s);
        }
        fock::Basis B = fock::build_fock(M, oo.cutoff2, 2);
        auto mat = fock::operator_matrix(ev, fock::from_state(M, s), j, J, B);
        std::string text = fock::dump_matrix(mat);
        if (dump.file.empty() || dump.file == "-") {
            out.text.push_back(text);
        } else {
            std::ofstream f(dump.file);
            if (!f) throw Usage("cannot write " + dump.file);
            f << text;
        }
        out.data["dump"] = {{"field", dump.field}, {"mode", dump.mode}, {"basis", B.size()}, {"nonzeros", mat.nnz()},
                            {"file", dump.file.empty() ? "-" : dump.file}};
    }
    return out;
}

geo::Patch load_patch(const std::string& path)
{
    try {
        return geo::parse_patch(read_file(path));
    } catch (const Usage&) {
        throw;
    } catch (const std::exception& e) {
        throw ScriptFailure(path + ": " + e.what() + "\n");
    }
}

Output cmd_geometry(const Options& o, const std::string& which, const std::string& patch_path, int n, int trials)
{
    Output out;
    out.command = "geometry " + which;
    if (which == "check-courant") {
        if (patch_path.empty()) throw Usage("check-courant needs --H FILE");
        auto p = load_patch(patch_path);
        out.reports.push_back(suite::courant(p.H, trials, o.seed));
        return out;
    }
    if (which == "suite") {
        out.reports.push_back(suite::geometry({trials, o.seed}));
        return out;
    }
    if (which == "trace") {
        out.reports.push_back(suite::trace());
        return out;
    }
    geo::Bihermitian d;
    geo::Form H;
    std::string tag;
    if (!patch_path.empty()) {
        auto p = load_patch(patch_path);
        if (!p.has_metric) throw Usage(patch_path + ": patch has no metric");
        d = p.data;
        H = p.H.dim() == d.dim() ? p.H : geo::Form(d.dim());
        tag = " (" + patch_path + ")";
    } else {
        if (n < 1 || n > 3) throw Usage("--n must be between 1 and 3");
        d = geo::flat_kahler(n);
        H = geo::Form(2 * n);
        tag = " (flat n=" + std::to_string(n) + ")";
    }
    if (which == "check-frames") out.reports.push_back(suite::frames_report(d, H, tag));
    else if (which == "modular") out.reports.push_back(suite::modular_report(d, H, tag));
    else if (which == "dilaton") out.reports.push_back(suite::dilaton_report(d, H, tag));
    else throw Usage("unknown geometry verb " + which);
    return out;
}

Output cmd_twist_check(const Options& o, int D, int Dbar)
{
    Output out;
    out.command = "twist check";
    int c2 = o.cutoff.empty() ? 2 : half_units(o.cutoff, "--cutoff");
    auto s = twist::flat_setup(1);
    fock::Basis B = twist::twist_basis(*s->model, {c2, D, Dbar});
    auto rep = twist::brst_check(*s->ev, s->ops, B);
    suite::Report r;
    r.title = "BRST identities, cutoff2 " + std::to_string(c2) + ", basis " + std::to_string(B.size());
    auto t0 = std::chrono::steady_clock::now();
    for (auto& c : rep.checks)
        r.add(c.name, c.ok(), std::to_string(c.nonzero_columns) + "/" + std::to_string(c.columns) + " nonzero columns");
    r.add("negative control detected: " + rep.negative_control.name, !rep.negative_control.ok(),
          std::to_string(rep.negative_control.nonzero_columns) + " nonzero columns");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.reports.push_back(r);
    json diag = json::array();
    for (auto& d : rep.diagnostics) {
        diag.push_back({{"name", d.name}, {"nonzero_columns", d.nonzero_columns}, {"columns", d.columns}});
        out.text.push_back("diagnostic " + d.name + ": " + std::to_string(d.nonzero_columns) + "/" +
                           std::to_string(d.columns) + " nonzero columns");
    }
    out.data = {{"cutoff2", c2}, {"basis", B.size()}, {"diagnostics", diag}};
    return out;
}

Output cmd_twist_cohomology(const Options& o, const std::string& weight, const std::string& weight_minus,
                            const std::string& diff, int D, int Dbar)
{
    Output out;
    out.command = "twist cohomology";
    int c2 = o.cutoff.empty() ? 4 : half_units(o.cutoff, "--cutoff");
    Q hp, hm;
    if (hp.set_str(weight, 10) != 0) throw Usage("bad --weight " + weight);
    if (hm.set_str(weight_minus.empty() ? weight : weight_minus, 10) != 0) throw Usage("bad --weight-minus");
    hp.canonicalize();
    hm.canonicalize();
    twist::Diff d;
    try {
        d = twist::parse_diff(diff);
    } catch (const std::exception& e) {
        throw Usage(e.what());
    }
    auto s = twist::flat_setup(1);
    fock::Basis B = twist::twist_basis(*s->model, {c2, D, Dbar});
    auto t0 = std::chrono::steady_clock::now();
    auto sp = twist::spectrum(*s->ev, s->ops, B);
    auto tab = twist::cohomology(*s->ev, s->ops, B, sp, d, hp, hm);
    suite::Report r;
    r.title = twist::diff_name(d) + " cohomology at (L0+, L0-) = (" + hp.get_str() + ", " + hm.get_str() +
              "), cutoff2 " + std::to_string(c2);
    r.add("differential preserves the cell", tab.closed);
    r.add("cell complete at this cutoff", tab.stable && sp.complete, tab.stable ? "" : "raise --cutoff");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.reports.push_back(r);
    json rows = json::array();
    out.text.push_back("degree  J0+  J0-   dim  rank_out  rank_in  h");
    for (auto& row : tab.rows) {
        rows.push_back({{"degree", row.degree}, {"j0_plus", row.qp}, {"j0_minus", row.qm}, {"dim", row.dim},
                        {"rank_out", row.rank_out}, {"rank_in", row.rank_in}, {"h", row.h}});
        char buf[128];
        std::snprintf(buf, sizeof buf, "%6ld %4ld %4ld %5zu %9zu %8zu %2zu", row.degree, row.qp, row.qm, row.dim,
                      row.rank_out, row.rank_in, row.h);
        out.text.push_back(buf);
    }
    out.text.push_back("total " + std::to_string(tab.total()) + ", euler " + std::to_string(tab.euler));
    out.data = {{"diff", twist::diff_name(d)}, {"cutoff2", c2}, {"basis", B.size()},   {"rows", rows},
                {"total", tab.total()},       {"euler", tab.euler}, {"stable", tab.stable}};
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lf: Lambda-bracket normal forms, free-field oracle and generalized geometry checks"};
    app.require_subcommand(1);
    Options o;
    auto globals = [&](CLI::App* a) {
        a->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
        a->add_option("--seed", o.seed, "seed for randomized suites");
        a->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));
        a->add_option("--max-weight", o.max_weight, "largest conformal weight, e.g. 2 or 3/2");
        a->add_option("--cutoff", o.cutoff, "Fock truncation weight, e.g. 5/2");
    };
    globals(&app);

    std::string script, expr_a, expr_b, c_text, J = "J", H = "H", patch_path, weight = "0", weight_minus,
                                                   diff = "Q+";
    std::vector<std::string> exprs;
    std::vector<int> dims = {1, 2};
    int samples = 200, n = 1, letters = 3, zeros = 2, trials = 50, D = 2, Dbar = 1;
    DumpRequest dump;

    auto* run = app.add_subcommand("run", "run the check statements of a script");
    run->add_option("script", script)->required();
    auto* norm = app.add_subcommand("normalize", "print canonical forms of script fields or expressions");
    norm->add_option("script", script)->required();
    norm->add_option("-e,--expr", exprs, "expression to normalize (repeatable)");
    auto* br = app.add_subcommand("bracket", "compute [a_L b] in a script");
    br->add_option("script", script)->required();
    br->add_option("a", expr_a)->required();
    br->add_option("b", expr_b)->required();
    auto* ax = app.add_subcommand("verify-axioms", "skew-symmetry, Jacobi, quasi-associativity on random samples");
    ax->add_option("script", script, "script presentation (default: free models)");
    ax->add_option("--samples", samples)->check(CLI::Range(1, 100000));
    ax->add_option("--n", dims, "free model dimensions");
    auto* n2 = app.add_subcommand("verify-n2", "N=2 relations for one pair of script fields");
    n2->add_option("script", script)->required();
    n2->add_option("--J", J, "expression for J");
    n2->add_option("--H", H, "expression for H");
    n2->add_option("--c", c_text, "central charge")->required();
    auto* n22 = app.add_subcommand("verify-n22", "the six N=2,2 families for fields Jp, Jm, Hp, Hm");
    n22->add_option("script", script, "script (default: the flat model)");
    n22->add_option("--c", c_text, "central charge (default: from check n22(c))");
    n22->add_option("--n", n, "flat model dimension when no script is given");
    auto* orc = app.add_subcommand("oracle-compare", "engine brackets against Fock-space commutators");
    orc->add_option("script", script, "script with constant generator brackets (default: free model)");
    orc->add_option("--n", n, "free model dimension");
    orc->add_option("--max-letters", letters)->check(CLI::Range(1, 8));
    orc->add_option("--max-zero", zeros, "weight-zero letters per expression")->check(CLI::Range(0, 8));
    orc->add_option("--dump", dump.field, "dump the operator matrix of this field");
    orc->add_option("--mode", dump.mode, "mode j|J of the dumped operator");
    orc->add_option("--dump-file", dump.file, "write the dump here instead of stdout");
    auto* geom = app.add_subcommand("geometry", "generalized geometry on a coordinate patch");
    geom->require_subcommand(1);
    std::vector<CLI::App*> gsubs;
    for (auto [name, help] : {std::pair<const char*, const char*>{"check-courant", "Courant axioms for the 3-form of a patch file"},
                              {"check-frames", "bihermitian data, frames, structure functions"},
                              {"modular", "modular class representatives and Poisson divergence"},
                              {"dilaton", "dilaton against the v one-forms"},
                              {"suite", "the full randomized geometry suite"},
                              {"trace", "structure-function trace identities"}}) {
        auto* g = geom->add_subcommand(name, help);
        g->add_option("--H,--patch", patch_path, "patch file");
        g->add_option("--n", n, "flat model dimension when no patch is given");
        g->add_option("--trials", trials)->check(CLI::Range(1, 100000));
        gsubs.push_back(g);
    }
    auto* tw = app.add_subcommand("twist", "twisted zero modes of the flat n=1 model");
    tw->require_subcommand(1);
    auto* twc = tw->add_subcommand("check", "BRST identities as exact matrices");
    auto* twh = tw->add_subcommand("cohomology", "cohomology dimensions of one weight cell");
    for (auto* t : {twc, twh}) {
        t->add_option("--D", D, "bound on holomorphic polynomial degree")->check(CLI::Range(0, 8));
        t->add_option("--Dbar", Dbar, "bound on antiholomorphic polynomial degree")->check(CLI::Range(0, 8));
    }
    twh->add_option("--weight", weight, "L0+ eigenvalue");
    twh->add_option("--weight-minus", weight_minus, "L0- eigenvalue (default: --weight)");
    twh->add_option("--diff", diff, "Q+, Q-, QB or QA");

    for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
        sub->fallthrough();
        for (auto* s2 : sub->get_subcommands([](CLI::App*) { return true; })) s2->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Output out;
        if (run->parsed()) out = cmd_run(script);
        else if (norm->parsed()) out = cmd_normalize(script, exprs);
        else if (br->parsed()) out = cmd_bracket(script, expr_a, expr_b);
        else if (ax->parsed()) out = cmd_axioms(o, script, samples, dims);
        else if (n2->parsed()) out = cmd_n2(script, J, H, c_text);
        else if (n22->parsed()) out = cmd_n22(script, c_text, n);
        else if (orc->parsed()) out = cmd_oracle(o, script, n, letters, zeros, dump);
        else if (geom->parsed()) {
            for (auto* g : gsubs)
                if (g->parsed()) out = cmd_geometry(o, g->get_name(), patch_path, n, trials);
        } else if (twc->parsed()) out = cmd_twist_check(o, D, Dbar);
        else if (twh->parsed()) out = cmd_twist_cohomology(o, weight, weight_minus, diff, D, Dbar);
        return emit(out, o);
    } catch (const ScriptFailure& e) {
        std::cerr << e.rendered;
    } catch (const Usage& e) {
        std::cerr << "lf: " << e.what() << "\n";
    } catch (const fock::ResourceError& e) {
        std::cerr << "lf: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "lf: error: " << e.what() << "\n";
    }
    if (o.format == "json") {
        json j = {{"schema", schema}, {"ok", false}, {"error", true}};
        std::cout << j.dump(2) << "\n";
    }
    return 2;
}
