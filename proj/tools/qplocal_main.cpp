#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "qplocal/json_io.hpp"

using namespace qpl;

namespace {

struct Options {
    long prime = 3;
    long delta = 0;  // 0 = smallest non-residue
    int precision = 12;
    long radius = 2000000;  // tube exploration cap (points)
    std::string format = "json";
    unsigned long seed = 1;
    std::string form;
    std::string ambient = "1,-1,1,-1";
    std::string level = "1";
    std::string space = "splus";
    std::string local_case = "inert";
    std::string suite = "all";
    int brute_t = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--prime", o.prime, "odd prime p")->check(CLI::PositiveNumber);
    cmd->add_option("--delta", o.delta, "non-square unit override (default: smallest)");
    cmd->add_option("--precision", o.precision, "working precision exponent t");
    cmd->add_option("--radius", o.radius, "exploration cap for tree searches");
    cmd->add_option("--format", o.format, "output format: json, text, csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    cmd->add_option("--seed", o.seed, "seed for randomized sweeps");
}

long env_budget(const char* name, long fallback) {
    const char* v = std::getenv(name);
    return v ? std::atol(v) : fallback;
}

std::vector<mpq_class> parse_rat_list(const std::string& text) {
    std::vector<mpq_class> out;
    std::string cur;
    for (char ch : text + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(parse_rat(cur));
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (out.empty()) throw std::invalid_argument("empty form list");
    return out;
}

void emit(const ojson& j, const std::string& format) {
    if (format == "json") {
        std::cout << j.dump(2) << "\n";
    } else if (format == "csv") {
        std::string out;
        flatten_csv(j, "", out);
        std::cout << out;
    } else {
        std::string out;
        flatten_csv(j, "", out);
        for (char& c : out)
            if (c == ',') c = '\t';
        std::cout << out;
    }
}

NamedForm parse_space(const std::string& s) {
    if (s == "splus") return NamedForm::SPlus;
    if (s == "h4") return NamedForm::H4;
    if (s == "slattice") return NamedForm::SLattice;
    if (s == "sminus") return NamedForm::SMinus;
    if (s == "saniso") return NamedForm::SAniso;
    throw CLI::ValidationError("--space", "unknown space name " + s);
}

int run_density(const Options& o) {
    PrimeContext ctx = PrimeContext::make(o.prime, o.delta, o.precision);
    NamedForm f = parse_space(o.space);
    DiagonalForm T = parse_form(ctx, o.form);
    ojson j;
    j["prime"] = o.prime;
    j["space"] = o.space;
    j["T"] = to_json(T);
    if (o.brute_t > 0) {
        long budget = env_budget("QPLOCAL_BUDGET", 400000000L);
        CountResult r = density_bruteforce(ctx, SymForm::diagonal(named_entries(ctx, f)),
                                           T.to_sym(ctx), o.brute_t, false, budget);
        j["path"] = "brute-force";
        j["count"] = r.count.get_str();
        j["t"] = r.t;
        j["density"] = rat_str(r.density);
    } else if (T.rank() == 1) {
        DensityPolynomial cf = closed_form_unary(ctx, f, T.d[0].delta);
        j["path"] = "closed-form";
        j["polynomial"] = to_json(cf);
        j["value_at_one"] = rat_str(cf.at_one());
    } else {
        ReducedDensity rd = reduce(ctx, f, T);
        j["path"] = "closed-form";
        j["represented"] = rd.represented;
        ojson fs = ojson::array();
        for (const ReductionFactor& fac : rd.factors) {
            ojson fj = to_json(fac.poly);
            fj["label"] = fac.label;
            if (fac.denominator) fj["denominator"] = true;
            fs.push_back(fj);
        }
        j["factors"] = fs;
        j["value_at_one"] = rat_str(rd.value.at_one());
        j["derivative_at_one"] = rat_str(rd.value.derivative_at_one());
    }
    emit(j, o.format);
    return 0;
}

int run_length(const Options& o) {
    PrimeContext ctx = PrimeContext::make(o.prime, o.delta, o.precision);
    DiagonalForm T = parse_form(ctx, o.form);
    LengthResult r = intersection_length(ctx, T);
    ojson j;
    j["prime"] = o.prime;
    j["T"] = to_json(T);
    j["e_p"] = rat_str(r.value);
    j["in_domain"] = r.in_domain;
    j["case"] = r.case_tag;
    emit(j, o.format);
    return 0;
}

int run_tube(const Options& o) {
    PrimeContext ctx = PrimeContext::make(o.prime, o.delta, o.precision);
    DiagonalForm T = parse_form(ctx, o.form);
    if (T.rank() != 3) throw std::invalid_argument("rank-3 form required");
    TripleSpec sp;
    for (const DiagTerm& d : T.d) {
        if (d.a < 1) throw std::invalid_argument("tube targets must be divisible by p");
        sp.r.push_back(d.a - 1);
        sp.delta.push_back(d.delta);
    }
    ojson j;
    j["prime"] = o.prime;
    j["T"] = to_json(T);
    QuadCtx qc(ctx, std::max(suggested_precision(sp), o.precision));
    auto tr = construct_triple(ctx, qc, sp);
    j["represented"] = tr.has_value();
    if (!tr) {
        j["count"] = 0;
        j["edges"] = 0;
        j["radius"] = "0";
        emit(j, o.format);
        return 0;
    }
    TubeReport rep = tube_report_bfs(qc, tr->b, sp.r, o.radius);
    j["count"] = rep.vertices.get_str();
    j["edges"] = rep.edges.get_str();
    j["radius"] = rat_str(mpq_class(rep.dradius, 2));
    j["stabilized"] = rep.stabilized;
    ojson cases = ojson::array();
    if (sp.r[0] % 2 == 0)
        for (int i = 1; i <= 2; ++i) {
            switch (gamma_case(ctx, triple_gamma_sq(ctx, sp, i))) {
                case FixedSetClass::Split: cases.push_back("split"); break;
                case FixedSetClass::Unramified: cases.push_back("unramified-elliptic"); break;
                case FixedSetClass::Ramified: cases.push_back("ramified-elliptic"); break;
            }
        }
    j["cases"] = cases;
    ojson fst = ojson::array();
    for (const Endo& e : tr->b)
        fst.push_back(classify_fixed_set(ctx, e) == FixedPointType::VertexSubtree
                          ? "vertex-subtree"
                          : "single-midpoint");
    j["fixed_set_types"] = fst;
    emit(j, o.format);
    return 0;
}

int run_classify(const Options& o) {
    PrimeContext ctx = PrimeContext::make(o.prime, o.delta, o.precision);
    DiagonalForm T = parse_form(ctx, o.form);
    CycleCase cc = o.local_case == "split" ? CycleCase::Split : CycleCase::Inert;
    CycleClassification r = classify_cycle(ctx, T.to_sym(ctx), cc);
    ojson j;
    j["prime"] = o.prime;
    j["T"] = to_json(T);
    j["case"] = o.local_case;
    switch (r.locus) {
        case CycleLocus::Empty: j["locus"] = "empty"; break;
        case CycleLocus::IsolatedSuperspecial: j["locus"] = "isolated-points"; break;
        case CycleLocus::ContainsComponents: j["locus"] = "contains-components"; break;
        case CycleLocus::OrdinaryPossible: j["locus"] = "ordinary-possible"; break;
    }
    j["reasons"] = r.reasons;
    bool all_div = T.rank() == 3;
    for (const DiagTerm& d : T.d) all_div = all_div && d.a >= 1;
    if (all_div)
        j["irreducible"] = hz_irreducible(ctx, T);
    else
        j["irreducible"] = nullptr;
    emit(j, o.format);
    return 0;
}

int run_eis(const Options& o) {
    PrimeContext ctx = PrimeContext::make(o.prime, o.delta, o.precision);
    DiagonalForm T = parse_form(ctx, o.form);
    WhittakerCase wc = o.local_case == "split" ? WhittakerCase::Split : WhittakerCase::Inert;
    ojson j;
    j["prime"] = o.prime;
    j["T"] = to_json(T);
    j["case"] = o.local_case;
    WhittakerValue v = whittaker_value(ctx, T, wc);
    j["value"] = to_json(v);
    LengthResult len = intersection_length(ctx, T);
    if (len.in_domain)
        j["e_p"] = static_cast<long>(len.value.get_num().get_si());
    else
        j["e_p"] = nullptr;
    if (v.magnitude == 0 && len.in_domain)
        j["derivative"] = to_json(whittaker_derivative(ctx, T, wc));
    else
        j["derivative"] = nullptr;
    emit(j, o.format);
    return 0;
}

int run_diff(const Options& o) {
    std::vector<mpq_class> t = parse_rat_list(o.form);
    std::vector<mpq_class> amb = parse_rat_list(o.ambient);
    mpz_class N(o.level);
    ojson j;
    ojson tj = ojson::array(), aj = ojson::array();
    for (const mpq_class& e : t) tj.push_back(rat_str(e));
    for (const mpq_class& e : amb) aj.push_back(rat_str(e));
    j["t"] = tj;
    j["ambient"] = aj;
    j["level"] = N.get_str();
    RegularityResult rr = is_regular(t, amb, N);
    ojson dj = ojson::array();
    for (const Place& v : rr.diff) dj.push_back(v.str());
    j["diff"] = dj;
    j["regular"] = rr.regular;
    j["reason"] = rr.reason;
    if (rr.regular) {
        DegreeFactor df = degree_factor(t, amb, N);
        ojson g;
        g["prime"] = df.prime;
        g["e_p"] = rat_str(df.e_p);
        g["logp"] = df.log_p_power;
        j["degree"] = g;
    } else {
        j["degree"] = nullptr;
    }
    emit(j, o.format);
    return 0;
}

int run_verify_cmd(const Options& o) {
    std::vector<CheckResult> rs = run_verify(o.seed, o.suite);
    ojson j;
    j["seed"] = o.seed;
    j["suite"] = o.suite;
    ojson cs = ojson::array();
    int failures = 0;
    for (const CheckResult& r : rs) {
        cs.push_back(to_json(r));
        if (r.status == "fail") ++failures;
    }
    j["checks"] = cs;
    j["failures"] = failures;
    emit(j, o.format);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qplocal: exact local invariants of ternary quadratic forms at an odd prime — "
        "representation densities, intersection lengths, lattice tube counts, cycle "
        "classification, and local Whittaker factors, with a cross-validation harness."};
    app.require_subcommand(1);
    Options o;

    auto* density = app.add_subcommand(
        "density", "representation density of a diagonal target against a named quaternary");
    density->add_option("--form", o.form, "diagonal target, e.g. \"1,p,p\"")->required();
    density->add_option("--space", o.space, "splus | h4 | slattice | sminus | saniso");
    density->add_option("--brute", o.brute_t, "run the counting oracle at this precision t");
    add_common(density, o);

    auto* length = app.add_subcommand("length", "intersection length e_p of a rank-3 target");
    length->add_option("--form", o.form, "diagonal target, e.g. \"1,1,p\"")->required();
    add_common(length, o);

    auto* tube = app.add_subcommand(
        "tube", "lattice tube count for a p-divisible rank-3 target, e.g. \"p,p,p\"");
    tube->add_option("--form", o.form, "diagonal target divisible by p")->required();
    add_common(tube, o);

    auto* classify = app.add_subcommand("classify", "support structure of the special cycle");
    classify->add_option("--form", o.form, "diagonal target")->required();
    classify->add_option("--case", o.local_case, "inert | split");
    add_common(classify, o);

    auto* eis = app.add_subcommand("eis", "local Whittaker value and central derivative");
    eis->add_option("--form", o.form, "diagonal target")->required();
    eis->add_option("--case", o.local_case, "inert | split");
    add_common(eis, o);

    auto* diff = app.add_subcommand(
        "diff", "failure places of a ternary target inside a quaternary collection");
    diff->add_option("--form", o.form, "rational diagonal, e.g. \"1,1,7\"")->required();
    diff->add_option("--ambient", o.ambient, "rational diagonal of the coherent ambient");
    diff->add_option("--level", o.level, "level N");
    add_common(diff, o);

    auto* verify = app.add_subcommand("verify", "run the cross-validation suite");
    verify->add_option("--suite", o.suite, "\"all\" or a check-name prefix, e.g. \"03\"");
    add_common(verify, o);

    CLI11_PARSE(app, argc, argv);
    try {
        if (density->parsed()) return run_density(o);
        if (length->parsed()) return run_length(o);
        if (tube->parsed()) return run_tube(o);
        if (classify->parsed()) return run_classify(o);
        if (eis->parsed()) return run_eis(o);
        if (diff->parsed()) return run_diff(o);
        if (verify->parsed()) return run_verify_cmd(o);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
