#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jderiv/suites.hpp"

using namespace jderiv;
using nlohmann::ordered_json;

namespace
{

struct Globals {
    int prec = 256;
    std::uint64_t seed = 1;
    bool json = false;
    std::string cache_dir;
};

int digits_for(int prec)
{
    return static_cast<int>(std::ceil(prec * std::log10(2.0)));
}

ordered_json complex_json(const HPComplex &z, int digits)
{
    return {{"re", z.re.to_string(digits)}, {"im", z.im.to_string(digits)}};
}

void emit(const Globals &g, const ordered_json &j, const std::string &text)
{
    if (g.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

HPComplex parse_tau(const std::string &s, int prec)
{
    static const std::regex number(R"(\s*[-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?\s*)");
    auto comma = s.find(',');
    if (comma == std::string::npos || !std::regex_match(s.substr(0, comma), number) ||
        !std::regex_match(s.substr(comma + 1), number)) {
        throw DomainError("expected a point as \"re,im\", got '" + s + "'");
    }
    return HPComplex::parse(s, working_prec(prec)).tagged(prec);
}

mpz_class parse_height(const std::string &s)
{
    static const std::regex sci(R"((\d+)(?:[eE](\d+))?)");
    std::smatch m;
    if (!std::regex_match(s, m, sci)) {
        throw DomainError("bad height '" + s + "'");
    }
    mpz_class h(m[1].str()), ten;
    if (m[2].matched) {
        mpz_ui_pow_ui(ten.get_mpz_t(), 10, std::stoul(m[2].str()));
        h *= ten;
    }
    return h;
}

Mat2Z matrix_from(const ordered_json &j, const std::string &key)
{
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 4) {
        throw DomainError("config: '" + key + "' must be [a, b, c, d]");
    }
    auto e = [&](int k) { return mpz_class(j[key][static_cast<std::size_t>(k)].get<long>()); };
    return Mat2Z(e(0), e(1), e(2), e(3));
}

QuadraticPoint point_from(const ordered_json &j)
{
    if (!j.is_array() || j.size() != 3) {
        throw DomainError("config: quadratic points are [A, B, C]");
    }
    return qpoint(j[0].get<long>(), j[1].get<long>(), j[2].get<long>());
}

Variety variety_from(const ordered_json &cfg, const std::filesystem::path &base)
{
    if (!cfg.contains("W") || !cfg["W"].is_string()) {
        throw DomainError("config: 'W' must be variety text or a file path");
    }
    std::string w = cfg["W"].get<std::string>();
    if (w.rfind("VAR", 0) != 0) {
        std::ifstream in(base / w);
        if (!in) {
            throw DomainError("config: cannot read variety file " + (base / w).string());
        }
        std::stringstream ss;
        ss << in.rdbuf();
        w = ss.str();
    }
    return Variety::parse(w);
}

int cmd_eval(const Globals &g, const std::string &tau_text)
{
    HPComplex tau = parse_tau(tau_text, g.prec);
    ModularValues v = evaluate(tau, g.prec);
    const int d = digits_for(g.prec);
    ordered_json j{{"tau", complex_json(tau, d)},          {"prec_bits", g.prec},
                   {"digits", d},                          {"reduced_tau", complex_json(v.reduction.tau0, d)},
                   {"reduction_steps", v.reduction.steps}, {"j", complex_json(v.j, d)},
                   {"jp", complex_json(v.jp, d)},          {"jpp", complex_json(v.jpp, d)},
                   {"chi", complex_json(v.chi, d)},        {"f", complex_json(v.f, d)},
                   {"e2star", complex_json(v.e2star, d)},  {"chistar", complex_json(v.chistar, d)}};
    std::string text = "prec_bits " + std::to_string(g.prec) + " digits " + std::to_string(d) + "\n";
    for (const char *k : {"tau", "reduced_tau", "j", "jp", "jpp", "chi", "f", "e2star", "chistar"}) {
        text += std::string(k) + " " + j[k]["re"].get<std::string>() + " " + j[k]["im"].get<std::string>() + "\n";
    }
    emit(g, j, text);
    return 0;
}

int cmd_phi(const Globals &g, long n)
{
    PhiCache cache(resolve_cache_dir(g.cache_dir));
    const bool had = std::filesystem::exists(cache.file_for(n));
    const ModularPolynomial &phi = cache.get(n);
    ordered_json coeffs = ordered_json::array();
    for (const auto &[k, c] : phi.coeffs()) {
        coeffs.push_back({k.first, k.second, c.get_str()});
    }
    ordered_json j{{"N", n},
                   {"monomials", phi.n_monomials()},
                   {"degree", phi.degree_x()},
                   {"cache_file", cache.file_for(n).string()},
                   {"from_cache", had},
                   {"coefficients", coeffs}};
    std::string text = phi.serialize() + "monomials " + std::to_string(phi.n_monomials()) + "\ncache " +
                       cache.file_for(n).string() + (had ? " (read)" : " (written)") + "\n";
    emit(g, j, text);
    return 0;
}

ordered_json class_poly_json(const ClassPolynomial &cp)
{
    ordered_json c = ordered_json::array();
    for (const auto &x : cp.coeffs) {
        c.push_back(x.get_str());
    }
    return {{"D", cp.D},           {"degree", cp.degree()},         {"poly", cp.to_string()},
            {"coefficients", c},   {"prec_bits", cp.prec_bits},     {"max_rounding_residual", cp.max_residual}};
}

int cmd_hilbert(const Globals &g, long d)
{
    if (!detail::valid_discriminant(d)) {
        throw DomainError("not a negative discriminant: " + std::to_string(d));
    }
    ClassPolynomial cp = hilbert_class_poly(d, g.prec);
    std::ostringstream os;
    os << "D " << d << "\nh " << cp.degree() << "\nH " << cp.to_string() << "\nprec_bits " << cp.prec_bits
       << "\nmax_rounding_residual " << cp.max_residual << "\n";
    emit(g, class_poly_json(cp), os.str());
    return 0;
}

int cmd_orbit(const Globals &g, long d)
{
    if (!detail::valid_discriminant(d)) {
        throw DomainError("not a negative discriminant: " + std::to_string(d));
    }
    std::vector<QuadraticPoint> pts = heegner_points(d);
    ClassPolynomial cp = hilbert_class_poly(d, g.prec);
    const int digits = 30;
    ordered_json arr = ordered_json::array();
    std::string text = "D " + std::to_string(d) + "\nh " + std::to_string(pts.size()) + "\n";
    for (const QuadraticPoint &t : pts) {
        HPComplex tau = t.value(g.prec);
        HPComplex j = eval_J(tau, g.prec).j;
        arr.push_back({{"form", {t.A.get_str(), t.B.get_str(), t.C.get_str()}},
                       {"tau", complex_json(tau, digits)},
                       {"j", complex_json(j, digits)}});
        text += t.to_string() + " tau " + to_string(tau, digits) + " j " + to_string(j, digits) + "\n";
    }
    text += "H " + cp.to_string() + "\n";
    emit(g, {{"D", d}, {"h", pts.size()}, {"points", arr}, {"class_polynomial", class_poly_json(cp)}}, text);
    return 0;
}

int cmd_recognize(const Globals &g, const std::string &value, int deg, const std::string &height)
{
    HPComplex z = value.find(',') == std::string::npos ? parse_tau(value + ",0", g.prec) : parse_tau(value, g.prec);
    RecognitionResult r = minimal_polynomial(z, deg, parse_height(height), g.prec);
    ordered_json searches = ordered_json::array();
    for (const DegreeSearch &s : r.searches) {
        searches.push_back({{"degree", s.degree}, {"relation", s.found}, {"margin_log2", s.margin_log2},
                            {"residual_log2", s.residual_log2}});
    }
    ordered_json j{{"found", r.found},    {"poly", r.found ? poly_to_string(r.poly) : ""}, {"prec_bits", r.prec_bits},
                   {"max_deg", r.max_deg}, {"height_bound", r.height_bound.get_str()},     {"searches", searches}};
    emit(g, j, r.serialize());
    return r.found ? 0 : 1;
}

int cmd_verify(const Globals &g, const std::string &suite)
{
    SuiteReport r = run_suite(suite, g.seed, g.prec);
    ordered_json recs = ordered_json::array();
    for (const SuiteRecord &x : r.records) {
        recs.push_back({{"check", x.check},
                        {"input_digest", x.digest},
                        {"residual_log2", std::isinf(x.residual_log2) ? ordered_json(nullptr) : ordered_json(x.residual_log2)},
                        {"pass", x.pass}});
    }
    emit(g,
         {{"suite", r.name},
          {"seed", r.seed},
          {"prec_bits", r.prec_bits},
          {"records", recs},
          {"notes", r.notes},
          {"passed", r.passed()},
          {"total", r.records.size()},
          {"pass", r.ok()}},
         r.text());
    return r.ok() ? 0 : 1;
}

int cmd_example1(const Globals &g, const ordered_json &cfg, const std::filesystem::path &base)
{
    const Variety w = variety_from(cfg, base);
    const Mat2Z gm = matrix_from(cfg, "g"), hm = matrix_from(cfg, "h");
    const long m = cfg.value("M", gm.det().get_si()), n = cfg.value("N", hm.det().get_si());
    if (gm.det() != m || hm.det() != n) {
        throw DomainError("config: det g must equal M and det h must equal N");
    }
    const Example1Variety built = example1_build(m, n, w);
    std::vector<std::pair<QuadraticPoint, QuadraticPoint>> pairs;
    if (cfg.contains("points")) {
        for (const auto &p : cfg["points"]) {
            pairs.emplace_back(point_from(p.at(0)), point_from(p.at(1)));
        }
    } else {
        Rng rng(g.seed);
        const int count = cfg.value("pairs", 10);
        while (static_cast<int>(pairs.size()) < count) {
            QuadraticPoint a = random_quadratic(rng, 12), b = random_quadratic(rng, 12);
            if (a.field() != b.field()) {
                pairs.emplace_back(a, b);
            }
        }
    }
    bool ok = true;
    std::string text = "V in C^12 with " + std::to_string(built.v.polys.size()) + " polynomials\n";
    ordered_json rows = ordered_json::array();
    for (const auto &[tau, sigma] : pairs) {
        try {
            Example1Check c = example1_special_check(w, gm, hm, tau, sigma, g.prec, &built);
            rows.push_back({{"tau", tau.to_string()},
                            {"sigma", sigma.to_string()},
                            {"m_tau", c.m_tau},
                            {"m_sigma", c.m_sigma},
                            {"member", c.exact},
                            {"residual", c.residual.to_sci(3)}});
            text += tau.to_string() + " " + sigma.to_string() + " m=(" + c.m_tau + ", " + c.m_sigma + ") " +
                    (c.exact ? "member" : "not member") + " residual " + c.residual.to_sci(3) + "\n";
        } catch (const DenominatorLocusError &e) {
            rows.push_back({{"tau", tau.to_string()}, {"sigma", sigma.to_string()}, {"skipped", e.what()}});
            text += tau.to_string() + " " + sigma.to_string() + " skipped: denominator locus\n";
        }
    }
    BasicLinearVariety b = example1_family(gm, hm);
    AdjacencyResult adj = adjacency_verify(built.v, b, unit_witness(b, g.prec), cfg.value("samples", 10), g.prec, g.seed);
    ok = adj.adjacent;
    text += std::string("family (t1, g t1, t2, h t2) with z = 1: ") + (adj.adjacent ? "adjacent" : "not adjacent") +
            ", max residual " + adj.max_residual.to_sci(3) + "\n";
    emit(g, {{"example", 1}, {"points", rows}, {"adjacent", adj.adjacent}, {"adjacency_residual", adj.max_residual.to_sci(3)}},
         text);
    return ok ? 0 : 1;
}

int cmd_example2(const Globals &g, const ordered_json &cfg, const std::filesystem::path &base)
{
    const Variety w = variety_from(cfg, base);
    const long n = cfg.at("N").get<long>();
    Example2Check r = example2_check(n, point_from(cfg.at("sigma")), w, point_from(cfg.at("tau")), matrix_from(cfg, "g"),
                                     matrix_from(cfg, "gamma"), g.prec);
    std::string text = "C " + std::to_string(r.C) + "\nq " + to_string(r.q, 30) + "\nq_residual " +
                       r.q_residual.to_sci(3) + (r.q_ok ? " ok" : " FAIL") + "\nW residual " + r.w_residual.to_sci(3) +
                       (r.w_member ? " member" : " not member") + "\n" + (r.pass ? "PASS" : "FAIL") + "\n";
    emit(g,
         {{"example", 2},
          {"C", r.C},
          {"q", complex_json(r.q, 30)},
          {"q_residual", r.q_residual.to_sci(3)},
          {"q_ok", r.q_ok},
          {"w_member", r.w_member},
          {"pass", r.pass}},
         text);
    return r.pass ? 0 : 1;
}

int cmd_example(const Globals &g, int which, const std::string &config)
{
    std::ifstream in(config);
    if (!in) {
        throw DomainError("cannot read config file " + config);
    }
    ordered_json cfg = ordered_json::parse(in);
    const std::filesystem::path base = std::filesystem::path(config).parent_path();
    return which == 1 ? cmd_example1(g, cfg, base) : cmd_example2(g, cfg, base);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"High-precision j, j', j'' toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--prec", g.prec, "precision in bits")->check(CLI::Range(64, 1 << 16));
    app.add_option("--seed", g.seed, "seed for random inputs");
    app.add_flag("--json", g.json, "JSON output");
    app.add_option("--cache-dir", g.cache_dir, "modular polynomial cache (default $JDERIV_CACHE, then ./cache)");

    std::string tau, value, suite, config, height = "1e20";
    long n = 0, d = 0;
    int deg = 8, which = 1;
    std::function<int()> action;

    auto *ev = app.add_subcommand("eval", "J(tau) and the almost-holomorphic companions");
    ev->add_option("tau", tau, "point as re,im")->required();
    ev->callback([&] { action = [&] { return cmd_eval(g, tau); }; });

    auto *ph = app.add_subcommand("phi", "classical modular polynomial (cached)");
    ph->add_option("N", n)->required()->check(CLI::Range(1L, 64L));
    ph->callback([&] { action = [&] { return cmd_phi(g, n); }; });

    auto *hi = app.add_subcommand("hilbert", "Hilbert class polynomial of D");
    hi->add_option("D", d)->required();
    hi->callback([&] { action = [&] { return cmd_hilbert(g, d); }; });

    auto *orb = app.add_subcommand("orbit", "Heegner points and class polynomial of D");
    orb->add_option("D", d)->required();
    orb->callback([&] { action = [&] { return cmd_orbit(g, d); }; });

    auto *rec = app.add_subcommand("recognize", "integer relation search for a value");
    rec->add_option("value", value, "re or re,im")->required();
    rec->add_option("--deg", deg, "maximum degree")->check(CLI::Range(1, 64));
    rec->add_option("--height", height, "coefficient height bound, e.g. 1e20");
    rec->callback([&] { action = [&] { return cmd_recognize(g, value, deg, height); }; });

    auto *ver = app.add_subcommand("verify", "run an identity suite");
    std::string names;
    for (const std::string &s : suite_names()) {
        names += (names.empty() ? "" : ", ") + s;
    }
    ver->add_option("suite", suite, names)->required();
    ver->callback([&] { action = [&] { return cmd_verify(g, suite); }; });

    auto *ex = app.add_subcommand("example", "Example 1 or 2 from a JSON config");
    ex->add_option("which", which)->required()->check(CLI::IsMember({1, 2}));
    ex->add_option("config", config)->required();
    ex->callback([&] { action = [&] { return cmd_example(g, which, config); }; });

    CLI11_PARSE(app, argc, argv);
    try {
        use_phi_cache(resolve_cache_dir(g.cache_dir));
        return action();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
