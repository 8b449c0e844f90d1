#ifndef JDERIV_SUITES_HPP
#define JDERIV_SUITES_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "jderiv/cmfields.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/identities.hpp"
#include "jderiv/modpoly.hpp"
#include "jderiv/random.hpp"
#include "jderiv/recognize.hpp"
#include "jderiv/varieties.hpp"

namespace jderiv
{

/// One line of a suite report: "<check> <input-digest> <log2 residual> PASS|FAIL".
struct SuiteRecord {
    std::string check;
    std::string digest;
    double residual_log2 = 0;
    bool pass = false;

    std::string line() const
    {
        char buf[32];
        if (std::isinf(residual_log2)) {
            std::snprintf(buf, sizeof buf, "%s", residual_log2 < 0 ? "-inf" : "inf");
        } else {
            std::snprintf(buf, sizeof buf, "%.2f", residual_log2);
        }
        return check + " " + digest + " " + buf + (pass ? " PASS" : " FAIL");
    }
};

struct SuiteReport {
    std::string name;
    std::uint64_t seed = 0;
    int prec_bits = 0;
    std::vector<SuiteRecord> records;
    /// Deterministic diagnostic lines, printed after the records.
    std::vector<std::string> notes;

    std::size_t passed() const
    {
        return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](auto &r) { return r.pass; }));
    }
    bool ok() const
    {
        return !records.empty() && passed() == records.size();
    }
    std::string summary() const
    {
        return std::to_string(passed()) + "/" + std::to_string(records.size()) + (ok() ? " PASS" : " FAIL");
    }
    std::string text() const
    {
        std::string s = "suite " + name + " seed " + std::to_string(seed) + " prec " + std::to_string(prec_bits) + "\n";
        for (const SuiteRecord &r : records) {
            s += r.line() + "\n";
        }
        for (const std::string &n : notes) {
            s += "# " + n + "\n";
        }
        return s + summary() + "\n";
    }
};

namespace detail
{

inline double log2_of(const Real &x)
{
    return x.is_zero() ? -INFINITY : x.log2_abs();
}

inline std::string tau_key(const HPComplex &t)
{
    return t.re.to_string(40) + "," + t.im.to_string(40);
}

/// Runs fn(0..n-1) on a bounded pool; results are returned in index order.
template <class T> std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)> &fn)
{
    std::vector<T> out(n);
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < n; k = next++) {
                try {
                    out[k] = fn(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

inline SuiteRecord record(const std::string &check, const std::string &input, const Real &residual,
                          const Real &threshold)
{
    return {check, hex_digest(input), log2_of(residual), residual < threshold};
}

} // namespace detail

/// |p_{Im tau}(j, chi*, j') - j''| relative, at random tau; threshold 2^(-prec/2).
inline SuiteReport suite_masser(std::uint64_t seed, int prec_bits, int count = 100)
{
    SuiteReport rep{"masser", seed, prec_bits, {}, {}};
    Rng rng(seed);
    std::vector<HPComplex> taus;
    for (int k = 0; k < count; ++k) {
        taus.push_back(random_tau(rng, prec_bits));
    }
    const Real thr = Real::pow2(-prec_bits / 2, 64);
    rep.records = detail::parallel_map<SuiteRecord>(taus.size(), [&](std::size_t k) {
        return detail::record("masser", detail::tau_key(taus[k]), check_masser(taus[k], prec_bits), thr);
    });
    return rep;
}

/// All five weight-law residuals at random (tau, gamma) with |entries| <= bound.
inline SuiteReport suite_weight_laws(std::uint64_t seed, int prec_bits, int count = 100, long bound = 50)
{
    SuiteReport rep{"weight_laws", seed, prec_bits, {}, {}};
    Rng rng(seed);
    std::vector<std::pair<HPComplex, Mat2Z>> cases;
    for (int k = 0; k < count; ++k) {
        HPComplex t = random_tau(rng, prec_bits);
        cases.emplace_back(std::move(t), random_sl2(rng, bound));
    }
    const Real thr = Real::pow2(-prec_bits / 2, 64);
    rep.records = detail::parallel_map<SuiteRecord>(cases.size(), [&](std::size_t k) {
        const auto &[t, g] = cases[k];
        WeightLawResiduals r = check_weight_laws(t, g, prec_bits);
        return detail::record("weight_laws", detail::tau_key(t) + " " + g.to_string(), r.max(), thr);
    });
    return rep;
}

/// Layout of the dual run: different sample points and 160 more bits.
inline SampleConfig dual_sample_config()
{
    return {"sqrt2-1", 1.08, 0.09};
}

/// Phi_2, Phi_3 reproduced by a dual run; Phi_N(j(N tau), j(tau)) = 0 for N <= max_level.
inline SuiteReport suite_modpoly(std::uint64_t seed, int prec_bits, long max_level = 10, int count = 20)
{
    SuiteReport rep{"modpoly", seed, prec_bits, {}, {}};
    for (long n : {2L, 3L}) {
        const ModularPolynomial &a = phi_for_level(n);
        ModularPolynomial b = compute_phi(n, phi_start_prec(n) + 160, dual_sample_config());
        const bool same = a == b;
        rep.records.push_back({"phi_dual_run", hex_digest("N=" + std::to_string(n)), same ? -INFINITY : 0.0, same});
        rep.notes.push_back("Phi_" + std::to_string(n) + " monomials " + std::to_string(a.n_monomials()));
        if (n == 2) {
            const mpz_class expect("-157464000000000");
            const bool ok = a.coeff(0, 0) == expect && b.coeff(0, 0) == expect;
            rep.records.push_back({"phi2_constant", hex_digest(a.coeff(0, 0).get_str()), ok ? -INFINITY : 0.0, ok});
        }
    }
    Rng rng(seed);
    std::vector<std::pair<long, HPComplex>> cases;
    for (long n = 2; n <= max_level; ++n) {
        for (int k = 0; k < count; ++k) {
            cases.emplace_back(n, random_tau(rng, prec_bits));
        }
    }
    for (long n = 2; n <= max_level; ++n) {
        phi_for_level(n);
    }
    const Real thr = Real::pow2(-prec_bits / 2, 64);
    auto rows = detail::parallel_map<SuiteRecord>(cases.size(), [&](std::size_t k) {
        const auto &[n, t] = cases[k];
        const ModularPolynomial &phi = phi_for_level(n);
        HPComplex x = eval_J(Mat2Z(n, 0, 0, 1).act(t).tagged(prec_bits), prec_bits).j;
        HPComplex y = eval_J(t, prec_bits).j;
        Real r = abs(phi.eval(x, y)) / max(phi.magnitude(x, y), Real(1L, x.work_prec()));
        return detail::record("phi_vanishes_N" + std::to_string(n), detail::tau_key(t), r, thr);
    });
    rep.records.insert(rep.records.end(), rows.begin(), rows.end());
    return rep;
}

/// j'(g tau) = -lambda_N(j(tau), j(g tau)) j'(tau) m_g(tau) over all coset representatives.
inline SuiteReport suite_gl2(std::uint64_t seed, int prec_bits, const std::vector<long> &levels = {2, 3, 5},
                             int count = 10)
{
    SuiteReport rep{"gl2", seed, prec_bits, {}, {}};
    Rng rng(seed);
    std::vector<std::pair<Mat2Z, HPComplex>> cases;
    for (long n : levels) {
        for (const Mat2Z &g : coset_reps(n)) {
            for (int k = 0; k < count; ++k) {
                cases.emplace_back(g, random_tau(rng, prec_bits));
            }
        }
        phi_for_level(n);
    }
    const Real thr = Real::pow2(-prec_bits / 2, 64);
    rep.records = detail::parallel_map<SuiteRecord>(cases.size(), [&](std::size_t k) {
        const auto &[g, t] = cases[k];
        return detail::record("gl2_law", g.to_string() + " " + detail::tau_key(t), check_gl2_law(t, g, prec_bits), thr);
    });
    return rep;
}

/// The second-derivative relation as displayed, at random configurations with c != 0 allowed.
/**
 * Each configuration draws tau, tau0, g = gamma * (coset representative of N in {2, 3}) and
 * a bottom row (c0, d0). The displayed-form residual is the check; the covariant form and
 * the linearity-in-c defect are recorded alongside as diagnostics.
 */
inline SuiteReport suite_mu(std::uint64_t seed, int prec_bits, int count = 25, int threshold_log2 = -100)
{
    SuiteReport rep{"mu", seed, prec_bits, {}, {}};
    Rng rng(seed);
    struct Case {
        HPComplex t, t0;
        Mat2Z g;
        long c0, d0;
    };
    std::vector<Case> cases;
    for (int k = 0; k < count; ++k) {
        HPComplex t = random_tau(rng, prec_bits), t0 = random_tau(rng, prec_bits);
        const long n = 2 + rng.uniform_int(0, 1);
        std::vector<Mat2Z> reps = coset_reps(n);
        Mat2Z g = random_sl2(rng, 5) * reps[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long>(reps.size()) - 1))];
        Mat2Z row = random_sl2(rng, 5);
        cases.push_back({std::move(t), std::move(t0), g, row.c.get_si(), row.d.get_si()});
    }
    phi_for_level(2);
    phi_for_level(3);
    const Real thr = Real::pow2(threshold_log2, 64);
    struct Rows {
        SuiteRecord displayed, covariant, linear;
    };
    auto rows = detail::parallel_map<Rows>(cases.size(), [&](std::size_t k) {
        const Case &c = cases[k];
        const std::string key = detail::tau_key(c.t) + " " + detail::tau_key(c.t0) + " " + c.g.to_string() + " " +
                                std::to_string(c.c0) + "," + std::to_string(c.d0);
        MuCalcResult r = check_mu_calc(c.t, c.t0, c.g, c.c0, c.d0, prec_bits);
        Real lin = mu_linearity_defect(c.t, c.g, prec_bits, phi_for_level(c.g.det().get_si()));
        return Rows{detail::record("mu_displayed", key, r.displayed, thr),
                    detail::record("mu_covariant", key, r.covariant, thr),
                    detail::record("mu_linear_in_c", key, lin, thr)};
    });
    std::size_t zero_anomaly = 0, disp_ok = 0;
    for (const Rows &r : rows) {
        rep.records.push_back(r.displayed);
        rep.records.push_back(r.covariant);
        rep.records.push_back(r.linear);
        disp_ok += r.displayed.pass;
    }
    for (const Case &c : cases) {
        zero_anomaly += c.g.c == 0 && c.c0 == 0;
    }
    rep.notes.push_back("displayed form holds at " + std::to_string(disp_ok) + "/" + std::to_string(cases.size()) +
                        " configurations; configurations with c = c0 = 0: " + std::to_string(zero_anomaly));
    rep.notes.push_back("displayed minus covariant = 2 j'(g tau) (e0/e)^3 [(c0 e - c e0)/N - (c0 d - c d0)]");
    return rep;
}

namespace detail
{

/// h(D) for D < 0 from the analytic class number formula and the conductor formula.
inline long analytic_class_number(long d)
{
    auto [s, f] = squarefree_split(mpz_class(d));
    long d0 = s.get_si();
    long cond = f.get_si();
    if (((d0 % 4) + 4) % 4 != 1) {
        d0 *= 4;
        cond /= 2;
    }
    auto w = [](long x) { return x == -3 ? 6L : (x == -4 ? 4L : 2L); };
    mpz_class sum = 0;
    for (long a = 1; a < -d0; ++a) {
        sum += mpz_kronecker_si(mpz_class(d0).get_mpz_t(), a) * a;
    }
    mpq_class h(-mpz_class(w(d0)) * sum, mpz_class(2 * -d0));
    h.canonicalize();
    // h(D0 f^2) = h(D0) f prod_{p | f} (1 - (D0/p)/p) / [O_K^* : O^*]
    h *= cond;
    long m = cond;
    for (long p = 2; p <= m; ++p) {
        if (m % p != 0) {
            continue;
        }
        while (m % p == 0) {
            m /= p;
        }
        h *= mpq_class(p - mpz_kronecker_si(mpz_class(d0).get_mpz_t(), p), p);
    }
    h /= mpq_class(w(d0), w(d));
    h.canonicalize();
    if (h.get_den() != 1) {
        throw ConsistencyError("analytic class number is not an integer for D=" + std::to_string(d));
    }
    return h.get_num().get_si();
}

/// Textbook enumeration of reduced primitive forms, written independently of reduced_forms.
inline long enumerated_class_number(long d)
{
    long count = 0;
    for (long a = 1; 3 * a * a <= -d; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            const long num = b * b - d;
            if (num % (4 * a) != 0) {
                continue;
            }
            const long c = num / (4 * a);
            if (c < a || (c == a && b < 0)) {
                continue;
            }
            count += std::gcd(std::gcd(a, std::labs(b)), c) == 1;
        }
    }
    return count;
}

} // namespace detail

/// h(D) for every valid D >= d_min against two independent oracles, plus class polynomials.
inline SuiteReport suite_class_groups(int prec_bits, long d_min = -2000)
{
    SuiteReport rep{"class_groups", 0, prec_bits, {}, {}};
    long mismatches = 0, tested = 0;
    for (long d = -3; d >= d_min; --d) {
        if (!detail::valid_discriminant(d)) {
            continue;
        }
        ++tested;
        const long h = class_number(d);
        const bool ok = h == detail::enumerated_class_number(d) && h == detail::analytic_class_number(d);
        mismatches += !ok;
        if (!ok) {
            rep.records.push_back({"class_number", hex_digest(std::to_string(d)), 0.0, false});
        }
    }
    rep.records.push_back({"class_numbers_to_" + std::to_string(-d_min), hex_digest(std::to_string(d_min)),
                           mismatches == 0 ? -INFINITY : 0.0, mismatches == 0});
    rep.notes.push_back(std::to_string(tested) + " discriminants, " + std::to_string(mismatches) + " mismatches");

    struct Expect {
        long d;
        std::string poly;
        long degree;
    };
    for (const Expect &e : {Expect{-4, "X - 1728", 1}, Expect{-163, "X + 262537412640768000", 1},
                            Expect{-23, "", 3}}) {
        ClassPolynomial cp = hilbert_class_poly(e.d, prec_bits);
        const bool shape = e.poly.empty() ? cp.degree() == e.degree : cp.to_string() == e.poly;
        const double r = cp.max_residual == 0 ? -INFINITY : std::log2(cp.max_residual);
        rep.records.push_back({"hilbert_D" + std::to_string(e.d), hex_digest(cp.to_string()), r,
                               shape && cp.max_residual < 1e-10});
        rep.notes.push_back("H_" + std::to_string(e.d) + " = " + cp.to_string());
    }
    return rep;
}

/// chi* as a rational polynomial in j over each Galois orbit, reproduced at 1.5x precision.
inline SuiteReport suite_galois(int prec_bits, const std::vector<long> &ds = {-3, -4, -7, -8, -11, -15, -20, -23})
{
    SuiteReport rep{"galois", 0, prec_bits, {}, {}};
    auto rows = detail::parallel_map<GaloisPairing>(ds.size(), [&](std::size_t k) {
        return galois_pairing_check(ds[k], prec_bits);
    });
    for (const GaloisPairing &g : rows) {
        double worst = -INFINITY;
        std::string coeffs;
        for (std::size_t k = 0; k < g.coeffs.size(); ++k) {
            worst = std::max({worst, g.residual_log2[k], g.verify_residual_log2[k]});
            coeffs += (k ? ", " : "") + g.coeffs[k].get_str();
        }
        rep.records.push_back({"galois_D" + std::to_string(g.D), hex_digest(coeffs), worst, g.pass});
        rep.notes.push_back("D=" + std::to_string(g.D) + " A = [" + coeffs + "] (constant first), verified at " +
                            std::to_string(g.verify_prec_bits) + (g.failure.empty() ? "" : "; " + g.failure));
    }
    return rep;
}

/// The detector finds j(i sqrt2) = 8000 and reports no relation for j'(i sqrt2) in the box.
inline SuiteReport suite_transcendence(int prec_bits, int max_deg = 8,
                                       const mpz_class &height = mpz_class("100000000000000000000"))
{
    SuiteReport rep{"transcendence", 0, prec_bits, {}, {}};
    const QuadraticPoint tau = qpoint(1, 0, 2);
    ValueSource jp = [&](int p) { return eval_J(tau.value(p), p).jp; };
    ValueSource j = [&](int p) { return eval_J(tau.value(p), p).j; };
    RecognitionResult none = transcendence_evidence(jp, max_deg, height, prec_bits);
    for (const DegreeSearch &s : none.searches) {
        rep.records.push_back({"jp_no_relation_deg" + std::to_string(s.degree), hex_digest(tau.to_string()),
                               -s.margin_log2, !s.found});
    }
    double worst_margin = INFINITY;
    for (const DegreeSearch &s : none.searches) {
        worst_margin = std::min(worst_margin, s.margin_log2);
    }
    rep.records.push_back({"jp_not_found", hex_digest(tau.to_string()), -worst_margin, !none.found});
    RecognitionResult found = minimal_polynomial(j, max_deg, height, prec_bits);
    const bool ok = found.found && poly_to_string(found.poly) == "X - 8000";
    rep.records.push_back({"j_minpoly", hex_digest(tau.to_string()), found.residual_log2, ok});
    rep.notes.push_back("j(i sqrt2): " + (found.found ? poly_to_string(found.poly) : std::string("not found")));
    rep.notes.push_back("j'(i sqrt2): no relation of degree <= " + std::to_string(max_deg) + ", height <= " +
                        height.get_str() + " (residual column holds -margin_log2 for the searches)");
    return rep;
}

/// The basic H-special variety {(t1, g t1, t2, h t2)} of Example 1.
inline BasicLinearVariety example1_family(const Mat2Z &g, const Mat2Z &h)
{
    BasicLinearVariety b;
    b.n = 4;
    b.blocks = {{{0, 1}, {Mat2Z::identity(), g}}, {{2, 3}, {Mat2Z::identity(), h}}};
    return b;
}

/// Example 1 with W = {x = y}, M = N = 2, g = h = (2,0;0,1).
inline SuiteReport suite_example1(std::uint64_t seed, int prec_bits, int pairs = 10, int samples = 10)
{
    SuiteReport rep{"example1", seed, prec_bits, {}, {}};
    const Mat2Z g(2, 0, 0, 1);
    const Variety w(2, {MPoly::var(2, 0) - MPoly::var(2, 1)});
    const Example1Variety built = example1_build(2, 2, w);
    Rng rng(seed);
    long skipped = 0;
    while (static_cast<int>(rep.records.size()) < pairs) {
        QuadraticPoint tau = random_quadratic(rng, 12), sigma = random_quadratic(rng, 12);
        if (tau.field() == sigma.field()) {
            continue;
        }
        const std::string key = tau.to_string() + " " + sigma.to_string();
        try {
            Example1Check c = example1_special_check(w, g, g, tau, sigma, prec_bits, &built);
            rep.records.push_back(
                {"example1_special", hex_digest(key), detail::log2_of(c.residual), c.exact && c.numeric});
        } catch (const DenominatorLocusError &) {
            ++skipped;
        } catch (const ConsistencyError &e) {
            rep.records.push_back({"example1_special", hex_digest(key), 0.0, false});
            rep.notes.push_back(e.what());
        }
    }
    rep.notes.push_back("pairs skipped on the denominator locus: " + std::to_string(skipped));
    BasicLinearVariety b = example1_family(g, g);
    AdjacencyResult adj = adjacency_verify(built.v, b, unit_witness(b, prec_bits), samples, prec_bits, seed);
    rep.records.push_back({"example1_adjacency", hex_digest("z=1 samples=" + std::to_string(samples)),
                           detail::log2_of(adj.max_residual), adj.adjacent});
    std::vector<HPComplex> zs = solve_single_z(built.v, b, unit_witness(b, prec_bits), 1, 1, 3, prec_bits, seed);
    rep.notes.push_back("single-z solve at (t2, h t2): " + std::to_string(zs.size()) + " consistent root(s)" +
                        (zs.empty() ? "" : ", first " + to_string(zs.front(), 12)));
    return rep;
}

/// Adjacency outcomes unchanged under gamma * g for random gamma in SL2(Z).
inline SuiteReport suite_adjacency(std::uint64_t seed, int prec_bits, int trials = 20, int samples = 4)
{
    SuiteReport rep{"adjacency", seed, prec_bits, {}, {}};
    const Mat2Z g(2, 0, 0, 1);
    const Variety diag(2, {MPoly::var(2, 0) - MPoly::var(2, 1)});
    const Variety shifted(2, {MPoly::var(2, 0) - MPoly::var(2, 1) - MPoly::constant(2, GaussQ(1L))});
    const Example1Variety vd = example1_build(2, 2, diag), vs = example1_build(2, 2, shifted);
    const BasicLinearVariety base = example1_family(g, g);
    const AdjacencyWitness wit = unit_witness(base, prec_bits);
    const AdjacencyResult base_result = adjacency_verify(vd.v, base, wit, samples, prec_bits, seed);
    const bool base_d = base_result.adjacent;
    const bool base_s = adjacency_verify(vs.v, base, wit, samples, prec_bits, seed).adjacent;
    rep.notes.push_back(std::string("baseline outcomes: W={x=y} ") + (base_d ? "adjacent" : "not adjacent") +
                        ", W={x=y+1} " + (base_s ? "adjacent" : "not adjacent"));
    Rng rng(seed);
    std::vector<BasicLinearVariety> moved;
    for (int t = 0; t < trials; ++t) {
        BasicLinearVariety b = base;
        for (auto &blk : b.blocks) {
            for (auto &m : blk.g) {
                m = random_sl2(rng, 50) * m;
            }
        }
        moved.push_back(std::move(b));
    }
    auto rows = detail::parallel_map<SuiteRecord>(moved.size(), [&](std::size_t k) {
        const BasicLinearVariety &b = moved[k];
        std::string key;
        for (const auto &blk : b.blocks) {
            for (const auto &m : blk.g) {
                key += m.to_string() + " ";
            }
        }
        AdjacencyResult d = adjacency_verify(vd.v, b, wit, samples, prec_bits, seed);
        AdjacencyResult s = adjacency_verify(vs.v, b, wit, samples, prec_bits, seed);
        return SuiteRecord{"adjacency_invariant", hex_digest(key), detail::log2_of(d.max_residual),
                           d.adjacent == base_d && s.adjacent == base_s};
    });
    rep.records = rows;
    rep.records.push_back({"adjacency_baseline", hex_digest("baseline"), detail::log2_of(base_result.max_residual),
                           base_d && !base_s});
    return rep;
}

inline const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names{"masser", "weight_laws", "modpoly",   "gl2",     "mu",
                                                "class_groups", "galois", "transcendence", "example1", "adjacency"};
    return names;
}

/// Runs a suite by name with its default sizes.
inline SuiteReport run_suite(const std::string &name, std::uint64_t seed, int prec_bits)
{
    if (name == "masser") {
        return suite_masser(seed, prec_bits);
    }
    if (name == "weight_laws") {
        return suite_weight_laws(seed, prec_bits);
    }
    if (name == "modpoly") {
        return suite_modpoly(seed, prec_bits);
    }
    if (name == "gl2") {
        return suite_gl2(seed, prec_bits);
    }
    if (name == "mu") {
        return suite_mu(seed, prec_bits);
    }
    if (name == "class_groups") {
        return suite_class_groups(prec_bits);
    }
    if (name == "galois") {
        return suite_galois(prec_bits);
    }
    if (name == "transcendence") {
        return suite_transcendence(prec_bits);
    }
    if (name == "example1") {
        return suite_example1(seed, prec_bits);
    }
    if (name == "adjacency") {
        return suite_adjacency(seed, prec_bits);
    }
    throw DomainError("unknown suite '" + name + "'");
}

} // namespace jderiv

#endif
