#ifndef JDERIV_MODPOLY_HPP
#define JDERIV_MODPOLY_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/mat2z.hpp"

namespace jderiv
{

/// psi(N) = N prod_{p | N} (1 + 1/p), the number of cyclic N-isogenies.
inline long psi(long n)
{
    if (n < 1) {
        throw DomainError("psi: N must be positive");
    }
    long result = n;
    long m = n;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            result = result / p * (p + 1);
            while (m % p == 0) {
                m /= p;
            }
        }
    }
    if (m > 1) {
        result = result / m * (m + 1);
    }
    return result;
}

/// Upper-triangular representatives (a,b;0,d), ad = N, 0 <= b < d, gcd(a,b,d) = 1,
/// ordered by a then b.
inline std::vector<Mat2Z> coset_reps(long n)
{
    if (n < 1) {
        throw DomainError("coset_reps: N must be positive");
    }
    std::vector<Mat2Z> reps;
    for (long a = 1; a <= n; ++a) {
        if (n % a != 0) {
            continue;
        }
        long d = n / a;
        for (long b = 0; b < d; ++b) {
            mpz_class g;
            mpz_gcd_ui(g.get_mpz_t(), mpz_class(a).get_mpz_t(), static_cast<unsigned long>(b));
            mpz_gcd_ui(g.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(d));
            if (g == 1) {
                reps.emplace_back(a, b, 0, d);
            }
        }
    }
    return reps;
}

/// Value and partial derivatives up to order two of a bivariate polynomial.
struct PhiDerivs {
    HPComplex v, x, y, xx, xy, yy;
    /// Sum of |c_ij| |x|^i |y|^(j-1) j, the natural scale of the Y-derivative.
    Real y_scale;
};

/// Phi_N as an exact integer polynomial in X, Y.
class ModularPolynomial
{
public:
    using Key = std::pair<long, long>;

    ModularPolynomial() = default;
    ModularPolynomial(long level, std::map<Key, mpz_class> coeffs) : m_level(level), m_coeffs(std::move(coeffs))
    {
        for (auto it = m_coeffs.begin(); it != m_coeffs.end();) {
            it = it->second == 0 ? m_coeffs.erase(it) : std::next(it);
        }
    }

    static ModularPolynomial level_one()
    {
        return ModularPolynomial(1, {{{1, 0}, mpz_class(1)}, {{0, 1}, mpz_class(-1)}});
    }

    long level() const
    {
        return m_level;
    }
    const std::map<Key, mpz_class> &coeffs() const
    {
        return m_coeffs;
    }
    mpz_class coeff(long i, long j) const
    {
        auto it = m_coeffs.find({i, j});
        return it == m_coeffs.end() ? mpz_class(0) : it->second;
    }
    std::size_t n_monomials() const
    {
        return m_coeffs.size();
    }
    long degree_x() const
    {
        long d = 0;
        for (const auto &[k, v] : m_coeffs) {
            d = std::max(d, k.first);
        }
        return d;
    }
    bool symmetric() const
    {
        for (const auto &[k, v] : m_coeffs) {
            if (coeff(k.second, k.first) != v) {
                return false;
            }
        }
        return true;
    }

    PhiDerivs derivs(const HPComplex &x, const HPComplex &y) const
    {
        const mpfr_prec_t p = std::max(x.work_prec(), y.work_prec());
        const long deg = std::max(degree_x(), degree_y());
        std::vector<HPComplex> xp{HPComplex::from_long(1, p)}, yp{HPComplex::from_long(1, p)};
        for (long k = 1; k <= deg; ++k) {
            xp.push_back(xp.back() * x);
            yp.push_back(yp.back() * y);
        }
        auto zero = [&] { return HPComplex(Real(p), Real(p), std::min(x.prec_bits, y.prec_bits)); };
        PhiDerivs out{zero(), zero(), zero(), zero(), zero(), zero(), Real(p)};
        const Real ax = abs(x), ay = abs(y);
        for (const auto &[k, cz] : m_coeffs) {
            const auto [i, j] = k;
            const Real c(cz, p);
            out.v += xp[i] * yp[j] * c;
            if (i >= 1) {
                out.x += xp[i - 1] * yp[j] * (c * i);
            }
            if (j >= 1) {
                out.y += xp[i] * yp[j - 1] * (c * j);
                out.y_scale += abs(c) * pow(ax, i) * pow(ay, j - 1) * j;
            }
            if (i >= 2) {
                out.xx += xp[i - 2] * yp[j] * (c * (i * (i - 1)));
            }
            if (i >= 1 && j >= 1) {
                out.xy += xp[i - 1] * yp[j - 1] * (c * (i * j));
            }
            if (j >= 2) {
                out.yy += xp[i] * yp[j - 2] * (c * (j * (j - 1)));
            }
        }
        return out;
    }

    HPComplex eval(const HPComplex &x, const HPComplex &y) const
    {
        return derivs(x, y).v;
    }

    /// Sum |c_ij| |x|^i |y|^j, used to normalize residuals.
    Real magnitude(const HPComplex &x, const HPComplex &y) const
    {
        const mpfr_prec_t p = std::max(x.work_prec(), y.work_prec());
        Real s(p);
        const Real ax = abs(x), ay = abs(y);
        for (const auto &[k, c] : m_coeffs) {
            s += abs(Real(c, p)) * pow(ax, k.first) * pow(ay, k.second);
        }
        return s;
    }

    /// "PHI N <N>" then "<i> <j> <coef>" lines; only i >= j for N > 1.
    std::string serialize() const
    {
        std::ostringstream os;
        os << "PHI N " << m_level << "\n";
        for (const auto &[k, v] : m_coeffs) {
            if (m_level > 1 && k.first < k.second) {
                continue;
            }
            os << k.first << " " << k.second << " " << v.get_str() << "\n";
        }
        return os.str();
    }

    static ModularPolynomial parse(const std::string &text)
    {
        std::istringstream is(text);
        std::string tag, n_tag;
        long level = 0;
        if (!(is >> tag >> n_tag >> level) || tag != "PHI" || n_tag != "N" || level < 1) {
            throw DomainError("modular polynomial file: bad header");
        }
        std::map<Key, mpz_class> coeffs;
        long i = 0, j = 0;
        std::string c;
        while (is >> i >> j >> c) {
            mpz_class v;
            if (v.set_str(c, 10) != 0) {
                throw DomainError("modular polynomial file: bad coefficient '" + c + "'");
            }
            coeffs[{i, j}] = v;
            if (level > 1) {
                coeffs[{j, i}] = v;
            }
        }
        if (!is.eof()) {
            throw DomainError("modular polynomial file: trailing garbage");
        }
        return ModularPolynomial(level, std::move(coeffs));
    }

    friend bool operator==(const ModularPolynomial &a, const ModularPolynomial &b)
    {
        return a.m_level == b.m_level && a.m_coeffs == b.m_coeffs;
    }

private:
    long degree_y() const
    {
        long d = 0;
        for (const auto &[k, v] : m_coeffs) {
            d = std::max(d, k.second);
        }
        return d;
    }

    long m_level = 1;
    std::map<Key, mpz_class> m_coeffs;
};

/// Sample placement for the interpolation: tau_k = re_shift + i (im_start + k im_step).
struct SampleConfig {
    std::string re_shift = "pi^-1";
    double im_start = 1.05;
    double im_step = 0.1;
};

/// Desk bound on the level accepted by compute_phi.
inline constexpr long default_phi_level_bound = 20;

namespace detail
{

inline Real sample_shift(const SampleConfig &cfg, mpfr_prec_t p)
{
    if (cfg.re_shift == "pi^-1") {
        return Real(1L, p) / Real::pi(p);
    }
    if (cfg.re_shift == "e^-1") {
        return exp(Real(-1L, p));
    }
    if (cfg.re_shift == "sqrt2-1") {
        return sqrt(Real(2L, p)) - Real(1L, p);
    }
    return Real(cfg.re_shift, p);
}

/// Monomial coefficients of the interpolant through (x_k, f_k) via divided differences.
inline std::vector<HPComplex> interpolate(const std::vector<HPComplex> &x, std::vector<HPComplex> f)
{
    const std::size_t n = x.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t k = n - 1; k >= level; --k) {
            f[k] = (f[k] - f[k - 1]) / (x[k] - x[k - level]);
        }
    }
    // Newton form -> monomials, Horner from the top.
    std::vector<HPComplex> c(n, f[n - 1] - f[n - 1]);
    c[0] = f[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        // c <- c * (X - x_k) + f_k
        for (std::size_t m = n - 1; m >= 1; --m) {
            c[m] = c[m - 1] - c[m] * x[k];
        }
        c[0] = f[k] - c[0] * x[k];
    }
    return c;
}

} // namespace detail

/// Outcome of one interpolation attempt.
struct PhiAttempt {
    ModularPolynomial phi;
    /// Largest |coefficient - nearest integer| seen.
    double max_residual = 0;
    int prec_bits = 0;
};

/// One interpolation run at a fixed precision; throws PrecisionError when rounding is unsafe.
inline PhiAttempt compute_phi_once(long n, int prec_bits, const SampleConfig &cfg = {})
{
    if (n == 1) {
        return {ModularPolynomial::level_one(), 0.0, prec_bits};
    }
    const long deg = psi(n);
    const std::vector<Mat2Z> reps = coset_reps(n);
    const mpfr_prec_t p = working_prec(prec_bits);
    const Real shift = detail::sample_shift(cfg, p);

    // Per sample: Y = j(tau_k) and the coefficients of prod (X - j(g tau_k)).
    std::vector<HPComplex> ys(static_cast<std::size_t>(deg + 1));
    std::vector<std::vector<HPComplex>> rows(ys.size());
    auto work = [&](std::size_t k) {
        PrecisionScope scope(p);
        Real im = Real(cfg.im_start, p) + Real(cfg.im_step, p) * static_cast<long>(k);
        HPComplex tau(shift, im, prec_bits);
        ys[k] = eval_J(tau, prec_bits).j;
        std::vector<HPComplex> poly{HPComplex::from_long(1, p)};
        for (const Mat2Z &g : reps) {
            HPComplex r = eval_J(g.act(tau).tagged(prec_bits), prec_bits).j;
            poly.push_back(HPComplex(Real(p), Real(p)));
            for (std::size_t m = poly.size() - 1; m >= 1; --m) {
                poly[m] = poly[m - 1] - poly[m] * r;
            }
            poly[0] = -(poly[0] * r);
        }
        rows[k] = std::move(poly);
    };
    std::vector<std::future<void>> jobs;
    for (std::size_t k = 0; k < ys.size(); ++k) {
        jobs.push_back(std::async(std::launch::async, work, k));
    }
    for (auto &j : jobs) {
        j.get();
    }

    std::map<ModularPolynomial::Key, mpz_class> coeffs;
    double worst = 0;
    Real quarter(0.25, p);
    for (long i = 0; i <= deg; ++i) {
        std::vector<HPComplex> f;
        for (const auto &row : rows) {
            f.push_back(row[static_cast<std::size_t>(i)]);
        }
        std::vector<HPComplex> c = detail::interpolate(ys, f);
        for (long m = 0; m <= deg; ++m) {
            const HPComplex &v = c[static_cast<std::size_t>(m)];
            mpz_class z = v.re.round_to_mpz();
            Real err = max(abs(v.re - Real(z, p)), abs(v.im));
            worst = std::max(worst, err.to_double());
            if (err >= quarter) {
                throw PrecisionError("compute_phi: rounding residual " + err.to_sci(3) + " at X^" + std::to_string(i) +
                                     " Y^" + std::to_string(m) + " for N=" + std::to_string(n));
            }
            if (z != 0) {
                coeffs[{i, m}] = z;
            }
        }
    }
    ModularPolynomial phi(n, std::move(coeffs));
    // A sound run leaves every coefficient within a tiny distance of an integer and
    // reproduces the known symmetry; anything else means precision was marginal.
    if (worst > 1e-12 || !phi.symmetric() || phi.coeff(deg, 0) != 1) {
        throw PrecisionError("compute_phi: marginal rounding (max residual " + std::to_string(worst) + ") for N=" +
                             std::to_string(n));
    }
    return {std::move(phi), worst, prec_bits};
}

/// Starting precision for level N: enough for the coefficient height and the Vandermonde solve.
inline int phi_start_prec(long n)
{
    const long deg = psi(n);
    return static_cast<int>(128 + 48 * deg);
}

/// Phi_N by interpolation with exact rounding. Doubles the precision on PrecisionError.
inline PhiAttempt compute_phi_attempts(long n, int prec_bits = 0, const SampleConfig &cfg = {},
                                       long level_bound = default_phi_level_bound, int max_retries = 5)
{
    if (n < 1 || n > level_bound) {
        throw DomainError("compute_phi: N=" + std::to_string(n) + " outside [1, " + std::to_string(level_bound) + "]");
    }
    int p = std::max(prec_bits, phi_start_prec(n));
    for (int attempt = 0;; ++attempt) {
        try {
            return compute_phi_once(n, p, cfg);
        } catch (const PrecisionError &) {
            if (attempt >= max_retries) {
                throw;
            }
            p *= 2;
        }
    }
}

inline ModularPolynomial compute_phi(long n, int prec_bits = 0, const SampleConfig &cfg = {})
{
    return compute_phi_attempts(n, prec_bits, cfg).phi;
}

/// Cache directory: explicit value, else $JDERIV_CACHE, else ./cache.
inline std::filesystem::path resolve_cache_dir(const std::string &flag = {})
{
    if (!flag.empty()) {
        return flag;
    }
    if (const char *env = std::getenv("JDERIV_CACHE"); env != nullptr && *env != '\0') {
        return env;
    }
    return "cache";
}

/// On-disk and in-memory store of computed Phi_N, one file phi_<N>.txt per level.
class PhiCache
{
public:
    explicit PhiCache(std::filesystem::path dir = resolve_cache_dir()) : m_dir(std::move(dir)) {}

    const std::filesystem::path &dir() const
    {
        return m_dir;
    }
    std::filesystem::path file_for(long n) const
    {
        return m_dir / ("phi_" + std::to_string(n) + ".txt");
    }

    std::optional<ModularPolynomial> load(long n) const
    {
        std::ifstream in(file_for(n));
        if (!in) {
            return std::nullopt;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        ModularPolynomial phi = ModularPolynomial::parse(ss.str());
        if (phi.level() != n) {
            throw DomainError("cache file " + file_for(n).string() + " holds the wrong level");
        }
        return phi;
    }

    void store(const ModularPolynomial &phi) const
    {
        std::error_code ec;
        std::filesystem::create_directories(m_dir, ec);
        if (ec) {
            throw Error("cannot create cache directory " + m_dir.string() + ": " + ec.message());
        }
        std::filesystem::path tmp = file_for(phi.level());
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("cannot write cache file " + tmp.string());
            }
            out << phi.serialize();
        }
        std::filesystem::rename(tmp, file_for(phi.level()), ec);
        if (ec) {
            throw Error("cannot publish cache file: " + ec.message());
        }
    }

    /// Memory, then disk, then computation (written back to disk when persist is set).
    const ModularPolynomial &get(long n, bool persist = true)
    {
        std::lock_guard<std::mutex> lock(m_mutex);
        if (auto it = m_memory.find(n); it != m_memory.end()) {
            return it->second;
        }
        std::optional<ModularPolynomial> phi = load(n);
        if (!phi) {
            phi = compute_phi(n);
            if (persist) {
                store(*phi);
            }
        }
        return m_memory.emplace(n, std::move(*phi)).first->second;
    }

private:
    std::filesystem::path m_dir;
    std::mutex m_mutex;
    std::map<long, ModularPolynomial> m_memory;
};

namespace detail
{

inline std::shared_ptr<PhiCache> &process_phi_cache()
{
    static std::shared_ptr<PhiCache> cache;
    return cache;
}

} // namespace detail

/// Routes phi_for_level through a disk cache in `dir` from now on.
inline void use_phi_cache(const std::filesystem::path &dir)
{
    detail::process_phi_cache() = std::make_shared<PhiCache>(dir);
}

/// Process-wide store used where callers pass only N: the disk cache when one was
/// installed with use_phi_cache, otherwise memory only.
inline ModularPolynomial const &phi_for_level(long n)
{
    if (auto cache = detail::process_phi_cache()) {
        return cache->get(n);
    }
    static std::mutex mtx;
    static std::map<long, ModularPolynomial> memo;
    std::lock_guard<std::mutex> lock(mtx);
    if (auto it = memo.find(n); it != memo.end()) {
        return it->second;
    }
    return memo.emplace(n, compute_phi(n)).first->second;
}

/// lambda = Phi_X / Phi_Y at (x, y). Throws RamificationError when Phi_Y vanishes.
inline HPComplex lambda_eval(const ModularPolynomial &phi, const HPComplex &x, const HPComplex &y)
{
    PhiDerivs d = phi.derivs(x, y);
    const int tag = std::min(x.prec_bits, y.prec_bits);
    Real tol = Real::pow2(-tag / 2, d.y_scale.prec()) * max(d.y_scale, Real(1L, d.y_scale.prec()));
    if (abs(d.y) <= tol) {
        throw RamificationError("lambda: dPhi/dY vanishes at (" + to_string(x, 12) + ", " + to_string(y, 12) + ")");
    }
    return d.x / d.y;
}

inline HPComplex lambda_eval(long n, const HPComplex &x, const HPComplex &y)
{
    return lambda_eval(phi_for_level(n), x, y);
}

/// mu_N(u, v, u', v', u'', c, e) with u = j(tau), v = j(g tau), e = c tau + d, N = det g.
/**
 * V(tau) = j(g tau) satisfies Phi(u, V) = 0, so V' = -(Phi_X/Phi_Y) u' and
 * V'' = -(Phi_XX u'^2 + 2 Phi_XY u'V' + Phi_YY V'^2 + Phi_X u'')/Phi_Y.
 * With V' = N j'(g tau)/e^2 and V'' = N^2 j''(g tau)/e^4 - 2Nc j'(g tau)/e^3,
 * j''(g tau) = (V'' + 2Nc v'/e^3) e^4/N^2. The result is affine in c.
 */
inline HPComplex mu_n(const ModularPolynomial &phi, const HPComplex &u, const HPComplex &v, const HPComplex &up,
                      const HPComplex &vp, const HPComplex &upp, const Real &c, const HPComplex &e)
{
    PhiDerivs d = phi.derivs(u, v);
    const int tag = std::min(u.prec_bits, v.prec_bits);
    Real tol = Real::pow2(-tag / 2, d.y_scale.prec()) * max(d.y_scale, Real(1L, d.y_scale.prec()));
    if (abs(d.y) <= tol) {
        throw RamificationError("mu: dPhi/dY vanishes at (" + to_string(u, 12) + ", " + to_string(v, 12) + ")");
    }
    const long n = phi.level();
    HPComplex vd = -(d.x / d.y) * up;
    HPComplex num = d.xx * up * up + d.xy * up * vd * 2L + d.yy * vd * vd + d.x * upp;
    HPComplex vdd = -(num / d.y);
    HPComplex e2 = e * e;
    HPComplex anomaly = vp * (c * (2 * n)) / (e2 * e);
    return (vdd + anomaly) * (e2 * e2) / Real(n * n, c.prec());
}

/// Predicted j''(g tau) from J(tau), j(g tau), j'(g tau) via mu_N.
inline HPComplex mu_eval(const ModularPolynomial &phi, const Mat2Z &g, const HPComplex &tau, int prec_bits)
{
    if (!g.primitive() || g.det() != phi.level()) {
        throw DomainError("mu_eval: g must be primitive with det " + std::to_string(phi.level()));
    }
    JValues a = eval_J(tau, prec_bits);
    HPComplex gt = g.act(tau.with_work_prec(working_prec(prec_bits))).tagged(prec_bits);
    JValues b = eval_J(gt, prec_bits);
    Real c(g.c, working_prec(prec_bits));
    HPComplex e = g.cofactor(tau.with_work_prec(working_prec(prec_bits)));
    return mu_n(phi, a.j, b.j, a.jp, b.jp, a.jpp, c, e).tagged(prec_bits);
}

inline HPComplex mu_eval(long n, const Mat2Z &g, const HPComplex &tau, int prec_bits)
{
    return mu_eval(phi_for_level(n), g, tau, prec_bits);
}

} // namespace jderiv

#endif
