#ifndef JDERIV_VARIETIES_HPP
#define JDERIV_VARIETIES_HPP

#include <array>
#include <cstdint>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "jderiv/cmfields.hpp"
#include "jderiv/complex.hpp"
#include "jderiv/errors.hpp"
#include "jderiv/evaluator.hpp"
#include "jderiv/identities.hpp"
#include "jderiv/mat2z.hpp"
#include "jderiv/modpoly.hpp"
#include "jderiv/random.hpp"

namespace jderiv
{

/// Element of Q(i).
struct GaussQ {
    mpq_class re, im;

    GaussQ() = default;
    GaussQ(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }
    GaussQ(long r) : re(r), im(0) {}

    bool is_zero() const
    {
        return re == 0 && im == 0;
    }
    GaussQ &operator+=(const GaussQ &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussQ &operator-=(const GaussQ &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussQ operator-() const
    {
        return GaussQ(-re, -im);
    }
    friend GaussQ operator+(GaussQ a, const GaussQ &b)
    {
        return a += b;
    }
    friend GaussQ operator-(GaussQ a, const GaussQ &b)
    {
        return a -= b;
    }
    friend GaussQ operator*(const GaussQ &a, const GaussQ &b)
    {
        return GaussQ(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend bool operator==(const GaussQ &a, const GaussQ &b)
    {
        return a.re == b.re && a.im == b.im;
    }

    HPComplex to_complex(mpfr_prec_t p) const
    {
        return HPComplex(Real(re, p), Real(im, p));
    }
    /// "<num>/<den> <num>/<den>", denominators always written.
    std::string to_string() const
    {
        auto q = [](const mpq_class &x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); };
        return q(re) + " " + q(im);
    }
};

/// Monomial exponent vector, one entry per variable.
using Exponents = std::vector<unsigned>;

/// Sparse polynomial with Gaussian-rational coefficients.
class MPoly
{
public:
    MPoly() = default;
    explicit MPoly(std::size_t nvars) : m_nvars(nvars) {}

    static MPoly constant(std::size_t nvars, const GaussQ &c)
    {
        MPoly p(nvars);
        p.add_term(Exponents(nvars, 0), c);
        return p;
    }
    static MPoly var(std::size_t nvars, std::size_t k)
    {
        if (k >= nvars) {
            throw DomainError("MPoly::var: index out of range");
        }
        Exponents e(nvars, 0);
        e[k] = 1;
        MPoly p(nvars);
        p.add_term(e, GaussQ(1L));
        return p;
    }
    /// Phi(X_{kx}, X_{ky}) in an ambient ring of nvars variables.
    static MPoly from_phi(std::size_t nvars, const ModularPolynomial &phi, std::size_t kx, std::size_t ky)
    {
        MPoly p(nvars);
        for (const auto &[key, c] : phi.coeffs()) {
            Exponents e(nvars, 0);
            e[kx] += static_cast<unsigned>(key.first);
            e[ky] += static_cast<unsigned>(key.second);
            p.add_term(e, GaussQ(mpq_class(c)));
        }
        return p;
    }

    std::size_t nvars() const
    {
        return m_nvars;
    }
    const std::map<Exponents, GaussQ> &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    void add_term(const Exponents &e, const GaussQ &c)
    {
        if (e.size() != m_nvars) {
            throw DomainError("MPoly: exponent vector of length " + std::to_string(e.size()) + " in a ring of " +
                              std::to_string(m_nvars) + " variables");
        }
        if (c.is_zero()) {
            return;
        }
        auto [it, fresh] = m_terms.emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) {
                m_terms.erase(it);
            }
        }
    }

    MPoly &operator+=(const MPoly &o)
    {
        check_ring(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, c);
        }
        return *this;
    }
    MPoly &operator-=(const MPoly &o)
    {
        check_ring(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, -c);
        }
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly &b)
    {
        return a += b;
    }
    friend MPoly operator-(MPoly a, const MPoly &b)
    {
        return a -= b;
    }
    friend MPoly operator*(const MPoly &a, const MPoly &b)
    {
        a.check_ring(b);
        MPoly out(a.m_nvars);
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                Exponents e(ea);
                for (std::size_t k = 0; k < e.size(); ++k) {
                    e[k] += eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }
    friend MPoly operator*(const GaussQ &s, const MPoly &a)
    {
        MPoly out(a.m_nvars);
        for (const auto &[e, c] : a.m_terms) {
            out.add_term(e, s * c);
        }
        return out;
    }
    MPoly pow(unsigned n) const
    {
        MPoly out = constant(m_nvars, GaussQ(1L)), base = *this;
        for (; n > 0; n >>= 1) {
            if (n & 1U) {
                out = out * base;
            }
            if (n > 1) {
                base = base * base;
            }
        }
        return out;
    }
    MPoly derivative(std::size_t k) const
    {
        MPoly out(m_nvars);
        for (const auto &[e, c] : m_terms) {
            if (e[k] == 0) {
                continue;
            }
            Exponents f(e);
            --f[k];
            out.add_term(f, GaussQ(static_cast<long>(e[k])) * c);
        }
        return out;
    }
    unsigned degree_in(std::size_t k) const
    {
        unsigned d = 0;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, e[k]);
        }
        return d;
    }
    friend bool operator==(const MPoly &a, const MPoly &b)
    {
        return a.m_nvars == b.m_nvars && a.m_terms == b.m_terms;
    }

    /// Value at x together with the monomial-magnitude bound sum |c| prod |x_k|^e_k.
    std::pair<HPComplex, Real> eval_with_bound(const std::vector<HPComplex> &x) const
    {
        if (x.size() != m_nvars) {
            throw DomainError("MPoly::eval: point has " + std::to_string(x.size()) + " coordinates, ring has " +
                              std::to_string(m_nvars));
        }
        mpfr_prec_t p = 64;
        int tag = 1 << 30;
        for (const auto &v : x) {
            p = std::max(p, v.work_prec());
            tag = std::min(tag, v.prec_bits);
        }
        std::vector<std::vector<HPComplex>> pw(m_nvars);
        std::vector<std::vector<Real>> apw(m_nvars);
        for (std::size_t k = 0; k < m_nvars; ++k) {
            const unsigned dk = degree_in(k);
            pw[k].push_back(HPComplex::from_long(1, p));
            apw[k].push_back(Real(1L, p));
            const Real ax = abs(x[k]);
            for (unsigned m = 1; m <= dk; ++m) {
                pw[k].push_back(pw[k].back() * x[k]);
                apw[k].push_back(apw[k].back() * ax);
            }
        }
        HPComplex val{Real(p), Real(p), tag};
        Real bound(p);
        for (const auto &[e, c] : m_terms) {
            HPComplex t = c.to_complex(p);
            Real at = abs(t);
            for (std::size_t k = 0; k < m_nvars; ++k) {
                if (e[k] != 0) {
                    t *= pw[k][e[k]];
                    at *= apw[k][e[k]];
                }
            }
            val += t;
            bound += at;
        }
        val.prec_bits = tag;
        return {val, bound};
    }
    HPComplex eval(const std::vector<HPComplex> &x) const
    {
        return eval_with_bound(x).first;
    }

    /// Monomials joined by " ; ", each "e1,...,ek re/den im/den"; "0" for the zero polynomial.
    std::string serialize() const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &[e, c] : m_terms) {
            if (!s.empty()) {
                s += " ; ";
            }
            for (std::size_t k = 0; k < e.size(); ++k) {
                s += (k ? "," : "") + std::to_string(e[k]);
            }
            s += " " + c.to_string();
        }
        return s;
    }
    static MPoly parse(std::size_t nvars, const std::string &line)
    {
        MPoly p(nvars);
        if (line == "0") {
            return p;
        }
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t stop = line.find(" ; ", start);
            std::string mono = line.substr(start, stop == std::string::npos ? std::string::npos : stop - start);
            std::istringstream is(mono);
            std::string exps, re, im, extra;
            if (!(is >> exps >> re >> im) || (is >> extra)) {
                throw DomainError("MPoly::parse: malformed monomial '" + mono + "'");
            }
            Exponents e;
            std::istringstream es(exps);
            std::string tok;
            while (std::getline(es, tok, ',')) {
                try {
                    std::size_t used = 0;
                    long v = std::stol(tok, &used);
                    if (used != tok.size() || v < 0) {
                        throw DomainError("");
                    }
                    e.push_back(static_cast<unsigned>(v));
                } catch (const std::exception &) {
                    throw DomainError("MPoly::parse: bad exponent '" + tok + "'");
                }
            }
            p.add_term(e, GaussQ(parse_rational(re), parse_rational(im)));
            if (stop == std::string::npos) {
                break;
            }
            start = stop + 3;
        }
        return p;
    }

private:
    static mpq_class parse_rational(const std::string &s)
    {
        mpq_class q;
        if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
            throw DomainError("MPoly::parse: bad rational '" + s + "'");
        }
        q.canonicalize();
        return q;
    }
    void check_ring(const MPoly &o) const
    {
        if (o.m_nvars != m_nvars) {
            throw DomainError("MPoly: mixing rings of " + std::to_string(m_nvars) + " and " +
                              std::to_string(o.m_nvars) + " variables");
        }
    }

    std::size_t m_nvars = 0;
    std::map<Exponents, GaussQ> m_terms;
};

/// Zero set of a list of polynomials; an empty list is the whole space.
/**
 * For the J-image ambient space C^{3n}, coordinate block k carries the variables
 * X_k, Y_k, Z_k at indices 3k, 3k+1, 3k+2. Varieties in other dimensions (W in C^2)
 * have n = 0 and only `dim`.
 */
struct Variety {
    std::size_t dim = 0;
    std::vector<MPoly> polys;

    Variety() = default;
    Variety(std::size_t d, std::vector<MPoly> ps) : dim(d), polys(std::move(ps))
    {
        for (const MPoly &p : polys) {
            if (p.nvars() != dim) {
                throw DomainError("Variety: polynomial ring does not match dimension " + std::to_string(dim));
            }
        }
    }
    static Variety in_blocks(std::size_t n, std::vector<MPoly> ps)
    {
        return Variety(3 * n, std::move(ps));
    }
    std::size_t blocks() const
    {
        return dim % 3 == 0 ? dim / 3 : 0;
    }

    /// "VAR n <n>" for C^{3n}, otherwise "VAR dim <d>"; then one polynomial per line.
    std::string serialize() const
    {
        std::string s = dim % 3 == 0 && dim > 0 ? "VAR n " + std::to_string(dim / 3) : "VAR dim " + std::to_string(dim);
        s += "\n";
        for (const MPoly &p : polys) {
            s += p.serialize() + "\n";
        }
        return s;
    }
    static Variety parse(const std::string &text)
    {
        std::istringstream is(text);
        std::string line;
        if (!std::getline(is, line)) {
            throw DomainError("Variety::parse: empty input");
        }
        std::istringstream hs(line);
        std::string tag, kind, extra;
        long count = -1;
        if (!(hs >> tag >> kind >> count) || tag != "VAR" || (kind != "n" && kind != "dim") || count < 0 ||
            (hs >> extra)) {
            throw DomainError("Variety::parse: bad header '" + line + "'");
        }
        const std::size_t d = kind == "n" ? 3 * static_cast<std::size_t>(count) : static_cast<std::size_t>(count);
        std::vector<MPoly> ps;
        while (std::getline(is, line)) {
            if (line.empty()) {
                continue;
            }
            ps.push_back(MPoly::parse(d, line));
        }
        return Variety(d, std::move(ps));
    }
    friend bool operator==(const Variety &a, const Variety &b)
    {
        return a.dim == b.dim && a.polys == b.polys;
    }
};

struct MembershipResult {
    bool member = false;
    /// max over polynomials of |P(pt)| / (1 + bound)
    Real max_residual{Real(mpfr_prec_t{64})};
};

/// Default membership tolerance at a precision: 2^(-prec/2).
inline Real default_tolerance(int prec_bits)
{
    return Real::pow2(-prec_bits / 2, working_prec(prec_bits));
}

inline MembershipResult membership(const Variety &v, const std::vector<HPComplex> &pt, const Real &tol)
{
    if (pt.size() != v.dim) {
        throw DomainError("membership: point has " + std::to_string(pt.size()) + " coordinates, variety lives in C^" +
                          std::to_string(v.dim));
    }
    MembershipResult out;
    out.max_residual = Real(tol.prec());
    for (const MPoly &p : v.polys) {
        auto [val, bound] = p.eval_with_bound(pt);
        Real r = abs(val) / (bound + Real(1L, bound.prec()));
        out.max_residual = max(out.max_residual, r);
    }
    out.member = out.max_residual < tol;
    return out;
}

/// (j, j', j'') of each coordinate, concatenated.
inline std::vector<HPComplex> special_image(const std::vector<HPComplex> &taus, int prec_bits)
{
    std::vector<HPComplex> out;
    out.reserve(3 * taus.size());
    for (const HPComplex &t : taus) {
        JValues v = eval_J(t, prec_bits);
        out.push_back(std::move(v.j));
        out.push_back(std::move(v.jp));
        out.push_back(std::move(v.jpp));
    }
    return out;
}

inline std::vector<HPComplex> special_image(const std::vector<QuadraticPoint> &taus, int prec_bits)
{
    std::vector<HPComplex> pts;
    for (const QuadraticPoint &t : taus) {
        pts.push_back(t.value(prec_bits));
    }
    return special_image(pts, prec_bits);
}

/// The J-closure curve of gamma tau: w -> (j(tau), w, p_{Im gamma tau}(j(tau), chi*(tau), w)).
class JCloseCurve
{
public:
    JCloseCurve(const QuadraticPoint &tau, int prec_bits, const Mat2Z &gamma = Mat2Z::identity())
        : m_prec(prec_bits)
    {
        if (gamma.det() != 1) {
            throw DomainError("jclose_curve: gamma must lie in SL2(Z)");
        }
        const HPComplex t = tau.value(prec_bits);
        ModularValues v = evaluate(t, prec_bits);
        m_j = v.j;
        m_chistar = v.chistar;
        m_c = gamma.act(t).im;
        // Fail early on the orbits of i and rho.
        p_c_eval(m_c, m_j, m_chistar, HPComplex::from_long(1, t.work_prec()).tagged(prec_bits));
    }

    std::array<HPComplex, 3> at(const HPComplex &w) const
    {
        const HPComplex wt = w.with_work_prec(working_prec(m_prec)).tagged(m_prec);
        return {m_j, wt, p_c_eval(m_c, m_j, m_chistar, wt)};
    }
    std::vector<std::array<HPComplex, 3>> sample(const std::vector<HPComplex> &grid) const
    {
        std::vector<std::array<HPComplex, 3>> out;
        for (const HPComplex &w : grid) {
            out.push_back(at(w));
        }
        return out;
    }
    const Real &c() const
    {
        return m_c;
    }

private:
    int m_prec;
    HPComplex m_j, m_chistar;
    Real m_c{Real(mpfr_prec_t{64})};
};

inline JCloseCurve jclose_curve(const QuadraticPoint &tau, int prec_bits, const Mat2Z &gamma = Mat2Z::identity())
{
    return JCloseCurve(tau, prec_bits, gamma);
}

/// The curves of gamma1 tau and gamma2 tau differ at w iff their third slots differ there.
inline bool jclose_distinct(const QuadraticPoint &tau, const Mat2Z &g1, const Mat2Z &g2, const HPComplex &w,
                            int prec_bits)
{
    auto a = jclose_curve(tau, prec_bits, g1).at(w);
    auto b = jclose_curve(tau, prec_bits, g2).at(w);
    return relative_residual(a[2], b[2]) > default_tolerance(prec_bits);
}

/// One block of a linear variety: coordinates g_j tau for a common free tau.
struct LinearBlock {
    /// Coordinate indices; the first is the block leader.
    std::vector<std::size_t> coords;
    /// One matrix per coordinate (identity for a plain leader).
    std::vector<Mat2Z> g;
};

/// Blocks of moving coordinates plus constant coordinates. Basic iff there are no constants.
struct BasicLinearVariety {
    std::size_t n = 0;
    std::vector<LinearBlock> blocks;
    std::vector<std::size_t> constant_coords;
    /// Optional values of the constants; these make a translate of the basic part.
    std::vector<HPComplex> constants;

    bool basic() const
    {
        return constant_coords.empty();
    }
    void validate() const
    {
        std::vector<int> seen(n, 0);
        for (const LinearBlock &b : blocks) {
            if (b.coords.empty() || b.coords.size() != b.g.size()) {
                throw DomainError("BasicLinearVariety: each block needs one matrix per coordinate");
            }
            for (std::size_t k = 0; k < b.coords.size(); ++k) {
                if (b.coords[k] >= n) {
                    throw DomainError("BasicLinearVariety: coordinate index out of range");
                }
                ++seen[b.coords[k]];
                if (b.g[k].det() <= 0) {
                    throw DomainError("BasicLinearVariety: matrices must have positive determinant");
                }
            }
        }
        for (std::size_t k : constant_coords) {
            if (k >= n) {
                throw DomainError("BasicLinearVariety: constant coordinate out of range");
            }
            ++seen[k];
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (seen[k] != 1) {
                throw DomainError("BasicLinearVariety: coordinate " + std::to_string(k) +
                                  " must appear exactly once");
            }
        }
        if (!constants.empty() && constants.size() != constant_coords.size()) {
            throw DomainError("BasicLinearVariety: constant values do not match constant coordinates");
        }
    }
};

struct AdjacencyWitness {
    /// Per block, per coordinate.
    std::vector<std::vector<HPComplex>> z;
    /// Per block, per coordinate; all positive.
    std::vector<std::vector<Real>> c;
    /// (w, x, y) per constant coordinate.
    std::vector<std::array<HPComplex, 3>> constants;
};

/// Witness with every z and c equal to 1 and no constants.
inline AdjacencyWitness unit_witness(const BasicLinearVariety &b, int prec_bits)
{
    const mpfr_prec_t p = working_prec(prec_bits);
    AdjacencyWitness w;
    for (const LinearBlock &blk : b.blocks) {
        w.z.emplace_back(blk.coords.size(), HPComplex::from_long(1, p).tagged(prec_bits));
        w.c.emplace_back(blk.coords.size(), Real(1L, p));
    }
    return w;
}

/// For a translate: the constants (w, x, y) = J(sigma_i).
inline std::vector<std::array<HPComplex, 3>> translate_constants(const BasicLinearVariety &b, int prec_bits)
{
    std::vector<std::array<HPComplex, 3>> out;
    for (const HPComplex &s : b.constants) {
        JValues v = eval_J(s.with_work_prec(working_prec(prec_bits)).tagged(prec_bits), prec_bits);
        out.push_back({v.j, v.jp, v.jpp});
    }
    return out;
}

struct AdjacencyResult {
    bool adjacent = false;
    /// max membership residual at each sample
    std::vector<Real> residuals;
    Real max_residual{Real(mpfr_prec_t{64})};
    std::vector<std::vector<HPComplex>> leaders;
};

/// Uniform sampling box for block leaders.
inline const TauBox &adjacency_box()
{
    static const TauBox box{-0.5, 0.5, 1.0, 2.0};
    return box;
}

namespace detail
{

inline void check_witness(const BasicLinearVariety &b, const AdjacencyWitness &w)
{
    b.validate();
    if (w.z.size() != b.blocks.size() || w.c.size() != b.blocks.size()) {
        throw DomainError("adjacency: witness block count does not match");
    }
    for (std::size_t i = 0; i < b.blocks.size(); ++i) {
        if (w.z[i].size() != b.blocks[i].coords.size() || w.c[i].size() != b.blocks[i].coords.size()) {
            throw DomainError("adjacency: witness shape does not match block " + std::to_string(i));
        }
        for (const Real &c : w.c[i]) {
            if (c.sign() <= 0) {
                throw DomainError("adjacency: every c must be positive");
            }
        }
    }
    if (w.constants.size() != b.constant_coords.size()) {
        throw DomainError("adjacency: one (w, x, y) triple per constant coordinate is required");
    }
}

/// The tuple attached to leaders tau_i, with the z of coordinate (bi, bj) optionally overridden.
inline std::vector<HPComplex> adjacency_tuple(const BasicLinearVariety &b, const AdjacencyWitness &w,
                                              const std::vector<HPComplex> &leaders, int prec_bits)
{
    std::vector<HPComplex> pt(3 * b.n);
    for (std::size_t i = 0; i < b.blocks.size(); ++i) {
        const LinearBlock &blk = b.blocks[i];
        for (std::size_t k = 0; k < blk.coords.size(); ++k) {
            const Mat2Z &g = blk.g[k];
            const HPComplex gt = g.act(leaders[i]).tagged(prec_bits);
            ModularValues v = evaluate(gt, prec_bits);
            HPComplex y = v.jp * w.z[i][k] / m_g(g, leaders[i]);
            HPComplex zslot = p_c_eval(w.c[i][k], v.j, v.chistar, y);
            const std::size_t at = 3 * blk.coords[k];
            pt[at] = v.j;
            pt[at + 1] = y;
            pt[at + 2] = zslot;
        }
    }
    for (std::size_t k = 0; k < b.constant_coords.size(); ++k) {
        const std::size_t at = 3 * b.constant_coords[k];
        for (std::size_t s = 0; s < 3; ++s) {
            pt[at + s] = w.constants[k][s];
        }
    }
    return pt;
}

inline std::vector<std::vector<HPComplex>> sample_leaders(std::size_t blocks, int n_samples, std::uint64_t seed,
                                                          int prec_bits)
{
    Rng rng(seed);
    std::vector<std::vector<HPComplex>> out(static_cast<std::size_t>(n_samples));
    for (auto &row : out) {
        for (std::size_t i = 0; i < blocks; ++i) {
            row.push_back(random_tau(rng, prec_bits, adjacency_box()));
        }
    }
    return out;
}

} // namespace detail

/// Checks the adjacency tuple against V at n_samples seeded random leader tuples.
/**
 * Samples run concurrently; the result depends only on (V, B, wit, n_samples, seed, prec).
 */
inline AdjacencyResult adjacency_verify(const Variety &v, const BasicLinearVariety &b, const AdjacencyWitness &wit,
                                        int n_samples, int prec_bits, std::uint64_t seed = 1)
{
    detail::check_witness(b, wit);
    if (v.dim != 3 * b.n) {
        throw DomainError("adjacency_verify: V lives in C^" + std::to_string(v.dim) + ", B in H^" +
                          std::to_string(b.n));
    }
    if (n_samples < 1) {
        throw DomainError("adjacency_verify: n_samples must be positive");
    }
    AdjacencyResult out;
    out.leaders = detail::sample_leaders(b.blocks.size(), n_samples, seed, prec_bits);
    const Real tol = default_tolerance(prec_bits);
    std::vector<std::future<MembershipResult>> jobs;
    for (const auto &leaders : out.leaders) {
        jobs.push_back(std::async(std::launch::async, [&, leaders] {
            return membership(v, detail::adjacency_tuple(b, wit, leaders, prec_bits), tol);
        }));
    }
    out.adjacent = true;
    out.max_residual = Real(tol.prec());
    for (auto &job : jobs) {
        MembershipResult r = job.get();
        out.adjacent = out.adjacent && r.member;
        out.max_residual = max(out.max_residual, r.max_residual);
        out.residuals.push_back(std::move(r.max_residual));
    }
    return out;
}

namespace detail
{

/// Roots of a complex polynomial (constant first) by Durand-Kerner iteration.
inline std::vector<HPComplex> poly_roots(std::vector<HPComplex> c, int prec_bits)
{
    while (c.size() > 1 && c.back().is_zero()) {
        c.pop_back();
    }
    const std::size_t deg = c.size() - 1;
    std::vector<HPComplex> roots;
    if (deg == 0) {
        return roots;
    }
    const mpfr_prec_t p = c.back().work_prec();
    const HPComplex lead = c.back();
    for (auto &x : c) {
        x = x / lead;
    }
    // Cauchy bound for the starting circle.
    Real radius(1L, p);
    for (std::size_t k = 0; k < deg; ++k) {
        radius = max(radius, abs(c[k]) + Real(1L, p));
    }
    const HPComplex seed = HPComplex::from_double(0.4, 0.9, p);
    HPComplex w = HPComplex::from_long(1, p);
    for (std::size_t k = 0; k < deg; ++k) {
        roots.push_back(w * radius);
        w *= seed;
    }
    const Real tol = Real::pow2(-prec_bits, p);
    for (int iter = 0; iter < 200 + 20 * static_cast<int>(deg) + prec_bits; ++iter) {
        Real step(p);
        for (std::size_t k = 0; k < deg; ++k) {
            HPComplex num = c[deg];
            for (std::size_t m = deg; m-- > 0;) {
                num = num * roots[k] + c[m];
            }
            HPComplex den = HPComplex::from_long(1, p);
            for (std::size_t m = 0; m < deg; ++m) {
                if (m != k) {
                    den *= roots[k] - roots[m];
                }
            }
            if (den.is_zero()) {
                roots[k] += HPComplex::from_double(1e-3, 1e-3, p);
                continue;
            }
            HPComplex delta = num / den;
            roots[k] -= delta;
            step = max(step, abs(delta) / max(abs(roots[k]), Real(1L, p)));
        }
        if (step < tol) {
            break;
        }
    }
    for (auto &r : roots) {
        r.prec_bits = prec_bits;
    }
    return roots;
}

} // namespace detail

/// Values of one unknown z (at block bi, coordinate bk) consistent with V at every sample.
/**
 * The tuple depends on z through Y = y0 z and p_c, which is quadratic in its last argument,
 * so each polynomial of V restricts to a univariate polynomial in z. Its roots at the first
 * sample are candidates; a candidate survives if membership holds at every sample.
 */
inline std::vector<HPComplex> solve_single_z(const Variety &v, const BasicLinearVariety &b, AdjacencyWitness wit,
                                             std::size_t bi, std::size_t bk, int n_samples, int prec_bits,
                                             std::uint64_t seed = 1)
{
    detail::check_witness(b, wit);
    if (bi >= b.blocks.size() || bk >= b.blocks[bi].coords.size()) {
        throw DomainError("solve_single_z: no such coordinate");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    auto samples = detail::sample_leaders(b.blocks.size(), n_samples, seed, prec_bits);
    const std::size_t coord = b.blocks[bi].coords[bk];
    std::vector<HPComplex> candidates;
    for (const MPoly &poly : v.polys) {
        const unsigned deg = poly.degree_in(3 * coord + 1) + 2 * poly.degree_in(3 * coord + 2);
        if (deg == 0) {
            continue;
        }
        std::vector<HPComplex> xs, fs;
        for (unsigned k = 0; k <= deg; ++k) {
            HPComplex zk = HPComplex::from_double(1.0 + k, 0.5 * k - 0.25, p).tagged(prec_bits);
            wit.z[bi][bk] = zk;
            xs.push_back(zk);
            fs.push_back(poly.eval(detail::adjacency_tuple(b, wit, samples.front(), prec_bits)));
        }
        std::vector<HPComplex> coeffs = detail::interpolate(xs, fs);
        Real scale(p);
        for (const auto &c : coeffs) {
            scale = max(scale, abs(c));
        }
        if (scale.is_zero()) {
            continue;
        }
        for (auto &c : coeffs) {
            if (abs(c) < scale * default_tolerance(prec_bits)) {
                c = HPComplex::from_long(0, p);
            }
        }
        candidates = detail::poly_roots(coeffs, prec_bits);
        break;
    }
    std::vector<HPComplex> out;
    const Real tol = default_tolerance(prec_bits);
    for (const HPComplex &z : candidates) {
        if (abs(z) < tol) {
            continue;
        }
        wit.z[bi][bk] = z;
        bool ok = true;
        for (const auto &leaders : samples) {
            ok = ok && membership(v, detail::adjacency_tuple(b, wit, leaders, prec_bits), tol).member;
        }
        bool fresh = true;
        for (const auto &prev : out) {
            fresh = fresh && relative_residual(prev, z) > tol;
        }
        if (ok && fresh) {
            out.push_back(z);
        }
    }
    return out;
}

/// V in C^12 together with the denominators cleared to build it.
struct Example1Variety {
    Variety v;
    /// Y1, dPhi_M/dX(X1, X2), Y3, dPhi_N/dX(X3, X4); V is meaningful off their zero set.
    std::vector<MPoly> denominators;
};

/// Phi_M(X1, X2) = 0, Phi_N(X3, X4) = 0 and (-Y2/(Y1 lambda_M), -Y4/(Y3 lambda_N)) in W.
/**
 * With lambda = Phi_X / Phi_Y the pair is (-Y2 Phi_Y / (Y1 Phi_X), ...). Each polynomial of W
 * of degrees (a, b) in (x, y) is multiplied by (Y1 Phi_X^M)^a (Y3 Phi_X^N)^b.
 */
inline Example1Variety example1_build(long m, long n, const Variety &w)
{
    if (m < 1 || n < 1) {
        throw DomainError("example1_build: levels must be positive");
    }
    if (w.dim != 2) {
        throw DomainError("example1_build: W must lie in C^2");
    }
    const std::size_t nv = 12;
    auto Y = [&](std::size_t k) { return MPoly::var(nv, 3 * k + 1); };
    const ModularPolynomial &pm = phi_for_level(m);
    const ModularPolynomial &pn = phi_for_level(n);
    MPoly phi_m = MPoly::from_phi(nv, pm, 0, 3), phi_n = MPoly::from_phi(nv, pn, 6, 9);
    MPoly num_x = GaussQ(-1L) * (Y(1) * phi_m.derivative(3));
    MPoly den_x = Y(0) * phi_m.derivative(0);
    MPoly num_y = GaussQ(-1L) * (Y(3) * phi_n.derivative(9));
    MPoly den_y = Y(2) * phi_n.derivative(6);

    Example1Variety out;
    std::vector<MPoly> polys{phi_m, phi_n};
    for (const MPoly &q : w.polys) {
        const unsigned a = q.degree_in(0), b = q.degree_in(1);
        std::vector<MPoly> nx{MPoly::constant(nv, GaussQ(1L))}, dx{nx[0]}, ny{nx[0]}, dy{nx[0]};
        for (unsigned k = 1; k <= a; ++k) {
            nx.push_back(nx.back() * num_x);
            dx.push_back(dx.back() * den_x);
        }
        for (unsigned k = 1; k <= b; ++k) {
            ny.push_back(ny.back() * num_y);
            dy.push_back(dy.back() * den_y);
        }
        MPoly cleared(nv);
        for (const auto &[e, c] : q.terms()) {
            cleared += c * (nx[e[0]] * dx[a - e[0]] * ny[e[1]] * dy[b - e[1]]);
        }
        polys.push_back(std::move(cleared));
    }
    out.v = Variety(nv, std::move(polys));
    out.denominators = {Y(0), phi_m.derivative(0), Y(2), phi_n.derivative(6)};
    return out;
}

/// Element of Q(i)(sqrt r : r squarefree positive), stored on the basis sqrt r.
class QuadNum
{
public:
    QuadNum() = default;
    QuadNum(const GaussQ &c)
    {
        add(mpz_class(1), c);
    }
    static QuadNum sqrt_of(const mpz_class &r, const GaussQ &c = GaussQ(1L))
    {
        QuadNum q;
        q.add(r, c);
        return q;
    }
    bool is_zero() const
    {
        return m_c.empty();
    }
    QuadNum &operator+=(const QuadNum &o)
    {
        for (const auto &[r, c] : o.m_c) {
            add(r, c);
        }
        return *this;
    }
    friend QuadNum operator+(QuadNum a, const QuadNum &b)
    {
        return a += b;
    }
    friend QuadNum operator*(const QuadNum &a, const QuadNum &b)
    {
        QuadNum out;
        for (const auto &[r, x] : a.m_c) {
            for (const auto &[s, y] : b.m_c) {
                mpz_class g;
                mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), s.get_mpz_t());
                // sqrt r sqrt s = g sqrt(r s / g^2), and r s / g^2 is squarefree again.
                out.add(r * s / (g * g), GaussQ(mpq_class(g)) * x * y);
            }
        }
        return out;
    }
    std::string to_string() const
    {
        if (m_c.empty()) {
            return "0";
        }
        std::string s;
        for (const auto &[r, c] : m_c) {
            s += (s.empty() ? "" : " + ") + std::string("(") + c.re.get_str() + " + " + c.im.get_str() + "i)";
            if (r != 1) {
                s += "*sqrt(" + r.get_str() + ")";
            }
        }
        return s;
    }

private:
    void add(const mpz_class &r, const GaussQ &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, fresh] = m_c.emplace(r, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) {
                m_c.erase(it);
            }
        }
    }
    std::map<mpz_class, GaussQ> m_c;
};

/// m_g(tau) = (c tau + d)^2 / det g, exactly, for quadratic tau.
inline QuadNum exact_m_g(const Mat2Z &g, const QuadraticPoint &tau)
{
    auto [s, f] = detail::squarefree_split(tau.D);
    const mpz_class a = -s;
    // tau = (-B + i f sqrt a) / (2A)
    const mpq_class inv2a(mpz_class(1), 2 * tau.A);
    QuadNum e = QuadNum(GaussQ(mpq_class(2 * tau.A * g.d - g.c * tau.B) * inv2a)) +
                QuadNum::sqrt_of(a, GaussQ(mpq_class(0), mpq_class(g.c * f) * inv2a));
    return e * e * QuadNum(GaussQ(mpq_class(mpz_class(1), g.det())));
}

inline QuadNum exact_eval(const MPoly &p, const std::vector<QuadNum> &x)
{
    if (x.size() != p.nvars()) {
        throw DomainError("exact_eval: point does not match ring");
    }
    QuadNum acc;
    for (const auto &[e, c] : p.terms()) {
        QuadNum t{c};
        for (std::size_t k = 0; k < e.size(); ++k) {
            for (unsigned m = 0; m < e[k]; ++m) {
                t = t * x[k];
            }
        }
        acc += t;
    }
    return acc;
}

struct Example1Check {
    /// (m_g(tau), m_h(sigma)) in W, exactly.
    bool exact = false;
    /// J(tau, g tau, sigma, h sigma) in V, numerically.
    bool numeric = false;
    Real residual{Real(mpfr_prec_t{64})};
    std::string m_tau, m_sigma;
};

/// Exact m-condition against numeric membership of the special image; they must agree.
inline Example1Check example1_special_check(const Variety &w, const Mat2Z &g, const Mat2Z &h, const QuadraticPoint &tau,
                                            const QuadraticPoint &sigma, int prec_bits,
                                            const Example1Variety *prebuilt = nullptr)
{
    if (!g.primitive() || !h.primitive() || g.det() <= 0 || h.det() <= 0) {
        throw DomainError("example1_special_check: g and h must be primitive with positive determinant");
    }
    std::optional<Example1Variety> built;
    if (prebuilt == nullptr) {
        built = example1_build(g.det().get_si(), h.det().get_si(), w);
        prebuilt = &*built;
    }
    Example1Check out;
    const QuadNum mt = exact_m_g(g, tau), ms = exact_m_g(h, sigma);
    out.m_tau = mt.to_string();
    out.m_sigma = ms.to_string();
    out.exact = true;
    for (const MPoly &q : w.polys) {
        out.exact = out.exact && exact_eval(q, {mt, ms}).is_zero();
    }

    const HPComplex t = tau.value(prec_bits), s = sigma.value(prec_bits);
    std::vector<HPComplex> pt =
        special_image({t, g.act(t).tagged(prec_bits), s, h.act(s).tagged(prec_bits)}, prec_bits);
    const Real tol = default_tolerance(prec_bits);
    for (const MPoly &d : prebuilt->denominators) {
        auto [val, bound] = d.eval_with_bound(pt);
        if (abs(val) / (bound + Real(1L, bound.prec())) < tol) {
            throw DenominatorLocusError("example1_special_check: " + tau.to_string() + ", " + sigma.to_string() +
                                        " lies on the excluded denominator locus");
        }
    }
    MembershipResult mr = membership(prebuilt->v, pt, tol);
    out.numeric = mr.member;
    out.residual = mr.max_residual;
    if (out.numeric != out.exact) {
        throw ConsistencyError("example1_special_check: exact m-condition says " +
                               std::string(out.exact ? "member" : "non-member") + " but numeric residual is " +
                               out.residual.to_sci(3) + " for " + tau.to_string() + ", " + sigma.to_string() +
                               " (m values " + out.m_tau + " ; " + out.m_sigma + ")");
    }
    return out;
}

/// Random primitive quadratic point with A <= bound, avoiding the discriminants -3 and -4.
inline QuadraticPoint random_quadratic(Rng &rng, long bound)
{
    for (;;) {
        long a = rng.uniform_int(1, bound);
        long b = rng.uniform_int(-bound, bound);
        long c = rng.uniform_int(1, bound);
        long d = b * b - 4 * a * c;
        if (d >= 0 || std::gcd(std::gcd(a, std::labs(b)), c) != 1) {
            continue;
        }
        if (d == -3 || d == -4) {
            continue;
        }
        return qpoint(a, b, c);
    }
}

struct Example2Check {
    HPComplex q;
    long C = 0;
    Real q_residual{Real(mpfr_prec_t{64})};
    bool q_ok = false;
    bool w_member = false;
    Real w_residual{Real(mpfr_prec_t{64})};
    bool pass = false;
};

/// q = (j''(gamma sigma) - j''(sigma) r^2)^2 / (4 r^3 j'(sigma)^2), r = j'(gamma sigma) / j'(sigma).
inline HPComplex example2_q(const JValues &s, const JValues &gs)
{
    HPComplex r = gs.jp / s.jp;
    HPComplex top = gs.jpp - s.jpp * r * r;
    return top * top / (r * r * r * s.jp * s.jp * 4L);
}

/// |q - C^2| small and ((c tau + d)^2, C^2) in W, with C from gamma and (c, d) from g.
inline Example2Check example2_check(long n, const QuadraticPoint &sigma, const Variety &w, const QuadraticPoint &tau,
                                    const Mat2Z &g, const Mat2Z &gamma, int prec_bits)
{
    if (w.dim != 2) {
        throw DomainError("example2_check: W must lie in C^2");
    }
    if (g.det() != n || !g.primitive()) {
        throw DomainError("example2_check: g must be primitive with det " + std::to_string(n));
    }
    if (gamma.det() != 1) {
        throw DomainError("example2_check: gamma must lie in SL2(Z)");
    }
    const mpfr_prec_t p = working_prec(prec_bits);
    const Real tol = default_tolerance(prec_bits);
    const HPComplex s = sigma.value(prec_bits);
    JValues js = eval_J(s, prec_bits);
    JValues jg = eval_J(gamma.act(s).tagged(prec_bits), prec_bits);
    Real scale = abs(js.j) + abs(js.jpp) + Real(1L, p);
    if (abs(js.jp) < tol * scale) {
        throw PoleProximityError("example2_check: j'(sigma) vanishes; sigma lies on the orbit of i or rho");
    }
    Example2Check out;
    out.C = gamma.c.get_si();
    out.q = example2_q(js, jg);
    const HPComplex c2 = HPComplex::from_long(out.C * out.C, p).tagged(prec_bits);
    out.q_residual = relative_residual(out.q, c2);
    out.q_ok = out.q_residual < tol;
    const HPComplex e = g.cofactor(tau.value(prec_bits));
    MembershipResult mr = membership(w, {(e * e).tagged(prec_bits), c2}, tol);
    out.w_member = mr.member;
    out.w_residual = mr.max_residual;
    out.pass = out.q_ok && out.w_member;
    return out;
}

} // namespace jderiv

#endif
