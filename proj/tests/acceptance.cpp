// Acceptance driver: `acceptance <k>` runs criterion k and prints one PASS/FAIL line.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "jderiv/suites.hpp"

using namespace jderiv;

namespace
{

struct Outcome {
    bool pass = false;
    std::string detail;
};

double max_log2(const SuiteReport &r, const std::string &check = {})
{
    double m = -INFINITY;
    for (const SuiteRecord &x : r.records) {
        if (check.empty() || x.check == check) {
            m = std::max(m, x.residual_log2);
        }
    }
    return m;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

void print_report(const SuiteReport &r)
{
    std::istringstream is(r.text());
    std::string line;
    while (std::getline(is, line)) {
        std::cout << "  " << line << "\n";
    }
}

Outcome timed_suite(const std::function<SuiteReport()> &run, double limit_s, const std::string &what)
{
    auto t0 = std::chrono::steady_clock::now();
    SuiteReport r = run();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    print_report(r);
    const bool fast = limit_s <= 0 || s < limit_s;
    std::string d = what + ": " + r.summary() + ", worst log2 residual " + fmt(max_log2(r)) + ", " + fmt(s) + " s";
    if (limit_s > 0) {
        d += " (limit " + fmt(limit_s) + " s)";
    }
    return {r.ok() && fast, d};
}

Outcome criterion_5()
{
    SuiteReport r = suite_mu(5, 256, 25, -100);
    print_report(r);
    std::size_t disp = 0, cov = 0, lin = 0, n = 0;
    for (const SuiteRecord &x : r.records) {
        if (x.check == "mu_displayed") {
            ++n;
            disp += x.pass;
        } else if (x.check == "mu_covariant") {
            cov += x.pass;
        } else {
            lin += x.pass;
        }
    }
    const bool pass = disp == n && lin == n;
    return {pass, "displayed relation " + std::to_string(disp) + "/" + std::to_string(n) + " below 2^-100 (worst " +
                      fmt(max_log2(r, "mu_displayed")) + "); linearity in c " + std::to_string(lin) + "/" +
                      std::to_string(n) + "; covariant relation " + std::to_string(cov) + "/" + std::to_string(n) +
                      " (worst " + fmt(max_log2(r, "mu_covariant")) + ")"};
}

Outcome criterion_11()
{
    std::string why;
    bool ok = true;
    auto same = [&](const std::string &name, const std::function<SuiteReport()> &run) {
        std::string a = run().text(), b = run().text();
        const bool eq = a == b;
        ok = ok && eq;
        why += name + (eq ? " identical (" + hex_digest(a) + ")" : " DIFFERS") + "; ";
    };
    same("masser", [] { return suite_masser(11, 256, 30); });
    same("example1", [] { return suite_example1(11, 256, 4, 4); });
    // Cold run computes and writes Phi_N; the warm run installs a fresh cache object on the
    // same directory, so every Phi_N is read back from disk.
    std::filesystem::path dir = std::filesystem::temp_directory_path() / "jderiv_acceptance_cache";
    std::filesystem::remove_all(dir);
    use_phi_cache(dir);
    const std::string cold = suite_gl2(11, 256, {2, 3, 5}, 3).text();
    use_phi_cache(dir);
    const std::string warm = suite_gl2(11, 256, {2, 3, 5}, 3).text();
    ok = ok && cold == warm;
    why += "gl2 cold/warm cache " + std::string(cold == warm ? "identical (" + hex_digest(cold) + ")" : "DIFFERS") + "; ";
    const bool cached = std::filesystem::exists(PhiCache(dir).file_for(5));
    ok = ok && cached;
    why += cached ? "cache file written" : "cache file missing";
    std::filesystem::remove_all(dir);
    return {ok, why};
}

} // namespace

int main(int argc, char **argv)
{
    if (argc != 2) {
        std::cerr << "usage: acceptance <criterion 1-11>\n";
        return 2;
    }
    const int k = std::atoi(argv[1]);
    static const std::map<int, std::function<Outcome()>> criteria{
        {1, [] { return timed_suite([] { return suite_masser(1, 256, 100); }, 60, "Masser identity"); }},
        {2, [] { return timed_suite([] { return suite_weight_laws(2, 256, 100, 50); }, 120, "weight laws"); }},
        {3, [] { return timed_suite([] { return suite_modpoly(3, 256, 10, 20); }, 600, "modular polynomials"); }},
        {4, [] { return timed_suite([] { return suite_gl2(4, 256, {2, 3, 5}, 10); }, 0, "GL2+(Q) law"); }},
        {5, criterion_5},
        {6, [] { return timed_suite([] { return suite_class_groups(512, -2000); }, 0, "class groups"); }},
        {7, [] { return timed_suite([] { return suite_galois(768); }, 0, "Galois pairing"); }},
        {8, [] { return timed_suite([] { return suite_transcendence(768); }, 0, "transcendence evidence"); }},
        {9, [] { return timed_suite([] { return suite_example1(9, 256, 10, 10); }, 0, "Example 1"); }},
        {10, [] { return timed_suite([] { return suite_adjacency(10, 256, 20, 4); }, 0, "adjacency invariance"); }},
        {11, criterion_11},
    };
    auto it = criteria.find(k);
    if (it == criteria.end()) {
        std::cerr << "unknown criterion " << argv[1] << "\n";
        return 2;
    }
    Outcome o;
    try {
        o = it->second();
    } catch (const std::exception &e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.detail << std::endl;
    return o.pass ? 0 : 1;
}
