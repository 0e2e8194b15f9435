// Command-line front end: compute named characters, run graded dimensions
// for user-supplied charge configurations, dump basis monomials, evaluate the
// dimension formulas, and run the verification suites.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 resource/construction error (non-positive-definite input, budget or
// precision exhaustion).

#include <CLI11.hpp>

#include <ivoa/basis_oracle.hpp>
#include <ivoa/characters.hpp>
#include <ivoa/json_io.hpp>
#include <ivoa/lattice.hpp>
#include <ivoa/modular.hpp>
#include <ivoa/qseries.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace ivoa;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Small input helpers
// ---------------------------------------------------------------------------

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

std::vector<Rat> parse_rat_csv(const std::string& s) {
    std::vector<Rat> out;
    for (const std::string& item : split_csv(s)) out.push_back(parse_rat(item));
    return out;
}

std::vector<long long> parse_int_csv(const std::string& s) {
    std::vector<long long> out;
    for (const std::string& item : split_csv(s)) {
        size_t pos = 0;
        long long v = std::stoll(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("malformed integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

GramLattice load_lattice(const std::string& spec) {
    if (spec.find('/') != std::string::npos || spec.size() > 5 ||
        std::filesystem::exists(spec)) {
        std::ifstream in(spec);
        if (!in) throw UnknownLattice("cannot open lattice file '" + spec + "'");
        json j;
        in >> j;
        return lattice_from_json(j);
    }
    return GramLattice::builtin(spec);
}

// Built-in characters cached across checks; returns a series of order >= n.
const QSeries& chr(const std::string& tag, int n) {
    static std::map<std::string, QSeries> cache;
    auto it = cache.find(tag);
    if (it == cache.end() || it->second.order() < n)
        it = cache.insert_or_assign(tag, builtin_character(tag, n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// Verification checks
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    bool has_witness = false;
    Rat exponent;  // first failing exponent (or expected value for phase checks)
    Rat value;     // offending coefficient (or observed value)
};

// A residual/difference series: zero means pass; otherwise the leading
// nonzero coefficient is the witness.
CheckResult residual_check(const std::string& name, const QSeries& res) {
    CheckResult r;
    r.name = name;
    if (res.is_zero()) {
        r.pass = true;
        return r;
    }
    r.pass = false;
    r.has_witness = true;
    r.exponent = res.offset();
    r.value = res.coeffs().front();
    return r;
}

CheckResult value_check(const std::string& name, const Rat& expected, const Rat& got) {
    CheckResult r;
    r.name = name;
    r.pass = expected == got;
    if (!r.pass) {
        r.has_witness = true;
        r.exponent = expected;
        r.value = got;
    }
    return r;
}

CheckResult bool_check(const std::string& name, bool pass) {
    CheckResult r;
    r.name = name;
    r.pass = pass;
    return r;
}

void run_identities(std::vector<CheckResult>& out, int n) {
    const int m = std::max(n, 6);
    const QSeries diff_vac = chr("v-e712", n).truncated(n) -
                             (chr("v-e7", n).truncated(n) * chr("vir-m35-m120", n).truncated(n) +
                              chr("v-e7-w2", n).truncated(n) * chr("vir-m35-15", n).truncated(n));
    out.push_back(residual_check("branching-vacuum", diff_vac));
    const QSeries diff_mod = chr("v-e712-a1", n).truncated(n) -
                             (chr("v-e7", n).truncated(n) * chr("vir-m35-34", n).truncated(n) +
                              chr("v-e7-w2", n).truncated(n) * chr("vir-m35-0", n).truncated(n));
    out.push_back(residual_check("branching-module", diff_mod));

    using Terms = std::vector<std::pair<int, Rat>>;
    const Terms want_vac{{19, Rat(1)}, {14, Rat(171)}, {9, Rat(247)}, {4, Rat(-57)}};
    const Terms want_mod{{15, Rat(57)}, {10, Rat(247)}, {5, Rat(-171)}, {0, Rat(1)}};
    try {
        out.push_back(bool_check("rr-poly-vacuum", rr_decompose(chr("v-e712", m), 19) == want_vac));
    } catch (const Error&) {
        out.push_back(bool_check("rr-poly-vacuum", false));
    }
    try {
        out.push_back(bool_check("rr-poly-module", rr_decompose(chr("v-e712-a1", m), 19) == want_mod));
    } catch (const Error&) {
        out.push_back(bool_check("rr-poly-module", false));
    }
}

void run_mde(std::vector<CheckResult>& out, int n) {
    const MDESpec small = mde_spec_from_mu(rat(11, 900));
    const MDESpec big = mde_spec_from_mu(rat(551, 900));
    for (const auto& [tag, spec] : std::vector<std::pair<std::string, MDESpec>>{
             {"rr-vac", small}, {"rr-mod", small}, {"v-e712", big}, {"v-e712-a1", big}}) {
        const QSeries res = mde_residual(chr(tag, n + 2).truncated(n + 2), spec, n);
        out.push_back(residual_check("mde-" + tag, res));
    }
}

void run_kz(std::vector<CheckResult>& out, int n) {
    const QSeries eta = dedekind_eta(n + 2);
    const QSeries g1 = pow_rational(eta, rat(38, 5)) * chr("v-e712", n + 2).truncated(n + 2);
    out.push_back(residual_check("kz-v-e712", kz_residual(g1, rat(19, 5), n)));
    const QSeries g2 = pow_rational(eta, rat(2, 5)) * chr("rr-vac", n + 2).truncated(n + 2);
    out.push_back(residual_check("kz-rr-vac", kz_residual(g2, rat(1, 5), n)));
}

void run_modular(std::vector<CheckResult>& out, int n, double tol) {
    const int m = std::max(n, 20);  // series order floor keeping tails below tol

    const TransformMatrices e7 = transform_matrices_v_e7_pair();
    const TransformMatrices mid = transform_matrices_v_e712_pair();
    const TransformMatrices vir = transform_matrices_vir_m35();

    const std::vector<std::string> e7_tags{"v-e7", "v-e7-w2"};
    const std::vector<std::string> mid_tags{"v-e712", "v-e712-a1"};
    const std::vector<std::string> vir_tags{"vir-m35-0", "vir-m35-34", "vir-m35-15", "vir-m35-m120"};

    for (size_t i = 0; i < e7_tags.size(); ++i)
        out.push_back(value_check("t-phase-" + e7_tags[i], e7.t_phases[i], t_phase(chr(e7_tags[i], m))));
    for (size_t i = 0; i < mid_tags.size(); ++i)
        out.push_back(
            value_check("t-phase-" + mid_tags[i], mid.t_phases[i], t_phase(chr(mid_tags[i], m))));
    for (size_t i = 0; i < vir_tags.size(); ++i)
        out.push_back(
            value_check("t-phase-" + vir_tags[i], vir.t_phases[i], t_phase(chr(vir_tags[i], m))));

    auto family = [&](const std::vector<std::string>& tags) {
        std::vector<QSeries> fam;
        for (const std::string& t : tags) fam.push_back(chr(t, m));
        return fam;
    };
    for (double t : {1.0, 2.0}) {
        const std::string suffix = t == 1.0 ? "-t1" : "-t2";
        out.push_back(bool_check("s-v-e7-pair" + suffix,
                                 s_check_numeric(family(e7_tags), e7.s_matrix, t, m, tol)));
        out.push_back(bool_check("s-v-e712-pair" + suffix,
                                 s_check_numeric(family(mid_tags), mid.s_matrix, t, m, tol)));
        out.push_back(bool_check("s-vir-m35" + suffix,
                                 s_check_numeric(family(vir_tags), vir.s_matrix, t, m, tol)));
    }
}

void run_oracle(std::vector<CheckResult>& out, int n, long long budget) {
    struct Target {
        std::string name;
        std::string lattice;
        int r, s;
        std::vector<Rat> shift;
        int cap;
    };
    const std::vector<Target> targets{
        {"oracle-a1-vac", "A1", 1, 0, {Rat(0)}, 12},
        {"oracle-a1-mod", "A1", 1, 0, {rat(1, 2)}, 12},
        {"oracle-e7-bosons", "E7", 0, 7, std::vector<Rat>(7, Rat(0)), 6},
        {"oracle-e8-mixed", "E8", 1, 7, std::vector<Rat>(8, Rat(0)), 4},
    };
    for (const Target& t : targets) {
        const int order = std::min(n, t.cap);
        const ChargeConfig cfg(GramLattice::builtin(t.lattice), t.r, t.s, t.shift);
        const QSeries diff = oracle_graded_dimension(cfg, order, budget) - graded_dimension(cfg, order);
        out.push_back(residual_check(t.name, diff));
    }
}

int report(const std::vector<CheckResult>& results, const std::string& format) {
    bool all_pass = true;
    if (format == "json") {
        json arr = json::array();
        for (const CheckResult& r : results) {
            json item{{"check", r.name}, {"status", r.pass ? "pass" : "fail"}};
            if (!r.pass && r.has_witness)
                item["first_failure"] = {{"exponent", rat_str(r.exponent)}, {"value", rat_str(r.value)}};
            arr.push_back(item);
            all_pass = all_pass && r.pass;
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const CheckResult& r : results) {
            if (r.pass) {
                std::cout << "PASS  " << r.name << "\n";
            } else if (r.has_witness) {
                std::cout << "FAIL  " << r.name << "  first failure at q^(" << rat_str(r.exponent)
                          << "): " << rat_str(r.value) << "\n";
            } else {
                std::cout << "FAIL  " << r.name << "\n";
            }
            all_pass = all_pass && r.pass;
        }
    }
    return all_pass ? 0 : 1;
}

void print_series(const QSeries& f, const std::string& format) {
    if (format == "json")
        std::cout << qseries_to_json(f).dump() << "\n";
    else
        std::cout << to_text(f) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact graded dimensions, characters, and verification suites"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));

    // character <name>
    auto* c_char = app.add_subcommand("character", "print a built-in character");
    std::string char_name;
    int char_order = 8;
    c_char->add_option("name", char_name, "character tag")->required();
    c_char->add_option("--order", char_order, "truncation order")->check(CLI::NonNegativeNumber);

    // graded-dim
    auto* c_gd = app.add_subcommand("graded-dim", "graded dimension of a charge configuration");
    std::string gd_lattice;
    int gd_r = 0, gd_s = 0, gd_order = 8;
    std::string gd_shift;
    bool gd_chi_prime = false;
    c_gd->add_option("--lattice", gd_lattice, "builtin name (A1, E7, E8) or JSON file")->required();
    c_gd->add_option("--r", gd_r, "number of restricted coordinates");
    c_gd->add_option("--s", gd_s, "number of free coordinates");
    c_gd->add_option("--shift", gd_shift, "comma-separated rational shift vector");
    c_gd->add_flag("--chi-prime", gd_chi_prime, "rebase by q^(-Q(shift)/2)");
    c_gd->add_option("--order", gd_order, "truncation order")->check(CLI::NonNegativeNumber);

    // verify [suite]
    auto* c_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    int verify_order = 20;
    double tol = 1e-6;
    long long verify_budget = 10'000'000;
    c_verify->add_option("suite", suite, "identities, mde, kz, modular, oracle, or all")
        ->check(CLI::IsMember({"identities", "mde", "kz", "modular", "oracle", "all"}));
    c_verify->add_option("--order", verify_order, "verification order")->check(CLI::NonNegativeNumber);
    c_verify->add_option("--tol", tol, "numeric tolerance for S-matrix checks");
    c_verify->add_option("--budget", verify_budget, "oracle enumeration budget");

    // enumerate-basis
    auto* c_enum = app.add_subcommand("enumerate-basis", "dump basis monomials for a fixed charge");
    std::string eb_lattice, eb_shift, eb_charge;
    int eb_r = 0, eb_s = 0, eb_order = 4;
    long long eb_budget = 10'000'000;
    c_enum->add_option("--lattice", eb_lattice, "builtin name (A1, E7, E8) or JSON file")->required();
    c_enum->add_option("--r", eb_r, "number of restricted coordinates");
    c_enum->add_option("--s", eb_s, "number of free coordinates");
    c_enum->add_option("--shift", eb_shift, "comma-separated rational shift vector");
    c_enum->add_option("--charge", eb_charge, "comma-separated integer charge (length r+s)")->required();
    c_enum->add_option("--order", eb_order, "weight window above the charge minimum")
        ->check(CLI::NonNegativeNumber);
    c_enum->add_option("--budget", eb_budget, "enumeration budget");

    // deligne
    auto* c_del = app.add_subcommand("deligne", "dimension-formula table and evaluations");
    std::string del_hv, del_mu;
    c_del->add_option("--hv", del_hv, "evaluate the dimension formulas at this rational");
    c_del->add_option("--mu", del_mu, "recover the central charge from this rational");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_char) {
            QSeries f = QSeries::zero(0);
            try {
                f = builtin_character(char_name, char_order);
            } catch (const UnknownTag&) {
                std::cerr << "unknown character '" << char_name << "'; valid names:";
                for (const std::string& t : character_tags()) std::cerr << " " << t;
                std::cerr << "\n";
                return 2;
            }
            print_series(f, format);
            return 0;
        }

        if (*c_gd) {
            const GramLattice lat = load_lattice(gd_lattice);
            std::vector<Rat> shift(static_cast<size_t>(lat.rank()), Rat(0));
            if (!gd_shift.empty()) shift = parse_rat_csv(gd_shift);
            const ChargeConfig cfg(lat, gd_r, gd_s, shift);
            const QSeries f =
                gd_chi_prime ? chi_prime(cfg, gd_order) : graded_dimension(cfg, gd_order);
            print_series(f, format);
            return 0;
        }

        if (*c_verify) {
            std::vector<CheckResult> results;
            if (suite == "identities" || suite == "all") run_identities(results, verify_order);
            if (suite == "mde" || suite == "all") run_mde(results, verify_order);
            if (suite == "kz" || suite == "all") run_kz(results, verify_order);
            if (suite == "modular" || suite == "all") run_modular(results, verify_order, tol);
            if (suite == "oracle" || suite == "all") run_oracle(results, verify_order, verify_budget);
            return report(results, format);
        }

        if (*c_enum) {
            const GramLattice lat = load_lattice(eb_lattice);
            std::vector<Rat> shift(static_cast<size_t>(lat.rank()), Rat(0));
            if (!eb_shift.empty()) shift = parse_rat_csv(eb_shift);
            const ChargeConfig cfg(lat, eb_r, eb_s, shift);
            const std::vector<long long> charge = parse_int_csv(eb_charge);
            for (const BasisMonomial& mono : enumerate_basis(cfg, charge, eb_order, eb_budget)) {
                json line{{"charge", mono.charge},
                          {"modes", mono.modes},
                          {"partitions", mono.partitions},
                          {"weight", rat_str(mono.weight)}};
                std::cout << line.dump() << "\n";
            }
            return 0;
        }

        if (*c_del) {
            if (!del_hv.empty()) {
                const Rat hv = parse_rat(del_hv);
                const Rat d1 = deligne_dim(hv);
                const Rat d2 = deligne_dim2(hv);
                if (format == "json")
                    std::cout << json{{"hv", rat_str(hv)}, {"dim", rat_str(d1)}, {"dim2", rat_str(d2)}}
                                     .dump()
                              << "\n";
                else
                    std::cout << "dim = " << rat_str(d1) << ", dim2 = " << rat_str(d2) << "\n";
                return 0;
            }
            if (!del_mu.empty()) {
                const Rat mu = parse_rat(del_mu);
                const Rat c = mu_to_c(mu);
                if (format == "json")
                    std::cout << json{{"mu", rat_str(mu)}, {"c", rat_str(c)}}.dump() << "\n";
                else
                    std::cout << "c = " << rat_str(c) << "\n";
                return 0;
            }
            const std::vector<DeligneRow> rows = deligne_table();
            if (format == "json") {
                json arr = json::array();
                for (const DeligneRow& r : rows)
                    arr.push_back(json{{"hv", rat_str(r.hv)},
                                       {"dim", rat_str(r.dim)},
                                       {"dim2", rat_str(deligne_dim2(r.hv))},
                                       {"c", rat_str(r.c)},
                                       {"h", rat_str(r.h)},
                                       {"mu", rat_str(r.mu)}});
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const DeligneRow& r : rows)
                    std::cout << "hv=" << rat_str(r.hv) << " dim=" << rat_str(r.dim)
                              << " dim2=" << rat_str(deligne_dim2(r.hv)) << " c=" << rat_str(r.c)
                              << " h=" << rat_str(r.h) << " mu=" << rat_str(r.mu) << "\n";
            }
            return 0;
        }
    } catch (const NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ScaleExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientPrecision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientOrder& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {  // domain violations, unknown lattices, mismatches
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
