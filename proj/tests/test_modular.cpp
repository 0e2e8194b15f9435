#include <catch2/catch_amalgamated.hpp>

#include <ivoa/modular.hpp>

#include <utility>
#include <vector>

using namespace ivoa;

namespace {

// Shared order-30 characters (the rank-8 expansions dominate test time).
const QSeries& ve712() {
    static const QSeries s = builtin_character("v-e712", 30);
    return s;
}
const QSeries& ve712a1() {
    static const QSeries s = builtin_character("v-e712-a1", 30);
    return s;
}
const QSeries& ve7() {
    static const QSeries s = builtin_character("v-e7", 30);
    return s;
}
const QSeries& ve7w2() {
    static const QSeries s = builtin_character("v-e7-w2", 30);
    return s;
}

}  // namespace

TEST_CASE("modular differential equation residuals", "[modular]") {
    SECTION("constants solve the trivial equation") {
        const MDESpec trivial{Rat(0), Rat(0)};
        REQUIRE(mde_residual(QSeries::one(12), trivial, 12).is_zero());
    }

    SECTION("spec from mu uses gamma = -180 mu") {
        const MDESpec a = mde_spec_from_mu(rat(11, 900));
        REQUIRE(a.e4_coefficient == rat(-11, 5));
        const MDESpec b = mde_spec_from_mu(rat(551, 900));
        REQUIRE(b.e4_coefficient == rat(-551, 5));
    }

    SECTION("the Rogers-Ramanujan pair solves the mu = 11/900 equation") {
        const MDESpec spec = mde_spec_from_mu(rat(11, 900));
        REQUIRE(mde_residual(builtin_character("rr-vac", 22), spec, 20).is_zero());
        REQUIRE(mde_residual(builtin_character("rr-mod", 22), spec, 20).is_zero());
    }

    SECTION("the rank-8 intermediate pair solves the mu = 551/900 equation") {
        const MDESpec spec = mde_spec_from_mu(rat(551, 900));
        REQUIRE(mde_residual(ve712().truncated(22), spec, 20).is_zero());
        REQUIRE(mde_residual(ve712a1().truncated(22), spec, 20).is_zero());
        // Non-solutions leave a nonzero residual.
        REQUIRE_FALSE(mde_residual(ve7().truncated(22), spec, 20).is_zero());
    }

    SECTION("indicial roots kill the leading coefficient of pure powers") {
        const MDESpec big = mde_spec_from_mu(rat(551, 900));
        const MDESpec small = mde_spec_from_mu(rat(11, 900));
        for (const auto& [alpha, spec] : std::vector<std::pair<Rat, MDESpec>>{
                 {rat(-19, 60), big}, {rat(29, 60), big}, {rat(-1, 60), small}, {rat(11, 60), small}}) {
            const QSeries res = mde_residual(QSeries::monomial(alpha, 6), spec, 4);
            REQUIRE(res.coeff_at(alpha) == 0);
            REQUIRE_FALSE(res.is_zero());
        }
        // A non-root survives in the leading slot.
        const QSeries res = mde_residual(QSeries::monomial(rat(1, 7), 6), big, 4);
        REQUIRE(res.coeff_at(rat(1, 7)) != 0);
    }

    SECTION("the residual is linear in the series argument") {
        std::vector<Rat> cs;
        for (int i = 0; i <= 21; ++i) cs.push_back(rat(i * i + 1, i + 2));
        const QSeries f(rat(1, 7), cs);  // leading exponent off the indicial roots
        const QSeries g = theta_derivative(f);
        const MDESpec spec = mde_spec_from_mu(rat(551, 900));
        const QSeries lhs = mde_residual(Rat(2) * f + Rat(3) * g, spec, 20);
        const QSeries rhs = Rat(2) * mde_residual(f, spec, 20) + Rat(3) * mde_residual(g, spec, 20);
        REQUIRE(equal_to_order(lhs, rhs, 20));
    }
}

TEST_CASE("Kaneko-Zagier residuals", "[modular]") {
    SECTION("constants solve the k = 0 equation") {
        REQUIRE(kz_residual(QSeries::one(12), Rat(0), 12).is_zero());
    }

    SECTION("eta^(38/5) times the rank-8 character solves k = 19/5") {
        const QSeries g = pow_rational(dedekind_eta(24), rat(38, 5)) * ve712().truncated(24);
        REQUIRE(g.offset() == 0);
        REQUIRE(g.coeff(0) == 1);
        REQUIRE(g.coeff(1) == rat(912, 5));
        REQUIRE(g.coeff(2) == rat(35112, 25));
        REQUIRE(g.coeff(3) == rat(514368, 125));
        REQUIRE(kz_residual(g, rat(19, 5), 20).is_zero());
        // Wrong exponent leaves a nonzero residual.
        REQUIRE_FALSE(kz_residual(g, Rat(1), 20).is_zero());
        // mu = k(k+2)/36 ties this instance back to the second-order equation.
        const Rat k = rat(19, 5);
        REQUIRE(k * (k + 2) / 36 == rat(551, 900));
    }

    SECTION("eta^(2/5) times the Rogers-Ramanujan character solves k = 1/5") {
        const QSeries g = pow_rational(dedekind_eta(24), rat(2, 5)) * builtin_character("rr-vac", 24);
        REQUIRE(g.offset() == 0);
        REQUIRE(kz_residual(g, rat(1, 5), 20).is_zero());
        const Rat k = rat(1, 5);
        REQUIRE(k * (k + 2) / 36 == rat(11, 900));
    }

    SECTION("the weight-2 term requires the unit-normalized quasimodular form") {
        // Substituting the series-normalized E_2 = -1/12 + 2 sum sigma_1 q^n
        // into the same shape does not annihilate the solution.
        const QSeries g = pow_rational(dedekind_eta(24), rat(38, 5)) * ve712().truncated(24);
        const Rat k = rat(19, 5);
        const QSeries e2 = eisenstein(2, 21);
        const QSeries t1 = theta_derivative(g);
        const QSeries t2 = theta_derivative(t1);
        const QSeries wrong =
            t2 - ((k + 1) / 6) * (e2 * t1) + (k * (k + 1) / 12) * (theta_derivative(e2) * g);
        REQUIRE_FALSE(wrong.is_zero());
    }
}

TEST_CASE("T-phases", "[modular]") {
    SECTION("leading exponents already in (-1, 1] are kept") {
        REQUIRE(t_phase(QSeries::monomial(Rat(1), 2)) == 1);
        REQUIRE(t_phase(QSeries::monomial(rat(-3, 4), 2)) == rat(-3, 4));
        REQUIRE(t_phase(ve712()) == rat(-19, 60));
        REQUIRE(t_phase(ve712a1()) == rat(29, 60));
    }

    SECTION("exponents outside (-1, 1] reduce mod 1 into (-1/2, 1/2]") {
        REQUIRE(t_phase(QSeries::monomial(rat(7, 3), 2)) == rat(1, 3));
        REQUIRE(t_phase(QSeries::monomial(rat(11, 4), 2)) == rat(-1, 4));
        REQUIRE(t_phase(QSeries::monomial(rat(-3, 2), 2)) == rat(1, 2));
        REQUIRE(t_phase(QSeries::monomial(Rat(-1), 2)) == 0);
        REQUIRE(t_phase(QSeries::monomial(rat(-19, 60) + 2, 2)) == rat(-19, 60));
    }

    SECTION("catalogue phases match the transform tables") {
        const TransformMatrices e7 = transform_matrices_v_e7_pair();
        REQUIRE(t_phase(ve7()) == e7.t_phases[0]);
        REQUIRE(t_phase(ve7w2()) == e7.t_phases[1]);
        const TransformMatrices mid = transform_matrices_v_e712_pair();
        REQUIRE(mid.t_phases == std::vector<Rat>{rat(-19, 60), rat(29, 60)});
        const TransformMatrices vir = transform_matrices_vir_m35();
        const char* tags[] = {"vir-m35-0", "vir-m35-34", "vir-m35-15", "vir-m35-m120"};
        for (int i = 0; i < 4; ++i) REQUIRE(t_phase(builtin_character(tags[i], 8)) == vir.t_phases[i]);
        REQUIRE(t_phase(builtin_character("v-e8", 6)) == rat(-1, 3));
    }

    SECTION("phases add under multiplication, mod 1") {
        const QSeries prod = ve7().truncated(10) * ve7w2().truncated(10);
        REQUIRE(t_phase(prod) == rat(1, 6));  // -7/24 + 11/24
        const QSeries rr = builtin_character("rr-vac", 10) * builtin_character("rr-mod", 10);
        REQUIRE(t_phase(rr) == rat(1, 6));  // -1/60 + 11/60
    }

    SECTION("the zero series has no phase") {
        REQUIRE_THROWS_AS(t_phase(QSeries::zero(5)), ZeroSeries);
    }
}

TEST_CASE("numeric S-matrix checks", "[modular]") {
    SECTION("rank-7 pair") {
        const std::vector<QSeries> fam{ve7(), ve7w2()};
        REQUIRE(s_check_numeric(fam, s_matrix_v_e7_pair(), 1.0, 30, 1e-8));
        REQUIRE(s_check_numeric(fam, s_matrix_v_e7_pair(), 2.0, 30, 1e-8));
    }

    SECTION("rank-8 intermediate pair") {
        const std::vector<QSeries> fam{ve712(), ve712a1()};
        REQUIRE(s_check_numeric(fam, s_matrix_v_e712_pair(), 1.0, 30, 1e-8));
        REQUIRE(s_check_numeric(fam, s_matrix_v_e712_pair(), 2.0, 30, 1e-8));
    }

    SECTION("Virasoro quadruple") {
        std::vector<QSeries> fam;
        for (const char* tag : {"vir-m35-0", "vir-m35-34", "vir-m35-15", "vir-m35-m120"})
            fam.push_back(builtin_character(tag, 60));
        REQUIRE(s_check_numeric(fam, s_matrix_vir_m35(), 1.0, 60, 1e-8));
        REQUIRE(s_check_numeric(fam, s_matrix_vir_m35(), 2.0, 60, 1e-8));
    }

    SECTION("identity matrix fixes any series at t = 1 and self-dual series at any t") {
        const std::vector<std::vector<double>> one{{1.0}};
        REQUIRE(s_check_numeric({builtin_character("rr-mod", 40)}, one, 1.0, 40, 1e-8));
        REQUIRE(s_check_numeric({builtin_character("v-e8", 20)}, one, 2.0, 20, 1e-8));
    }

    SECTION("a wrong matrix is rejected") {
        const std::vector<QSeries> fam{ve7(), ve7w2()};
        const std::vector<std::vector<double>> eye{{1.0, 0.0}, {0.0, 1.0}};
        REQUIRE_FALSE(s_check_numeric(fam, eye, 2.0, 30, 1e-6));
    }

    SECTION("insufficient truncation raises instead of guessing") {
        const std::vector<QSeries> fam{ve712(), ve712a1()};
        REQUIRE_THROWS_AS(s_check_numeric(fam, s_matrix_v_e712_pair(), 8.0, 5, 1e-6),
                          InsufficientPrecision);
    }

    SECTION("argument validation") {
        const std::vector<QSeries> fam{ve7(), ve7w2()};
        REQUIRE_THROWS_AS(s_check_numeric(fam, {{1.0}}, 1.0, 20, 1e-6), DimensionMismatch);
        REQUIRE_THROWS_AS(s_check_numeric(fam, s_matrix_v_e7_pair(), 0.0, 20, 1e-6), DomainViolation);
        REQUIRE_THROWS_AS(s_check_numeric(fam, s_matrix_v_e7_pair(), 1.0, 20, -1.0), DomainViolation);
    }
}

TEST_CASE("Rogers-Ramanujan polynomial decomposition", "[modular]") {
    using Terms = std::vector<std::pair<int, Rat>>;

    SECTION("single generators decompose as themselves") {
        REQUIRE(rr_decompose(builtin_character("rr-vac", 10), 1) == Terms{{1, Rat(1)}});
        REQUIRE(rr_decompose(builtin_character("rr-mod", 10), 1) == Terms{{0, Rat(1)}});
        REQUIRE(rr_decompose(QSeries::one(10), 0) == Terms{{0, Rat(1)}});
    }

    SECTION("the rank-8 vacuum character is a degree-19 polynomial") {
        const Terms got = rr_decompose(ve712().truncated(25), 19);
        REQUIRE(got == Terms{{19, Rat(1)}, {14, Rat(171)}, {9, Rat(247)}, {4, Rat(-57)}});
    }

    SECTION("the rank-8 module character is a degree-19 polynomial") {
        const Terms got = rr_decompose(ve712a1().truncated(25), 19);
        REQUIRE(got == Terms{{15, Rat(57)}, {10, Rat(247)}, {5, Rat(-171)}, {0, Rat(1)}});
    }

    SECTION("series off every admissible exponent class are rejected") {
        REQUIRE_THROWS_AS(rr_decompose(builtin_character("v-e8", 8), 19), NoAdmissibleMonomials);
    }

    SECTION("series outside the span report the first failing coefficient") {
        const QSeries f = ve712().truncated(25) + Rat(7) * QSeries::monomial(rat(-19, 60) + 5, 25);
        REQUIRE_THROWS_AS(rr_decompose(f, 19), InconsistentSystem);
        try {
            rr_decompose(f, 19);
        } catch (const InconsistentSystem& e) {
            REQUIRE(std::string(e.what()).find("281/60") != std::string::npos);
        }
    }

    SECTION("the zero series cannot be decomposed") {
        REQUIRE_THROWS_AS(rr_decompose(QSeries::zero(10), 3), ZeroSeries);
    }
}

TEST_CASE("dimension formulas", "[modular]") {
    SECTION("frozen values along the series") {
        REQUIRE(deligne_dim(rat(3, 2)) == 1);
        REQUIRE(deligne_dim(Rat(18)) == 133);
        REQUIRE(deligne_dim(Rat(24)) == 190);
        REQUIRE(deligne_dim(Rat(30)) == 248);
        REQUIRE(deligne_dim2(Rat(24)) == 15504);
    }

    SECTION("the embedded table row data is consistent") {
        const std::vector<DeligneRow> rows = deligne_table();
        REQUIRE(rows.size() == 10);
        const long long dims[] = {1, 3, 8, 14, 28, 52, 78, 133, 190, 248};
        const long long dim2s[] = {1, 5, 27, 77, 300, 1053, 2430, 7371, 15504, 27000};
        for (size_t i = 0; i < rows.size(); ++i) {
            const DeligneRow& r = rows[i];
            REQUIRE(r.dim == deligne_dim(r.hv));
            REQUIRE(r.dim == Rat(static_cast<long>(dims[i])));
            REQUIRE(deligne_dim2(r.hv) == Rat(static_cast<long>(dim2s[i])));
            REQUIRE(r.c == r.dim / (Rat(1) + r.hv));
            REQUIRE(r.h == r.hv / (r.hv + 6));
            REQUIRE(mu_to_c(r.mu) == r.c);
        }
        // The hole in the series sits between the rank-7 and rank-8 rows.
        REQUIRE(rows[8].hv == 24);
        REQUIRE(rows[8].c == rat(38, 5));
        REQUIRE(rows[8].h == rat(4, 5));
        REQUIRE(rows[8].mu == rat(551, 900));
        REQUIRE(rows[0].c == rat(2, 5));
        REQUIRE(rows[0].mu == rat(11, 900));
    }

    SECTION("central charge from mu") {
        REQUIRE(mu_to_c(rat(551, 900)) == rat(38, 5));
        REQUIRE(mu_to_c(rat(11, 900)) == rat(2, 5));
        REQUIRE(mu_to_c(Rat(0)) == 0);
    }

    SECTION("poles and non-square discriminants are reported") {
        REQUIRE_THROWS_AS(deligne_dim(Rat(-6)), PoleAtInput);
        REQUIRE_THROWS_AS(deligne_dim2(Rat(-6)), PoleAtInput);
        REQUIRE_THROWS_AS(deligne_dim2(Rat(-12)), PoleAtInput);
        REQUIRE_THROWS_AS(mu_to_c(rat(1, 7)), NonSquareDiscriminant);
        REQUIRE_THROWS_AS(mu_to_c(rat(-1, 18)), NonSquareDiscriminant);
    }
}
