#include <cmath>
#include <set>

#include "abesov/harness.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;

TEST_CASE("registry") {
    const auto& reg = check_registry();
    CHECK(reg.size() == 27);
    std::set<std::string> ids;
    for (const auto& c : reg) {
        ids.insert(c.id);
        CHECK_FALSE(c.paper_ref.empty());
        CHECK_FALSE(c.quote.empty());
    }
    CHECK(ids.size() == reg.size());
    CHECK(check_info("moment").kind == CheckKind::exact_inequality);
    CHECK(check_info("cos_estimate").kind == CheckKind::grid_verification);
    CHECK(check_info("lifting_pos").one_sided);
    CHECK_THROWS_AS(check_info("no_such_check"), Error);
}

TEST_CASE("parse_suite") {
    CHECK(parse_suite("all").size() == 27);
    auto two = parse_suite("embed_q, cos_estimate");
    REQUIRE(two.size() == 2);
    CHECK(two[0] == "embed_q");
    CHECK(two[1] == "cos_estimate");
    CHECK_THROWS_AS(parse_suite("embed_q,bogus"), Error);
}

// mpmath values from tests/oracles/make_oracles.py
TEST_CASE("explicit constants") {
    CHECK(composition_constant(0.5, 1) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(composition_constant(2.2, 3) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(composition_constant(Complex(0.5, 0.5), 1) == doctest::Approx(2.509178478658056782).epsilon(1e-12));

    CHECK(moment_constant(0.5, 1, 1.0) == doctest::Approx(1.8006326323142121391).epsilon(1e-12));
    CHECK(moment_constant(1.5, 2, 2.0) == doctest::Approx(8.3167658798258784843).epsilon(1e-12));
    CHECK(moment_constant(0.25, 2, 1.5) == doctest::Approx(7.5464662540615284982).epsilon(1e-12));

    CHECK(cos_constant(0.3) == 1.0);
    CHECK(cos_constant(0.5) == 1.0);
    CHECK(cos_constant(0.75) == doctest::Approx(1.75).epsilon(1e-14));

    struct Row {
        double s, a, q, want;
    };
    for (Row r : {Row{0.5, 0.5, 1.0, 6.2831853071795869064}, Row{0.5, 0.5, kInf, 10.567016002364246683},
                  Row{0.5, 0.5, 0.5, 143.57081302866750452}, Row{0.5, 0.5, 2.0, 8.1482832355525424345},
                  Row{0.25, 0.75, 1.0, 20.547518399643795048}, Row{0.25, 0.75, kInf, 24.057749053123025928},
                  Row{0.25, 0.75, 0.5, 530.32885341512135273}, Row{0.25, 0.75, 2.0, 22.233466696020628968}}) {
        CAPTURE(r.s);
        CAPTURE(r.a);
        CAPTURE(r.q);
        CHECK(ellq_constant(r.s, r.a, r.q) == doctest::Approx(r.want).epsilon(1e-8));
    }
}

TEST_CASE("Littlewood-Paley norm of a plane wave") {
    Operator t = Operator::torus_laplacian(64);
    Block w(64, 1);
    for (int i = 0; i < 64; ++i) w(i, 0) = std::exp(Complex(0, 2 * kPi * 3 * i / 64.0));
    // sqrt of the eigenvalue is 128 sin(3 pi / 64) = 18.8, shell j = 4
    for (double sigma : {0.5, 1.0})
        for (double q : {1.0, 2.0, kInf})
            CHECK(littlewood_paley_norm(t, w, sigma, q) == doctest::Approx(std::pow(2.0, 4 * sigma) * 8.0).epsilon(1e-12));
}

TEST_CASE("embed_q default run") {
    HarnessConfig cfg;
    EquivalenceReport r = run_check("embed_q", cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.violations == 0);
    CHECK(r.samples == 100);
    CHECK(r.evaluations > 0);
}

TEST_CASE("cos_estimate default run") {
    EquivalenceReport r = run_check("cos_estimate", HarnessConfig{});
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.violations == 0);
    // one evaluation per alpha, each over a 1000 x 1000 (t, u) grid
    CHECK(r.evaluations == 9);
}

TEST_CASE("two-check suite") {
    auto rs = run_suite({"embed_q", "cos_estimate"}, HarnessConfig{});
    REQUIRE(rs.size() == 2);
    for (const auto& r : rs) CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("ergodicity and spectral mapping") {
    HarnessConfig cfg;
    CHECK(run_check("ergodicity", cfg).verdict == Verdict::pass);
    EquivalenceReport s = run_check("spectral_map", cfg);
    CHECK(s.verdict == Verdict::pass);
    CHECK(s.tolerance == 1e-12);
}

TEST_CASE("moment inequality default run") {
    HarnessConfig cfg;
    CheckPlan p = default_plan("moment", cfg);
    REQUIRE(p.secondary);
    EquivalenceReport r = run_check("moment", p, cfg);
    CHECK(r.samples == p.ensemble.count + p.secondary->count);
    CHECK(r.violations == 0);
    CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("reiteration with a reduced sample count") {
    HarnessConfig cfg;
    cfg.overrides["reiteration"].samples = 12;
    EquivalenceReport r = run_check("reiteration", cfg);
    CHECK(r.verdict == Verdict::pass);
    CHECK(r.samples == 12);
    CHECK(std::isfinite(r.ratio_stats.band));
    CHECK(r.ratio_stats.band <= r.ratio_stats.ceiling);
    CHECK(r.ratio_stats.calibration.samples == cfg.calibration_samples);
    CHECK_FALSE(r.ratio_stats.calibration.ensemble.empty());
}

TEST_CASE("reports do not depend on the thread count") {
    HarnessConfig a, b;
    a.jobs = 1;
    b.jobs = 4;
    a.overrides["alpha_independence"].samples = 6;
    b.overrides["alpha_independence"].samples = 6;
    EquivalenceReport ra = run_check("alpha_independence", a);
    EquivalenceReport rb = run_check("alpha_independence", b);
    CHECK(ra == rb);
    CHECK(reports_to_json({ra}) == reports_to_json({rb}));
}

TEST_CASE("seed and plan hash") {
    HarnessConfig a, b;
    b.seed = a.seed + 1;
    CHECK(plan_hash("embed_q", default_plan("embed_q", a), a) != plan_hash("embed_q", default_plan("embed_q", b), b));
    CHECK(plan_hash("embed_q", default_plan("embed_q", a), a) == plan_hash("embed_q", default_plan("embed_q", a), a));
    CHECK(run_check("embed_q", a).seed != run_check("embed_q", b).seed);
}

TEST_CASE("report serialisation round trip") {
    HarnessConfig cfg;
    auto rs = run_suite({"embed_q", "spectral_map"}, cfg);
    EquivalenceReport fake;
    fake.check_id = "reiteration";
    fake.ratio_stats.band = std::nan("");
    fake.ratio_stats.ceiling = kInf;
    fake.failures.push_back({7, "s=0.3", "ratio not finite"});
    rs.push_back(fake);
    std::string text = reports_to_json(rs);
    auto back = reports_from_json(text);
    REQUIRE(back.size() == rs.size());
    for (size_t i = 0; i < rs.size(); ++i) CHECK(back[i] == rs[i]);
    CHECK(reports_to_json(back) == text);
    std::string csv = reports_to_csv(rs);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rs.size()) + 1);
}

TEST_CASE("format helpers") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e300) == "1e+300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
