#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "pillai3/pipeline.hpp"

using namespace pillai3;

TEST_CASE("expected solution families intersect the range correctly") {
    auto all = expected_solutions(4, 60, 600, 600);
    // 57 ks with c=-1, 55 with c=5, 52 with c=13, 2 sporadic singles + 2 for k=6
    CHECK(all.size() == 57 + 55 + 52 + 1 + 1 + 2);
    auto tiny = expected_solutions(4, 9, 600, 600);
    CHECK(tiny.size() == 6 + 4 + 1 + 1 + 1 + 2);
    // range clipping: m <= 4 drops the c=13 and c=-7 identities
    auto clipped = expected_solutions(4, 9, 600, 4);
    for (const auto& r : clipped) CHECK(r.m <= 4);
}

TEST_CASE("small-k phase at reduced scale") {
    CertifyConfig cfg;
    cfg.k_select = {4, 5};
    cfg.small_prec = 1024;
    SmallKReport rep = run_small_k_phase(cfg);
    CHECK(rep.solutions_match_families);
    CHECK(rep.solutions.size() == 4);  // (5,3,2,1) twice + two sporadics
    CHECK(rep.gamma_alpha.failures == 0);
    CHECK(rep.gamma_pow3.failures == 0);
    CHECK(rep.gamma1.failures == 0);
    CHECK(rep.gamma2.failures == 0);
    CHECK(rep.gamma3.failures == 0);
    // the published sweep maxima hold per k
    CHECK(rep.gamma_alpha.max_w_bound <= 600);
    CHECK(rep.gamma_pow3.max_w_bound <= 375);
    CHECK(rep.gamma1.max_w_bound <= 377);
    CHECK(rep.gamma2.max_w_bound <= 603);
    CHECK(rep.gamma3.max_w_bound <= 377);
    CHECK(rep.n_upper < 473);
    CHECK(rep.pass);
    // member counts: gamma1 600 + gamma2 375 + gamma3 603*377 per k
    CHECK(rep.gamma1.members == 2 * 600);
    CHECK(rep.gamma2.members == 2 * 375);
    CHECK(rep.gamma3.members + rep.gamma3.routed == 2L * 603 * 377);
}

TEST_CASE("phase independence and checkpoint resume") {
    CertifyConfig cfg;
    cfg.k_select = {4};
    cfg.small_prec = 1024;
    cfg.resume_dir = "/tmp/pillai3_ckpt_test";
    std::filesystem::remove_all(cfg.resume_dir);
    SmallKReport first = run_small_k_phase(cfg);
    CHECK(first.pass);
    // resumed run must reproduce the same statistics without recomputing
    SmallKReport second = run_small_k_phase(cfg);
    CHECK(second.pass);
    CHECK(first.gamma3.max_w_bound == second.gamma3.max_w_bound);
    CHECK(first.gamma3.min_epsilon == second.gamma3.min_epsilon);
    std::filesystem::remove_all(cfg.resume_dir);
}

TEST_CASE("case-split bounds certify") {
    CertifyConfig cfg;
    CaseSplitReport rep = run_case_split_bounds(cfg);
    CHECK(rep.pass);
    CHECK(rep.cutoff <= 601);
    CHECK(rep.cutoff == 519);
    for (const auto& c : rep.coefficients) CHECK(c.within);
    CHECK(rep.coefficients.size() == 10);
}

TEST_CASE("report emission is deterministic") {
    CertifyConfig cfg;
    cfg.k_select = {4};
    cfg.small_prec = 1024;
    CertificationReport rep;
    rep.config = cfg;
    rep.small_k = run_small_k_phase(cfg);
    rep.bounds = run_case_split_bounds(cfg);
    rep.flags = {"note"};
    rep.pass = false;  // large_k left empty on purpose
    std::string a = emit_report_json(rep);
    std::string b = emit_report_json(rep);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);
    CHECK(a.find("\"status\": \"FAIL\"") != std::string::npos);
    std::string md = emit_report_markdown(rep);
    CHECK(md.find("| # | M |") != std::string::npos);

    // empty report serializes as FAIL with empty phases
    CertificationReport empty;
    std::string e = emit_report_json(empty);
    CHECK(e.find("\"status\": \"FAIL\"") != std::string::npos);
}
