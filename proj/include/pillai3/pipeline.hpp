#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "pillai3/realball.hpp"
#include "pillai3/search.hpp"

namespace pillai3 {

struct CertifyConfig {
    int k_lo = 4;
    int k_hi = 60;            // 600 behind --full
    bool full = false;
    std::vector<int> k_select;  // when nonempty, run exactly these k
    int n_max = 600, m_max = 600;
    mpfr_prec_t small_prec = 1024;
    mpfr_prec_t large_prec = 8192;
    std::string resume_dir;   // per-k checkpoints when nonempty
};

// Statistics of one Dujella-Petho sweep over a mu-family.
struct SweepStats {
    std::string name;
    mpz_class max_w_bound = 0;
    std::string min_epsilon;   // decimal lower bound of the smallest certified eps
    double min_epsilon_d = 0;
    long members = 0;          // certified members
    long routed = 0;           // structurally degenerate, handled by the homogeneous step
    long failures = 0;         // neither certified nor routable (must stay 0)
};

struct SmallKReport {
    std::vector<int> ks;
    std::vector<ClassifiedSolution> solutions;
    long candidates = 0, rejected = 0;
    bool solutions_match_families = false;
    SweepStats gamma_alpha;  // (2 alpha^6, alpha): bounds n-n1
    SweepStats gamma_pow3;   // (6/log3, 3): bounds m-m1
    SweepStats gamma1;       // (6/log3, 3) over l: bounds m-m1
    SweepStats gamma2;       // (2 alpha^6/log3, alpha) over j: bounds n-n1
    SweepStats gamma3;       // (1328, 3) over (l, j): bounds 0.8 n
    long n_upper = 0;        // derived bound on n from gamma3
    bool pass = false;
    std::vector<std::string> notes;
};

// One z-reduction of the large-k phase, paper-faithful and sound tracks.
struct ZReport {
    std::string name;
    long family_lo = 1, family_hi = 0, family_hi2 = 0;  // hi2: second index for z3
    SweepStats paper;   // restricted to the published family ranges
    SweepStats sound;   // over the certified sound ranges
    long bound_primary_paper = 0, bound_primary_sound = 0;  // m-m1 (z1) / n-n1 (z2)
    long bound_k_paper = 0, bound_k_sound = 0;
};

struct TableRow {
    std::string M;  // e.g. "10^507"
    long n_gap = 0, m_gap = 0, k_bound = 0;              // replay columns
    long n_gap_sound = 0, m_gap_sound = 0, k_sound = 0;  // certified columns
};

struct LargeKReport {
    size_t cf_len = 0;
    std::string q972, q977;  // scientific, >= 5 significant digits
    mpz_class max_a;
    size_t max_a_index = 0;
    // Legendre-step thresholds at M = 10^507 (branch A reproduces the paper)
    long leg_n_paper = 0, leg_m_paper = 0, leg_k_paper = 0;
    long leg_n_sound = 0, leg_m_sound = 0, leg_k_sound = 0;
    std::vector<ZReport> reductions;  // row-1 z1, z2, z3
    std::vector<TableRow> table;
    bool stabilized = false;
    long final_k = 0, final_k_sound = 0;
    bool pass = false;
    std::vector<std::string> notes;
};

struct CoefficientCheck {
    std::string name;
    std::string recomputed;  // decimal upper bound of the recomputed ball
    std::string stated;      // the published coefficient
    bool within = false;     // recomputed <= stated * 1.01
};

struct CaseSplitReport {
    std::vector<CoefficientCheck> coefficients;
    int cutoff = 0;
    std::string k_max, n_max;
    bool pass = false;
    std::vector<std::string> notes;
};

struct CertificationReport {
    CertifyConfig config;
    SmallKReport small_k;
    LargeKReport large_k;
    CaseSplitReport bounds;
    std::vector<std::string> flags;  // paper-discrepancy notes
    bool pass = false;
};

SmallKReport run_small_k_phase(const CertifyConfig& cfg);
LargeKReport run_large_k_phase(const CertifyConfig& cfg);
CaseSplitReport run_case_split_bounds(const CertifyConfig& cfg);
CertificationReport run_certification(const CertifyConfig& cfg);

std::string emit_report_json(const CertificationReport& report);
std::string emit_report_markdown(const CertificationReport& report);

// Theorem-1 families intersected with the searched ranges (the expected
// output of the exhaustive search).
std::vector<SolutionRecord> expected_solutions(int k_lo, int k_hi, int n_hi, int m_hi);

}  // namespace pillai3
