#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "pillai3/errors.hpp"

namespace pillai3 {

// Exhaustive search configuration. Residues of F_n - F_{n1} and 3^m - 3^{m1}
// are intersected modulo `modulus`; every collision is then verified exactly,
// so the modulus only affects speed.
struct SearchConfig {
    int k_lo = 4, k_hi = 600;
    int n_lo = 3, n_hi = 600;
    int m_lo = 2, m_hi = 600;
    mpz_class modulus = []{ mpz_class m; mpz_ui_pow_ui(m.get_mpz_t(), 10, 20); return m; }();

    void validate() const;
};

struct Candidate {
    int k, n, n1, m, m1;
    bool operator==(const Candidate&) const = default;
};

// A verified instance of F_n^(k) - 3^m = F_{n1}^(k) - 3^{m1} = c.
struct SolutionRecord {
    int k, n, n1, m, m1;
    mpz_class c;
    mpz_class lhs, rhs;  // the two differences F_n - F_{n1} and 3^m - 3^{m1}
    bool operator==(const SolutionRecord&) const = default;
};

struct SearchResult {
    std::vector<Candidate> candidates;
    long rejected = 0;  // modulus collisions that failed exact verification
};

SearchResult residue_search(const SearchConfig& cfg);

// Exact big-integer check; nullopt means Rejected.
std::optional<SolutionRecord> verify_candidate(int k, int n, int n1, int m, int m1);

enum class FamilyTag {
    classical_pillai,  // n <= k+1, inherited from 2^x - 3^y
    sporadic,          // n >= k+2
};

struct ClassifiedSolution {
    SolutionRecord rec;
    FamilyTag tag;
};

// Tags every verified record against the known families and their k-ranges;
// throws UnclassifiedSolution on anything outside them.
std::vector<ClassifiedSolution> classify_solutions(const std::vector<SolutionRecord>& records);

// Convenience: full search + exact verification + classification.
struct SolvedRange {
    std::vector<ClassifiedSolution> solutions;
    long candidates = 0;
    long rejected = 0;
};
SolvedRange solve_range(const SearchConfig& cfg);

}  // namespace pillai3
