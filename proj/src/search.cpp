#include "pillai3/search.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "pillai3/kfib.hpp"

namespace pillai3 {

namespace {

using u128 = unsigned __int128;

u128 to_u128(const mpz_class& v) {
    u128 out = 0;
    mpz_class t = v;
    for (int i = 0; i < 2; ++i) {
        out |= static_cast<u128>(mpz_get_ui(t.get_mpz_t()) & 0xffffffffffffffffULL) << (64 * i);
        t >>= 64;
    }
    return out;
}

struct PowerDiff {
    u128 residue;
    int m, m1;
};

}  // namespace

void SearchConfig::validate() const {
    if (k_lo < 2 || k_lo > k_hi) throw DomainError("search: bad k range");
    if (n_lo < 3) throw DomainError("search: n range must start at >= 3");
    if (m_lo < 2) throw DomainError("search: m range must start at >= 2");
    if (modulus < 2) throw DomainError("search: modulus must be >= 2");
    if (mpz_sizeinbase(modulus.get_mpz_t(), 2) > 120)
        throw DomainError("search: modulus above 2^120 unsupported");
}

SearchResult residue_search(const SearchConfig& cfg) {
    cfg.validate();
    const u128 mod = to_u128(cfg.modulus);

    // 3^m - 3^{m1} (mod modulus), shared across k
    std::vector<u128> pow3(cfg.m_hi + 1);
    pow3[0] = 1 % mod;
    for (int m = 1; m <= cfg.m_hi; ++m) pow3[m] = (pow3[m - 1] * 3) % mod;
    std::unordered_map<uint64_t, std::vector<PowerDiff>> diffs;
    for (int m = cfg.m_lo; m <= cfg.m_hi; ++m) {
        for (int m1 = 1; m1 < m; ++m1) {
            u128 d = (pow3[m] + mod - pow3[m1]) % mod;
            diffs[static_cast<uint64_t>(d)].push_back({d, m, m1});
        }
    }

    SearchResult res;
    for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        // residues of F_n^(k) for n in [1, n_hi] via the three-term recursion
        std::vector<u128> fib(cfg.n_hi + 1, 0);
        std::deque<u128> window;  // last k+1 residues
        for (int n = 2 - k; n <= cfg.n_hi; ++n) {
            u128 v;
            if (n <= 0)
                v = 0;
            else if (n <= 2)
                v = 1 % mod;
            else
                v = (2 * window.back() % mod + mod - window.front()) % mod;
            window.push_back(v);
            if (static_cast<long>(window.size()) > k + 1) window.pop_front();
            if (n >= 1) fib[n] = v;
        }
        for (int n = cfg.n_lo; n <= cfg.n_hi; ++n) {
            for (int n1 = 2; n1 < n; ++n1) {
                u128 d = (fib[n] + mod - fib[n1]) % mod;
                auto it = diffs.find(static_cast<uint64_t>(d));
                if (it == diffs.end()) continue;
                for (const PowerDiff& pd : it->second)
                    if (pd.residue == d) res.candidates.push_back({k, n, n1, pd.m, pd.m1});
            }
        }
    }
    std::sort(res.candidates.begin(), res.candidates.end(), [](const Candidate& a, const Candidate& b) {
        return std::tie(a.k, a.n, a.n1, a.m, a.m1) < std::tie(b.k, b.n, b.n1, b.m, b.m1);
    });
    return res;
}

std::optional<SolutionRecord> verify_candidate(int k, int n, int n1, int m, int m1) {
    if (!(n > n1 && n1 >= 2 && m > m1 && m1 >= 1))
        throw DomainError("verify_candidate: bad index order");
    mpz_class fn = fib_at(k, n), fn1 = fib_at(k, n1);
    mpz_class p3m, p3m1;
    mpz_ui_pow_ui(p3m.get_mpz_t(), 3, m);
    mpz_ui_pow_ui(p3m1.get_mpz_t(), 3, m1);
    mpz_class lhs = fn - fn1;
    mpz_class rhs = p3m - p3m1;
    if (lhs != rhs) return std::nullopt;
    SolutionRecord rec{k, n, n1, m, m1, fn - p3m, lhs, rhs};
    return rec;
}

std::vector<ClassifiedSolution> classify_solutions(const std::vector<SolutionRecord>& records) {
    std::vector<ClassifiedSolution> out;
    for (const SolutionRecord& r : records) {
        if (r.n <= r.k + 1) {
            // classical Pillai identities, with their k-ranges
            bool m1_ok = (r.n == 5 && r.n1 == 3 && r.m == 2 && r.m1 == 1 && r.c == -1 && r.k >= 4) ||
                         (r.n == 7 && r.n1 == 5 && r.m == 3 && r.m1 == 1 && r.c == 5 && r.k >= 6) ||
                         (r.n == 10 && r.n1 == 6 && r.m == 5 && r.m1 == 1 && r.c == 13 && r.k >= 9);
            if (!m1_ok)
                throw UnclassifiedSolution("record outside the classical family: k=" +
                                           std::to_string(r.k) + " n=" + std::to_string(r.n));
            out.push_back({r, FamilyTag::classical_pillai});
        } else {
            bool ok = (r.k == 4 && r.n == 8 && r.n1 == 3 && r.m == 4 && r.m1 == 3 && r.c == -25) ||
                      (r.k == 5 && r.n == 10 && r.n1 == 3 && r.m == 5 && r.m1 == 2 && r.c == -7) ||
                      (r.k == 6 && r.c == 5 && r.n == 10 && r.m == 5 &&
                       ((r.n1 == 7 && r.m1 == 3) || (r.n1 == 5 && r.m1 == 1)));
            if (!ok)
                throw UnclassifiedSolution("record outside the sporadic family: k=" +
                                           std::to_string(r.k) + " n=" + std::to_string(r.n) +
                                           " n1=" + std::to_string(r.n1) + " m=" +
                                           std::to_string(r.m) + " m1=" + std::to_string(r.m1));
            out.push_back({r, FamilyTag::sporadic});
        }
    }
    return out;
}

SolvedRange solve_range(const SearchConfig& cfg) {
    SearchResult sr = residue_search(cfg);
    SolvedRange out;
    out.candidates = static_cast<long>(sr.candidates.size());
    std::vector<SolutionRecord> verified;
    for (const Candidate& c : sr.candidates) {
        auto rec = verify_candidate(c.k, c.n, c.n1, c.m, c.m1);
        if (rec)
            verified.push_back(*rec);
        else
            ++out.rejected;
    }
    out.rejected += sr.rejected;
    out.solutions = classify_solutions(verified);
    return out;
}

}  // namespace pillai3
