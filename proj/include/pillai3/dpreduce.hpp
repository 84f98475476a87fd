#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

#include "pillai3/contfrac.hpp"
#include "pillai3/realball.hpp"

namespace pillai3 {

// One reduction instance: no solution of 0 < |u tau - v + mu| < A B^{-w}
// with u <= M survives w >= log(A q / eps)/log B once
// eps = ||mu q|| - M ||tau q|| certifies positive for a convergent
// denominator q > 6M of tau.
struct ReductionCase {
    RealBall tau;
    RealBall mu;
    RealBall A;   // > 0
    RealBall B;   // > 1
    mpz_class M;  // >= 1
};

struct ReductionOutcome {
    mpz_class q;
    RealBall epsilon;
    mpz_class w_bound;         // no solution has w > w_bound
    size_t convergent_index = 0;
    unsigned attempts = 0;     // convergents tried beyond the first q > 6M
    bool floor_sharp = true;   // false when the floor used the straddle policy
};

// Precomputes everything that is shared when many mu's run against one
// (tau, cf, A, B, M); dp_reduce is the one-shot form.
class FamilyReducer {
  public:
    FamilyReducer(const RealBall& tau, const CFExpansion& cf, const RealBall& A,
                  const RealBall& B, const mpz_class& M, unsigned max_retries = 8);

    ReductionOutcome reduce(const RealBall& mu) const;

    // floor(scale * log(A q / eps)/log B) for an already-certified outcome;
    // used where one inequality feeds several envelopes (and for w = k/2,
    // where the conclusion needs floor(2 L)).
    std::pair<mpz_class, bool> bound_for(const RealBall& A, const RealBall& B,
                                         const ReductionOutcome& out, unsigned scale = 1) const;

    size_t first_index() const { return first_index_; }
    const mpz_class& q_at(size_t attempt) const;
    const RealBall& m_tau_q(size_t attempt) const { return m_tau_q_.at(attempt); }
    unsigned max_retries() const { return max_retries_; }

  private:
    const CFExpansion& cf_;
    RealBall A_, B_, log_B_;
    mpz_class M_;
    unsigned max_retries_;
    size_t first_index_ = 0;
    std::vector<RealBall> q_balls_;   // q as exact balls, per retry level
    std::vector<RealBall> m_tau_q_;   // M * ||tau q||, per retry level
    mpfr_prec_t prec_;
};

ReductionOutcome dp_reduce(const ReductionCase& c, const CFExpansion& cf,
                           unsigned max_retries = 8);

struct FamilyFailure {
    size_t member = 0;
    std::string reason;
};

struct FamilyStats {
    mpz_class max_w_bound = 0;
    RealBall min_epsilon;          // smallest certified member epsilon
    size_t members = 0;            // successfully reduced members
    std::vector<FamilyFailure> failures;
};

// Runs reduce() over mu(0..count-1); member errors land in failures without
// aborting the sweep.
FamilyStats dp_reduce_family(const FamilyReducer& red,
                             const std::function<RealBall(size_t)>& mu, size_t count);

}  // namespace pillai3
