#include "pillai3/dpreduce.hpp"

namespace pillai3 {

FamilyReducer::FamilyReducer(const RealBall& tau, const CFExpansion& cf, const RealBall& A,
                             const RealBall& B, const mpz_class& M, unsigned max_retries)
    : cf_(cf), A_(A), B_(B), M_(M), max_retries_(max_retries) {
    mpfr_prec_t in_prec = std::max(tau.precision(), cf.value.precision());
    if (A_.is_positive() != Tri::yes) throw DomainError("reduction: A must certify > 0");
    if (B_.gt(1) != Tri::yes) throw DomainError("reduction: B must certify > 1");
    if (M_ < 1) throw DomainError("reduction: M must be >= 1");

    mpz_class six_m = 6 * M_;
    size_t idx = cf_.certified_len;
    for (size_t l = 0; l < cf_.certified_len; ++l) {
        if (cf_.q(l) > six_m) {
            idx = l;
            break;
        }
    }
    if (idx == cf_.certified_len)
        throw PrecisionExhausted("reduction: expansion has no convergent with q > 6M");
    first_index_ = idx;

    size_t last = std::min(idx + max_retries_, cf_.certified_len - 1);
    // ||mu q|| needs the product resolved past its integer part only; working
    // above bits(q) by a fixed margin keeps every certification intact. The
    // tau q products are different: q is a convergent denominator, so tau q
    // sits within ~1/q of an integer and tau must keep its full precision.
    prec_ = std::min<mpfr_prec_t>(
        in_prec, static_cast<mpfr_prec_t>(mpz_sizeinbase(cf_.q(last).get_mpz_t(), 2)) + 384);
    log_B_ = log(B_.round_to(prec_));

    RealBall m_ball = RealBall::from_integer(M_, in_prec);
    RealBall quarter = RealBall::from_rational(1, 4, 64);
    for (size_t t = 0; t <= max_retries_ && idx + t < cf_.certified_len; ++t) {
        RealBall qb_full = RealBall::from_integer(cf_.q(idx + t), in_prec);
        RealBall tq = mul(tau, qb_full).dist_to_nearest_int();
        RealBall mtq = mul(m_ball, tq).round_to(320);
        // q > 6M forces M ||tau q|| < 1/6; anything larger means tau was too
        // coarse to resolve the near-integer product
        if (mtq.lt(quarter) != Tri::yes)
            throw PrecisionExhausted("reduction: tau too coarse for this convergent");
        q_balls_.push_back(qb_full.round_to(prec_));
        m_tau_q_.push_back(mtq);
    }
}

const mpz_class& FamilyReducer::q_at(size_t attempt) const {
    return cf_.q(first_index_ + attempt);
}

namespace {

// floor(scale * log(A q / eps)/log B); a couple of hundred good bits decide
// the floor, so the whole ratio is evaluated at low precision first.
std::pair<mpz_class, bool> log_ratio_floor(const RealBall& A, const RealBall& q,
                                           const RealBall& eps, const RealBall& log_B,
                                           unsigned scale) {
    auto eval = [&](mpfr_prec_t p) {
        RealBall arg = div(mul(A.round_to(p), q.round_to(p)), eps.round_to(p));
        RealBall w = div(log(arg), log_B.round_to(p));
        if (scale != 1) w = mul(w, RealBall::from_long(scale, p));
        return w;
    };
    if (auto fl = eval(192).floor_exact()) return {*fl, true};
    RealBall w = eval(std::max(A.precision(), q.precision()));
    if (auto fl = w.floor_exact()) return {*fl, true};
    return {w.floor_upper(), false};
}

}  // namespace

std::pair<mpz_class, bool> FamilyReducer::bound_for(const RealBall& A, const RealBall& B,
                                                    const ReductionOutcome& out,
                                                    unsigned scale) const {
    size_t t = out.convergent_index - first_index_;
    return log_ratio_floor(A, q_balls_.at(t), out.epsilon, log(B.round_to(192)), scale);
}

ReductionOutcome FamilyReducer::reduce(const RealBall& mu) const {
    if (mu.contains_zero()) throw MuNearZero();
    RealBall muw = mu.round_to(prec_);
    unsigned tried = 0;
    for (size_t t = 0; t < q_balls_.size(); ++t) {
        tried = static_cast<unsigned>(t);
        RealBall mq = mul(muw, q_balls_[t]).dist_to_nearest_int();
        RealBall eps = sub(mq.round_to(320), m_tau_q_[t]);
        if (eps.is_positive() != Tri::yes) continue;
        ReductionOutcome out;
        out.q = cf_.q(first_index_ + t);
        out.epsilon = eps;
        out.convergent_index = first_index_ + t;
        out.attempts = tried;
        // straddle policy: when the floor cannot certify, keep the larger
        // floor and flag the outcome as non-sharp
        auto [w, sharp] = log_ratio_floor(A_, q_balls_[t], eps, log_B_, 1);
        out.w_bound = w;
        out.floor_sharp = sharp;
        return out;
    }
    throw EpsilonNonPositive(tried + 1);
}

ReductionOutcome dp_reduce(const ReductionCase& c, const CFExpansion& cf, unsigned max_retries) {
    FamilyReducer red(c.tau, cf, c.A, c.B, c.M, max_retries);
    return red.reduce(c.mu);
}

FamilyStats dp_reduce_family(const FamilyReducer& red,
                             const std::function<RealBall(size_t)>& mu, size_t count) {
    if (count == 0) throw DomainError("dp_reduce_family: empty family");
    FamilyStats stats;
    bool have_eps = false;
    for (size_t i = 0; i < count; ++i) {
        try {
            ReductionOutcome out = red.reduce(mu(i));
            if (out.w_bound > stats.max_w_bound) stats.max_w_bound = out.w_bound;
            if (!have_eps || out.epsilon.lt(stats.min_epsilon) == Tri::yes) {
                stats.min_epsilon = out.epsilon;
                have_eps = true;
            }
            ++stats.members;
        } catch (const Error& e) {
            stats.failures.push_back({i, e.what()});
        }
    }
    return stats;
}

}  // namespace pillai3
