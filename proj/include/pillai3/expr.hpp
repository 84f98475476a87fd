#pragma once

#include <string>

#include "pillai3/realball.hpp"

namespace pillai3 {

// Evaluates a small arithmetic grammar into a certified ball:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := primary ('^' integer)?
//   primary:= number | '(' expr ')' | name '(' args ')'
// names: log, exp, sqrt, root(x,n), alpha(k), fk(k)   [alpha/fk: dominant
// root of the k-Fibonacci characteristic polynomial and f_k(alpha)]
// numbers: integers and decimals (parsed exactly as rationals).
RealBall eval_expr(const std::string& text, mpfr_prec_t prec = default_precision());

}  // namespace pillai3
