#include "pillai3/expr.hpp"

#include <cctype>

#include "pillai3/kfib.hpp"

namespace pillai3 {

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;
    mpfr_prec_t prec;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) {
        throw DomainError("expr: " + why + " at offset " + std::to_string(pos));
    }

    RealBall expr() {
        RealBall v = term();
        while (true) {
            skip();
            if (eat('+'))
                v = add(v, term());
            else if (eat('-'))
                v = sub(v, term());
            else
                return v;
        }
    }

    RealBall term() {
        RealBall v = factor();
        while (true) {
            skip();
            if (eat('*'))
                v = mul(v, factor());
            else if (eat('/'))
                v = div(v, factor());
            else
                return v;
        }
    }

    RealBall factor() {
        RealBall v = primary();
        skip();
        if (eat('^')) {
            long e = integer();
            v = pow_int(v, e);
        }
        return v;
    }

    long integer() {
        skip();
        bool negative = eat('-');
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) fail("expected integer");
        long v = std::stol(s.substr(start, pos - start));
        return negative ? -v : v;
    }

    RealBall primary() {
        skip();
        if (eat('(')) {
            RealBall v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (eat('-')) return neg(primary());
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
            return number();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        std::string name = s.substr(start, pos - start);
        if (name.empty()) fail("expected value");
        if (!eat('(')) fail("expected '(' after " + name);
        RealBall a0 = expr();
        if (name == "log") {
            if (!eat(')')) fail("expected ')'");
            return log(a0);
        }
        if (name == "exp") {
            if (!eat(')')) fail("expected ')'");
            return exp(a0);
        }
        if (name == "sqrt") {
            if (!eat(')')) fail("expected ')'");
            return nth_root(a0, 2);
        }
        if (name == "root") {
            if (!eat(',')) fail("expected ','");
            long n = integer();
            if (!eat(')')) fail("expected ')'");
            if (n < 1) fail("root index must be >= 1");
            return nth_root(a0, static_cast<unsigned long>(n));
        }
        if (name == "alpha" || name == "fk") {
            if (!eat(')')) fail("expected ')'");
            auto k = a0.nearest_int_exact();
            if (!k || *k < 2 || *k > 100000) fail("k argument must be a small integer >= 2");
            KFibContext ctx = make_context(static_cast<int>(k->get_si()), prec);
            return name == "alpha" ? ctx.alpha : ctx.fk_alpha;
        }
        fail("unknown function " + name);
    }

    RealBall number() {
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        mpz_class num(s.substr(start, pos - start).empty() ? "0" : s.substr(start, pos - start));
        mpz_class den = 1;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            size_t fstart = pos;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            for (size_t i = fstart; i < pos; ++i) {
                num = num * 10 + (s[i] - '0');
                den *= 10;
            }
        }
        return RealBall::from_rational(num, den, prec);
    }
};

}  // namespace

RealBall eval_expr(const std::string& text, mpfr_prec_t prec) {
    Parser p{text, 0, prec};
    RealBall v = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return v;
}

}  // namespace pillai3
