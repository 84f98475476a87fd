#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pillai3/baker.hpp"
#include "pillai3/contfrac.hpp"
#include "pillai3/dpreduce.hpp"
#include "pillai3/expr.hpp"
#include "pillai3/kfib.hpp"
#include "pillai3/pipeline.hpp"
#include "pillai3/search.hpp"

using namespace pillai3;
using ordered_json = nlohmann::ordered_json;

namespace {

mpfr_prec_t digits_to_bits(long digits) {
    return static_cast<mpfr_prec_t>(static_cast<double>(digits) * 3.3219280948873623 + 16);
}

int cmd_fib(int k, long n) {
    std::cout << fib_at(k, n).get_str() << "\n";
    return 0;
}

int cmd_root(int k, long digits) {
    KFibContext ctx = make_context(k, digits_to_bits(digits));
    std::cout << ctx.alpha.enclosure(static_cast<size_t>(digits)) << "\n";
    return 0;
}

int cmd_cf(const std::string& expr, long to_index, long digits, const std::string& min_q_str) {
    mpfr_prec_t prec = digits_to_bits(digits);
    RealBall x = eval_expr(expr, prec);
    CFExpansion e;
    if (!min_q_str.empty())
        e = cf_expand(x, mpz_class(min_q_str));
    else
        e = cf_expand_to_index(x, static_cast<size_t>(to_index));
    ordered_json j;
    j["expr"] = expr;
    j["certified_len"] = e.certified_len;
    ordered_json qs = ordered_json::array();
    for (const auto& a : e.quotients) qs.push_back(a.get_str());
    j["quotients"] = qs;
    ordered_json cv = ordered_json::array();
    for (size_t l = 0; l < e.convergents.size(); ++l)
        if (l + 8 >= e.convergents.size() || l < 4)
            cv.push_back({{"l", l}, {"p", e.p(l).get_str()}, {"q", e.q(l).get_str()}});
    j["convergents"] = cv;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_bounds(int k) {
    ordered_json j;
    j["k"] = k;
    j["M_k"] = lemma_bd_bound(k).get_str();
    ChainCoefficients cc = chain_coefficients();
    auto put = [&](const char* name, const RealBall& b) { j["chain"][name] = b.to_string(8); };
    put("t2_base", cc.t2_base);
    put("t3_k_raw", cc.t3_k_raw);
    put("t3_k_min_6.54e11", cc.t3_k_min);
    put("t3_k_max_7.41e22", cc.t3_k_max);
    put("gamma3_9.05e33", cc.t3_k_gamma3);
    put("t3_d1_second_6.43e19", cc.t3_d1_second);
    put("t3_d1_third", cc.t3_d1_third);
    put("k_final_5.42e31", cc.k_final_coeff);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_reduce(const std::string& tau_s, const std::string& mu_s, const std::string& a_s,
               const std::string& b_s, const std::string& m_s, long digits) {
    mpfr_prec_t prec = digits_to_bits(digits);
    ReductionCase rc{eval_expr(tau_s, prec), eval_expr(mu_s, prec), eval_expr(a_s, prec),
                     eval_expr(b_s, prec), mpz_class(m_s)};
    CFExpansion cf = cf_expand(rc.tau, 6 * rc.M * 256);  // room for retries
    ReductionOutcome out = dp_reduce(rc, cf);
    ordered_json j;
    j["q"] = out.q.get_str();
    j["convergent_index"] = out.convergent_index;
    j["epsilon"] = out.epsilon.to_string(10);
    j["w_bound"] = out.w_bound.get_str();
    j["attempts"] = out.attempts;
    j["floor_sharp"] = out.floor_sharp;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_search(int k_lo, int k_hi, int n_max, int m_max, const std::string& modulus) {
    SearchConfig sc;
    sc.k_lo = k_lo;
    sc.k_hi = k_hi;
    sc.n_hi = n_max;
    sc.m_hi = m_max;
    if (!modulus.empty()) sc.modulus = mpz_class(modulus);
    SolvedRange solved = solve_range(sc);
    for (const auto& cs : solved.solutions) {
        ordered_json j{{"k", cs.rec.k},
                       {"n", cs.rec.n},
                       {"n1", cs.rec.n1},
                       {"m", cs.rec.m},
                       {"m1", cs.rec.m1},
                       {"c", cs.rec.c.get_str()},
                       {"family",
                        cs.tag == FamilyTag::classical_pillai ? "classical" : "sporadic"}};
        std::cout << j.dump() << "\n";
    }
    std::cerr << "candidates: " << solved.candidates << ", rejected: " << solved.rejected << "\n";
    return 0;
}

int cmd_certify(const CertifyConfig& cfg, const std::string& out_path, bool markdown) {
    CertificationReport rep = run_certification(cfg);
    std::string body = markdown ? emit_report_markdown(rep) : emit_report_json(rep);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << body;
        std::cout << (rep.pass ? "PASS" : "FAIL") << " (report written to " << out_path << ")\n";
    } else {
        std::cout << body;
    }
    std::cerr << "small_k: " << (rep.small_k.pass ? "PASS" : "FAIL")
              << ", large_k: " << (rep.large_k.pass ? "PASS" : "FAIL")
              << ", bounds: " << (rep.bounds.pass ? "PASS" : "FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified replay of the F_n^(k) - 3^m Pillai classification"};
    app.require_subcommand(1);

    int k = 4;
    long n = 1, digits = 40, to_index = 20;
    std::string expr, min_q, tau_s, mu_s, a_s, b_s, m_s, modulus, out_path, resume;
    int k_lo = 4, k_hi = 60, n_max = 600, m_max = 600;
    bool full = false, markdown = false;
    long precision = 0;

    auto* fib = app.add_subcommand("fib", "exact k-generalized Fibonacci term");
    fib->add_option("--k", k)->required();
    fib->add_option("--n", n)->required();

    auto* root = app.add_subcommand("root", "certified enclosure of the dominant root alpha(k)");
    root->add_option("--k", k)->required();
    root->add_option("--digits", digits);

    auto* cf = app.add_subcommand("cf", "certified continued fraction of an expression");
    cf->add_option("--expr", expr)->required();
    cf->add_option("--to-index", to_index);
    cf->add_option("--digits", digits);
    cf->add_option("--min-q", min_q);

    auto* bounds = app.add_subcommand("bounds", "M_k and the Baker bound chain as JSON");
    bounds->add_option("--k", k)->required();

    auto* reduce = app.add_subcommand("reduce", "one Dujella-Petho reduction");
    reduce->add_option("--tau", tau_s)->required();
    reduce->add_option("--mu", mu_s)->required();
    reduce->add_option("--A", a_s)->required();
    reduce->add_option("--B", b_s)->required();
    reduce->add_option("--M", m_s)->required();
    reduce->add_option("--digits", digits);

    auto* search = app.add_subcommand("search", "exhaustive solution search, JSON lines");
    search->add_option("--k-lo", k_lo);
    search->add_option("--k-hi", k_hi);
    search->add_option("--n-max", n_max);
    search->add_option("--m-max", m_max);
    search->add_option("--modulus", modulus);

    auto* certify = app.add_subcommand("certify", "run the full certification pipeline");
    certify->add_flag("--full", full, "sweep k up to 600");
    certify->add_option("--k-lo", k_lo);
    certify->add_option("--k-hi", k_hi);
    certify->add_option("--precision", precision, "working precision in bits");
    certify->add_option("--out", out_path);
    certify->add_option("--resume", resume, "checkpoint directory");
    certify->add_flag("--markdown", markdown, "emit markdown instead of JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fib->parsed()) return cmd_fib(k, n);
        if (root->parsed()) return cmd_root(k, digits);
        if (cf->parsed()) return cmd_cf(expr, to_index, digits, min_q);
        if (bounds->parsed()) return cmd_bounds(k);
        if (reduce->parsed()) return cmd_reduce(tau_s, mu_s, a_s, b_s, m_s, digits);
        if (search->parsed()) return cmd_search(k_lo, k_hi, n_max, m_max, modulus);
        if (certify->parsed()) {
            CertifyConfig cfg;
            cfg.k_lo = k_lo;
            cfg.k_hi = k_hi;
            cfg.full = full;
            if (precision > 0) cfg.small_prec = precision;
            cfg.resume_dir = resume;
            return cmd_certify(cfg, out_path, markdown);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
