#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pillai3/baker.hpp"
#include "pillai3/contfrac.hpp"
#include "pillai3/dpreduce.hpp"
#include "pillai3/expr.hpp"
#include "pillai3/kfib.hpp"
#include "pillai3/pipeline.hpp"
#include "pillai3/search.hpp"

namespace py = pybind11;
using namespace pillai3;

namespace {

py::object to_py_int(const mpz_class& v) {
    return py::module_::import("builtins").attr("int")(v.get_str());
}

mpz_class to_mpz(py::handle h) {
    return mpz_class(py::str(h).cast<std::string>());
}

py::dict outcome_dict(const ReductionOutcome& o) {
    py::dict d;
    d["q"] = to_py_int(o.q);
    d["epsilon"] = o.epsilon.to_string(10);
    d["epsilon_lower"] = o.epsilon.mid_double() - o.epsilon.rad_double();
    d["w_bound"] = to_py_int(o.w_bound);
    d["convergent_index"] = o.convergent_index;
    d["attempts"] = o.attempts;
    d["floor_sharp"] = o.floor_sharp;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "certified replay of the F_n^(k) - 3^m Pillai classification";

    py::register_exception<Error>(m, "CertifyError");

    py::class_<RealBall>(m, "RealBall")
        .def("__str__", [](const RealBall& b) { return b.to_string(20); })
        .def("__float__", &RealBall::mid_double)
        .def("mid", &RealBall::mid_double)
        .def("rad", &RealBall::rad_double)
        .def("enclosure", &RealBall::enclosure, py::arg("digits") = 20)
        .def("is_exact", &RealBall::is_exact);

    m.def("eval_expr",
          [](const std::string& text, long prec) { return eval_expr(text, prec); },
          py::arg("text"), py::arg("prec") = 256,
          "evaluate an expression like 'log(3)/log(2)' into a certified ball");

    m.def("fib", [](int k, long n) { return to_py_int(fib_at(k, n)); }, py::arg("k"),
          py::arg("n"), "exact k-generalized Fibonacci term");
    m.def("fib_block",
          [](int k, long lo, long hi) {
              py::list out;
              for (const auto& v : fib_block(k, lo, hi)) out.append(to_py_int(v));
              return out;
          },
          py::arg("k"), py::arg("n_lo"), py::arg("n_hi"));

    py::class_<KFibContext>(m, "KFibContext")
        .def_readonly("k", &KFibContext::k)
        .def_readonly("alpha", &KFibContext::alpha)
        .def_readonly("fk_alpha", &KFibContext::fk_alpha)
        .def_readonly("log_alpha", &KFibContext::log_alpha);
    m.def("make_context", [](int k, long prec) { return make_context(k, prec); }, py::arg("k"),
          py::arg("prec") = 256);
    m.def("binet_error", &binet_error, py::arg("ctx"), py::arg("n"));
    m.def("power2_gap_monotone", &power2_gap_monotone, py::arg("k"), py::arg("n_hi"));
    m.def("zeta_of", [](int k, long n, long prec) { return zeta_of(k, n, prec); }, py::arg("k"),
          py::arg("n"), py::arg("prec") = 256);

    m.def("cf_expand",
          [](const std::string& expr, py::object min_q, py::object to_index, long prec) {
              RealBall x = eval_expr(expr, prec);
              CFExpansion e;
              if (!min_q.is_none())
                  e = cf_expand(x, to_mpz(min_q));
              else
                  e = cf_expand_to_index(x, to_index.cast<size_t>());
              py::dict d;
              py::list qs, cv;
              for (const auto& a : e.quotients) qs.append(to_py_int(a));
              for (const auto& [p, q] : e.convergents)
                  cv.append(py::make_tuple(to_py_int(p), to_py_int(q)));
              d["quotients"] = qs;
              d["convergents"] = cv;
              d["certified_len"] = e.certified_len;
              return d;
          },
          py::arg("expr"), py::arg("min_q") = py::none(), py::arg("to_index") = py::none(),
          py::arg("prec") = 256);

    m.def("lemma_bd_bound", [](long k) { return to_py_int(lemma_bd_bound(k)); }, py::arg("k"),
          "floor(4e42 k^11 (log k)^7), the absolute bound on n");
    m.def("cutoff_k", &cutoff_k);
    m.def("absolute_bounds", [] {
        AbsoluteBounds ab = absolute_bounds();
        return py::make_tuple(to_py_int(ab.k_max), to_py_int(ab.n_max));
    });
    m.def("matveev_lower_bound",
          [](unsigned t, unsigned D, const std::string& B, std::vector<std::string> A, long prec) {
              MatveevInstance inst;
              inst.t = t;
              inst.D = D;
              inst.B = eval_expr(B, prec);
              for (const auto& a : A) inst.A.push_back(eval_expr(a, prec));
              return matveev_lower_bound(inst);
          },
          py::arg("t"), py::arg("D"), py::arg("B"), py::arg("A"), py::arg("prec") = 256);
    m.def("guzman_luca_bound",
          [](unsigned mm, const std::string& T, long prec) {
              return guzman_luca_bound(mm, eval_expr(T, prec));
          },
          py::arg("m"), py::arg("T"), py::arg("prec") = 256);

    m.def("dp_reduce",
          [](const std::string& tau, const std::string& mu, const std::string& A,
             const std::string& B, py::object M, long prec) {
              ReductionCase rc{eval_expr(tau, prec), eval_expr(mu, prec), eval_expr(A, prec),
                               eval_expr(B, prec), to_mpz(M)};
              CFExpansion cf = cf_expand(rc.tau, 6 * rc.M * 4096);
              return outcome_dict(dp_reduce(rc, cf));
          },
          py::arg("tau"), py::arg("mu"), py::arg("A"), py::arg("B"), py::arg("M"),
          py::arg("prec") = 512);

    m.def("search",
          [](int k_lo, int k_hi, int n_max, int m_max) {
              SearchConfig sc;
              sc.k_lo = k_lo;
              sc.k_hi = k_hi;
              sc.n_hi = n_max;
              sc.m_hi = m_max;
              SolvedRange solved = solve_range(sc);
              py::list out;
              for (const auto& cs : solved.solutions) {
                  py::dict d;
                  d["k"] = cs.rec.k;
                  d["n"] = cs.rec.n;
                  d["n1"] = cs.rec.n1;
                  d["m"] = cs.rec.m;
                  d["m1"] = cs.rec.m1;
                  d["c"] = to_py_int(cs.rec.c);
                  d["family"] = cs.tag == FamilyTag::classical_pillai ? "classical" : "sporadic";
                  out.append(d);
              }
              return out;
          },
          py::arg("k_lo") = 4, py::arg("k_hi") = 60, py::arg("n_max") = 600,
          py::arg("m_max") = 600, "exhaustive search, exactly verified and classified");

    m.def("certify_small_k",
          [](std::vector<int> ks, long prec) {
              CertifyConfig cfg;
              cfg.k_select = std::move(ks);
              cfg.small_prec = prec;
              SmallKReport rep = run_small_k_phase(cfg);
              py::dict d;
              d["pass"] = rep.pass;
              d["solutions"] = rep.solutions.size();
              d["n_upper"] = rep.n_upper;
              auto sweep = [](const SweepStats& s) {
                  py::dict x;
                  x["max_w_bound"] = s.max_w_bound.get_si();
                  x["min_epsilon"] = s.min_epsilon_d;
                  x["members"] = s.members;
                  x["failures"] = s.failures;
                  return x;
              };
              d["gamma_alpha"] = sweep(rep.gamma_alpha);
              d["gamma_pow3"] = sweep(rep.gamma_pow3);
              d["gamma1"] = sweep(rep.gamma1);
              d["gamma2"] = sweep(rep.gamma2);
              d["gamma3"] = sweep(rep.gamma3);
              return d;
          },
          py::arg("ks"), py::arg("prec") = 1024,
          "search + the four reduction sweeps for the given k values");
}
