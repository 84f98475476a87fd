import pytest

import pillai3 as p3


def test_fib_values():
    assert p3.fib(4, 8) == 56
    assert p3.fib(9, 10) == 256
    assert p3.fib_block(4, 1, 8) == [1, 1, 2, 4, 8, 15, 29, 56]
    assert p3.fib_block(5, 1, 10)[-1] == 236


def test_dominant_root():
    ctx = p3.make_context(2)
    assert abs(ctx.alpha.mid() - 1.6180339887498949) < 1e-12
    assert ctx.alpha.rad() < 1e-60
    assert 0.5 < ctx.fk_alpha.mid() < 0.75
    err = p3.binet_error(ctx, 10)
    assert err.mid() == pytest.approx(0.003636123, rel=1e-5)


def test_cf_of_log3_log2():
    e = p3.cf_expand("log(3)/log(2)", to_index=10)
    assert e["quotients"][:10] == [1, 1, 1, 2, 2, 3, 1, 5, 2, 23]
    p, q = e["convergents"][5]
    assert (p, q) == (65, 41)


def test_cf_min_q():
    e = p3.cf_expand("log(3)/log(2)", min_q=10**6)
    assert e["convergents"][-1][1] > 10**6


def test_bounds():
    m4 = p3.lemma_bd_bound(4)
    assert m4 == 165085182014837328794825711363652346881725143960801
    assert p3.cutoff_k() == 519
    k_max, n_max = p3.absolute_bounds()
    assert k_max < 10**41
    assert 10**506 < n_max < 10**507
    c = p3.matveev_lower_bound(2, 1, "1", ["log(3)", "log(2)"])
    assert c.mid() == pytest.approx(5.8619e8, rel=1e-3)
    g = p3.guzman_luca_bound(1, "100")
    assert g.mid() == pytest.approx(921.034, rel=1e-5)


def test_dp_reduce_small():
    out = p3.dp_reduce("1/7 + 1/100000", "1/2", "8", "2", 1)
    assert out["epsilon_lower"] > 0
    assert out["w_bound"] >= 1


def test_search_families():
    sols = p3.search(4, 9)
    key = {(s["k"], s["n"], s["n1"], s["m"], s["m1"]) for s in sols}
    assert (4, 5, 3, 2, 1) in key      # c = -1
    assert (4, 8, 3, 4, 3) in key      # c = -25
    assert (5, 10, 3, 5, 2) in key     # c = -7
    assert (6, 10, 7, 5, 3) in key     # c = 5, sporadic pairing
    assert (9, 10, 6, 5, 1) in key     # c = 13
    cs = sorted({int(s["c"]) for s in sols})
    assert cs == [-25, -7, -1, 5, 13]


def test_errors_raise():
    with pytest.raises(p3.CertifyError):
        p3.fib(1, 5)
    with pytest.raises(p3.CertifyError):
        p3.eval_expr("log(-1)")
