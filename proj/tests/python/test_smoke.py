import math

import pytest

import chordmix as cm


def test_kernel_entries():
    k = cm.build_kernel("drift-chord", 10, k=4)
    assert k.n == 10
    assert k.prob(1, 1) == 0.5 and k.prob(1, 2) == 0.5
    assert k.prob(4, 5) == 0.5 and k.prob(4, 4) == 0.25 and k.prob(4, 10) == 0.25
    assert cm.verify_kernel(k)["pass"]
    assert cm.Kernel.from_json(k.to_json()).row(10) == k.row(10)


def test_invalid_input_raises_value_error():
    with pytest.raises(ValueError):
        cm.build_kernel("drift-chord", 10, k=9)
    with pytest.raises(ValueError):
        cm.euler_phi(0)


def test_mixing_time_small_chain():
    k = cm.build_kernel("drift-chord", 5, k=2)
    assert cm.mixing_time(k, 0.25)["t"] == 4
    law = cm.evolve(k, 1, 50)
    assert math.isclose(sum(law), 1.0, abs_tol=1e-12)
    assert cm.distance(k, 0) == pytest.approx(0.8)


def test_exit_set_sums_to_one():
    pts = cm.exit_set(10, 4, L=7)
    assert len(pts) == 4
    assert sum(p["probability"] for p in pts) == pytest.approx(1.0, abs=1e-12)
    assert cm.exit_probability(1, 1, "B", "A") == pytest.approx(15 / 32)


def test_gaps():
    assert [cm.euler_phi(m) for m in (1, 7, 12)] == [1, 6, 4]
    rep = cm.good_k_set(1000)
    assert rep["fraction"] >= rep["bound"] - 0.05
    assert all(cm.is_good_k(1000, k) for k in rep["good_k"][:20])
    assert 500 not in rep["good_k"]


def test_seeded_sampling_is_reproducible():
    k = cm.build_kernel("drift-chord", 100, k=38)
    a = cm.trajectory_law(k, 1, 2000, 500, 3)
    assert a == cm.trajectory_law(k, 1, 2000, 500, 3)
    assert sum(a) == 500
    rec = cm.coin_procedure(200, 73, 5)
    assert rec["tau"] == rec["c0_length"] + rec["inserted"]
    assert rec == cm.coin_procedure(200, 73, 5)


def test_scaling_and_fit():
    recs = cm.scaling_run("lazy-cycle", [16, 32, 64, 128])
    assert [r["n"] for r in recs] == [16, 32, 64, 128]
    fit = cm.fit_exponent(recs)
    assert 1.8 <= fit["slope"] <= 2.2
