import json
import math
import os
import subprocess

import pytest

import eqstates as eq


def test_maps():
    d = eq.MapSystem.doubling()
    assert d(0.3) == pytest.approx(0.6)
    assert d.epsilon0() == 0.25
    assert eq.mixing_time(d, 1 / 32) == 4
    mp = eq.MapSystem.parse("mp:0.5")
    assert mp(0.25) == pytest.approx(0.375)


def test_transfer_eigenvalue():
    d = eq.MapSystem.doubling()
    phi = eq.Potential.constant(-math.log(2.0))
    eig = eq.leading_eigen(d, phi, 256)
    assert eig.lambda_ == pytest.approx(1.0, abs=1e-10)


def test_glue_shadows():
    d = eq.MapSystem.doubling()
    plan = eq.glue(d, 0.9, [(0.1, 6), (0.7, 8)], 1 / 32)
    assert eq.verify_shadow(d, plan) <= 1 / 32


def test_decompose_lengths():
    mp = eq.MapSystem.manneville_pomeau(0.5)
    dec = eq.decompose(mp, eq.DecompositionConfig(0.9), 0.001, 20)
    assert dec.p_len + dec.g_len + dec.s_len == 20


def test_run_check():
    code, text = eq.run("check", json.dumps({"samples": 20}))
    assert code == 0
    assert "overall" in text


def test_bad_sigma():
    with pytest.raises(ValueError):
        eq.run("pressure", json.dumps({"sigma": [1.5]}))


@pytest.mark.skipif("EQSTATES_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_exit_code():
    r = subprocess.run([os.environ["EQSTATES_CLI"], "pressure", "--sigma", "1.5"], capture_output=True)
    assert r.returncode == 1
    assert b"sigma" in r.stderr
