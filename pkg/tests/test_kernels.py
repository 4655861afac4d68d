import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from llskit import kernels
from llskit.schubert import partitions_in_box

BACKENDS = kernels.available_backends()


def test_python_backend_always_available():
    assert "python" in BACKENDS


def test_compiled_backend_selected_when_built():
    if "cython" not in BACKENDS:
        pytest.skip("compiled extension not built")
    if os.environ.get("LLSKIT_PURE_PYTHON"):
        pytest.skip("pure-Python backend forced")
    assert kernels.BACKEND == "cython"


def test_env_var_forces_python():
    env = dict(os.environ, LLSKIT_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from llskit import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_known_values(name):
    k = BACKENDS[name]
    assert sorted(k.horizontal_strips((1,), 1, 2, 2)) == [(1, 1), (2,)]
    assert k.lr_coefficient((3, 2, 1), (2, 1), (2, 1)) == 2
    assert k.lr_coefficient((2, 2), (1, 1), (1, 1)) == 1
    assert k.lr_coefficient((2,), (1,), (1,)) == 1
    assert k.lr_coefficient((2, 1), (2, 1), ()) == 1


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
@pytest.mark.parametrize("rows, cols", [(2, 2), (3, 3), (3, 4), (2, 5)])
def test_backends_agree(rows, cols):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    parts = [p.parts for p in partitions_in_box(rows, cols)]
    for lam in parts:
        for k in range(1, cols + 1):
            assert sorted(py.horizontal_strips(lam, k, rows, cols)) == sorted(cy.horizontal_strips(lam, k, rows, cols))
    for nu in parts:
        for lam in parts:
            for mu in parts:
                if sum(lam) + sum(mu) != sum(nu):
                    continue
                assert py.lr_coefficient(nu, lam, mu) == cy.lr_coefficient(nu, lam, mu)


def test_benchmark_script_runs():
    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    proc = subprocess.run([sys.executable, str(script), "--repeat", "1", "--json"],
                          capture_output=True, text=True, check=True)
    rows = json.loads(proc.stdout)
    assert len(rows) == 4 and all(row["python_s"] > 0 for row in rows)
