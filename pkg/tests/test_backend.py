import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import BACKENDS
from stacknas import _backend
from stacknas.gbm import PRESETS, gbm_fit

needs_ext = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")


def test_env_forces_fallback():
    env = dict(os.environ, STACKNAS_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "from stacknas import _backend; print(_backend.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


@needs_ext
@pytest.mark.skipif(os.environ.get("STACKNAS_BACKEND", "").lower() == "python", reason="fallback forced")
def test_default_is_compiled():
    assert _backend.BACKEND == "cython"


@needs_ext
@pytest.mark.parametrize("name", ["gbrt-mse", "histgb", "lightgb", "catgb-huber"])
def test_gbm_bit_identical(name):
    rng = np.random.default_rng(0)
    X = rng.integers(-1, 2, size=(200, 10)).astype(float)
    z = X @ rng.normal(size=10) + rng.normal(scale=0.3, size=200)
    cfg = PRESETS[name].with_overrides(n_iterations=40)
    a = gbm_fit(X, z, cfg, backend="python").predict(X, "python")
    b = gbm_fit(X, z, cfg, backend="cython").predict(X, "cython")
    assert a.tobytes() == b.tobytes()
