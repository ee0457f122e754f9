import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def central_difference(fn, arrays, h=1e-5):
    """Finite-difference gradient of scalar fn() w.r.t. every entry of the
    given dict of arrays (mutated in place around fn evaluations)."""
    grads = {}
    for name, arr in arrays.items():
        g = np.zeros_like(arr)
        it = np.nditer(arr, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            orig = arr[idx]
            arr[idx] = orig + h
            up = fn()
            arr[idx] = orig - h
            down = fn()
            arr[idx] = orig
            g[idx] = (up - down) / (2.0 * h)
            it.iternext()
        grads[name] = g
    return grads


def max_relative_error(analytic, numeric):
    """Max-norm relative error with a floor absorbing finite-difference
    noise on (near-)zero gradients; a wrongly large analytic gradient
    still dominates the scale and is caught."""
    analytic = np.asarray(analytic)
    numeric = np.asarray(numeric)
    scale = max(float(np.abs(numeric).max()), float(np.abs(analytic).max()), 1e-6)
    return float(np.abs(analytic - numeric).max()) / scale
