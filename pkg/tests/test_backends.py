"""Parity between the compiled kernel extension and the NumPy fallback."""

import numpy as np
import pytest

from retroq import _backend
from retroq._backend import pykernels
from retroq.equivalence import signature
from retroq.model import DensityOperator, builtin_belief
from retroq.retrodiction import petz_extended
from retroq.sampling import random_belief, random_channel, random_density

from .conftest import assert_close

compiled = _backend._BY_NAME["compiled"]
needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


@pytest.fixture
def both_backends():
    if compiled is None:
        pytest.skip("compiled kernels not built")
    return pykernels, compiled


@pytest.fixture(params=("python", "compiled"))
def active_backend(request):
    if request.param not in _backend.available():
        pytest.skip(f"{request.param} backend not built")
    previous = _backend.impl.NAME
    _backend.use(request.param)
    yield request.param
    _backend.use(previous)


def _rand_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@needs_compiled
def test_kraus_kernels_agree(rng, both_backends):
    py, cy = both_backends
    for _ in range(30):
        n, dout, din = rng.integers(1, 5), rng.integers(1, 6), rng.integers(1, 6)
        ks = _rand_complex(rng, n, dout, din)
        rho = _rand_complex(rng, din, din)
        y = _rand_complex(rng, dout, dout)
        assert_close(py.kraus_apply(ks, rho), cy.kraus_apply(ks, rho), 1e-12)
        assert_close(py.kraus_adjoint_apply(ks, y), cy.kraus_adjoint_apply(ks, y), 1e-12)


@needs_compiled
def test_partial_trace_agrees(rng, both_backends):
    py, cy = both_backends
    for _ in range(60):
        nfac = int(rng.integers(1, 5))
        dims = tuple(int(d) for d in rng.integers(1, 4, size=nfac))
        side = int(np.prod(dims))
        m = _rand_complex(rng, side, side)
        keep = tuple(i for i in range(nfac) if rng.integers(0, 2))
        a = py.partial_trace(m, dims, keep)
        b = cy.partial_trace(m, dims, keep)
        assert a.shape == b.shape
        assert_close(a, b, 1e-12, f"dims={dims} keep={keep}")


@needs_compiled
def test_sandwich_and_signature_agree(rng, both_backends):
    py, cy = both_backends
    for _ in range(30):
        ds, dr = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        side = ds * dr
        root = _rand_complex(rng, side, side)
        root = (root + root.conj().T) / 2
        core = _rand_complex(rng, ds, ds)
        assert_close(py.petz_sandwich(root, core, ds, dr),
                     cy.petz_sandwich(root, core, ds, dr), 1e-11)
        assert_close(py.signature_sum(root, ds, dr),
                     cy.signature_sum(root, ds, dr), 1e-11)


def test_engine_results_identical_across_backends(rng):
    """End-to-end: updates and signatures match under either backend."""
    if len(_backend.available()) < 2:
        pytest.skip("only one backend built")
    cases = []
    for _ in range(5):
        belief = random_belief(rng, 2, int(rng.integers(1, 4)), kind="mixed")
        channel = random_channel(rng, 2, 2)
        sigma = random_density(rng, 2)
        cases.append((belief, channel, sigma))
    results = {}
    previous = _backend.impl.NAME
    try:
        for name in _backend.available():
            _backend.use(name)
            outs = []
            for belief, channel, sigma in cases:
                res = petz_extended(channel, belief, sigma)
                outs.append((res.updated_joint.matrix, signature(belief).operator))
            results[name] = outs
    finally:
        _backend.use(previous)
    ref = results["python"]
    for name, outs in results.items():
        for (j1, s1), (j2, s2) in zip(ref, outs):
            assert_close(j1, j2, 1e-12, f"joint update via {name}")
            assert_close(s1, s2, 1e-12, f"signature via {name}")


def test_backend_selection_api(active_backend):
    assert _backend.impl.NAME == active_backend
    belief = builtin_belief("proper_01")
    sigma = DensityOperator(np.diag([1.0, 0.0]).astype(complex))
    from retroq.model import measure_z

    out = petz_extended(measure_z(), belief, sigma).updated_s.matrix
    assert_close(out, np.diag([1.0, 0.0]), 1e-12, f"update via {active_backend}")


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        _backend.use("fortran")
