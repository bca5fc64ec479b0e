import numpy as np
import pytest

from braidfib.rootfinding import aberth_roots, polyval, polyder


def test_known_roots():
    r = np.sort_complex(aberth_roots([-0.25, 0.0, 1.0]))
    assert np.allclose(r, [-0.5, 0.5], atol=1e-12)
    r3 = np.sort_complex(aberth_roots([0.0, -0.75, 0.0, 1.0]))
    assert np.allclose(r3, [-np.sqrt(3) / 2, 0.0, np.sqrt(3) / 2], atol=1e-12)


def test_against_numpy_roots():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        coeffs = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
        coeffs[-1] = 1.0
        ours = np.sort_complex(aberth_roots(coeffs))
        ref = np.sort_complex(np.roots(coeffs[::-1]))
        assert np.max(np.abs(ours - ref)) < 1e-8


def test_backward_error_bound():
    rng = np.random.default_rng(1)
    for _ in range(20):
        coeffs = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        coeffs[-1] = 1.0
        z = aberth_roots(coeffs, tol=1e-13)
        scale = polyval(np.abs(coeffs), np.abs(z)).real
        assert np.all(np.abs(polyval(coeffs, z)) <= 1e-12 * scale)


def test_warm_start_continuation():
    base = np.array([-1.0, 0.0, 0.0, 1.0], dtype=complex)
    z = aberth_roots(base)
    for t in np.linspace(0, 0.5, 20):
        coeffs = base.copy()
        coeffs[0] = -np.exp(1j * t)
        z = aberth_roots(coeffs, warm=z)
    assert np.max(np.abs(np.sort_complex(z) -
                         np.sort_complex(np.roots([1, 0, 0, -np.exp(0.5j)])))) < 1e-10


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        aberth_roots([1.0, 2.0])  # not monic
    with pytest.raises(ValueError):
        aberth_roots([1.0])


def test_polyder():
    assert np.allclose(polyder([1.0, 2.0, 3.0]), [2.0, 6.0])
