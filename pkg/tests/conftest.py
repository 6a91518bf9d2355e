import numpy as np


def match_multisets(got, expected, tol):
    """Greedy pairing of two complex multisets within tol; asserts on failure."""
    got = list(np.asarray(got, dtype=np.complex128))
    expected = list(np.asarray(expected, dtype=np.complex128))
    assert len(got) == len(expected)
    remaining = expected[:]
    for g in got:
        dists = [abs(g - e) for e in remaining]
        j = int(np.argmin(dists))
        assert dists[j] <= tol, f"no partner for {g} within {tol} (closest {dists[j]:.3e})"
        remaining.pop(j)
