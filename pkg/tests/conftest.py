import pytest
from hypothesis import settings

from tpm import frames, make_sym_tensor

# keep the whole suite reproducible run to run
settings.register_profile("det", derandomize=True)
settings.load_profile("det")


def random_sym_tensor(rng, n=None, d=None, r=None):
    """Random decomposition-form tensor with non-colinear unit generators."""
    n = n if n is not None else int(rng.integers(1, 5))
    d = d if d is not None else int(rng.integers(2, 6))
    r = r if r is not None else int(rng.integers(1, 7))
    if n == 1:
        r = 1  # in one dimension every pair of generators is colinear
    for _ in range(100):
        V = rng.normal(size=(n, r))
        lam = rng.uniform(0.5, 2.0, size=r) * rng.choice([-1.0, 1.0], size=r)
        T = make_sym_tensor(V, lam, d)
        if T.r == r:
            return T
    raise RuntimeError(f"could not draw a non-colinear (n={n}, r={r}) decomposition")


@pytest.fixture(scope="session")
def mb():
    return frames.mercedes_benz()


@pytest.fixture(scope="session")
def mb_cols(mb):
    return mb.V[:, 0], mb.V[:, 1], mb.V[:, 2]
