import math

import numpy as np
import pytest

from osculants.series import SparseHypersurface

# Grid of primitive (d1, d2)-necklace counts, 1 <= d1, d2 <= 8.
PRIMITIVE_GRID = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, 1, 2, 2, 3, 3, 4, 4],
    [1, 2, 3, 5, 7, 9, 12, 15],
    [1, 2, 5, 8, 14, 20, 30, 40],
    [1, 3, 7, 14, 25, 42, 66, 99],
    [1, 3, 9, 20, 42, 75, 132, 212],
    [1, 4, 12, 30, 66, 132, 245, 429],
    [1, 4, 15, 40, 99, 212, 429, 800],
]

SIX_REAL_COEFFS = [-586971, -481753, 114414, -361929, 152011, -616310, 244262]

# Printed (4,4)-interpolants of the six-real curve, coefficients of t, t^2, t^3, t^4.
SIX_REAL_PRINTED = {
    "s1": (["1", "-.113-1.053i", ".028-.204i", ".166+1.601i"], ["-.587", "-.415+.618i", ".207+1.134i", ".003-1.219i"]),
    "s2": (["1", "-.113+1.053i", ".028+.204i", ".166-1.601i"], ["-.587", "-.415-.618i", ".207-1.134i", ".003+1.219i"]),
    "s3": (["1", "-.065", "-.537", ".031"], ["-.587", "-.444", ".492", ".113"]),
    "s4": (["1", "2.234", "4.516", "-9.902"], ["-.587", "-1.793", "-4.689", "-.538"]),
    "s5": (["1", ".388", "-.787", "-.347"], ["-.587", "-.709", ".203", ".661"]),
    "s6": (["1", "-1.772", "2.333", "8.902"], ["-.587", ".558", ".452", "-9.956"]),
    "s7": (["1", "-.349", "-.799", ".162"], ["-.587", "-.277", ".92", ".134"]),
    "s8": (["1", ".031", "-2.228", "-.613"], ["-.587", "-.5", "1.392", "2.155"]),
}


def parse_printed(text: str) -> tuple[complex, float]:
    """A printed coefficient and its half-unit in the last printed digit."""
    import re

    m = re.fullmatch(r"([+-]?[\d.]+)(?:([+-][\d.]+)i)?", text)
    re_s, im_s = m.group(1), m.group(2)

    def decimals(s):
        return len(s.split(".")[1]) if "." in s else 0

    digits = max(decimals(re_s), decimals(im_s) if im_s else 0)
    value = complex(float(re_s), float(im_s) if im_s else 0.0)
    return value, 0.5 * 10.0 ** (-digits)


def six_real_curve() -> SparseHypersurface:
    terms = {(k + 1, 0): c / 1e6 for k, c in enumerate(SIX_REAL_COEFFS)}
    terms[(0, 1)] = -1.0
    return SparseHypersurface(2, terms)


@pytest.fixture
def six_real():
    return six_real_curve()


@pytest.fixture
def parabola():
    return SparseHypersurface(2, {(0, 1): 1.0, (2, 0): -1.0})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def _mobius(n):
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def _multinomial(d):
    out = math.factorial(sum(d))
    for x in d:
        out //= math.factorial(x)
    return out


def mobius_count(d):
    """Independent closed form: (1/|d|) sum_{k | gcd} mu(k) C(|d|/k; d/k)."""
    N, g = sum(d), math.gcd(*d)
    s = sum(_mobius(k) * _multinomial([x // k for x in d]) for k in range(1, g + 1) if g % k == 0)
    assert s % N == 0
    return s // N
