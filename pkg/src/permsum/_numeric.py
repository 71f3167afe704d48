"""Small numeric helpers: exact unit phases and float formatting."""
from __future__ import annotations

import cmath
import math

TWO_PI = 2.0 * math.pi
_QUARTER = math.pi / 2.0
_EXACT = (1 + 0j, 1j, -1 + 0j, -1j)


def unit_phase(theta: float) -> complex:
    """Return e^{i theta}, exact when theta is a float multiple of pi/2."""
    k = theta / _QUARTER
    if k == round(k) and abs(k) < 2**52:
        return _EXACT[int(round(k)) % 4]
    return cmath.exp(1j * theta)


def fmt_float(x: float) -> str:
    """Shortest decimal that round-trips (at most 17 significant digits)."""
    return repr(float(x))


def fmt_complex(z: complex) -> str:
    """Dense-matrix token such as ``1.0+0.0j`` or ``-0.5-2.0j``."""
    z = complex(z)
    sign = "+" if math.copysign(1.0, z.imag) > 0 else "-"
    return f"{fmt_float(z.real)}{sign}{fmt_float(abs(z.imag))}j"
