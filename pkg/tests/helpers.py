from __future__ import annotations

import os
import sys
import tempfile
from pathlib import Path

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from polybound.models import PotentialSpec, SolverConfig, StateIndex
from polybound.pnumbers import PCache

# Looser than the defaults; every anchor below is checked at >= 1e-6.
FAST = SolverConfig(abs_tol=1e-9, ode_rtol=1e-11)

GROUND_1D = StateIndex(n=1, l=0, d=1)
GROUND_3D = StateIndex(n=1, l=0, d=3)

# Table 1 P-numbers of the pure r^{2m} oscillator, d = 1 ground state.
TABLE1_P = {
    4.0: 0.6482831016477214,
    6.0: 0.7522132877297533,
    8.0: 0.8306928794474723,
    10.0: 0.8927469751677408,
    12.0: 0.9434071878408251,
}


def quartic(lam: float, d: int = 1) -> PotentialSpec:
    return PotentialSpec.from_pairs([(1.0, 2.0), (lam, 4.0)], d=d)


def sextic(lam: float, d: int = 1) -> PotentialSpec:
    return PotentialSpec.from_pairs([(1.0, 2.0), (lam, 6.0)], d=d)


def power(a: float, q: float, d: int) -> PotentialSpec:
    return PotentialSpec.from_pairs([(a, q)], d=d)


class TempCacheMixin:
    """Gives each test a cache file in a private temp directory."""

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.cache_path = Path(self._tmp.name) / "pcache.json"

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def make_cache(self, **kwargs) -> PCache:
        return PCache(self.cache_path, **kwargs)
