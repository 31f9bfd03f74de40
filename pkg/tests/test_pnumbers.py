import json
import os
import sys
import unittest
from unittest.mock import patch

# Add the project root and src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

import mpmath

from polybound.constants import CACHE_ENV_VAR, DEFAULT_CACHE_FILENAME
from polybound.errors import CacheError, DomainError, GammaOverflowError, UnsupportedStateError
from polybound.models import StateIndex
from polybound.pnumbers import (
    PCache,
    epsilon_from_p,
    p_coulomb,
    p_from_energy,
    p_gamma_lower,
    p_gamma_record,
    p_gamma_upper,
    p_harmonic,
    p_lookup,
    p_table,
)
from polybound.radial_solver import eigenvalue

from tests.helpers import FAST, GROUND_1D, GROUND_3D, TABLE1_P, TempCacheMixin, power

mpmath.mp.dps = 30


def _mp_gamma_lower(q, d):
    q, d = mpmath.mpf(q), mpmath.mpf(d)
    e = mpmath.e
    return (
        mpmath.sqrt(d * e / 2)
        * (d / (q * e)) ** (1 / q)
        * (mpmath.gamma(1 + d / 2) / mpmath.gamma(1 + d / q)) ** (1 / d)
    )


def _mp_gamma_upper(q, d):
    q, d = mpmath.mpf(q), mpmath.mpf(d)
    return mpmath.sqrt(d / 2) * (mpmath.gamma((d + q) / 2) / mpmath.gamma(d / 2)) ** (1 / q)


class TestEnergyEncoding(unittest.TestCase):
    def test_p_from_energy_examples(self):
        self.assertAlmostEqual(p_from_energy(2.0, 3.0), 1.5, places=14)
        self.assertAlmostEqual(p_from_energy(4.0, 1.06036209), 0.6482831016, delta=1e-8)
        self.assertAlmostEqual(p_from_energy(6.0, 1.14480245), 0.7522133, delta=1e-7)

    def test_epsilon_from_p_inverts(self):
        for q in (0.5, 1.0, 2.0, 4.0, 7.5):
            for eps in (0.3, 1.0, 12.0):
                with self.subTest(q=q, eps=eps):
                    self.assertAlmostEqual(epsilon_from_p(q, p_from_energy(q, eps)), eps, delta=1e-12 * eps)

    def test_domain_errors(self):
        with self.assertRaises(DomainError):
            p_from_energy(-1.0, 1.0)
        with self.assertRaises(DomainError):
            p_from_energy(4.0, 0.0)
        with self.assertRaises(DomainError):
            epsilon_from_p(4.0, -0.1)


class TestClosedForms(unittest.TestCase):
    def test_harmonic(self):
        self.assertEqual(p_harmonic(GROUND_3D), 1.5)
        self.assertEqual(p_harmonic(StateIndex(n=2, l=1, d=3)), 4.5)
        self.assertEqual(p_harmonic(GROUND_1D), 0.5)

    def test_coulomb(self):
        self.assertEqual(p_coulomb(GROUND_3D), 1.0)
        self.assertEqual(p_coulomb(StateIndex(n=2, l=0, d=3)), 2.0)
        self.assertEqual(p_coulomb(StateIndex(n=1, l=0, d=2)), 0.5)

    def test_coulomb_undefined_on_line(self):
        with self.assertRaises(UnsupportedStateError):
            p_coulomb(GROUND_1D)

    def test_harmonic_matches_solver(self):
        for d in (1, 2, 3, 4, 5):
            for n in (1, 2, 3):
                for l in ((0,) if d == 1 else (0, 1, 2)):
                    state = StateIndex(n=n, l=l, d=d)
                    with self.subTest(state=state.label()):
                        energy = eigenvalue(power(1.0, 2.0, d), state, FAST)
                        self.assertAlmostEqual(p_from_energy(2.0, energy), p_harmonic(state), delta=1e-7)


class TestGammaEstimates(unittest.TestCase):
    def test_exact_at_harmonic(self):
        for d in (1, 2, 3, 5, 10):
            with self.subTest(d=d):
                self.assertAlmostEqual(p_gamma_lower(2.0, d), d / 2.0, delta=1e-12)
                self.assertAlmostEqual(p_gamma_upper(2.0, d), d / 2.0, delta=1e-12)

    def test_match_high_precision_oracle(self):
        for q in (3.0, 4.0, 6.0, 10.0):
            for d in (1, 3, 7):
                with self.subTest(q=q, d=d):
                    self.assertAlmostEqual(p_gamma_lower(q, d), float(_mp_gamma_lower(q, d)), delta=1e-12)
                    self.assertAlmostEqual(p_gamma_upper(q, d), float(_mp_gamma_upper(q, d)), delta=1e-12)

    def test_line_values(self):
        self.assertAlmostEqual(p_gamma_lower(4.0, 1), 0.6277, delta=2e-4)
        self.assertAlmostEqual(p_gamma_lower(6.0, 1), 0.69935, delta=5e-5)
        self.assertAlmostEqual(p_gamma_upper(4.0, 1), 0.65806, delta=5e-5)
        self.assertAlmostEqual(p_gamma_upper(6.0, 1), 0.78521, delta=5e-5)

    def test_sandwich_table_values(self):
        for q, p in TABLE1_P.items():
            with self.subTest(q=q):
                self.assertLess(p_gamma_lower(q, 1), p)
                self.assertGreater(p_gamma_upper(q, 1), p)

    def test_large_dimension_stays_finite(self):
        self.assertGreater(p_gamma_upper(4.0, 400), 0.0)

    def test_overflow_raises(self):
        with self.assertRaises(GammaOverflowError):
            p_gamma_lower(1e-306, 1)

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            p_gamma_lower(0.0, 1)
        with self.assertRaises(DomainError):
            p_gamma_upper(4.0, 0)

    def test_record(self):
        record = p_gamma_record(4.0, 1, "upper")
        self.assertEqual(record.source, "gamma_upper")
        self.assertEqual(record.state, GROUND_1D)

    def test_record_rejects_bad_dimension(self):
        with self.assertRaises(DomainError) as ctx:
            p_gamma_record(4.0, 0, "lower")
        self.assertEqual(ctx.exception.context["d"], 0)

    def test_record_json_precision(self):
        record = p_gamma_record(4.0, 1, "lower")
        self.assertEqual(record.dict()["P"], float(f"{record.P:.10g}"))
        self.assertIsNone(record.dict()["epsilon"])


class TestLookup(TempCacheMixin, unittest.TestCase):
    def test_closed_form_records(self):
        record = p_lookup(2.0, GROUND_3D)
        self.assertEqual(record.P, 1.5)
        self.assertEqual(record.source, "closed_form")
        self.assertEqual(p_lookup(-1.0, GROUND_3D).P, 1.0)

    def test_rejected_exponents(self):
        for q in (0.0, -0.5, -2.0):
            with self.subTest(q=q):
                with self.assertRaises(DomainError):
                    p_lookup(q, GROUND_3D)

    def test_table_one_values(self):
        cache = self.make_cache()
        for q, expected in TABLE1_P.items():
            with self.subTest(q=q):
                record = p_lookup(q, GROUND_1D, FAST, cache)
                self.assertEqual(record.source, "numeric")
                self.assertAlmostEqual(record.P, expected, delta=1e-5 * expected)
                self.assertAlmostEqual(record.P**q, expected**q, delta=1e-5 * expected**q)

    def test_cache_hit_and_persistence(self):
        cache = self.make_cache()
        first = p_lookup(4.0, GROUND_1D, FAST, cache)
        self.assertEqual(cache.stats()["misses"], 1)
        self.assertTrue(self.cache_path.exists())

        reopened = PCache.open(self.cache_path)
        self.assertEqual(len(reopened), 1)
        with patch("polybound.pnumbers.pure_power_eigenvalue") as solver:
            second = p_lookup(4.0, GROUND_1D, FAST, reopened)
            solver.assert_not_called()
        self.assertEqual(second.P, first.P)
        self.assertEqual(reopened.stats()["hits"], 1)

    def test_cache_keyed_by_tolerance(self):
        cache = self.make_cache()
        p_lookup(4.0, GROUND_1D, FAST, cache)
        self.assertIsNone(cache.get(4.0, GROUND_1D, 1e-6))

    def test_closed_forms_are_not_cached(self):
        cache = self.make_cache()
        p_lookup(2.0, GROUND_1D, FAST, cache)
        self.assertEqual(len(cache), 0)
        self.assertFalse(self.cache_path.exists())

    def test_cache_file_layout(self):
        cache = self.make_cache()
        p_lookup(4.0, GROUND_1D, FAST, cache)
        payload = json.loads(self.cache_path.read_text(encoding="utf-8"))
        self.assertEqual(len(payload), 1)
        self.assertEqual(payload[0]["source"], "numeric")
        self.assertEqual(payload[0]["abs_tol"], FAST.abs_tol)

    def test_cache_keeps_full_precision(self):
        cache = self.make_cache()
        record = p_lookup(4.0, GROUND_1D, FAST, cache)
        payload = json.loads(self.cache_path.read_text(encoding="utf-8"))
        self.assertEqual(payload[0]["P"], record.P)
        self.assertEqual(payload[0]["epsilon"], record.epsilon)
        self.assertEqual(record.dict()["epsilon"], float(f"{record.epsilon:.10g}"))

    def test_clear(self):
        cache = self.make_cache()
        p_lookup(4.0, GROUND_1D, FAST, cache)
        self.assertEqual(cache.clear(), 1)
        self.assertFalse(self.cache_path.exists())
        self.assertEqual(cache.records(), [])

    def test_corrupt_cache_raises(self):
        self.cache_path.write_text("{not json", encoding="utf-8")
        with self.assertRaises(CacheError) as ctx:
            PCache.open(self.cache_path)
        self.assertEqual(ctx.exception.exit_code, 4)

    def test_invalid_entry_raises(self):
        self.cache_path.write_text(json.dumps([{"q": 4.0}]), encoding="utf-8")
        with self.assertRaises(CacheError) as ctx:
            PCache.open(self.cache_path)
        self.assertEqual(ctx.exception.context["index"], 0)

    def test_path_precedence(self):
        with patch.dict(os.environ, {CACHE_ENV_VAR: "/tmp/from-env.json"}):
            self.assertEqual(str(PCache.resolve_path("explicit.json")), "explicit.json")
            self.assertEqual(str(PCache.resolve_path()), "/tmp/from-env.json")
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(str(PCache.resolve_path()), DEFAULT_CACHE_FILENAME)

    def test_memory_only_cache(self):
        cache = PCache(None)
        p_lookup(4.0, GROUND_1D, FAST, cache)
        self.assertEqual(len(cache), 1)
        self.assertIsNone(cache.stats()["path"])


class TestPTable(unittest.TestCase):
    def test_increasing_in_q(self):
        records = p_table([2.0, 4.0, 6.0], GROUND_1D, FAST)
        values = [record.P for record in records]
        self.assertEqual(values[0], 0.5)
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))

    def test_excited_state_increasing_in_q(self):
        state = StateIndex(n=2, l=1, d=3)
        values = [record.P for record in p_table([2.0, 3.0, 4.0], state, FAST)]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))


if __name__ == "__main__":
    unittest.main()
