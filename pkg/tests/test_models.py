import os
import sys
import unittest

# Add the project root and src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from pydantic import ValidationError

from polybound.errors import ErrorCode, InputValidationError
from polybound.models import PotentialSpec, SolverConfig, StateIndex, make_state


class TestStateIndex(unittest.TestCase):
    def test_three_dimensional_labels(self):
        state = StateIndex(n=2, l=1, d=3)
        self.assertIsNone(state.parity)
        self.assertEqual(state.class_index, 2)
        self.assertEqual(state.effective_l, 1)
        self.assertEqual(state.centrifugal_lambda, 1.0)
        self.assertEqual(state.label(), "(n=2, l=1, d=3)")

    def test_one_dimensional_parity_classes(self):
        expected = {
            1: ("even", 1, 0, -1.0),
            2: ("odd", 1, 1, 0.0),
            3: ("even", 2, 0, -1.0),
            4: ("odd", 2, 1, 0.0),
        }
        for n, (parity, index, eff_l, lam) in expected.items():
            state = StateIndex(n=n, l=0, d=1)
            self.assertEqual(state.parity, parity)
            self.assertEqual(state.class_index, index)
            self.assertEqual(state.effective_l, eff_l)
            self.assertEqual(state.centrifugal_lambda, lam)

    def test_two_dimensional_lambda_is_half_integer(self):
        self.assertEqual(StateIndex(n=1, l=0, d=2).centrifugal_lambda, -0.5)

    def test_rejects_l_in_one_dimension(self):
        with self.assertRaises(ValidationError):
            StateIndex(n=1, l=1, d=1)

    def test_make_state_translates_errors(self):
        with self.assertRaises(InputValidationError) as ctx:
            make_state(0, 0, 3)
        self.assertEqual(ctx.exception.error_code, ErrorCode.INPUT_INVALID)
        self.assertEqual(ctx.exception.context["n"], 0)


class TestPotentialSpec(unittest.TestCase):
    def test_from_pairs_sorts_terms(self):
        spec = PotentialSpec.from_pairs([(0.1, 4.0), (1.0, 2.0)], d=1)
        self.assertEqual(spec.exponents, (2.0, 4.0))
        self.assertEqual(spec.couplings, (1.0, 0.1))
        self.assertEqual(spec.min_exponent, 2.0)
        self.assertEqual(spec.max_exponent, 4.0)
        self.assertTrue(spec.certified)
        self.assertTrue(spec.confining)

    def test_value_and_scaling(self):
        spec = PotentialSpec.from_pairs([(1.0, 2.0), (0.5, 4.0)], d=3)
        self.assertAlmostEqual(spec.value(2.0), 4.0 + 8.0)
        self.assertEqual(spec.scaled(2.0).couplings, (2.0, 1.0))
        self.assertEqual(spec.with_dimension(1).d, 1)

    def test_scaled_validates_factor(self):
        spec = PotentialSpec.from_pairs([(1.0, 2.0), (0.5, 4.0)], d=3)
        for v in (0.0, -1.0):
            with self.subTest(v=v):
                with self.assertRaises(InputValidationError) as ctx:
                    spec.scaled(v)
                self.assertEqual(ctx.exception.context["v"], v)

    def test_zero_coupling_does_not_break_confinement(self):
        spec = PotentialSpec.from_pairs([(1.0, 2.0), (0.0, 4.0)], d=1)
        self.assertTrue(spec.confining)
        self.assertTrue(spec.certified)
        self.assertFalse(PotentialSpec.from_pairs([(0.0, 2.0)], d=1).confining)

    def test_duplicate_exponent_rejected(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(1.0, 2.0), (2.0, 2.0)])

    def test_negative_coupling_rejected(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(1.0, 2.0), (-0.1, 4.0)])

    def test_fractional_needs_flag(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(1.0, 1.0)])
        spec = PotentialSpec.from_pairs([(1.0, 1.0)], allow_fractional=True)
        self.assertFalse(spec.certified)

    def test_coulomb_needs_flag_and_attraction(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(-1.0, -1.0), (1.0, 2.0)])
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(1.0, -1.0), (1.0, 2.0)], allow_coulomb=True)
        spec = PotentialSpec.from_pairs([(-1.0, -1.0), (1.0, 2.0)], allow_coulomb=True)
        self.assertFalse(spec.certified)
        self.assertTrue(spec.confining)

    def test_zero_exponent_rejected(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([(1.0, 0.0)])

    def test_empty_rejected(self):
        with self.assertRaises(InputValidationError):
            PotentialSpec.from_pairs([])

    def test_describe(self):
        spec = PotentialSpec.from_pairs([(1.0, 2.0), (0.01, 4.0)], d=1)
        self.assertEqual(spec.describe(), "1*r^2 + 0.01*r^4 (d=1)")


class TestSolverConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = SolverConfig()
        self.assertEqual(cfg.abs_tol, 1e-9)
        self.assertIsNone(cfg.r_max)
        self.assertEqual(cfg.summary()["max_iter"], 200)

    def test_invalid_values(self):
        for kwargs in ({"abs_tol": 0.0}, {"ode_rtol": 1e-3}, {"r_max": -1.0}, {"max_iter": 0}):
            with self.subTest(kwargs=kwargs):
                with self.assertRaises(ValidationError):
                    SolverConfig(**kwargs)


if __name__ == "__main__":
    unittest.main()
