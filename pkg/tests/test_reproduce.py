import csv
import io
import json
import os
import sys
import unittest

# Add the project root and src to sys.path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "src")))

from polybound.errors import InputValidationError
from polybound.pnumbers import PCache
from polybound.reference import TABLE2, TABLE3, TABLES, TOLERANCES
from polybound.reproduce import Reproducer, to_csv, to_json
from polybound.results import TableCell

from tests.helpers import FAST


class TestReferenceTables(unittest.TestCase):
    def test_shapes(self):
        for name, table in TABLES.items():
            with self.subTest(table=name):
                self.assertIn(name, TOLERANCES)
                for _, values in table.rows:
                    self.assertEqual(len(values), len(table.columns))
        self.assertEqual(len(TABLE2.rows), 11)
        self.assertEqual(TABLE3.m, 3)

    def test_value_lookup(self):
        self.assertEqual(TABLE2.value("1000.0", "lower"), "10.19449")
        with self.assertRaises(KeyError):
            TABLE2.value("3.0", "exact")


class TestReproducer(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cache = PCache(None)

    def test_table_one(self):
        result = Reproducer.run("1", cfg=FAST, cache=self.cache)
        self.assertTrue(result.ok, result.mismatches)
        self.assertTrue(result.relative)
        self.assertEqual([row.key for row in result.rows], ["2", "3", "4", "5", "6"])

    def test_table_two(self):
        result = Reproducer.run("2", cfg=FAST, cache=self.cache)
        self.assertTrue(result.ok, [(key, cell.column, cell.computed) for key, cell in result.mismatches])
        row = next(row for row in result.rows if row.key == "0.01")
        for column, printed in zip(TABLE2.columns, ("1.00737", "1.00614", "1.00739", "1.00783", "1.00697")):
            self.assertAlmostEqual(row.cell(column).computed, float(printed), delta=2e-4)

    def test_table_three(self):
        result = Reproducer.run("3", cfg=FAST, cache=self.cache)
        self.assertTrue(result.ok, [(key, cell.column, cell.computed) for key, cell in result.mismatches])
        row = next(row for row in result.rows if row.key == "2000.0")
        self.assertAlmostEqual(row.cell("exact").computed, 7.70174, delta=2e-4)
        self.assertAlmostEqual(row.cell("E_L").computed, 7.69925, delta=2e-4)

    def test_table_three_flags_misprinted_exact_value(self):
        result = Reproducer.run("3", cfg=FAST, cache=self.cache)
        cell = next(row for row in result.rows if row.key == "1.0").cell("exact")
        self.assertEqual(cell.status, "flagged")
        self.assertAlmostEqual(cell.computed, 1.4356246, delta=1e-6)
        self.assertIn("1.43653", cell.note)

    def test_text_anchors_flag_unreproduced_upper(self):
        result = Reproducer.run("text", cfg=FAST, cache=self.cache)
        self.assertTrue(result.ok)
        upper = next(row for row in result.rows if row.key == "upper_A").cell("value")
        self.assertEqual(upper.status, "flagged")
        self.assertAlmostEqual(upper.computed, 1.30074, delta=2e-5)
        self.assertIn("1.32038", upper.note)
        lower = next(row for row in result.rows if row.key == "lower_A").cell("value")
        self.assertEqual(lower.status, "ok")

    def test_tight_tolerance_reports_mismatches(self):
        result = Reproducer.run("1", tol=1e-14, cfg=FAST, cache=self.cache)
        self.assertFalse(result.ok)
        self.assertEqual(result.tolerance, 1e-14)
        self.assertTrue(all(cell.status == "mismatch" for _, cell in result.mismatches))

    def test_rejects_unknown_table_and_bad_tolerance(self):
        with self.assertRaises(InputValidationError):
            Reproducer.run("7")
        with self.assertRaises(InputValidationError):
            Reproducer.run("1", tol=0.0)


class TestReproducerAsync(unittest.IsolatedAsyncioTestCase):
    async def test_arun_matches_run(self):
        cache = PCache(None)
        sync_result = Reproducer.run("text", cfg=FAST, cache=cache)
        async_result = await Reproducer.arun("text", cfg=FAST, cache=cache)
        self.assertEqual(to_json(sync_result), to_json(async_result))


class TestOutputFormats(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.result = Reproducer.run("text", cfg=FAST, cache=PCache(None))

    def test_csv_layout(self):
        rows = list(csv.reader(io.StringIO(to_csv(self.result))))
        self.assertEqual(rows[0], ["quantity", "value", "value_printed", "value_status"])
        self.assertEqual([row[0] for row in rows[1:]], ["lower_A", "upper_A", "exact"])
        self.assertEqual(rows[1][1], f"{self.result.rows[0].cells[0].computed:.5f}")
        self.assertEqual(rows[2][3], "flagged")

    def test_json_is_deterministic(self):
        first = to_json(self.result)
        second = to_json(Reproducer.run("text", cfg=FAST, cache=PCache(None)))
        self.assertEqual(first, second)
        payload = json.loads(first)
        self.assertEqual(payload["table"], "text")
        self.assertTrue(payload["ok"])
        self.assertIn("provenance", payload)

    def test_cell_formatting(self):
        cell = TableCell(column="lower", computed=3.8416391234, printed="3.841639", status="ok")
        self.assertEqual(cell.decimals, 6)
        self.assertEqual(cell.formatted(), "3.841639")
        self.assertAlmostEqual(cell.delta, 1.234e-7, places=12)


if __name__ == "__main__":
    unittest.main()
