"""Tests for src.utils.cache."""
import tempfile
import unittest
from pathlib import Path

from src.core.polynomial import GREVLEX, LEX, rational_ring
from src.services.ideal_service import Ideal, configured
from src.utils.cache import HEADER, GroebnerCache, cache_key

R = rational_ring("x", "y")


class TestCacheKey(unittest.TestCase):
    def test_generator_order_does_not_matter(self) -> None:
        a = [R.parse("x^2"), R.parse("y - 1")]
        self.assertEqual(cache_key(R, a, GREVLEX), cache_key(R, list(reversed(a)), GREVLEX))

    def test_order_matters(self) -> None:
        a = [R.parse("x^2"), R.parse("y - 1")]
        self.assertNotEqual(cache_key(R, a, GREVLEX), cache_key(R, a, LEX))


class TestGroebnerCache(unittest.TestCase):
    def setUp(self) -> None:
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.tmp.cleanup()

    def test_persisted_entry_is_read_back(self) -> None:
        gens = [R.parse("x^2 - 1"), R.parse("x - 1")]
        writer = GroebnerCache(self.tmp.name)
        with configured(cache=writer):
            basis = Ideal(R, gens).groebner(GREVLEX)
        self.assertEqual(writer.writes, 1)
        reader = GroebnerCache(self.tmp.name)
        self.assertEqual(reader.get(R, gens, GREVLEX), basis)
        self.assertEqual(reader.hits, 1)

    def test_miss_is_counted(self) -> None:
        cache = GroebnerCache(self.tmp.name)
        self.assertIsNone(cache.get(R, [R.parse("y")], GREVLEX))
        self.assertEqual(cache.misses, 1)

    def test_memory_only_cache_writes_nothing(self) -> None:
        cache = GroebnerCache(self.tmp.name, persist=False)
        cache.put(R, [R.parse("x")], GREVLEX, [R.parse("x")])
        self.assertEqual(cache.entries(), [])
        self.assertEqual(cache.get(R, [R.parse("x")], GREVLEX), (R.parse("x"),))

    def test_malformed_entry_is_ignored(self) -> None:
        gens = [R.parse("x")]
        key = cache_key(R, gens, GREVLEX)
        path = Path(self.tmp.name) / key[:2] / f"{key}.gb"
        path.parent.mkdir(parents=True)
        path.write_text("garbage\n", encoding="utf-8")
        with self.assertLogs("src.utils.cache", level="WARNING"):
            self.assertIsNone(GroebnerCache(self.tmp.name).get(R, gens, GREVLEX))

    def test_wrong_ring_header_is_ignored(self) -> None:
        gens = [R.parse("x")]
        key = cache_key(R, gens, GREVLEX)
        path = Path(self.tmp.name) / key[:2] / f"{key}.gb"
        path.parent.mkdir(parents=True)
        path.write_text(f"{HEADER}\nring: F2[x,y]\norder: grevlex\nx\n", encoding="utf-8")
        with self.assertLogs("src.utils.cache", level="WARNING"):
            self.assertIsNone(GroebnerCache(self.tmp.name).get(R, gens, GREVLEX))

    def test_clear(self) -> None:
        cache = GroebnerCache(self.tmp.name)
        cache.put(R, [R.parse("x")], GREVLEX, [R.parse("x")])
        cache.put(R, [R.parse("y")], GREVLEX, [R.parse("y")])
        self.assertEqual(len(cache.entries()), 2)
        self.assertEqual(cache.clear(), 2)
        self.assertEqual(cache.entries(), [])


if __name__ == "__main__":
    unittest.main()
