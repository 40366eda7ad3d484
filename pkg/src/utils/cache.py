"""Content-addressed Gröbner basis cache.

Entries are plain text files named by the SHA-256 of (ring, order, generators).
Writes go through a temp file and ``os.replace`` so concurrent writers race
harmlessly: entries are content-addressed, so any winner is correct.
"""
from __future__ import annotations

import hashlib
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.errors import ParseError
from ..core.polynomial import MonomialOrder, Polynomial, PolynomialRing

logger = logging.getLogger(__name__)

HEADER = "# hilbloc groebner cache v1"


def cache_key(ring: PolynomialRing, generators: Iterable[Polynomial], order: MonomialOrder) -> str:
    gens = sorted(str(g) for g in generators if g)
    payload = "\n".join([repr(ring), order.name] + gens)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class GroebnerCache:
    """In-memory map backed by an optional directory of text entries."""

    def __init__(self, directory: Optional[str] = None, persist: bool = True):
        self.directory = Path(directory).expanduser() if directory else None
        self.persist = persist and self.directory is not None
        self._memory: Dict[str, Tuple[Polynomial, ...]] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.writes = 0

    def _path(self, key: str) -> Path:
        assert self.directory is not None
        return self.directory / key[:2] / f"{key}.gb"

    def get(self, ring: PolynomialRing, generators: Sequence[Polynomial], order: MonomialOrder) -> Optional[Tuple[Polynomial, ...]]:
        key = cache_key(ring, generators, order)
        with self._lock:
            found = self._memory.get(key)
        if found is None and self.persist:
            found = self._read(key, ring)
            if found is not None:
                with self._lock:
                    self._memory[key] = found
        with self._lock:
            if found is None:
                self.misses += 1
            else:
                self.hits += 1
        return found

    def put(self, ring: PolynomialRing, generators: Sequence[Polynomial], order: MonomialOrder, basis: Sequence[Polynomial]) -> None:
        key = cache_key(ring, generators, order)
        entry = tuple(basis)
        with self._lock:
            self._memory[key] = entry
        if self.persist:
            self._write(key, ring, order, entry)

    def _read(self, key: str, ring: PolynomialRing) -> Optional[Tuple[Polynomial, ...]]:
        path = self._path(key)
        if not path.is_file():
            return None
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError:
            return None
        if not lines or lines[0] != HEADER or len(lines) < 3 or lines[1] != f"ring: {ring!r}":
            logger.warning("ignoring malformed cache entry %s", path)
            return None
        try:
            return tuple(ring.parse(line) for line in lines[3:] if line.strip())
        except ParseError:
            logger.warning("ignoring unparsable cache entry %s", path)
            return None

    def _write(self, key: str, ring: PolynomialRing, order: MonomialOrder, basis: Tuple[Polynomial, ...]) -> None:
        path = self._path(key)
        text = "\n".join([HEADER, f"ring: {ring!r}", f"order: {order.name}"] + [str(g) for g in basis]) + "\n"
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=str(path.parent), suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp, path)
            with self._lock:
                self.writes += 1
        except OSError as exc:
            logger.warning("could not write cache entry %s: %s", path, exc)

    def entries(self) -> List[Path]:
        if not self.directory or not self.directory.is_dir():
            return []
        return sorted(self.directory.glob("*/*.gb"))

    def clear(self) -> int:
        """Delete every persisted entry; returns how many files were removed."""
        removed = 0
        for path in self.entries():
            try:
                path.unlink()
                removed += 1
            except OSError:
                pass
        with self._lock:
            self._memory.clear()
        return removed
