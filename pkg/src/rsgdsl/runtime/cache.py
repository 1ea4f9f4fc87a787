"""Time-windowed cache of rigid transforms."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from rsgdsl.rigid import HomMatrix

DEFAULT_WINDOW_NS = 10 * 10**9


class CacheError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class TransformCache:
    """Entries sorted by strictly increasing stamp (integer nanoseconds).

    Inserting a stamp evicts every entry older than ``stamp - window_ns``.
    Lookup returns the entry closest to the query; ties go to the earlier
    entry and queries outside ``[oldest, latest]`` miss.
    """

    window_ns: int = DEFAULT_WINDOW_NS
    stamps: list[int] = field(default_factory=list)
    matrices: list[HomMatrix] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.stamps)

    @property
    def latest(self) -> int:
        return self.stamps[-1]

    @property
    def oldest(self) -> int:
        return self.stamps[0]

    def entries(self) -> list[tuple[int, HomMatrix]]:
        return list(zip(self.stamps, self.matrices))

    def insert(self, stamp: int, matrix: HomMatrix) -> None:
        if self.stamps and stamp <= self.stamps[-1]:
            raise CacheError(
                "NONMONOTONE_STAMP",
                f"stamp {stamp} ns is not after the latest cached stamp {self.stamps[-1]} ns",
            )
        self.stamps.append(stamp)
        self.matrices.append(matrix)
        cut = bisect.bisect_left(self.stamps, stamp - self.window_ns)
        if cut:
            del self.stamps[:cut]
            del self.matrices[:cut]

    def lookup(self, stamp: int) -> HomMatrix:
        if not self.stamps or stamp < self.stamps[0] or stamp > self.stamps[-1]:
            span = f"[{self.stamps[0]}, {self.stamps[-1]}]" if self.stamps else "empty cache"
            raise CacheError("CACHE_MISS", f"stamp {stamp} ns outside cached range {span}")
        i = bisect.bisect_left(self.stamps, stamp)
        if self.stamps[i] == stamp or i == 0:
            return self.matrices[i]
        before, after = self.stamps[i - 1], self.stamps[i]
        return self.matrices[i - 1] if stamp - before <= after - stamp else self.matrices[i]
