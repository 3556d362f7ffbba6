"""Operation counters that stand in for wall-clock latency.

Counter semantics:

- dentries_visited: one per path component resolved through the dentry hash
  table (hits only; a failed final probe does not count).
- char_comparisons: per-character work. A component resolved by the hash
  table costs two scans of its name (hash + verification). Pivot-scan and
  full-path-probe costs are added by their respective strategies.
- effective_search_ratio: distinct dentries ever resolved divided by total
  dentry searches; measures how redundant the walk traffic was.
- wall_time: per-phase seconds; diagnostic only, excluded from CSV output so
  identical-seed runs serialize byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(slots=True)
class Metrics:
    dentries_visited: int = 0
    char_comparisons: int = 0
    lookups: int = 0
    pivot_hits: int = 0
    fallbacks: int = 0
    entries_touched: int = 0
    skipped_prefix_histogram: dict[int, int] = field(default_factory=dict)
    distinct_resolved: set[int] = field(default_factory=set)
    wall_time: dict[str, float] = field(default_factory=dict)

    @property
    def effective_search_ratio(self) -> float:
        if self.dentries_visited == 0:
            return 0.0
        return len(self.distinct_resolved) / self.dentries_visited

    def note_skip(self, depth: int) -> None:
        hist = self.skipped_prefix_histogram
        hist[depth] = hist.get(depth, 0) + 1

    def counter_rows(self) -> list[tuple[str, str]]:
        """Deterministic (name, value) rows for tables and CSV."""
        hist = {str(k): v for k, v in sorted(self.skipped_prefix_histogram.items())}
        return [
            ("lookups", str(self.lookups)),
            ("dentries_visited", str(self.dentries_visited)),
            ("char_comparisons", str(self.char_comparisons)),
            ("pivot_hits", str(self.pivot_hits)),
            ("fallbacks", str(self.fallbacks)),
            ("entries_touched", str(self.entries_touched)),
            ("distinct_resolved", str(len(self.distinct_resolved))),
            ("effective_search_ratio", f"{self.effective_search_ratio:.6f}"),
            ("skipped_prefix_histogram", json.dumps(hist, sort_keys=True)),
        ]
