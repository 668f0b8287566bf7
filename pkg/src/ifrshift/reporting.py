"""Text and CSV renderings of count tables, projections and comparisons.

This is the only place numbers get rounded.  Totals are rounded from the
unrounded sums, so a printed total can differ by one from the sum of the
printed cells.
"""

from __future__ import annotations

import csv
import io
import math
from fractions import Fraction
from typing import List, Sequence, Union

from .agebin import BinnedCountTable, Partition
from .projection import ComparisonTable, DeathTable, Summary, reported_bins

TEXT = "text"
CSV = "csv"
FORMATS = (TEXT, CSV)


def round_half_away(x) -> int:
    """Round to the nearest integer, halves away from zero."""
    x = Fraction(x)
    r = math.floor(abs(x) + Fraction(1, 2))
    return r if x >= 0 else -r


def relabel_bins(partition: Partition, shift: int) -> List[str]:
    """Labels of the adjusted bins with ``shift`` years added back."""
    return [b.label for b in reported_bins(partition, shift)]


def _rows(obj: Union[DeathTable, BinnedCountTable]):
    if isinstance(obj, DeathTable):
        labels = relabel_bins(obj.partition, obj.scenario.shift_years)
        table = obj.deaths
    else:
        labels = obj.partition.labels
        table = obj
    rows = []
    for label, (m, f) in zip(labels, table.counts):
        rows.append((label, round_half_away(m), round_half_away(f), round_half_away(m + f)))
    m_tot, f_tot = table.sex_totals()
    rows.append(("Total", round_half_away(m_tot), round_half_away(f_tot),
                 round_half_away(m_tot + f_tot)))
    return rows


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _aligned(header: Sequence[str], rows) -> str:
    cells = [list(header)] + [[c if isinstance(c, str) else f"{c:,}" for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = []
    for r in cells:
        first = r[0].ljust(widths[0])
        rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join([first] + rest).rstrip())
    return "\n".join(lines) + "\n"


def render_table(obj: Union[DeathTable, BinnedCountTable], fmt: str = TEXT) -> str:
    rows = _rows(obj)
    if fmt == CSV:
        return _csv(("label", "male", "female", "total"), rows)
    if fmt == TEXT:
        return _aligned(("Age", "Males", "Females", "Total"), rows)
    raise ValueError(f"unknown format {fmt!r}")


def render_summary(summary: Summary, fmt: str = TEXT) -> str:
    rows = [("total_deaths", str(round_half_away(Fraction(summary.total_deaths)))),
            ("male_share", f"{summary.male_share:.4f}")]
    for t, share in sorted(summary.share_at_or_above.items()):
        rows.append((f"share_age_{t}_plus", f"{share:.4f}"))
    if fmt == CSV:
        return _csv(("metric", "value"), rows)
    if fmt == TEXT:
        width = max(len(k) for k, _ in rows)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)
    raise ValueError(f"unknown format {fmt!r}")


def render_comparison(ct: ComparisonTable, fmt: str = TEXT) -> str:
    base = ct.names[0]
    header = ["label"] + list(ct.names) + [f"{n}/{base}" for n in ct.names]
    rows = []
    for i, label in enumerate(ct.labels):
        deaths = [round_half_away(Fraction(v)) for v in ct.values[i]]
        ratios = [f"{r:.4f}" for r in ct.ratios[i]]
        rows.append([label] + deaths + ratios)
    rows.append(["male_share"] + [f"{s:.4f}" for s in ct.male_shares]
                + [f"{s / ct.male_shares[0]:.4f}" if ct.male_shares[0] else "nan"
                   for s in ct.male_shares])
    if fmt == CSV:
        return _csv(header, rows)
    if fmt == TEXT:
        return _aligned(header, rows)
    raise ValueError(f"unknown format {fmt!r}")
