"""Reading demographics, lethality and scenario files.

Demographics CSV::

    age_lower,age_upper,male,female
    0,4,40969331,36914557
    ...
    80,,15257272,20543563

The ``label,male,female,total`` layout written by
:func:`ifrshift.reporting.render_table` is accepted too, so a rendered count
table reads back unchanged.

Lethality CSV has ``age_lower,age_upper,male_rate,female_rate``; rates are
parsed as decimals and kept exact.

Scenario files are flat ``key = value`` text with ``#`` comments.  Dataset
paths are resolved relative to the scenario file.
"""

from __future__ import annotations

import csv
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, List, Tuple, Union

from .agebin import AgeBin, BinnedCountTable, Partition
from .errors import (
    BothAttackRateAndR0,
    IfrShiftError,
    InvalidBin,
    InvalidPartition,
    MalformedHeader,
    MalformedRow,
    MalformedScenario,
    MissingFile,
    NeitherAttackRateNorR0,
    NonIntegerCount,
    RateOutOfRange,
)
from .projection import DEFAULT_SHIFT_YEARS, DeathTable, LethalityTable, Scenario, project_deaths

PathLike = Union[str, Path]

DEMOGRAPHICS_HEADER = ["age_lower", "age_upper", "male", "female"]
RENDERED_HEADER = ["label", "male", "female", "total"]
LETHALITY_HEADER = ["age_lower", "age_upper", "male_rate", "female_rate"]

SCENARIO_KEYS = {"name", "demographics", "lethality", "shift_years",
                 "vaccinated_fraction", "attack_rate", "r0"}

DATA_DIR = Path(__file__).parent / "data"


def bundled(name: str) -> Path:
    """Path of a dataset shipped with the package, e.g. ``bundled("china_2021.csv")``."""
    return DATA_DIR / name


def _read_csv(path: PathLike) -> Tuple[List[str], List[Tuple[int, List[str]]]]:
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"{path}: no such file")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        rows = [(reader.line_num, [c.strip() for c in r]) for r in reader if any(c.strip() for c in r)]
    if header is None:
        raise MalformedHeader(f"{path}: empty file")
    return [h.strip() for h in header], rows


def _parse_count(path, line, column, text) -> int:
    if not text.isdigit():
        raise NonIntegerCount(
            f"{path}: line {line}, column {column}: {text!r} is not a non-negative integer")
    return int(text)


def _parse_bounds(path, line, lo_text, hi_text) -> AgeBin:
    lower = _parse_count(path, line, "age_lower", lo_text)
    upper = None if hi_text == "" else _parse_count(path, line, "age_upper", hi_text)
    try:
        return AgeBin(lower, upper)
    except InvalidBin as e:
        raise InvalidBin(f"{path}: line {line}: {e}") from None


def _partition(path, bins) -> Partition:
    try:
        return Partition(tuple(bins))
    except InvalidPartition as e:
        raise type(e)(f"{path}: {e}") from None


def _check_width(path, line, row, n):
    if len(row) != n:
        raise MalformedRow(f"{path}: line {line}: expected {n} fields, got {len(row)}")


def load_demographics(path: PathLike) -> BinnedCountTable:
    header, rows = _read_csv(path)
    bins, counts = [], []
    if header == DEMOGRAPHICS_HEADER:
        for line, row in rows:
            _check_width(path, line, row, 4)
            bins.append(_parse_bounds(path, line, row[0], row[1]))
            counts.append([_parse_count(path, line, "male", row[2]),
                           _parse_count(path, line, "female", row[3])])
    elif header == RENDERED_HEADER:
        total_row = None
        for line, row in rows:
            _check_width(path, line, row, 4)
            m, f, t = (_parse_count(path, line, c, v) for c, v in zip(RENDERED_HEADER[1:], row[1:]))
            if row[0] == "Total":
                total_row = (line, m, f, t)
                continue
            if total_row is not None:
                raise MalformedRow(f"{path}: line {line}: row after the Total row")
            if t != m + f:
                raise MalformedRow(f"{path}: line {line}: total {t} != male + female {m + f}")
            try:
                bins.append(AgeBin.parse(row[0]))
            except InvalidBin as e:
                raise InvalidBin(f"{path}: line {line}: {e}") from None
            counts.append([m, f])
        if total_row is not None:
            line, m, f, t = total_row
            if (m, f, t) != (sum(c[0] for c in counts), sum(c[1] for c in counts),
                             sum(c[0] + c[1] for c in counts)):
                raise MalformedRow(f"{path}: line {line}: Total row does not match the bin rows")
    else:
        raise MalformedHeader(
            f"{path}: header {','.join(header)!r}, expected {','.join(DEMOGRAPHICS_HEADER)!r}")
    return BinnedCountTable(_partition(path, bins), counts)


def _parse_rate(path, line, column, text) -> Decimal:
    try:
        rate = Decimal(text)
    except InvalidOperation:
        raise MalformedRow(f"{path}: line {line}, column {column}: {text!r} is not a number") from None
    if not rate.is_finite() or not 0 <= rate <= 1:
        raise RateOutOfRange(f"{path}: line {line}, column {column}: rate {text} is outside [0, 1]")
    return rate


def load_lethality(path: PathLike) -> LethalityTable:
    header, rows = _read_csv(path)
    if header != LETHALITY_HEADER:
        raise MalformedHeader(
            f"{path}: header {','.join(header)!r}, expected {','.join(LETHALITY_HEADER)!r}")
    bins, rates = [], []
    for line, row in rows:
        _check_width(path, line, row, 4)
        bins.append(_parse_bounds(path, line, row[0], row[1]))
        rates.append([_parse_rate(path, line, "male_rate", row[2]),
                      _parse_rate(path, line, "female_rate", row[3])])
    return LethalityTable(_partition(path, bins), rates)


def _parse_kv(path: Path) -> Dict[str, str]:
    if not path.is_file():
        raise MissingFile(f"{path}: no such file")
    out = {}
    for n, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise MalformedScenario(f"{path}: line {n}: expected 'key = value'")
        if key not in SCENARIO_KEYS:
            raise MalformedScenario(f"{path}: line {n}: unknown key {key!r}")
        if key in out:
            raise MalformedScenario(f"{path}: line {n}: duplicate key {key!r}")
        out[key] = value
    return out


def _number(path, key, text, kind):
    try:
        return kind(text)
    except ValueError:
        raise MalformedScenario(f"{path}: {key} = {text!r} is not a valid {kind.__name__}") from None


def load_scenario(path: PathLike) -> Scenario:
    """Parse a scenario file and check that its datasets load."""
    path = Path(path)
    kv = _parse_kv(path)
    for key in ("demographics", "lethality"):
        if not kv.get(key):
            raise MalformedScenario(f"{path}: missing {key!r}")

    has_ar = kv.get("attack_rate", "") != ""
    has_r0 = kv.get("r0", "") != ""
    if has_ar and has_r0:
        raise BothAttackRateAndR0(f"{path}: give either attack_rate or r0, not both")
    if not (has_ar or has_r0) and ("attack_rate" in kv or "r0" in kv):
        raise NeitherAttackRateNorR0(f"{path}: attack_rate / r0 given without a value")

    try:
        scenario = Scenario(
            name=kv.get("name") or path.stem,
            shift_years=_number(path, "shift_years", kv.get("shift_years", str(DEFAULT_SHIFT_YEARS)), int),
            vaccinated_fraction=_number(path, "vaccinated_fraction", kv.get("vaccinated_fraction", "1.0"), float),
            explicit_attack_rate=_number(path, "attack_rate", kv["attack_rate"], float) if has_ar else None,
            r0=_number(path, "r0", kv["r0"], float) if has_r0 else None,
            demographics=str(path.parent / kv["demographics"]),
            lethality=str(path.parent / kv["lethality"]),
        )
    except MalformedScenario:
        raise
    except IfrShiftError as e:
        raise type(e)(f"{path}: {e}") from None
    load_demographics(scenario.demographics)
    load_lethality(scenario.lethality)
    return scenario


def run_scenario(scenario: Scenario) -> DeathTable:
    return project_deaths(load_demographics(scenario.demographics),
                          load_lethality(scenario.lethality), scenario)


def validate_file(path: PathLike) -> str:
    """Load ``path`` with the matching loader; return its kind or raise."""
    path = Path(path)
    if not path.is_file():
        raise MissingFile(f"{path}: no such file")
    if path.suffix.lower() != ".csv":
        load_scenario(path)
        return "scenario"
    header, _ = _read_csv(path)
    if header == LETHALITY_HEADER:
        load_lethality(path)
        return "lethality"
    load_demographics(path)
    return "demographics"
