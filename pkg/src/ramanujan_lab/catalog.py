"""The catalog of rational Ramanujan-like series for 1/pi^m.

Each :class:`SeriesEntry` describes

    sum_{n>=0} prod_i (s_i)_n/(1)_n * (a_0 + a_1 n + ... + a_m n^m) * z0^n
        = v0 * sqrt((-1)^m chi0) / pi^m

together with the conjectured discriminant ``eps0`` of the semi-terminating
companion series.  The built-in table has 65 rows, identified as
``T<table>.<row>``.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ParseError, ValidationError
from .exact import as_rational, is_fundamental_discriminant

HALF = Fraction(1, 2)

CATALOG_HEADER = "# ramanujan-lab catalog v1"


@dataclass(frozen=True)
class SeriesEntry:
    id: str
    m: int
    s: tuple[Fraction, ...]
    z0: Fraction
    a: tuple[int, ...]
    v0: int
    chi0: int
    eps0: int | None = None

    @property
    def rank(self) -> int:
        return 2 * self.m + 1

    @property
    def divergent(self) -> bool:
        return abs(self.z0) > 1

    @property
    def sort_key(self):
        return natural_key(self.id)

    def poly(self, y):
        """Evaluate a_0 + a_1 y + ... + a_m y^m (any numeric type)."""
        acc = 0
        for c in reversed(self.a):
            acc = acc * y + c
        return acc


@dataclass(frozen=True)
class HalfIndex:
    j: int


@dataclass(frozen=True)
class Violation:
    rule: str
    field: str
    detail: str = ""

    def __str__(self):
        tail = f": {self.detail}" if self.detail else ""
        return f"{self.rule} [{self.field}]{tail}"


def natural_key(series_id: str):
    m = re.fullmatch(r"T(\d+)\.(\d+)", series_id)
    if m:
        return (0, int(m.group(1)), int(m.group(2)), "")
    return (1, 0, 0, series_id)


def make_entry(id, s, z0, a, v0, chi0, eps0=None) -> SeriesEntry:
    s = tuple(as_rational(x) for x in s)
    a = tuple(int(x) for x in a)
    return SeriesEntry(
        id=id,
        m=len(a) - 1,
        s=s,
        z0=as_rational(z0),
        a=a,
        v0=int(v0),
        chi0=int(chi0),
        eps0=None if eps0 is None else int(eps0),
    )


# ---------------------------------------------------------------------------
# built-in data

_S3_HALF = ("1/2",) * 3
_S3_QUARTER = ("1/2", "1/4", "3/4")
_S3_THIRD = ("1/2", "1/3", "2/3")
_S3_SIXTH = ("1/2", "1/6", "5/6")

F = Fraction

# (row, s, z0, a, v0, chi0, eps0)
_TABLE_1 = [
    (1, _S3_HALF, F(-1), (1, 4), 1, -4, -4),
    (2, _S3_HALF, F(-1, 2**3), (1, 6), 1, -8, -4),
    (3, _S3_HALF, F(1, 2**2), (1, 6), 2, -4, 1),
    (4, _S3_HALF, F(1, 2**6), (5, 42), 8, -4, 1),
    (5, _S3_HALF, F(-(2**3)), (2, 6), 1, -4, -8),
    (6, _S3_HALF, F(2**2), (1, 3), -2, 1, -4),
    (7, _S3_HALF, F(2**6), (8, 21), -4, 1, -4),
    (8, _S3_QUARTER, F(-1, 4), (3, 20), 4, -4, 1),
    (9, _S3_QUARTER, -F(16, 63) ** 2, (8, 65), 9, -7, 28),
    (10, _S3_QUARTER, F(-1, 48), (9, 84), 16, -3, 1),
    (11, _S3_QUARTER, F(-1, 18**2), (23, 260), 36, -4, 1),
    (12, _S3_QUARTER, F(-1, 5 * 72**2), (205, 3220), 144, -20, 1),
    (13, _S3_QUARTER, F(-1, 882**2), (1123, 21460), 1764, -4, 1),
    (14, _S3_QUARTER, F(32, 81), (4, 28), 9, -4, -8),
    (15, _S3_QUARTER, F(1, 3**2), (1, 8), 2, -3, -3),
    (16, _S3_QUARTER, F(1, 3**4), (8, 80), 9, -8, 1),
    (17, _S3_QUARTER, F(1, 7**4), (27, 360), 49, -3, -3),
    (18, _S3_QUARTER, F(1, 99**2), (19, 280), 18, -11, -11),
    (19, _S3_QUARTER, F(1, 99**4), (8824, 211120), 9801, -8, -8),
    (20, _S3_QUARTER, F(-16, 9), (1, 5), 1, -3, 12),
    (21, _S3_QUARTER, F(4, 3) ** 4, (8, 35), -18, 1, 8),
]

_TABLE_2 = [
    (22, _S3_THIRD, F(-9, 16), (3, 15), 4, -3, 1),
    (23, _S3_THIRD, F(-1, 16), (7, 51), 12, -3, 1),
    (24, _S3_THIRD, F(-1, 80), (5, 45), 4, -15, 1),
    (25, _S3_THIRD, F(-1, 2**10), (106, 1230), 192, -3, 1),
    (26, _S3_THIRD, F(-1, 3024), (182, 2310), 216, -7, 1),
    (27, _S3_THIRD, F(-1, 500**2), (827, 14151), 1500, -3, 1),
    (28, _S3_THIRD, F(1, 2), (1, 6), 3, -3, -8),
    (29, _S3_THIRD, F(2, 27), (16, 120), 27, -4, -8),
    (30, _S3_THIRD, F(4, 5**3), (8, 66), 15, -3, -20),
    (31, _S3_THIRD, F(-(2**2)), (4, 15), 3, -3, 1),
    (32, _S3_THIRD, F(27, 2), (3, 10), -3, 1, 8),
    (33, _S3_THIRD, F(27, 16), (3, 11), -12, 1, 1),
    (34, _S3_SIXTH, F(-(4**3), 5**3), (8, 63), 5, -15, 1),
    (35, _S3_SIXTH, F(-(3**3), 8**3), (15, 154), 16, -8, 1),
    (36, _S3_SIXTH, F(-1, 8**3), (25, 342), 16, -24, 1),
    (37, _S3_SIXTH, F(-9, 40**3), (279, 4554), 80, -120, 1),
    (38, _S3_SIXTH, F(-1, 80**3), (789, 16254), 640, -15, 1),
    (39, _S3_SIXTH, F(-1, 440**3), (10177, 261702), 880, -1320, 1),
    (40, _S3_SIXTH, F(-1, 53360**3), (13591409, 545140134), 213440, -40020, 1),
    (41, _S3_SIXTH, F(3, 5) ** 3, (6, 56), 5, -20, -4),
    (42, _S3_SIXTH, F(4, 5**3), (6, 66), 5, -15, -4),
    (43, _S3_SIXTH, F(2, 11) ** 3, (40, 504), 11, -132, -8),
    (44, _S3_SIXTH, F(4, 85) ** 3, (432, 7182), 85, -255, -4),
]

_S5_HALF = ("1/2",) * 5
_S5_HALF_THIRD = ("1/2",) * 3 + ("1/3", "2/3")
_S5_HALF_QUARTER = ("1/2",) * 3 + ("1/4", "3/4")
_S5_THIRD_QUARTER = ("1/2", "1/3", "2/3", "1/4", "3/4")
_S5_THIRD_SIXTH = ("1/2", "1/3", "2/3", "1/6", "5/6")

_TABLE_3 = [
    (1, _S5_HALF, F(-1, 2**2), (1, 8, 20), 8, 1, 1),
    (2, _S5_HALF, F(-(2**2)), (1, 6, 10), 4, 1, 1),
    (3, _S5_HALF, F(-1, 2**10), (13, 180, 820), 128, 1, 1),
    (4, _S5_HALF, F(-(2**10)), (32, 160, 205), 16, 1, 1),
    (5, _S5_HALF_THIRD, F(3, 4) ** 3, (3, 27, 74), 48, 1, 1),
    (6, _S5_HALF_THIRD, F(-(3**3)), (3, 18, 28), 6, 1, -4),
    (7, ("1/2", "1/5", "2/5", "3/5", "4/5"), F(-(5**5), 2**8), (30, 245, 483), 80, 1, 1),
    (8, _S5_HALF_QUARTER, F(1, 2**4), (3, 34, 120), 32, 1, 1),
    (9, _S5_THIRD_QUARTER, F(-1, 48), (5, 63, 252), 48, 1, 1),
    (10, _S5_THIRD_QUARTER, F(-(3**3), 2**4), (9, 75, 172), 48, 1, 1),
    (11, _S5_THIRD_SIXTH, -F(3, 4) ** 6, (45, 549, 1930), 384, 1, 1),
    (12, _S5_THIRD_SIXTH, F(3, 5) ** 6, (36, 504, 2128), 375, 1, -4),
    (13, _S5_THIRD_SIXTH, F(-1, 80**3), (29, 693, 5418), 128, 5, 1),
    (14, ("1/2", "1/4", "3/4", "1/6", "5/6"), F(-1, 2**10), (15, 278, 1640), 128, 12, 1),
    (15, ("1/2", "1/8", "3/8", "5/8", "7/8"), F(1, 7**4), (15, 304, 1920), 28, 28, -7),
]

_TABLE_4 = [
    (1, ("1/2",) * 7, F(1, 2**6), (1, 14, 76, 168), 16, -4, 1),
    (2, ("1/2",) * 7, F(2**6), (4, 32, 88, 84), -24, 1, -4),
    (3, ("1/2",) * 5 + ("1/3", "2/3"), F(27, 4), (3, 27, 84, 92), 48, 1, 1),
]

_TABLE_5 = [
    (1, ("1/2",) * 7 + ("1/4", "3/4"), F(1, 2**12), (21, 466, 4340, 20632, 43680), 2048, 1, 1),
    (2, ("1/2",) * 5 + ("1/3", "2/3", "1/4", "3/4"), F(-(3**3), 2**8), (9, 147, 972, 3180, 4528), 768, 1, 1),
    (3, ("1/2",) * 5 + ("1/5", "2/5", "3/5", "4/5"), F(-(5**5), 2**10), (30, 425, 2275, 5600, 5532), 1280, 1, 1),
]

_TABLES = [_TABLE_1, _TABLE_2, _TABLE_3, _TABLE_4, _TABLE_5]

_BUILTIN: list[SeriesEntry] | None = None


def builtin_catalog() -> list[SeriesEntry]:
    """All 65 tabulated series in catalog order.

    Group T2 continues the row numbering of group T1, so its ids run
    T2.22 ... T2.44.
    """
    global _BUILTIN
    if _BUILTIN is None:
        out = []
        for table_no, rows in enumerate(_TABLES, start=1):
            for row, s, z0, a, v0, chi0, eps0 in rows:
                out.append(make_entry(f"T{table_no}.{row}", s, z0, a, v0, chi0, eps0))
        _BUILTIN = out
    return list(_BUILTIN)


def get_entry(series_id: str, catalog=None) -> SeriesEntry:
    for e in catalog if catalog is not None else builtin_catalog():
        if e.id == series_id:
            return e
    raise KeyError(f"unknown series id {series_id!r}")


def select(selector, catalog=None) -> list[SeriesEntry]:
    """Resolve ``"all"`` or a list / comma-separated string of ids."""
    catalog = builtin_catalog() if catalog is None else catalog
    if selector is None or selector == "all" or selector == ["all"]:
        return list(catalog)
    if isinstance(selector, str):
        selector = [x for x in selector.split(",") if x]
    return [get_entry(x.strip(), catalog) for x in selector]


# ---------------------------------------------------------------------------
# validation


def validate(entry: SeriesEntry) -> list[Violation]:
    v: list[Violation] = []
    if entry.m < 1:
        v.append(Violation("m >= 1", "m", str(entry.m)))
    if len(entry.s) != 2 * entry.m + 1:
        v.append(Violation("len(s) = 2m+1", "s", f"{len(entry.s)} parameters for m={entry.m}"))
    if len(entry.a) != entry.m + 1:
        v.append(Violation("len(a) = m+1", "a", f"{len(entry.a)} coefficients for m={entry.m}"))
    bad = [x for x in entry.s if not 0 < x < 1]
    if bad:
        v.append(Violation("s_i in (0,1)", "s", ", ".join(map(str, bad))))
    else:
        counts = Counter(entry.s)
        by_den: dict[int, set[int]] = {}
        for x in counts:
            by_den.setdefault(x.denominator, set()).add(x.numerator)
        for d, nums in sorted(by_den.items()):
            if d <= 2:
                continue
            full = [k for k in range(1, d) if math.gcd(k, d) == 1]
            missing = [f"{k}/{d}" for k in full if k not in nums]
            if missing:
                v.append(Violation("fraction-closure", "s", f"missing {', '.join(missing)}"))
                continue
            mult = {counts[Fraction(k, d)] for k in full}
            if len(mult) > 1:
                v.append(Violation("fraction-closure", "s", f"unequal multiplicities for denominator {d}"))
        if counts[HALF] % 2 == 0:
            v.append(Violation("odd number of s_i = 1/2", "s", f"{counts[HALF]} halves"))
    if entry.z0 == 0:
        v.append(Violation("z0 nonzero", "z0"))
    nonpos = [c for c in entry.a if c <= 0]
    if nonpos:
        v.append(Violation("a_k positive integers", "a", ", ".join(map(str, nonpos))))
    if entry.v0 == 0:
        v.append(Violation("v0 nonzero", "v0"))
    if not is_fundamental_discriminant(entry.chi0):
        v.append(Violation("chi0 is 1 or a fundamental discriminant", "chi0", str(entry.chi0)))
    if entry.eps0 is not None and not is_fundamental_discriminant(entry.eps0):
        v.append(Violation("eps0 is 1 or a fundamental discriminant", "eps0", str(entry.eps0)))
    return v


def half_index(entry: SeriesEntry) -> HalfIndex:
    halves = sum(1 for x in entry.s if x == HALF)
    if halves % 2 == 0:
        raise ValueError(f"{entry.id}: even number of parameters equal to 1/2")
    return HalfIndex((halves - 1) // 2)


# ---------------------------------------------------------------------------
# file format
#
#   # ramanujan-lab catalog v1
#   T1.3 m=1 s=1/2,1/2,1/2 z0=1/4 a=1,6 v0=2 chi0=-4 eps0=1
#
# One record per non-blank, non-comment line: the id followed by eight
# whitespace-separated key=value fields in any order.  eps0 may be "?".

_FIELDS = ("m", "s", "z0", "a", "v0", "chi0", "eps0")
_ID_RE = re.compile(r"[A-Za-z0-9_.\-]+")
_RAT_RE = re.compile(r"-?\d+(/\d+)?")
_INT_RE = re.compile(r"-?\d+")


def format_entry(e: SeriesEntry) -> str:
    eps = "?" if e.eps0 is None else str(e.eps0)
    return (
        f"{e.id} m={e.m} s={','.join(map(str, e.s))} z0={e.z0} "
        f"a={','.join(map(str, e.a))} v0={e.v0} chi0={e.chi0} eps0={eps}"
    )


def dumps(entries) -> str:
    return "\n".join([CATALOG_HEADER, *(format_entry(e) for e in entries)]) + "\n"


def save(entries, path) -> None:
    Path(path).write_text(dumps(entries), encoding="utf-8")


def _rational(text, line, key):
    if not _RAT_RE.fullmatch(text):
        raise ParseError(f"not an exact rational: {text!r}", line, key)
    q = Fraction(text)
    if "/" in text and str(q) != text:
        raise ParseError(f"rational {text!r} is not in lowest terms", line, key)
    return q


def _integer(text, line, key):
    if not _INT_RE.fullmatch(text):
        raise ParseError(f"not an integer: {text!r}", line, key)
    return int(text)


def parse_line(text: str, line: int | None = None) -> SeriesEntry:
    tokens = text.split()
    if not tokens or not _ID_RE.fullmatch(tokens[0]) or "=" in tokens[0]:
        raise ParseError("record must start with a series id", line, "id")
    fields: dict[str, str] = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}", line)
        if key not in _FIELDS:
            raise ParseError(f"unknown field {key!r}", line, key)
        if key in fields:
            raise ParseError("duplicate field", line, key)
        fields[key] = value
    for key in _FIELDS:
        if key not in fields:
            raise ParseError("missing field", line, key)
    m = _integer(fields["m"], line, "m")
    s = tuple(_rational(x, line, "s") for x in fields["s"].split(","))
    z0 = _rational(fields["z0"], line, "z0")
    a = tuple(_integer(x, line, "a") for x in fields["a"].split(","))
    eps_text = fields["eps0"]
    eps0 = None if eps_text == "?" else _integer(eps_text, line, "eps0")
    entry = SeriesEntry(
        id=tokens[0], m=m, s=s, z0=z0, a=a,
        v0=_integer(fields["v0"], line, "v0"),
        chi0=_integer(fields["chi0"], line, "chi0"),
        eps0=eps0,
    )
    violations = validate(entry)
    if violations:
        raise ValidationError(violations, line)
    return entry


def loads(text: str) -> list[SeriesEntry]:
    out, seen = [], set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.strip()
        if not body or body.startswith("#"):
            continue
        entry = parse_line(body, lineno)
        if entry.id in seen:
            raise ParseError(f"duplicate series id {entry.id!r}", lineno, "id")
        seen.add(entry.id)
        out.append(entry)
    return out


def load(path) -> list[SeriesEntry]:
    return loads(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# structured (JSON) export


def entry_to_dict(e: SeriesEntry) -> dict:
    return {
        "id": e.id,
        "m": e.m,
        "s": [str(x) for x in e.s],
        "z0": str(e.z0),
        "a": list(e.a),
        "v0": e.v0,
        "chi0": e.chi0,
        "eps0": e.eps0,
        "divergent": e.divergent,
    }


def entry_from_dict(d: dict) -> SeriesEntry:
    entry = make_entry(d["id"], d["s"], d["z0"], d["a"], d["v0"], d["chi0"], d.get("eps0"))
    if entry.m != d.get("m", entry.m):
        raise ValidationError([Violation("len(a) = m+1", "a")])
    violations = validate(entry)
    if violations:
        raise ValidationError(violations)
    return entry


def to_json(entries, indent=2) -> str:
    return json.dumps({"format": "ramanujan-lab-catalog", "version": 1,
                       "series": [entry_to_dict(e) for e in entries]}, indent=indent)


def from_json(text: str) -> list[SeriesEntry]:
    doc = json.loads(text)
    return [entry_from_dict(d) for d in doc["series"]]
