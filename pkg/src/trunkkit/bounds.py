"""Audits of satellite trunk lower bounds against constructed presentations.

The trunk of a presentation is only an upper witness for the trunk of its
knot class, so an audit can expose a contradiction (witness below a proven
lower bound) but can never confirm that a bound is tight.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .morse import MorseDiagram, level_profile

__all__ = [
    "CertifiedDatum",
    "AuditReport",
    "DataError",
    "parse_certified",
    "load_certified",
    "shipped_data",
    "audit_winding",
    "audit_wrapping",
    "audit_combined",
    "WINDING",
    "WRAPPING",
    "COMBINED",
]

WINDING = "trunk-winding"
WRAPPING = "trunk-wrapping"
COMBINED = "trunk-combined"

CONSISTENT = "consistent"
CONTRADICTION = "CONTRADICTION"

UNKNOT_TRUNK = 2


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class CertifiedDatum:
    name: str
    trJ: int
    n: int
    m: int
    mu: dict = field(default_factory=dict)
    provenance: str = ""

    def __post_init__(self):
        if self.trJ < 1 or self.n < 0 or self.m < 1:
            raise DataError(f"{self.name}: need trJ >= 1, n >= 0, m >= 1")
        if self.m < self.n:
            raise DataError(f"{self.name}: wrapping m={self.m} below winding n={self.n}")
        keys = sorted(self.mu)
        for lo, hi in zip(keys, keys[1:]):
            if self.mu[hi] > self.mu[lo]:
                raise DataError(f"{self.name}: mu must be non-increasing (mu.{lo} < mu.{hi})")
        if 1 in self.mu and self.mu[1] != self.m:
            raise DataError(f"{self.name}: mu.1={self.mu[1]} must equal m={self.m}")
        for a, v in self.mu.items():
            if not self.n <= v <= self.m:
                raise DataError(f"{self.name}: mu.{a}={v} outside [n, m]")

    def mu_limit(self) -> Optional[Fraction]:
        """Smallest certified mu, the best available stand-in for the limit."""
        return Fraction(min(self.mu.values())) if self.mu else None

    def to_kv(self) -> str:
        lines = [f"name={self.name}", f"trJ={self.trJ}", f"n={self.n}", f"m={self.m}"]
        lines += [f"mu.{a}={self.mu[a]}" for a in sorted(self.mu)]
        if self.provenance:
            lines.append(f"provenance={self.provenance}")
        return "\n".join(lines) + "\n"


_INT_KEYS = {"trJ", "n", "m"}


def parse_certified(text: str) -> dict:
    """Parse key=value records; a record starts at each ``name=`` line."""
    records: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "name":
            records.append({"name": value, "mu": {}})
            continue
        if not records:
            raise DataError(f"line {lineno}: record must start with name=")
        rec = records[-1]
        try:
            if key in _INT_KEYS:
                rec[key] = int(value)
            elif key.startswith("mu."):
                rec["mu"][int(key[3:])] = int(value)
            elif key == "provenance":
                rec["provenance"] = value
            else:
                raise DataError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"line {lineno}: bad value for {key}: {value!r}") from None
    out = {}
    for rec in records:
        missing = _INT_KEYS - rec.keys()
        if missing:
            raise DataError(f"{rec['name']}: missing {', '.join(sorted(missing))}")
        out[rec["name"]] = CertifiedDatum(**rec)
    return out


def load_certified(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return parse_certified(fh.read())


def shipped_data() -> dict:
    text = resources.files("trunkkit").joinpath("data/certified.dat").read_text(encoding="utf-8")
    return parse_certified(text)


@dataclass(frozen=True)
class AuditReport:
    theorem: str
    datum: str
    bound: Fraction
    strict: bool
    trunk: int
    width: int
    warnings: tuple = ()
    extra: tuple = ()  # (label, value) pairs reported alongside

    @property
    def verdict(self) -> str:
        ok = self.trunk > self.bound if self.strict else self.trunk >= self.bound
        return CONSISTENT if ok else CONTRADICTION

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT

    @property
    def margin(self) -> Fraction:
        return self.trunk - self.bound

    def to_kv(self) -> str:
        rows = [
            ("theorem", self.theorem),
            ("datum", self.datum),
            ("bound", str(self.bound)),
            ("relation", ">" if self.strict else ">="),
            ("trunk", str(self.trunk)),
            ("width", str(self.width)),
            ("margin", str(self.margin)),
            ("verdict", self.verdict),
        ]
        rows += [(k, str(v)) for k, v in self.extra]
        rows += [("warning", w) for w in self.warnings]
        return "\n".join(f"{k}={v}" for k, v in rows) + "\n"

    def to_table(self) -> str:
        rel = ">" if self.strict else ">="
        lines = [
            f"{self.theorem} [{self.datum}]",
            f"  presentation trunk {self.trunk} {rel} bound {self.bound}  (margin {self.margin})",
            f"  presentation width {self.width} (informational)",
        ]
        lines += [f"  {k}: {v}" for k, v in self.extra]
        lines += [f"  warning: {w}" for w in self.warnings]
        if self.consistent:
            lines.append("  verdict: consistent (a presentation trunk is an upper witness; tightness is not verified)")
        else:
            lines.append("  verdict: CONTRADICTION (input data or construction is wrong)")
        return "\n".join(lines) + "\n"


def _warnings(d: CertifiedDatum) -> tuple:
    if d.trJ <= UNKNOT_TRUNK:
        return (f"companion trunk {d.trJ} is that of the unknot; the bound needs a non-trivial companion",)
    return ()


def audit_winding(sat: MorseDiagram, d: CertifiedDatum) -> AuditReport:
    prof = level_profile(sat)
    return AuditReport(WINDING, d.name, Fraction(d.n * d.trJ), False, prof.trunk, prof.width, _warnings(d))


def audit_wrapping(sat: MorseDiagram, d: CertifiedDatum) -> AuditReport:
    prof = level_profile(sat)
    return AuditReport(
        WRAPPING, d.name, Fraction(d.m * d.trJ, 2), True, prof.trunk, prof.width, _warnings(d)
    )


def audit_combined(sat: MorseDiagram, d: CertifiedDatum, mu) -> AuditReport:
    mu = Fraction(mu)
    if not d.n <= mu <= d.m:
        raise DataError(f"mu={mu} outside [n, m] = [{d.n}, {d.m}]")
    prof = level_profile(sat)
    bound = (d.m + mu) * d.trJ / 2
    mean_bound = Fraction(d.m + d.n, 2) * d.trJ
    mu_bound = mu * d.trJ
    chain = bound >= mean_bound and bound >= mu_bound
    extra = (
        ("mean-bound", mean_bound),
        ("mu-bound", mu_bound),
        ("winding-bound", Fraction(d.n * d.trJ)),
        ("implication-chain", "holds" if chain else "BROKEN"),
    )
    warnings = _warnings(d)
    if not chain:
        warnings += ("combined bound fails to dominate its weaker forms",)
    return AuditReport(COMBINED, d.name, bound, False, prof.trunk, prof.width, warnings, extra)
