"""Issuance data -> strategies.

Two routes: realized fiscal-year fractions from auction records, and "spot"
fractions implied by prevailing auction sizes and calendars.  Forward
scenarios grow the spot flows by a funding gap allocated per policy.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .core import Strategy, TenorGrid, validate_strategy
from .errors import (
    AllExcluded,
    EmptyWindow,
    InvalidRecord,
    NegativeFlow,
    UnknownTenor,
    ZeroTotalFlow,
)

CSV_COLUMNS = ("issue_date", "maturity_date", "tenor_bucket", "face", "security_class")
TWIST_SHORT_SPLIT = {1: 0.60, 2: 0.25, 3: 0.15}


class SecurityClass(str, Enum):
    BILL = "bill"
    NOTE_BOND = "note_bond"
    TIPS = "tips"
    FRN = "frn"


@dataclass(frozen=True)
class IssuanceRecord:
    issue_date: dt.date
    maturity_date: dt.date
    tenor_bucket: int
    face: float
    security_class: SecurityClass

    def __post_init__(self):
        object.__setattr__(self, "security_class", SecurityClass(self.security_class))
        if self.maturity_date <= self.issue_date:
            raise InvalidRecord(f"maturity {self.maturity_date} not after issue {self.issue_date}")
        if not self.face > 0:
            raise InvalidRecord(f"face must be positive, got {self.face}")
        if self.security_class is SecurityClass.BILL and self.tenor_bucket != 1:
            raise InvalidRecord("bills belong in the 1y bucket")
        years = (self.maturity_date - self.issue_date).days / 365.25
        if abs(years - self.tenor_bucket) > 1.0 and self.security_class is not SecurityClass.BILL:
            raise InvalidRecord(
                f"tenor bucket {self.tenor_bucket} inconsistent with a {years:.2f}y term"
            )


def read_records(fh: IO[str] | str | Path) -> list[IssuanceRecord]:
    """Parse the issuance CSV (ISO dates, face in millions).

    Errors name the offending line.
    """
    if isinstance(fh, (str, Path)):
        with open(fh, newline="") as f:
            return read_records(f)
    reader = csv.DictReader(fh)
    missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
    if missing:
        raise InvalidRecord(f"line 1: missing columns {sorted(missing)}")
    out = []
    for row in reader:
        try:
            out.append(
                IssuanceRecord(
                    dt.date.fromisoformat(row["issue_date"].strip()),
                    dt.date.fromisoformat(row["maturity_date"].strip()),
                    int(row["tenor_bucket"]),
                    float(row["face"]),
                    SecurityClass(row["security_class"].strip().lower()),
                )
            )
        except (ValueError, TypeError) as exc:
            raise InvalidRecord(f"line {reader.line_num}: {exc}") from None
    return out


def write_records(records: Iterable[IssuanceRecord], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(
            [r.issue_date.isoformat(), r.maturity_date.isoformat(), r.tenor_bucket,
             repr(r.face), r.security_class.value]
        )


def fiscal_year_fractions(
    records: Iterable[IssuanceRecord],
    fy_start: dt.date,
    fy_end: dt.date,
    grid: TenorGrid | None = None,
    exclude_classes: Sequence[str] = (),
) -> Strategy:
    """Empirical fractions ``A_j / A`` for issuance dated in ``[fy_start, fy_end]``.

    Bills that mature on or before ``fy_end`` are not counted: they were
    rolled within the year and do not finance the year's net needs.
    """
    excluded = {SecurityClass(c) for c in exclude_classes}
    totals: dict[int, float] = {}
    seen = False
    for r in records:
        if not fy_start <= r.issue_date <= fy_end:
            continue
        seen = True
        if r.security_class in excluded:
            continue
        if r.security_class is SecurityClass.BILL and r.maturity_date <= fy_end:
            continue
        totals[r.tenor_bucket] = totals.get(r.tenor_bucket, 0.0) + r.face
    if not seen:
        raise EmptyWindow(f"no records issued between {fy_start} and {fy_end}")
    total = sum(totals.values())
    if total <= 0:
        raise AllExcluded(f"every record between {fy_start} and {fy_end} was excluded")
    return validate_strategy({j: a / total for j, a in sorted(totals.items())}, grid)


def us_fiscal_year(year: int) -> tuple[dt.date, dt.date]:
    """October 1 of ``year - 1`` through September 30 of ``year``."""
    return dt.date(year - 1, 10, 1), dt.date(year, 9, 30)


@dataclass(frozen=True)
class TenorAuctions:
    new_issues_per_year: int = 0
    new_issue_size: float = 0.0
    reopenings_per_year: int = 0
    reopening_size: float = 0.0

    def __post_init__(self):
        if min(self.new_issues_per_year, self.reopenings_per_year) < 0:
            raise InvalidRecord("auction counts must be nonnegative")
        if min(self.new_issue_size, self.reopening_size) < 0:
            raise InvalidRecord("auction sizes must be nonnegative")

    @property
    def flow(self) -> float:
        return (
            self.new_issues_per_year * self.new_issue_size
            + self.reopenings_per_year * self.reopening_size
        )


@dataclass(frozen=True)
class AuctionPattern:
    """Prevailing auction sizes per coupon tenor plus the trailing bill flow.

    Bills use a trailing yearly average rather than current sizes, since bill
    issuance absorbs seasonal fiscal swings.
    """

    tenors: Mapping[int, TenorAuctions] = field(default_factory=dict)
    bills_trailing_avg: float = 0.0

    def __post_init__(self):
        if self.bills_trailing_avg < 0:
            raise InvalidRecord("bill flow must be nonnegative")
        if 1 in self.tenors:
            raise InvalidRecord("tenor 1 flow comes from bills_trailing_avg, not auction sizes")

    def flows(self) -> dict[int, float]:
        out = {1: float(self.bills_trailing_avg)}
        for j, a in sorted(self.tenors.items()):
            out[int(j)] = a.flow
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "AuctionPattern":
        try:
            tenors = {int(j): TenorAuctions(**sizes) for j, sizes in data.get("tenors", {}).items()}
            return cls(tenors, float(data.get("bills_trailing_avg", 0.0)))
        except (TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, InvalidRecord):
                raise
            raise InvalidRecord(f"malformed auction pattern: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "AuctionPattern":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidRecord(f"{path}: line {exc.lineno}: {exc.msg}") from None
        return cls.from_dict(data)


def fractions_from_flows(flows: Mapping[int, float], grid: TenorGrid | None = None) -> Strategy:
    if any(v < 0 for v in flows.values()):
        raise NegativeFlow(f"negative tenor flow in {dict(flows)}")
    total = sum(flows.values())
    if total <= 0:
        raise ZeroTotalFlow("auction pattern implies no issuance")
    return validate_strategy({j: v / total for j, v in flows.items()}, grid)


def spot_fractions(pattern: AuctionPattern, grid: TenorGrid | None = None) -> Strategy:
    return fractions_from_flows(pattern.flows(), grid)


class ScenarioPolicy(str, Enum):
    BILLS_ONLY = "bills_only"
    TWIST_SHORT = "twist_short"
    COUPONS_PRO_RATA = "coupons_pro_rata"


def gap_allocation(
    policy: ScenarioPolicy | str,
    flows: Mapping[int, float],
    twist_split: Mapping[int, float] = TWIST_SHORT_SPLIT,
) -> dict[int, float]:
    """Shares of an incremental funding need assigned to each tenor."""
    policy = ScenarioPolicy(policy)
    if policy is ScenarioPolicy.BILLS_ONLY:
        return {1: 1.0}
    if policy is ScenarioPolicy.TWIST_SHORT:
        total = sum(twist_split.values())
        return {j: s / total for j, s in twist_split.items()}
    coupons = {j: v for j, v in flows.items() if j != 1 and v > 0}
    total = sum(coupons.values())
    if total <= 0:
        raise ZeroTotalFlow("no coupon issuance to scale pro rata")
    return {j: v / total for j, v in coupons.items()}


def scenario_path(
    base_pattern: AuctionPattern,
    policy: ScenarioPolicy | str,
    funding_gap_by_year: Sequence[float],
    years: int | None = None,
    grid: TenorGrid | None = None,
    twist_split: Mapping[int, float] = TWIST_SHORT_SPLIT,
) -> list[Strategy]:
    """Yearly spot strategies when each year's gap is added to tenor flows.

    Gaps are incremental: year ``t`` flows are year ``t - 1`` flows plus
    ``gap_t`` split per ``policy`` (pro rata uses the flows of year ``t - 1``).
    """
    years = len(funding_gap_by_year) if years is None else years
    if years != len(funding_gap_by_year):
        raise InvalidRecord(f"{years} years requested but {len(funding_gap_by_year)} gaps given")
    grid = grid or TenorGrid.default()
    flows = {j: v for j, v in base_pattern.flows().items()}
    path = []
    for year, gap in enumerate(funding_gap_by_year, start=1):
        for j, share in gap_allocation(policy, flows, twist_split).items():
            if j not in grid:
                raise UnknownTenor(f"policy {policy} allocates to tenor {j} outside the grid")
            flows[j] = flows.get(j, 0.0) + share * float(gap)
        if any(v < -1e-12 for v in flows.values()):
            raise NegativeFlow(f"year {year}: funding gap drives a tenor flow below zero")
        flows = {j: max(v, 0.0) for j, v in flows.items()}
        path.append(fractions_from_flows(flows, grid))
    return path

