"""Parameter-grid censuses with deterministic CSV / JSON output."""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import asdict, dataclass, fields

from .classify import fm_partners
from .curves import WeierstrassCurve, curve_new
from .errors import NotFoundWithinTower, SingularModel, UnsupportedMixedOrder
from .fields import P_MAX, is_prime
from .structure import M_MAX, automorphism_group, torsion_subgroup

CSV_VERSION = "fmcensus-csv v1"

CURVE_SOURCES = ("canonical_per_j", "all_smooth_models", "explicit")


@dataclass
class CensusConfig:
    primes: list[int]
    curve_source: str = "canonical_per_j"
    curves: list[tuple[int, int, int, int, int]] | None = None
    m_min: int = 2
    m_max: int = 10
    verify_oracle: bool = False
    output_format: str = "csv"
    output_path: str | None = None

    def validate(self) -> None:
        for p in self.primes:
            if not is_prime(p) or p > P_MAX:
                raise ValueError(f"prime {p} outside the supported range (primes <= {P_MAX})")
        if self.curve_source not in CURVE_SOURCES:
            raise ValueError(f"unknown curve source {self.curve_source!r}")
        if self.curve_source == "explicit" and not self.curves:
            raise ValueError("explicit curve source needs at least one curve")
        if self.m_min <= self.m_max and (self.m_min < 2 or self.m_max > M_MAX):
            raise ValueError(f"m range must lie within [2, {M_MAX}]")
        if self.output_format not in ("csv", "json"):
            raise ValueError(f"unknown output format {self.output_format!r}")


@dataclass
class CensusRow:
    p: int
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    j: int
    supersingular: bool
    m: int
    aut_order: int
    aut_label: str
    h_size: int | None = None
    h_members: list[int] | None = None
    fm_count: int | None = None
    representatives: list[int] | None = None
    oracle_count: int | None = None
    bound_ok: bool | None = None
    status: str = "ok"


CSV_COLUMNS = [f.name for f in fields(CensusRow)]


def canonical_curves(p: int) -> list[WeierstrassCurve]:
    """One model per row of the automorphism table reachable at p."""
    if p == 2:
        a6 = next(c for c in range(2) if _smooth(2, (1, 0, 0, 0, c)))
        out = [curve_new(2, 0, 0, 1, 0, 0), curve_new(2, 1, 0, 0, 0, a6)]
    elif p == 3:
        out = [curve_new(3, 0, 0, 0, -1, 0)]
    else:
        out = [curve_new(p, 0, 0, 0, 0, 1), curve_new(p, 0, 0, 0, 1, 0)]
        for c in range(1, p):
            if _smooth(p, (0, 0, 0, 1, c)):
                E = curve_new(p, 0, 0, 0, 1, c)
                if E.j not in (0, 1728 % p):
                    out.append(E)
                    break
    return sorted(out, key=lambda E: E.a_invariants)


def all_smooth_models(p: int) -> list[WeierstrassCurve]:
    out = []
    for a in itertools.product(range(p), repeat=5):
        if _smooth(p, a):
            out.append(curve_new(p, *a))
    return out


def short_weierstrass_models(p: int) -> list[WeierstrassCurve]:
    return [curve_new(p, 0, 0, 0, a4, a6) for a4 in range(p) for a6 in range(p) if _smooth(p, (0, 0, 0, a4, a6))]


def _smooth(p: int, a) -> bool:
    try:
        curve_new(p, *a)
    except SingularModel:
        return False
    return True


def _curves_for(config: CensusConfig, p: int) -> list[WeierstrassCurve]:
    if config.curve_source == "canonical_per_j":
        return canonical_curves(p)
    if config.curve_source == "all_smooth_models":
        return all_smooth_models(p)
    return sorted({curve_new(p, *a) for a in config.curves}, key=lambda E: E.a_invariants)


def census_row(E: WeierstrassCurve, m: int, aut_group, verify_oracle: bool = False) -> CensusRow:
    row = CensusRow(
        p=E.p,
        a1=E.a1,
        a2=E.a2,
        a3=E.a3,
        a4=E.a4,
        a6=E.a6,
        j=E.j,
        supersingular=E.is_supersingular(),
        m=m,
        aut_order=aut_group.order,
        aut_label=aut_group.structure_label,
    )
    try:
        tors = torsion_subgroup(E, m)
        if tors.structure == "trivial":
            row.status = "unsupported"
            return row
        report = fm_partners(E, tors.generator, aut_group, verify_oracle=verify_oracle)
    except NotFoundWithinTower:
        row.status = "not_found_within_tower"
        return row
    except UnsupportedMixedOrder:
        row.status = "unsupported"
        return row
    row.h_size = len(report.h)
    row.h_members = list(report.h.members)
    row.fm_count = report.count
    row.representatives = list(report.representatives)
    row.oracle_count = report.oracle_count
    row.bound_ok = report.bound_ok
    return row


def run_census(config: CensusConfig) -> list[CensusRow]:
    config.validate()
    rows = []
    if config.m_min > config.m_max:
        return rows
    for p in sorted(set(config.primes)):
        for E in _curves_for(config, p):
            G = automorphism_group(E)
            for m in range(config.m_min, config.m_max + 1):
                rows.append(census_row(E, m, G, config.verify_oracle))
    return rows


@dataclass
class Summary:
    rows: int
    ok: int
    not_found_within_tower: int
    unsupported: int
    oracle_mismatches: int

    def line(self) -> str:
        return " ".join(f"{k}={v}" for k, v in asdict(self).items())


def summarize(rows: list[CensusRow]) -> Summary:
    status = [r.status for r in rows]
    mismatches = sum(
        1 for r in rows if r.status == "ok" and r.oracle_count is not None and r.oracle_count != r.fm_count
    )
    return Summary(
        rows=len(rows),
        ok=status.count("ok"),
        not_found_within_tower=status.count("not_found_within_tower"),
        unsupported=status.count("unsupported"),
        oracle_mismatches=mismatches,
    )


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ";".join(map(str, v))
    return str(v)


def to_csv(rows: list[CensusRow]) -> str:
    buf = io.StringIO()
    buf.write(f"# {CSV_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([_csv_cell(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def to_json(rows: list[CensusRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=1, ensure_ascii=False) + "\n"
