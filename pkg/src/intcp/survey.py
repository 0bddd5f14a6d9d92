"""Term-count statistics over every doubly nonnegative matrix up to a bound."""

from __future__ import annotations

import csv
import io
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from intcp.factorizer import factor
from intcp.matrix_core import SymMat2, det2, verify_factorization
from intcp.number_kernel import isqrt
from intcp.oracle import DEFAULT_DEPTH_CAP, MinRankSearcher

__all__ = [
    "CSV_HEADER",
    "SurveyError",
    "SurveyRow",
    "SurveySummary",
    "enumerate_dnn",
    "iter_survey",
    "run_survey",
    "write_csv",
]

CSV_HEADER = ("a", "b", "c", "det", "terms_paper", "terms_min", "min_status")


class SurveyError(RuntimeError):
    def __init__(self, matrix: SymMat2, cause: Exception):
        self.matrix = matrix
        super().__init__(f"survey failed at {matrix.text()}: {cause}")


@dataclass(frozen=True)
class SurveyRow:
    a: int
    b: int
    c: int
    det: int
    terms_paper: int
    terms_min: int | None = None
    min_status: str | None = None

    @property
    def gap(self) -> int | None:
        if self.terms_min is None or self.min_status != "exact":
            return None
        return self.terms_paper - self.terms_min

    def csv_fields(self) -> list[str]:
        return [str(v) if v is not None else "" for v in (
            self.a, self.b, self.c, self.det, self.terms_paper, self.terms_min, self.min_status)]


@dataclass
class SurveySummary:
    rows: int = 0
    paper_hist: Counter[int] = field(default_factory=Counter)
    gap_hist: Counter[int] = field(default_factory=Counter)
    capped: int = 0
    max_gap: int | None = None
    max_gap_matrix: SymMat2 | None = None

    def add(self, row: SurveyRow) -> None:
        self.rows += 1
        self.paper_hist[row.terms_paper] += 1
        if row.min_status == "depth-capped":
            self.capped += 1
        gap = row.gap
        if gap is not None:
            self.gap_hist[gap] += 1
            if self.max_gap is None or gap > self.max_gap:
                self.max_gap = gap
                self.max_gap_matrix = SymMat2(row.a, row.b, row.c)

    def footer(self) -> list[str]:
        lines = [f"# rows: {self.rows}"]
        lines.append("# terms_paper histogram: " + _fmt_hist(self.paper_hist))
        if self.gap_hist or self.capped:
            lines.append("# gap (terms_paper - terms_min) histogram: " + _fmt_hist(self.gap_hist))
            lines.append(f"# depth-capped rows: {self.capped}")
            if self.max_gap_matrix is not None:
                lines.append(f"# max gap: {self.max_gap} at {self.max_gap_matrix.text()}")
        return lines


def _fmt_hist(h: Counter[int]) -> str:
    return " ".join(f"{k}:{h[k]}" for k in sorted(h)) or "(empty)"


def enumerate_dnn(bound: int) -> Iterator[SymMat2]:
    """Every doubly nonnegative (a, b, c) with a <= c <= bound, in (a, c, b) order."""
    if bound < 1:
        raise ValueError(f"bound must be at least 1, got {bound}")
    for a in range(bound + 1):
        for c in range(a, bound + 1):
            for b in range(isqrt(a * c) + 1):
                yield SymMat2(a, b, c)


def _survey_one(
    m: SymMat2,
    searcher: MinRankSearcher | None,
    depth_cap: int,
    check: bool,
) -> SurveyRow:
    try:
        f = factor(m)
        if check and not verify_factorization(f):
            raise AssertionError("factorization does not reproduce the matrix")
        if searcher is None:
            return SurveyRow(m.a, m.b, m.c, det2(m), len(f))
        res = searcher.min_cp_rank(m, depth_cap)
        return SurveyRow(m.a, m.b, m.c, det2(m), len(f), res.min_terms, res.status)
    except Exception as exc:
        raise SurveyError(m, exc) from exc


_worker_searcher: MinRankSearcher | None = None


def _worker_chunk(args: tuple[list[tuple[int, int, int]], bool, int, bool]) -> list[SurveyRow]:
    global _worker_searcher
    triples, with_oracle, depth_cap, check = args
    if with_oracle and _worker_searcher is None:
        _worker_searcher = MinRankSearcher()
    searcher = _worker_searcher if with_oracle else None
    return [_survey_one(SymMat2(*t), searcher, depth_cap, check) for t in triples]


def _should_check(m: SymMat2, bound: int) -> bool:
    # full check up to bound 30, otherwise a deterministic ~1% sample
    return bound <= 30 or (m.a * 7919 + m.b * 104729 + m.c) % 100 == 0


def iter_survey(
    bound: int,
    with_oracle: bool = False,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    workers: int = 1,
    chunk: int = 256,
) -> Iterator[SurveyRow]:
    """Stream one SurveyRow per enumerated matrix, in enumeration order."""
    matrices = enumerate_dnn(bound)
    if workers <= 1:
        searcher = MinRankSearcher() if with_oracle else None
        for m in matrices:
            yield _survey_one(m, searcher, depth_cap, _should_check(m, bound))
        return

    def chunks() -> Iterator[tuple]:
        batch: list[tuple[int, int, int]] = []
        for m in matrices:
            batch.append((m.a, m.b, m.c))
            if len(batch) == chunk:
                yield batch, with_oracle, depth_cap, bound <= 30
                batch = []
        if batch:
            yield batch, with_oracle, depth_cap, bound <= 30

    # Executor.map yields results in submission order
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for rows in pool.map(_worker_chunk, chunks()):
            yield from rows


def run_survey(
    bound: int,
    with_oracle: bool = False,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    workers: int = 1,
) -> tuple[list[SurveyRow], SurveySummary]:
    rows = []
    summary = SurveySummary()
    for row in iter_survey(bound, with_oracle, depth_cap, workers):
        rows.append(row)
        summary.add(row)
    return rows, summary


def write_csv(rows: Iterable[SurveyRow], out: TextIO) -> SurveySummary:
    """Write rows as they arrive, then the '#' summary footer."""
    summary = SurveySummary()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.csv_fields())
        summary.add(row)
    for line in summary.footer():
        out.write(line + "\n")
    return summary


def survey_csv(bound: int, with_oracle: bool = False, depth_cap: int = DEFAULT_DEPTH_CAP) -> str:
    buf = io.StringIO()
    write_csv(iter_survey(bound, with_oracle, depth_cap), buf)
    return buf.getvalue()
