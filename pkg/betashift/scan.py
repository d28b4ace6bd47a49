"""
Parameter-plane scans: a grid over Δ, one record per cell, CSV and SVG output
"""

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from models.shift_models import Params, ScanRecord, ShiftStatus  # noqa: E402

from .config import Settings  # noqa: E402
from .density import approximate_sft  # noqa: E402
from .errors import BetaShiftError, DomainError  # noqa: E402
from .numeric import Expression, Real, working_precision  # noqa: E402

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "beta",
    "alpha",
    "status",
    "n_used",
    "period_lower",
    "period_upper",
    "b",
    "a",
    "entropy",
    "err_beta",
    "err_alpha",
]

Cell = Tuple[int, Fraction, Fraction]


def grid_cells(beta_min: str, beta_max: str, beta_steps: int, alpha_steps: int) -> List[Cell]:
    """Cell centers: β_i at the middle of its column, α a fraction (j + ½)/steps of 2 − β"""
    low, high = Fraction(beta_min), Fraction(beta_max)
    if not (1 <= low < high <= 2):
        raise DomainError(f"β range must satisfy 1 <= min < max <= 2, got [{beta_min}, {beta_max}]")
    if beta_steps < 0 or alpha_steps < 0:
        raise DomainError("grid sizes must be nonnegative")
    cells = []
    for i in range(beta_steps):
        beta = low + (i + Fraction(1, 2)) * (high - low) / beta_steps
        for j in range(alpha_steps):
            alpha = (j + Fraction(1, 2)) / alpha_steps * (2 - beta)
            cells.append((len(cells), beta, alpha))
    return cells


def _decimal(value: Fraction, bits: int) -> str:
    with working_precision(bits):
        return Real.exact(value).to_decimal()


def scan_cell(cell: Cell, epsilon: str, settings: Settings) -> Tuple[int, ScanRecord]:
    """Approximate one cell; failures are recorded as undetermined"""
    index, beta, alpha = cell
    params = Params(beta=Expression(beta), alpha=Expression(alpha))
    row = {"beta": _decimal(beta, settings.bits), "alpha": _decimal(alpha, settings.bits)}
    try:
        result = approximate_sft(params, epsilon, settings)
    except BetaShiftError as e:
        logger.warning("cell %d (%s, %s) failed: %s", index, row["beta"], row["alpha"], e)
        return index, ScanRecord(status=ShiftStatus.UNDETERMINED, **row)
    lower, upper = result.pair
    row.update(
        status=ShiftStatus.FINITE_TYPE,
        n_used=result.n_used,
        period_lower=len(lower.period),
        period_upper=len(upper.period),
        b=result.target_b.to_decimal(),
        a=result.target_a.to_decimal(),
        entropy=result.certificate.entropy.to_decimal(),
        err_beta=result.err_beta.to_decimal(),
        err_alpha=result.err_alpha.to_decimal(),
    )
    return index, ScanRecord(**row)


def _scan_task(args: Tuple[Cell, str, Dict]) -> Tuple[int, ScanRecord]:
    cell, epsilon, settings = args
    return scan_cell(cell, epsilon, Settings(**settings))


def run_scan(cells: List[Cell], epsilon: str, settings: Settings) -> List[ScanRecord]:
    """Records in grid order, whatever order the workers finish in"""
    tasks = [(cell, epsilon, settings.model_dump()) for cell in cells]
    if settings.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            results = list(pool.map(_scan_task, tasks))
    else:
        results = [_scan_task(task) for task in tasks]
    logger.info("scanned %d cells", len(results))
    return [record for _, record in sorted(results, key=lambda item: item[0])]


def write_scan_csv(records: List[ScanRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for record in records:
            data = record.model_dump(mode="json")
            writer.writerow({key: "" if data[key] is None else data[key] for key in CSV_COLUMNS})


def read_scan_csv(path: str) -> List[ScanRecord]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is not None and list(reader.fieldnames) != CSV_COLUMNS:
            raise DomainError(f"unexpected CSV header in {path}: {reader.fieldnames}")
        return [ScanRecord(**{key: (value if value != "" else None) for key, value in row.items()}) for row in reader]


def write_scan_svg(records: List[ScanRecord], path: str, title: Optional[str] = None) -> None:
    """Found (b, a) over the outline of Δ"""
    plt.rcParams["svg.hashsalt"] = "betashift"
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot([1, 2, 1, 1], [0, 0, 1, 0], color="black", linewidth=1)
    found = [r for r in records if r.status is ShiftStatus.FINITE_TYPE]
    ax.scatter([float(r.b) for r in found], [float(r.a) for r in found], s=8, color="tab:blue", label="finite type")
    missed = [r for r in records if r.status is not ShiftStatus.FINITE_TYPE]
    if missed:
        ax.scatter(
            [float(r.beta) for r in missed], [float(r.alpha) for r in missed], s=8, color="tab:red", label="other"
        )
    ax.set_xlim(1, 2)
    ax.set_ylim(0, 1)
    ax.set_xlabel("β")
    ax.set_ylabel("α")
    ax.set_title(title or "finite-type approximations in Δ")
    ax.legend(loc="upper right")
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
