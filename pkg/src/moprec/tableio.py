"""Reading and writing coefficient tables as JSON and CSV files.

Four artifact kinds move through files: step-line tables, marginal
three-term tables, nearest-neighbor grids (two-measure triangle or general
layout), and discrete measure systems (JSON only).  Every rational value is
serialized as a plain "p" or "p/q" digit string, so a written file re-read
gives exactly the same objects back; decimal columns are derived output only
and are ignored on ingest.

JSON files carry a "kind" field; CSV files are recognized by their header
row.  Malformed content raises ParseError, with a line number for CSV.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path

from .errors import DomainError, ParseError
from .measures_catalog import DiscreteMeasure
from .nearest_neighbor import MarginalRecurrence, NNGrid
from .inverse_problem import NNGridR
from .numerics import sqrt_real, to_decimal
from .stepline import Axis, CoeffSeq, StepLineCoeffs

STEPLINE_HEADER = ["n", "beta", "gamma", "delta"]
MARGINAL_HEADER = ["n", "b", "a_sq", "a_decimal"]
GRID2_HEADER = ["n", "m", "a", "b", "c", "d"]


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str, line: int | None = None) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}", line=line) from None


def _suffix(path) -> str:
    sfx = Path(path).suffix.lower()
    if sfx not in (".json", ".csv"):
        raise DomainError(f"unsupported table format {sfx!r} (use .json or .csv)")
    return sfx


def _load_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return data


def _expect_kind(data: dict, kind: str, path):
    if data.get("kind") != kind:
        raise ParseError(f"{path}: expected kind {kind!r}, found {data.get('kind')!r}")


def _fraction_list(values, path, what) -> tuple:
    if not isinstance(values, list):
        raise ParseError(f"{path}: {what} must be a list")
    return tuple(parse_fraction(str(v)) for v in values)


def _read_csv_rows(path, header):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = list(reader)
    if not rows:
        raise ParseError(f"{path}: empty file", line=1)
    if [h.strip() for h in rows[0]] != header:
        raise ParseError(
            f"{path}: expected header {','.join(header)}, found {','.join(rows[0])}",
            line=1,
        )
    return rows[1:]


def _csv_cell(row, i):
    return row[i].strip() if i < len(row) else ""


def _as_int(value, path, what) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"{path}: {what} must be an integer, found {value!r}") from None


# ---------------------------------------------------------------- step-line


def write_stepline(table: StepLineCoeffs, path) -> None:
    if _suffix(path) == ".csv" and table.level != 0:
        raise DomainError("CSV step-line files are level-0 only; use JSON for shifted tables")
    if _suffix(path) == ".json":
        data = {
            "kind": "stepline",
            "axis": None if table.axis is None else table.axis.value,
            "level": table.level,
            "beta": {"start": table.beta.start, "values": [fraction_str(v) for v in table.beta.values]},
            "gamma": {"start": table.gamma.start, "values": [fraction_str(v) for v in table.gamma.values]},
            "delta": {"start": table.delta.start, "values": [fraction_str(v) for v in table.delta.values]},
        }
        Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
        return
    lo = min(table.beta.start, table.gamma.start, table.delta.start)
    hi = max(table.beta.last, table.gamma.last, table.delta.last)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(STEPLINE_HEADER)
        for n in range(lo, hi + 1):
            writer.writerow([
                n,
                fraction_str(table.beta[n]) if n in table.beta else "",
                fraction_str(table.gamma[n]) if n in table.gamma else "",
                fraction_str(table.delta[n]) if n in table.delta else "",
            ])


def _column_seq(cells, label, path) -> CoeffSeq:
    """One contiguous run of non-blank (n, value) cells to a CoeffSeq."""
    filled = [(n, v, line) for n, v, line in cells if v != ""]
    if not filled:
        raise ParseError(f"{path}: column {label} has no values")
    start = filled[0][0]
    for pos, (n, _, line) in enumerate(filled):
        if n != start + pos:
            raise ParseError(
                f"{path}: column {label} not contiguous at n={n}", line=line
            )
    return CoeffSeq(start, tuple(parse_fraction(v, line) for _, v, line in filled), label)


def read_stepline(path) -> StepLineCoeffs:
    if _suffix(path) == ".json":
        data = _load_json(path)
        _expect_kind(data, "stepline", path)
        axis = data.get("axis")
        seqs = {}
        for label in ("beta", "gamma", "delta"):
            block = data.get(label)
            if not isinstance(block, dict) or "start" not in block or "values" not in block:
                raise ParseError(f"{path}: {label} must be an object with start and values")
            seqs[label] = CoeffSeq(
                _as_int(block["start"], path, f"{label} start"),
                _fraction_list(block["values"], path, label),
                label,
            )
        if axis is not None and axis not in (Axis.E1.value, Axis.E2.value):
            raise ParseError(f"{path}: unknown axis {axis!r}")
        return StepLineCoeffs(
            None if axis is None else Axis(axis),
            _as_int(data.get("level", 0), path, "level"),
            seqs["beta"],
            seqs["gamma"],
            seqs["delta"],
        )
    rows = _read_csv_rows(path, STEPLINE_HEADER)
    cols: dict[str, list] = {"beta": [], "gamma": [], "delta": []}
    for i, row in enumerate(rows):
        line = i + 2
        if not any(cell.strip() for cell in row):
            continue
        try:
            n = int(_csv_cell(row, 0))
        except ValueError:
            raise ParseError(f"{path}: bad index {_csv_cell(row, 0)!r}", line=line) from None
        for j, label in enumerate(("beta", "gamma", "delta")):
            cols[label].append((n, _csv_cell(row, j + 1), line))
    return StepLineCoeffs(
        None,
        0,
        _column_seq(cols["beta"], "beta", path),
        _column_seq(cols["gamma"], "gamma", path),
        _column_seq(cols["delta"], "delta", path),
    )


# ----------------------------------------------------------------- marginal


def _a_decimal(a_sq: Fraction, digits: int) -> str:
    if a_sq == 0:
        return "--"
    if a_sq < 0:
        return ""
    return to_decimal(sqrt_real(a_sq, digits), digits)


def write_marginal(marg: MarginalRecurrence, path, digits: int = 20) -> None:
    if _suffix(path) == ".json":
        data = {
            "kind": "marginal",
            "b": [fraction_str(v) for v in marg.b],
            "a_sq": [fraction_str(v) for v in marg.a_sq],
            "a_decimal": [_a_decimal(v, digits) for v in marg.a_sq],
            "digits": digits,
        }
        Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MARGINAL_HEADER)
        for n, (b, a_sq) in enumerate(zip(marg.b, marg.a_sq)):
            writer.writerow([n, fraction_str(b), fraction_str(a_sq), _a_decimal(a_sq, digits)])


def read_marginal(path) -> MarginalRecurrence:
    if _suffix(path) == ".json":
        data = _load_json(path)
        _expect_kind(data, "marginal", path)
        b = _fraction_list(data.get("b"), path, "b")
        a_sq = _fraction_list(data.get("a_sq"), path, "a_sq")
        return MarginalRecurrence(b, a_sq)
    rows = _read_csv_rows(path, MARGINAL_HEADER)
    b, a_sq = [], []
    for i, row in enumerate(rows):
        line = i + 2
        if not any(cell.strip() for cell in row):
            continue
        try:
            n = int(_csv_cell(row, 0))
        except ValueError:
            raise ParseError(f"{path}: bad index {_csv_cell(row, 0)!r}", line=line) from None
        if n != len(b):
            raise ParseError(f"{path}: rows must run n = 0, 1, ... (got {n})", line=line)
        b.append(parse_fraction(_csv_cell(row, 1), line))
        a_sq.append(parse_fraction(_csv_cell(row, 2), line))
    if not b:
        raise ParseError(f"{path}: no data rows")
    return MarginalRecurrence(tuple(b), tuple(a_sq))


# ------------------------------------------------------------------- grids


def write_nn_grid(grid, path) -> None:
    """Write a two-measure triangle grid or a general-layout grid."""
    two = isinstance(grid, NNGrid)
    if _suffix(path) == ".json":
        if two:
            data = {
                "kind": "nn_grid",
                "r": 2,
                "max_diag": grid.max_diag,
                "entries": [
                    {
                        "n": n,
                        "m": m,
                        "a": fraction_str(grid.a(n, m)),
                        "b": fraction_str(grid.b(n, m)),
                        "c": fraction_str(grid.c(n, m)),
                        "d": fraction_str(grid.d(n, m)),
                    }
                    for n, m in grid.indices()
                ],
            }
        else:
            data = {
                "kind": "nn_grid",
                "r": grid.r,
                "max_len": grid.max_len,
                "entries": [
                    {
                        "index": list(nvec),
                        "a": [fraction_str(grid.a(nvec, i)) for i in range(grid.r)],
                        "b": [fraction_str(grid.b(nvec, i)) for i in range(grid.r)],
                    }
                    for nvec in grid.multi_indices()
                ],
            }
        Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if two:
            writer.writerow(GRID2_HEADER)
            for n, m in grid.indices():
                writer.writerow([
                    n, m,
                    fraction_str(grid.a(n, m)), fraction_str(grid.b(n, m)),
                    fraction_str(grid.c(n, m)), fraction_str(grid.d(n, m)),
                ])
        else:
            r = grid.r
            writer.writerow(
                [f"n{i + 1}" for i in range(r)]
                + [f"a{i + 1}" for i in range(r)]
                + [f"b{i + 1}" for i in range(r)]
            )
            for nvec in grid.multi_indices():
                writer.writerow(
                    list(nvec)
                    + [fraction_str(grid.a(nvec, i)) for i in range(r)]
                    + [fraction_str(grid.b(nvec, i)) for i in range(r)]
                )


def _grid_from_cells(cells: dict, r: int, path) -> NNGrid | NNGridR:
    """Assemble a grid object from {nvec: (avec, bvec)}, checking completeness."""
    if not cells:
        raise ParseError(f"{path}: no data rows")
    if any(v < 0 for nvec in cells for v in nvec):
        raise ParseError(f"{path}: negative multi-index components")
    max_len = max(sum(nvec) for nvec in cells)
    missing = [
        nvec
        for total in range(max_len + 1)
        for nvec in _all_indices(total, r)
        if nvec not in cells
    ]
    if missing:
        raise ParseError(
            f"{path}: grid incomplete, missing entries for {missing[:3]}"
            + ("..." if len(missing) > 3 else "")
        )
    if r == 2:
        rows = tuple(
            tuple(
                (*cells[n, m][0], *cells[n, m][1])
                for m in range(max_len + 1 - n)
            )
            for n in range(max_len + 1)
        )
        return NNGrid(max_len, rows)
    a_entries, b_entries = {}, {}
    for nvec, (avec, bvec) in cells.items():
        for i in range(r):
            a_entries[nvec, i] = avec[i]
            b_entries[nvec, i] = bvec[i]
    return NNGridR(r, max_len, a_entries, b_entries)


def _all_indices(total: int, r: int):
    if r == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _all_indices(total - head, r - 1):
            yield (head, *rest)


def read_nn_grid(path) -> NNGrid | NNGridR:
    if _suffix(path) == ".json":
        data = _load_json(path)
        _expect_kind(data, "nn_grid", path)
        r = int(data.get("r", 0))
        if r < 2:
            raise ParseError(f"{path}: grid needs r >= 2, found {data.get('r')!r}")
        entries = data.get("entries")
        if not isinstance(entries, list):
            raise ParseError(f"{path}: entries must be a list")
        cells = {}
        for e in entries:
            if not isinstance(e, dict):
                raise ParseError(f"{path}: grid entries must be objects")
            try:
                if r == 2 and "n" in e:
                    nvec = (_as_int(e["n"], path, "n"), _as_int(e["m"], path, "m"))
                    avec = (parse_fraction(str(e["a"])), parse_fraction(str(e["b"])))
                    bvec = (parse_fraction(str(e["c"])), parse_fraction(str(e["d"])))
                else:
                    nvec = tuple(_as_int(v, path, "index part") for v in e["index"])
                    if len(nvec) != r:
                        raise ParseError(f"{path}: index {nvec} does not have {r} parts")
                    avec = _fraction_list(e["a"], path, "a")
                    bvec = _fraction_list(e["b"], path, "b")
                    if len(avec) != r or len(bvec) != r:
                        raise ParseError(f"{path}: entry {nvec} needs {r} a and b values")
            except KeyError as exc:
                raise ParseError(f"{path}: grid entry missing field {exc}") from None
            cells[nvec] = (avec, bvec)
        return _grid_from_cells(cells, r, path)
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError(f"{path}: empty file", line=1)
    header = [h.strip() for h in rows[0]]
    if header == GRID2_HEADER:
        r = 2
    elif len(header) % 3 == 0 and header == (
        [f"n{i + 1}" for i in range(len(header) // 3)]
        + [f"a{i + 1}" for i in range(len(header) // 3)]
        + [f"b{i + 1}" for i in range(len(header) // 3)]
    ):
        r = len(header) // 3
    else:
        raise ParseError(f"{path}: unrecognized grid header {','.join(header)}", line=1)
    cells = {}
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if not any(cell.strip() for cell in row):
            continue
        try:
            if r == 2 and header == GRID2_HEADER:
                nvec = (int(_csv_cell(row, 0)), int(_csv_cell(row, 1)))
                vals = [parse_fraction(_csv_cell(row, j), line) for j in range(2, 6)]
                avec, bvec = (vals[0], vals[1]), (vals[2], vals[3])
            else:
                nvec = tuple(int(_csv_cell(row, j)) for j in range(r))
                avec = tuple(parse_fraction(_csv_cell(row, r + j), line) for j in range(r))
                bvec = tuple(parse_fraction(_csv_cell(row, 2 * r + j), line) for j in range(r))
        except ValueError:
            raise ParseError(f"{path}: bad integer index", line=line) from None
        cells[nvec] = (avec, bvec)
    return _grid_from_cells(cells, r, path)


# ---------------------------------------------------------------- measures


def write_measures(measures, path) -> None:
    if _suffix(path) != ".json":
        raise DomainError("measure systems are JSON only")
    data = {
        "kind": "measures",
        "measures": [
            {
                "support": [fraction_str(x) for x in mu.support],
                "weights": [fraction_str(w) for w in mu.weights],
            }
            for mu in measures
        ],
    }
    Path(path).write_text(json.dumps(data, indent=1) + "\n", encoding="utf-8")


def read_measures(path) -> tuple:
    if _suffix(path) != ".json":
        raise DomainError("measure systems are JSON only")
    data = _load_json(path)
    _expect_kind(data, "measures", path)
    raw = data.get("measures")
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{path}: measures must be a nonempty list")
    out = []
    for i, block in enumerate(raw):
        if not isinstance(block, dict):
            raise ParseError(f"{path}: measure {i} must be an object")
        support = _fraction_list(block.get("support"), path, f"measure {i} support")
        weights = _fraction_list(block.get("weights"), path, f"measure {i} weights")
        out.append(DiscreteMeasure(support, weights))
    return tuple(out)
