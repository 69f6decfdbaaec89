"""Tournament file formats and report serialization.

Two input formats are supported:

* JSON: an object with "players", optional "initial_ratings", and exactly
  one of "matches" (a list of {"a", "b", "score_a"} game records) or
  "crosstable" (the full score matrix A).
* CSV crosstable: a header row and column of labels; cell (i, j) holds
  A[i, j]; diagonal cells are empty or zero.

The games matrix is never stored: it is always recomputed as A + A.T, so a
crosstable is self-sufficient. Missing initial ratings default to zero,
which changes the reported ratings only by a common shift and the ranking
not at all.
"""

from __future__ import annotations

import csv
import io as _stringio
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .diagnostics import DiagnosticsReport
from .tournament import Tournament, build_tournament

REPORT_SCHEMA_VERSION = 1


class ParseError(ValueError):
    """Malformed tournament file; carries a location when one is known."""


@dataclass(frozen=True)
class ParsedTournament:
    tournament: Tournament
    initial_ratings: np.ndarray
    ratings_supplied: bool


def parse_tournament(text: str, fmt: str | None = None) -> ParsedTournament:
    """Parse JSON or CSV crosstable text; sniffs the format when not given."""
    if fmt is None:
        head = text.lstrip()
        fmt = "json" if head.startswith("{") else "csv"
    if fmt == "json":
        return parse_tournament_json(text)
    if fmt == "csv":
        return parse_tournament_csv(text)
    raise ParseError(f"unknown format {fmt!r}; expected 'json' or 'csv'")


def load_tournament(path: str | Path, fmt: str | None = None) -> ParsedTournament:
    path = Path(path)
    if fmt is None and path.suffix.lower() in (".json", ".csv"):
        fmt = path.suffix.lower()[1:]
    return parse_tournament(path.read_text(encoding="utf-8"), fmt)


def parse_tournament_json(text: str) -> ParsedTournament:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")

    players = doc.get("players")
    if not isinstance(players, list) or not players:
        raise ParseError('"players" must be a non-empty list of labels')
    if not all(isinstance(p, str) for p in players):
        raise ParseError("player labels must be strings")

    has_matches = "matches" in doc
    has_crosstable = "crosstable" in doc
    if has_matches == has_crosstable:
        raise ParseError('exactly one of "matches" or "crosstable" must be present')

    if has_matches:
        records = []
        for k, entry in enumerate(doc["matches"], start=1):
            if not isinstance(entry, dict):
                raise ParseError(f"match {k}: expected an object")
            missing = {"a", "b", "score_a"} - entry.keys()
            if missing:
                raise ParseError(f"match {k}: missing keys {sorted(missing)}")
            if not isinstance(entry["score_a"], (int, float)) or isinstance(
                entry["score_a"], bool
            ):
                raise ParseError(f"match {k}: score_a must be a number")
            records.append((entry["a"], entry["b"], float(entry["score_a"])))
        tournament = build_tournament(players, records)
    else:
        matrix = doc["crosstable"]
        n = len(players)
        if not isinstance(matrix, list) or len(matrix) != n:
            raise ParseError(f'"crosstable" must have {n} rows')
        for i, row in enumerate(matrix):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"crosstable row {i + 1} ({players[i]}): expected {n} cells")
            for j, cell in enumerate(row):
                if not isinstance(cell, (int, float)) or isinstance(cell, bool):
                    raise ParseError(
                        f"crosstable row {i + 1} ({players[i]}), column {j + 1}: "
                        f"non-numeric cell {cell!r}"
                    )
        tournament = Tournament(tuple(players), np.array(matrix, dtype=float))

    ratings = doc.get("initial_ratings")
    if ratings is None:
        return ParsedTournament(tournament, np.zeros(tournament.n), False)
    if (
        not isinstance(ratings, list)
        or len(ratings) != tournament.n
        or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in ratings
        )
    ):
        raise ParseError(
            f'"initial_ratings" must be a list of {tournament.n} numbers'
        )
    return ParsedTournament(tournament, np.array(ratings, dtype=float), True)


def parse_tournament_csv(text: str) -> ParsedTournament:
    rows = list(csv.reader(_stringio.StringIO(text)))
    rows = [row for row in rows if any(cell.strip() for cell in row)]
    if len(rows) < 3:
        raise ParseError("CSV crosstable needs a header row and at least 2 player rows")
    header = [cell.strip() for cell in rows[0][1:]]
    n = len(header)
    if len(rows) - 1 != n:
        raise ParseError(
            f"header names {n} players but there are {len(rows) - 1} data rows"
        )
    matrix = np.zeros((n, n))
    labels = []
    for i, row in enumerate(rows[1:]):
        line = i + 2
        if len(row) != n + 1:
            raise ParseError(f"line {line}: expected {n + 1} cells, got {len(row)}")
        label = row[0].strip()
        labels.append(label)
        for j, cell in enumerate(row[1:]):
            cell = cell.strip()
            if cell == "":
                if i != j:
                    raise ParseError(
                        f"line {line}, column {j + 2}: empty cell off the diagonal"
                    )
                continue
            try:
                matrix[i, j] = float(cell)
            except ValueError:
                raise ParseError(
                    f"line {line}, column {j + 2} ({label} vs {header[j]}): "
                    f"non-numeric cell {cell!r}"
                ) from None
    if labels != header:
        raise ParseError(
            f"row labels {labels} do not match header labels {header}"
        )
    tournament = Tournament(tuple(labels), matrix)
    return ParsedTournament(tournament, np.zeros(n), False)


def tournament_to_json(
    t: Tournament,
    initial_ratings: Sequence[float] | None = None,
    match_records: Sequence[tuple[str, str, float]] | None = None,
) -> str:
    """Serialize as JSON, preferring game records when they are available."""
    doc: dict = {"players": list(t.players)}
    if initial_ratings is not None:
        doc["initial_ratings"] = [float(v) for v in initial_ratings]
    if match_records is not None:
        doc["matches"] = [
            {"a": a, "b": b, "score_a": float(score)} for a, b, score in match_records
        ]
    else:
        doc["crosstable"] = [[float(v) for v in row] for row in t.score_matrix]
    return json.dumps(doc, indent=2) + "\n"


def tournament_to_csv(t: Tournament) -> str:
    out = _stringio.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + list(t.players))
    for i, label in enumerate(t.players):
        cells: list[str] = [label]
        for j in range(t.n):
            cells.append("" if i == j else repr(float(t.score_matrix[i, j])))
        writer.writerow(cells)
    return out.getvalue()


def diagnostics_to_dict(report: DiagnosticsReport, players: Sequence[str]) -> dict:
    """JSON-ready rendering of a diagnostics report with label witnesses."""

    def name(indices: tuple[int, ...]) -> list[str]:
        return [players[i] for i in indices]

    return {
        "connected": report.connected,
        "components": [name(c) for c in report.components],
        "nonbipartite": report.nonbipartite,
        "coloring": None
        if report.coloring is None
        else [name(side) for side in report.coloring],
        "eigenvalues": [float(v) for v in report.eigenvalues],
        "multiplicity_one": report.multiplicity_one,
        "has_minus_one": report.has_minus_one,
        "spectral_gap": report.spectral_gap,
        "lopsided_pairs": [[players[i], players[j]] for i, j in report.per_pair_warning],
    }
