"""Temporal hypergraph data model, ingestion and preprocessing.

Hyperedges are stored in CSR form: ``edge_ptr`` delimits each edge's slice of
``edge_members`` (sorted, deduplicated vertex ids).  The vertex -> edge
incidence index is built lazily once times are known, with every per-vertex
list ordered by ``(time, edge id)``.
"""
from __future__ import annotations

import csv
import io
import json
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DuplicateIdError, ParseError, SchemaError, TimeParseError

TIME_UNITS = {"seconds": 1.0, "days": 86400.0, "months": 86400.0 * 365.2425 / 12}


def normalize_name(name: str) -> str:
    return unicodedata.normalize("NFC", name).lower()


@dataclass(frozen=True, eq=False)
class TemporalHypergraph:
    vertex_names: list[str]
    edge_ptr: np.ndarray
    edge_members: np.ndarray
    raw_times: list
    edge_ids: list[str]
    labels: list[tuple[str, ...]]
    times: np.ndarray | None = None
    time_unit: str | None = None

    @classmethod
    def from_lists(cls, edges: Sequence[Iterable], times=None, labels=None, edge_ids=None):
        """Build a hypergraph from member iterables; names are ``str(member)``.

        Numeric ``times`` are used as-is (no shift to zero); anything else is
        kept raw until :func:`normalize_times`.
        """
        index: dict[str, int] = {}
        names: list[str] = []
        ptr = [0]
        flat: list[int] = []
        for members in edges:
            ids = set()
            for m in members:
                key = normalize_name(str(m))
                if key not in index:
                    index[key] = len(names)
                    names.append(key)
                ids.add(index[key])
            flat.extend(sorted(ids))
            ptr.append(len(flat))
        n = len(ptr) - 1
        raw = list(times) if times is not None else [0.0] * n
        t = None
        if times is not None and all(isinstance(x, (int, float, np.number)) and not isinstance(x, bool) for x in raw):
            t = np.asarray(raw, dtype=np.float64)
        return cls(
            vertex_names=names,
            edge_ptr=np.asarray(ptr, dtype=np.int64),
            edge_members=np.asarray(flat, dtype=np.int32),
            raw_times=raw,
            edge_ids=list(edge_ids) if edge_ids is not None else [str(i) for i in range(n)],
            labels=[tuple(x) for x in labels] if labels is not None else [()] * n,
            times=t,
            time_unit="days" if t is not None else None,
        )

    @classmethod
    def from_arrays(cls, edge_ptr, members, times, vertex_names=None, labels=None):
        """CSR constructor; duplicate members within an edge are collapsed."""
        edge_ptr = np.asarray(edge_ptr, dtype=np.int64)
        members = np.asarray(members, dtype=np.int64)
        n = edge_ptr.shape[0] - 1
        edge_of = np.repeat(np.arange(n, dtype=np.int64), np.diff(edge_ptr))
        order = np.lexsort((members, edge_of))
        m, e = members[order], edge_of[order]
        keep = np.ones(m.shape[0], bool)
        keep[1:] = (m[1:] != m[:-1]) | (e[1:] != e[:-1])
        m, e = m[keep], e[keep]
        ptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(e, minlength=n), out=ptr[1:])
        if vertex_names is None:
            n_v = int(members.max()) + 1 if members.size else 0
            vertex_names = [f"v{k}" for k in range(n_v)]
        t = np.asarray(times, dtype=np.float64)
        return cls(
            vertex_names=list(vertex_names),
            edge_ptr=ptr,
            edge_members=m.astype(np.int32),
            raw_times=t.tolist(),
            edge_ids=[str(k) for k in range(n)],
            labels=[tuple(x) for x in labels] if labels is not None else [()] * n,
            times=t,
            time_unit="days",
        )

    @property
    def n_edges(self) -> int:
        return len(self.edge_ptr) - 1

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.diff(self.edge_ptr).astype(np.int64)

    def members(self, e: int) -> np.ndarray:
        return self.edge_members[self.edge_ptr[e]:self.edge_ptr[e + 1]]

    def member_sets(self) -> list[frozenset]:
        return [frozenset(self.members(e).tolist()) for e in range(self.n_edges)]

    def _require_times(self):
        if self.times is None:
            raise ValueError("hypergraph times are not normalized; call normalize_times first")
        return self.times

    @cached_property
    def _incidence(self):
        times = self._require_times()
        edge_of_entry = np.repeat(np.arange(self.n_edges, dtype=np.int64), self.sizes)
        verts = self.edge_members.astype(np.int64)
        # sort entries by (vertex, time, edge id)
        order = np.lexsort((edge_of_entry, times[edge_of_entry], verts))
        inc_edge = edge_of_entry[order].astype(np.int32)
        counts = np.bincount(verts, minlength=self.n_vertices)
        inc_ptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
        np.cumsum(counts, out=inc_ptr[1:])
        # position of each (edge, member) entry inside the incidence array
        pos = np.empty(len(order), dtype=np.int64)
        pos[order] = np.arange(len(order), dtype=np.int64)
        return inc_ptr, inc_edge, np.ascontiguousarray(times[inc_edge]), pos

    @property
    def incidence_ptr(self) -> np.ndarray:
        return self._incidence[0]

    @property
    def incidence_edges(self) -> np.ndarray:
        return self._incidence[1]

    @property
    def incidence_times(self) -> np.ndarray:
        return self._incidence[2]

    @property
    def entry_positions(self) -> np.ndarray:
        """For each entry of ``edge_members``, its index in ``incidence_edges``."""
        return self._incidence[3]

    def incident_edges(self, v: int) -> np.ndarray:
        return self.incidence_edges[self.incidence_ptr[v]:self.incidence_ptr[v + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self.edge_members, minlength=self.n_vertices).astype(np.int64)


@dataclass
class CleanReport:
    removed_vertices: int = 0
    removed_edges: int = 0
    removed_edge_ids: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"removed_vertices": self.removed_vertices, "removed_edges": self.removed_edges}


class _Builder:
    def __init__(self):
        self.index: dict[str, int] = {}
        self.names: list[str] = []
        self.ptr = [0]
        self.flat: list[int] = []
        self.raw_times: list = []
        self.ids: list[str] = []
        self.seen_ids: set[str] = set()
        self.labels: list[tuple[str, ...]] = []

    def add(self, members, time, labels, edge_id, line=None):
        if edge_id is None:
            edge_id = str(len(self.ids))
        if edge_id in self.seen_ids:
            raise DuplicateIdError(f"duplicate edge id {edge_id!r}", line)
        self.seen_ids.add(edge_id)
        ids = set()
        for m in members:
            key = normalize_name(m)
            if key not in self.index:
                self.index[key] = len(self.names)
                self.names.append(key)
            ids.add(self.index[key])
        self.flat.extend(sorted(ids))
        self.ptr.append(len(self.flat))
        self.raw_times.append(time)
        self.ids.append(edge_id)
        self.labels.append(tuple(labels))

    def build(self) -> TemporalHypergraph:
        return TemporalHypergraph(
            vertex_names=self.names,
            edge_ptr=np.asarray(self.ptr, dtype=np.int64),
            edge_members=np.asarray(self.flat, dtype=np.int32),
            raw_times=self.raw_times,
            edge_ids=self.ids,
            labels=self.labels,
        )


def _check_record(obj, line):
    if not isinstance(obj, dict):
        raise SchemaError("record is not a JSON object", line)
    if "members" not in obj:
        raise SchemaError("missing field 'members'", line)
    if "time" not in obj:
        raise SchemaError("missing field 'time'", line)
    members = obj["members"]
    if not isinstance(members, list) or not all(isinstance(m, str) for m in members):
        raise SchemaError("'members' must be an array of strings", line)
    t = obj["time"]
    if isinstance(t, bool) or not isinstance(t, (str, int, float)):
        raise SchemaError("'time' must be a date string or a number", line)
    labels = obj.get("labels", [])
    if labels is None:
        labels = []
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise SchemaError("'labels' must be an array of strings", line)
    edge_id = obj.get("id")
    if edge_id is not None:
        if isinstance(edge_id, bool) or not isinstance(edge_id, (str, int)):
            raise SchemaError("'id' must be a string", line)
        edge_id = str(edge_id)
    return members, t, labels, edge_id


def parse_jsonl(stream: IO | Iterable) -> TemporalHypergraph:
    """Read one hyperedge per JSON line. Edge ids follow file order."""
    b = _Builder()
    for lineno, line in enumerate(stream, start=1):
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed JSON ({exc.msg})", lineno) from None
        members, t, labels, edge_id = _check_record(obj, lineno)
        b.add(members, t, labels, edge_id, lineno)
    return b.build()


def parse_csv(edges: IO, incidence: IO) -> TemporalHypergraph:
    """Two-file form: ``edges.csv`` (id,time,labels) and ``incidence.csv`` (edge_id,member).

    Labels are separated by ``;``.  Edges listed without incidence rows are empty.
    """
    edge_rows = list(csv.DictReader(edges))
    members: dict[str, list[str]] = {}
    for lineno, row in enumerate(csv.DictReader(incidence), start=2):
        if row.get("edge_id") is None or row.get("member") is None:
            raise SchemaError("incidence rows need 'edge_id' and 'member'", lineno)
        members.setdefault(row["edge_id"], []).append(row["member"])
    b = _Builder()
    for lineno, row in enumerate(edge_rows, start=2):
        if row.get("id") in (None, "") or row.get("time") in (None, ""):
            raise SchemaError("edge rows need 'id' and 'time'", lineno)
        raw = row["time"]
        try:
            t = float(raw)
        except ValueError:
            t = raw
        labels = [x for x in (row.get("labels") or "").split(";") if x]
        b.add(members.pop(row["id"], []), t, labels, row["id"], lineno)
    if members:
        unknown = sorted(members)[0]
        raise SchemaError(f"incidence references unknown edge id {unknown!r}")
    return b.build()


def write_jsonl(H: TemporalHypergraph, stream: IO[str]) -> None:
    for e in range(H.n_edges):
        rec = {
            "id": H.edge_ids[e],
            "members": sorted(H.vertex_names[v] for v in H.members(e)),
            "time": H.raw_times[e],
        }
        if H.labels[e]:
            rec["labels"] = list(H.labels[e])
        stream.write(json.dumps(rec, ensure_ascii=False) + "\n")


def clean_authors(H: TemporalHypergraph, prefix: str = "n/a") -> tuple[TemporalHypergraph, CleanReport]:
    """Drop vertices whose name starts with ``prefix``, then drop edges left empty."""
    if not prefix:
        raise ValueError("prefix must be non-empty")
    prefix = normalize_name(prefix)
    drop = np.array([name.startswith(prefix) for name in H.vertex_names], dtype=bool)
    keep_v = ~drop
    new_vid = np.full(H.n_vertices, -1, dtype=np.int64)
    new_vid[keep_v] = np.arange(int(keep_v.sum()))

    entry_keep = keep_v[H.edge_members] if len(H.edge_members) else np.zeros(0, bool)
    edge_of_entry = np.repeat(np.arange(H.n_edges), H.sizes)
    new_sizes = np.bincount(edge_of_entry[entry_keep], minlength=H.n_edges)
    keep_e = new_sizes > 0

    members = new_vid[H.edge_members[entry_keep & keep_e[edge_of_entry]]]
    ptr = np.zeros(int(keep_e.sum()) + 1, dtype=np.int64)
    np.cumsum(new_sizes[keep_e], out=ptr[1:])
    kept = np.flatnonzero(keep_e)

    out = TemporalHypergraph(
        vertex_names=[n for n, k in zip(H.vertex_names, keep_v) if k],
        edge_ptr=ptr,
        edge_members=members.astype(np.int32),
        raw_times=[H.raw_times[e] for e in kept],
        edge_ids=[H.edge_ids[e] for e in kept],
        labels=[H.labels[e] for e in kept],
        times=H.times[kept] if H.times is not None else None,
        time_unit=H.time_unit,
    )
    report = CleanReport(
        removed_vertices=int(drop.sum()),
        removed_edges=int((~keep_e).sum()),
        removed_edge_ids=[H.edge_ids[e] for e in np.flatnonzero(~keep_e)],
    )
    return out, report


def _to_seconds(value) -> float:
    text = value.strip()
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def normalize_times(H: TemporalHypergraph, unit: str = "days") -> TemporalHypergraph:
    """Set ``t(e)`` to the elapsed time since the earliest edge, in ``unit``.

    Date strings are converted with calendar arithmetic.  Plain numbers are
    taken to already be in ``unit`` and are only shifted.  Mixing the two is
    an error.
    """
    if unit not in TIME_UNITS:
        raise ValueError(f"unknown time unit {unit!r}; expected one of {sorted(TIME_UNITS)}")
    numeric = [isinstance(t, (int, float)) and not isinstance(t, bool) for t in H.raw_times]
    if any(numeric) and not all(numeric):
        e = numeric.index(not numeric[0])
        raise TimeParseError(f"edge {H.edge_ids[e]!r}: mixes numeric and date timestamps")
    values = np.empty(H.n_edges, dtype=np.float64)
    if all(numeric):
        values[:] = H.raw_times
        scale = 1.0
    else:
        for e, raw in enumerate(H.raw_times):
            try:
                values[e] = _to_seconds(raw)
            except (ValueError, TypeError):
                raise TimeParseError(f"edge {H.edge_ids[e]!r}: cannot parse timestamp {raw!r}") from None
        scale = TIME_UNITS[unit]
    if not np.all(np.isfinite(values)):
        e = int(np.flatnonzero(~np.isfinite(values))[0])
        raise TimeParseError(f"edge {H.edge_ids[e]!r}: non-finite timestamp")
    if H.n_edges:
        values = (values - values.min()) / scale
    return TemporalHypergraph(
        vertex_names=H.vertex_names,
        edge_ptr=H.edge_ptr,
        edge_members=H.edge_members,
        raw_times=H.raw_times,
        edge_ids=H.edge_ids,
        labels=H.labels,
        times=values,
        time_unit=unit,
    )


def load(path, prefix: str | None = "n/a", unit: str = "days") -> TemporalHypergraph:
    """Parse a JSONL file, clean (unless ``prefix`` is None) and normalize times."""
    with open(path, "rb") as fh:
        H = parse_jsonl(fh)
    if prefix:
        H, _ = clean_authors(H, prefix)
    return normalize_times(H, unit)


def degree(H: TemporalHypergraph, v: int) -> int:
    if not 0 <= v < H.n_vertices:
        raise IndexError(f"unknown vertex id {v}")
    return int(H.degrees[v])


def edge_size_histogram(H: TemporalHypergraph) -> dict[int, int]:
    return dict(sorted(Counter(H.sizes.tolist()).items()))


def edge_time_histogram(H: TemporalHypergraph, bin_width: float) -> dict[int, int]:
    """Counts per time bin; key ``k`` covers ``[k*bin_width, (k+1)*bin_width)``."""
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    times = H._require_times()
    bins = np.floor(times / bin_width).astype(np.int64)
    return dict(sorted(Counter(bins.tolist()).items()))


def dumps_jsonl(H: TemporalHypergraph) -> str:
    buf = io.StringIO()
    write_jsonl(H, buf)
    return buf.getvalue()
