"""BCI census over a range of moduli, written as JSONL with one summary line per modulus."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator, Optional

from .auto import find_isomorphism, invariant
from .bicyclic import bicyclic_subgroups
from .errors import ResourceExceeded
from .graph import build_haar
from .perm import _UnionFind
from .zn import ZnSet, affine_classes, generates

METHODS = ("definitional", "structural", "both")


@dataclass
class CensusRecord:
    modulus: int
    set: list
    connected: bool
    bci: Optional[bool]
    method: str
    classes: Optional[int]
    partner: Optional[list]
    timing_ms: int
    error: Optional[str] = None

    def to_json(self) -> dict:
        out = asdict(self)
        if out["error"] is None:
            del out["error"]
        return out


def connected_classes(n: int, k: int) -> list[ZnSet]:
    return [S for S in affine_classes(n, k) if generates([s - S.elems[0] for s in S.elems], n)]


def iso_partition(sets: list[ZnSet]) -> list[list[int]]:
    """Partition of ``sets`` (indices) into isomorphism classes of their Haar graphs.

    Graphs are bucketed by a refinement invariant first; only graphs in the same bucket
    are compared with the search oracle.
    """
    graphs = [build_haar(S) for S in sets]
    buckets: dict = {}
    for i, G in enumerate(graphs):
        buckets.setdefault(invariant(G), []).append(i)
    uf = _UnionFind(range(len(sets)))
    for members in buckets.values():
        reps: list[int] = []
        for i in members:
            for r in reps:
                if find_isomorphism(graphs[r], graphs[i]) is not None:
                    uf.union(r, i)
                    break
            else:
                reps.append(i)
    return uf.classes()


def census_n(n: int, k: int, method: str = "definitional", cap: Optional[int] = None) -> list[dict]:
    """Records for every connected class of k-subsets of Z_n, followed by one summary line."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    start = time.perf_counter()
    sets = connected_classes(n, k) if n >= 2 else []
    partner: dict[int, Optional[int]] = {}
    if method in ("definitional", "both"):
        for cls in iso_partition(sets):
            for i in cls:
                others = [j for j in cls if j != i]
                partner[i] = others[0] if others else None
    records = []
    for i, S in enumerate(sets):
        t0 = time.perf_counter()
        bci: Optional[bool] = None
        classes = None
        error = None
        if method in ("structural", "both"):
            try:
                classes = bicyclic_subgroups(build_haar(S), cap).class_count
                bci = classes == 1
            except ResourceExceeded as exc:
                error = f"resource_exceeded: {exc}"
        if method in ("definitional", "both"):
            definitional = partner[i] is None
            if bci is not None and bci != definitional:
                error = "methods disagree"
            bci = definitional
        p = partner.get(i)
        rec = CensusRecord(
            modulus=n,
            set=list(S.elems),
            connected=True,
            bci=bci,
            method=method,
            classes=classes,
            partner=list(sets[p].elems) if p is not None else None,
            timing_ms=int((time.perf_counter() - t0) * 1000),
            error=error,
        )
        records.append(rec.to_json())
    non_bci = sum(1 for r in records if r["bci"] is False)
    records.append(
        {
            "summary": True,
            "modulus": n,
            "k": k,
            "method": method,
            "connected_classes": len(sets),
            "non_bci": non_bci,
            "has_non_bci": non_bci > 0,
            "timing_ms": int((time.perf_counter() - start) * 1000),
        }
    )
    return records


def _census_job(args) -> list[dict]:
    n, k, method, cap = args
    return census_n(n, k, method, cap)


def parse_range(text: str) -> list[int]:
    """'8..16' -> [8, ..., 16]; '8,10,12' and '8' are accepted too."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",") if t]


def census(ns: Iterable[int], k: int, jobs: int = 1, method: str = "definitional", cap: Optional[int] = None) -> Iterator[dict]:
    """Records for each n in order; output is the same for any ``jobs``."""
    if not 1 <= k <= 4:
        raise ValueError("subset size must be between 1 and 4")
    tasks = [(n, k, method, cap) for n in ns]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for recs in pool.map(_census_job, tasks):
                yield from recs
    else:
        for t in tasks:
            yield from _census_job(t)


def completed_moduli(path: str) -> set[int]:
    """Moduli with a summary line in ``path``; anything after the last summary is discarded."""
    if not os.path.exists(path):
        return set()
    with open(path) as fh:
        lines = fh.readlines()
    keep = 0
    done = set()
    for i, line in enumerate(lines):
        try:
            rec = json.loads(line)
        except json.JSONDecodeError:
            break
        if rec.get("summary"):
            keep = i + 1
            done.add(rec["modulus"])
    with open(path, "w") as fh:
        fh.writelines(lines[:keep])
    return done


def run_census(ns: list[int], k: int, out: Optional[str], jobs: int = 1, method: str = "definitional", cap: Optional[int] = None, resume: bool = False, stream=None) -> list[dict]:
    """Drive a census, appending JSONL to ``out`` (resuming after the last finished modulus if asked)."""
    done = completed_moduli(out) if (out and resume) else set()
    todo = [n for n in ns if n not in done]
    summaries = []
    fh = open(out, "a" if resume else "w") if out else None
    try:
        for rec in census(todo, k, jobs, method, cap):
            line = json.dumps(rec, sort_keys=True)
            if fh:
                fh.write(line + "\n")
                fh.flush()
            elif stream is not None:
                stream.write(line + "\n")
            if rec.get("summary"):
                summaries.append(rec)
    finally:
        if fh:
            fh.close()
    return summaries
