"""JSON and CSV emitters for S-matrices, fusion tensors and character tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .chartable import CharTable
from .double import DrinfeldDouble, FusionTensor, SMatrix
from .rings import FusionRing

__all__ = [
    "dumps",
    "smatrix_to_json",
    "fusion_to_json",
    "fusion_from_json",
    "load_fusion",
    "fusion_to_csv",
    "chartable_to_json",
]


def dumps(data) -> str:
    """Deterministic JSON text (fixed key order from the emitters, no floats)."""
    return json.dumps(data, indent=1, ensure_ascii=False) + "\n"


def smatrix_to_json(S: SMatrix, group_name: str = "") -> dict:
    return {
        "group": group_name,
        "order": S.order,
        "conductor": S.conductor,
        "rank": S.size,
        "unit": S.unit_index,
        "labels": [o.label for o in S.objects],
        "entries": [[z.to_json() for z in row] for row in S.entries],
    }


def fusion_to_json(R: FusionRing, group_name: str = "") -> dict:
    N = R.N
    triples = [[int(a), int(b), int(c), int(N[a, b, c])] for a, b, c in np.argwhere(N != 0)]
    return {
        "group": group_name,
        "method": R.tensor.method,
        "rank": R.rank,
        "labels": list(R.labels),
        "dims": [int(d) for d in R.dims],
        "unit": R.unit_index,
        "dual": [int(d) for d in R.dual],
        "triples": triples,
    }


def fusion_from_json(data: dict) -> FusionRing:
    try:
        r = int(data["rank"])
        N = np.zeros((r, r, r), dtype=np.int64)
        for a, b, c, n in data["triples"]:
            N[a, b, c] = n
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"malformed fusion file: {exc}") from exc
    return FusionRing.from_tensor(
        N,
        labels=data.get("labels"),
        dims=data.get("dims"),
        unit_index=data.get("unit"),
        dual=data.get("dual"),
        method=data.get("method", "file"),
    )


def load_fusion(path: str | Path) -> FusionRing:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return fusion_from_json(data)


def fusion_to_csv(R: FusionRing) -> str:
    """One row per (a, b) with a nonzero product, listing c:N pairs."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "b", "product"])
    N = R.N
    for a in range(R.rank):
        for b in range(R.rank):
            cs = np.flatnonzero(N[a, b])
            if len(cs):
                w.writerow([R.labels[a], R.labels[b], " ".join(f"{R.labels[c]}:{N[a, b, c]}" for c in cs)])
    return buf.getvalue()


def chartable_to_json(T: CharTable) -> dict:
    G = T.group.parent
    data = T.to_json()
    data["class_labels"] = [G.label(c.rep) for c in T.classes]
    return data


def ring_of(D: DrinfeldDouble, T: FusionTensor) -> FusionRing:
    return FusionRing(D.rank, tuple(o.label for o in D.objects), D.unit_index,
                      D.dual_permutation.copy(), D.dims.copy(), T)
