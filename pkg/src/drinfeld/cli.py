"""Command line: ``drinfeld group|double|ring ...``.

Exit codes: 0 success, 2 an invariant or cross-check failed, 3 bad input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .cache import TableCache
from .double import InvariantError, drinfeld_double
from .fusion import METHODS, BudgetError, fusion_tensor, multiplicity_report
from .group import GroupError, parse_group_spec
from .io import dumps, fusion_to_csv, fusion_to_json, load_fusion, ring_of, smatrix_to_json
from .rings import rings_isomorphic, verify_ring_axioms, verify_type3_pattern

log = logging.getLogger("drinfeld")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 2, 3
FORMATS = ("text", "json", "csv")


@dataclass
class RunConfig:
    spec: str | None = None
    method: str = "verlinde"
    format: str = "text"
    cache_dir: str | None = None
    budget: int = 64
    verbosity: int = 1

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {', '.join(FORMATS)}")

    @property
    def cache(self) -> TableCache | None:
        return TableCache(self.cache_dir) if self.cache_dir else None


class Failure(Exception):
    """A check ran and came out negative."""


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text.rstrip("\n") + "\n")


def _double(cfg: RunConfig):
    G = parse_group_spec(cfg.spec)
    return drinfeld_double(G, cache=cfg.cache)


# -- commands ----------------------------------------------------------------------


def cmd_group_info(cfg: RunConfig) -> int:
    G = parse_group_spec(cfg.spec)
    classes = G.conjugacy_classes()
    rows = [
        {"rep": G.label(c.rep), "size": c.size, "centralizer_order": G.order // c.size}
        for c in classes
    ]
    if cfg.format == "json":
        _out(dumps({"group": G.name, "order": G.order, "exponent": G.exponent(),
                    "class_count": len(classes), "classes": rows}))
    elif cfg.format == "csv":
        _out("rep,size,centralizer_order\n" + "".join(f"{r['rep']},{r['size']},{r['centralizer_order']}\n" for r in rows))
    else:
        lines = [f"group {G.name}: order {G.order}, exponent {G.exponent()}, {len(classes)} classes"]
        lines += [f"  {r['rep']:<16} size {r['size']:<4} |C| = {r['centralizer_order']}" for r in rows]
        _out("\n".join(lines))
    return EXIT_OK


def cmd_smatrix(cfg: RunConfig) -> int:
    D = _double(cfg)
    S = D.s_matrix(check=True)  # raises InvariantError on failure
    if cfg.format == "json":
        _out(dumps(smatrix_to_json(S, D.group.name)))
    elif cfg.format == "csv":
        header = "," + ",".join(o.label for o in S.objects)
        body = [o.label + "," + ",".join(f'"{z}"' for z in row) for o, row in zip(S.objects, S.entries)]
        _out("\n".join([header] + body))
    else:
        lines = [f"S-matrix of D({D.group.name}), rank {D.rank}, entries in Q(z{S.conductor}); "
                 "symmetric, unitary, S^2 = duality: ok"]
        for o, row in zip(S.objects, S.entries):
            lines.append(f"{o.label}: " + "  ".join(str(z) for z in row))
        _out("\n".join(lines))
    return EXIT_OK


def cmd_fusion(cfg: RunConfig, crosscheck: bool) -> int:
    D = _double(cfg)
    T = fusion_tensor(D.group, cfg.method, budget=cfg.budget)
    if crosscheck:
        for m in METHODS:
            if m == cfg.method:
                continue
            other = fusion_tensor(D.group, m, budget=cfg.budget)
            diff = T.first_difference(other)
            if diff is not None:
                a, b, c = diff
                raise Failure(
                    f"methods {cfg.method} and {m} disagree at "
                    f"({D.objects[a].label}, {D.objects[b].label}, {D.objects[c].label}): "
                    f"{T.coeffs[diff]} vs {other.coeffs[diff]}")
            log.info("method %s agrees with %s", m, cfg.method)
    R = ring_of(D, T)
    rep = multiplicity_report(T, R.labels)
    if cfg.format == "json":
        data = fusion_to_json(R, D.group.name)
        data["max_multiplicity"] = rep.max_multiplicity
        data["witness"] = list(rep.witness_labels) if rep.witness_labels else None
        data["crosscheck"] = list(METHODS) if crosscheck else None
        _out(dumps(data))
    elif cfg.format == "csv":
        _out(fusion_to_csv(R))
    else:
        lines = [f"fusion rules of D({D.group.name}), rank {D.rank}, method {cfg.method}"]
        for a in range(R.rank):
            for b in range(a, R.rank):
                cs = [c for c in range(R.rank) if T.coeffs[a, b, c]]
                terms = " + ".join((f"{T.coeffs[a, b, c]} " if T.coeffs[a, b, c] > 1 else "") + R.labels[c] for c in cs)
                lines.append(f"{R.labels[a]} * {R.labels[b]} = {terms}")
        lines.append(f"max multiplicity {rep.max_multiplicity}"
                     + (f" at {rep.witness_labels}" if rep.witness_labels else " (multiplicity free)"))
        if crosscheck:
            lines.append("crosscheck: " + ", ".join(METHODS) + " agree")
        _out("\n".join(lines))
    return EXIT_OK


def cmd_ring_verify(cfg: RunConfig, path: str) -> int:
    R = load_fusion(path)
    rep = verify_ring_axioms(R)
    if cfg.format == "json":
        _out(dumps({"file": path, "rank": R.rank, "ok": rep.ok, "checks": rep.checks, "failures": rep.failures}))
    else:
        lines = [f"{path}: rank {R.rank}"]
        lines += [f"  {name:<20} {'pass' if ok else 'FAIL'}" for name, ok in rep.checks.items()]
        _out("\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_ring_compare(cfg: RunConfig, first: str, second: str) -> int:
    R1, R2 = load_fusion(first), load_fusion(second)
    phi = rings_isomorphic(R1, R2, budget=cfg.budget)
    mapping = None if phi is None else {R1.labels[a]: R2.labels[int(phi[a])] for a in range(R1.rank)}
    if cfg.format == "json":
        _out(dumps({"isomorphic": phi is not None, "bijection": mapping}))
    elif phi is None:
        _out("none")
    else:
        _out("isomorphic\n" + "\n".join(f"  {k} -> {v}" for k, v in mapping.items()))
    return EXIT_OK


def cmd_type3(cfg: RunConfig, n: int) -> int:
    rep = verify_type3_pattern(n, method=cfg.method)
    if cfg.format == "json":
        _out(dumps({"n": rep.n, "ok": rep.ok, "I": rep.I, "Z": rep.Z, "X": rep.X, "X'": rep.X_prime,
                    "Y": list(rep.Y), "failures": rep.failures}))
    else:
        lines = [f"D(D{2 * rep.n}): I = {rep.I}, Z = {rep.Z}, X = {rep.X}, X' = {rep.X_prime}, {rep.y_count} Y objects",
                 f"pattern {'holds' if rep.ok else 'FAILS'}"]
        lines += [f"  failed: {f}" for f in rep.failures]
        _out("\n".join(lines))
    return EXIT_OK if rep.ok else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=FORMATS, default=d("text"))
    p.add_argument("--cache-dir", default=d(None), help="directory for cached character tables")
    p.add_argument("--budget", type=int, default=d(64), help="largest rank to process")
    p.add_argument("--quiet", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drinfeld", description="Exact modular data of Drinfeld doubles of finite groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="area", required=True)

    grp = sub.add_parser("group").add_subparsers(dest="verb", required=True)
    info = grp.add_parser("info", help="order, classes, centralizers, exponent")
    info.add_argument("spec")
    _common(info, True)

    dbl = sub.add_parser("double").add_subparsers(dest="verb", required=True)
    sm = dbl.add_parser("smatrix", help="the normalized S-matrix")
    sm.add_argument("spec")
    _common(sm, True)
    fu = dbl.add_parser("fusion", help="fusion coefficients and maximal multiplicity")
    fu.add_argument("spec")
    fu.add_argument("--method", choices=METHODS, default="verlinde")
    fu.add_argument("--crosscheck", action="store_true", help="run every method and compare")
    _common(fu, True)

    ring = sub.add_parser("ring").add_subparsers(dest="verb", required=True)
    ver = ring.add_parser("verify", help="check fusion-ring axioms of a fusion.json file")
    ver.add_argument("file")
    _common(ver, True)
    cmp_ = ring.add_parser("compare", help="search for a based-ring isomorphism")
    cmp_.add_argument("first")
    cmp_.add_argument("second")
    _common(cmp_, True)
    t3 = ring.add_parser("type3-pattern", help="check the X-rules on D(D_2n), n odd")
    t3.add_argument("n", type=int)
    t3.add_argument("--method", choices=METHODS, default="verlinde")
    _common(t3, True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = RunConfig(spec=getattr(args, "spec", None), method=getattr(args, "method", "verlinde"),
                        format=args.format, cache_dir=args.cache_dir, budget=args.budget,
                        verbosity=0 if args.quiet else 1)
        key = (args.area, args.verb)
        if key == ("group", "info"):
            return cmd_group_info(cfg)
        if key == ("double", "smatrix"):
            return cmd_smatrix(cfg)
        if key == ("double", "fusion"):
            return cmd_fusion(cfg, args.crosscheck)
        if key == ("ring", "verify"):
            return cmd_ring_verify(cfg, args.file)
        if key == ("ring", "compare"):
            return cmd_ring_compare(cfg, args.first, args.second)
        if key == ("ring", "type3-pattern"):
            return cmd_type3(cfg, args.n)
    except (InvariantError, Failure, AssertionError) as exc:
        _err(f"check failed: {exc}")
        return EXIT_FAIL
    except (GroupError, BudgetError, ValueError, OSError, KeyError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    parser.error("unknown command")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
