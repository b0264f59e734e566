"""Command-line interface.

Subcommands: norm, reduce, thresholds, verify, transform.  All
floating-point output is printed with 12 significant digits; `verify`
exits 0 iff every pass criterion holds.  The config JSON schemas are
documented in the README.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .dyadic import CubeId, Truncation, enumerate_cubes
from .growth import make_growth
from .weights import (
    MatrixWeight,
    QuadratureSpec,
    constant_weight,
    diag_power_weight,
    identity_weight,
    op_norm,
    power_weight,
)
from .reducing import build_family
from .seqspace import CoeffSeq, SpaceParams, seq_norm
from .adops import ad_thresholds, molecule_thresholds
from .transforms import GridFunction, build_lp_window, dwt_analyze, phi_analyze
from .harness import EXPERIMENTS, emit_report, run_all, run_experiment


def _fmt(x):
    return f"{float(x):.12g}"


def _load_json(arg):
    """Accept inline JSON or a path to a JSON file."""
    s = arg.strip()
    if s.startswith("{") or s.startswith("["):
        return json.loads(s)
    with open(arg) as fh:
        return json.load(fh)


def _parse_weight(spec):
    """Weight presets: 'identity[:m]', 'power:alpha', 'diag_power:a:b',
    'constant:d1,d2,...' or the equivalent JSON object."""
    if isinstance(spec, dict):
        kind = spec["preset"]
        if kind == "identity":
            return identity_weight(int(spec.get("m", 1)))
        if kind == "power":
            return power_weight(float(spec["alpha"]), int(spec.get("n", 1)))
        if kind == "diag_power":
            return diag_power_weight(float(spec["alpha"]), float(spec["beta"]),
                                     int(spec.get("n", 1)))
        if kind == "constant":
            return constant_weight(np.diag([float(d) for d in spec["diag"]]))
        raise SystemExit(f"unknown weight preset: {kind}")
    parts = str(spec).split(":")
    kind = parts[0]
    if kind == "identity":
        return identity_weight(int(parts[1]) if len(parts) > 1 else 1)
    if kind == "power":
        return power_weight(float(parts[1]))
    if kind == "diag_power":
        return diag_power_weight(float(parts[1]), float(parts[2]))
    if kind == "constant":
        return constant_weight(np.diag([float(d) for d in parts[1].split(",")]))
    raise SystemExit(f"unknown weight preset: {spec}")


def _parse_window(doc):
    return Truncation(
        int(doc.get("n", 1)),
        int(doc["j_min"]),
        int(doc["j_max"]),
        int(doc.get("root_extent", 1)),
    )


def _parse_growth(doc):
    doc = dict(doc or {"kind": "power", "tau": 0.0})
    kind = doc.pop("kind")
    return make_growth(kind, **doc)


def _parse_q(val):
    if val in ("inf", "infinity", None):
        return np.inf
    return float(val)


def _parse_space(doc, t=None):
    mode = doc.get("mode", "unweighted")
    weight = _parse_weight(doc["weight"]) if "weight" in doc else None
    quad = QuadratureSpec(int(doc.get("nodes_per_cell", 3)))
    reducing = None
    if mode == "averaging":
        if weight is None or t is None:
            raise SystemExit("averaging mode needs a weight and a window")
        reducing = build_family(weight, float(doc["p"]), t, quad)
    return SpaceParams(
        doc["family"],
        float(doc.get("s", 0.0)),
        _parse_q(doc["p"]),
        _parse_q(doc["q"]),
        _parse_growth(doc.get("growth")),
        mode=mode,
        reducing=reducing,
        weight=weight if mode == "matrix" else None,
        quad=quad,
    )


def _parse_sequence(doc):
    tv = CoeffSeq(int(doc.get("m", 1)))
    for ent in doc["entries"]:
        z = np.array([complex(c[0], c[1]) if isinstance(c, list) else complex(c)
                      for c in ent["value"]])
        tv[CubeId(int(ent["j"]), tuple(int(k) for k in ent["k"]))] = z
    return tv


def _r12(x):
    return float(f"{float(x):.12g}")


def _pair(v):
    return [_r12(np.real(v)), _r12(np.imag(v))]


def _matrix_doc(M):
    return [[_pair(v) for v in row] for row in np.asarray(M, dtype=complex)]


def cmd_norm(args):
    doc = _load_json(args.config)
    t = _parse_window(doc["window"])
    params = _parse_space(doc["space"], t)
    tv = _parse_sequence(doc["sequence"])
    print(_fmt(seq_norm(tv, params, t)))
    return 0


def cmd_reduce(args):
    W = _parse_weight(args.weight)
    t = Truncation(1, args.j_min, args.j_max, args.root_extent)
    backend = {"exact2": "exact_p2"}.get(args.backend, args.backend)
    fam = build_family(W, args.p, t, backend=backend)
    out = {
        "weight": W.label,
        "p": args.p,
        "backend": backend,
        "equivalence_bounds": [_fmt(b) for b in fam.equivalence_bounds],
        "operators": [
            {"j": Q.j, "k": list(Q.k), "matrix": _matrix_doc(fam[Q])}
            for Q in enumerate_cubes(t)
        ],
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_thresholds(args):
    doc = _load_json(args.space)
    th = ad_thresholds(
        float(doc.get("s", 0.0)),
        _parse_q(doc["p"]),
        _parse_q(doc["q"]),
        doc["family"],
        float(doc.get("delta1", 0.0)),
        float(doc.get("delta2", 0.0)),
        float(doc.get("omega", 0.0)),
        n=int(doc.get("n", 1)),
        weighted=tuple(doc["weighted"]) if "weighted" in doc else None,
    )
    mol = molecule_thresholds(th, n=int(doc.get("n", 1)))
    print(f"regime   {th.regime}" + ("  (weighted)" if th.weighted else ""))
    for label, val in (("J", th.J), ("D_min", th.D_min),
                       ("E_min", th.E_min), ("F_min", th.F_min)):
        print(f"{label:<8} {_fmt(val)}")
    print("analysis molecule (K, L, M, N) > "
          + ", ".join(_fmt(v) for v in mol.analysis))
    print("synthesis molecule (K, L, M, N) > "
          + ", ".join(_fmt(v) for v in mol.synthesis))
    print(f"wavelet smoothness k_min = {mol.k_min}")
    return 0


def cmd_verify(args):
    seed = int(args.seed, 0) if isinstance(args.seed, str) else args.seed
    if args.experiment.lower() == "all":
        reports = run_all(seed=seed)
    else:
        reports = [run_experiment(args.experiment, seed=seed)]
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.criterion}  [{r.wall_time:.1f}s]")
    if args.out:
        emit_report(reports, fmt=args.format, path=args.out, seed=seed)
        print(f"report written to {args.out}")
    ok = all(r.passed for r in reports)
    print("all criteria hold" if ok else "some criteria FAILED")
    return 0 if ok else 1


def cmd_transform(args):
    doc = _load_json(args.infile)
    vals = np.array([complex(c[0], c[1]) if isinstance(c, list) else complex(c)
                     for c in doc["values"]])
    f = GridFunction(int(doc.get("n", 1)), int(doc["N"]), vals)
    if args.kind == "dwt":
        c = dwt_analyze(f, k=args.filter_k, levels=args.levels)
        out = {
            "kind": "dwt",
            "filter_k": c.filter_k,
            "approx": [_pair(v) for v in c.approx],
            "details": {str(j): [_pair(v) for v in d]
                        for j, d in c.details.items()},
        }
    else:
        w = build_lp_window(f.N, args.levels)
        tv = phi_analyze(f, w)
        out = {
            "kind": "phi",
            "entries": [
                {"j": Q.j, "k": list(Q.k), "value": [_pair(v) for v in z]}
                for Q, z in sorted(tv.entries.items(),
                                   key=lambda it: (it[0].j, it[0].k))
            ],
        }
    print(json.dumps(out, indent=2))
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="dwlab",
        description="dyadic sequence-space norms, reducing operators, "
                    "almost-diagonal thresholds, and verification experiments",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="compute one sequence norm from a config")
    p.add_argument("--config", required=True,
                   help="JSON config (inline or path)")
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("reduce", help="dump a reducing-operator family")
    p.add_argument("--weight", required=True,
                   help="preset, e.g. power:-0.5 or diag_power:-0.5:-0.25")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--backend", default="exact2",
                   choices=["exact2", "exact_p2", "mvee"])
    p.add_argument("--j-min", type=int, default=0)
    p.add_argument("--j-max", type=int, default=3)
    p.add_argument("--root-extent", type=int, default=1)
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("thresholds",
                       help="print the admissibility threshold table")
    p.add_argument("--space", required=True,
                   help="JSON space description (inline or path)")
    p.set_defaults(fn=cmd_thresholds)

    p = sub.add_parser("verify", help="run verification experiments")
    p.add_argument("experiment",
                   help="experiment name or 'all'; one of "
                        + ", ".join(sorted(EXPERIMENTS)))
    p.add_argument("--seed", default="0xDAD1C")
    p.add_argument("--out", default=None, help="write a report file")
    p.add_argument("--format", default="json", choices=["json", "csv"])
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("transform", help="analyze a grid function")
    p.add_argument("kind", choices=["dwt", "phi"])
    p.add_argument("--in", dest="infile", required=True,
                   help="JSON grid function (inline or path)")
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--filter-k", type=int, default=4,
                   choices=[2, 3, 4, 6, 8])
    p.set_defaults(fn=cmd_transform)

    args = ap.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
