"""Batch command-line front end.

Subcommands: walk {exact,mc,llt,compare}, trace, walks, reps, spectrum.
Exit codes: 0 success, 1 tolerance violation, 2 usage or parse error.
All outputs are deterministic given the flags (including --seed); floats are
printed with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--q", default="2", help="thickness, integer or p/r")
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--grid", type=int, default=256, help="quadrature nodes per circle")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="chamberwalks", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    walk = sub.add_parser("walk", help="n-step walk distributions")
    wsub = walk.add_subparsers(dest="walk_command", required=True)
    for name in ("exact", "mc", "llt", "compare"):
        p = wsub.add_parser(name)
        _common_flags(p)
        if name == "llt":
            p.add_argument("--n", required=True, help="comma-separated step counts")
        else:
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--word", default="", help="relative position, e.g. '0,1'")
        if name in ("mc", "compare"):
            p.add_argument("--trials", type=int, default=100000)

    p = sub.add_parser("trace", help="canonical trace by several routes")
    _common_flags(p)
    p.add_argument("--method", choices=("exact", "plancherel", "series", "all"),
                   default="all")
    p.add_argument("--element", required=True, help="path to element JSON")
    p.add_argument("--depth", type=int, default=24)

    p = sub.add_parser("walks", help="enumerate positively folded galleries")
    _common_flags(p)
    p.add_argument("--type", required=True, dest="type_word")
    p.add_argument("--start", default="", help="start alcove as word over 0,1,2")

    p = sub.add_parser("reps", help="module checks")
    rsub = p.add_subparsers(dest="reps_command", required=True)
    pc = rsub.add_parser("check")
    _common_flags(pc)
    pc.add_argument("--t", required=True, help="re,im,re,im of (t1,t2)")
    pc.add_argument("--u", default=None, help="re,im parameter of the 3-dim module")

    p = sub.add_parser("spectrum", help="closed-form spectral data")
    _common_flags(p)
    p.add_argument("--json", action="store_true", dest="as_json")
    return top


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_q(s: str) -> Fraction:
    q = Fraction(s)
    if q <= 1:
        raise ValueError("--q must exceed 1")
    return q


def _dist_rows(dist, q: float):
    from . import serialize, weyl

    rows = []
    for w, mass in sorted(dist.items(), key=lambda kv: (
        int(dist.space.lengths[dist.space.index[kv[0]]]), kv[0].mu, kv[0].u
    )):
        word = serialize.word_to_str(weyl.reduced_word(w))
        rows.append((
            word,
            w.mu[0], w.mu[1],
            serialize.word_to_str(weyl.W0_WORDS[w.u]),
            float(mass),
            float(mass) / q ** weyl.length(w),
        ))
    return rows


def cmd_walk(args) -> int:
    from . import limit, serialize, weyl

    q = _parse_q(args.q)
    spec = limit.simple_walk_spec()
    header = ["word", "mu_m", "mu_n", "theta", "mass", "p_n"]

    if args.walk_command == "exact":
        dist = limit.exact_distribution(spec, args.n, q)
        _emit(args, serialize.write_csv(None, header, _dist_rows(dist, float(q))))
        return EXIT_OK

    if args.walk_command == "mc":
        dist = limit.mc_simulate(args.n, args.trials, args.seed, q)
        _emit(args, serialize.write_csv(None, header, _dist_rows(dist, float(q))))
        return EXIT_OK

    word = serialize.parse_word(args.word)
    target = weyl.from_word(word)

    if args.walk_command == "llt":
        ns = [int(s) for s in str(args.n).split(",") if s]
        snaps = limit.exact_distribution(spec, max(ns), q, snapshots=ns)
        rows = []
        for n in ns:
            p = snaps[n].p_value(target, float(q))
            est = limit.llt_estimate(target, n, q)
            rows.append((n, p, est, p / est if est else float("nan")))
        _emit(args, serialize.write_csv(None, ["n", "p_n", "estimate", "ratio"], rows))
        return EXIT_OK

    # compare: exact vs Monte Carlo vs asymptotic estimate
    dist = limit.exact_distribution(spec, args.n, q)
    emp = limit.mc_simulate(args.n, args.trials, args.seed, q)
    exact_mass = dist.mass(target)
    emp_mass = emp.mass(target)
    sigma = (max(exact_mass * (1 - exact_mass), 1e-300) / args.trials) ** 0.5
    dev = abs(emp_mass - exact_mass) / sigma if sigma else float("inf")
    est = limit.llt_estimate(target, args.n, q) if args.n >= 1 else float("nan")
    p_exact = dist.p_value(target, float(q))
    rows = [(
        serialize.word_to_str(word), args.n, exact_mass, emp_mass,
        dev, p_exact, est, p_exact / est if est else float("nan"),
    )]
    _emit(args, serialize.write_csv(
        None,
        ["word", "n", "exact_mass", "mc_mass", "mc_sigmas", "p_n", "llt", "ratio"],
        rows,
    ))
    return EXIT_OK if dev <= 4.0 else EXIT_TOLERANCE


def _load_element(args):
    from . import serialize

    with open(args.element) as fh:
        return serialize.hecke_from_json(fh.read(), mode=args.mode)


def cmd_trace(args) -> int:
    from . import hecke, plancherel, serialize

    h = _load_element(args)
    if h.basis == "X":
        h = hecke.x_to_t(h)
    results = {}
    if args.method in ("exact", "all"):
        tr = hecke.trace(h)
        results["exact"] = {
            "value": float(complex(tr).real) if h.field.exact else complex(tr).real,
            "abs_err_estimate": 0.0,
            "N": None,
        }
    if args.method in ("plancherel", "all"):
        v_full = plancherel.plancherel_trace(h, args.grid)
        v_half = plancherel.plancherel_trace(h, max(16, args.grid // 2))
        results["plancherel"] = {
            "value": v_full.real,
            "abs_err_estimate": abs(v_full - v_half),
            "N": args.grid,
        }
    if args.method in ("series", "all"):
        value, err = _series_trace(h, args.depth)
        results["series"] = {
            "value": value.real,
            "abs_err_estimate": err,
            "N": args.depth,
        }
    if args.method != "all":
        _emit(args, json.dumps(results[args.method], default=float))
        return EXIT_OK
    vals = [r["value"] for r in results.values()]
    spread = max(vals) - min(vals)
    results["max_discrepancy"] = spread
    _emit(args, json.dumps(results, default=float))
    return EXIT_OK


def _series_trace(h, depth: int, radius: float = 0.05, nodes: int = 8):
    """Trace through the generating series: average F_t(h) over a small
    torus; aliasing picks out the constant coefficient Tr(h)."""
    import numpy as np

    from . import plancherel

    total = 0j
    tails = 0.0
    for j in range(nodes):
        for k in range(nodes):
            t = (
                radius * np.exp(2j * np.pi * (j + 0.5) / nodes),
                radius * np.exp(2j * np.pi * (k + 0.5) / nodes),
            )
            v, tail = plancherel.f_series(h, t, depth)
            total += v
            tails = max(tails, tail if tail == tail else 0.0)
    value = total / nodes ** 2
    q = float(h.field.q)
    alias = (radius * q) ** nodes / max(1 - radius * q, 1e-9)
    err = alias + (tails if tails != float("inf") else alias)
    return value, err


def cmd_walks(args) -> int:
    from . import hecke, serialize, walks, weyl

    q = _parse_q(args.q)
    field = hecke.ScalarField(q)
    try:
        word = serialize.parse_word(args.type_word)
        start = weyl.from_word(serialize.parse_word(args.start))
        gallery = walks.enumerate_walks(word, start=start)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    lines = []
    for p in gallery:
        lines.append(" | ".join([
            serialize.word_to_str(p.type_word),
            " ".join(p.tags) or "-",
            serialize.element_to_json(p.end),
            f"wt=({p.weight[0]},{p.weight[1]})",
            "theta=" + (serialize.word_to_str(weyl.W0_WORDS[p.direction]) or '""'),
            f"folds={p.fold_count}",
        ]))
    _emit(args, "\n".join(lines) if lines else "")
    return EXIT_OK


def cmd_reps(args) -> int:
    from . import reps

    q = _parse_q(args.q)
    try:
        parts = [float(x) for x in args.t.split(",")]
        t = (complex(parts[0], parts[1]), complex(parts[2], parts[3]))
    except (ValueError, IndexError):
        print("error: --t expects re,im,re,im", file=sys.stderr)
        return EXIT_USAGE
    rep = reps.principal_series(q, t)
    out = {
        "q": str(q),
        "t": [[t[0].real, t[0].imag], [t[1].real, t[1].imag]],
        "max_relation_residual": reps.max_relation_residual(rep),
        "irreducible": reps.is_principal_irreducible(q, t),
    }
    if args.u is not None:
        ur, ui = (float(x) for x in args.u.split(","))
        rep3 = reps.induced_three_dim(q, complex(ur, ui))
        out["induced_max_relation_residual"] = reps.max_relation_residual(rep3)
    _emit(args, json.dumps(out, default=float))
    bad = out["max_relation_residual"] > 1e-12 or (
        out.get("induced_max_relation_residual", 0.0) > 1e-12
    )
    return EXIT_TOLERANCE if bad else EXIT_OK


def cmd_spectrum(args) -> int:
    import numpy as np

    from . import limit

    q = _parse_q(args.q)
    sd = limit.spectral_data(q)
    numeric = limit.eigen_surface((0.0, 0.0), q)
    dev = float(np.abs(np.array(sd.eigenvalues) - numeric).max())
    out = {
        "q": str(q),
        "eigenvalues": list(sd.eigenvalues),
        "induced_eigenvalues": [
            sd.induced_eigenvalues[0], sd.induced_eigenvalues[0],
            sd.induced_eigenvalues[1],
        ],
        "spectral_radius": sd.spectral_radius,
        "beta": sd.beta,
        "top_vector_entry": sd.top_vector_entry,
        "bottom_vector_entry": sd.bottom_vector_entry,
        "max_closed_form_deviation": dev,
    }
    _emit(args, json.dumps(out, default=float))
    return EXIT_OK if dev < 1e-12 else EXIT_TOLERANCE


def main(argv=None) -> int:
    threads = os.environ.get("CW_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "walk":
            return cmd_walk(args)
        if args.command == "trace":
            return cmd_trace(args)
        if args.command == "walks":
            return cmd_walks(args)
        if args.command == "reps":
            return cmd_reps(args)
        if args.command == "spectrum":
            return cmd_spectrum(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
