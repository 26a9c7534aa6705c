"""Command-line front end.

Every command is a pure function of its inputs and flags: outputs are
byte-identical across re-runs with the same seed. Exit codes: 0 success,
1 failed diagnose/axioms verdict, 2 I/O-level failure (missing or empty
inputs, parse errors).
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as aio
from .analysis import (axiom_suite, compare_models, default_theta, sample_report,
                       sparsity_diagnostics)
from .extraction import (DEFAULT_SALIENCE_FRACTION, DEFAULT_ZETA_FRACTION,
                         SparsifyConfig, all_and_decomposition,
                         even_split_decomposition, extract, filter_salient,
                         salience_threshold, sparsify)
from .metrics import is_undefined, order_profile, per_order_jaccard
from .models import (GroundTruthGame, inject_overfit, interaction_function_table,
                     realize_table, sample_sparse_game)
from .oracle import brute_and, brute_or, verify_matching

IO_ERROR = 2


class CliError(Exception):
    """I/O-level failure; maps to exit code 2."""


def _load_dir(path, reader, suffix=".json"):
    d = Path(path)
    if not d.is_dir():
        raise CliError(f"not a directory: {d}")
    reserved = {"ground_truth.json", "batch.json"}
    files = sorted(f for f in d.glob(f"*{suffix}") if f.name not in reserved)
    if not files:
        raise CliError(f"no {suffix} files in {d}")
    out = []
    for f in files:
        try:
            out.append(reader(f))
        except (json.JSONDecodeError, KeyError, ValueError) as e:
            raise CliError(f"cannot parse {f}: {e}") from e
    return out


def _parse_orders(text: str) -> dict[int, float]:
    out = {}
    for part in text.split(","):
        k, w = part.split(":")
        out[int(k)] = float(w)
    return out


def cmd_synth(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.interaction:
        v = interaction_function_table(args.mask, args.c, args.interaction, args.n,
                                       label="interaction_0000")
        aio.write_table(v, out / "table_0000.json")
        return 0

    orders = _parse_orders(args.orders)
    rng = np.random.default_rng(args.seed)
    n_inject = round(args.overfit_fraction * args.samples)
    injected = set(rng.choice(args.samples, size=n_inject, replace=False).tolist())
    sidecar = {"n": args.n, "seed": args.seed, "samples": []}
    for i in range(args.samples):
        label = f"sample_{i:04d}"
        game = sample_sparse_game(
            args.n, args.m, orders, effect_range=args.effect_range,
            rng_seed=args.seed * 100003 + i, magnitude_floor=args.magnitude_floor,
            kinds=tuple(args.kinds.split(",")), antichain=args.antichain)
        if i in injected:
            game = inject_overfit(game, high_order_min=args.overfit_min_order,
                                  pair_count=args.overfit_pairs,
                                  magnitude=args.overfit_magnitude,
                                  rng_seed=args.seed * 100003 + i + 1)
        aio.write_table(realize_table(game, label=label), out / f"table_{i:04d}.json")
        sidecar["samples"].append({
            "label": label,
            "injected": i in injected,
            "and": [{"mask": m, "value": c} for m, c in sorted(game.and_effects.items())],
            "or": [{"mask": m, "value": c} for m, c in sorted(game.or_effects.items())],
        })
    (out / "ground_truth.json").write_text(
        json.dumps(sidecar, sort_keys=True, indent=1) + "\n")
    return 0


def _batch_tau(tables, args) -> float:
    if args.tau_absolute is not None:
        return args.tau_absolute
    return salience_threshold(tables, args.tau_fraction)


def cmd_extract(args) -> int:
    tables = _load_dir(args.input, aio.read_table)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tau = _batch_tau(tables, args)

    histories = {}
    for v in tables:
        if args.mode == "all-and":
            d = all_and_decomposition(v)
            iset, hist = extract(v, d), []
        elif args.mode == "even-split":
            d = even_split_decomposition(v)
            iset, hist = extract(v, d), []
        else:
            cfg = SparsifyConfig(max_iters=args.max_iters,
                                 zeta_fraction=args.zeta_fraction,
                                 denoise=not args.no_denoise,
                                 method=args.method)
            _, iset, hist = sparsify(v, cfg)
        if args.salient_only:
            iset = filter_salient(iset, tau)
        aio.write_interactions(iset, out / f"{v.label or 'table'}.json")
        histories[v.label] = hist
    (out / "batch.json").write_text(json.dumps(
        {"tau": tau, "mode": args.mode, "n": tables[0].n,
         "loss_history": histories}, sort_keys=True, indent=1) + "\n")
    return 0


def cmd_profile(args) -> int:
    sets = _load_dir(args.input, aio.read_interactions)
    rows = [(s.label, order_profile(s, args.tau_absolute)) for s in sets]
    aio.write_profiles(rows, args.out)
    return 0


def cmd_similarity(args) -> int:
    train = _load_dir(args.train, aio.read_interactions)
    test = _load_dir(args.test, aio.read_interactions)
    report = per_order_jaccard(train, test, tau=args.tau_absolute)
    aio.write_similarity(report, args.out)
    return 0


def _reports(sets, tau, theta):
    n = sets[0].n
    th = theta if theta is not None else default_theta(n)
    t = tau if tau is not None else 0.0
    return [sample_report(s, t, th) for s in sets]


def cmd_compare(args) -> int:
    sets_a = _load_dir(args.a, aio.read_interactions)
    sets_b = _load_dir(args.b, aio.read_interactions)
    cmp = compare_models(_reports(sets_a, args.tau_absolute, args.theta),
                         _reports(sets_b, args.tau_absolute, args.theta))
    aio.write_comparison(cmp, args.out)
    return 0


def cmd_diagnose(args) -> int:
    try:
        v = aio.read_table(args.table)
        iset = aio.read_interactions(args.interactions)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as e:
        raise CliError(str(e)) from e
    tau = args.tau_absolute if args.tau_absolute is not None else \
        args.tau_fraction * v.gap()
    diag = sparsity_diagnostics(v, iset, tau, args.max_order)
    lines = [
        f"condition1_max_order_ok: {diag.condition1_ok} "
        f"(max salient order {diag.max_salient_order}, bound {args.max_order})",
        f"condition2_monotone_ok: {diag.condition2_ok}"
        + ("" if diag.condition2_violation is None
           else f" (violated at k={diag.condition2_violation})"),
        f"condition3_min_p: "
        + ("infeasible" if diag.condition3_min_p == float("inf")
           else repr(diag.condition3_min_p)),
        f"salient_count: {diag.salient_count}",
        f"kappa_fit: "
        + ("undefined" if is_undefined(diag.kappa_fit) else repr(diag.kappa_fit)),
    ]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    ok = diag.condition1_ok and diag.condition2_ok \
        and diag.condition3_min_p != float("inf")
    return 0 if ok else 1


def cmd_axioms(args) -> int:
    results = axiom_suite(args.n, args.trials, args.seed)
    lines = [f"{r.name}: {'pass' if r.passed else 'FAIL'} "
             f"(trials {r.trials}, max error {r.max_error:.3e})" for r in results]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def cmd_oracle(args) -> int:
    if args.action == "verify":
        v = aio.read_table(args.table)
        iset = aio.read_interactions(args.interactions)
        # delta = 0: callers verify un-denoised extractions against the raw table
        d = even_split_decomposition(v)
        err = verify_matching(v, d, iset)
        scale = max(1.0, float(np.max(np.abs(v.values))))
        sys.stdout.write(f"max_abs_error: {err!r}\n")
        return 0 if err <= 1e-8 * scale else 1
    v = aio.read_table(args.table)
    out = brute_and(v.values) if args.action == "and" else brute_or(v.values)
    sys.stdout.write(json.dumps([float(x) for x in out]) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="andor",
        description="Sparse AND-OR interaction extraction over masked value tables")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate synthetic value tables")
    sp.add_argument("--out", required=True)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("--samples", type=int, default=1)
    sp.add_argument("--m", type=int, default=15)
    sp.add_argument("--orders", default="2:0.5,3:0.5",
                    help="order:weight list, e.g. 3:1.0")
    sp.add_argument("--effect-range", type=float, default=4.0)
    sp.add_argument("--magnitude-floor", type=float, default=None)
    sp.add_argument("--kinds", default="and,or")
    sp.add_argument("--antichain", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--overfit-fraction", type=float, default=0.0)
    sp.add_argument("--overfit-min-order", type=int, default=7)
    sp.add_argument("--overfit-pairs", type=int, default=10)
    sp.add_argument("--overfit-magnitude", type=float, default=5.0)
    sp.add_argument("--interaction", choices=["and", "or"],
                    help="emit a single pure-interaction table instead")
    sp.add_argument("--mask", type=lambda s: int(s, 0), default=0b11)
    sp.add_argument("--c", type=float, default=1.0)
    sp.set_defaults(func=cmd_synth)

    ep = sub.add_parser("extract", help="extract interactions from tables")
    ep.add_argument("--in", dest="input", required=True)
    ep.add_argument("--out", required=True)
    ep.add_argument("--mode", choices=["sparsify", "all-and", "even-split"],
                    default="sparsify")
    ep.add_argument("--method", choices=["smoothed", "subgradient"],
                    default="smoothed")
    ep.add_argument("--max-iters", type=int, default=2000)
    ep.add_argument("--no-denoise", action="store_true")
    ep.add_argument("--zeta-fraction", type=float, default=DEFAULT_ZETA_FRACTION)
    ep.add_argument("--tau-fraction", type=float, default=DEFAULT_SALIENCE_FRACTION)
    ep.add_argument("--tau-absolute", type=float, default=None)
    ep.add_argument("--salient-only", action="store_true",
                    help="zero out non-salient effects before writing")
    ep.set_defaults(func=cmd_extract)

    pp = sub.add_parser("profile", help="order profiles of interaction files")
    pp.add_argument("--in", dest="input", required=True)
    pp.add_argument("--out", required=True)
    pp.add_argument("--tau-absolute", type=float, default=None)
    pp.set_defaults(func=cmd_profile)

    yp = sub.add_parser("similarity", help="per-order Jaccard between two sets")
    yp.add_argument("--train", required=True)
    yp.add_argument("--test", required=True)
    yp.add_argument("--out", required=True)
    yp.add_argument("--tau-absolute", type=float, default=None)
    yp.set_defaults(func=cmd_similarity)

    cp = sub.add_parser("compare", help="compare two models' sample complexities")
    cp.add_argument("--a", required=True)
    cp.add_argument("--b", required=True)
    cp.add_argument("--out", required=True)
    cp.add_argument("--tau-absolute", type=float, default=None)
    cp.add_argument("--theta", type=float, default=None)
    cp.set_defaults(func=cmd_compare)

    dp = sub.add_parser("diagnose", help="sparsity diagnostics of one table")
    dp.add_argument("--table", required=True)
    dp.add_argument("--interactions", required=True)
    dp.add_argument("--tau-absolute", type=float, default=None)
    dp.add_argument("--tau-fraction", type=float, default=DEFAULT_SALIENCE_FRACTION)
    dp.add_argument("--max-order", type=int, default=3)
    dp.add_argument("--out", default=None)
    dp.set_defaults(func=cmd_diagnose)

    ap = sub.add_parser("axioms", help="randomized axiom verification")
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None)
    ap.set_defaults(func=cmd_axioms)

    op = sub.add_parser("oracle", help="brute-force reference computations")
    op.add_argument("action", choices=["verify", "and", "or"])
    op.add_argument("--table", required=True)
    op.add_argument("--interactions")
    op.set_defaults(func=cmd_oracle)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        sys.stderr.write(f"error: {e}\n")
        return IO_ERROR


if __name__ == "__main__":
    sys.exit(main())
