"""Command line front end: ``charbound alpha|constants|table|verify``.

Output is JSON on stdout (``--pretty`` prints an indented human view).
Exit status: 0 when every check passes, 1 when a check fails, 2 on usage
or input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time

from . import bounds, chartab, coset, gl2, perm, roots


class UsageError(ValueError):
    pass


def parse_levi(spec: str | None, R: roots.RootSystem) -> tuple[int, ...] | None:
    """``torus``, ``full``, ``GL2xGL2`` (type A) or 1-based simple roots like ``1,3``."""
    if spec is None:
        return None
    s = spec.strip().replace(" ", "")
    if s.lower() in ("torus", "t", "{}", ""):
        return ()
    if s.lower() == "full":
        return tuple(range(R.rank))
    if s.upper().startswith("GL"):
        (t, n), = R.type_label
        if t != "A":
            raise UsageError("GL block notation is only for type A ambients")
        blocks = [int(b) for b in re.findall(r"GL(\d+)", s.upper())]
        if "x".join(f"GL{b}" for b in blocks) != s.upper().replace("X", "x").replace("×", "x"):
            raise UsageError(f"cannot parse Levi {spec!r}")
        if sum(blocks) < n + 1:
            blocks += [1] * (n + 1 - sum(blocks))
        return roots.gl_blocks_subset(n + 1, blocks)
    try:
        idx = [int(x) - 1 for x in s.strip("{}").split(",") if x]
    except ValueError:
        raise UsageError(f"cannot parse Levi {spec!r}") from None
    if any(not 0 <= i < R.rank for i in idx):
        raise UsageError(f"simple root index out of range in {spec!r}")
    return tuple(sorted(set(idx)))


def _ambient(args) -> roots.RootSystem:
    label = f"{args.type}{args.rank}"
    twist = None
    if args.twist:
        if re.fullmatch(r"\d", args.twist):
            order = int(args.twist)
            twist = None if order == 1 else roots.standard_twist(label, order)
        else:
            twist = tuple(int(x) - 1 for x in args.twist.split(","))
    return roots.build_root_system(label, twist)


def cmd_alpha(args) -> tuple[object, int]:
    R = _ambient(args)
    J = parse_levi(args.levi, R)
    if J is not None:
        return bounds.alpha_report(R.name, J, R.twist), 0
    out = []
    for L in roots.levi_classes(R):
        if not L.twist_stable:
            continue
        try:
            out.append(bounds.alpha(R, L.simple_subset).to_json())
        except roots.RootSystemError as exc:
            out.append({"levi": f"{L.conjugacy_id}:{L.levi_type}", "error": str(exc)})
    return {"type": R.name, "twist": list(R.twist), "levis": out}, 0


def cmd_constants(args) -> tuple[object, int]:
    rc = bounds.rank_constants(args.rank)
    fr = bounds.f_of_rank(args.rank)
    ledger = bounds.f_of_group(fr.witness_type).to_json()
    ledger.update({"D_witness": rc.D_witness, "B_witness": rc.B_witness})
    ledger["f_of_rank"] = {"value": str(fr.value), "ceil": fr.ceil, "witness_type": fr.witness_type}
    return ledger, 0


def cmd_table(args) -> tuple[object, int]:
    G = perm.group_from_spec(args.group)
    t = chartab.character_table(G)
    out = t.to_json()
    out["group"] = G.name or args.group
    out["class_representatives"] = [perm.fmt_perm(r) for r in G.classes.representatives]
    out["degrees"] = t.degrees
    return out, 0


def cmd_verify(args) -> tuple[object, int]:
    start = time.perf_counter()
    if args.suite == "gl2":
        if args.q is None:
            raise UsageError("--suite gl2 needs --q")
        reports = gl2.run_gl2_suite(args.q)
        failures = sum(r.failures for r in reports)
        out = {
            "suite": "gl2",
            "q": args.q,
            "reports": [r.to_json() for r in reports],
            "failures": failures,
        }
    else:
        res = coset.run_coset_suite()
        bad = [r for r in res["reports"] if not r.holds]
        failures = res["lemma_failures"] + res["norm_failures"] + res["equality_failures"]
        out = {
            "suite": "coset",
            "lemma_instances": res["lemma_instances"],
            "lemma_failures": res["lemma_failures"],
            "equality_failures": res["equality_failures"],
            "norm_instances": res["norm_instances"],
            "norm_failures": res["norm_failures"],
            "worst_norm_ratio": res["worst_norm_ratio"],
            "failed_reports": [json.loads(r.to_json()) for r in bad],
            "failures": failures,
        }
    out["seconds"] = round(time.perf_counter() - start, 3)
    return out, 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="charbound", description="Character bound constants and checks.")
    p.add_argument("--pretty", action="store_true", help="indented human-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("alpha", help="alpha exponent of a Levi subsystem")
    a.add_argument("--type", required=True, choices=list("ABCDEFG"))
    a.add_argument("--rank", required=True, type=int)
    a.add_argument("--twist", help="order of a diagram automorphism, or 1-based images like 3,2,1")
    a.add_argument("--levi", help="torus, full, GL2xGL2 (type A) or simple roots like 1,3")
    a.set_defaults(func=cmd_alpha)

    c = sub.add_parser("constants", help="the f constant ledger for a rank")
    c.add_argument("--rank", required=True, type=int)
    c.set_defaults(func=cmd_constants)

    t = sub.add_parser("table", help="character table of a permutation group")
    t.add_argument("--group", required=True, help="S4, D8, ... or 'degree:(1 2);(1 2 3)'")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=["gl2", "coset"])
    v.add_argument("--q", type=int, choices=list(gl2.SUPPORTED_Q))
    v.set_defaults(func=cmd_verify)
    return p


def _pretty(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _pretty(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in obj
        )
    return f"{pad}{obj}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        out, code = args.func(args)
    except (UsageError, roots.RootSystemError, perm.GroupError, ValueError) as exc:
        print(f"charbound: error: {exc}", file=sys.stderr)
        return 2
    if args.pretty:
        print(_pretty(out))
    else:
        print(json.dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
