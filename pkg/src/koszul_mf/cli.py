"""Command line front end: ``koszul-mf <command> ...``.

Exit status: 0 success, 1 mathematical failure (invalid object, failed
verification), 2 I/O or parse failure, and for engine exceptions the
``exit_code`` carried by the exception class (3 and up).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import dg, koszul, mf, serialize, sing
from .errors import EngineError
from .ring import FieldSpec
from .serialize import ParseError


class _Fail(Exception):
    """Mathematical failure: exit status 1."""


def _emit(args, human: str, data: dict):
    if getattr(args, "json", False):
        print(json.dumps(data, sort_keys=True))
    else:
        print(human)


def _load(path: str, *kinds):
    obj = serialize.load(path)
    if kinds and not isinstance(obj, kinds):
        raise TypeError(f"{path}: expected {' or '.join(k.__name__ for k in kinds)}, got {type(obj).__name__}")
    return obj


def _violations(obj) -> list:
    if isinstance(obj, dg.KoszulModule):
        return dg.validate(obj)
    if isinstance(obj, mf.MatrixFactorization):
        return mf.validate_mf(obj)
    if isinstance(obj, dg.DgMorphism):
        out = dg.validate(obj.source) + dg.validate(obj.target) + obj.equivariance_residuals()
        if obj.degree == 0:
            D = obj.differential()
            out += [dg.Violation("d∘phi = phi∘d", j, m) for j, m in D.as_dict().items() if not m.is_zero()]
        return out
    if isinstance(obj, mf.MfMorphism):
        return obj.residuals()
    return []


def _load_valid(path: str, *kinds):
    obj = _load(path, *kinds)
    bad = _violations(obj)
    if bad:
        raise _Fail(f"{path}: input is not valid ({bad[0]})")
    return obj


def _write(args, obj, label: str = "result"):
    text = serialize.dumps(obj, indent=1)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text + "\n")
        if args.json:
            print(json.dumps({"written": args.output, "kind": serialize.to_obj(obj)["kind"]}, sort_keys=True))
        else:
            print(f"wrote {label} to {args.output}")
    else:
        print(text)


def _pres(P) -> dict:
    return {"free_rank": P.free_rank, "torsion": [str(f) for f in P.torsion_invariants]}


# -- commands ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    obj = _load(args.path)
    bad = _violations(obj)
    kind = serialize.to_obj(obj)["kind"]
    if bad:
        print(f"INVALID {kind}: {len(bad)} violated identit{'y' if len(bad) == 1 else 'ies'}")
        for v in bad:
            print(f"  {v}")
    else:
        print(f"VALID {kind}")
    print(json.dumps({"valid": not bad, "kind": kind, "violations": [{"identity": v.identity, "degree": v.degree} for v in bad]}, sort_keys=True))
    return 1 if bad else 0


def cmd_cohomology(args) -> int:
    M = _load(args.path, dg.KoszulModule)
    H = dg.cohomology(M)
    _emit(args, str(H), {"cohomology": {str(n): _pres(P) for n, P in H.items()}})
    return 0


def _hom_pair(args):
    E = _load_valid(args.source, dg.KoszulModule, mf.MatrixFactorization)
    F = _load_valid(args.target, dg.KoszulModule, mf.MatrixFactorization)
    if type(E) is not type(F):
        raise TypeError("source and target must have the same kind")
    return E, F


def cmd_hom(args) -> int:
    E, F = _hom_pair(args)
    if isinstance(E, mf.MatrixFactorization):
        H0 = mf.mf_hom_classes(E, F)
        _emit(args, f"H^0 = {H0}  (2-periodic)", {"H0": _pres(H0)})
        return 0
    H = dg.hom_complex(E, F)
    ranks = {n: H.rank(n) for n in H.degrees}
    coh = H.cohomology()
    lines = [f"Hom^{n}: rank {r}" for n, r in ranks.items()] + [str(coh)]
    _emit(args, "\n".join(lines), {"ranks": {str(n): r for n, r in ranks.items()}, "cohomology": {str(n): _pres(P) for n, P in coh.items()}})
    return 0


def cmd_homotopy_classes(args) -> int:
    E, F = _hom_pair(args)
    H0 = mf.mf_hom_classes(E, F) if isinstance(E, mf.MatrixFactorization) else dg.hom_complex(E, F).h0()
    _emit(args, f"H^0 = {H0}", {"H0": _pres(H0)})
    return 0


def cmd_fold(args) -> int:
    _write(args, mf.fold(_load_valid(args.path, dg.OneHomotopyModule)))
    return 0


def cmd_unfold(args) -> int:
    _write(args, mf.unfold(_load_valid(args.path, mf.MatrixFactorization)))
    return 0


def cmd_pushforward(args) -> int:
    _write(args, koszul.pushforward_a(args.i, _load_valid(args.path, dg.TwoHomotopyModule, dg.DgMorphism)))
    return 0


def cmd_pullback(args) -> int:
    _write(args, koszul.pullback_a(args.i, _load_valid(args.path, dg.OneHomotopyModule, dg.DgMorphism)))
    return 0


def cmd_diagonal(args) -> int:
    _write(args, koszul.diagonal_pushforward(_load_valid(args.path, dg.OneHomotopyModule, dg.DgMorphism)))
    return 0


def cmd_cone(args) -> int:
    phi = _load(args.path, dg.DgMorphism, mf.MfMorphism)
    C = mf.mf_cone(phi).cone if isinstance(phi, mf.MfMorphism) else dg.cone(phi).cone
    _write(args, C)
    return 0


def cmd_shift(args) -> int:
    X = _load_valid(args.path, dg.KoszulModule, mf.MatrixFactorization)
    if isinstance(X, mf.MatrixFactorization):
        for _ in range(args.k % 2):
            X = mf.mf_shift(X)
    else:
        X = dg.shift(X, args.k)
    _write(args, X)
    return 0


def cmd_twist(args) -> int:
    X = _load_valid(args.path, dg.KoszulModule, mf.MatrixFactorization)
    _write(args, koszul.galois_twist(X, X.field(args.c)))
    return 0


def cmd_extend(args) -> int:
    X = _load_valid(args.path, dg.KoszulModule, mf.MatrixFactorization)
    _write(args, koszul.extend_scalars(X, args.e2, X.field(args.u2)))
    return 0


def cmd_split3(args) -> int:
    M = _load_valid(args.path, dg.TwoHomotopyModule)
    A, B, _, _ = koszul.split_three_term(M)
    if args.output:
        paths = [f"{args.output}_sub.json", f"{args.output}_quotient.json"]
        for p, X in zip(paths, (A, B)):
            serialize.dump(X, p)
        _emit(args, f"wrote {paths[0]} and {paths[1]}", {"written": paths})
    else:
        print(json.dumps({"sub": serialize.to_obj(A), "quotient": serialize.to_obj(B)}, indent=1, sort_keys=True))
    return 0


def cmd_periodicity(args) -> int:
    M = _load_valid(args.path, dg.TwoHomotopyModule)
    w = koszul.periodicity_witness(M)
    C = w.triangle_cone
    human = "QUASI-ISO VERIFIED" if w.quasi_iso else "QUASI-ISO FAILED"
    human += f"\ncounit source ranks {list(w.counit.source.ranks)}, cone ranks {list(C.ranks)}"
    _emit(args, human, {"quasi_iso": w.quasi_iso, "cone_ranks": list(C.ranks), "cone_min_degree": C.min_degree})
    return 0 if w.quasi_iso else 1


def cmd_perfect(args) -> int:
    X = _load_valid(args.path, dg.OneHomotopyModule, mf.MatrixFactorization)
    ok = (mf.is_contractible(X) is not None) if isinstance(X, mf.MatrixFactorization) else sing.is_perfect(X)
    _emit(args, "PERFECT" if ok else "NOT PERFECT", {"perfect": ok})
    return 0


def cmd_kernel_member(args) -> int:
    ok = sing.in_relative_kernel(_load_valid(args.path, dg.TwoHomotopyModule))
    _emit(args, "IN RELATIVE KERNEL" if ok else "NOT IN RELATIVE KERNEL", {"relative_kernel_member": ok})
    return 0


def cmd_euler(args) -> int:
    chi = sing.euler_class(_load_valid(args.path, dg.OneHomotopyModule))
    _emit(args, f"euler class {chi}", {"euler_class": chi})
    return 0


def cmd_report(args) -> int:
    r = sing.localization_diagnostics(_load_valid(args.path, dg.TwoHomotopyModule))
    human = "\n".join(f"{k}: {v}" for k, v in r.as_dict().items())
    _emit(args, human, r.as_dict())
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest, write_reproducer

    F = FieldSpec(0) if args.field == "Q" else FieldSpec(args.p)
    t0 = time.perf_counter()

    def progress(r):
        print(f"[{r.name}] {r.seconds:.2f}s", file=sys.stderr)

    out = run_selftest(args.count, args.seed, F, args.emax, args.suite, progress)
    sys.stdout.write(out.report)
    print(f"total {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    if not out.ok:
        write_reproducer(out, args.reproducer)
        print(f"reproducer written to {args.reproducer}", file=sys.stderr)
        return 1
    return 0


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="koszul-mf", description="Koszul dg-modules and matrix factorizations over k[s].")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *, out=False, paths=("path",)):
        sp = sub.add_parser(name, help=help_)
        for a in paths:
            sp.add_argument(a)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if out:
            sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    add("validate", cmd_validate, "check the structure identities of an object or map")
    add("cohomology", cmd_cohomology, "cohomology of the underlying complex")
    add("hom", cmd_hom, "hom complex ranks and cohomology", paths=("source", "target"))
    add("homotopy-classes", cmd_homotopy_classes, "H^0 of the hom complex", paths=("source", "target"))
    add("fold", cmd_fold, "one-homotopy module -> matrix factorization", out=True)
    add("unfold", cmd_unfold, "matrix factorization -> two-term two-homotopy module", out=True)
    add("pushforward", cmd_pushforward, "forget one homotopy", out=True).add_argument("--i", type=int, choices=(1, 2), required=True)
    add("pullback", cmd_pullback, "E -> E + E[1]", out=True).add_argument("--i", type=int, choices=(1, 2), required=True)
    add("diagonal", cmd_diagonal, "(E, d, h) -> (E, d, {h, h})", out=True)
    add("cone", cmd_cone, "cone of a chain map or factorization morphism", out=True)
    add("shift", cmd_shift, "shift by k", out=True).add_argument("--k", type=int, default=1)
    add("twist", cmd_twist, "substitute s -> c s (c an e-th root of unity)", out=True).add_argument("--c", required=True)
    sp = add("extend", cmd_extend, "base change s -> u2 s^e2", out=True)
    sp.add_argument("--e2", type=int, required=True)
    sp.add_argument("--u2", default="1")
    add("split3", cmd_split3, "split a three-term object into two-term pieces (-o PREFIX)", out=True)
    add("periodicity", cmd_periodicity, "build and verify the two-periodicity triangle")
    add("perfect", cmd_perfect, "is the object zero modulo perfect complexes")
    add("kernel-member", cmd_kernel_member, "membership in the relative kernel of a_1*")
    add("euler", cmd_euler, "alternating sum of cohomology lengths")
    add("report", cmd_report, "localization-sequence diagnostics")

    st = sub.add_parser("selftest", help="run the randomized invariant battery")
    st.add_argument("--count", type=int, default=100)
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--field", choices=("Q", "Fp"), default="Q")
    st.add_argument("--p", type=int, default=5)
    st.add_argument("--emax", type=int, default=2)
    st.add_argument("--suite", action="append", help="restrict to the named suite (repeatable)")
    st.add_argument("--reproducer", default="selftest_failure.json", help="where to write a failing case")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, OSError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
