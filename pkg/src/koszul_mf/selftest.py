"""Randomized invariant battery behind ``koszul-mf selftest``.

Each suite draws from its own ``random.Random`` seeded by ``"<seed>/<suite>"``,
so suites are independent of each other and of the order they run in. The
report string contains no timings; those go to the caller separately.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .dg import cone, is_boundary_in_h0, is_null_homotopic, shift, validate
from .errors import EngineError
from .generators import (
    random_chain_map,
    random_matrix,
    random_mf,
    random_one_two_term,
    random_short_one,
    random_short_two,
    random_three_term_two,
    random_tower,
    random_two_two_term,
)
from .koszul import periodicity_witness, pullback_a, pushforward_a, split_three_term
from .mf import fold, is_contractible, mf_hom_classes, unfold, validate_mf
from .ring import FieldSpec, PolyMatrix, determinant, smith_normal_form
from .serialize import dumps, loads, to_obj
from .sing import in_relative_kernel, localization_diagnostics


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)  # (size, message, object)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _size(obj) -> int:
    try:
        return len(dumps(obj))
    except TypeError:
        return 10**9


# -- individual checks: return None on success or a failure message -------------


def _chk_snf(rng, F):
    A = random_matrix(rng, F, rng.randint(0, 4), rng.randint(0, 4), 3)
    r = smith_normal_form(A)
    if r.U @ A @ r.V != r.D:
        return "U A V != D", A
    for X in (r.U, r.V):
        if X.rows and determinant(X).degree != 0:
            return "transform is not unimodular", A
    diag = r.invariant_factors
    if any(not f.is_monic() for f in diag) or any(not f.divides(g) for f, g in zip(diag, diag[1:])):
        return "diagonal is not a monic divisibility chain", A
    return None, A


def _chk_validate(rng, F, emax):
    T = random_tower(rng, F, emax)
    M = random_short_two(rng, T)
    for name, X in (("object", M), ("shift", shift(M, rng.randint(-2, 2))), ("cone(id)", cone(M.identity()).cone)):
        if validate(X):
            return f"{name} does not validate", M
    return None, M


def _chk_two_term(rng, F, emax):
    T = random_tower(rng, F, emax)
    M = random_two_two_term(rng, T, rng.randint(1, 3))
    if validate(M):
        return "generated object is invalid", M
    n = M.min_degree
    if M.hmap(0, n + 1) != M.hmap(1, n + 1):
        return "h1 != h2 on a two-term object", M
    if smith_normal_form(M.dmap(n), transforms=False).rank != M.rank(n):
        return "d is not injective", M
    return None, M


def _chk_periodicity(rng, F, emax):
    T = random_tower(rng, F, emax)
    M = random_short_two(rng, T)
    w = periodicity_witness(M)
    return (None if w.quasi_iso else "comparison is not a quasi-isomorphism"), M


def _chk_mf_roundtrip(rng, F, emax):
    T = random_tower(rng, F, emax)
    E = random_mf(rng, T, rng.randint(1, 3))
    if validate_mf(E):
        return "generated factorization is invalid", E
    if fold(pushforward_a(1, unfold(E))) != E:
        return "fold(a1* unfold E) != E", E
    M = random_two_two_term(rng, T, rng.randint(1, 3))
    if unfold(fold(pushforward_a(1, M))) != M:
        return "unfold(fold(a1* M)) != M", M
    return None, E


def _chk_kernel(rng, F, emax):
    T = random_tower(rng, F, emax)
    N = random_short_one(rng, T) if rng.random() < 0.5 else random_one_two_term(rng, T, rng.randint(1, 3))
    ok = in_relative_kernel(pullback_a(2, N))
    return (None if ok else "a2^* N is not in the relative kernel"), N


def _chk_split(rng, F, emax):
    T = random_tower(rng, F, emax)
    M = random_three_term_two(rng, T, rng.randint(1, 2), rng.randint(1, 2), rng.randint(-1, 1))
    split_three_term(M)
    return None, M


def _chk_contractible(rng, F, emax):
    T = random_tower(rng, F, emax)
    E = random_mf(rng, T, rng.randint(1, 3))
    a = is_contractible(E) is not None
    b = is_contractible(E, "direct") is not None
    c = mf_hom_classes(E, E).is_zero()
    if not a == b == c:
        return f"reduced={a} direct={b} End-classes-zero={c}", E
    return None, E


def _chk_homotopy(rng, F, emax):
    T = random_tower(rng, F, emax)
    gen = lambda: random_short_one(rng, T) if rng.random() < 0.3 else random_one_two_term(rng, T, rng.randint(1, 2))  # noqa: E731
    E, G = gen(), gen()
    phi = random_chain_map(rng, E, G)
    a = is_null_homotopic(phi) is not None
    b = is_boundary_in_h0(phi)
    return (None if a == b else f"solver={a} H0-membership={b}"), phi


def _chk_serialize(rng, F, emax):
    T = random_tower(rng, F, emax)
    x = rng.choice([lambda: random_short_two(rng, T), lambda: random_short_one(rng, T), lambda: random_mf(rng, T, rng.randint(1, 3))])()
    if loads(dumps(x)) != x:
        return "parse(serialize(x)) != x", x
    return None, x


def _chk_report(rng, F, emax):
    T = random_tower(rng, F, emax)
    M = random_short_two(rng, T)
    r = localization_diagnostics(M)
    if r.relative_kernel_member != r.is_perfect or not r.periodicity_verified:
        return "inconsistent report", M
    return None, M


SUITES: list[tuple[str, Callable]] = [
    ("snf", lambda rng, F, emax: _chk_snf(rng, F)),
    ("validate", _chk_validate),
    ("two-term-remark", _chk_two_term),
    ("periodicity", _chk_periodicity),
    ("mf-round-trip", _chk_mf_roundtrip),
    ("kernel-membership", _chk_kernel),
    ("split3", _chk_split),
    ("contractibility-oracles", _chk_contractible),
    ("homotopy-oracles", _chk_homotopy),
    ("serialization", _chk_serialize),
    ("localization-report", _chk_report),
]


def run_suite(name: str, check: Callable, count: int, seed: int, F: FieldSpec, emax: int) -> SuiteResult:
    rng = random.Random(f"{seed}/{name}")
    res = SuiteResult(name)
    t0 = time.perf_counter()
    for _ in range(count):
        res.total += 1
        obj = None
        try:
            msg, obj = check(rng, F, emax)
        except EngineError as exc:
            msg = f"{type(exc).__name__}: {exc}"
        if msg is None:
            res.passed += 1
        else:
            res.failures.append((_size(obj), msg, obj))
    res.seconds = time.perf_counter() - t0
    return res


@dataclass
class SelftestOutcome:
    report: str
    results: list[SuiteResult]
    reproducer: dict | None

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)


def run_selftest(count: int = 100, seed: int = 0, field_: FieldSpec | None = None, emax: int = 2, suites: list[str] | None = None, progress=None) -> SelftestOutcome:
    F = field_ or FieldSpec(0)
    lines = [f"selftest seed={seed} field={F} emax={emax} count={count}"]
    results = []
    for name, check in SUITES:
        if suites and name not in suites:
            continue
        r = run_suite(name, check, count, seed, F, emax)
        results.append(r)
        lines.append(f"{name:<26}{r.passed:>5}/{r.total:<5} {'ok' if r.ok else 'FAIL'}")
        for _, msg, _ in r.failures[:3]:
            lines.append(f"    {msg}")
        if progress:
            progress(r)
    ok = all(r.ok for r in results)
    lines.append(f"result: {'PASS' if ok else 'FAIL'}")
    reproducer = None
    if not ok:
        # smallest failing object across all suites
        name, (size, msg, obj) = min(((r.name, f) for r in results for f in r.failures), key=lambda t: t[1][0])
        reproducer = {"suite": name, "seed": seed, "field": str(F), "emax": emax, "message": msg}
        if obj is not None:
            try:
                reproducer["object"] = to_obj(obj)
            except TypeError:
                reproducer["object_repr"] = repr(obj)
    return SelftestOutcome("\n".join(lines) + "\n", results, reproducer)


def write_reproducer(outcome: SelftestOutcome, path: str):
    with open(path, "w") as f:
        json.dump(outcome.reproducer, f, indent=1, sort_keys=True)
        f.write("\n")
