"""Batch verification driver.

    python -m logjet --p 3 --m 1 --n 2 --suite homotopy --jobs 4 --out report.json

Exit status: 0 if every case passed, 1 if some identity failed, 3 if an
internal self-check failed (non-p-integral binomial, non-unique M-bar
coordinates), 2 for usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .combinat import (
    InconsistencyError,
    Params,
    binom,
    digit_sum,
    gamma,
    is_prime,
    mod_p,
    qbinom,
    valuation,
)
from .homotopy import h, h1, homotopy_check
from .indexing import (
    DeltaSymbol,
    canonical_symbols,
    indices_of_weight_at_most,
    parse_symbol,
    render_symbol,
    slot_set,
    unit,
)
from .jet_complex import (
    _mbar_table,
    differential,
    quotient_reduce,
    relation_chain,
    relation_specs,
)
from .linalg_fp import Chain

SUITES = ("binomials", "gamma", "ddzero", "relations", "homotopy", "lemmas")

EXIT_OK, EXIT_FALSIFIED, EXIT_USAGE, EXIT_INCONSISTENT = 0, 1, 2, 3


@dataclass
class RunConfig:
    p: int = 2
    m: int = 1
    n: int = 1
    max_eta_weight: Optional[int] = None
    max_degree: int = 2
    suites: Tuple[str, ...] = SUITES
    parallelism: int = 1
    output_path: Optional[str] = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.m < 0 or self.n < 1:
            raise ValueError("need m >= 0 and n >= 1")
        if self.max_eta_weight is None:
            self.max_eta_weight = 2 * self.p ** self.m
        if self.max_eta_weight < 0 or self.max_degree < 1 or self.parallelism < 1:
            raise ValueError("bounds must be positive and max_degree >= 1")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suites: {unknown}")
        self.suites = tuple(self.suites)

    @property
    def params(self) -> Params:
        return Params(self.p, self.m, self.n)


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: List[dict]
    inconsistencies: int
    seconds: float


@dataclass
class VerificationReport:
    config: RunConfig
    suites: List[SuiteResult] = field(default_factory=list)
    version: str = __version__

    @property
    def failures(self) -> int:
        return sum(len(s.failures) for s in self.suites)

    @property
    def inconsistent(self) -> bool:
        return any(s.inconsistencies for s in self.suites)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def body(self) -> dict:
        cfg = asdict(self.config)
        cfg.pop("parallelism")
        cfg.pop("output_path")
        cfg["suites"] = list(cfg["suites"])
        return {
            "tool": "logjet",
            "version": self.version,
            "config": cfg,
            "suites": [
                {"name": s.name, "cases": s.cases, "failures": s.failures}
                for s in self.suites
            ],
            "total_failures": self.failures,
            "pass": self.passed,
        }

    def to_dict(self) -> dict:
        out = self.body()
        out["timing"] = {s.name: round(s.seconds, 3) for s in self.suites}
        return out

    def body_json(self) -> str:
        return json.dumps(self.body(), indent=2)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @property
    def exit_code(self) -> int:
        if self.inconsistent:
            return EXIT_INCONSISTENT
        return EXIT_OK if self.passed else EXIT_FALSIFIED


# ---------------------------------------------------------------------------
# case generation; every case is a plain tuple so it can cross process borders


def _binomial_cases(cfg: RunConfig) -> List[tuple]:
    P = cfg.params
    p, pm = P.p, P.pm
    cases = []
    for q in range(1, p * p + 1):
        for k in range(pm):
            for t in range(k + 1, pm + 1):
                cases.append(("0modp", q, k, t))
    for q in range(p * p + 1):
        for t in range(pm + 1):
            cases.append(("1modp", q, t))
    for k in range(301):
        for kp in range(k + 1):
            cases.append(("kummer", k, kp))
    for k in range(201):
        for kp in range(k + 1):
            cases.append(("p-integral", k, kp))
    return cases


def _gamma_cases(cfg: RunConfig) -> List[tuple]:
    P = cfg.params
    pm = P.pm
    cases = []
    for q in range(P.p ** 2 + 1):
        for k in range(pm):
            total = pm * q + k
            for a in range(pm + 1):
                for c in range(pm + 1 - a):
                    b = total - a - c
                    if b >= 0:
                        cases.append(("trichotomy", q, k, a, b, c))
    return cases


def _symbol_cases(cfg: RunConfig, degrees, tag: str) -> List[tuple]:
    P = cfg.params
    return [
        (tag, render_symbol(s))
        for r in degrees
        for s in canonical_symbols(P, r, cfg.max_eta_weight)
    ]


def _ddzero_cases(cfg: RunConfig) -> List[tuple]:
    return _symbol_cases(cfg, range(cfg.max_degree), "dd")


def _relation_cases(cfg: RunConfig) -> List[tuple]:
    P = cfg.params
    cases = []
    for r in range(2, cfg.max_degree + 2):
        for I in sorted(indices_of_weight_at_most(P.n, cfg.max_eta_weight)):
            for spec in relation_specs(P, r, I):
                cases.append(("relation", spec.eta, spec.position, spec.inner, spec.before, spec.after))
    return cases


def _homotopy_cases(cfg: RunConfig) -> List[tuple]:
    P = cfg.params
    cases = []
    for r in range(cfg.max_degree + 1):
        for i in range(P.n, 0, -1):
            for s in canonical_symbols(P, r, cfg.max_eta_weight):
                cases.append(("homotopy", i, render_symbol(s)))
    return cases


def _lemma_cases(cfg: RunConfig) -> List[tuple]:
    P = cfg.params
    n, pm, w = P.n, P.pm, cfg.max_eta_weight
    cases = []
    for r in range(2, cfg.max_degree + 2):
        cases.append(("mbar-basis", r))
    for I in sorted(indices_of_weight_at_most(n, w)):
        cases.append(("h1d0", I))
    for i in range(w + 1):
        for k in range(1, pm + 1):
            cases.append(("n1-degree1", i, k))
        for J in slot_set(P):
            cases.append(("last-coordinate", i, J))
    for r in range(2, cfg.max_degree + 1):
        for sym in canonical_symbols(P, r, w):
            for s in range(1, r):
                if sym.slots[s - 1] == tuple(pm * x for x in unit(n, n)) and all(
                    J[-1] == 0 for J in sym.slots[: s - 1]
                ):
                    cases.append(("swap", render_symbol(sym), s))
    return cases


# ---------------------------------------------------------------------------
# case checking; returns None on success or a failure payload


def _fail(case, detail: str, residual: Optional[Chain] = None) -> dict:
    return {
        "input": repr(case),
        "detail": detail,
        "residual": residual.render() if residual is not None else None,
    }


def _check_binomial(P: Params, case) -> Optional[dict]:
    kind = case[0]
    p, pm = P.p, P.pm
    if kind == "0modp":
        _, q, k, t = case
        got = mod_p(qbinom(P, pm * q + k, t), p)
        want = 0 if t < pm else 1
        return None if got == want else _fail(case, f"residue {got}, expected {want}")
    if kind == "1modp":
        _, q, t = case
        got = mod_p(qbinom(P, pm * q + t, t), p)
        return None if got == 1 else _fail(case, f"residue {got}, expected 1")
    if kind == "kummer":
        _, k, kp = case
        v = valuation(binom(k, kp), p)
        carries, rem = divmod(digit_sum(kp, p) + digit_sum(k - kp, p) - digit_sum(k, p), p - 1)
        if rem or v != carries:
            return _fail(case, f"valuation {v}, digit-sum formula {carries} (remainder {rem})")
        return None
    if kind == "p-integral":
        _, k, kp = case
        qbinom(P, k, kp)  # raises InconsistencyError when not p-integral
        return None
    raise ValueError(kind)


def gamma_trichotomy(P: Params, a: int, b: int, c: int, q: int, k: int) -> int:
    """Value of Gamma_{a,b,c} mod p predicted by the case analysis."""
    pm = P.pm
    if q >= 1 and (a, b, c) == (pm, pm * (q - 1) + k, 0):
        return q % P.p
    if q >= 1 and (a, b, c) == (0, pm * (q - 1) + k, pm):
        return 1
    if b >= pm * q:
        return gamma(P, (a,), (b - pm * q,), (c,))
    return 0


def _check_gamma(P: Params, case) -> Optional[dict]:
    _, q, k, a, b, c = case
    got = gamma(P, (a,), (b,), (c,))
    want = gamma_trichotomy(P, a, b, c, q, k)
    return None if got == want else _fail(case, f"Gamma = {got}, case analysis gives {want}")


def _check_dd(P: Params, case) -> Optional[dict]:
    x = Chain.from_symbol(P.p, parse_symbol(case[1]))
    res, _ = quotient_reduce(P, differential(P, differential(P, x)))
    return None if res.is_zero() else _fail(case, "d(d(x)) is not zero in the quotient", res)


def _check_relation(P: Params, case) -> Optional[dict]:
    from .jet_complex import RelationSpec

    _, eta, pos, inner, before, after = case
    spec = RelationSpec(eta, pos, inner, before, after)
    rel = relation_chain(P, spec)
    res, _ = quotient_reduce(P, rel)
    if not res.is_zero():
        return _fail(case, "relation chain is not zero in the quotient", res)
    if rel.is_zero():
        return None
    res, _ = quotient_reduce(P, h(P, rel))
    return None if res.is_zero() else _fail(case, "h(relation) is not zero in the quotient", res)


def _check_homotopy(P: Params, case) -> Optional[dict]:
    _, i, text = case
    result = homotopy_check(P, parse_symbol(text), coordinate=i)
    if result.passed:
        return None
    return _fail(case, f"(hd + dh)(x) differs from expected {result.expected.render()}", result.residual)


def _check_lemma(P: Params, case) -> Optional[dict]:
    kind = case[0]
    p, n, pm = P.p, P.n, P.pm
    zero = (0,) * n
    if kind == "mbar-basis":
        _mbar_table(P, case[1])
        return None
    if kind == "h1d0":
        I = tuple(case[1])
        x = Chain.from_symbol(p, DeltaSymbol(I, ()))
        got = h(P, differential(P, x))
        want = x if I[-1] > 0 else Chain.zero(p, 0)
        return None if got == want else _fail(case, f"h d x = {got.render()}", got - want)
    if kind in ("n1-degree1", "last-coordinate"):
        if kind == "n1-degree1":
            _, i, k = case
            J = zero[:-1] + (k,)
        else:
            _, i, J = case
        sym = DeltaSymbol(zero[:-1] + (i,), (tuple(J),))
        x = Chain.from_symbol(p, sym)
        w = h(P, differential(P, x)) + differential(P, h1(P, sym))
        want = Chain.zero(p, 1) if i == 0 and J[-1] == 0 else x
        res, _ = quotient_reduce(P, w - want)
        return None if res.is_zero() else _fail(case, "hd + dh differs from expected", res)
    if kind == "swap":
        _, text, s = case
        sym = parse_symbol(text)
        sl = list(sym.slots)
        sl[s - 1], sl[s] = sl[s], sl[s - 1]
        swapped = DeltaSymbol(sym.eta, tuple(sl))
        total = h(P, Chain.from_symbol(p, sym)) + h(P, Chain.from_symbol(p, swapped))
        res, _ = quotient_reduce(P, total)
        return None if res.is_zero() else _fail(case, "h(x) + h(swap x) is not zero", res)
    raise ValueError(kind)


_SUITE_TABLE: Dict[str, Tuple[Callable, Callable]] = {
    "binomials": (_binomial_cases, _check_binomial),
    "gamma": (_gamma_cases, _check_gamma),
    "ddzero": (_ddzero_cases, _check_dd),
    "relations": (_relation_cases, _check_relation),
    "homotopy": (_homotopy_cases, _check_homotopy),
    "lemmas": (_lemma_cases, _check_lemma),
}


def _run_chunk(args) -> List[Tuple[int, Optional[dict], bool]]:
    suite, P, chunk = args
    check = _SUITE_TABLE[suite][1]
    out = []
    for idx, case in chunk:
        try:
            out.append((idx, check(P, case), False))
        except InconsistencyError as exc:
            out.append((idx, _fail(case, f"internal inconsistency: {exc}"), True))
    return out


def run_suite(cfg: RunConfig, suite: str, pool: Optional[ProcessPoolExecutor] = None) -> SuiteResult:
    t0 = time.perf_counter()
    P = cfg.params
    cases = list(enumerate(_SUITE_TABLE[suite][0](cfg)))
    if pool is None or len(cases) < 2:
        results = _run_chunk((suite, P, cases))
    else:
        nchunks = cfg.parallelism * 4
        chunks = [cases[i::nchunks] for i in range(nchunks)]
        results = []
        for part in pool.map(_run_chunk, [(suite, P, c) for c in chunks if c]):
            results.extend(part)
    results.sort(key=lambda t: t[0])
    failures = [f for _, f, _ in results if f is not None]
    return SuiteResult(
        name=suite,
        cases=len(cases),
        failures=failures,
        inconsistencies=sum(1 for *_, bad in results if bad),
        seconds=time.perf_counter() - t0,
    )


def run(cfg: RunConfig) -> VerificationReport:
    report = VerificationReport(config=cfg)
    ordered = [s for s in SUITES if s in cfg.suites]
    if cfg.parallelism > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            for suite in ordered:
                report.suites.append(run_suite(cfg, suite, pool))
    else:
        for suite in ordered:
            report.suites.append(run_suite(cfg, suite))
    return report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logjet",
        description="Verify the combinatorial lemmas and the homotopy identities of the "
        "level-m logarithmic jet complex over F_p.",
    )
    parser.add_argument("--p", type=int, default=2, help="prime (default 2)")
    parser.add_argument("--m", type=int, default=1, help="level (default 1)")
    parser.add_argument("--n", type=int, default=1, help="number of coordinates (default 1)")
    parser.add_argument("--max-weight", type=int, default=None,
                        help="bound on |I| of enumerated symbols (default 2*p^m)")
    parser.add_argument("--max-degree", type=int, default=2,
                        help="largest degree r checked (default 2)")
    parser.add_argument("--suite", action="append", choices=SUITES, default=None,
                        help="suite to run; repeatable (default: all)")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    parser.add_argument("--out", default=None, help="report path (default: stdout)")
    return parser


def parse_flags(argv: Optional[Sequence[str]] = None) -> RunConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    if not is_prime(ns.p):
        parser.error(f"--p {ns.p} is not prime")
    try:
        return RunConfig(
            p=ns.p,
            m=ns.m,
            n=ns.n,
            max_eta_weight=ns.max_weight,
            max_degree=ns.max_degree,
            suites=tuple(ns.suite) if ns.suite else SUITES,
            parallelism=ns.jobs,
            output_path=ns.out,
        )
    except ValueError as exc:
        parser.error(str(exc))


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_flags(argv)
    report = run(cfg)
    text = report.to_json() + "\n"
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
