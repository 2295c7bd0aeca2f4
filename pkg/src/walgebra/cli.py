"""Command-line front end producing schema-versioned JSON run reports."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .scalar_core import K, Q, Scalar, to_string

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240101
WORKERS_ENV = "WALGEBRA_WORKERS"


class UsageError(ValueError):
    pass


class CertificateFailure(RuntimeError):
    pass


@dataclass
class RunReport:
    subcommand: str
    parameters: dict
    wall_time: float
    certificates: dict
    payload: dict
    seed: int
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(self.certificates.values())

    def require(self) -> None:
        failed = sorted(k for k, v in self.certificates.items() if not v)
        if failed:
            raise CertificateFailure(", ".join(failed))

    def to_obj(self) -> dict:
        return asdict(self)

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_obj(), indent=indent, sort_keys=True)

    @classmethod
    def from_obj(cls, obj: dict) -> RunReport:
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {obj.get('schema_version')!r}")
        required = {"subcommand", "parameters", "wall_time", "certificates", "payload", "seed"}
        missing = required - obj.keys()
        if missing:
            raise ValueError(f"report is missing {sorted(missing)}")
        if not all(isinstance(v, bool) for v in obj["certificates"].values()):
            raise ValueError("certificates must be booleans")
        return cls(**{k: obj[k] for k in required | {"schema_version"}})

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        return cls.from_obj(json.loads(text))


def parse_level(text: str) -> Scalar:
    """'k' for the symbolic level, otherwise a rational like '-1/2' or '3'."""
    text = text.strip()
    if text == "k":
        return K
    try:
        return Q(text)
    except ValueError:
        raise UsageError(f"level must be 'k' or a rational p/q, got {text!r}") from None


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be an integer") from None


# ---------------------------------------------------------------------------
# subcommands; each returns (certificates, payload)


def cmd_lie(args) -> tuple[dict, dict]:
    from .lie_core import LieData, check_triple, chi_vanishes_on_commutators, transversality_rank, \
        verify_kostant_freeness

    data = LieData(args.n, args.kind)
    rep = verify_kostant_freeness(args.n, args.samples, args.seed)
    certs = {
        "sl2_triple": check_triple(data),
        "chi_character": chi_vanishes_on_commutators(data),
        "kostant_slice": rep.passed,
        "transversality": transversality_rank(args.n) == args.n * args.n,
    }
    return certs, {"lie": data.inspect()}


def cmd_finite_brst(args) -> tuple[dict, dict]:
    from .finite_brst import ad_squared_zero, build_Q_finite, center_hilbert, finite_cohomology

    quantum = not args.classical
    cx = build_Q_finite(args.n, quantum)
    fc = finite_cohomology(args.n, args.max_degree, quantum)
    expected = center_hilbert(args.n, args.max_degree, cumulative=quantum)
    certs = {
        "ad_Q_squared_zero": ad_squared_zero(cx),
        "d_squared_zero": fc.d_squared_zero,
        "vanishing_off_zero": fc.vanishing_off_zero(),
        "h0_matches_center": fc.h0() == expected,
    }
    return certs, {"cohomology": fc.to_obj(), "center_dims": expected}


def cmd_vertex(args) -> tuple[dict, dict]:
    from .free_fields import preset
    from .vertex_engine import IDENTITIES, AxiomViolation, verify_axioms

    P = preset(args.preset, parse_level(args.level))
    idents = args.identities.split(",") if args.identities else IDENTITIES
    try:
        rep = verify_axioms(P, cap=args.cap, trials=args.trials, seed=args.seed, identities=idents)
        return {"axioms": rep.passed}, {"checked": rep.checked, "trials": rep.trials}
    except AxiomViolation as exc:
        return {"axioms": False}, {"violation": [str(x) for x in exc.args]}


def cmd_brst(args) -> tuple[dict, dict]:
    from .brst_reduction import build_Q_hat, build_minus, cohomology_dims

    level = parse_level(args.level)
    diff = build_Q_hat(args.n, args.kind, level)
    table = cohomology_dims(args.n, args.weight, args.kind, level, minus=build_minus(diff))
    certs = {
        "Q_lambda_Q_zero": diff.nilpotent,
        "d_squared_zero": table.d_squared_zero,
        "vanishing_off_zero": table.vanishing_off_zero(),
        "h0_matches_product": table.h0() == table.predicted,
    }
    return certs, {"cohomology": table.to_obj()}


def cmd_miura(args) -> tuple[dict, dict]:
    from .brst_reduction import grading_operator
    from .miura_walgebra import central_charge_formula, miura_image, virasoro_certificate

    level = K if args.symbolic else parse_level(args.level)
    c = virasoro_certificate(args.n, level) if args.n in (2, 3) else None
    img = miura_image(args.n, level, check=True)
    certs = {"miura_identity": True}
    payload = {"W": img.expressions(), "alpha": to_string(img.alpha)}
    if c is not None:
        certs["central_charge_formula"] = c == central_charge_formula(args.n, level)
        certs["brst_central_charge"] = grading_operator(args.n, level).central_charge == c
        payload["central_charge"] = to_string(c)
    return certs, payload


def cmd_zhu(args) -> tuple[dict, dict]:
    from .free_fields import preset
    from .zhu_c2 import c2_algebra, check_commutator_identity, is_commutative, w_preset, zhu_truncation

    level = parse_level(args.level) if args.level != "k" else Q(13, 7)
    P = w_preset(level) if args.preset == "w-sl2" else preset(args.preset, level)
    Z = zhu_truncation(P, args.weight)
    C2 = c2_algebra(P, args.weight)
    certs = {"commutator_identity": check_commutator_identity(Z, Z.stable)}
    payload = {
        "zhu_dims": Z.zhu_dims,
        "gr": Z.gr(),
        "by_charge": {str(c): v for c, v in Z.dims_by_charge().items()},
        "c2_dims": C2.dims,
        "commutative": is_commutative(Z),
    }
    return certs, payload


def cmd_jets(args) -> tuple[dict, dict]:
    from .jet_pva import JetPVA, jet_ideal, kirillov_kostant, pva_axioms

    payload: dict = {}
    certs: dict = {}
    if args.f:
        ideal = jet_ideal(args.f, args.order)
        payload["generators"] = ideal.as_strings()
        certs["weights"] = ideal.weights_ok()
    if args.pva_trials:
        rep = pva_axioms(JetPVA(kirillov_kostant(2)), args.pva_trials, seed=args.seed)
        certs["pva_axioms"] = rep.passed
        payload["pva_failures"] = rep.failures
    if not certs:
        raise UsageError("jets needs --f or --pva-trials")
    return certs, payload


def cmd_characters(args) -> tuple[dict, dict]:
    from .characters_admissible import class_characters, denominator_check, is_admissible_level, \
        nondegenerate_classes

    status = is_admissible_level(args.n, Q(args.p, args.q) - args.n)
    if status != "nondegenerate":
        raise UsageError(f"(p, q) = ({args.p}, {args.q}) is {status} for n = {args.n}, not nondegenerate")
    payload: dict = {"classification": status}
    certs: dict = {}
    classes = nondegenerate_classes(args.n, args.p, args.q)
    if args.list_classes:
        payload["classes"] = {"count": classes.count, "free": classes.free,
                              "representatives": [list(map(list, r)) for r in classes.representatives]}
    chars = class_characters(args.n, args.p, args.q, args.order, args.cap)
    payload["characters"] = [c.to_obj() for c in chars]
    certs["nonnegative_integer"] = all(
        x >= 0 and x.denominator == 1 for c in chars for x in c.character.coeffs)
    certs["constant_terms_one"] = all(c.character.coeffs[0] == 1 for c in chars)
    if args.n == 2:
        alt, euler = denominator_check(min(args.order, 40))
        certs["pentagonal"] = alt == euler
    return certs, payload


# ---------------------------------------------------------------------------
# verify-all


def _quick_checks() -> dict:
    return {
        "central_charge_sl2": _chk_c2,
        "central_charge_sl3": _chk_c3,
        "brst_sl2": lambda: _chk_brst(2, 4),
        "miura": _chk_miura,
        "duality": _chk_duality,
        "vertex_axioms": lambda: _chk_vertex(3, 10),
        "finite_reduction": _chk_finite,
        "zhu": _chk_zhu,
        "jets": lambda: _chk_jets(20),
        "characters": _chk_chars,
        "orbits": _chk_orbits,
    }


def _full_checks() -> dict:
    checks = _quick_checks()
    checks["brst_sl2"] = lambda: _chk_brst(2, 6)
    checks["brst_sl3"] = lambda: _chk_brst(3, 4)
    checks["vertex_axioms"] = lambda: _chk_vertex(4, 200)
    checks["jets"] = lambda: _chk_jets(100)
    return checks


def _chk_c2() -> bool:
    from .miura_walgebra import virasoro_certificate

    return virasoro_certificate(2) == 1 - 6 * (K + 1) ** 2 / (K + 2)


def _chk_c3() -> bool:
    from .brst_reduction import grading_operator
    from .miura_walgebra import central_charge_formula

    return grading_operator(3).central_charge == central_charge_formula(3)


def _chk_brst(n: int, w: int) -> bool:
    from .brst_reduction import cohomology_dims

    t = cohomology_dims(n, w)
    return t.d_squared_zero and t.vanishing_off_zero() and t.h0() == t.predicted


def _chk_miura() -> bool:
    from .miura_walgebra import miura_image

    for n in (2, 3, 4):
        miura_image(n)
    return True


def _chk_duality() -> bool:
    from .miura_walgebra import duality_check

    return duality_check(2).passed and duality_check(3).passed


def _chk_vertex(cap: int, trials: int) -> bool:
    from .free_fields import preset
    from .vertex_engine import verify_axioms

    idents = ("sesquilinearity", "skew", "jacobi", "wick_left", "wick_right")
    return verify_axioms(preset("complex-sl2"), cap=cap, trials=trials, identities=idents).passed


def _chk_finite() -> bool:
    from .finite_brst import ad_squared_zero, build_Q_finite, center_hilbert, finite_cohomology

    ok = ad_squared_zero(build_Q_finite(2)) and ad_squared_zero(build_Q_finite(3))
    fc = finite_cohomology(2, 4)
    return ok and fc.vanishing_off_zero() and fc.h0() == center_hilbert(2, 4)


def _chk_zhu() -> bool:
    from .free_fields import preset
    from .zhu_c2 import is_commutative, w_preset, zhu_total_dim, zhu_truncation

    gr = zhu_truncation(preset("affine-sl2", Q(13, 7)), 5).gr()
    return (gr[:4] == [1, 3, 6, 10] and zhu_total_dim(preset("fermions-2"), 4) == 4
            and is_commutative(zhu_truncation(w_preset(Q(13, 7)), 6)))


def _chk_jets(trials: int) -> bool:
    from .jet_pva import JetPVA, kirillov_kostant, pva_axioms

    return pva_axioms(JetPVA(kirillov_kostant(2)), trials).passed


def _chk_chars() -> bool:
    from .characters_admissible import class_characters, denominator_check

    alt, euler = denominator_check(20)
    chars = class_characters(2, 3, 4, 10)
    return alt == euler and len(chars) == 3 and all(c.character.coeffs[0] == 1 for c in chars)


def _chk_orbits() -> bool:
    from .characters_admissible import orbit_partition, orbit_partition_bruteforce

    return all(orbit_partition(n, q) == orbit_partition_bruteforce(n, q)
               for n in range(1, 5) for q in range(1, 9))


def _timed(fn: Callable[[], bool]) -> tuple[bool, float]:
    t = time.perf_counter()
    ok = bool(fn())
    return ok, time.perf_counter() - t


def _run_named(item: tuple[str, str]) -> tuple[str, bool, float]:
    profile, name = item
    checks = _quick_checks() if profile == "quick" else _full_checks()
    ok, dt = _timed(checks[name])
    return name, ok, dt


def cmd_verify_all(args) -> tuple[dict, dict]:
    checks = _quick_checks() if args.profile == "quick" else _full_checks()
    items = [(args.profile, name) for name in checks]
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_named, items))
    else:
        results = [_run_named(i) for i in items]
    certs = {name: ok for name, ok, _ in results}
    return certs, {"timings": {name: round(dt, 3) for name, _, dt in results}}


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="walgebra", description="W-algebra reduction toolkit")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("lie")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--kind", choices=("sl", "gl"), default="gl")
    s.add_argument("--samples", type=int, default=20)
    s.set_defaults(func=cmd_lie)

    s = sub.add_parser("finite-brst")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--max-degree", type=int, default=4)
    s.add_argument("--classical", action="store_true")
    s.set_defaults(func=cmd_finite_brst)

    s = sub.add_parser("vertex")
    s.add_argument("--preset", default="complex-sl2")
    s.add_argument("--level", default="k")
    s.add_argument("--cap", type=int, default=3)
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--identities", default="")
    s.set_defaults(func=cmd_vertex)

    s = sub.add_parser("brst")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--kind", choices=("sl", "gl"), default="sl")
    s.add_argument("--weight", type=int, default=4)
    s.add_argument("--level", default="k")
    s.set_defaults(func=cmd_brst)

    s = sub.add_parser("miura")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--symbolic", action="store_true")
    s.add_argument("--level", default="k")
    s.set_defaults(func=cmd_miura)

    s = sub.add_parser("zhu")
    s.add_argument("--preset", default="affine-sl2",
                   help="a free_fields preset or 'w-sl2'")
    s.add_argument("--weight", type=int, default=5)
    s.add_argument("--level", default="13/7")
    s.set_defaults(func=cmd_zhu)

    s = sub.add_parser("jets")
    s.add_argument("--f", action="append", help="ideal generator, e.g. 'x^2+y^3'; repeatable")
    s.add_argument("--order", type=int, default=5)
    s.add_argument("--pva-trials", type=int, default=0)
    s.set_defaults(func=cmd_jets)

    s = sub.add_parser("characters")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--order", type=int, default=10)
    s.add_argument("--cap", type=int, default=3)
    s.add_argument("--list-classes", action="store_true")
    s.set_defaults(func=cmd_characters)

    s = sub.add_parser("verify-all")
    s.add_argument("--profile", choices=("quick", "full"), default="quick")
    s.set_defaults(func=cmd_verify_all)
    return p


def run(argv: list[str]) -> RunReport:
    """Parse ``argv``, execute the subcommand and return its report.

    Raises UsageError on bad arguments.
    """
    return _execute(build_parser().parse_args(argv))


def _execute(args) -> RunReport:
    params = {k: v for k, v in vars(args).items() if k not in ("func", "out", "seed", "subcommand")}
    t = time.perf_counter()
    try:
        certs, payload = args.func(args)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(str(exc)) from exc
    return RunReport(args.subcommand, params, round(time.perf_counter() - t, 3), certs, payload, args.seed)


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
        report = _execute(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    try:
        report.require()
    except CertificateFailure as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
