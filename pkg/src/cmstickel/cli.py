"""Command line entry point.

Exit status: 0 when every check in scope passed, 1 on a failed check,
2 on malformed input or a refused (out of scope) request.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algebra import GroupRingElement
from .classgroup import (class_number_by_ideals, class_number_imag_quadratic, dualize,
                         fitting_of_module, is_fundamental_discriminant, reduced_forms,
                         t_ray_minus_module)
from .fields import DEFAULT_CONDUCTOR_CAP, AbelianFieldQ, check_T_admissible, quadratic_field
from .harness import (battery_summary, integrality_battery, principal_lattice,
                      quadratic_battery_config, run_battery, tower_check, verify_c1)
from .ideals import MinusRing, lattice_product, lattice_sharp, theta_ideal_generators, theta_ideal_minus
from .lvalues import omega_T, theta_ST

log = logging.getLogger("cmstickel")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _load_json(text: str):
    """Inline JSON, or the path of a JSON file."""
    if text.lstrip().startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(text).read_text())


def _field(args) -> AbelianFieldQ:
    cap = args.conductor_cap
    if getattr(args, "field", None):
        data = _load_json(args.field)
        if not isinstance(data, dict) or "conductor" not in data:
            raise InputError("field JSON must be an object with a 'conductor' key")
        return AbelianFieldQ.from_json(data, conductor_cap=cap)
    if getattr(args, "D", None) is not None:
        K = quadratic_field(args.D)
        if K.n > cap:
            raise InputError(f"conductor {K.n} exceeds cap {cap}")
        return K
    if getattr(args, "conductor", None) is not None:
        return AbelianFieldQ(args.conductor, args.subgroup or [], conductor_cap=cap)
    raise InputError("a field is required: --field, --conductor or --D")


def _element_json(K: AbelianFieldQ, x: GroupRingElement) -> dict:
    return {"group_invariants": list(K.group.invariants),
            "residues": [K.rep(i) for i in range(K.group.order)],
            "coefficients": x.to_json()}


def _element_text(K: AbelianFieldQ, x: GroupRingElement) -> str:
    lines = [f"Gal(K/Q) = {list(K.group.invariants)}, sigma_a : zeta_{K.n} -> zeta_{K.n}^a"]
    for i, c in enumerate(x.to_json()):
        lines.append(f"  sigma_{K.rep(i):<6} {c}")
    return "\n".join(lines)


def _emit(args, payload: dict, text: str | None = None):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=1))
    elif text is not None:
        print(text)
    else:
        for k in sorted(payload):
            print(f"{k}: {json.dumps(payload[k], sort_keys=True)}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_theta(args) -> int:
    K = _field(args)
    S = sorted(set(args.S) | set(K.ramified_primes)) if args.add_ramified else sorted(set(args.S))
    theta = theta_ST(K, S, args.T, check_integrality=False)
    admissible = bool(args.T) and check_T_admissible(K, args.T)
    payload = {"field": K.to_json(), "S": S, "T": sorted(args.T), "theta": _element_json(K, theta),
               "integral": theta.is_integral(), "T_admissible": admissible}
    _emit(args, payload, _element_text(K, theta))
    return EXIT_FAIL if admissible and not theta.is_integral() else EXIT_OK


def cmd_omega(args) -> int:
    K = _field(args)
    omega = omega_T(K, args.T)
    payload = {"field": K.to_json(), "T": sorted(args.T), "omega": _element_json(K, omega)}
    _emit(args, payload, _element_text(K, omega))
    return EXIT_OK


def _require_cm_admissible(K: AbelianFieldQ, T):
    if not K.is_cm:
        raise InputError(f"{K} is not a CM field")
    if not check_T_admissible(K, T):
        raise InputError(f"T = {sorted(T)} is not admissible for {K}")


def cmd_ideal(args) -> int:
    K = _field(args)
    _require_cm_admissible(K, args.T)
    payload = {"field": K.to_json(), "T": sorted(args.T)}
    if args.generators:
        payload["generators"] = [{"J": list(J), "element": _element_json(K, g)}
                                 for J, g in theta_ideal_generators(K, args.T)]
    else:
        theta = theta_ideal_minus(K, args.T)
        payload["ring"] = {"transversal_residues": [K.rep(i) for i in MinusRing(K.group, K.rho).transversal]}
        payload["theta_minus"] = theta.away_from_2().to_json()
        payload["theta_minus_sharp"] = lattice_sharp(theta).away_from_2().to_json()
    _emit(args, payload)
    return EXIT_OK


def cmd_classgroup(args) -> int:
    D = args.D
    if D is None or D >= 0 or D % 4 not in (0, 1):
        raise InputError("--D must be a negative discriminant")
    forms = reduced_forms(D)
    h = class_number_imag_quadratic(D)
    payload = {"D": D, "class_number": h, "reduced_forms": [list(f) for f in forms],
               "fundamental": is_fundamental_discriminant(D)}
    status = EXIT_OK
    if args.check and payload["fundamental"]:
        h2 = class_number_by_ideals(D)
        payload["class_number_by_ideals"] = h2
        status = EXIT_OK if h2 == h else EXIT_FAIL
    _emit(args, payload)
    return status


def _ray(args):
    K = _field(args)
    _require_cm_admissible(K, args.T)
    ray = t_ray_minus_module(K, args.T, root_choice=args.root_choice)
    M = dualize(ray.module) if args.dual else ray.module
    return K, ray, M


def _fitting_json(K, ray, M) -> dict:
    ring = MinusRing(K.group, K.rho)
    L = lattice_product(fitting_of_module(M, K.rho), principal_lattice(ring, ray.class_number_odd))
    return L.away_from_2().to_json()


def cmd_raymodule(args) -> int:
    K, ray, M = _ray(args)
    payload = {"field": K.to_json(), "T": sorted(args.T), "dual": args.dual,
               "module": M.to_json(), "class_number_odd": ray.class_number_odd,
               "scope": ray.scope, "fitting": _fitting_json(K, ray, M)}
    _emit(args, payload)
    return EXIT_OK


def cmd_fitting(args) -> int:
    K, ray, M = _ray(args)
    payload = {"field": K.to_json(), "T": sorted(args.T), "dual": args.dual,
               "fitting": _fitting_json(K, ray, M)}
    _emit(args, payload)
    return EXIT_OK


def cmd_verify_c1(args) -> int:
    K = _field(args)
    _require_cm_admissible(K, args.T)
    rep = verify_c1(K, args.T, root_choice=args.root_choice, timings=args.timings)
    _emit(args, rep.to_json(), None if args.json else _report_text(rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _report_text(rep) -> str:
    lines = [f"field {rep.field}  T = {rep.T}",
             f"  module order {rep.module['order'] if rep.module else '-'}, "
             f"odd class number {rep.class_number_odd} ({rep.scope})",
             f"  theta side   {rep.theta_side}",
             f"  fitting side {rep.fitting_side}",
             f"  equal away from 2: {rep.equal_away_from_2} (index ratio {rep.index_ratio})",
             f"  non-dual Fitting^# equal: {rep.nondual_sharp_equal}"]
    for k in sorted(rep.checks):
        lines.append(f"  check {k}: {rep.checks[k]}")
    if rep.error:
        lines.append(f"  error: {rep.error}")
    lines.append("PASS" if rep.passed else "FAIL")
    return "\n".join(lines)


def cmd_battery(args) -> int:
    if args.integrality:
        res = integrality_battery(args.max_conductor, args.bound, args.max_T)
        _emit(args, res)
        return EXIT_OK if res["passed"] else EXIT_FAIL
    if args.config:
        config = _load_json(args.config)
    else:
        config = quadratic_battery_config()
    reports = run_battery(config, conductor_cap=args.conductor_cap, workers=args.workers,
                          timings=args.timings)
    summary = battery_summary(reports)
    payload = {"summary": summary, "reports": [r.to_json() for r in reports]}
    if args.json:
        _emit(args, payload)
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            extra = f"  ({r.error})" if r.error else ""
            print(f"{status}  {json.dumps(r.field, sort_keys=True)}  T={r.T}{extra}")
        print(f"{summary['passed']}/{summary['total']} passed")
    return EXIT_OK if not summary["failed_items"] else EXIT_FAIL


def cmd_tower(args) -> int:
    K = _field(args)
    res = tower_check(K, args.p, args.levels, args.T, args.S or None)
    _emit(args, res)
    return EXIT_OK if res["passed"] else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--conductor-cap", type=int, default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="cmstickel",
                                description="T-modified Stickelberger elements and Fitting ideals "
                                            "of T-ray class groups for abelian CM fields.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--conductor-cap", type=int, default=DEFAULT_CONDUCTOR_CAP)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def field_args(sp):
        g = sp.add_argument_group("field")
        g.add_argument("--field", help="field JSON (inline or path): "
                                       '{"conductor": n, "subgroup_generators": [...]}')
        g.add_argument("--conductor", type=int)
        g.add_argument("--subgroup", type=_int_list, help="generators of H, comma separated")
        g.add_argument("--D", type=int, help="imaginary quadratic field of discriminant D")

    def add(name, func, help_, field=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if field:
            field_args(sp)
        sp.set_defaults(func=func)
        return sp

    sp = add("theta", cmd_theta, "Stickelberger element theta^T_{K,S}")
    sp.add_argument("--S", type=_int_list, default=[])
    sp.add_argument("--T", type=_int_list, default=[])
    sp.add_argument("--add-ramified", action="store_true", help="adjoin the ramified primes to S")

    sp = add("omega", cmd_omega, "omega^T from primitive L-values")
    sp.add_argument("--T", type=_int_list, default=[])

    sp = add("ideal", cmd_ideal, "Stickelberger ideal, minus part")
    sp.add_argument("--T", type=_int_list, required=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--generators", action="store_true")
    mode.add_argument("--hnf", action="store_true", help="lattice HNF (default)")

    sp = add("classgroup", cmd_classgroup, "class number of an imaginary quadratic order", field=False)
    sp.add_argument("--D", type=int, required=True)
    sp.add_argument("--check", action="store_true", help="cross-check by ideal enumeration")

    for name, func, help_ in (("raymodule", cmd_raymodule, "odd minus part of Cl^T as a G-module"),
                              ("fitting", cmd_fitting, "Fitting ideal of the ray class module")):
        sp = add(name, func, help_)
        sp.add_argument("--T", type=_int_list, required=True)
        sp.add_argument("--dual", action="store_true")
        sp.add_argument("--root-choice", type=int, default=1)

    sp = add("verify-c1", cmd_verify_c1, "check the conjecture for one (K, T)")
    sp.add_argument("--T", type=_int_list, required=True)
    sp.add_argument("--root-choice", type=int, default=1)
    sp.add_argument("--timings", action="store_true")

    sp = add("battery", cmd_battery, "run a configured battery", field=False)
    sp.add_argument("--config", help="battery config JSON (inline or path); default: quadratic battery")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--timings", action="store_true")
    sp.add_argument("--integrality", action="store_true",
                    help="integrality battery over all CM fields of small conductor")
    sp.add_argument("--max-conductor", type=int, default=40)
    sp.add_argument("--bound", type=int, default=50)
    sp.add_argument("--max-T", type=int, default=2)

    sp = add("tower", cmd_tower, "restriction compatibility along a cyclotomic Z_p-tower")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--levels", type=int, default=1)
    sp.add_argument("--T", type=_int_list, default=[])
    sp.add_argument("--S", type=_int_list, default=[])
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, json.JSONDecodeError, OSError, KeyError, TypeError) as exc:
        # UnsupportedScope, ConductorCapExceeded, StickelbergerError are ValueErrors
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
