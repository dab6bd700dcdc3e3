"""``derham`` command-line interface.

Exit status: 0 on success, 1 on a mathematical negative result (no
certificate, failed verification, bound violation), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .bounds import BoundViolation, derham_degree_bound, gysin_degree_bound, lift_coefficient_bound
from .certificate import CapacityError, Certificate, CertificateError, certify_smooth, load_certificate
from .forms import parse_form, residue, residues, spanning_set
from .lift import build_psi
from .parsing import ParseError
from .polyring import Hypersurface, parse_poly

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


class MathFailure(RuntimeError):
    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report


@dataclass
class RunConfig:
    command: str
    nvars: int | None = None
    f: str | None = None
    form: str | None = None
    order: int = 2
    pole_order: int | None = None
    p: int | None = None
    d: int | None = None
    deg_omega: int | None = None
    json: bool = False
    out: str | None = None
    cert_path: str | None = None
    assert_bounds: bool = True
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        needs_f = {"certify", "lift", "residue", "span"}
        if self.command in needs_f:
            if not self.nvars or self.nvars < 1:
                raise UsageError("-n (number of variables, >= 1) is required")
            if not self.f:
                raise UsageError("-f (hypersurface equation) is required")
        if self.command == "residue" and not self.form:
            raise UsageError("--form is required")
        if self.command == "span" and (self.p is None or self.p < 0):
            raise UsageError("-p (cohomological degree, >= 0) is required")
        if self.command == "bounds":
            if self.d is None or self.nvars is None or self.p is None:
                raise UsageError("bounds needs -d, -n and -p")
        if self.order < 0:
            raise UsageError("--order must be non-negative")
        if self.pole_order is not None and self.pole_order < 0:
            raise UsageError("--pole-order must be non-negative")


def _report(cfg: RunConfig, inputs: dict, result, bounds: dict | None = None) -> dict:
    return {"command": cfg.command, "inputs": inputs, "result": result,
            "bounds": bounds or {"formula": None, "actual": None}}


def _hypersurface(cfg: RunConfig) -> Hypersurface:
    return Hypersurface(parse_poly(cfg.f, cfg.nvars))


def _certificate(cfg: RunConfig, hs: Hypersurface) -> Certificate:
    if cfg.cert_path:
        return load_certificate(cfg.cert_path, hs.f)
    cert = certify_smooth(hs.f)
    if not cert:
        raise MathFailure(f"no smoothness certificate with deg g_i <= {cert.max_degree}; Z(f) is singular")
    return cert


def _cmd_certify(cfg: RunConfig):
    hs = _hypersurface(cfg)
    inputs = {"n": hs.n, "f": hs.f.to_string()}
    bound_info = {"formula": "d^n", "bound": hs.d**hs.n}
    if cfg.cert_path:
        cert = load_certificate(cfg.cert_path, hs.f)
    else:
        cert = certify_smooth(hs.f)
    if not cert:
        report = _report(cfg, inputs, {"found": False, "max_degree": cert.max_degree},
                         {**bound_info, "actual": None})
        raise MathFailure(f"no certificate with deg g_i <= {cert.max_degree}: Z(f) is singular", report)
    report = _report(cfg, inputs, {"found": True, "certificate": cert.to_json(), "verified": cert.verify(hs.f)},
                     {**bound_info, "actual": cert.degree_bound_used})
    lines = [f"certificate found at degree {cert.degree_bound_used} (bound d^n = {hs.d ** hs.n})"]
    lines += [f"  g{i + 1} = {g}" for i, g in enumerate(cert.g)]
    lines += [f"  h  = {cert.h}", "  identity sum g_i d_i f + h f = 1 verified"]
    return report, "\n".join(lines)


def _cmd_lift(cfg: RunConfig):
    hs = _hypersurface(cfg)
    cert = _certificate(cfg, hs)
    psi = build_psi(hs, cert, cfg.order, check_bounds=cfg.assert_bounds)
    result = {"order": cfg.order, "xi": [x.to_json() for x in psi.xi]}
    actual = [max(int(x.coeffs[v].total_degree) if x.coeffs[v] else 0 for x in psi.xi) for v in range(cfg.order + 1)]
    bound = [lift_coefficient_bound(hs.d, hs.n, v) for v in range(cfg.order + 1)]
    report = _report(cfg, {"n": hs.n, "f": hs.f.to_string(), "order": cfg.order}, result,
                     {"formula": "d^v*(2*d^(n-1)+1)", "bound": bound, "actual": actual})
    names = ["x", "y", "z"] if hs.n <= 3 else [f"x{i + 1}" for i in range(hs.n)]
    lines = [f"psi lifted to order {cfg.order} (modulo f^{cfg.order + 1})"]
    for name, x in zip(names, psi.xi):
        lines.append(f"  psi({name}) = " + " + ".join(f"({a})*f^{v}" for v, a in enumerate(x.coeffs)))
    lines.append(f"  digit degrees {actual} vs bound {bound}")
    return report, "\n".join(lines)


def _cmd_residue(cfg: RunConfig):
    hs = _hypersurface(cfg)
    omega = parse_form(cfg.form, hs.n, cfg.pole_order)
    if omega.pole_order < 1:
        raise UsageError("the form needs a pole along f: add '/ f^s' or --pole-order")
    cert = _certificate(cfg, hs)
    psi = build_psi(hs, cert, omega.pole_order, check_bounds=cfg.assert_bounds)
    tau = residue(hs, psi, omega, check_bounds=cfg.assert_bounds)
    bound = None
    if hs.d >= 3 and omega.numerator:
        bound = gysin_degree_bound(hs.d, hs.n, omega.pole_order, omega.degree(hs.d))
    actual = tau.degree if tau else None
    report = _report(cfg, {"n": hs.n, "f": hs.f.to_string(), "form": omega.to_json()}, tau.to_json(),
                     {"formula": "(2*d^n+d)^s*(deg(omega)+s*d)", "bound": bound, "actual": actual})
    return report, tau.to_string()


def _cmd_span(cfg: RunConfig):
    hs = _hypersurface(cfg)
    forms = spanning_set(hs, cfg.p)
    cert = _certificate(cfg, hs)
    psi = build_psi(hs, cert, cfg.p + 1, check_bounds=cfg.assert_bounds)
    taus = residues(hs, psi, forms, check_bounds=cfg.assert_bounds)
    bound = derham_degree_bound(hs.d, hs.n, cfg.p) if hs.d >= 3 else None
    degrees = [t.degree if t else None for t in taus]
    actual = max((d for d in degrees if d is not None), default=None)
    if cfg.assert_bounds and bound is not None and actual is not None and actual > bound:
        raise BoundViolation(f"spanning-set residue degree {actual} exceeds {bound}")
    result = [{"form": w.to_json(), "residue": t.to_json(), "degree": dg} for w, t, dg in zip(forms, taus, degrees)]
    report = _report(cfg, {"n": hs.n, "f": hs.f.to_string(), "p": cfg.p}, result,
                     {"formula": "(p+1)*(d+1)*(2*d^n+d)^(p+1)", "bound": bound, "actual": actual})
    lines = [f"{len(forms)} candidate forms for H^{cfg.p}"]
    lines += [f"  {w}  ->  {t}" for w, t in zip(forms, taus)]
    lines.append(f"  max residue degree {actual}, bound {bound}")
    return report, "\n".join(lines)


def _cmd_bounds(cfg: RunConfig):
    value = derham_degree_bound(cfg.d, cfg.nvars, cfg.p)
    result = {"derham": value}
    text = str(value)
    if cfg.pole_order is not None and cfg.deg_omega is not None:
        g = gysin_degree_bound(cfg.d, cfg.nvars, cfg.pole_order, cfg.deg_omega)
        result["gysin"] = g
        text += f"\ngysin bound (s={cfg.pole_order}, deg omega={cfg.deg_omega}): {g}"
    report = _report(cfg, {"d": cfg.d, "n": cfg.nvars, "p": cfg.p, "s": cfg.pole_order,
                           "deg_omega": cfg.deg_omega}, result,
                     {"formula": "(p+1)*(d+1)*(2*d^n+d)^(p+1)", "bound": value, "actual": None})
    return report, text


def _cmd_verify(cfg: RunConfig):
    from .oracle import run_checks

    checks = run_checks(cfg.seed)
    result = [{"check": name, "passed": ok, "detail": detail} for name, ok, detail in checks]
    report = _report(cfg, {"seed": cfg.seed}, result)
    text = "\n".join(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail and not ok else "")
                     for name, ok, detail in checks)
    if not all(ok for _, ok, _ in checks):
        raise MathFailure("verification failed", report)
    return report, text


_COMMANDS = {
    "certify": _cmd_certify,
    "lift": _cmd_lift,
    "residue": _cmd_residue,
    "span": _cmd_span,
    "bounds": _cmd_bounds,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> tuple[int, dict | None, str]:
    """Execute one command; returns ``(exit status, JSON report, text)``."""
    try:
        cfg.validate()
        report, text = _COMMANDS[cfg.command](cfg)
        return EXIT_OK, report, text
    except (UsageError, ParseError, CertificateError, CapacityError, OSError, json.JSONDecodeError) as exc:
        return EXIT_USAGE, None, f"error: {exc}"
    except ValueError as exc:
        return EXIT_USAGE, None, f"error: {exc}"
    except MathFailure as exc:
        return EXIT_MATH, exc.report, f"failure: {exc}" + (
            "\n" + "\n".join(f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']}" for c in exc.report["result"])
            if exc.report and cfg.command == "verify" else "")
    except BoundViolation as exc:
        return EXIT_MATH, None, f"bound violation: {exc}"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON report")
    common.add_argument("--out", metavar="PATH", help="write the report to PATH instead of stdout")
    common.add_argument("--cert", metavar="PATH", dest="cert_path", help="certificate JSON to use instead of searching")
    common.add_argument("--no-assert-bounds", action="store_false", dest="assert_bounds",
                        help="do not assert the proven degree bounds")

    surface = argparse.ArgumentParser(add_help=False)
    surface.add_argument("-n", type=int, dest="nvars", required=True, help="number of variables")
    surface.add_argument("-f", dest="f", required=True, help="hypersurface equation, e.g. 'x*y^2 - x - 1'")

    parser = argparse.ArgumentParser(prog="derham", description="Residue maps and de Rham cohomology generators "
                                     "of smooth affine hypersurfaces, in exact arithmetic.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("certify", parents=[common, surface], help="find a smoothness certificate")
    p = sub.add_parser("lift", parents=[common, surface], help="f-adic coefficients of psi(X_i)")
    p.add_argument("--order", type=int, default=2)
    p = sub.add_parser("residue", parents=[common, surface], help="residue of a form with a pole along f")
    p.add_argument("--form", required=True)
    p.add_argument("--pole-order", type=int, dest="pole_order")
    p = sub.add_parser("span", parents=[common, surface], help="spanning set for H^p and its residues")
    p.add_argument("-p", type=int, required=True)
    p = sub.add_parser("bounds", parents=[common], help="evaluate the degree-bound formulas")
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, dest="nvars", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--pole-order", type=int, dest="pole_order")
    p.add_argument("--deg-omega", type=int, dest="deg_omega")
    p = sub.add_parser("verify", parents=[common], help="run the oracle suites and regression fixtures")
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    status, report, text = run(cfg)
    if cfg.json and report is not None:
        payload = json.dumps(report, indent=2)
    else:
        payload = text
    if cfg.out and status != EXIT_USAGE:
        with open(cfg.out, "w") as fh:
            fh.write(payload + "\n")
    else:
        stream = sys.stderr if status == EXIT_USAGE else sys.stdout
        print(payload, file=stream)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
