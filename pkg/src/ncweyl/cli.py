"""Command-line driver: solvers, representation verifiers, and phase scans.

Subcommands
-----------
darboux     solve + normalize + invert for one parameter point, with
            canonical-form and round-trip checks
verify-rep  build the operator-space representation (gamma = 0) or the
            realized noncommutative one (gamma != 0) and measure all
            commutator defects and vacuum multiplicities
weyl        symbolic phase form vs the per-phase closed form, plus the
            numeric phase-defect convergence scan
intertwine  constructive equivalence checks: self, planted-unitary
            recovery, and the map round trip
scan        phase diagram over a (theta, gamma) grid as JSON lines

Exit codes: 0 all checks pass, 1 check failure, 2 critical line, 64 usage
error.  Reports are JSON objects {"params", "phase", "checks", "artifacts"}
(plus "timestamp" unless --no-timestamp); every check entry carries
{"name", "defect", "tolerance", "pass"}.  A check that errored instead of
measuring carries defect -1.0 and the error message in its details.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from ._backend import backend_name, kernels
from .algebra import (
    DEFAULT_CRITICAL_TOL,
    AlgebraParams,
    Phase,
    classify,
    structure_matrix,
    transform_structure,
)
from .convergence import convergence_violation, phase_convergence
from .darboux import Branch, invert, normalize, solve
from .errors import BasisBreakdown, CriticalLine, NCWeylError
from .fock import (
    DefectReport,
    FockRep,
    FockSpace,
    commutator_defect,
    hermiticity_defect,
    intertwiner,
    random_unitary,
    realize_nc,
    two_mode_canonical,
    hs_rep,
    vacuum_space,
)

USAGE_ERROR = 64

_PAIR_LABELS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class _Parser(argparse.ArgumentParser):
    """argparse with the package's usage-error exit code."""

    def error(self, message):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> _Parser:
    parser = _Parser(prog="ncweyl", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"ncweyl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theta", type=float, default=1.0)
    common.add_argument("--gamma", type=float, default=0.0)
    common.add_argument("--hbar", type=float, default=1.0)
    common.add_argument("--branch", choices=["plus", "minus"], default="minus")
    common.add_argument("--tol-critical", type=float, default=DEFAULT_CRITICAL_TOL)
    common.add_argument("--tol-defect", type=float, default=None,
                        help="override the per-command default check tolerance")
    common.add_argument("--tol-vacuum", type=float, default=0.1)
    common.add_argument("--seed", type=int, default=1234)
    common.add_argument("--output", type=str, default=None)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--no-timestamp", action="store_true")

    p = sub.add_parser("darboux", parents=[common],
                       help="reduce one parameter point to canonical form")

    p = sub.add_parser("verify-rep", parents=[common],
                       help="verify a matrix realization of the algebra")
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--margin", type=int, default=2)

    p = sub.add_parser("weyl", parents=[common],
                       help="check the Weyl phase forms and their convergence")
    p.add_argument("--alpha", type=float, nargs=2, default=[0.1, 0.0], metavar=("A1", "A2"))
    p.add_argument("--beta", type=float, nargs=2, default=[0.1, 0.0], metavar=("B1", "B2"))
    p.add_argument("--dims", type=int, nargs="+", default=[16, 32, 64])
    p.add_argument("--margin", type=int, default=2)
    p.add_argument("--flip-phase-sign", action="store_true",
                   help="negative control: flip the phase sign in the numeric check")

    p = sub.add_parser("intertwine", parents=[common],
                       help="constructive uniqueness checks via intertwiners")
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--n-interior", type=int, default=8)
    p.add_argument("--trials", type=int, default=3)

    p = sub.add_parser("scan", parents=[common],
                       help="phase diagram over a (theta, gamma) grid")
    p.add_argument("--theta-range", type=float, nargs=3, default=[0.1, 4.0, 40],
                   metavar=("LO", "HI", "STEPS"))
    p.add_argument("--gamma-range", type=float, nargs=3, default=[0.1, 4.0, 40],
                   metavar=("LO", "HI", "STEPS"))
    return parser


def _params_from(args, parser) -> AlgebraParams:
    if args.theta < 0:
        parser.error(f"--theta must be >= 0, got {args.theta}")
    if args.hbar <= 0:
        parser.error(f"--hbar must be > 0, got {args.hbar}")
    return AlgebraParams(theta=args.theta, gamma=args.gamma, hbar=args.hbar)


def _branch_from(args) -> Branch:
    return Branch.PLUS if args.branch == "plus" else Branch.MINUS


def _error_check(name: str, message: str, tolerance: float = 0.0) -> DefectReport:
    return DefectReport(name=name, defect=-1.0, tolerance=tolerance, passed=False,
                        details={"error": message})


def make_report(params: AlgebraParams, phase: Phase, checks: list[DefectReport],
                artifacts: dict, with_timestamp: bool) -> dict:
    report = {
        "params": {"theta": params.theta, "gamma": params.gamma, "hbar": params.hbar},
        "phase": phase.value,
        "checks": [c.to_dict() for c in checks],
        "artifacts": artifacts,
    }
    if with_timestamp:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return report


def render_text(report: dict) -> str:
    lines = []
    p = report["params"]
    lines.append(f"params: theta={p['theta']} gamma={p['gamma']} hbar={p['hbar']}")
    lines.append(f"phase: {report['phase']}")
    for c in report["checks"]:
        verdict = "PASS" if c["pass"] else "FAIL"
        lines.append(
            f"check {c['name']}: defect={c['defect']:.6e} tolerance={c['tolerance']:.3e} {verdict}"
        )
    for key, value in report["artifacts"].items():
        if isinstance(value, (int, float, str, bool)) or value is None:
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    if "timestamp" in report:
        lines.append(f"timestamp: {report['timestamp']}")
    return "\n".join(lines) + "\n"


def _emit(report: dict, args) -> None:
    text = render_text(report) if args.format == "text" else json.dumps(report, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _exit_code(checks: list[DefectReport]) -> int:
    return 0 if all(c.passed for c in checks) else 1


def cmd_darboux(args, parser) -> int:
    params = _params_from(args, parser)
    phase = classify(params, args.tol_critical)
    tol = args.tol_defect if args.tol_defect is not None else 1e-10
    dmap = solve(params, _branch_from(args), args.tol_critical)
    omega = structure_matrix(params)
    prime = transform_structure(dmap.matrix, omega)
    sigma_measured = 0.5 * (prime[0, 2] + prime[1, 3])
    pattern = np.zeros((4, 4))
    pattern[0, 2] = pattern[1, 3] = sigma_measured
    pattern -= pattern.T
    checks = [
        DefectReport(
            "canonical_form",
            float(np.max(np.abs(prime - pattern)) / max(1.0, abs(sigma_measured))),
            tol,
            bool(np.max(np.abs(prime - pattern)) <= tol * max(1.0, abs(sigma_measured))),
            {"sigma_measured": float(sigma_measured)},
        ),
        _defect_check(
            "sigma_closed_form",
            abs(sigma_measured - dmap.sigma) / max(1.0, abs(dmap.sigma)),
            tol,
            sigma_closed=dmap.sigma,
        ),
    ]
    normalized = normalize(dmap, params.hbar)
    prime_n = transform_structure(normalized.matrix, omega)
    sigma_n = 0.5 * (prime_n[0, 2] + prime_n[1, 3])
    checks.append(_defect_check(
        "normalized_sigma", abs(sigma_n - params.hbar) / params.hbar, tol,
        target=params.hbar,
    ))
    inverse = invert(normalized)
    checks.append(_defect_check(
        "invert_residual", float(np.max(np.abs(normalized.matrix @ inverse - np.eye(4)))), tol,
    ))
    canonical = params.hbar * np.array(
        [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=float
    )
    recovered = transform_structure(inverse, canonical)
    checks.append(_defect_check(
        "round_trip",
        float(np.max(np.abs(recovered - omega.omega)) / max(1.0, params.hbar)),
        tol,
    ))
    artifacts = {
        "case": dmap.case.value,
        "branch": dmap.branch.value,
        "a": dmap.a,
        "b": dmap.b,
        "sigma": dmap.sigma,
        "sigma_normalized": normalized.sigma,
        "delta": params.delta(),
        "matrix": dmap.matrix.tolist(),
        "matrix_normalized": normalized.matrix.tolist(),
        "inverse_normalized": inverse.tolist(),
    }
    _emit(make_report(params, phase, checks, artifacts, not args.no_timestamp), args)
    return _exit_code(checks)


def _defect_check(name: str, defect: float, tolerance: float, **details) -> DefectReport:
    return DefectReport(name, float(defect), float(tolerance),
                        bool(defect <= tolerance), details)


def _commutator_checks(rep: FockRep, params: AlgebraParams, margin: int,
                       tol: float) -> list[DefectReport]:
    omega = structure_matrix(params).omega
    checks = []
    for i, j in _PAIR_LABELS:
        checks.append(commutator_defect(rep, (i, j), 1j * omega[i, j], margin, tol))
    return checks


def cmd_verify_rep(args, parser) -> int:
    if args.dim < 4:
        parser.error(f"--dim must be >= 4, got {args.dim}")
    if args.margin < 1:
        parser.error(f"--margin must be >= 1, got {args.margin}")
    params = _params_from(args, parser)
    phase = classify(params, args.tol_critical)
    space = FockSpace(args.dim)
    dmap = solve(params, _branch_from(args), args.tol_critical)
    artifacts: dict = {"dim": args.dim, "margin": args.margin, "case": dmap.case.value}
    if params.gamma == 0.0 and params.theta > 0.0:
        tol = args.tol_defect if args.tol_defect is not None else 1e-10
        rep = hs_rep(space, params.theta, params.hbar)
        artifacts["representation"] = "operator_space"
        # canonical pair reconstructed through the map: multiplicity of the
        # standard one-mode representation inside the operator space
        rows = dmap.matrix
        pair = FockRep(
            generators=(
                sum(rows[0, j] * rep.generators[j] for j in range(4)),
                sum(rows[2, j] * rep.generators[j] for j in range(4)),
            ),
            names=("y1", "q1"),
            factors=rep.factors,
            sigma=dmap.sigma,
        )
        _, pair_count = vacuum_space(pair, dmap.sigma, args.tol_vacuum)
        full = FockRep(
            generators=tuple(
                sum(rows[i, j] * rep.generators[j] for j in range(4)) for i in range(4)
            ),
            names=("y1", "y2", "q1", "q2"),
            factors=rep.factors,
            sigma=dmap.sigma,
        )
        _, joint_count = vacuum_space(full, dmap.sigma, args.tol_vacuum)
        artifacts["vacuum_pair_multiplicity"] = pair_count
        artifacts["vacuum_joint_multiplicity"] = joint_count
        artifacts["vacuum_tol"] = args.tol_vacuum
    else:
        tol = args.tol_defect if args.tol_defect is not None else 1e-9
        normalized = normalize(dmap, params.hbar)
        canonical = two_mode_canonical(space, normalized.sigma)
        rep = realize_nc(normalized, canonical)
        artifacts["representation"] = "realized_noncommutative"
        _, joint_count = vacuum_space(canonical, normalized.sigma, args.tol_vacuum)
        artifacts["vacuum_joint_multiplicity"] = joint_count
        artifacts["vacuum_tol"] = args.tol_vacuum
    checks = _commutator_checks(rep, params, args.margin, tol)
    for name, herm in hermiticity_defect(rep).items():
        checks.append(_defect_check(f"hermiticity_{name}", herm, 1e-12))
    _emit(make_report(params, phase, checks, artifacts, not args.no_timestamp), args)
    return _exit_code(checks)


def cmd_weyl(args, parser) -> int:
    from .weyl import phase_form_negative, phase_form_positive, weyl_phase

    if any(d < 4 for d in args.dims) or len(args.dims) < 2:
        parser.error("--dims needs at least two values >= 4")
    params = _params_from(args, parser)
    phase = classify(params, args.tol_critical)
    if phase is Phase.CRITICAL:
        raise CriticalLine("the phase form is degenerate on the critical line")
    tol = args.tol_defect if args.tol_defect is not None else 1e-4
    dmap = solve(params, _branch_from(args), args.tol_critical)
    symbolic = weyl_phase(dmap, args.alpha, args.beta)
    if dmap.case.value == "negative_delta":
        printed = phase_form_negative(params, args.alpha, args.beta)
    elif dmap.case.value == "positive_delta":
        printed = phase_form_positive(params, dmap.branch, args.alpha, args.beta)
    else:
        printed = -dmap.sigma * float(np.dot(args.alpha, args.beta))
    checks = [
        _defect_check(
            "phase_identity",
            abs(symbolic - printed) / max(1.0, abs(printed)),
            1e-10,
            symbolic=symbolic,
            closed_form=printed,
        )
    ]
    normalized = normalize(dmap, params.hbar)
    reports = phase_convergence(
        args.dims, args.alpha, args.beta, normalized.sigma,
        dmap=normalized, flip_sign=args.flip_phase_sign,
        margin=args.margin, tolerance=tol,
    )
    checks.extend(reports)
    defects = [r.defect for r in reports]
    checks.append(_defect_check(
        "phase_convergence", convergence_violation(defects), 0.1,
        defects=defects, dims=sorted(args.dims),
    ))
    artifacts = {
        "alpha": list(args.alpha),
        "beta": list(args.beta),
        "sigma": dmap.sigma,
        "omega_symbolic": symbolic,
        "omega_closed_form": printed,
        "omega_numeric": -normalized.sigma * float(np.dot(args.alpha, args.beta)),
        "flipped": bool(args.flip_phase_sign),
    }
    _emit(make_report(params, phase, checks, artifacts, not args.no_timestamp), args)
    return _exit_code(checks)


def cmd_intertwine(args, parser) -> int:
    if args.dim < 4:
        parser.error(f"--dim must be >= 4, got {args.dim}")
    if args.n_interior < 1:
        parser.error(f"--n-interior must be >= 1, got {args.n_interior}")
    params = _params_from(args, parser)
    phase = classify(params, args.tol_critical)
    if phase is Phase.CRITICAL:
        raise CriticalLine("representation uniqueness is not guaranteed on the critical line")
    tol = args.tol_defect if args.tol_defect is not None else 1e-8
    rng = np.random.default_rng(args.seed)
    space = FockSpace(args.dim)
    canonical = two_mode_canonical(space, params.hbar)
    checks = []
    try:
        self_res = intertwiner(canonical, canonical, params.hbar, args.n_interior,
                               args.tol_vacuum)
        checks.append(_defect_check("self_equivalence", self_res.residual, 1e-12,
                                    unitarity=self_res.unitarity_defect))
    except (BasisBreakdown, NCWeylError) as exc:
        checks.append(_error_check("self_equivalence", str(exc), 1e-12))
    worst = 0.0
    for trial in range(args.trials):
        t = random_unitary(canonical.dim, rng)
        conjugated = FockRep(
            generators=tuple(t @ g @ t.conj().T for g in canonical.generators),
            names=canonical.names,
            factors=canonical.factors,
            sigma=canonical.sigma,
        )
        try:
            res = intertwiner(canonical, conjugated, params.hbar, args.n_interior,
                              args.tol_vacuum)
            worst = max(worst, res.residual)
        except (BasisBreakdown, NCWeylError) as exc:
            checks.append(_error_check(f"plant_and_recover_{trial}", str(exc), tol))
            worst = math.inf
    if math.isfinite(worst):
        checks.append(_defect_check("plant_and_recover", worst, tol, trials=args.trials))
    dmap = normalize(solve(params, _branch_from(args), args.tol_critical), params.hbar)
    realized = realize_nc(dmap, canonical)
    rows = dmap.matrix
    round_trip = FockRep(
        generators=tuple(
            sum(rows[i, j] * realized.generators[j] for j in range(4)) for i in range(4)
        ),
        names=canonical.names,
        factors=canonical.factors,
        sigma=dmap.sigma,
    )
    try:
        rt = intertwiner(canonical, round_trip, params.hbar, args.n_interior, args.tol_vacuum)
        checks.append(_defect_check("round_trip", rt.residual, tol,
                                    unitarity=rt.unitarity_defect))
    except (BasisBreakdown, NCWeylError) as exc:
        checks.append(_error_check("round_trip", str(exc), tol))
    artifacts = {
        "dim": args.dim,
        "n_interior": args.n_interior,
        "trials": args.trials,
        "seed": args.seed,
        "case": dmap.case.value,
    }
    _emit(make_report(params, phase, checks, artifacts, not args.no_timestamp), args)
    return _exit_code(checks)


def cmd_scan(args, parser) -> int:
    t_lo, t_hi, t_steps = args.theta_range
    g_lo, g_hi, g_steps = args.gamma_range
    t_steps, g_steps = int(t_steps), int(g_steps)
    if not (t_lo < t_hi and g_lo < g_hi):
        parser.error("ranges need lo < hi")
    if t_steps < 2 or g_steps < 2:
        parser.error("ranges need steps >= 2")
    if t_lo < 0:
        parser.error(f"theta range must be >= 0, got lo={t_lo}")
    if args.hbar <= 0:
        parser.error(f"--hbar must be > 0, got {args.hbar}")
    thetas = np.linspace(t_lo, t_hi, t_steps)
    gammas = np.linspace(g_lo, g_hi, g_steps)
    delta, code, sig_plus, sig_minus = kernels.scan_grid(
        np.ascontiguousarray(thetas), np.ascontiguousarray(gammas),
        args.hbar, args.tol_critical, 1e-8,
    )
    phase_names = {1: Phase.POSITIVE_DELTA.value, -1: Phase.NEGATIVE_DELTA.value,
                   0: Phase.CRITICAL.value}
    lines = []
    for it in range(t_steps):
        for ig in range(g_steps):
            k = it * g_steps + ig
            record = {
                "theta": float(thetas[it]),
                "gamma": float(gammas[ig]),
                "hbar": args.hbar,
                "delta": float(delta[k]),
                "phase": phase_names[int(code[k])],
                "sigma_plus": None if math.isnan(sig_plus[k]) else float(sig_plus[k]),
                "sigma_minus": None if math.isnan(sig_minus[k]) else float(sig_minus[k]),
                "nondegenerate": int(code[k]) != 0,
            }
            lines.append(json.dumps(record))
    payload = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "darboux": cmd_darboux,
        "verify-rep": cmd_verify_rep,
        "weyl": cmd_weyl,
        "intertwine": cmd_intertwine,
        "scan": cmd_scan,
    }
    try:
        return handlers[args.command](args, parser)
    except CriticalLine as exc:
        params = AlgebraParams(theta=args.theta, gamma=args.gamma, hbar=args.hbar)
        report = make_report(
            params, Phase.CRITICAL, [],
            {"error": "critical_line", "condition": "hbar^2 = gamma*theta",
             "detail": str(exc), "backend": backend_name()},
            not args.no_timestamp,
        )
        _emit(report, args)
        return 2
    except NCWeylError as exc:
        sys.stderr.write(f"ncweyl: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"ncweyl: i/o error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
