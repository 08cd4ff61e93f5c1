"""Command-line surface: parse inputs, run verification suites, emit reports.

Commands: check, normal-form, jw, verify, boundary, ktheory, dims.
Each run emits a single JSON report (stdout, and ``--out`` if given) with a
fixed key order and floats printed at 17 significant digits, so reports are
byte-stable across runs.  Timings go to stderr, never into the report.
Decay tables are additionally written as CSV (columns n, value, value/q^n)
when ``--csv`` is given.

Exit codes: 0 all checks pass, 1 usage error, 2 check failure, 3 resource
limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import ktheory
from .errors import MemoryBudgetExceeded, TlsubError, UsageError
from .fock import (
    boundary_flatness,
    build_fock,
    commutator_norms,
    tail_projections,
    theta_map,
    verify_relations,
    word_matrix,
)
from .linalg import adjoint, kron, operator_norm
from .tl import (
    AntiLinearOp,
    invariants_of,
    normal_form,
    params_from_polynomial,
    tl_check,
    tl_relation_residuals,
)
from .wenzl import build_tower, dims_by_recurrence, q_integer, wenzl_defect
from .fock import psi_map

__all__ = ["main", "parse_input", "run_suite", "RunConfig", "Report"]

DEFAULT_TOL = 1e-9

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_FAIL = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    command: str
    coeffs: np.ndarray | None = None
    matrix: np.ndarray | None = None
    levels: int | None = None
    truncate: int = 10
    tol: float = DEFAULT_TOL
    m: int | None = None
    out: str | None = None
    csv: str | None = None


@dataclass
class Report:
    command: str
    input_echo: dict
    parameters: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    def add(self, name: str, value, threshold=None, passed=None):
        if passed is None and threshold is not None:
            passed = bool(value <= threshold)
        entry = {"name": name, "value": value}
        if threshold is not None:
            entry["threshold"] = threshold
        entry["pass"] = bool(passed) if passed is not None else True
        self.checks.append(entry)

    @property
    def all_pass(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_document(self) -> dict:
        return {
            "command": self.command,
            "input": self.input_echo,
            "parameters": self.parameters,
            "checks": self.checks,
            "tables": self.tables,
            "pass": self.all_pass,
        }


def _format_scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        return json.dumps(f"{x.real:.17g}{x.imag:+.17g}i")
    if x is None:
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    raise TypeError(f"cannot serialize {type(x)}")


def render_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {render_json(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _format_scalar(obj)


def parse_complex(token: str, flag: str = "--coeffs") -> complex:
    """Parse one coefficient written as re, imi or re+-imi (also j accepted)."""
    text = token.strip().replace("i", "j").replace("I", "j")
    if text.endswith("j") and not any(c.isdigit() for c in text[:-1]) and text[:-1] in ("", "+", "-"):
        text = text[:-1] + "1j"
    try:
        return complex(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: cannot parse complex token {token!r}") from exc


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--matrix: cannot read {path}: {exc}") from exc
    arr = np.asarray(raw, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise UsageError(
            f"--matrix: expected a square 2D array of [re, im] pairs, got shape {arr.shape}"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def _build_argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlsub",
        description="Temperley-Lieb subproduct system verification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("check", "validate the Temperley-Lieb condition and report scalar data"),
        ("normal-form", "canonical antidiagonal form of an anti-linear operator"),
        ("jw", "build the Jones-Wenzl tower and certify its invariants"),
        ("verify", "run the Fock-operator relation suite"),
        ("boundary", "theta/psi boundary identity and flatness decay"),
        ("ktheory", "fusion multiplicities, pairing matrix, K0"),
        ("dims", "fiber dimension sequence by the integer recurrence"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--coeffs", help="comma-separated coefficients, re+-imi tokens")
        p.add_argument("--matrix", help="path to JSON 2D array of [re, im] pairs")
        p.add_argument("--levels", type=int, help="Fock/tower truncation level N")
        p.add_argument("--truncate", type=int, default=10, help="K-theory truncation T")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--m", type=int, help="fiber dimension (dims/ktheory)")
        p.add_argument("--n", type=int, help="alias for --levels (dims)")
        p.add_argument("--out", help="write the JSON report to this path")
        p.add_argument("--csv", help="write the decay table to this path")
    return parser


def parse_input(argv) -> RunConfig:
    """Validate raw arguments into a RunConfig.

    Raises:
        UsageError: with a message naming the offending flag.
    """
    parser = _build_argparser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("invalid arguments") from None
        raise

    coeffs = None
    if ns.coeffs is not None:
        tokens = [t for t in ns.coeffs.split(",") if t.strip()]
        if len(tokens) < 2:
            raise UsageError("--coeffs: need at least two comma-separated values")
        coeffs = np.array([parse_complex(t) for t in tokens])
    matrix = _load_matrix(ns.matrix) if ns.matrix is not None else None

    needs_system = ns.command in ("check", "normal-form", "jw", "verify", "boundary")
    if needs_system:
        if (coeffs is None) == (matrix is None):
            raise UsageError(
                f"{ns.command}: exactly one of --coeffs / --matrix is required"
            )
    if ns.command == "normal-form" and matrix is None:
        raise UsageError("normal-form: requires --matrix input")
    if ns.command == "dims" and ns.m is None:
        raise UsageError("dims: requires --m")
    if ns.truncate < 1:
        raise UsageError("--truncate: must be at least 1")
    if ns.tol <= 0:
        raise UsageError("--tol: must be positive")

    levels = ns.levels if ns.levels is not None else ns.n
    return RunConfig(
        command=ns.command,
        coeffs=coeffs,
        matrix=matrix,
        levels=levels,
        truncate=ns.truncate,
        tol=ns.tol,
        m=ns.m,
        out=ns.out,
        csv=ns.csv,
    )


def _system_of(config: RunConfig):
    """TLSystem from coeffs, or via the normal form of a matrix input."""
    if config.coeffs is not None:
        return params_from_polynomial(config.coeffs)
    coeffs, _ = normal_form(AntiLinearOp(config.matrix))
    return params_from_polynomial(coeffs)


def _default_levels(m: int) -> int:
    if m == 2:
        return 6
    if m == 3:
        return 5
    return 4


def _echo(config: RunConfig) -> dict:
    echo: dict = {"command": config.command, "tol": config.tol}
    if config.coeffs is not None:
        echo["coeffs"] = [complex(c) for c in config.coeffs]
    if config.matrix is not None:
        echo["matrix_dim"] = int(config.matrix.shape[0])
    if config.levels is not None:
        echo["levels"] = config.levels
    if config.command == "ktheory":
        echo["truncate"] = config.truncate
    if config.m is not None:
        echo["m"] = config.m
    return echo


def _system_parameters(system) -> dict:
    return {
        "m": system.m,
        "lambda": system.lam,
        "q": system.q,
        "t": system.t,
        "tau": system.tau,
    }


def _decay_table(rows: list[tuple[int, float, float]]) -> list[dict]:
    return [{"n": n, "value": v, "value_over_q_n": r} for n, v, r in rows]


def _run_check(config: RunConfig, report: Report) -> None:
    if config.matrix is not None:
        op = AntiLinearOp(config.matrix)
        alpha, lam = tl_check(op)
        report.parameters["alpha"] = alpha
        inv = invariants_of(op)
        report.tables["invariants"] = [
            {"beta": beta, "z": [complex(z) for z in zs]} for beta, zs in inv.pairs
        ]
    system = _system_of(config)
    report.parameters.update(_system_parameters(system))
    r1, r2 = tl_relation_residuals(system)
    report.add("tl_relation_left", r1, config.tol)
    report.add("tl_relation_right", r2, config.tol)


def _run_normal_form(config: RunConfig, report: Report) -> None:
    op = AntiLinearOp(config.matrix)
    coeffs, basis = normal_form(op)
    system = params_from_polynomial(coeffs)
    report.parameters.update(_system_parameters(system))
    report.tables["coeffs"] = [complex(c) for c in coeffs]
    report.tables["basis"] = [
        [[float(z.real), float(z.imag)] for z in row] for row in basis
    ]
    m = len(coeffs)
    anti = np.zeros((m, m), dtype=complex)
    for i, c in enumerate(coeffs):
        anti[m - 1 - i, i] = c
    alpha, _ = tl_check(op)
    rescaled = op.matrix / alpha**0.25
    resid = operator_norm(adjoint(basis) @ rescaled @ np.conj(basis) - anti)
    report.add("reconstruction", resid, max(config.tol, 1e-8))
    report.add("basis_unitary", operator_norm(adjoint(basis) @ basis - np.eye(m)), config.tol)


def _run_jw(config: RunConfig, report: Report) -> None:
    system = _system_of(config)
    report.parameters.update(_system_parameters(system))
    n_max = config.levels if config.levels is not None else _default_levels(system.m)
    tower = build_tower(system, n_max)
    m = system.m

    report.tables["dims"] = list(tower.dims)
    expected = dims_by_recurrence(m, n_max)
    report.add("rank_vs_recurrence", 0 if tower.dims == expected else 1, 0)

    worst_kill = 0.0
    for n in range(2, n_max + 1):
        for i in range(n - 1):
            shifted = kron(np.eye(m**i), kron(system.e, np.eye(m ** (n - i - 2))))
            worst_kill = max(worst_kill, operator_norm(tower.f[n] @ shifted))
    report.add("defining_property", worst_kill, max(config.tol, 1e-8))

    worst_trace = max(
        abs(float(np.trace(tower.f[n]).real) - tower.dims[n]) for n in range(n_max + 1)
    )
    report.add("trace_vs_rank", worst_trace, 1e-6)

    worst_mono = 0.0
    for n in range(1, n_max):
        upper = kron(np.eye(m), tower.f[n])
        lower = kron(tower.f[n], np.eye(m))
        worst_mono = max(
            worst_mono,
            operator_norm((np.eye(m ** (n + 1)) - upper) @ tower.f[n + 1]),
            operator_norm((np.eye(m ** (n + 1)) - lower) @ tower.f[n + 1]),
        )
    report.add("monotonicity", worst_mono, max(config.tol, 1e-8))

    rows = []
    for n in range(1, n_max):
        d = wenzl_defect(tower, n)
        rows.append((n, d, d / system.q**n))
    report.tables["wenzl_defect"] = _decay_table(rows)
    if rows:
        report.add("defect_ratio_bounded", max(r for _, _, r in rows), 4.0 * rows[0][2])


def _run_verify(config: RunConfig, report: Report) -> None:
    system = _system_of(config)
    report.parameters.update(_system_parameters(system))
    n_max = config.levels if config.levels is not None else _default_levels(system.m)
    space, ops = build_fock(system, n_max)
    rel = verify_relations(ops, config.tol)
    for name, value in rel.residuals.items():
        report.add(name, value, config.tol)

    p = tail_projections(ops)
    worst_split = max(
        space.compressed_norm(p[n] - p[n + 1] - ops.E[n]) for n in range(n_max)
    )
    worst_shift = max(
        space.compressed_norm(p[n + 1] @ s - s @ p[n]) for n in range(n_max) for s in ops.S
    )
    report.add("tail_split", worst_split, config.tol)
    report.add("tail_shift", worst_shift, config.tol)

    total_r = sum(r @ adjoint(r) for r in ops.R)
    report.add(
        "right_vacuum_complement",
        space.compressed_norm(total_r - (np.eye(space.dim) - ops.E[0])),
        config.tol,
    )

    rows = []
    c1_worst = 0.0
    for n in range(0, n_max):
        c1, c2 = commutator_norms(ops, n)
        c1_worst = max(c1_worst, c1)
        rows.append((n, c2, c2 / system.q**n))
    report.add("left_right_commute", c1_worst, config.tol)
    report.tables["adjoint_commutator"] = _decay_table(rows)
    if len(rows) > 1:
        ratios = [r for _, _, r in rows[1:]]
        report.add("commutator_ratio_bounded", max(ratios), 4.0 * ratios[0])


def _run_boundary(config: RunConfig, report: Report) -> None:
    system = _system_of(config)
    report.parameters.update(_system_parameters(system))
    n_max = config.levels if config.levels is not None else _default_levels(system.m)
    space, ops = build_fock(system, n_max)
    tower = space.tower

    worst = 0.0
    for word in ([1, -1], [-1, 1]):
        x = word_matrix(ops, word)
        cur = x.copy()
        for k in range(1, n_max):
            cur = theta_map(ops, cur)
            for n in range(0, n_max - k):
                got = space.block(cur, n + k)
                want = psi_map(tower, n, k, space.block(x, n))
                worst = max(worst, operator_norm(got - want))
    report.add("theta_psi_identity", worst, config.tol)

    probe = word_matrix(ops, [-1, 1])  # S1* S1 carries genuine phi(n) decay
    rows = []
    for n0 in range(0, n_max - 1):
        fl = boundary_flatness(ops, probe, n0)
        rows.append((n0, fl, fl / system.q**n0))
    report.tables["flatness"] = _decay_table(rows)
    if len(rows) > 1:
        report.add("flatness_decays", rows[-1][1], max(rows[0][1], config.tol))


def _run_ktheory(config: RunConfig, report: Report) -> None:
    t_max = config.truncate
    kp = ktheory.pi_star_matrix(t_max)
    report.add("closed_vs_multiplicity", 0, 0)  # pi_star_matrix raises on mismatch
    report.add("triangular_pattern", 0 if kp.is_triangular() else 1, 0)
    dets = [ktheory.pi_star_matrix(t).determinant() for t in range(1, t_max + 1)]
    report.tables["determinants"] = [
        {"T": t + 1, "det": d} for t, d in enumerate(dets)
    ]
    report.add("unimodular", 0 if all(abs(d) == 1 for d in dets) else 1, 0)
    ms = [config.m] if config.m is not None else [2, 3, 4, 5]
    report.tables["k0"] = [{"m": m, "group": str(ktheory.k0_order(m))} for m in ms]
    report.tables["pairing_matrix"] = [[int(x) for x in row] for row in kp.entries]


def _run_dims(config: RunConfig, report: Report) -> None:
    m = config.m
    n_max = config.levels if config.levels is not None else 8
    dims = dims_by_recurrence(m, n_max)
    report.parameters["m"] = m
    report.tables["dims"] = dims
    t = params_from_polynomial(np.ones(m)).t
    report.parameters["t"] = t
    worst = max(abs(q_integer(n + 1, t) - d) for n, d in enumerate(dims))
    report.add("recurrence_vs_q_integer", worst, 1e-6)


_RUNNERS = {
    "check": _run_check,
    "normal-form": _run_normal_form,
    "jw": _run_jw,
    "verify": _run_verify,
    "boundary": _run_boundary,
    "ktheory": _run_ktheory,
    "dims": _run_dims,
}


def run_suite(config: RunConfig) -> Report:
    """Execute the configured command and return its report."""
    report = Report(command=config.command, input_echo=_echo(config))
    _RUNNERS[config.command](config, report)
    return report


def _write_outputs(config: RunConfig, report: Report) -> None:
    text = render_json(report.to_document()) + "\n"
    sys.stdout.write(text)
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text)
    if config.csv:
        table = None
        for key in ("wenzl_defect", "adjoint_commutator", "flatness"):
            if key in report.tables:
                table = report.tables[key]
                break
        if table is not None:
            with open(config.csv, "w") as fh:
                fh.write("n,value,value_over_q_n\n")
                for row in table:
                    fh.write(
                        f"{row['n']},{row['value']:.17g},{row['value_over_q_n']:.17g}\n"
                    )


def main(argv=None) -> int:
    started = time.perf_counter()
    try:
        config = parse_input(argv if argv is not None else sys.argv[1:])
    except UsageError as exc:
        print(f"tlsub: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        report = run_suite(config)
    except MemoryBudgetExceeded as exc:
        print(f"tlsub: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except TlsubError as exc:
        report = Report(command=config.command, input_echo=_echo(config))
        report.add(f"error:{type(exc).__name__}", str(exc), passed=False)
        _write_outputs(config, report)
        print(f"tlsub: {exc}", file=sys.stderr)
        return EXIT_FAIL

    _write_outputs(config, report)
    elapsed = time.perf_counter() - started
    print(f"tlsub: {config.command} finished in {elapsed:.2f}s", file=sys.stderr)
    return EXIT_PASS if report.all_pass else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
