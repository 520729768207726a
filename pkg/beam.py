import argparse
import ast
import json
import logging
import sys
import time
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from config.beam_config import DEFAULT_LOG_LEVEL, get_solver_config
from utils.boundary_utils import NAMED_CONDITIONS, BoundaryCondition, greens_matrices, is_wellposed, named_bc, tilde
from utils.errors import SchemaError
from utils.existence_utils import construct_bc_for_eigenvalue, eigenvalue_one_residual
from utils.greens_utils import GridFunction, beam_rule, kernel_matrix, solve_bvp
from utils.json_utils import (
    bc_from_json,
    bc_to_json,
    complex_to_pair,
    dumps,
    grid_function_to_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    nystrom_eigenvalue_to_json,
    pair_to_complex,
    params_from_json,
    params_to_json,
    spectral_point_to_json,
)
from utils.matrix_utils import BeamParams
from utils.nystrom_utils import nystrom_spectrum, operator_profile
from utils.representation_utils import gamma, gamma_inverse, gamma_inverse_real
from utils.spectral_utils import (
    X_matrix,
    Y_matrix,
    scan_complex_spectrum,
    scan_real_spectrum,
    singular_ratio,
    spec_Q,
)

# Numbered invariant checks, run in order by `verify`
from checks import COLUMNS
from checks import c_01_structured_constants as c01
from checks import c_02_wronskian as c02
from checks import c_03_pibar_algebra as c03
from checks import c_04_boundary_q as c04
from checks import c_05_greens_kernel as c05
from checks import c_06_solution_property as c06
from checks import c_07_representation as c07
from checks import c_08_x_symmetries as c08
from checks import c_09_degenerate_branch as c09
from checks import c_10_spec_q as c10
from checks import c_11_existence as c11

logger = logging.getLogger("beam")

CSV_COLUMNS = ["n", "lambda", "k_lambda", "residual"]

# Functions allowed in `solve` load expressions of the form {"kind": "expr-grid", "expr": "..."}
EXPRESSION_NAMESPACE = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "log": np.log,
    "sqrt": np.sqrt, "abs": np.abs, "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "pi": np.pi, "where": np.where,
}

EXPRESSION_NODES = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Compare, ast.Call, ast.Name, ast.Load, ast.Constant,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.Mod, ast.FloorDiv, ast.USub, ast.UAdd,
    ast.Lt, ast.LtE, ast.Gt, ast.GtE, ast.Eq, ast.NotEq,
)


def compile_expression(expression: str):
    """Compile an arithmetic expression in x over EXPRESSION_NAMESPACE.

    Raises:
        SchemaError: On syntax errors, unknown names, attribute access or
            any construct other than arithmetic, comparisons and calls of
            namespace functions.
    """
    try:
        tree = ast.parse(expression, mode="eval")
    except SyntaxError as error:
        raise SchemaError(f"load expression {expression!r} does not parse: {error.msg}")
    for node in ast.walk(tree):
        if not isinstance(node, EXPRESSION_NODES):
            raise SchemaError(f"load expression {expression!r} uses {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id != "x" and node.id not in EXPRESSION_NAMESPACE:
            raise SchemaError(f"load expression {expression!r} uses unknown name {node.id!r}")
        if isinstance(node, ast.Call) and (not isinstance(node.func, ast.Name) or node.keywords):
            raise SchemaError(f"load expression {expression!r} calls something other than a namespace function")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float, complex)):
            raise SchemaError(f"load expression {expression!r} has a non-numeric constant")
    return compile(tree, "<load>", "eval")


def load_checks() -> List[Callable[[pd.DataFrame, BeamParams], pd.DataFrame]]:
    """
    Load and return the invariant checks in the order they should be run.
    """
    return [
        c01.check,  # Structured constants
        c02.check,  # Wronskian inverse and reflections
        c03.check,  # pi-bar algebra
        c04.check,  # Condition Q and Green's blocks
        c05.check,  # Kernel of Q
        c06.check,  # Solution property
        c07.check,  # Gamma representation
        c08.check,  # X_lambda symmetries
        c09.check,  # lambda = 1/k branch
        c10.check,  # Spec K_Q
        c11.check,  # Prescribed eigenvalues (slowest, keep last)
    ]


def read_request(args) -> Dict[str, Any]:
    """JSON document given with --input, or an empty request."""
    if getattr(args, "input", None) is None:
        return {}
    request = load_json(args.input)
    if not isinstance(request, dict):
        raise SchemaError(f"{args.input}: expected a JSON object")
    return request


def resolve_params(args, request: Dict[str, Any]) -> BeamParams:
    """Flags take precedence over the request's params, which take precedence over the defaults."""
    merged = BeamParams.defaults().to_dict()
    if "params" in request:
        merged.update(params_from_json(request["params"]).to_dict())
    for name in ("l", "alpha", "k"):
        value = getattr(args, name, None)
        if value is not None:
            merged[name] = value
    return BeamParams.from_dict(merged)


def resolve_bc(args, request: Dict[str, Any], params: BeamParams) -> BoundaryCondition:
    if getattr(args, "named", None):
        return named_bc(args.named, params)
    if getattr(args, "bc", None):
        return bc_from_json(load_json(args.bc))
    if "bc" in request:
        return bc_from_json(request["bc"])
    raise SchemaError("a boundary condition is required (--bc FILE, --named NAME or 'bc' in --input)")


def pick(args, request: Dict[str, Any], name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return request.get(name, default)


def csv_number(value: complex):
    value = complex(value)
    return value.real if value.imag == 0 else str(value)


def spectrum_frame(rows) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=CSV_COLUMNS)


def run_wellposed(args, params: BeamParams, request: Dict[str, Any]):
    bc = resolve_bc(args, request, params)
    return {
        "wellposed": is_wellposed(bc, params),
        "det_tilde": complex_to_pair(tilde(bc, params).det_tilde),
    }


def run_greens(args, params: BeamParams, request: Dict[str, Any]):
    bc = resolve_bc(args, request, params)
    rep = greens_matrices(bc, params)
    grid = np.linspace(-params.l, params.l, args.points)
    return {
        "G_minus": matrix_to_json(rep.g_minus),
        "G_plus": matrix_to_json(rep.g_plus),
        "grid": [float(x) for x in grid],
        "kernel": matrix_to_json(kernel_matrix(bc, params, grid, grid, rep)),
    }


def run_gamma(args, params: BeamParams, request: Dict[str, Any]):
    return matrix_to_json(gamma(resolve_bc(args, request, params), params))


def run_gamma_inverse(args, params: BeamParams, request: Dict[str, Any]):
    if args.matrix is not None:
        G = matrix_from_json(load_json(args.matrix))
    elif "G" in request:
        G = matrix_from_json(request["G"])
    else:
        raise SchemaError("a 4x4 matrix is required (--matrix FILE or 'G' in --input)")
    if G.shape != (4, 4):
        raise SchemaError(f"gamma images are 4x4, got {G.shape[0]}x{G.shape[1]}")
    bc = gamma_inverse_real(G, params) if args.real else gamma_inverse(G, params)
    return bc_to_json(bc)


def run_spectrum(args, params: BeamParams, request: Dict[str, Any]):
    bc = resolve_bc(args, request, params)
    count = pick(args, request, "count")
    box = pick(args, request, "box")
    if box is not None:
        points = scan_complex_spectrum(bc, params, [float(v) for v in box])
    else:
        interval = pick(args, request, "interval", [-5.0 / params.k, 5.0 / params.k])
        if len(interval) != 2:
            raise SchemaError("interval needs two endpoints")
        points = scan_real_spectrum(bc, params, [float(v) for v in interval])
    if count is not None:
        points = points[:int(count)]
    if args.csv:
        return spectrum_frame([
            {"n": n, "lambda": csv_number(point.lam), "k_lambda": csv_number(point.k_lambda),
             "residual": point.residual}
            for n, point in enumerate(points, 1)
        ])
    return [spectral_point_to_json(point) for point in points]


def run_specq(args, params: BeamParams, request: Dict[str, Any]):
    count = int(pick(args, request, "count", 4))
    pairs = spec_Q(params, count)
    if args.csv:
        rows = []
        for n, pair in enumerate(pairs, 1):
            for lam in pair:
                rows.append({"n": n, "lambda": lam, "k_lambda": lam * params.k,
                             "residual": singular_ratio(X_matrix(lam, params.l, params))})
        return spectrum_frame(rows)
    return {"mu": [mu for mu, _ in pairs], "nu": [nu for _, nu in pairs]}


def load_from_json(load: Any, rule) -> GridFunction:
    """Load samples or an expression in x evaluated on the rule's nodes."""
    if not isinstance(load, dict) or "kind" not in load:
        raise SchemaError("'w' needs a 'kind' of 'samples' or 'expr-grid'")
    if load["kind"] == "samples":
        values = [pair_to_complex(v) for v in load.get("values", [])]
        if len(values) != rule.size:
            raise SchemaError(f"'w' has {len(values)} samples for a {rule.size}-node rule")
        return GridFunction(np.array(values), rule)
    if load["kind"] == "expr-grid":
        expression = load.get("expr")
        if not isinstance(expression, str):
            raise SchemaError("'expr-grid' loads need an 'expr' string")
        code = compile_expression(expression)
        try:
            return GridFunction.from_callable(
                rule, lambda x: eval(code, {"__builtins__": {}}, dict(EXPRESSION_NAMESPACE, x=x)))
        except Exception as error:
            raise SchemaError(f"cannot evaluate load {expression!r}: {error}")
    raise SchemaError(f"unknown load kind {load['kind']!r}")


def run_solve(args, params: BeamParams, request: Dict[str, Any]):
    bc = resolve_bc(args, request, params)
    rule = beam_rule(params, pick(args, request, "nodes"))
    if "w" not in request:
        raise SchemaError("solve needs a load 'w' in --input")
    w = load_from_json(request["w"], rule)
    b = request.get("b")
    if b is not None:
        b = np.array([pair_to_complex(v) for v in b])
    return grid_function_to_json(solve_bvp(bc, params, w, b))


def run_construct(args, params: BeamParams, request: Dict[str, Any]):
    lam = pick(args, request, "lambda")
    if lam is None:
        raise SchemaError("construct needs --lambda or 'lambda' in --input")
    lam = float(lam)
    bc, point = construct_bc_for_eigenvalue(lam, params)
    G = gamma(bc, params)
    Y = Y_matrix(lam, params.l, params)

    nodes = pick(args, request, "nodes", get_solver_config("nystrom")["nodes"])
    eigenvalues = np.array([ev.value for ev in nystrom_spectrum(bc, params, nodes)])
    nearest = complex(eigenvalues[np.argmin(np.abs(eigenvalues - lam))])
    profile = operator_profile(bc, params, nodes)
    return {
        "bc": bc_to_json(bc),
        "params": params_to_json(params),
        "lambda": lam,
        "k_lambda": lam * params.k,
        "verification": {
            "char_det_Y": complex_to_pair(np.linalg.det(G @ Y - np.eye(4))),
            "eigenvalue_one_residual": eigenvalue_one_residual(G, Y),
            "null_vector_residual": point.residual,
            "nystrom_nearest": complex_to_pair(nearest),
            "nystrom_match": bool(abs(nearest - lam) <= 1e-4 * abs(lam)),
            "positive": profile["positive"],
            "contractive": profile["contractive"],
        },
    }


def run_oracle(args, params: BeamParams, request: Dict[str, Any]):
    bc = resolve_bc(args, request, params)
    cfg = get_solver_config("nystrom")
    nodes = pick(args, request, "nodes", cfg["nodes"])
    top = pick(args, request, "top", cfg["top"])
    return [nystrom_eigenvalue_to_json(ev, params.k) for ev in nystrom_spectrum(bc, params, nodes, top)]


def run_verify(args, params: BeamParams, request: Dict[str, Any]):
    """
    Run every invariant check and collect one report.

    Returns:
        pd.DataFrame: One row per identity with its status and timing
    """
    report = pd.DataFrame(columns=COLUMNS + ["seconds"])
    checks = load_checks()
    for i, check in enumerate(checks, 1):
        name = check.__module__.split(".")[-1]
        logger.info(f"Check {i}/{len(checks)}: {name}")
        start_time = time.time()
        rows = check(pd.DataFrame(columns=COLUMNS), params)
        elapsed = time.time() - start_time
        rows["seconds"] = round(elapsed, 3)
        report = rows if report.empty else pd.concat([report, rows], ignore_index=True)
        logger.info(f"  {name}: {len(rows)} identities in {elapsed:.2f} seconds")
    return report


COMMANDS = {
    "wellposed": run_wellposed,
    "greens": run_greens,
    "gamma": run_gamma,
    "gamma-inv": run_gamma_inverse,
    "spectrum": run_spectrum,
    "specq": run_specq,
    "solve": run_solve,
    "construct": run_construct,
    "oracle": run_oracle,
    "verify": run_verify,
}


class JsonErrorParser(argparse.ArgumentParser):
    """Usage errors are reported with the same JSON shape as computation errors."""

    def error(self, message: str):
        print(json.dumps({"error": "UsageError", "message": f"{self.prog}: {message}"}), file=sys.stderr)
        self.exit(2)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--l", type=float, help="Half-length of the beam (default from BEAM_L or 1)")
    shared.add_argument("--alpha", type=float, help="Stiffness ratio (default from BEAM_ALPHA or 1)")
    shared.add_argument("--k", type=float, help="Spring density (default from BEAM_K or 1)")
    shared.add_argument("-i", "--input", help="JSON request file")
    shared.add_argument("-v", "--verbose", action="store_true", help="Log debug output to stderr")

    with_bc = argparse.ArgumentParser(add_help=False)
    source = with_bc.add_mutually_exclusive_group()
    source.add_argument("--bc", help="Boundary condition JSON file")
    source.add_argument("--named", choices=sorted(NAMED_CONDITIONS), help="Canonical boundary condition")

    csv = argparse.ArgumentParser(add_help=False)
    csv.add_argument("--csv", action="store_true", help="Write plot data as CSV instead of JSON")

    parser = JsonErrorParser(description="Green's functions and spectra of a finite beam on an elastic foundation.")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("wellposed", parents=[shared, with_bc], help="Test det M~ != 0")
    greens = commands.add_parser("greens", parents=[shared, with_bc], help="Green's blocks and kernel samples")
    greens.add_argument("--points", type=int, default=11, help="Kernel grid size (default: 11)")
    commands.add_parser("gamma", parents=[shared, with_bc], help="Matrix coordinates of a condition")
    inverse = commands.add_parser("gamma-inv", parents=[shared], help="Condition with given coordinates")
    inverse.add_argument("--matrix", help="4x4 matrix JSON file")
    inverse.add_argument("--real", action="store_true", help="Return a real condition (needs a pi-bar matrix)")

    spectrum = commands.add_parser("spectrum", parents=[shared, with_bc, csv], help="Eigenvalues by characteristic determinant")
    spectrum.add_argument("--interval", type=float, nargs=2, metavar=("LO", "HI"), help="Real scan interval")
    spectrum.add_argument("--box", type=float, nargs=4, metavar=("RE0", "RE1", "IM0", "IM1"),
                          help="Complex search box instead of a real interval")
    spectrum.add_argument("--count", type=int, help="Report only the largest COUNT eigenvalues")
    specq = commands.add_parser("specq", parents=[shared, csv], help="Largest eigenvalue pairs of K_Q")
    specq.add_argument("--count", type=int, help="Number of (mu, nu) pairs (default: 4)")

    solve = commands.add_parser("solve", parents=[shared, with_bc], help="Solve the boundary value problem")
    solve.add_argument("--nodes", type=int, help="Quadrature nodes")
    construct = commands.add_parser("construct", parents=[shared], help="Real condition with a prescribed eigenvalue")
    construct.add_argument("--lambda", dest="lambda", type=float, help="Eigenvalue to prescribe")
    construct.add_argument("--nodes", type=int, help="Nystrom nodes for the verification")
    oracle = commands.add_parser("oracle", parents=[shared, with_bc], help="Nystrom eigenvalues")
    oracle.add_argument("--nodes", type=int, help="Quadrature nodes")
    oracle.add_argument("--top", type=int, help="Number of eigenvalues")
    commands.add_parser("verify", parents=[shared], help="Run the invariant checks")
    return parser


def emit(result) -> None:
    if isinstance(result, pd.DataFrame):
        if result.columns.tolist() == CSV_COLUMNS:
            sys.stdout.write(result.to_csv(index=False))
        else:
            print(result.to_string(index=False))
        return
    print(dumps(result))


def report_error(error: Exception) -> None:
    print(json.dumps({"error": type(error).__name__, "message": str(error)}), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return int(exit_request.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, DEFAULT_LOG_LEVEL.upper(), logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        request = read_request(args)
        params = resolve_params(args, request)
        result = COMMANDS[args.command](args, params, request)
    except SchemaError as error:
        report_error(error)
        return 2
    except OSError as error:
        report_error(error)
        return 2
    except ValueError as error:
        report_error(error)
        return 1

    emit(result)
    if args.command == "verify" and (result["status"] == "FAIL").any():
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
