"""Command-line front end: config in, JSON/CSV report out.

Exit-code discipline: 0 only for a verified value or witness, 1 for an
exhausted (inconclusive) search, 2 for invalid input.  Reports echo the
effective config verbatim so that re-running with `--config` on that
echo reproduces the report byte-for-byte in exact mode.

One convention boundary lives here and only here: the core recurrence
operations count a pattern by its extra returns m (a witness visits the
target m+1 times), while set-side code counts terms.  Configs may give
either `m` or `length` (= m + 1); both are translated at parse time.
"""

import argparse
import copy
import csv
import io
import itertools
import json
import sys

from .errors import (
    BudgetExceededError,
    DomainError,
    InvalidArgumentError,
    ModeMismatchError,
    MonotonicityError,
    PreconditionError,
    SchemaError,
    StageFailureError,
)
from .families import (
    HitSet,
    density_report,
    longest_ap,
    szemeredi_r,
    vdw_check,
    coloring_avoids_progressions,
)
from .gowers import gowers_table
from .recurrence import (
    joint_return_count,
    multirec_witness,
    nested_ball_refinement,
    pair_recurrence_search,
    return_set,
    shift_ap_criterion,
    universal_vector,
    verify_universal,
)
from .serialize import (
    ball_to_json,
    format_fraction,
    parse_ball,
    parse_fraction,
    parse_operator,
    parse_scalars,
    parse_vector,
    parse_weights,
    vector_to_json,
)
from .spaces import (
    UNILATERAL,
    Iterates,
    OneScalars,
    ScaledIterates,
    SpaceSpec,
    operator_space,
    orbit as orbit_points,
)

OK = 0
EXHAUSTED = 1
INVALID = 2

_INCONCLUSIVE_NOTE = (
    "search exhausted its bounds without a witness; "
    "this is inconclusive, not a refutation"
)


class RunResult:
    """What a runner hands back: payload dict, exit code, CSV projection."""

    def __init__(self, payload, exit_code, csv_header, csv_rows):
        self.payload = payload
        self.exit_code = exit_code
        self.csv_header = csv_header
        self.csv_rows = csv_rows


# ---------------------------------------------------------------------------
# Config plumbing


def _expect_int(config, key, path="$", minimum=None):
    if key not in config:
        raise SchemaError(f"{path}.{key}", "missing required integer")
    v = config[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{path}.{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise SchemaError(f"{path}.{key}", f"must be >= {minimum}, got {v}")
    return v


def _bound(config, key, default, bounds, minimum=1):
    """Read a search bound, recording where it came from."""
    if key in config:
        value = _expect_int(config, key, minimum=minimum)
        bounds[key] = {"value": value, "provenance": "config"}
    else:
        value = default
        bounds[key] = {"value": value, "provenance": "default"}
    return value


def _resolve_m(config, path="$", default=None):
    """Translate the m/length convention; the only place that does."""
    has_m = "m" in config
    has_length = "length" in config
    if has_m and has_length:
        raise SchemaError(path, "give either m or length, not both")
    if has_length:
        return _expect_int(config, "length", path, minimum=1) - 1
    if has_m:
        return _expect_int(config, "m", path, minimum=0)
    if default is not None:
        return default
    raise SchemaError(path, "missing m (extra returns) or length (term count)")


def _parse_space(config, path="$"):
    p = config.get("p", 1)
    if p == "inf":
        from .spaces import INF

        return SpaceSpec(INF, UNILATERAL)
    if isinstance(p, bool) or p not in (1, 2):
        raise SchemaError(f"{path}.p", f"p must be 1, 2, or \"inf\", got {p!r}")
    return SpaceSpec(p, UNILATERAL)


def _parse_set_values(config, path="$"):
    if "set" not in config:
        raise SchemaError(f"{path}.set", "missing integer set")
    values = config["set"]
    if not isinstance(values, list) or any(
        isinstance(v, bool) or not isinstance(v, int) for v in values
    ):
        raise SchemaError(f"{path}.set", "expected a list of integers")
    if any(v < 0 for v in values):
        raise SchemaError(f"{path}.set", "set elements must be non-negative")
    return values


def _fr(value, mode):
    """Exact rationals stay exact on the wire; float mode reports floats."""
    return float(value) if mode == "float" else format_fraction(value)


def _witness_vector(v):
    return vector_to_json(v)


# ---------------------------------------------------------------------------
# Runners (shared by single runs and sweeps)


def run_analyze_set(config, mode):
    values = _parse_set_values(config)
    horizon = None
    if "horizon" in config:
        horizon = _expect_int(config, "horizon", minimum=0)
    hits = HitSet.from_iterable(values, horizon)
    bounds = {}
    window = _bound(config, "window", max(1, (hits.horizon + 1) // 10), bounds)
    if window > hits.horizon + 1:
        raise SchemaError("$.window", "window exceeds horizon+1")
    witness = longest_ap(hits)
    dens = density_report(hits, window)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "size": len(hits),
        "horizon": hits.horizon,
        "bounds": bounds,
        "longest_ap": None
        if witness is None
        else {
            "initial": witness.initial,
            "step": witness.step,
            "length": witness.length,
        },
        "density": {
            "lower_proxy": format_fraction(dens.lower_proxy),
            "upper_proxy": format_fraction(dens.upper_proxy),
            "banach_upper_proxy": format_fraction(dens.banach_upper_proxy),
            "window": dens.window,
        },
    }
    row = (
        ("", "", "")
        if witness is None
        else (witness.initial, witness.step, witness.length)
    )
    return RunResult(payload, OK, ("initial", "step", "length"), [row])


def _orbit_sequence(config, path="$"):
    op = parse_operator(config.get("operator"), f"{path}.operator")
    scalars = (
        parse_scalars(config["scalars"], f"{path}.scalars")
        if "scalars" in config
        else OneScalars()
    )
    if isinstance(scalars, OneScalars):
        return op, Iterates(op)
    return op, ScaledIterates(scalars, op)


def run_orbit(config, mode):
    op, seq = _orbit_sequence(config)
    x = parse_vector(config.get("x"), "$.x")
    space = operator_space(op)
    if space.laterality == UNILATERAL and x.min_support() is not None and x.min_support() < 0:
        raise SchemaError("$.x", "negative support in a unilateral space")
    bounds = {}
    horizon = _bound(config, "horizon", 20, bounds, minimum=0)
    rows = []
    csv_rows = []
    for n, v in orbit_points(seq, x, horizon, mode):
        l1, l2sq, sup = v.l1(), v.l2_squared(), v.sup()
        rows.append(
            {
                "n": n,
                "vector": _witness_vector(v),
                "l1": _fr(l1, mode),
                "l2_squared": _fr(l2sq, mode),
                "sup": _fr(sup, mode),
            }
        )
        csv_rows.append((n, _fr(l1, mode), _fr(l2sq, mode), _fr(sup, mode)))
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "points": rows,
    }
    return RunResult(payload, OK, ("n", "l1", "l2_squared", "sup"), csv_rows)


def run_return_set(config, mode):
    op, seq = _orbit_sequence(config)
    x = parse_vector(config.get("x"), "$.x")
    space = operator_space(op)
    ball = parse_ball(config.get("ball"), space.laterality, "$.ball")
    bounds = {}
    horizon = _bound(config, "horizon", 50, bounds, minimum=0)
    hits = return_set(seq, x, ball, horizon, mode)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "hits": list(hits.elements),
        "count": len(hits),
        "horizon": hits.horizon,
    }
    return RunResult(payload, OK, ("n",), [(n,) for n in hits.elements])


def run_shift_check(config, mode):
    weights = parse_weights(config.get("weights"), "$.weights")
    space = _parse_space(config)
    if "epsilon" not in config:
        raise SchemaError("$.epsilon", "missing required rational")
    epsilon = parse_fraction(config["epsilon"], "$.epsilon")
    if epsilon <= 0:
        raise SchemaError("$.epsilon", "epsilon must be positive")
    bounds = {}
    p_max = _bound(config, "p_max", 3, bounds, minimum=0)
    m_max = _bound(config, "m_max", 3, bounds, minimum=1)
    q_max = _bound(config, "q_max", 100, bounds, minimum=1)
    report = shift_ap_criterion(weights, space, epsilon, p_max, m_max, q_max)
    cells = [
        {"p": p, "m": m, "q": report.grid[(p, m)]}
        for p in range(p_max + 1)
        for m in range(1, m_max + 1)
    ]
    full = report.fully_populated
    payload = {
        "verdict": "witness" if full else "exhausted",
        "verified": full,
        "conclusive": full,
        "bounds": bounds,
        "epsilon": format_fraction(report.epsilon),
        "grid": cells,
    }
    if not full:
        payload["note"] = _INCONCLUSIVE_NOTE
    csv_rows = [(c["p"], c["m"], "" if c["q"] is None else c["q"]) for c in cells]
    return RunResult(
        payload, OK if full else EXHAUSTED, ("p", "m", "q"), csv_rows
    )


def run_multirec(config, mode):
    weights = parse_weights(config.get("weights"), "$.weights")
    space = _parse_space(config)
    ball = parse_ball(config.get("ball"), space.laterality, "$.ball")
    m = _resolve_m(config)
    bounds = {}
    q_max = _bound(config, "q_max", 100, bounds)
    witness = multirec_witness(weights, space, ball, m, q_max, mode)
    if witness is None:
        payload = {
            "verdict": "exhausted",
            "verified": False,
            "conclusive": False,
            "bounds": bounds,
            "m": m,
            "note": _INCONCLUSIVE_NOTE,
        }
        return RunResult(payload, EXHAUSTED, ("j", "time", "distance"), [])
    payload = {
        "verdict": "witness",
        "verified": witness.verified,
        "conclusive": True,
        "bounds": bounds,
        "witness": {
            "q": witness.q,
            "m": witness.m,
            "x": _witness_vector(witness.x),
            "memberships": list(witness.verified_memberships),
            "distances": [_fr(d, mode) for d in witness.distances],
        },
    }
    csv_rows = [
        (j, j * witness.q, _fr(d, mode)) for j, d in enumerate(witness.distances)
    ]
    return RunResult(payload, OK, ("j", "time", "distance"), csv_rows)


def run_universal(config, mode):
    if "scalars" not in config:
        raise SchemaError("$.scalars", "missing scalar sequence")
    scalars = parse_scalars(config["scalars"], "$.scalars")
    y = parse_vector(config.get("y"), "$.y")
    m = _expect_int(config, "m", minimum=0)
    k = _expect_int(config, "k", minimum=1)
    space = _parse_space(config)
    ytilde = universal_vector(scalars, y, m, k, mode)
    error = verify_universal(scalars, y, m, k, space, mode)
    payload = {
        "verdict": "witness",
        "verified": True,
        "conclusive": True,
        "m": m,
        "k": k,
        "ytilde": _witness_vector(ytilde),
        "error": _fr(error, mode) if mode == "exact" else error,
    }
    return RunResult(
        payload,
        OK,
        ("m", "k", "error"),
        [(m, k, payload["error"])],
    )


def run_gowers(config, mode):
    has_single = "l" in config
    has_range = "l_min" in config or "l_max" in config
    if has_single and has_range:
        raise SchemaError("$", "give either l or l_min/l_max, not both")
    if has_single:
        ls = [_expect_int(config, "l", minimum=4)]
    elif has_range:
        lo = _expect_int(config, "l_min", minimum=4)
        hi = _expect_int(config, "l_max", minimum=4)
        if hi < lo:
            raise SchemaError("$.l_max", "l_max must be >= l_min")
        ls = list(range(lo, hi + 1))
    else:
        raise SchemaError("$", "missing l (or l_min/l_max)")
    rows = gowers_table(ls)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "rows": [
            {
                "l": r.l,
                "m_l": r.m_l,
                "f_at_m_l": r.f_at_m_l,
                "bound_r3": r.bound_r3,
                "k_of_n": r.k_of_n,
                "vacuous_flag": r.vacuous,
            }
            for r in rows
        ],
    }
    csv_rows = [
        (
            r.l,
            r.m_l,
            repr(r.f_at_m_l),
            "" if r.bound_r3 is None else repr(r.bound_r3),
            "" if r.k_of_n is None else r.k_of_n,
            r.vacuous,
        )
        for r in rows
    ]
    header = ("l", "m_l", "f_at_m_l", "bound_r3", "k_of_n", "vacuous_flag")
    return RunResult(payload, OK, header, csv_rows)


def run_szemeredi(config, mode):
    n = _expect_int(config, "n", minimum=1)
    k = (
        _expect_int(config, "k", minimum=2)
        if "k" in config
        else 3
    )
    bounds = {}
    budget = _bound(config, "budget", 25, bounds)
    r = szemeredi_r(n, k, budget)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "n": n,
        "k": k,
        "r": r,
    }
    return RunResult(payload, OK, ("n", "k", "r"), [(n, k, r)])


def run_vdw(config, mode):
    n = _expect_int(config, "n", minimum=1)
    k = (
        _expect_int(config, "k", minimum=2)
        if "k" in config
        else 3
    )
    bounds = {}
    budget = _bound(config, "budget", 12, bounds)
    result = vdw_check(n, k, budget)
    verified = True
    if result.coloring is not None:
        verified = coloring_avoids_progressions(result.coloring, k)
    payload = {
        "verdict": "value",
        "verified": verified,
        "conclusive": True,
        "bounds": bounds,
        "n": n,
        "k": k,
        "forced": result.forced,
        "coloring": result.coloring,
    }
    return RunResult(
        payload,
        OK if verified else EXHAUSTED,
        ("n", "k", "forced", "coloring"),
        [(n, k, result.forced, result.coloring or "")],
    )


def run_pair_search(config, mode):
    weights = parse_weights(config.get("weights"), "$.weights")
    space = _parse_space(config)
    U = parse_ball(config.get("u"), space.laterality, "$.u")
    V1 = parse_ball(config.get("v1"), space.laterality, "$.v1")
    V2 = parse_ball(config.get("v2"), space.laterality, "$.v2")
    m = _resolve_m(config)
    bounds = {}
    a_max = _bound(config, "a_max", 50, bounds)
    q_max = _bound(config, "q_max", 50, bounds)
    witness = pair_recurrence_search(
        weights, space, U, V1, V2, m, a_max, q_max, mode
    )
    if witness is None:
        payload = {
            "verdict": "exhausted",
            "verified": False,
            "conclusive": False,
            "bounds": bounds,
            "m": m,
            "note": _INCONCLUSIVE_NOTE,
        }
        return RunResult(payload, EXHAUSTED, ("a", "q", "m"), [])
    payload = {
        "verdict": "witness",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "witness": {
            "a": witness.a,
            "q": witness.q,
            "m": witness.m,
            "x1": _witness_vector(witness.x1),
            "x2": _witness_vector(witness.x2),
        },
    }
    return RunResult(
        payload, OK, ("a", "q", "m"), [(witness.a, witness.q, witness.m)]
    )


def run_nested(config, mode):
    weights = parse_weights(config.get("weights"), "$.weights")
    space = _parse_space(config)
    ball = parse_ball(config.get("ball"), space.laterality, "$.ball")
    stages = _expect_int(config, "stages", minimum=0)
    bounds = {}
    q_max = _bound(config, "q_max", 100, bounds)

    def stage_json(st, index):
        return {
            "stage": index,
            "center": _witness_vector(st.ball.center),
            "radius": format_fraction(st.ball.radius),
            "q": st.q,
        }

    try:
        refinement = nested_ball_refinement(weights, space, ball, stages, q_max, mode)
    except StageFailureError as exc:
        payload = {
            "verdict": "exhausted",
            "verified": False,
            "conclusive": False,
            "bounds": bounds,
            "failed_stage": exc.stage,
            "stages": [stage_json(st, i) for i, st in enumerate(exc.completed)],
            "note": _INCONCLUSIVE_NOTE,
        }
        return RunResult(payload, EXHAUSTED, ("stage", "q", "radius"), [])
    stage_list = [stage_json(st, i) for i, st in enumerate(refinement.stages)]
    payload = {
        "verdict": "witness",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "stages": stage_list,
        "point": _witness_vector(refinement.point),
    }
    csv_rows = [
        (s["stage"], "" if s["q"] is None else s["q"], s["radius"])
        for s in stage_list
    ]
    return RunResult(payload, OK, ("stage", "q", "radius"), csv_rows)


def run_puig_count(config, mode):
    scalars = (
        parse_scalars(config["scalars"], "$.scalars")
        if "scalars" in config
        else OneScalars()
    )
    op = parse_operator(config.get("operator"), "$.operator")
    x = parse_vector(config.get("x"), "$.x")
    space = operator_space(op)
    ball = parse_ball(config.get("ball"), space.laterality, "$.ball")
    m = _resolve_m(config, default=0)
    q = _expect_int(config, "q", minimum=1)
    bounds = {}
    horizon = _bound(config, "horizon", 50, bounds, minimum=0)
    count = joint_return_count(scalars, op, x, ball, m, q, horizon, mode)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": True,
        "bounds": bounds,
        "m": m,
        "q": q,
        "count": count,
    }
    return RunResult(
        payload, OK, ("m", "q", "horizon", "count"), [(m, q, horizon, count)]
    )


RUNNERS = {
    "analyze-set": run_analyze_set,
    "orbit": run_orbit,
    "return-set": run_return_set,
    "shift-check": run_shift_check,
    "multirec": run_multirec,
    "universal": run_universal,
    "gowers": run_gowers,
    "szemeredi": run_szemeredi,
    "vdw": run_vdw,
    "pair-search": run_pair_search,
    "nested": run_nested,
    "puig-count": run_puig_count,
}


# ---------------------------------------------------------------------------
# Sweeps


def _set_dotted(config, dotted, value):
    parts = dotted.split(".")
    here = config
    for part in parts[:-1]:
        nxt = here.get(part)
        if nxt is None:
            nxt = {}
            here[part] = nxt
        if not isinstance(nxt, dict):
            raise SchemaError(
                f"$.{dotted}", f"cannot descend into non-object at {part!r}"
            )
        here = nxt
    here[parts[-1]] = value


def run_sweep(inner_name, base_config, grid, limit_cfg, mode):
    if inner_name not in RUNNERS:
        raise SchemaError("$.command", f"unknown subcommand {inner_name!r}")
    if not isinstance(grid, dict):
        raise SchemaError("$.grid", "expected an object mapping keys to value lists")
    for key, values in grid.items():
        if not isinstance(values, list):
            raise SchemaError(f"$.grid.{key}", "expected a list of values")
    bounds = {}
    limit = _bound(limit_cfg, "limit", 256, bounds)
    keys = sorted(grid)
    combos = []
    if keys:
        total = 1
        for key in keys:
            total *= len(grid[key])
        if total > limit:
            raise SchemaError(
                "$.grid", f"grid has {total} points, exceeding the limit {limit}"
            )
        combos = list(itertools.product(*(grid[key] for key in keys)))
    runs = []
    csv_rows = []
    inner_header = None
    exit_code = OK
    for combo in combos:
        cfg = copy.deepcopy(base_config)
        for key, value in zip(keys, combo):
            _set_dotted(cfg, key, value)
        result = RUNNERS[inner_name](cfg, mode)
        runs.append(
            {"command": inner_name, "mode": mode, "config": cfg, **result.payload}
        )
        exit_code = max(exit_code, result.exit_code)
        inner_header = result.csv_header
        prefix = tuple(
            v if isinstance(v, (int, str)) else json.dumps(v, sort_keys=True)
            for v in combo
        )
        csv_rows.extend(prefix + row for row in result.csv_rows)
    payload = {
        "verdict": "value",
        "verified": True,
        "conclusive": all(r.get("conclusive", False) for r in runs) if runs else True,
        "bounds": bounds,
        "inner": inner_name,
        "grid": grid,
        "runs": runs,
    }
    header = tuple(keys) + (inner_header or ())
    return RunResult(payload, exit_code if runs else OK, header, csv_rows)


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(sp):
    sp.add_argument("--config", help="JSON config file; flags override its keys")
    sp.add_argument("--mode", choices=("exact", "float"), default="exact")
    sp.add_argument("--output", choices=("json", "csv"), default="json")


# (argparse dest, config key, conversion)
_INT = "int"
_RAW = "raw"  # keep the string as-is (rationals, vector shorthands, scalar names)
_JSON = "json"  # parse the string as a JSON value
_VEC = "vec"  # JSON triples when it looks like JSON, else shorthand like "e0"

_OVERLAYS = {
    "analyze-set": [("window", "window", _INT), ("horizon", "horizon", _INT), ("set", "set", _JSON)],
    "orbit": [
        ("operator", "operator", _JSON),
        ("scalars", "scalars", _RAW),
        ("x", "x", _VEC),
        ("horizon", "horizon", _INT),
    ],
    "return-set": [
        ("operator", "operator", _JSON),
        ("scalars", "scalars", _RAW),
        ("x", "x", _VEC),
        ("ball", "ball", _JSON),
        ("horizon", "horizon", _INT),
    ],
    "shift-check": [
        ("weights", "weights", _JSON),
        ("p", "p", _JSON),
        ("epsilon", "epsilon", _RAW),
        ("p_max", "p_max", _INT),
        ("m_max", "m_max", _INT),
        ("q_max", "q_max", _INT),
    ],
    "multirec": [
        ("weights", "weights", _JSON),
        ("p", "p", _JSON),
        ("ball", "ball", _JSON),
        ("m", "m", _INT),
        ("length", "length", _INT),
        ("q_max", "q_max", _INT),
    ],
    "universal": [
        ("scalars", "scalars", _RAW),
        ("y", "y", _VEC),
        ("m", "m", _INT),
        ("k", "k", _INT),
        ("p", "p", _JSON),
    ],
    "gowers": [("l", "l", _INT), ("l_min", "l_min", _INT), ("l_max", "l_max", _INT)],
    "szemeredi": [("n", "n", _INT), ("k", "k", _INT), ("budget", "budget", _INT)],
    "vdw": [("n", "n", _INT), ("k", "k", _INT), ("budget", "budget", _INT)],
    "pair-search": [
        ("weights", "weights", _JSON),
        ("p", "p", _JSON),
        ("u", "u", _JSON),
        ("v1", "v1", _JSON),
        ("v2", "v2", _JSON),
        ("m", "m", _INT),
        ("length", "length", _INT),
        ("a_max", "a_max", _INT),
        ("q_max", "q_max", _INT),
    ],
    "nested": [
        ("weights", "weights", _JSON),
        ("p", "p", _JSON),
        ("ball", "ball", _JSON),
        ("stages", "stages", _INT),
        ("q_max", "q_max", _INT),
    ],
    "puig-count": [
        ("scalars", "scalars", _RAW),
        ("operator", "operator", _JSON),
        ("x", "x", _VEC),
        ("ball", "ball", _JSON),
        ("m", "m", _INT),
        ("length", "length", _INT),
        ("q", "q", _INT),
        ("horizon", "horizon", _INT),
    ],
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aporbit",
        description=(
            "Workbench for orbits, return sets, and arithmetic-progression "
            "recurrence of weighted backward shifts (exact rational arithmetic)."
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, overlays in _OVERLAYS.items():
        sp = sub.add_parser(name)
        _add_common(sp)
        for dest, _key, kind in overlays:
            flag = "--" + dest.replace("_", "-")
            if kind == _INT:
                sp.add_argument(flag, dest=dest, type=int)
            else:
                sp.add_argument(flag, dest=dest)
    sweep = sub.add_parser("sweep")
    _add_common(sweep)
    sweep.add_argument("--command", required=True, help="subcommand to sweep")
    sweep.add_argument("--grid", required=True, help="JSON: {key: [values...]}")
    sweep.add_argument("--limit", type=int, help="max grid points (default 256)")
    return parser


def _merge_config(args, name):
    config = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise SchemaError("$", f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise SchemaError("$", "config file must hold a JSON object")
        config = loaded
    for dest, key, kind in _OVERLAYS.get(name, ()):
        value = getattr(args, dest, None)
        if value is None:
            continue
        if kind == _JSON or (
            kind == _VEC and isinstance(value, str) and value.lstrip().startswith("[")
        ):
            try:
                value = json.loads(value) if isinstance(value, str) else value
            except json.JSONDecodeError as exc:
                raise SchemaError(f"$.{key}", f"flag is not valid JSON: {exc}")
        config[key] = value
    return config


def _read_stdin_set():
    text = sys.stdin.read()
    stripped = text.strip()
    if not stripped:
        raise SchemaError("$.set", "no set given (stdin empty, no config)")
    if stripped.startswith("["):
        try:
            values = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise SchemaError("$.set", f"stdin is not a JSON array: {exc}")
    else:
        try:
            values = [int(tok) for tok in stripped.split()]
        except ValueError as exc:
            raise SchemaError("$.set", f"stdin must hold integers: {exc}")
    return values


def _emit(report, output, header, rows, out):
    if output == "json":
        out.write(json.dumps(report, indent=2, sort_keys=True))
        out.write("\n")
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        out.write(buf.getvalue())


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INVALID
    name = args.subcommand
    out = sys.stdout
    try:
        if name == "sweep":
            try:
                grid = json.loads(args.grid)
            except json.JSONDecodeError as exc:
                raise SchemaError("$.grid", f"not valid JSON: {exc}")
            base = {}
            if args.config:
                fake = argparse.Namespace(config=args.config)
                base = _merge_config(fake, args.command)
            limit_cfg = {} if args.limit is None else {"limit": args.limit}
            result = run_sweep(args.command, base, grid, limit_cfg, args.mode)
            report = {
                "command": "sweep",
                "mode": args.mode,
                "config": {"command": args.command, "base": base, "grid": grid},
                **result.payload,
            }
        else:
            config = _merge_config(args, name)
            if name == "analyze-set" and "set" not in config:
                config["set"] = _read_stdin_set()
            result = RUNNERS[name](config, args.mode)
            report = {
                "command": name,
                "mode": args.mode,
                "config": config,
                **result.payload,
            }
    except (
        SchemaError,
        InvalidArgumentError,
        PreconditionError,
        ModeMismatchError,
        DomainError,
        BudgetExceededError,
    ) as exc:
        error_report = {
            "command": name,
            "mode": getattr(args, "mode", "exact"),
            "verdict": "error",
            "verified": False,
            "error": str(exc),
        }
        out.write(json.dumps(error_report, indent=2, sort_keys=True))
        out.write("\n")
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except MonotonicityError as exc:
        error_report = {
            "command": name,
            "mode": getattr(args, "mode", "exact"),
            "verdict": "inconclusive",
            "verified": False,
            "conclusive": False,
            "error": str(exc),
        }
        out.write(json.dumps(error_report, indent=2, sort_keys=True))
        out.write("\n")
        return EXHAUSTED
    _emit(report, args.output, result.csv_header, result.csv_rows, out)
    return result.exit_code


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
