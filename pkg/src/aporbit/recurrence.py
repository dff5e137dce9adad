"""Return sets and constructive recurrence searches for weighted shifts.

Every search here is a bounded semi-decision: a returned witness has had
each membership re-verified exactly (via `verify_return_times`, which
recomputes iterates from scratch rather than trusting the candidate
algebra), while a `None` / raised stage failure is *inconclusive* — it
never refutes the corresponding unbounded statement.

Distances are reported as exact rationals; in the l2 case the squared
distance is reported so no irrational square root is ever taken.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvalidArgumentError, PreconditionError, StageFailureError, WorkbenchError
from .families import HitSet, find_homogeneous_ap
from .spaces import (
    FLOAT_MEMBERSHIP_TOL,
    UNILATERAL,
    BackwardShift,
    Ball,
    FiniteVector,
    Iterates,
    MapSequence,
    Operator,
    ScaledIterates,
    ScalarSeq,
    SpaceSpec,
    UnitWeights,
    WeightSpec,
    apply,
    in_ball,
    invert,
    iterate,
    orbit,
    weight_product,
)

EXACT = "exact"
FLOAT = "float"


def _check_mode(mode: str) -> None:
    if mode not in (EXACT, FLOAT):
        raise InvalidArgumentError("mode must be 'exact' or 'float'")


def _tolerance(mode: str) -> Fraction | None:
    return FLOAT_MEMBERSHIP_TOL if mode == FLOAT else None


def membership_gap(x: FiniteVector, ball: Ball) -> Fraction:
    """Exact distance from x to the ball's center (squared when p = 2)."""
    diff = x - ball.center
    if ball.space.p == 1:
        return diff.l1()
    if ball.space.p == 2:
        return diff.l2_squared()
    return diff.sup()


def verify_return_times(
    seq: MapSequence,
    x: FiniteVector,
    ball: Ball,
    times,
    mode: str = EXACT,
) -> tuple[bool, ...]:
    """Re-check each claimed return time independently.

    Each iterate is recomputed from x from scratch; nothing from the
    search that produced the times is reused, so a passing tuple is a
    sound certificate on its own.
    """
    _check_mode(mode)
    tol = _tolerance(mode)
    return tuple(in_ball(iterate(seq, x, n, mode), ball, tol) for n in times)


def return_set(
    seq: MapSequence,
    x: FiniteVector,
    ball: Ball,
    horizon: int,
    mode: str = EXACT,
) -> HitSet:
    """{ n <= horizon : (lambda_n) T^n x lands in the ball }, exactly."""
    _check_mode(mode)
    tol = _tolerance(mode)
    hits = [n for n, v in orbit(seq, x, horizon, mode) if in_ball(v, ball, tol)]
    return HitSet(tuple(hits), horizon)


# ---------------------------------------------------------------------------
# AP criterion for weighted backward shifts


@dataclass(frozen=True)
class CriterionReport:
    """Grid of smallest verified steps for the basis-decay condition.

    grid maps (offset p, length m) to the smallest q such that the
    basis-lift size a_(jq+p') stays at or below epsilon for every
    1 <= j <= m and every offset p' <= p; None marks an exhausted (and
    therefore inconclusive) cell.  The comparison is boundary-inclusive:
    a graded family whose deepest basis size equals epsilon exactly
    still certifies the cell.
    """

    grid: dict
    epsilon: Fraction
    bounds: tuple[int, int, int]
    offset_zero_included: bool = True

    @property
    def fully_populated(self) -> bool:
        return all(q is not None for q in self.grid.values())

    def cell(self, p: int, m: int) -> int | None:
        return self.grid[(p, m)]


def shift_ap_criterion(
    weights: WeightSpec,
    space: SpaceSpec,
    epsilon: Fraction,
    p_max: int,
    m_max: int,
    q_max: int,
) -> CriterionReport:
    """Search each (p, m) cell for the smallest uniform step q <= q_max.

    A cell (p, m) is certified by q when every index jq + p' with
    1 <= j <= m and 0 <= p' <= p has basis-lift size <= epsilon, so one
    q serves all smaller offsets at once.  A fully populated grid is
    finite evidence for the decay condition, never a proof of the limit
    statement; any None cell is inconclusive.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InvalidArgumentError("epsilon must be positive")
    if p_max < 0 or m_max < 1 or q_max < 1:
        raise InvalidArgumentError("grid bounds must be positive (p_max >= 0)")

    sizes: dict[int, Fraction] = {}

    def small(n: int) -> bool:
        a = sizes.get(n)
        if a is None:
            a = weight_product(weights, n)
            sizes[n] = a
        return a <= eps

    grid: dict[tuple[int, int], int | None] = {}
    for p in range(p_max + 1):
        for m in range(1, m_max + 1):
            found = None
            for q in range(1, q_max + 1):
                if all(
                    small(j * q + off) for j in range(1, m + 1) for off in range(p + 1)
                ):
                    found = q
                    break
            grid[(p, m)] = found
    return CriterionReport(grid, eps, (p_max, m_max, q_max))


# ---------------------------------------------------------------------------
# Lifted multiple-recurrence candidates


def lift_vector(weights: WeightSpec, y: FiniteVector, q: int) -> FiniteVector:
    """The weighted forward lift L_q: the exact right inverse of q backward steps.

    Coefficient y_n becomes y_n / (w_(n+1) ... w_(n+q)) at index n + q, so
    applying the weighted backward shift q times returns y exactly.
    """
    if q < 0:
        raise InvalidArgumentError("lift step must be non-negative")
    return FiniteVector(
        {n + q: c * weights.lift_factor(n, q) for n, c in y.items()}
    )


def multirec_candidate(
    weights: WeightSpec, y: FiniteVector, q: int, m: int
) -> FiniteVector:
    """y + L_q(y) + L_q^2(y) + ... + L_q^m(y), the lift-sum candidate."""
    if q < 1:
        raise InvalidArgumentError("step must be positive")
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    x = y
    for j in range(1, m + 1):
        x = x + lift_vector(weights, y, j * q)
    return x


@dataclass(frozen=True)
class RecurrenceWitness:
    """A verified common step: iterate j*q keeps x in the target ball for j <= m."""

    q: int
    x: FiniteVector
    m: int
    verified_memberships: tuple[bool, ...]
    distances: tuple[Fraction, ...] = field(default=(), compare=False)

    @property
    def verified(self) -> bool:
        return len(self.verified_memberships) == self.m + 1 and all(
            self.verified_memberships
        )


def multirec_witness(
    weights: WeightSpec,
    space: SpaceSpec,
    ball: Ball,
    m: int,
    q_max: int,
    mode: str = EXACT,
) -> RecurrenceWitness | None:
    """Search steps q <= q_max for a lift-sum witness with m+1 verified returns.

    Candidates use steps beyond the center's support, so the backward
    shift strips the lifted layers one at a time and the final iterate
    reproduces the center exactly.  None is inconclusive.
    """
    _check_mode(mode)
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    if q_max < 1:
        raise InvalidArgumentError("q_max must be positive")
    y = ball.center
    top = y.max_support()
    start = 1 if top is None else max(1, top + 1)
    seq = Iterates(BackwardShift(weights, space))
    for q in range(start, q_max + 1):
        x = multirec_candidate(weights, y, q, m)
        times = [j * q for j in range(m + 1)]
        checks = verify_return_times(seq, x, ball, times, mode)
        if all(checks):
            gaps = tuple(
                membership_gap(iterate(seq, x, n, mode), ball) for n in times
            )
            return RecurrenceWitness(q, x, m, checks, gaps)
    return None


def homogeneous_ap_union(q_list) -> HitSet:
    """Union of the homogeneous progressions {q_m, 2q_m, ..., m*q_m}.

    With steps q_1..q_M this always contains the length-M progression of
    step q_M, so the result feeds directly into homogeneous-AP probes.
    """
    steps = list(q_list)
    if not steps:
        raise InvalidArgumentError("need at least one step")
    if any(q < 1 for q in steps):
        raise InvalidArgumentError("steps must be positive")
    out: set[int] = set()
    for m, q in enumerate(steps, start=1):
        out.update(l * q for l in range(1, m + 1))
    return HitSet.from_iterable(out)


# ---------------------------------------------------------------------------
# Basis-decay evidence along a candidate return sequence


@dataclass(frozen=True)
class DecayProbe:
    """Per-basis-vector norms along the candidate sequence."""

    index: int
    backward_norms: tuple[Fraction, ...]
    lift_norms: tuple[Fraction, ...]


@dataclass(frozen=True)
class DecayReport:
    """Finite decay evidence: shrinking lift norms + homogeneous structure.

    The verdict aggregates the *tail* of the sequence (its second half):
    passed means every tail lift norm sits strictly below epsilon.  The
    backward norms of basis probes vanish outright once the step exceeds
    the probe index, so the lift norms carry all the content.
    """

    steps: tuple[int, ...]
    probes: tuple[DecayProbe, ...]
    tail_start: int
    max_tail_lift: Fraction
    epsilon: Fraction
    passed: bool
    homogeneous: tuple[tuple[int, int | None], ...]


def sequence_decay_check(
    weights: WeightSpec,
    space: SpaceSpec,
    seq: HitSet,
    probe_indices,
    epsilon: Fraction = Fraction(1, 100),
    ap_lengths=(1, 2, 3, 4, 5, 6, 7),
) -> DecayReport:
    """Evaluate backward/lift norms of basis probes along a step sequence.

    For probe e_i and step n the backward norm is a_(i-n)/a_i (zero once
    n > i on the unilateral side) and the lift norm is a_(i+n)/a_i; both
    are single-coefficient vectors, so the value is the same for every
    l_p norm.  Homogeneous-AP evidence on the sequence is attached for
    each requested length.
    """
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InvalidArgumentError("epsilon must be positive")
    steps = tuple(seq)
    if not steps:
        raise InvalidArgumentError("sequence must be non-empty")
    probes = []
    for i in probe_indices:
        if i < 0:
            raise InvalidArgumentError("probe indices must be non-negative")
        a_i = weight_product(weights, i)
        back = tuple(
            weight_product(weights, i - n) / a_i if n <= i else Fraction(0)
            for n in steps
        )
        lift = tuple(weight_product(weights, i + n) / a_i for n in steps)
        probes.append(DecayProbe(i, back, lift))
    if not probes:
        raise InvalidArgumentError("need at least one probe index")
    tail_start = len(steps) // 2
    max_tail = max(
        (p.lift_norms[t] for p in probes for t in range(tail_start, len(steps))),
    )
    hom = []
    for length in ap_lengths:
        w = find_homogeneous_ap(seq, length)
        hom.append((length, None if w is None else w.step))
    return DecayReport(
        steps=steps,
        probes=tuple(probes),
        tail_start=tail_start,
        max_tail_lift=max_tail,
        epsilon=eps,
        passed=max_tail < eps,
        homogeneous=tuple(hom),
    )


# ---------------------------------------------------------------------------
# Universal vectors for scaled orbits of the plain backward shift


def _scalar_value(scalars: ScalarSeq, n: int, mode: str) -> Fraction:
    if mode == EXACT:
        return scalars.value(n)
    return Fraction(scalars.value_float(n))


def universal_vector(
    scalars: ScalarSeq, y: FiniteVector, m: int, k: int, mode: str = EXACT
) -> FiniteVector:
    """y + S^k(y)/lambda_k + ... + S^(mk)(y)/lambda_(mk) for the plain shift.

    S is the unweighted forward shift, so the j-th layer is y's support
    translated by j*k and scaled by 1/lambda_(jk); the layers are
    disjoint because k exceeds y's support.
    """
    _check_mode(mode)
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    if k < 1:
        raise InvalidArgumentError("k must be positive")
    top = y.max_support()
    if top is not None and k <= top:
        raise PreconditionError(
            f"k = {k} must exceed the maximal support index {top} of y"
        )
    if top is not None and y.min_support() < 0:
        raise InvalidArgumentError("y must be supported on non-negative indices")
    out = y
    for j in range(1, m + 1):
        lam = _scalar_value(scalars, j * k, mode)
        out = out + y.shift_support(j * k).scale(1 / lam)
    return out


def verify_universal(
    scalars: ScalarSeq,
    y: FiniteVector,
    m: int,
    k: int,
    space: SpaceSpec,
    mode: str = EXACT,
):
    """max over 1 <= l <= m of || lambda_(lk) B^(lk) ytilde  -  y ||.

    B is the plain unilateral backward shift.  The l = m term vanishes
    exactly; each earlier term is a tail of scaled translates of y.
    Returns an exact rational in exact mode (squared for p = 2) and a
    float in float mode; m = 0 gives zero.
    """
    _check_mode(mode)
    ytilde = universal_vector(scalars, y, m, k, mode)
    shift_space = SpaceSpec(space.p, UNILATERAL)
    seq = ScaledIterates(scalars, BackwardShift(UnitWeights(), shift_space))
    worst = Fraction(0)
    for l in range(1, m + 1):
        v = iterate(seq, ytilde, l * k, mode)
        worst = max(worst, _norm(v - y, space.p))
    if mode == FLOAT:
        return float(worst)
    return worst


def _norm(v: FiniteVector, p) -> Fraction:
    if p == 1:
        return v.l1()
    if p == 2:
        return v.l2_squared()
    return v.sup()


# ---------------------------------------------------------------------------
# Exact inverse-orbit bookkeeping (bilateral shifts)


def inverse_witness(op: Operator, x: FiniteVector, n: int, m: int) -> FiniteVector:
    """y = T^(mn) x, with the pull-back contract re-verified exactly.

    For each 0 <= j <= m the inverse iterate T^(-jn) y must equal
    T^((m-j)n) x coefficient-for-coefficient; any mismatch is an internal
    soundness failure, not an inconclusive search.
    """
    if n < 1 or m < 1:
        raise InvalidArgumentError("n and m must be positive")
    inv = invert(op)
    y = iterate(Iterates(op), x, m * n)
    for j in range(m + 1):
        back = iterate(Iterates(inv), y, j * n)
        fwd = iterate(Iterates(op), x, (m - j) * n)
        if back != fwd:
            raise WorkbenchError(
                f"inverse contract failed at j = {j}: {back!r} != {fwd!r}"
            )
    return y


# ---------------------------------------------------------------------------
# Pair search (two points, one arithmetic pattern, two targets)


@dataclass(frozen=True)
class PairWitness:
    """Verified pair: x1, x2 in U and T^(a+jq) x_i in V_i for all j <= m."""

    x1: FiniteVector
    x2: FiniteVector
    a: int
    q: int
    m: int


def pair_recurrence_search(
    weights: WeightSpec,
    space: SpaceSpec,
    U: Ball,
    V1: Ball,
    V2: Ball,
    m: int,
    a_max: int,
    q_max: int,
    mode: str = EXACT,
) -> PairWitness | None:
    """Search for one (a, q) moving two points of U along V1 and V2.

    Candidates stack two lifts: an inner lift-sum toward each V_i center
    (as in multirec_witness) and an outer a-step lift that parks the
    whole packet beyond U's center.  Smallest (q, a) wins; every
    membership of a returned pair is re-verified from scratch.  None is
    inconclusive.
    """
    _check_mode(mode)
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    if a_max < 1 or q_max < 1:
        raise InvalidArgumentError("bounds must be positive")
    seq = Iterates(BackwardShift(weights, space))
    y_u = U.center
    a_top = y_u.max_support()
    a_start = 1 if a_top is None else max(1, a_top + 1)
    q_top = max(
        (c.max_support() for c in (V1.center, V2.center) if c.max_support() is not None),
        default=None,
    )
    q_start = 1 if q_top is None else max(1, q_top + 1)
    for q in range(q_start, q_max + 1):
        z1 = multirec_candidate(weights, V1.center, q, m)
        z2 = multirec_candidate(weights, V2.center, q, m)
        for a in range(a_start, a_max + 1):
            x1 = y_u + lift_vector(weights, z1, a)
            x2 = y_u + lift_vector(weights, z2, a)
            times = [a + j * q for j in range(m + 1)]
            ok = (
                all(verify_return_times(seq, x1, U, [0], mode))
                and all(verify_return_times(seq, x2, U, [0], mode))
                and all(verify_return_times(seq, x1, V1, times, mode))
                and all(verify_return_times(seq, x2, V2, times, mode))
            )
            if ok:
                return PairWitness(x1, x2, a, q, m)
    return None


# ---------------------------------------------------------------------------
# Nested ball refinement toward an approximately recurrent point


@dataclass(frozen=True)
class NestedStage:
    """One refinement stage: the ball, its step, and the witness behind it."""

    ball: Ball
    q: int | None
    witness: RecurrenceWitness | None


@dataclass(frozen=True)
class NestedRefinement:
    """Chain U = U_0 containing U_1 ... U_M with halving radii."""

    stages: tuple[NestedStage, ...]
    point: FiniteVector


def nested_ball_refinement(
    weights: WeightSpec,
    space: SpaceSpec,
    U: Ball,
    M: int,
    q_max: int,
    mode: str = EXACT,
) -> NestedRefinement:
    """Drive the witness search through M shrinking balls.

    Stage m searches the quarter-radius ball around the current center
    for a length-m witness, then recenters on that witness with half the
    radius: the quarter-radius slack is exactly what keeps both the
    containment U_m inside U_(m-1) and the stage's own returns inside
    U_m.  The stage-M center is the approximate recurrent point.  A
    failed stage raises stage-failure carrying the completed prefix
    (inconclusive, as always).
    """
    _check_mode(mode)
    if M < 0:
        raise InvalidArgumentError("M must be non-negative")
    stages = [NestedStage(U, None, None)]
    current = U
    for stage in range(1, M + 1):
        probe = Ball(current.center, current.radius / 4, current.space)
        w = multirec_witness(weights, space, probe, stage, q_max, mode)
        if w is None:
            raise StageFailureError(stage, tuple(stages))
        nxt = Ball(w.x, current.radius / 2, current.space)
        stages.append(NestedStage(nxt, w.q, w))
        current = nxt
    return NestedRefinement(tuple(stages), current.center)


# ---------------------------------------------------------------------------
# Scaled-orbit joint return counting


def joint_return_count(
    scalars: ScalarSeq,
    op: Operator,
    x: FiniteVector,
    ball: Ball,
    m: int,
    q: int,
    horizon: int,
    mode: str = EXACT,
) -> int:
    """Count a <= horizon with lambda_a T^(a+iq) x in the ball for all i <= m.

    The scalar is pinned at a across the whole pattern: this unfolds
    membership of lambda_a T^a x in the intersection of the q-step
    pull-backs of the ball.
    """
    _check_mode(mode)
    if m < 0:
        raise InvalidArgumentError("m must be non-negative")
    if q < 1:
        raise InvalidArgumentError("q must be positive")
    if horizon < 0:
        raise InvalidArgumentError("horizon must be non-negative")
    tol = _tolerance(mode)
    top = horizon + m * q
    iterates: list[FiniteVector] = [x]
    for _ in range(top):
        iterates.append(apply(op, iterates[-1]))
    count = 0
    for a in range(horizon + 1):
        lam = _scalar_value(scalars, a, mode)
        if all(
            in_ball(iterates[a + i * q].scale(lam), ball, tol) for i in range(m + 1)
        ):
            count += 1
    return count
