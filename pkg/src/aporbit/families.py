"""Arithmetic-progression structure and density proxies for finite integer sets.

Progression lengths count terms throughout this module: a singleton is a
progression of length 1 and {a, a+d, ..., a+(L-1)d} has length L.  Callers
that think in "repeats after the first visit" must add one themselves; the
command-line layer is the only place that translation happens.

Density values are finite-horizon proxies computed by exact rational
counting.  They stand in for limit quantities that no finite observation
can certify, so the field names keep the word "proxy".
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InvalidArgumentError


@dataclass(frozen=True)
class HitSet:
    """Strictly increasing non-negative integers observed up to a horizon."""

    elements: tuple[int, ...]
    horizon: int

    def __post_init__(self) -> None:
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        if self.horizon < 0:
            raise InvalidArgumentError("horizon must be non-negative")
        prev = -1
        for e in elems:
            if e <= prev:
                raise InvalidArgumentError("elements must be strictly increasing")
            prev = e
        if elems and (elems[0] < 0 or elems[-1] > self.horizon):
            raise InvalidArgumentError("elements must lie in [0, horizon]")
        object.__setattr__(self, "_members", frozenset(elems))

    @classmethod
    def from_iterable(cls, values, horizon: int | None = None) -> "HitSet":
        elems = tuple(sorted(set(values)))
        if horizon is None:
            horizon = elems[-1] if elems else 0
        return cls(elems, horizon)

    def __contains__(self, n: int) -> bool:
        return n in self._members

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class APWitness:
    """A certified arithmetic progression initial, initial+step, ..."""

    initial: int
    step: int
    length: int

    def __post_init__(self) -> None:
        if self.initial < 0:
            raise InvalidArgumentError("initial term must be non-negative")
        if self.step < 1:
            raise InvalidArgumentError("step must be positive")
        if self.length < 1:
            raise InvalidArgumentError("length counts terms and must be >= 1")

    def terms(self) -> tuple[int, ...]:
        return tuple(self.initial + j * self.step for j in range(self.length))


def verify_witness(witness: APWitness, hits: HitSet) -> bool:
    """Term-by-term membership check, independent of any search code."""
    return all(t in hits for t in witness.terms())


def longest_ap(hits: HitSet) -> APWitness | None:
    """Longest progression contained in the set.

    Ties are broken by smallest step, then smallest initial term.  A
    singleton set yields a length-1 witness with step 1; the empty set
    yields None.
    """
    elems = hits.elements
    if not elems:
        return None
    if len(elems) == 1:
        return APWitness(elems[0], 1, 1)
    # table[j] maps a step d to the length of the longest progression with
    # step d ending at elems[j]
    table: list[dict[int, int]] = [dict() for _ in elems]
    best_len = 2
    for j in range(1, len(elems)):
        aj = elems[j]
        row = table[j]
        for i in range(j):
            d = aj - elems[i]
            length = table[i].get(d, 1) + 1
            row[d] = length
            if length > best_len:
                best_len = length
    candidates = []
    for j, row in enumerate(table):
        for d, length in row.items():
            if length == best_len:
                candidates.append((d, elems[j] - (best_len - 1) * d))
    step, initial = min(candidates)
    return APWitness(initial, step, best_len)


def find_ap(hits: HitSet, length: int) -> APWitness | None:
    """First progression of exactly the requested length.

    Enumeration order is lexicographic in (step, initial).  Length 1 picks
    the smallest element with the conventional step 1.
    """
    if length < 1:
        raise InvalidArgumentError("length must be >= 1")
    if len(hits) < length:
        return None
    elems = hits.elements
    if length == 1:
        return APWitness(elems[0], 1, 1)
    max_step = (elems[-1] - elems[0]) // (length - 1)
    for step in range(1, max_step + 1):
        reach = (length - 1) * step
        for a in elems:
            if a + reach > elems[-1]:
                break
            if all(a + j * step in hits for j in range(1, length)):
                return APWitness(a, step, length)
    return None


def find_homogeneous_ap(hits: HitSet, length: int) -> APWitness | None:
    """Smallest q with {q, 2q, ..., length*q} contained in the set."""
    if length < 1:
        raise InvalidArgumentError("length must be >= 1")
    elems = hits.elements
    if not elems:
        return None
    for q in range(1, elems[-1] // length + 1):
        if all(j * q in hits for j in range(1, length + 1)):
            return APWitness(q, q, length)
    return None


def count_aps_with_step(hits: HitSet, step: int, length: int) -> int:
    """Number of initial terms whose progression stays inside the set."""
    if step < 1:
        raise InvalidArgumentError("step must be positive")
    if length < 1:
        raise InvalidArgumentError("length must be >= 1")
    count = 0
    for a in hits.elements:
        if all(a + j * step in hits for j in range(1, length)):
            count += 1
    return count


@dataclass(frozen=True)
class StepVerdict:
    """Smallest qualifying step, or None when the bounded scan found none.

    A None step is inconclusive: only steps up to the horizon were tried,
    so a fail verdict never refutes membership in the underlying family.
    """

    step: int | None
    count: int
    threshold: int
    length: int

    @property
    def passed(self) -> bool:
        return self.step is not None


def ap_bar_estimate(hits: HitSet, length: int, threshold: int) -> StepVerdict:
    """Scan steps 1..horizon for one carrying >= threshold progressions."""
    if length < 1:
        raise InvalidArgumentError("length must be >= 1")
    if threshold < 1:
        raise InvalidArgumentError("threshold must be >= 1")
    if length == 1:
        # every step carries exactly |set| progressions
        if len(hits) >= threshold:
            return StepVerdict(1, len(hits), threshold, length)
        return StepVerdict(None, 0, threshold, length)
    for step in range(1, hits.horizon + 1):
        c = count_aps_with_step(hits, step, length)
        if c >= threshold:
            return StepVerdict(step, c, threshold, length)
    return StepVerdict(None, 0, threshold, length)


@dataclass(frozen=True)
class DensityEstimate:
    """Finite-horizon density proxies.

    lower/upper proxies scan prefix ratios |S cap [0,n]|/(n+1) over the
    second half of the horizon; the windowed proxy maximises over blocks
    of the given window length.  For windows that are small relative to
    the horizon the three values sit in the familiar order; a window
    comparable to the horizon can pull the windowed value below the upper
    proxy, so no ordering is enforced here.
    """

    lower_proxy: Fraction
    upper_proxy: Fraction
    banach_upper_proxy: Fraction
    horizon: int
    window: int


def density_report(hits: HitSet, window: int) -> DensityEstimate:
    h = hits.horizon
    if window < 1 or window > h + 1:
        raise InvalidArgumentError("window must lie in [1, horizon+1]")
    elems = hits.elements
    # prefix ratios over n in [ceil(h/2), h], compared by cross-multiplication
    lo_num, lo_den = 1, 0  # +infinity
    hi_num, hi_den = -1, 1
    for n in range((h + 1) // 2, h + 1):
        c = bisect_right(elems, n)
        if c * lo_den < lo_num * (n + 1):
            lo_num, lo_den = c, n + 1
        if c * hi_den > hi_num * (n + 1):
            hi_num, hi_den = c, n + 1
    best = 0
    if elems:
        starts = {min(e, h + 1 - window) for e in elems}
        for k in starts:
            c = bisect_right(elems, k + window - 1) - bisect_left(elems, k)
            if c > best:
                best = c
    return DensityEstimate(
        lower_proxy=Fraction(lo_num, lo_den),
        upper_proxy=Fraction(hi_num, hi_den) if hi_den else Fraction(0),
        banach_upper_proxy=Fraction(best, window),
        horizon=h,
        window=window,
    )


def _completes_progression(x: int, chosen: set[int], k: int) -> bool:
    for d in range(1, (x - 1) // (k - 1) + 1):
        if all(x - j * d in chosen for j in range(1, k)):
            return True
    return False


def szemeredi_r(n: int, k: int, budget: int = 25) -> int:
    """Largest size of a k-progression-free subset of {1..n}, exactly.

    Branch and bound over elements in increasing order with a
    best-known-size prune.  Exponential in the worst case, hence the
    budget; the scan order is fixed, so the result is deterministic.
    """
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    if k < 2:
        raise InvalidArgumentError("progression length must be >= 2")
    if n > budget:
        raise BudgetExceededError(f"n={n} exceeds the search budget {budget}")
    if k > n:
        return n
    best = 0
    chosen: set[int] = set()

    def extend(x: int, size: int) -> None:
        nonlocal best
        if size + (n - x + 1) <= best:
            return
        if x > n:
            best = size
            return
        if not _completes_progression(x, chosen, k):
            chosen.add(x)
            extend(x + 1, size + 1)
            chosen.remove(x)
        extend(x + 1, size)

    extend(1, 0)
    return best


def _progression_masks(n: int, k: int) -> list[int]:
    # bit i-1 stands for element i
    out = []
    for d in range(1, (n - 1) // (k - 1) + 1):
        for a in range(1, n - (k - 1) * d + 1):
            m = 0
            for j in range(k):
                m |= 1 << (a + j * d - 1)
            out.append(m)
    return out


def szemeredi_r_naive(n: int, k: int) -> int:
    """Exhaustive oracle: scans all 2^n subsets as bitmasks.

    Kept deliberately separate from the branch-and-bound path so the two
    can confirm each other in tests.
    """
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    if k < 2:
        raise InvalidArgumentError("progression length must be >= 2")
    if k > n:
        return n
    masks = _progression_masks(n, k)
    best = 0
    for subset in range(1 << n):
        c = subset.bit_count()
        if c <= best:
            continue
        if any(subset & m == m for m in masks):
            continue
        best = c
    return best


@dataclass(frozen=True)
class ColoringResult:
    """Outcome of an exhaustive two-coloring scan.

    forced=True means every coloring of {1..n} has a monochromatic
    k-progression (an exhaustively verified fact, not a table lookup);
    otherwise `coloring` holds the first progression-free coloring in
    lexicographic order, element i at string position i-1.
    """

    forced: bool
    coloring: str | None


def vdw_check(n: int, k: int, budget: int = 12) -> ColoringResult:
    if n < 1:
        raise InvalidArgumentError("n must be positive")
    if k < 2:
        raise InvalidArgumentError("progression length must be >= 2")
    if n > budget:
        raise BudgetExceededError(f"n={n} exceeds the search budget {budget}")
    masks = _progression_masks(n, k)
    for bits in range(1 << n):
        good = True
        for m in masks:
            x = bits & m
            if x == m or x == 0:
                good = False
                break
        if good:
            coloring = "".join("1" if bits >> i & 1 else "0" for i in range(n))
            return ColoringResult(False, coloring)
    return ColoringResult(True, None)


def coloring_avoids_progressions(coloring: str, k: int) -> bool:
    """Independent verifier: no color class contains a k-progression."""
    if k < 2:
        raise InvalidArgumentError("progression length must be >= 2")
    n = len(coloring)
    for d in range(1, (n - 1) // (k - 1) + 1):
        for a in range(1, n - (k - 1) * d + 1):
            if len({coloring[a + j * d - 1] for j in range(k)}) == 1:
                return False
    return True
