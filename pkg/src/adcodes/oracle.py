"""Brute-force numerical verification of synthesized codes.

This module is the independent witness for the exact pipeline: it builds the
codewords as explicit sparse multimode Fock states, applies photon-loss Kraus
operators in double precision, and checks the error-correction conditions by
direct inner products.  Exactness claims live in :mod:`adcodes.synthesis`; the
oracle deliberately repeats them approximately, by a different route.

Violation tolerances default to 1e-10.  At the mode counts where the full
check is feasible the accumulated roundoff sits far below that.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .partitions import (
    OccupationVector,
    count_error_vectors,
    enumerate_error_vectors,
    enumerate_orbit,
    enumerate_weight_vectors,
    error_labels,
    orbit_size,
)
from .synthesis import CodeSpec

STATE_SUPPORT_CAP = 500_000
FULL_SCOPE_CAP = 300
DEFAULT_TOLERANCE = 1e-10


class CapExceeded(RuntimeError):
    """A brute-force enumeration would exceed its configured size cap."""


@dataclass
class SparseFockState:
    """A real-amplitude state stored as a map from occupation vectors.

    Zero amplitudes are dropped on construction; the map is mutated only by
    the in-place helpers used during orthonormalization.
    """

    amplitudes: dict[OccupationVector, float]
    n: int

    def __post_init__(self) -> None:
        self.amplitudes = {key: amp for key, amp in self.amplitudes.items() if amp != 0.0}

    def norm_squared(self) -> float:
        # fsum: compensated accumulation, keeps wide superpositions near exact
        return math.fsum(amp * amp for amp in self.amplitudes.values())

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def inner(self, other: "SparseFockState") -> float:
        small, large = self.amplitudes, other.amplitudes
        if len(large) < len(small):
            small, large = large, small
        return math.fsum(amp * large.get(key, 0.0) for key, amp in small.items())

    def scaled(self, factor: float) -> "SparseFockState":
        return SparseFockState({k: factor * a for k, a in self.amplitudes.items()}, self.n)

    def subtract_scaled(self, factor: float, other: "SparseFockState") -> None:
        amps = self.amplitudes
        for key, amp in other.amplitudes.items():
            value = amps.get(key, 0.0) - factor * amp
            if value == 0.0:
                amps.pop(key, None)
            else:
                amps[key] = value


@dataclass(frozen=True)
class VerificationReport:
    """Maximal violations of the three error-correction conditions."""

    scope: str
    pairs_checked: int
    max_nondeformation_violation: float
    max_offdiag_violation: float
    max_ortho_violation: float

    def max_violation(self) -> float:
        return max(
            self.max_nondeformation_violation,
            self.max_offdiag_violation,
            self.max_ortho_violation,
        )

    def passes(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        return self.max_violation() < tolerance


def dicke_state(q: OccupationVector, cap: int = STATE_SUPPORT_CAP) -> SparseFockState:
    """The uniform superposition over all distinct reorderings of ``q``."""
    size = orbit_size(q)
    if size > cap:
        raise CapExceeded(f"orbit of {q} has {size} elements, exceeding the cap of {cap}")
    amplitude = 1.0 / math.sqrt(size)
    return SparseFockState({vector: amplitude for vector in enumerate_orbit(q)}, len(q))


def codeword_state(spec: CodeSpec, which: str, cap: int = STATE_SUPPORT_CAP) -> SparseFockState:
    """Materialize one logical codeword of ``spec`` as a sparse state."""
    if which == "zero":
        weights = spec.zero_weights
    elif which == "one":
        weights = spec.one_weights
    else:
        raise ValueError(f"which must be 'zero' or 'one', got {which!r}")
    support = sum(orbit_size(label) for label in weights)
    if support > cap:
        raise CapExceeded(f"codeword support has {support} terms, exceeding the cap of {cap}")
    amplitudes: dict[OccupationVector, float] = {}
    for label, weight in weights.items():
        component = math.sqrt(float(weight) / orbit_size(label))
        for vector in enumerate_orbit(label):
            amplitudes[vector] = component
    state = SparseFockState(amplitudes, spec.n)
    if abs(state.norm_squared() - 1.0) > 1e-12:
        raise ArithmeticError("codeword failed its unit-norm check")
    return state


def apply_AD(k: OccupationVector, psi: SparseFockState, gamma: float) -> SparseFockState:
    """Apply the loss operator removing ``k[m]`` photons from mode ``m``.

    Per mode: |y> -> sqrt(C(y, k)) sqrt((1-gamma)^(y-k) gamma^k) |y-k>, and
    terms with fewer than ``k`` photons in some mode vanish.
    """
    if len(k) != psi.n:
        raise ValueError("loss vector length does not match the state")
    result: dict[OccupationVector, float] = {}
    for occupation, amplitude in psi.amplitudes.items():
        factor = amplitude
        for y, loss in zip(occupation, k):
            if loss == 0:
                factor *= math.sqrt((1 - gamma) ** y)
                continue
            if y < loss:
                factor = 0.0
                break
            factor *= math.sqrt(math.comb(y, loss) * (1 - gamma) ** (y - loss) * gamma**loss)
        if factor != 0.0:
            key = tuple(y - loss for y, loss in zip(occupation, k))
            result[key] = result.get(key, 0.0) + factor
    return SparseFockState(result, psi.n)


def _codewords(spec: CodeSpec, cap: int) -> tuple[SparseFockState, SparseFockState]:
    return codeword_state(spec, "zero", cap=cap), codeword_state(spec, "one", cap=cap)


def _random_loss_vector(rng: random.Random, n: int, max_weight: int) -> OccupationVector:
    kappa = rng.randint(0, max_weight)
    vector = [0] * n
    for _ in range(kappa):
        vector[rng.randrange(n)] += 1
    return tuple(vector)


def kl_verify(
    spec: CodeSpec,
    gamma: float,
    scope: str = "full",
    full_cap: int = FULL_SCOPE_CAP,
    sample_pairs: int = 200,
    seed: int = 7,
    state_cap: int = STATE_SUPPORT_CAP,
) -> VerificationReport:
    """Measure the worst violation of the error-correction conditions.

    ``scope="full"`` sweeps every pair of loss vectors of weight up to ``t``
    and evaluates all three conditions; it refuses when there are more than
    ``full_cap`` loss vectors.  ``scope="partition"`` checks the diagonal
    condition on one representative per loss class (sufficient for
    permutation-invariant codewords, since conjugating a loss by a mode
    permutation preserves its expectation) and spot-checks the orthogonality
    conditions on ``sample_pairs`` seeded random pairs.
    """
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    n, t = spec.n, spec.params.t
    zero, one = _codewords(spec, state_cap)

    if scope == "full":
        losses = enumerate_error_vectors(n, t)
        if len(losses) > full_cap:
            raise CapExceeded(
                f"{len(losses)} loss vectors exceed the cap of {full_cap};"
                " use scope='partition' for large mode counts"
            )
        images0 = [apply_AD(k, zero, gamma) for k in losses]
        images1 = [apply_AD(k, one, gamma) for k in losses]
        nondeform = 0.0
        offdiag = 0.0
        ortho = 0.0
        for i in range(len(losses)):
            nondeform = max(
                nondeform, abs(images0[i].norm_squared() - images1[i].norm_squared())
            )
            for j in range(len(losses)):
                ortho = max(ortho, abs(images0[i].inner(images1[j])))
                if i < j:
                    offdiag = max(
                        offdiag,
                        abs(images0[i].inner(images0[j])),
                        abs(images1[i].inner(images1[j])),
                    )
        return VerificationReport(
            scope="full",
            pairs_checked=len(losses) ** 2,
            max_nondeformation_violation=nondeform,
            max_offdiag_violation=offdiag,
            max_ortho_violation=ortho,
        )

    if scope == "partition":
        nondeform = 0.0
        pairs = 0
        for label in error_labels(t):
            k = label.padded(n)
            delta = abs(
                apply_AD(k, zero, gamma).norm_squared()
                - apply_AD(k, one, gamma).norm_squared()
            )
            nondeform = max(nondeform, delta)
            pairs += 1
        rng = random.Random(seed)
        image_cache: dict[tuple[str, OccupationVector], SparseFockState] = {}

        def image(which: str, k: OccupationVector) -> SparseFockState:
            key = (which, k)
            if key not in image_cache:
                source = zero if which == "zero" else one
                image_cache[key] = apply_AD(k, source, gamma)
            return image_cache[key]

        offdiag = 0.0
        ortho = 0.0
        for _ in range(sample_pairs):
            kx = _random_loss_vector(rng, n, t)
            ky = _random_loss_vector(rng, n, t)
            ortho = max(ortho, abs(image("zero", kx).inner(image("one", ky))))
            if kx != ky:
                offdiag = max(
                    offdiag,
                    abs(image("zero", kx).inner(image("zero", ky))),
                    abs(image("one", kx).inner(image("one", ky))),
                )
            pairs += 1
        return VerificationReport(
            scope="partition",
            pairs_checked=pairs,
            max_nondeformation_violation=nondeform,
            max_offdiag_violation=offdiag,
            max_ortho_violation=ortho,
        )

    raise ValueError(f"scope must be 'full' or 'partition', got {scope!r}")


def nondegeneracy_check(
    spec: CodeSpec,
    gamma: float,
    scope: str = "full",
    full_cap: int = FULL_SCOPE_CAP,
    state_cap: int = STATE_SUPPORT_CAP,
) -> bool:
    """True when every in-scope loss leaves both codewords with positive norm."""
    n, t = spec.n, spec.params.t
    zero, one = _codewords(spec, state_cap)
    if scope == "full":
        count = count_error_vectors(n, t)
        if count > full_cap:
            raise CapExceeded(
                f"{count} loss vectors exceed the cap of {full_cap};"
                " use scope='partition' for large mode counts"
            )
        losses = enumerate_error_vectors(n, t)
    elif scope == "partition":
        losses = [label.padded(n) for label in error_labels(t)]
        losses.insert(0, (0,) * n)
    else:
        raise ValueError(f"scope must be 'full' or 'partition', got {scope!r}")
    for k in losses:
        for word in (zero, one):
            if apply_AD(k, word, gamma).norm_squared() <= 0.0:
                return False
    return True


def permute_state(state: SparseFockState, permutation: tuple[int, ...]) -> SparseFockState:
    """Reorder the modes of a state: entry ``m`` of each key moves to ``permutation[m]``."""
    if sorted(permutation) != list(range(state.n)):
        raise ValueError("not a permutation of the mode indices")
    amplitudes: dict[OccupationVector, float] = {}
    for key, amp in state.amplitudes.items():
        permuted = [0] * state.n
        for position, value in zip(permutation, key):
            permuted[position] = value
        amplitudes[tuple(permuted)] = amp
    return SparseFockState(amplitudes, state.n)


def state_is_permutation_invariant(
    state: SparseFockState, permutations: list[tuple[int, ...]]
) -> bool:
    """Exact invariance of the sparse map under each permutation (no tolerance)."""
    amps = state.amplitudes
    for permutation in permutations:
        for key, amp in amps.items():
            permuted = [0] * state.n
            for position, value in zip(permutation, key):
                permuted[position] = value
            if amps.get(tuple(permuted)) != amp:
                return False
    return True


def permutation_invariance_check(
    spec: CodeSpec,
    sample_size: int = 20,
    seed: int = 0,
    state_cap: int = STATE_SUPPORT_CAP,
) -> bool:
    """Both codewords are exactly unchanged under sampled mode permutations."""
    rng = random.Random(seed)
    permutations = []
    for _ in range(sample_size):
        perm = list(range(spec.n))
        rng.shuffle(perm)
        permutations.append(tuple(perm))
    zero, one = _codewords(spec, state_cap)
    return state_is_permutation_invariant(zero, permutations) and state_is_permutation_invariant(
        one, permutations
    )


def prop_identity_check(
    x: OccupationVector, kappa: int, gamma: float, cap: int = STATE_SUPPORT_CAP
) -> float:
    """Residual of the weight-resolved loss identity on the basis state ``x``.

    Sums ``||A_k |x>||^2`` over every loss vector of weight ``kappa`` by brute
    force and compares with the closed form
    ``(1-gamma)^(chi-kappa) gamma^kappa C(chi, kappa)`` for ``chi = sum(x)``.
    """
    n = len(x)
    count = math.comb(kappa + n - 1, n - 1)
    if count > cap:
        raise CapExceeded(f"{count} loss vectors of weight {kappa} exceed the cap of {cap}")
    state = SparseFockState({tuple(x): 1.0}, n)
    chi = sum(x)
    lhs = 0.0
    for k in enumerate_weight_vectors(kappa, n):
        lhs += apply_AD(k, state, gamma).norm_squared()
    rhs = (1 - gamma) ** (chi - kappa) * gamma**kappa * math.comb(chi, kappa)
    return abs(lhs - rhs)


def total_loss_norm(psi: SparseFockState, gamma: float) -> float:
    """Total squared norm of ``psi`` after the loss channel, over all loss vectors.

    For a trace-preserving channel this is exactly 1; used as a bookkeeping
    check at small mode counts.
    """
    chi = max(sum(key) for key in psi.amplitudes)
    total = 0.0
    for kappa in range(chi + 1):
        for k in enumerate_weight_vectors(kappa, psi.n):
            total += apply_AD(k, psi, gamma).norm_squared()
    return total


def entanglement_fidelity(
    spec: CodeSpec,
    gamma: float,
    max_modes: int = 6,
    gs_tolerance: float = 1e-12,
    state_cap: int = STATE_SUPPORT_CAP,
) -> float:
    """Entanglement fidelity of the code under measure-and-correct recovery.

    The recovery orthonormalizes the loss images of the codewords per
    correctable syndrome (modified Gram-Schmidt; vectors below the drop
    tolerance are exact zeros for non-degenerate codes) and maps each image
    back to its codeword.  The loss channel keeps every Kraus operator with
    per-mode losses up to the code's excitation number; heavier losses
    annihilate the code support, so the truncation is lossless.
    """
    n, t = spec.n, spec.params.t
    if n > max_modes:
        raise CapExceeded(
            f"explicit recovery supported only up to {max_modes} modes, got {n}"
        )
    words = _codewords(spec, state_cap)
    syndromes = enumerate_error_vectors(n, t)

    accepted: list[SparseFockState] = []
    recovery: dict[tuple[int, int], SparseFockState] = {}
    for syndrome_index, k in enumerate(syndromes):
        for logical, word in enumerate(words):
            image = apply_AD(k, word, gamma)
            for basis_vector in accepted:
                overlap = basis_vector.inner(image)
                if overlap != 0.0:
                    image.subtract_scaled(overlap, basis_vector)
            norm = image.norm()
            if norm < gs_tolerance:
                continue
            unit = image.scaled(1.0 / norm)
            accepted.append(unit)
            recovery[(syndrome_index, logical)] = unit

    total_excitation = spec.total_excitation
    channel_losses = enumerate_error_vectors(n, total_excitation)
    code_overlaps = [[word.inner(v) for v in accepted] for word in words]

    fidelity = 0.0
    for logical, word in enumerate(words):
        for k in channel_losses:
            damaged = apply_AD(k, word, gamma)
            if not damaged.amplitudes:
                continue
            overlaps = [v.inner(damaged) for v in accepted]
            # measure-and-correct Kraus operators, one per syndrome
            for (syndrome_index, target), unit in recovery.items():
                if target == logical:
                    amplitude = unit.inner(damaged)
                    fidelity += amplitude * amplitude
            # completion Kraus operator: the projector onto the uncorrected rest
            residual = word.inner(damaged)
            for overlap, code_overlap in zip(overlaps, code_overlaps[logical]):
                residual -= code_overlap * overlap
            fidelity += residual * residual
    return fidelity / 2.0


def report_json_dict(
    spec: CodeSpec,
    gamma: float,
    scope: str = "full",
    full_cap: int = FULL_SCOPE_CAP,
    sample_pairs: int = 200,
    seed: int = 7,
    state_cap: int = STATE_SUPPORT_CAP,
    perm_samples: int = 20,
) -> dict:
    """The serializable verification record for one damping strength."""
    report = kl_verify(
        spec,
        gamma,
        scope=scope,
        full_cap=full_cap,
        sample_pairs=sample_pairs,
        seed=seed,
        state_cap=state_cap,
    )
    nondegenerate = nondegeneracy_check(
        spec, gamma, scope=scope, full_cap=full_cap, state_cap=state_cap
    )
    invariant = permutation_invariance_check(
        spec, sample_size=perm_samples, seed=seed, state_cap=state_cap
    )
    return {
        "scope": report.scope,
        "gamma": gamma,
        "pairs_checked": report.pairs_checked,
        "max_violation": {
            "nondeform": report.max_nondeformation_violation,
            "offdiag": report.max_offdiag_violation,
            "ortho": report.max_ortho_violation,
        },
        "nondegenerate": nondegenerate,
        "permutation_invariant": invariant,
    }
