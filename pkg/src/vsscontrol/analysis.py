"""Monte-Carlo tamper injection.

Each trial deals fresh shares, corrupts the victims' payloads and runs
verification rounds that involve a victim. The empirical detection rate is
compared with the analytic ``1 - 2**(-m*r)``.

Detection does not depend on the secret's value; each deal attempt draws
a fresh uniform secret.

Trial ``i`` draws all of its randomness from ``Random(f"{seed}/{i}")`` so
results do not depend on how trials are scheduled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .access import AuthorizedSet, VerificationStructure
from .algebra import BitVector
from .control import ControlFunction, TableControl, random_balanced_table
from .dealer import ExtendedShare, InconsistentDealing, deal
from .protocol import run_round, validity_probability
from .sharing import XOR, Combiner

TAMPER_KINDS = ("flip_random_bit", "replace_random_share", "identity")
TARGETS = ("secret_part", "control_part", "either")


@dataclass(frozen=True)
class TamperModel:
    kind: str = "replace_random_share"
    target: str = "either"
    victims: tuple[int, ...] = (1,)

    def __post_init__(self):
        if self.kind not in TAMPER_KINDS:
            raise ValueError(f"unknown tamper kind {self.kind!r}")
        if self.target not in TARGETS:
            raise ValueError(f"unknown tamper target {self.target!r}")
        object.__setattr__(self, "victims", tuple(sorted(set(self.victims))))
        if not self.victims and self.kind != "identity":
            raise ValueError("tampering needs at least one victim")


def _region(target: str, l: int, m: int) -> tuple[int, int]:
    return {"secret_part": (0, l), "control_part": (l, l + m), "either": (0, l + m)}[target]


def tamper_payload(payload: BitVector, kind: str, start: int, stop: int,
                   rng: random.Random, bit: int | None = None) -> BitVector:
    """Corrupt bits ``start..stop-1`` (MSB-first) of ``payload``.

    ``flip_random_bit`` flips one bit (``bit`` if given, else a random one);
    ``replace_random_share`` substitutes a uniformly random different value
    for the whole region.
    """
    if kind == "identity":
        return payload
    if kind == "flip_random_bit":
        i = rng.randrange(start, stop) if bit is None else bit
        if not start <= i < stop:
            raise IndexError(f"bit {i} outside region [{start}, {stop})")
        return payload.flip(i)
    if kind == "replace_random_share":
        w = stop - start
        shift = payload.width - stop
        old = payload.value >> shift & ((1 << w) - 1)
        new = rng.randrange((1 << w) - 1)
        if new >= old:
            new += 1
        return BitVector(payload.value ^ (old ^ new) << shift, payload.width)
    raise ValueError(f"unknown tamper kind {kind!r}")


def apply_tamper(shares: Sequence[ExtendedShare], model: TamperModel,
                 rng: random.Random) -> list[ExtendedShare]:
    out = []
    for s in shares:
        if s.owner in model.victims and model.kind != "identity":
            l, m = s.secret_part.width, s.control_part.width
            start, stop = _region(model.target, l, m)
            payload = tamper_payload(s.payload, model.kind, start, stop, rng)
            s = ExtendedShare.from_payload(s.owner, payload, l, m)
        out.append(s)
    return out


@dataclass(frozen=True)
class EstimateConfig:
    """Everything a trial needs apart from the tamper model.

    ``scope="round"`` runs one random round touching a victim per trial;
    ``scope="protocol"`` runs all of them and counts a detection if any
    fails. Rounds are drawn from ``auth`` when given, else from the whole
    structure.
    """

    scheme: object
    vs: VerificationStructure
    control: ControlFunction
    strategy: str = "constrained"
    c1: Combiner = XOR
    c2: Combiner = XOR
    auth: AuthorizedSet | None = None
    scope: str = "round"
    max_attempts: int = 4096

    def __post_init__(self):
        if self.scope not in ("round", "protocol"):
            raise ValueError(f"unknown scope {self.scope!r}")


@dataclass(frozen=True)
class DetectionEstimate:
    m: int
    trials: int
    detected: int
    analytic: float
    rounds: int = 1
    redeals: int = field(default=0, compare=False)

    def __post_init__(self):
        if not 0 <= self.detected <= self.trials:
            raise ValueError("detected must lie in [0, trials]")

    @property
    def rate(self) -> float:
        return self.detected / self.trials

    @property
    def abs_error(self) -> float:
        return abs(self.rate - self.analytic)


def _candidate_rounds(config: EstimateConfig, model: TamperModel):
    pool = config.vs.within(config.auth) if config.auth is not None else list(config.vs)
    if model.kind == "identity" and not model.victims:
        return pool
    return [v for v in pool if set(v.members) & set(model.victims)]


def estimate_detection_rate(config: EstimateConfig, model: TamperModel,
                            trials: int, seed: int = 0) -> DetectionEstimate:
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    candidates = _candidate_rounds(config, model)
    if not candidates:
        raise ValueError(f"no VSoP involves victims {model.victims}")
    scheme = config.scheme
    detected = 0
    redeals = 0
    for i in range(trials):
        rng = random.Random(f"{seed}/{i}")
        shares = None
        for _ in range(config.max_attempts):
            # some secrets admit no consistent deal in small fields, so the
            # secret is redrawn along with the sharing randomness
            secret = scheme.random_secret(rng)
            try:
                shares = deal(scheme, secret, config.vs, config.control, rng,
                              c1=config.c1, c2=config.c2, strategy=config.strategy,
                              diagnose=False)
                break
            except InconsistentDealing:
                redeals += 1
        if shares is None:
            raise RuntimeError(
                f"no consistent deal in {config.max_attempts} attempts; "
                "choose a structure or control function with fewer constraints"
            )
        held = {s.owner: s for s in apply_tamper(shares, model, rng)}
        chosen = [rng.choice(candidates)] if config.scope == "round" else candidates
        for vsop in chosen:
            r = run_round([held[j] for j in vsop], config.control, config.c1, config.c2, vsop=vsop)
            if not r.passed:
                detected += 1
                break
    rounds = 1 if config.scope == "round" else len(candidates)
    m = config.control.m
    return DetectionEstimate(m, trials, detected, validity_probability(m, rounds), rounds, redeals)


def random_vector_control(l: int, m: int, seed: int) -> TableControl:
    """``m`` independent random balanced tables on ``l`` bits."""
    if not 1 <= m < l:
        raise ValueError(f"need 1 <= m < l, got l={l}, m={m}")
    rng = random.Random(f"tables/{seed}/{l}/{m}")
    return TableControl([random_balanced_table(l, rng) for _ in range(m)], name=f"random{m}")


def sweep_m(config: EstimateConfig, m_values: Sequence[int], trials: int,
            model: TamperModel | None = None, seed: int = 0,
            factory: Callable[[int], ControlFunction] | None = None) -> list[DetectionEstimate]:
    """One detection estimate per control width in ``m_values``.

    ``factory`` builds the control function for each ``m``; by default a
    vector of random balanced tables.
    """
    model = model or TamperModel()
    l = config.scheme.l
    for m in m_values:
        if not 1 <= m < l:
            raise ValueError(f"control width m={m} must satisfy 1 <= m < l={l}")
    build = factory or (lambda m: random_vector_control(l, m, seed))
    return [
        estimate_detection_rate(replace(config, control=build(m)), model, trials, seed)
        for m in m_values
    ]


def format_table(estimates: Sequence[DetectionEstimate]) -> str:
    lines = [f"{'m':>3} {'trials':>8} {'detected':>9} {'rate':>9} {'analytic':>9} {'abs_error':>9}"]
    for e in estimates:
        lines.append(
            f"{e.m:>3} {e.trials:>8} {e.detected:>9} {e.rate:>9.6f} {e.analytic:>9.6f} {e.abs_error:>9.6f}"
        )
    return "\n".join(lines) + "\n"
