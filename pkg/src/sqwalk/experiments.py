"""Parameter sweeps that regenerate the theory curves of each figure.

Each ``run_*`` function returns a list of row dicts whose keys follow the
column order in ``COLUMNS``.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import partial
from typing import Callable, Iterable, Sequence

import numpy as np

from . import codec, distill, measures
from .errors import DomainError, SqwalkError
from .walk import (
    TwoParticleState,
    WalkConfig,
    evolve,
    one_particle_initial,
    walk,
    position_distribution,
    position_variance,
    two_particle_final,
)

COLUMNS = {
    "fig2": ["alpha", "variance", "I", "Cc", "E", "C_coin", "C_walker", "C_whole", "codec_skipped"],
    "fig34": ["alpha", "cut", "I", "Cc", "E", "C_whole", "C_part1", "C_part2"],
    "fig5": ["alpha", "pair", "I", "Cc", "MID", "C_pair", "C_a", "C_other"],
    "fig6": ["alpha", "panel", "upper", "lower", "exact_pure"],
    "noise": ["steps", "sigma", "mean_fidelity", "min_fidelity", "conditioning"],
    "simulate": ["alpha", "position", "a_real", "a_imag", "b_real", "b_imag", "probability"],
    "simulate_summary": ["alpha", "mean", "variance", "std"],
    "reconstruct": ["alpha", "fidelity", "residual", "kernel_gap", "condition", "codec_skipped"],
}

FIG34_CUTS = ("AB|CD", "AC|BD", "A|BCD", "B|ACD")
FIG5_PAIRS = ("AB", "AD")
FIG6_PANELS = ("a", "b", "c")
ONE_PARTICLE_LABELS = ("coin", "walker")
TWO_PARTICLE_LABELS = ("A", "B", "C", "D")

# codec failures that fall back to the oracle state (flagged per row)
CODEC_ERRORS = (SqwalkError, ArithmeticError)


@dataclass(frozen=True)
class SweepSpec:
    alpha_start: float = -1.0
    alpha_end: float = 1.0
    points: int = 41
    steps: int = 7
    theta: float = math.pi / 4
    phi_0: float = codec.PHI0_DEFAULT
    seed: int = 0
    noise_sigma: float = 0.0
    via_codec: bool = False
    strict: bool = False

    def __post_init__(self):
        if self.points < 2:
            raise DomainError("points must be >= 2")
        for a in (self.alpha_start, self.alpha_end):
            if not -1.0 <= a <= 1.0:
                raise DomainError(f"alpha range must lie within [-1, 1], got {a}")
        if self.steps < 0:
            raise DomainError("steps must be >= 0")
        if not 0.0 <= self.theta < math.pi:
            raise DomainError("theta must lie in [0, pi)")
        if self.noise_sigma < 0:
            raise DomainError("noise sigma must be >= 0")
        if math.sin(self.phi_0) == 0.0:
            raise DomainError("phi_0 must not be a multiple of pi")

    def alphas(self) -> np.ndarray:
        a = np.linspace(self.alpha_start, self.alpha_end, self.points)
        # snap float noise so that e.g. 0.0 is exactly 0
        return np.round(a, 12) + 0.0

    def to_json(self) -> dict:
        return asdict(self)


def spec_hash(payload: dict) -> str:
    """Git-style blob SHA-1 of the canonical JSON encoding of ``payload``."""
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _flatten(chunks: Iterable[list]) -> list:
    return [row for chunk in chunks for row in chunk]


def one_particle_state(alpha: float, spec: SweepSpec, index: int = 0):
    """State used for one sweep point, plus a flag telling whether the codec was skipped."""
    oracle = evolve(WalkConfig(spec.steps, spec.theta, float(alpha)))
    if not spec.via_codec:
        return oracle, 0
    try:
        res = codec.reconstruct(
            one_particle_initial(float(alpha)),
            spec.steps,
            spec.theta,
            spec.phi_0,
            spec.noise_sigma,
            spec.seed + index,
        )
    except CODEC_ERRORS:
        if spec.strict:
            raise
        return oracle, 1
    return res.reconstructed, 0


def two_particle_state(alpha: float, spec: SweepSpec) -> TwoParticleState:
    if not spec.via_codec:
        return two_particle_final(float(alpha), spec.steps, spec.theta)
    try:
        return codec.reconstruct_two_particle(float(alpha), spec.steps, spec.theta, spec.phi_0)
    except CODEC_ERRORS:
        if spec.strict:
            raise
        return two_particle_final(float(alpha), spec.steps, spec.theta)


def one_particle_density(state) -> measures.DensityMatrix:
    return measures.DensityMatrix.from_ket(state.vector(), (2, state.size), ONE_PARTICLE_LABELS)


def two_particle_density(state: TwoParticleState) -> measures.DensityMatrix:
    return measures.DensityMatrix.from_ket(state.joint(), state.dims, TWO_PARTICLE_LABELS)


def _fig2_point(item, spec: SweepSpec) -> list:
    index, alpha = item
    state, skipped = one_particle_state(alpha, spec, index)
    rho = one_particle_density(state)
    cut = ["coin"]
    return [
        {
            "alpha": float(alpha),
            "variance": position_variance(state),
            "I": measures.mutual_information(rho, cut),
            "Cc": measures.correlated_coherence(rho, cut),
            "E": measures.entanglement_pure(rho, cut),
            "C_coin": measures.rel_entropy_coherence(rho.reduce(["coin"])),
            "C_walker": measures.rel_entropy_coherence(rho.reduce(["walker"])),
            "C_whole": measures.rel_entropy_coherence(rho),
            "codec_skipped": skipped,
        }
    ]


def run_fig2(spec: SweepSpec, workers: int = 1) -> list:
    return _flatten(_map(partial(_fig2_point, spec=spec), list(enumerate(spec.alphas())), workers))


def _fig34_point(alpha, spec: SweepSpec) -> list:
    rho = two_particle_density(two_particle_state(alpha, spec))
    rows = []
    for cut in FIG34_CUTS:
        part1, part2 = cut.split("|")
        rows.append(
            {
                "alpha": float(alpha),
                "cut": cut,
                "I": measures.mutual_information(rho, part1),
                "Cc": measures.correlated_coherence(rho, part1),
                "E": measures.entanglement_pure(rho, part1),
                "C_whole": measures.rel_entropy_coherence(rho),
                "C_part1": measures.rel_entropy_coherence(rho.reduce(part1)),
                "C_part2": measures.rel_entropy_coherence(rho.reduce(part2)),
            }
        )
    return rows


def run_fig34(spec: SweepSpec, workers: int = 1) -> list:
    return _flatten(_map(partial(_fig34_point, spec=spec), list(spec.alphas()), workers))


def _fig5_point(alpha, spec: SweepSpec) -> list:
    rho = two_particle_density(two_particle_state(alpha, spec))
    rows = []
    for pair in FIG5_PAIRS:
        sub = rho.reduce(pair)
        rows.append(
            {
                "alpha": float(alpha),
                "pair": pair,
                "I": measures.mutual_information(sub, "A"),
                "Cc": measures.correlated_coherence(sub, "A"),
                "MID": measures.mid(sub, "A"),
                "C_pair": measures.rel_entropy_coherence(sub),
                "C_a": measures.rel_entropy_coherence(sub.reduce("A")),
                "C_other": measures.rel_entropy_coherence(sub.reduce(pair[1])),
            }
        )
    return rows


def run_fig5(spec: SweepSpec, workers: int = 1) -> list:
    return _flatten(_map(partial(_fig5_point, spec=spec), list(spec.alphas()), workers))


def _fig6_point(item, spec: SweepSpec, grid: distill.GridSpec) -> list:
    index, alpha = item
    rho2 = two_particle_density(two_particle_state(alpha, spec))
    one, _ = one_particle_state(alpha, spec, index)
    panels = {
        "a": (rho2.reduce("AB"), "A"),
        "b": (rho2.reduce("AD"), "A"),
        "c": (one_particle_density(one), ["coin"]),
    }
    rows = []
    for panel in FIG6_PANELS:
        rho, cut = panels[panel]
        rep = distill.bounds_report(rho, cut, float(alpha), grid)
        rows.append(
            {
                "alpha": float(alpha),
                "panel": panel,
                "upper": rep.upper,
                "lower": rep.lower,
                "exact_pure": "" if rep.exact_pure is None else rep.exact_pure,
            }
        )
    return rows


def run_fig6(spec: SweepSpec, workers: int = 1, grid: distill.GridSpec = distill.GridSpec()) -> list:
    fn = partial(_fig6_point, spec=spec, grid=grid)
    return _flatten(_map(fn, list(enumerate(spec.alphas())), workers))


def _noise_point(item, alpha: float, theta: float, phi_0: float, seed: int, seeds: int) -> list:
    steps, sigma = item
    initial = one_particle_initial(alpha)
    m = steps + 1
    clean = codec.collect_ratios(initial, steps, theta, phi_0)
    oracle = walk(initial, steps, theta)
    cond = codec.decode(clean, m).condition
    fids = []
    for j in range(seeds):
        samples = codec.noisy_ratios(clean, sigma, seed + j)
        try:
            res = codec.decode(samples, m, tau_res=math.inf)
            fids.append(codec.fidelity(res.reconstructed, oracle))
        except CODEC_ERRORS:
            fids.append(0.0)
    return [
        {
            "steps": int(steps),
            "sigma": float(sigma),
            "mean_fidelity": float(np.mean(fids)),
            "min_fidelity": float(np.min(fids)),
            "conditioning": float(cond),
        }
    ]


def run_noise_study(
    spec: SweepSpec,
    step_range: Sequence[int],
    sigma_range: Sequence[float],
    seeds: int = 100,
    alpha: float = 1 / math.sqrt(2),
    workers: int = 1,
) -> list:
    """Reconstruction fidelity versus walk length and ratio noise.

    Seeds ``spec.seed .. spec.seed + seeds - 1`` are reused for every noise
    level, so curves at different ``sigma`` see the same noise directions.
    """
    items = [(int(n), float(s)) for n in step_range for s in sigma_range]
    fn = partial(_noise_point, alpha=alpha, theta=spec.theta, phi_0=spec.phi_0, seed=spec.seed, seeds=seeds)
    return _flatten(_map(fn, items, workers))


def _simulate_point(item, spec: SweepSpec, summary: bool) -> list:
    index, alpha = item
    state, _ = one_particle_state(alpha, spec, index)
    if summary:
        p = position_distribution(state)
        var = position_variance(state)
        return [
            {
                "alpha": float(alpha),
                "mean": float(np.dot(state.positions, p)),
                "variance": var,
                "std": math.sqrt(var),
            }
        ]
    p = position_distribution(state)
    return [
        {
            "alpha": float(alpha),
            "position": int(n),
            "a_real": float(a.real),
            "a_imag": float(a.imag),
            "b_real": float(b.real),
            "b_imag": float(b.imag),
            "probability": float(pn),
        }
        for n, a, b, pn in zip(state.positions, state.a, state.b, p)
    ]


def run_simulate(spec: SweepSpec, summary: bool = False, workers: int = 1) -> list:
    fn = partial(_simulate_point, spec=spec, summary=summary)
    return _flatten(_map(fn, list(enumerate(spec.alphas())), workers))


def _reconstruct_point(item, spec: SweepSpec) -> list:
    index, alpha = item
    try:
        res = codec.reconstruct(
            one_particle_initial(float(alpha)),
            spec.steps,
            spec.theta,
            spec.phi_0,
            spec.noise_sigma,
            spec.seed + index,
        )
    except CODEC_ERRORS:
        if spec.strict:
            raise
        return [
            {
                "alpha": float(alpha),
                "fidelity": "",
                "residual": "",
                "kernel_gap": "",
                "condition": "",
                "codec_skipped": 1,
            }
        ]
    return [
        {
            "alpha": float(alpha),
            "fidelity": res.fidelity_vs_oracle,
            "residual": res.residual,
            "kernel_gap": res.kernel_gap,
            "condition": res.condition,
            "codec_skipped": 0,
        }
    ]


def run_reconstruct(spec: SweepSpec, workers: int = 1) -> list:
    return _flatten(_map(partial(_reconstruct_point, spec=spec), list(enumerate(spec.alphas())), workers))
