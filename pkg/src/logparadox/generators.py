"""Seeded data generators: long-tail exponential data, symmetric data with
planted tails, and k-mer structure sampling for simulated cells."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import SampleVector, inter_mean_distance
from .errors import AllZeroCounts, InvalidParams
from .paradox import ParadoxVerdict, verdict_from_means
from .resampling import mwu_test
from .rng import derive_seed, make_rng

EXP_OFFSET = 10.0
EXP_SCALE = 1000.0

REFERENCE_STATES = (1, 3, 9, 27)
REFERENCE_CELL_A = (300, 100, 30, 7)
REFERENCE_CELL_B = (240, 147, 30, 4)
REFERENCE_PROTEINS = 1059
DEFAULT_STRUCTURES_PER_CELL = 525


def gen_exponential(n: int, seed: int) -> SampleVector:
    """``n`` draws of ``10 + 1000 * Exp(1)``; every value is strictly above 10."""
    if n < 1:
        raise InvalidParams("n must be >= 1")
    rng = make_rng(seed)
    e = rng.standard_exponential(n)
    while np.any(e == 0.0):
        zero = e == 0.0
        e[zero] = rng.standard_exponential(int(zero.sum()))
    return SampleVector(EXP_OFFSET + EXP_SCALE * e)


def gen_symmetric_tails(mu: float, sigma: float, n: int, seed: int) -> SampleVector:
    """``[sqrt(mu)] + n draws of Normal(mu, sigma) + [mu**2]``.

    Non-positive normal draws are redrawn.
    """
    if not (mu >= 10 and sigma >= 0 and n >= 1):
        raise InvalidParams(f"need mu >= 10, sigma >= 0, n >= 1; got {mu}, {sigma}, {n}")
    rng = make_rng(seed)
    body = rng.normal(mu, sigma, n)
    while np.any(body <= 0):
        bad = body <= 0
        body[bad] = rng.normal(mu, sigma, int(bad.sum()))
    return SampleVector(np.concatenate([[math.sqrt(mu)], body, [mu * mu]]))


def symmetric_tails_sweep(
    mus: Sequence[float], sigma: float = 2.0, n: int = 100, seed: int = 0
) -> np.ndarray:
    """Inter-mean distance of :func:`gen_symmetric_tails` for each ``mu``.

    Each ``mu`` gets its own substream of ``seed``.
    """
    out = []
    for i, mu in enumerate(mus):
        out.append(inter_mean_distance(gen_symmetric_tails(mu, sigma, n, derive_seed(seed, i))))
    return np.array(out)


# k-mer cells -----------------------------------------------------------------


@dataclass(frozen=True)
class MarkovKmerModel:
    """Structure-size distribution for one cell line.

    ``structure_frequencies`` is the per-structure probability of each state
    (counts normalised by the number of structures). ``transition`` is kept as
    model description; when none is supplied it defaults to the chain whose
    every row equals ``structure_frequencies``, whose stationary law is exactly
    that distribution.
    """

    states: Tuple[int, ...]
    counts: Tuple[int, ...]
    structure_frequencies: np.ndarray
    transition: np.ndarray

    @property
    def total_structures(self) -> int:
        return int(sum(self.counts))

    @property
    def total_proteins(self):
        return sum(c * k for c, k in zip(self.counts, self.states))

    @property
    def protein_frequencies(self) -> np.ndarray:
        """Counts over total proteins; informational, does not sum to 1."""
        return np.asarray(self.counts, dtype=float) / self.total_proteins

    @property
    def volumes(self) -> Tuple:
        return tuple(k ** 3 for k in self.states)

    def expected_volume(self) -> float:
        return float(np.dot(self.structure_frequencies, np.asarray(self.volumes, dtype=float)))

    def expected_log_volume(self) -> float:
        return float(np.dot(self.structure_frequencies, 3 * np.log(np.asarray(self.states, dtype=float))))

    def volume_variance(self) -> float:
        v = np.asarray(self.volumes, dtype=float)
        return float(np.dot(self.structure_frequencies, v ** 2) - self.expected_volume() ** 2)

    def to_dict(self) -> dict:
        return {
            "states": list(self.states),
            "counts": list(self.counts),
            "structure_frequencies": self.structure_frequencies.tolist(),
            "protein_frequencies": self.protein_frequencies.tolist(),
            "transition": self.transition.tolist(),
            "total_structures": self.total_structures,
            "total_proteins": self.total_proteins,
        }


def markov_model(
    counts_per_state: Sequence[int],
    states: Sequence = REFERENCE_STATES,
    transition: Optional[Sequence[Sequence[float]]] = None,
    protein_total: Optional[int] = None,
) -> MarkovKmerModel:
    """Build a model from structure counts per state.

    ``protein_total``, when given, asserts that ``sum(counts * states)`` equals
    it (used to declare two cell lines protein-matched).
    """
    counts = tuple(int(c) for c in counts_per_state)
    states = tuple(states)
    if len(counts) != len(states) or not states:
        raise InvalidParams("counts and states must be non-empty and of equal length")
    if any(c < 0 for c in counts):
        raise InvalidParams("counts must be >= 0")
    if any(not s > 0 for s in states):
        raise InvalidParams("states must be > 0")
    total = sum(counts)
    if total == 0:
        raise AllZeroCounts("at least one state needs a non-zero count")
    freqs = np.asarray(counts, dtype=float) / total
    freqs.setflags(write=False)
    if transition is None:
        p = np.tile(freqs, (len(states), 1))
    else:
        p = np.asarray(transition, dtype=float)
        if p.shape != (len(states), len(states)) or np.any(p < 0):
            raise InvalidParams("transition must be a non-negative square matrix over the states")
        if np.any(np.abs(p.sum(axis=1) - 1) > 1e-12):
            raise InvalidParams("transition rows must sum to 1")
    p.setflags(write=False)
    model = MarkovKmerModel(states, counts, freqs, p)
    if protein_total is not None and model.total_proteins != protein_total:
        raise InvalidParams(
            f"protein total {model.total_proteins} differs from declared {protein_total}"
        )
    return model


def reference_models() -> Tuple[MarkovKmerModel, MarkovKmerModel]:
    return (
        markov_model(REFERENCE_CELL_A, REFERENCE_STATES, protein_total=REFERENCE_PROTEINS),
        markov_model(REFERENCE_CELL_B, REFERENCE_STATES, protein_total=REFERENCE_PROTEINS),
    )


@dataclass(frozen=True)
class CellSample:
    structure_counts: Tuple[int, ...]
    volumes: Tuple

    @property
    def n_structures(self) -> int:
        return sum(self.structure_counts)

    def arith_mean_volume(self) -> float:
        return math.fsum(c * v for c, v in zip(self.structure_counts, self.volumes)) / self.n_structures

    def geom_mean_volume(self) -> float:
        s = math.fsum(c * math.log(v) for c, v in zip(self.structure_counts, self.volumes) if c)
        return math.exp(s / self.n_structures)


def _sample_states(model: MarkovKmerModel, size: int, rng: np.random.Generator) -> np.ndarray:
    # inverse-CDF draws: two models fed the same uniforms are monotonically coupled
    cdf = np.cumsum(model.structure_frequencies)
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    return np.minimum(idx, len(model.states) - 1)


def sample_cells(
    model: MarkovKmerModel,
    n_cells: int,
    structures_per_cell: int = DEFAULT_STRUCTURES_PER_CELL,
    seed: int = 0,
) -> List[CellSample]:
    """Cells of ``structures_per_cell`` i.i.d. structures each.

    Cell ``i`` draws from substream ``(seed, i)``, so the same seed gives the
    same uniforms to every model.
    """
    if n_cells < 1 or structures_per_cell < 1:
        raise InvalidParams("n_cells and structures_per_cell must be >= 1")
    volumes = model.volumes
    cells = []
    for i in range(n_cells):
        idx = _sample_states(model, structures_per_cell, make_rng(seed, i))
        counts = np.bincount(idx, minlength=len(model.states))
        cells.append(CellSample(tuple(int(c) for c in counts), volumes))
    return cells


@dataclass(frozen=True)
class KmerExperimentResult:
    arith_means_a: np.ndarray
    geom_means_a: np.ndarray
    arith_means_b: np.ndarray
    geom_means_b: np.ndarray
    verdict: ParadoxVerdict
    p_arith: float
    p_geom: float

    def grand_means(self) -> dict:
        return {
            "arith_a": float(self.arith_means_a.mean()),
            "arith_b": float(self.arith_means_b.mean()),
            "geom_a": float(self.geom_means_a.mean()),
            "geom_b": float(self.geom_means_b.mean()),
        }

    def to_dict(self) -> dict:
        return {
            "grand_means": self.grand_means(),
            "verdict": self.verdict.to_dict(),
            "p_arith": self.p_arith,
            "p_geom": self.p_geom,
            "n_cells": int(self.arith_means_a.size),
        }


def kmer_experiment(
    model_a: MarkovKmerModel,
    model_b: MarkovKmerModel,
    n_cells: int = 1000,
    structures_per_cell: int = DEFAULT_STRUCTURES_PER_CELL,
    seed: int = 0,
) -> KmerExperimentResult:
    """Per-cell mean volumes for two cell lines, compared with and without logs.

    The verdict compares the average per-cell arithmetic mean volume of A and B
    and the average per-cell geometric mean volume; MWU p-values test each
    pair of per-cell distributions.
    """
    cells_a = sample_cells(model_a, n_cells, structures_per_cell, seed)
    cells_b = sample_cells(model_b, n_cells, structures_per_cell, seed)
    am_a = np.array([c.arith_mean_volume() for c in cells_a])
    gm_a = np.array([c.geom_mean_volume() for c in cells_a])
    am_b = np.array([c.arith_mean_volume() for c in cells_b])
    gm_b = np.array([c.geom_mean_volume() for c in cells_b])
    verdict = verdict_from_means(float(am_b.mean() - am_a.mean()), float(gm_b.mean() - gm_a.mean()))
    return KmerExperimentResult(
        arith_means_a=am_a,
        geom_means_a=gm_a,
        arith_means_b=am_b,
        geom_means_b=gm_b,
        verdict=verdict,
        p_arith=mwu_test(am_a, am_b).p_value,
        p_geom=mwu_test(gm_a, gm_b).p_value,
    )
