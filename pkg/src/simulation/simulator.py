"""Monte Carlo simulation of threshold-erasing multi-trial decoding.

Each outer symbol is drawn from a generative super-channel built from a single
uniform U in (0, 1]:

    U <= exp(-E0 n)  ->  error,   v = -ln(U)/(s n) - E0/s
    otherwise        ->  correct, v = (E0 + ln(U)/n)/s

so Pr(error, v >= t) = exp(-(E0 + s t) n) exactly and
Pr(correct, v <= t) = exp(-(E0 - s t) n) - exp(-E0 n) for 0 <= t <= E0/s.
Trial k erases every symbol with v < T_k and is judged by the decoder's DCF.

Words are simulated in fixed blocks of ``BLOCK_SIZE``; block b draws from
``SeedSequence(seed, spawn_key=(b,))``.  Chunks are contiguous runs of blocks, so
the report depends on the seed only, not on the chunk or worker count.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.stats import norm

from ..coding.rs_codec import OuterCode
from ..models.channel_model import InnerChannelModel, SymbolClassProbs
from ..models.decoder_models import DecoderKind, DecoderModel, radius_array, succeeds
from ..theory.thresholds import ThresholdSet
from ..utils.errors import MteeError, ParameterError

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1024
WILSON_Z = float(norm.ppf(0.975))


@dataclass(frozen=True)
class SymbolDraw:
    """Correctness and reliability (nats/bit) of one inner decoding result."""

    is_error: bool
    reliability: float


def _check_model(model: InnerChannelModel) -> None:
    if not model.e0 > 0:
        raise ParameterError("simulation needs a positive Gallager exponent (rate below capacity)")


def _from_uniform(u: np.ndarray, model: InnerChannelModel) -> Tuple[np.ndarray, np.ndarray]:
    log_u = np.log(u)
    is_error = log_u <= -model.e0 * model.n_inner
    reliability = np.where(
        is_error,
        -log_u / (model.s * model.n_inner) - model.e0 / model.s,
        (model.e0 + log_u / model.n_inner) / model.s,
    )
    return is_error, reliability


def draw_symbols(
    model: InnerChannelModel, rng: np.random.Generator, size
) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized draws: boolean error flags and reliabilities of shape ``size``."""
    _check_model(model)
    return _from_uniform(1.0 - rng.random(size), model)


def sample_symbol(model: InnerChannelModel, rng: np.random.Generator) -> SymbolDraw:
    _check_model(model)
    is_error, reliability = _from_uniform(np.array(1.0 - rng.random()), model)
    return SymbolDraw(is_error=bool(is_error), reliability=float(reliability))


def trial_counts(
    is_error: np.ndarray, reliability: np.ndarray, ts: ThresholdSet
) -> Tuple[np.ndarray, np.ndarray]:
    """Errors eps_k and erasures tau_k of every trial; the last axis runs over k.

    Works on a single word (shape (n,)) or on a batch (shape (words, n)).
    """
    thresholds = np.asarray(ts.thresholds, dtype=float)
    erased = reliability[..., None] < thresholds
    tau = erased.sum(axis=-2)
    eps = (~erased & is_error[..., None]).sum(axis=-2)
    if np.any(np.diff(tau, axis=-1) < 0) or np.any(np.diff(eps, axis=-1) > 0):
        raise MteeError("nested erasing violated: larger thresholds must erase supersets")
    return eps, tau


def judge_trials(eps: np.ndarray, tau: np.ndarray, decoder: DecoderModel) -> np.ndarray:
    """Per-trial success flags for arrays of (eps, tau)."""
    if decoder.kind is DecoderKind.BMD:
        return 2 * eps + tau < decoder.code.d
    return eps < radius_array(decoder, tau)


def mtee_decode_word(draws: Sequence[SymbolDraw], ts: ThresholdSet, model: DecoderModel) -> bool:
    """True iff at least one of the z erasing trials lies inside the DCF."""
    if len(draws) != model.code.n:
        raise ParameterError(f"expected {model.code.n} symbols, got {len(draws)}")
    is_error = np.array([d.is_error for d in draws], dtype=bool)
    reliability = np.array([d.reliability for d in draws], dtype=float)
    eps, tau = trial_counts(is_error, reliability, ts)
    return any(succeeds(model, int(e), int(t)) for e, t in zip(eps, tau))


def _safe_log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def exact_class_probs(model: InnerChannelModel, ts: ThresholdSet) -> SymbolClassProbs:
    """Exact class probabilities of the generative model (log-domain).

    The approximations only keep the leading exponential term; these include the
    exp(-E0 n) corrections, so p_c counts errors below T_1 as well.
    """
    e0, s, n = model.e0, model.s, model.n_inner
    t = ts.thresholds
    if t[-1] > e0 / s * (1 + 1e-12):
        raise ParameterError("thresholds above E0/s are outside the generative model")

    def below_correct(x: float) -> float:
        return math.exp(-(e0 - s * x) * n)

    def above_error(x: float) -> float:
        return math.exp(-(e0 + s * x) * n)

    return SymbolClassProbs(
        log_p_c=_safe_log(below_correct(t[0]) - above_error(t[0])),
        log_p_l=_safe_log(above_error(t[-1])),
        log_p_bar=[_safe_log(below_correct(t[k + 1]) - below_correct(t[k])) for k in range(ts.z - 1)],
        log_p_under=[_safe_log(above_error(t[k]) - above_error(t[k + 1])) for k in range(ts.z - 1)],
    )


def class_counts(is_error: np.ndarray, reliability: np.ndarray, ts: ThresholdSet) -> dict:
    """Empirical symbol-class counts ``{c, l, bar, under, r}`` of a batch of draws."""
    t = np.asarray(ts.thresholds, dtype=float)
    # bin 0 is v < T_1, bin k is T_k <= v < T_(k+1), bin z is v >= T_z
    bins = np.searchsorted(t, reliability, side="right")
    err = is_error.ravel()
    bins = bins.ravel()
    z = ts.z
    return {
        "c": int(np.count_nonzero(bins == 0)),
        "l": int(np.count_nonzero((bins == z) & err)),
        "bar": [int(np.count_nonzero((bins == k) & ~err)) for k in range(1, z)],
        "under": [int(np.count_nonzero((bins == k) & err)) for k in range(1, z)],
        "r": int(np.count_nonzero((bins == z) & ~err)),
    }


def wilson_interval(failures: int, trials: int) -> Tuple[float, float]:
    """Wilson score 95% interval for a binomial proportion."""
    if trials <= 0:
        raise ParameterError("need at least one trial")
    z2 = WILSON_Z ** 2
    p = failures / trials
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2 * trials)) / denom
    half = WILSON_Z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials ** 2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


class SimReport(BaseModel):
    """Outcome of a Monte Carlo run; identical for equal (inputs, seed)."""

    num_words: int
    num_failures: int
    pe_hat: float
    ci95: Tuple[float, float]
    trial_successes: List[int]
    seed: int
    code: str
    decoder: str
    lam: float
    z: int
    thresholds: List[float]
    e0: float
    s: float
    n_inner: float
    log_pe_predicted: Optional[float] = None

    @property
    def log_pe_hat(self) -> float:
        return _safe_log(self.pe_hat)


def _simulate_block(
    block: int,
    size: int,
    seed: int,
    model: InnerChannelModel,
    decoder: DecoderModel,
    ts: ThresholdSet,
) -> Tuple[int, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    is_error, reliability = draw_symbols(model, rng, (size, decoder.code.n))
    eps, tau = trial_counts(is_error, reliability, ts)
    ok = judge_trials(eps, tau, decoder)
    failures = int(np.count_nonzero(~ok.any(axis=1)))
    return failures, ok.sum(axis=0)


def _chunk_ranges(num_words: int, chunks: int) -> List[List[Tuple[int, int]]]:
    num_blocks = math.ceil(num_words / BLOCK_SIZE)
    blocks = [(b, min(BLOCK_SIZE, num_words - b * BLOCK_SIZE)) for b in range(num_blocks)]
    groups = np.array_split(np.arange(num_blocks), chunks)
    return [[blocks[i] for i in group] for group in groups]


def estimate_pe(
    code: OuterCode,
    model: InnerChannelModel,
    decoder: DecoderModel,
    ts: ThresholdSet,
    num_words: int,
    seed: int = 0,
    chunks: int = 1,
    workers: int = 1,
    log_pe_predicted: Optional[float] = None,
) -> SimReport:
    """Estimate the residual codeword error probability from ``num_words`` words."""
    if num_words < 1:
        raise ParameterError(f"num_words must be >= 1, got {num_words}")
    if chunks < 1 or workers < 1:
        raise ParameterError(f"chunks and workers must be >= 1, got {chunks} and {workers}")
    if seed < 0:
        raise ParameterError(f"seed must be non-negative, got {seed}")
    if decoder.code != code:
        raise ParameterError("decoder model belongs to a different outer code")
    _check_model(model)

    def run_chunk(blocks: List[Tuple[int, int]]) -> Tuple[int, np.ndarray]:
        failures, successes = 0, np.zeros(ts.z, dtype=np.int64)
        for block, size in blocks:
            f, s = _simulate_block(block, size, seed, model, decoder, ts)
            failures += f
            successes += s
        return failures, successes

    groups = _chunk_ranges(num_words, chunks)
    logger.info(
        f"Simulating {num_words} words of {code.describe()} ({decoder.describe()}, z={ts.z}) "
        f"in {len(groups)} chunks on {workers} workers"
    )
    if workers == 1:
        results = [run_chunk(g) for g in groups]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_chunk, groups))

    num_failures = sum(r[0] for r in results)
    trial_successes = np.sum([r[1] for r in results], axis=0)
    report = SimReport(
        num_words=num_words,
        num_failures=num_failures,
        pe_hat=num_failures / num_words,
        ci95=wilson_interval(num_failures, num_words),
        trial_successes=[int(x) for x in trial_successes],
        seed=seed,
        code=code.describe(),
        decoder=decoder.describe(),
        lam=ts.lam,
        z=ts.z,
        thresholds=list(ts.thresholds),
        e0=model.e0,
        s=model.s,
        n_inner=model.n_inner,
        log_pe_predicted=log_pe_predicted,
    )
    logger.info(f"Observed {num_failures} failures, pe_hat={report.pe_hat:.6g}")
    return report
