"""Cross-check of the BMD capability region against the actual RS decoder."""
import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel

from ..coding.rs_codec import ERASURE, OuterCode, ReedSolomonCodec, SymbolWord, codec_for
from ..utils.errors import ParameterError

logger = logging.getLogger(__name__)


class PatternOutcome(BaseModel):
    """Result of decoding one random codeword hit by ``eps`` errors and ``tau`` erasures."""

    eps: int
    tau: int
    in_region: bool
    decoded: bool
    correct: bool
    discrepancy: Optional[str] = None


class OracleReport(BaseModel):
    trials: int
    seed: int
    code: str
    in_region: int = 0
    decoded_in_region: int = 0
    decoded_outside_region: int = 0
    discrepancies: List[PatternOutcome] = []

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def check_pattern(
    codec: ReedSolomonCodec,
    eps: int,
    tau: int,
    rng: np.random.Generator,
    inject_fault: bool = False,
) -> PatternOutcome:
    """Corrupt a random codeword and check the decoder against the BMD region.

    Inside 2 eps + tau <= d-1 the transmitted codeword must come back.  Anything
    returned elsewhere must still be a codeword within floor((d-1-tau)/2) of the
    received word.  ``inject_fault`` flips one bit of every decoder output.
    """
    n, k, d = codec.n, codec.k, codec.d
    if eps < 0 or tau < 0 or eps + tau > n:
        raise ParameterError(f"need eps, tau >= 0 and eps + tau <= {n}, got {eps}, {tau}")
    q = codec.gf.size
    sent = codec.encode(rng.integers(0, q, size=k).tolist())
    positions = rng.permutation(n)[: eps + tau]
    symbols = list(sent.symbols)
    for j in positions[:eps]:
        symbols[j] ^= int(rng.integers(1, q))
    for j in positions[eps:]:
        symbols[j] = ERASURE
    received = SymbolWord(tuple(symbols))

    result = codec.decode(received)
    if inject_fault and result is not None:
        flipped = list(result.symbols)
        flipped[0] ^= 1
        result = SymbolWord(tuple(flipped))

    in_region = 2 * eps + tau <= d - 1
    correct = result == sent
    discrepancy = None
    if in_region and not correct:
        discrepancy = "decoding failed" if result is None else "wrong codeword inside the guaranteed region"
    elif result is not None:
        if not codec.is_codeword(result):
            discrepancy = "decoder returned a non-codeword"
        elif result.distance_to(received) > (d - 1 - tau) // 2:
            discrepancy = "decoder returned a codeword beyond its radius"
    return PatternOutcome(
        eps=eps,
        tau=tau,
        in_region=in_region,
        decoded=result is not None,
        correct=correct,
        discrepancy=discrepancy,
    )


def validate_oracle(code: OuterCode, trials: int, seed: int = 0, inject_fault: bool = False) -> OracleReport:
    """Decode ``trials`` random patterns with (eps, tau) uniform over eps + tau <= n."""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    codec = codec_for(code)
    rng = np.random.default_rng(seed)
    pairs = [(e, t) for e in range(code.n + 1) for t in range(code.n + 1 - e)]
    report = OracleReport(trials=trials, seed=seed, code=code.describe())
    logger.info(f"Validating BMD oracle on {code.describe()} with {trials} patterns")
    for index in rng.integers(0, len(pairs), size=trials):
        eps, tau = pairs[index]
        outcome = check_pattern(codec, eps, tau, rng, inject_fault=inject_fault)
        if outcome.in_region:
            report.in_region += 1
            report.decoded_in_region += int(outcome.correct)
        elif outcome.decoded:
            report.decoded_outside_region += 1
        if outcome.discrepancy:
            logger.warning(f"Discrepancy at eps={eps}, tau={tau}: {outcome.discrepancy}")
            report.discrepancies.append(outcome)
    logger.info(
        f"{report.in_region} patterns in the guaranteed region, "
        f"{len(report.discrepancies)} discrepancies"
    )
    return report
