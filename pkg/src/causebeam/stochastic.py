"""Stochastic oracle evaluation: naive fixed sampling and LUCB adaptive sampling.

Each intervention is an arm; a query is a Bernoulli sample of the unknown
cancellation probability phi*(e).  Arms with mean below the cancel threshold
epsilon are classified as cancelling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log, sqrt

import numpy as np

from .errors import InvalidConfig


def confidence_bounds(P, S, t, n_arms, tolerance_scale=0.05):
    """Hoeffding-style (lb, ub) for a Bernoulli mean after S samples at step t."""
    if S < 1:
        raise InvalidConfig("confidence bounds need at least one sample")
    w = sqrt(log(n_arms * (t + 1) ** 2 / tolerance_scale) / (2 * S))
    m = P / S
    return max(0.0, m - w), min(1.0, m + w)


@dataclass
class ArmState:
    """Sampling state of one intervention."""

    P: int = 0
    S: int = 0
    lb: float = 0.0
    ub: float = 1.0

    @property
    def mean(self):
        return self.P / self.S if self.S else 0.5

    def refresh(self, t, n_arms, tolerance_scale):
        self.lb, self.ub = confidence_bounds(self.P, self.S, t, n_arms, tolerance_scale)


@dataclass
class LucbConfig:
    batch_size: int = 10
    epsilon: float = 0.3
    t_c: float = 0.01
    t_nc: float = 0.01
    t_b: float = 0.1
    n_max: int = None
    beam_size: int = -1
    tolerance_scale: float = 0.05

    def __post_init__(self):
        if self.batch_size < 1:
            raise InvalidConfig("batch_size must be >= 1")
        if not 0 < self.epsilon < 1:
            raise InvalidConfig("epsilon must lie in (0,1)")
        for t in (self.t_c, self.t_nc, self.t_b):
            if not 0 < t < 1:
                raise InvalidConfig("tolerances must lie in (0,1)")


@dataclass
class LucbResult:
    estimates: tuple
    converged: bool
    total_samples: int
    arms: list = field(repr=False, default=None)


def naive_evaluate(elements, oracle, n_samples):
    """Mean of n_samples oracle queries per element, in element order."""
    if n_samples < 1:
        raise InvalidConfig("n_samples must be >= 1")
    out = []
    for e in elements:
        out.append(sum(oracle.query(e) for _ in range(n_samples)) / n_samples)
    return tuple(out)


def _sample(arm, element, oracle, batch_size):
    for _ in range(batch_size):
        arm.P += oracle.query(element)
        arm.S += 1


def update_tb(arms, elements, oracle, config, t):
    """Beam-separation confidence; samples both extremal arms when over t_b.

    Among arms with mean >= epsilon, the beam holds the beam_size smallest
    means (those the search would keep).  Confidence is max ub over the beam
    minus min lb over the rest; either side empty gives 0.
    """
    ge = [i for i, a in enumerate(arms) if a.mean >= config.epsilon]
    b = config.beam_size
    if not ge or b == -1 or len(ge) <= b:
        return 0.0
    ge.sort(key=lambda i: (arms[i].mean, i))
    beam, rest = ge[:b], ge[b:]
    hi = max(beam, key=lambda i: (arms[i].ub, -i))
    lo = min(rest, key=lambda i: (arms[i].lb, i))
    conf = arms[hi].ub - arms[lo].lb
    if conf >= config.t_b:
        _sample(arms[hi], elements[hi], oracle, config.batch_size)
        _sample(arms[lo], elements[lo], oracle, config.batch_size)
    return conf


def update_tc(arms, elements, oracle, config, t):
    """Cancelling-side confidence: max ub over mean<epsilon arms minus epsilon."""
    c = [i for i, a in enumerate(arms) if a.mean < config.epsilon]
    if not c:
        return 0.0
    hi = max(c, key=lambda i: (arms[i].ub, -i))
    conf = arms[hi].ub - config.epsilon
    if conf >= config.t_c:
        _sample(arms[hi], elements[hi], oracle, config.batch_size)
    return conf


def update_tnc(arms, elements, oracle, config, t):
    """Non-cancelling-side confidence: epsilon minus min lb over mean>=epsilon arms."""
    nc = [i for i, a in enumerate(arms) if a.mean >= config.epsilon]
    if not nc:
        return 0.0
    lo = min(nc, key=lambda i: (arms[i].lb, i))
    conf = config.epsilon - arms[lo].lb
    if conf >= config.t_nc:
        _sample(arms[lo], elements[lo], oracle, config.batch_size)
    return conf


def lucb_evaluate(elements, oracle, config):
    """Adaptive classification of elements against the cancel threshold.

    Initializes every arm with one batch, then loops the three confidence
    updates until each falls below its tolerance or the sample budget runs
    out.  Returns per-arm estimates P/S and the final arm states so callers
    can re-check the stop conditions.
    """
    elements = list(elements)
    if not elements:
        raise InvalidConfig("lucb_evaluate needs at least one element")
    n_arms = len(elements)
    n_max = config.n_max
    if n_max is None:
        n_max = 50 * config.batch_size * n_arms
    if n_max < config.batch_size * n_arms:
        raise InvalidConfig("n_max below the initialization budget")
    base = oracle.calls
    arms = [ArmState() for _ in elements]
    for arm, e in zip(arms, elements):
        _sample(arm, e, oracle, config.batch_size)
    t = 0
    converged = False
    while True:
        for a in arms:
            a.refresh(t, n_arms, config.tolerance_scale)
        c_tb = update_tb(arms, elements, oracle, config, t)
        c_tc = update_tc(arms, elements, oracle, config, t)
        c_tnc = update_tnc(arms, elements, oracle, config, t)
        if c_tb < config.t_b and c_tc < config.t_c and c_tnc < config.t_nc:
            converged = True
            break
        if oracle.calls - base >= n_max:
            break
        t += 1
    for a in arms:
        a.refresh(t, n_arms, config.tolerance_scale)
    return LucbResult(
        estimates=tuple(a.mean for a in arms),
        converged=converged,
        total_samples=oracle.calls - base,
        arms=arms,
    )


def check_stop_conditions(arms, config):
    """True iff the three LUCB stop conditions hold for the given arm states."""
    eps = config.epsilon
    ok_c = all(a.ub - eps < config.t_c for a in arms if a.mean < eps)
    ok_nc = all(eps - a.lb < config.t_nc for a in arms if a.mean >= eps)
    ge = sorted((a for a in arms if a.mean >= eps), key=lambda a: a.mean)
    b = config.beam_size
    if not ge or b == -1 or len(ge) <= b:
        ok_b = True
    else:
        ok_b = max(a.ub for a in ge[:b]) - min(a.lb for a in ge[b:]) < config.t_b
    return ok_c and ok_nc and ok_b
