"""Tabular Q-learning with epsilon-greedy exploration and risk-averse utility."""
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LearningParams:
    alpha: float = 0.1
    epsilon: float = 0.85
    gamma: float = 0.9
    beta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not self.beta >= 0.0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")

    def greedy(self):
        return LearningParams(self.alpha, 0.0, self.gamma, self.beta)


class QTable:
    """Q-values over declared finite state and action spaces, initialized to 0."""

    def __init__(self, states, actions):
        self.states = list(states)
        self.actions = list(actions)
        if not self.actions:
            raise ValueError("action set must be nonempty")
        self._s = {s: i for i, s in enumerate(self.states)}
        self._a = {a: i for i, a in enumerate(self.actions)}
        if len(self._s) != len(self.states) or len(self._a) != len(self.actions):
            raise ValueError("states and actions must be unique")
        self.values = np.zeros((len(self.states), len(self.actions)))

    def _si(self, s):
        try:
            return self._s[s]
        except KeyError:
            raise KeyError(f"undeclared state {s!r}") from None

    def _ai(self, a):
        try:
            return self._a[a]
        except KeyError:
            raise KeyError(f"undeclared action {a!r}") from None

    def get(self, s, a):
        return float(self.values[self._si(s), self._ai(a)])

    def set(self, s, a, v):
        if not math.isfinite(v):
            raise ValueError("Q-values must be finite")
        self.values[self._si(s), self._ai(a)] = v

    def row(self, s):
        return self.values[self._si(s)]

    def greedy(self, s):
        # np.argmax returns the first maximum: ties go to the lowest action id
        return self.actions[int(np.argmax(self.row(s)))]

    def copy(self):
        q = QTable(self.states, self.actions)
        q.values = self.values.copy()
        return q

    def to_text(self):
        buf = io.StringIO()
        for i, s in enumerate(self.states):
            for j, a in enumerate(self.actions):
                buf.write(f"{s!r}\t{a!r}\t{float(self.values[i, j])!r}\n")
        return buf.getvalue()

    def load_text(self, text):
        """Fill values from :meth:`to_text` output; every line must be a declared pair."""
        srep = {repr(s): s for s in self.states}
        arep = {repr(a): a for a in self.actions}
        for n, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[0] not in srep or parts[1] not in arep:
                raise ValueError(f"line {n}: not a declared (state, action, value) entry: {line!r}")
            self.set(srep[parts[0]], arep[parts[1]], float(parts[2]))
        return self


def q_update(q, s, a, reward, s_next, params):
    """One Q-learning step. ``s_next=None`` marks a terminal transition."""
    if not math.isfinite(reward):
        raise ValueError("reward must be finite")
    i, j = q._si(s), q._ai(a)
    future = 0.0 if s_next is None else float(q.row(s_next).max())
    q.values[i, j] = (1.0 - params.alpha) * q.values[i, j] + params.alpha * (reward + params.gamma * future)
    return q


def select_action(q, s, params, rng):
    if params.epsilon > 0.0 and rng.random() < params.epsilon:
        return q.actions[int(rng.integers(len(q.actions)))]
    return q.greedy(s)


def risk_utility(reward, beta):
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if beta == 0:
        return reward
    return -math.expm1(-beta * reward) / beta


def train_bandit(means, n_steps, rng, params=LearningParams(), noise=0.0):
    """Train a single-state Q-table on a stationary multi-armed bandit.

    Rewards are ``means[a]`` plus optional Gaussian noise, passed through
    :func:`risk_utility`; updates are terminal.
    """
    q = QTable([0], range(len(means)))
    for _ in range(n_steps):
        a = select_action(q, 0, params, rng)
        r = means[a] + (noise * rng.standard_normal() if noise else 0.0)
        q_update(q, 0, a, risk_utility(r, params.beta), None, params)
    return q
