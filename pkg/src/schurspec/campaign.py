"""Verification reports and the seeded trial runner used by every property campaign."""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

MAX_WITNESSES = 5


def derive_seed(seed, *keys):
    """Deterministic 63-bit seed from a campaign seed and integer keys."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)])
    return int(ss.generate_state(2, dtype=np.uint64)[0] >> np.uint64(1))


def trial_rng(seed, trial, stream=0):
    return np.random.default_rng(derive_seed(seed, trial, stream))


@dataclass
class VerificationReport:
    check_name: str
    trials: int
    violations: int
    max_violation: float
    tolerance: float
    seed: int
    passed: bool
    details: list = field(default_factory=list)

    def __post_init__(self):
        if self.passed != (self.violations == 0):
            raise ValueError("report 'pass' must equal (violations == 0)")

    def to_document(self):
        return {
            "check_name": self.check_name,
            "trials": self.trials,
            "violations": self.violations,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "pass": self.passed,
            "details": self.details,
        }

    def dumps(self):
        return json.dumps(self.to_document(), indent=2) + "\n"

    @classmethod
    def from_document(cls, doc):
        doc = dict(doc)
        doc["passed"] = doc.pop("pass")
        return cls(**doc)


@dataclass
class TrialResult:
    """Outcome of one trial: ``excess = lhs - rhs`` of the inequality under test.

    The trial violates when ``excess > allowed``.
    """

    excess: float
    allowed: float
    witness: dict = field(default_factory=dict)

    @property
    def violated(self):
        return not (self.excess <= self.allowed)


def run_trials(trial_fn, trials, jobs=1):
    """Evaluate ``trial_fn(i)`` for ``i in range(trials)``; results come back in index order.

    ``trial_fn`` may return a single :class:`TrialResult` or a list of them.
    """
    if jobs is None or jobs <= 1:
        results = [trial_fn(i) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(trial_fn, range(trials)))
    flat = []
    for i, r in enumerate(results):
        for item in r if isinstance(r, (list, tuple)) else [r]:
            flat.append((i, item))
    return flat


def summarize(check_name, results, trials, tolerance, seed):
    """Fold ``(trial_index, TrialResult)`` pairs into a report."""
    bad = [(i, r) for i, r in results if r.violated]
    excesses = [r.excess for _, r in results]
    worst = max(excesses) if excesses else 0.0
    bad.sort(key=lambda ir: (-ir[1].excess if np.isfinite(ir[1].excess) else -np.inf, ir[0]))
    details = [
        {"trial": i, "violation": _num(r.excess), "allowed": _num(r.allowed), **r.witness}
        for i, r in bad[:MAX_WITNESSES]
    ]
    return VerificationReport(
        check_name=check_name,
        trials=int(trials),
        violations=len(bad),
        max_violation=_num(max(0.0, worst)) if np.isfinite(worst) else float("inf"),
        tolerance=float(tolerance),
        seed=int(seed),
        passed=not bad,
        details=details,
    )


def _num(x):
    x = float(x)
    return x if np.isfinite(x) else str(x)


def jsonable(a):
    """Round-trippable nested lists for numpy data in witnesses."""
    return np.asarray(a, dtype=float).tolist()
