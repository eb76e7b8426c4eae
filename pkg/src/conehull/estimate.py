"""Monte Carlo estimate record."""

from dataclasses import asdict, dataclass, replace

import numpy as np


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    n_replicates: int
    seed: int | None = None
    target_id: str = ""
    flags: tuple = ()

    @classmethod
    def from_samples(cls, values, seed=None, target_id=""):
        """Sample mean with standard error ``std(ddof=1) / sqrt(n)``."""
        v = np.asarray(values, dtype=float)
        n = len(v)
        if n == 0:
            return cls(float("nan"), float("nan"), 0, seed, target_id)
        se = float(np.std(v, ddof=1) / np.sqrt(n)) if n > 1 else float("inf")
        return cls(float(np.mean(v)), se, n, seed, target_id)

    def z_score(self, target):
        if not np.isfinite(target):
            return float("nan")
        if self.stderr == 0:
            return 0.0 if self.mean == target else float("inf")
        return (self.mean - target) / self.stderr

    def scaled(self, factor, target_id=None):
        return Estimate(
            self.mean * factor,
            self.stderr * abs(factor),
            self.n_replicates,
            self.seed,
            self.target_id if target_id is None else target_id,
            self.flags,
        )

    def with_flags(self, *flags):
        return replace(self, flags=tuple(self.flags) + tuple(f for f in flags if f not in self.flags))

    def to_dict(self):
        out = asdict(self)
        out["flags"] = list(self.flags)
        return out
