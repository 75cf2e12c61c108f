"""Run configuration and enumeration budgets."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, field

DEFAULT_BUDGETS = {
    "iso": 20_000,    # candidate matrices scanned by the isomorphism search
    "comb": 8,        # largest n for shuffle/weight tables
    "module": 6,      # largest n for Dieudonne module algebra
    "theta": 5,       # largest n for formal models
}


class ConfigError(ValueError):
    pass


def budgets(env=None):
    """Budgets, overridden by ``EO_THETA_BUDGET``.

    The variable holds comma-separated ``key=value`` pairs with keys from
    :data:`DEFAULT_BUDGETS`; a bare integer sets the isomorphism budget.
    """
    raw = (os.environ if env is None else env).get("EO_THETA_BUDGET", "")
    out = dict(DEFAULT_BUDGETS)
    for part in filter(None, (s.strip() for s in raw.split(","))):
        key, sep, val = part.partition("=")
        if not sep:
            key, val = "iso", key
        key = key.strip()
        if key not in out:
            raise ConfigError(f"unknown budget key {key!r} in EO_THETA_BUDGET")
        try:
            out[key] = int(val)
        except ValueError:
            raise ConfigError(f"budget {key!r} is not an integer: {val!r}") from None
    return out


def parse_int_list(text):
    """``"3"``, ``"3-8"`` or ``"2,3,5"`` to a sorted list of ints."""
    out = set()
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise ConfigError(f"cannot parse integer list {text!r}") from None
    if not out:
        raise ConfigError(f"empty integer list {text!r}")
    return sorted(out)


@dataclass
class RunConfig:
    command: str
    n: list = field(default_factory=lambda: [3])
    p: list = field(default_factory=lambda: [2])
    ext_degree: int = 1
    trunc: int = 3
    seed: int = 0
    fmt: str = "json"
    inp: str = None
    out: str = None
    r: list = None
    negative_control: bool = False
    only: list = None

    def check(self, kind):
        """Validate the grid against the budget of ``kind``."""
        b = budgets()
        limit = b[kind]
        if min(self.n) < 2:
            raise ConfigError("n must be >= 2")
        if max(self.n) > limit:
            raise ConfigError(f"n={max(self.n)} exceeds the {kind} budget {limit}")
        from .field import is_prime
        bad = [q for q in self.p if not is_prime(q)]
        if bad:
            raise ConfigError(f"not prime: {bad}")
        if self.ext_degree < 1:
            raise ConfigError("extension degree must be >= 1")
        if self.trunc < 1:
            raise ConfigError("truncation must be >= 1")
        return self

    def grid(self):
        d = asdict(self)
        out = {k: d[k] for k in ("n", "p", "ext_degree", "trunc")}
        if self.r:
            out["r"] = d["r"]
        if self.only:
            out["only"] = d["only"]
        if self.negative_control:
            out["negative_control"] = True
        return out
