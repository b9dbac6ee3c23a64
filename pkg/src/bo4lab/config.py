"""Plain-text run configuration: "key = value" lines, '#' comments.

Experiments carry ~15 knobs, so runs are described by small archivable
config files that are echoed verbatim into output manifests.  Unknown
keys are rejected by name; every constraint violation names the
offending key.  An empty file is a valid configuration: defaults are
N = 256, s = 4, s0 = 3.6, epsilon = 1e-3, seed = 0 on the integrable
coefficient preset.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .equations import CoefficientSet
from .evolve import SCHEMES
from .grid import ConfigError

__all__ = ["COMMANDS", "PRESETS", "RunConfig", "parse_config", "with_cli_overrides"]

COMMANDS = (
    "evolve",
    "identities",
    "commutators",
    "symbols",
    "gn",
    "mollifier",
    "loss",
    "two-solution",
    "bona-smith",
    "conserve",
)

PRESETS = ("integrable", "zero")

_COEFF_KEYS = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8")


@dataclass(frozen=True)
class RunConfig:
    """One validated run: a command plus every tunable it may consume."""

    command: str = "evolve"
    n: int = 256
    preset: str = "integrable"
    coeff_overrides: tuple[tuple[str, float], ...] = ()
    s: float = 4.0
    s0: float = 3.6
    s_prime: float = 4.0
    epsilon: float = 1e-3
    epsilon_b: float | None = None
    eps_list: tuple[float, ...] | None = None
    dt: float | None = None
    t_end: float | None = None
    sample_every: int = 1
    seed: int = 0
    scheme: str = "etdrk4"
    ic: str = "random"
    decay: float = 3.0
    amplitude: float = 0.1
    mode: int = 1
    perturbation: float = 1e-3
    alpha: float = 1.0
    k0_list: tuple[int, ...] = (4, 8, 16, 32)
    box: int = 256
    fit_radius: int = 64
    out_dir: str = "."
    text: str = field(default="", compare=False)  # verbatim source, echoed to manifests

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"command must be one of {COMMANDS}, got {self.command!r}")
        if self.preset not in PRESETS:
            raise ConfigError(f"preset must be one of {PRESETS}, got {self.preset!r}")
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.ic not in ("random", "harmonic"):
            raise ConfigError(f"ic must be 'random' or 'harmonic', got {self.ic!r}")
        if not (self.n >= 8 and self.n % 2 == 0):
            raise ConfigError(f"n must be an even integer >= 8, got {self.n}")
        if not self.s >= 1.0:
            raise ConfigError(f"s must be >= 1, got {self.s}")
        if not self.s0 > 3.5:
            raise ConfigError("s0 must exceed 3.5")
        if not self.s_prime >= 1.0:
            raise ConfigError(f"s_prime must be >= 1, got {self.s_prime}")
        for key, val in (("epsilon", self.epsilon), ("epsilon_b", self.epsilon_b)):
            if val is not None and not 0.0 <= val < 1.0:
                raise ConfigError(f"{key} must be in [0, 1), got {val}")
        if self.eps_list is not None:
            if any(not 0.0 < e < 1.0 for e in self.eps_list):
                raise ConfigError("eps_list entries must be in (0, 1)")
        if self.dt is not None and not self.dt > 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.t_end is not None and not self.t_end > 0.0:
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.sample_every < 1:
            raise ConfigError(f"sample_every must be >= 1, got {self.sample_every}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if not 0.0 <= self.alpha <= self.s:
            raise ConfigError(f"alpha must be in [0, s], got {self.alpha}")
        if self.decay <= 0.5:
            raise ConfigError(f"decay must exceed 0.5, got {self.decay}")
        if not 1 <= self.mode:
            raise ConfigError(f"mode must be >= 1, got {self.mode}")
        if any(k0 < 1 for k0 in self.k0_list):
            raise ConfigError("k0_list entries must be >= 1")
        if self.fit_radius < 16:
            raise ConfigError(f"fit_radius must be >= 16, got {self.fit_radius}")
        if self.box < 4 * self.fit_radius:
            raise ConfigError(
                f"box must be >= 4*fit_radius = {4 * self.fit_radius}, got {self.box}"
            )
        unknown = [k for k, _ in self.coeff_overrides if k not in _COEFF_KEYS]
        if unknown:
            raise ConfigError(f"unknown coefficient override {unknown[0]!r}")

    @property
    def coeffs(self) -> CoefficientSet:
        base = (
            CoefficientSet.integrable() if self.preset == "integrable" else CoefficientSet.zero()
        )
        return base.replace(**dict(self.coeff_overrides)) if self.coeff_overrides else base

    @property
    def epsilon_pair(self) -> tuple[float, float]:
        return self.epsilon, self.epsilon if self.epsilon_b is None else self.epsilon_b


def _parse_scalar(key: str, raw: str, kind: type):
    try:
        if kind is int:
            val = int(raw)
        else:
            val = float(raw)
    except ValueError:
        raise ConfigError(f"{key} expects a {kind.__name__}, got {raw!r}") from None
    return val


def _parse_list(key: str, raw: str, kind: type) -> tuple:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if not parts:
        raise ConfigError(f"{key} expects a comma-separated list, got {raw!r}")
    return tuple(_parse_scalar(key, p, kind) for p in parts)


_INT_KEYS = {"n", "sample_every", "seed", "mode", "box", "fit_radius"}
_FLOAT_KEYS = {
    "s",
    "s0",
    "s_prime",
    "epsilon",
    "epsilon_b",
    "dt",
    "t_end",
    "decay",
    "amplitude",
    "perturbation",
    "alpha",
}
_STR_KEYS = {"preset", "scheme", "ic", "out_dir"}
_KNOWN_KEYS = (
    _INT_KEYS | _FLOAT_KEYS | _STR_KEYS | set(_COEFF_KEYS) | {"eps_list", "k0_list"}
)


def parse_config(text: str, command: str = "evolve") -> RunConfig:
    """Parse and validate a config file body for the given command."""
    values: dict = {"command": command, "text": text}
    overrides: list[tuple[str, float]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in _COEFF_KEYS:
            overrides.append((key, _parse_scalar(key, raw, float)))
        elif key in _INT_KEYS:
            values[key] = _parse_scalar(key, raw, int)
        elif key in _FLOAT_KEYS:
            values[key] = _parse_scalar(key, raw, float)
        elif key == "eps_list":
            values[key] = _parse_list(key, raw, float)
        elif key == "k0_list":
            values[key] = _parse_list(key, raw, int)
        else:
            values[key] = raw
    if overrides:
        values["coeff_overrides"] = tuple(overrides)
    return RunConfig(**values)


def with_cli_overrides(
    cfg: RunConfig, out_dir: str | None = None, seed: int | None = None
) -> RunConfig:
    """Apply command-line --out/--seed on top of a parsed config."""
    updates = {}
    if out_dir is not None:
        updates["out_dir"] = out_dir
    if seed is not None:
        if seed < 0:
            raise ConfigError(f"seed must be >= 0, got {seed}")
        updates["seed"] = seed
    return replace(cfg, **updates) if updates else cfg
