"""Verification settings loaded from YAML.

The bundled ``resources/default.yaml`` holds every default; a user
file passed with ``--config`` may override any subset of its keys::

    seed: 7
    samples: 200
    sample_scale:
      algebra.syndrome-parity: 2.0

Command-line flags are applied last through
:meth:`VerificationConfig.with_overrides`.
"""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml

#: Bundled defaults.
DEFAULT_CONFIG_PATH = Path(__file__).parent / "resources" / "default.yaml"

_INT_RANGES: Dict[str, Tuple[int, Optional[int]]] = {
    "seed": (0, None),
    "box_size": (1, None),
    "samples": (1, None),
    "jobs": (1, None),
    "growth_cap": (1, None),
    "oracle_max_edges": (1, 12),
    "max_cylinder_keys": (1, 16),
}


def validate_config_yaml(data: object) -> None:
    """Validate parsed YAML settings.

    Checks:

    1. Top-level value is a mapping with known keys only.
    2. Integer keys are integers within their range.
    3. ``time_budget`` is a positive number.
    4. ``no_lift_range`` is a list ``[lo, hi]`` with ``1 <= lo <= hi``.
    5. ``sample_scale`` maps check ids to non-negative numbers.

    Args:
        data: The object returned by ``yaml.safe_load()``.

    Raises:
        ValueError: Describing the first problem found.
    """
    if not isinstance(data, dict):
        raise ValueError(
            "Invalid config YAML: expected a mapping, "
            f"got {type(data).__name__}"
        )
    known = {f.name for f in fields(VerificationConfig)}
    for key in data:
        if key not in known:
            raise ValueError(f"Invalid config YAML: unknown key {key!r}")

    for key, (lo, hi) in _INT_RANGES.items():
        if key not in data:
            continue
        val = data[key]
        if not isinstance(val, int) or isinstance(val, bool):
            raise ValueError(
                f"Invalid config YAML: {key!r} must be an integer "
                f"(got {type(val).__name__})"
            )
        if val < lo or (hi is not None and val > hi):
            bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
            raise ValueError(f"Invalid config YAML: {key!r} must be {bound}, got {val}")

    if "time_budget" in data:
        tb = data["time_budget"]
        if not isinstance(tb, (int, float)) or isinstance(tb, bool) or tb <= 0:
            raise ValueError("Invalid config YAML: 'time_budget' must be a positive number")

    if "no_lift_range" in data:
        nl = data["no_lift_range"]
        if (not isinstance(nl, list) or len(nl) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in nl)):
            raise ValueError(
                "Invalid config YAML: 'no_lift_range' must be a list of exactly 2 integers"
            )
        if not 1 <= nl[0] <= nl[1]:
            raise ValueError(
                f"Invalid config YAML: 'no_lift_range' needs 1 <= lo <= hi, got {nl}"
            )

    if "sample_scale" in data:
        scale = data["sample_scale"]
        if not isinstance(scale, dict):
            raise ValueError("Invalid config YAML: 'sample_scale' must be a mapping")
        for claim, factor in scale.items():
            if not isinstance(factor, (int, float)) or isinstance(factor, bool) or factor < 0:
                raise ValueError(
                    f"Invalid config YAML: sample_scale[{claim!r}] must be "
                    "a non-negative number"
                )


@dataclass(frozen=True)
class VerificationConfig:
    """Settings shared by every suite.

    Attributes:
        seed: Base RNG seed.
        box_size: Largest box radius used by symbolic checks.
        samples: Base sample count.
        time_budget: Seconds allowed per suite.
        jobs: Worker threads per suite.
        growth_cap: Ring cap for LTQO growth.
        oracle_max_edges: Largest patch handed to the dense oracle.
        no_lift_range: Inclusive box-size range for the no-lift suite.
        max_cylinder_keys: Key window of the invariant sampler.
        sample_scale: Per-check multipliers applied to ``samples``.
    """

    seed: int = 0
    box_size: int = 4
    samples: int = 1000
    time_budget: float = 120.0
    jobs: int = 1
    growth_cap: int = 10
    oracle_max_edges: int = 12
    no_lift_range: Tuple[int, int] = (1, 6)
    max_cylinder_keys: int = 12
    sample_scale: Dict[str, float] = field(default_factory=dict, hash=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VerificationConfig":
        validate_config_yaml(data)
        values = dict(data)
        if "no_lift_range" in values:
            values["no_lift_range"] = tuple(values["no_lift_range"])
        if "time_budget" in values:
            values["time_budget"] = float(values["time_budget"])
        return cls(**values)

    def with_overrides(self, **flags: Any) -> "VerificationConfig":
        """Copy with every non-``None`` flag applied.

        Raises:
            ValueError: If an override is out of range.
        """
        changes = {k: v for k, v in flags.items() if v is not None}
        if not changes:
            return self
        check = {
            k: list(v) if isinstance(v, tuple) else v for k, v in changes.items()
        }
        validate_config_yaml(check)
        if "no_lift_range" in changes:
            changes["no_lift_range"] = tuple(changes["no_lift_range"])
        return replace(self, **changes)

    def samples_for(self, claim_id: str) -> int:
        """``samples`` scaled for one check, at least 1."""
        factor = self.sample_scale.get(claim_id, 1.0)
        return max(1, int(round(self.samples * factor)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "box_size": self.box_size,
            "samples": self.samples,
            "time_budget": self.time_budget,
            "jobs": self.jobs,
            "growth_cap": self.growth_cap,
            "oracle_max_edges": self.oracle_max_edges,
            "no_lift_range": list(self.no_lift_range),
            "max_cylinder_keys": self.max_cylinder_keys,
        }


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if data is None:
        return {}
    validate_config_yaml(data)
    return data


def load_config(path: Optional[Union[str, Path]] = None) -> VerificationConfig:
    """Load the bundled defaults, then merge a user file over them.

    Args:
        path: Optional user YAML file.

    Returns:
        A :class:`VerificationConfig`.

    Raises:
        FileNotFoundError: If *path* does not exist.
        ValueError: If either file is malformed.
    """
    merged = _read_yaml(DEFAULT_CONFIG_PATH)
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        user = _read_yaml(path)
        scale = dict(merged.get("sample_scale", {}))
        scale.update(user.get("sample_scale", {}))
        merged.update(user)
        merged["sample_scale"] = scale
    return VerificationConfig.from_dict(merged)
