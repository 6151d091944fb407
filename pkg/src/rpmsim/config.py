"""Simulation configuration: defaults, validation, and the key-value file format.

A config file is flat ``key = value`` text with ``#`` comments.  Nested
parameters use dotted keys (``noise_amplitude.fluctuating.weight = 1.4``).
Files must carry ``config_version = 1``.  The same dict shape round-trips
through bundle manifests and the HTTP API.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Any, Mapping

from .domain import StabilityClass, Vital

CONFIG_VERSION = 1


class ConfigError(ValueError):
    """Invalid configuration value or malformed config file."""


class Mode(str, Enum):
    BATCH = "batch"
    INTERACTIVE = "interactive"


# Per-class, per-vital noise scale (one standard deviation of daily noise).
# Calibrated together with the spike and threshold defaults so that the
# default cohort lands near the observed rate of 13 alerts per 100
# measurements.
DEFAULT_NOISE_AMPLITUDE: dict[StabilityClass, dict[Vital, float]] = {
    StabilityClass.STABLE: {
        Vital.WEIGHT: 0.9,
        Vital.SYSTOLIC_BP: 5.0,
        Vital.DIASTOLIC_BP: 3.6,
        Vital.HEART_RATE: 5.0,
    },
    StabilityClass.FLUCTUATING: {
        Vital.WEIGHT: 1.6,
        Vital.SYSTOLIC_BP: 9.5,
        Vital.DIASTOLIC_BP: 6.8,
        Vital.HEART_RATE: 9.0,
    },
    StabilityClass.SPIKY: {
        Vital.WEIGHT: 1.1,
        Vital.SYSTOLIC_BP: 6.6,
        Vital.DIASTOLIC_BP: 4.6,
        Vital.HEART_RATE: 6.0,
    },
}

# Minimum change against the trailing-window median that counts as abrupt.
DEFAULT_ABRUPT_DELTA: dict[Vital, float] = {
    Vital.WEIGHT: 2.0,
    Vital.SYSTOLIC_BP: 14.0,
    Vital.DIASTOLIC_BP: 10.0,
    Vital.HEART_RATE: 14.0,
}

# Exceedance beyond a threshold that escalates severity from mild to high.
DEFAULT_ESCALATION_MARGIN: dict[Vital, float] = {
    Vital.WEIGHT: 1.2,
    Vital.SYSTOLIC_BP: 7.0,
    Vital.DIASTOLIC_BP: 5.0,
    Vital.HEART_RATE: 7.0,
}


@dataclass
class SpikeParams:
    """Transient excursions for the spiky persona.

    Magnitudes are expressed as multiples of the affected vital's abrupt
    delta, so one range serves all four vitals.
    """

    rate_per_30_days: float = 1.2
    magnitude_range: tuple[float, float] = (1.1, 2.4)
    duration_range_days: tuple[int, int] = (2, 4)


@dataclass
class AdmissionPolicy:
    """Hospitalize after `trigger_high_alerts` high-severity alerts in the window."""

    trigger_high_alerts: int = 3
    window_days: int = 7
    stay_days_range: tuple[int, int] = (3, 10)


@dataclass
class MessinessParams:
    p_duplicate: float = 0.04
    p_irrelevant_comment: float = 0.06
    p_situated_comment: float = 0.12


@dataclass
class SimulationConfig:
    n_patients: int = 10
    n_hcps: int = 6
    duration_days: int = 180
    seed: int = 42
    mode: Mode = Mode.BATCH
    # Fixed calendar anchor; a wall-clock default would break byte-identical
    # reruns. 2024-01-01 is a Monday.
    start_date: date = date(2024, 1, 1)
    noise_amplitude: dict[StabilityClass, dict[Vital, float]] = field(
        default_factory=lambda: {c: dict(v) for c, v in DEFAULT_NOISE_AMPLITUDE.items()})
    spike: SpikeParams = field(default_factory=SpikeParams)
    abrupt_delta: dict[Vital, float] = field(
        default_factory=lambda: dict(DEFAULT_ABRUPT_DELTA))
    abrupt_window_days: int = 3
    escalation_margin: dict[Vital, float] = field(
        default_factory=lambda: dict(DEFAULT_ESCALATION_MARGIN))
    admission_policy: AdmissionPolicy = field(default_factory=AdmissionPolicy)
    admission_adherence_multiplier: float = 0.1
    messiness: MessinessParams = field(default_factory=MessinessParams)

    @property
    def final_date(self) -> date | None:
        """Last date of the run, None when duration_days is 0."""
        if self.duration_days <= 0:
            return None
        from datetime import timedelta
        return self.start_date + timedelta(days=self.duration_days - 1)

    def validate(self) -> list[str]:
        """Field-level problems as `name: message` strings, empty when valid."""
        errors: list[str] = []
        if self.n_patients < 0:
            errors.append("n_patients: must be >= 0")
        if self.n_hcps < 0:
            errors.append("n_hcps: must be >= 0")
        if self.duration_days < 0:
            errors.append("duration_days: must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            errors.append("seed: must be an unsigned 64-bit integer")
        if self.abrupt_window_days < 1:
            errors.append("abrupt_window_days: must be >= 1")
        if not 0.0 <= self.admission_adherence_multiplier <= 1.0:
            errors.append("admission_adherence_multiplier: must be in [0, 1]")
        for cls in StabilityClass:
            for vital in Vital:
                amp = self.noise_amplitude.get(cls, {}).get(vital)
                if amp is None or amp < 0:
                    errors.append(f"noise_amplitude.{cls.value}.{vital.value}: "
                                  "must be a non-negative number")
        for vital in Vital:
            if self.abrupt_delta.get(vital, 0) <= 0:
                errors.append(f"abrupt_delta.{vital.value}: must be > 0")
            if self.escalation_margin.get(vital, 0) <= 0:
                errors.append(f"escalation_margin.{vital.value}: must be > 0")
        if self.spike.rate_per_30_days < 0:
            errors.append("spike.rate_per_30_days: must be >= 0")
        if self.spike.magnitude_range[0] > self.spike.magnitude_range[1]:
            errors.append("spike.magnitude_range: low above high")
        if self.spike.duration_range_days[0] < 1:
            errors.append("spike.duration_range_days: minimum below 1")
        if self.spike.duration_range_days[0] > self.spike.duration_range_days[1]:
            errors.append("spike.duration_range_days: low above high")
        if self.admission_policy.trigger_high_alerts < 1:
            errors.append("admission_policy.trigger_high_alerts: must be >= 1")
        if self.admission_policy.window_days < 1:
            errors.append("admission_policy.window_days: must be >= 1")
        if self.admission_policy.stay_days_range[0] < 1:
            errors.append("admission_policy.stay_days_range: minimum below 1")
        if self.admission_policy.stay_days_range[0] > self.admission_policy.stay_days_range[1]:
            errors.append("admission_policy.stay_days_range: low above high")
        for name in ("p_duplicate", "p_irrelevant_comment", "p_situated_comment"):
            p = getattr(self.messiness, name)
            if not 0.0 <= p <= 1.0:
                errors.append(f"messiness.{name}: must be in [0, 1]")
        return errors

    def require_valid(self) -> "SimulationConfig":
        errors = self.validate()
        if errors:
            raise ConfigError("; ".join(errors))
        return self

    def to_dict(self) -> dict[str, Any]:
        return {
            "config_version": CONFIG_VERSION,
            "n_patients": self.n_patients,
            "n_hcps": self.n_hcps,
            "duration_days": self.duration_days,
            "seed": self.seed,
            "mode": self.mode.value,
            "start_date": self.start_date.isoformat(),
            "noise_amplitude": {
                cls.value: {v.value: amp for v, amp in per_vital.items()}
                for cls, per_vital in self.noise_amplitude.items()
            },
            "spike": {
                "rate_per_30_days": self.spike.rate_per_30_days,
                "magnitude_range": list(self.spike.magnitude_range),
                "duration_range_days": list(self.spike.duration_range_days),
            },
            "abrupt_delta": {v.value: d for v, d in self.abrupt_delta.items()},
            "abrupt_window_days": self.abrupt_window_days,
            "escalation_margin": {v.value: m for v, m in self.escalation_margin.items()},
            "admission_policy": {
                "trigger_high_alerts": self.admission_policy.trigger_high_alerts,
                "window_days": self.admission_policy.window_days,
                "stay_days_range": list(self.admission_policy.stay_days_range),
            },
            "admission_adherence_multiplier": self.admission_adherence_multiplier,
            "messiness": {
                "p_duplicate": self.messiness.p_duplicate,
                "p_irrelevant_comment": self.messiness.p_irrelevant_comment,
                "p_situated_comment": self.messiness.p_situated_comment,
            },
        }


def _as_int(key: str, value: Any) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    try:
        return int(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None


def _as_float(key: str, value: Any) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    try:
        return float(str(value).strip())
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _as_pair(key: str, value: Any, cast) -> tuple:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",")]
    elif isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        raise ConfigError(f"{key}: expected two comma-separated values")
    if len(parts) != 2:
        raise ConfigError(f"{key}: expected exactly two values, got {len(parts)}")
    return cast(f"{key}[0]", parts[0]), cast(f"{key}[1]", parts[1])


def _vital(key: str, name: str) -> Vital:
    try:
        return Vital(name)
    except ValueError:
        raise ConfigError(f"{key}: unknown vital {name!r}") from None


def _stability(key: str, name: str) -> StabilityClass:
    try:
        return StabilityClass(name)
    except ValueError:
        raise ConfigError(f"{key}: unknown stability class {name!r}") from None


def config_from_dict(data: Mapping[str, Any],
                     base: SimulationConfig | None = None) -> SimulationConfig:
    """Build a config by overlaying `data` onto `base` (defaults when None).

    Accepts the shape produced by ``SimulationConfig.to_dict``; every field is
    optional.  Unknown keys raise ConfigError so that typos never silently
    fall back to defaults.
    """
    cfg = base if base is not None else SimulationConfig()
    known = {
        "config_version", "n_patients", "n_hcps", "duration_days", "seed",
        "mode", "start_date", "noise_amplitude", "spike", "abrupt_delta",
        "abrupt_window_days", "escalation_margin", "admission_policy",
        "admission_adherence_multiplier", "messiness",
    }
    for key in data:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")

    if "config_version" in data:
        version = _as_int("config_version", data["config_version"])
        if version != CONFIG_VERSION:
            raise ConfigError(f"unsupported config_version {version}, "
                              f"expected {CONFIG_VERSION}")
    if "n_patients" in data:
        cfg.n_patients = _as_int("n_patients", data["n_patients"])
    if "n_hcps" in data:
        cfg.n_hcps = _as_int("n_hcps", data["n_hcps"])
    if "duration_days" in data:
        cfg.duration_days = _as_int("duration_days", data["duration_days"])
    if "seed" in data:
        cfg.seed = _as_int("seed", data["seed"])
    if "mode" in data:
        try:
            cfg.mode = Mode(str(data["mode"]))
        except ValueError:
            raise ConfigError(f"mode: expected 'batch' or 'interactive', "
                              f"got {data['mode']!r}") from None
    if "start_date" in data:
        try:
            cfg.start_date = date.fromisoformat(str(data["start_date"]))
        except ValueError:
            raise ConfigError(f"start_date: expected YYYY-MM-DD, "
                              f"got {data['start_date']!r}") from None
    if "noise_amplitude" in data:
        for cls_name, per_vital in dict(data["noise_amplitude"]).items():
            cls = _stability("noise_amplitude", cls_name)
            for vital_name, amp in dict(per_vital).items():
                vital = _vital(f"noise_amplitude.{cls_name}", vital_name)
                cfg.noise_amplitude[cls][vital] = _as_float(
                    f"noise_amplitude.{cls_name}.{vital_name}", amp)
    if "spike" in data:
        spike = dict(data["spike"])
        if "rate_per_30_days" in spike:
            cfg.spike.rate_per_30_days = _as_float(
                "spike.rate_per_30_days", spike["rate_per_30_days"])
        if "magnitude_range" in spike:
            cfg.spike.magnitude_range = _as_pair(
                "spike.magnitude_range", spike["magnitude_range"], _as_float)
        if "duration_range_days" in spike:
            cfg.spike.duration_range_days = _as_pair(
                "spike.duration_range_days", spike["duration_range_days"], _as_int)
        unknown = set(spike) - {"rate_per_30_days", "magnitude_range",
                                "duration_range_days"}
        if unknown:
            raise ConfigError(f"unknown spike key(s): {sorted(unknown)}")
    if "abrupt_delta" in data:
        for vital_name, delta in dict(data["abrupt_delta"]).items():
            vital = _vital("abrupt_delta", vital_name)
            cfg.abrupt_delta[vital] = _as_float(f"abrupt_delta.{vital_name}", delta)
    if "abrupt_window_days" in data:
        cfg.abrupt_window_days = _as_int("abrupt_window_days",
                                         data["abrupt_window_days"])
    if "escalation_margin" in data:
        for vital_name, margin in dict(data["escalation_margin"]).items():
            vital = _vital("escalation_margin", vital_name)
            cfg.escalation_margin[vital] = _as_float(
                f"escalation_margin.{vital_name}", margin)
    if "admission_policy" in data:
        pol = dict(data["admission_policy"])
        if "trigger_high_alerts" in pol:
            cfg.admission_policy.trigger_high_alerts = _as_int(
                "admission_policy.trigger_high_alerts", pol["trigger_high_alerts"])
        if "window_days" in pol:
            cfg.admission_policy.window_days = _as_int(
                "admission_policy.window_days", pol["window_days"])
        if "stay_days_range" in pol:
            cfg.admission_policy.stay_days_range = _as_pair(
                "admission_policy.stay_days_range", pol["stay_days_range"], _as_int)
        unknown = set(pol) - {"trigger_high_alerts", "window_days", "stay_days_range"}
        if unknown:
            raise ConfigError(f"unknown admission_policy key(s): {sorted(unknown)}")
    if "admission_adherence_multiplier" in data:
        cfg.admission_adherence_multiplier = _as_float(
            "admission_adherence_multiplier", data["admission_adherence_multiplier"])
    if "messiness" in data:
        mess = dict(data["messiness"])
        for name in ("p_duplicate", "p_irrelevant_comment", "p_situated_comment"):
            if name in mess:
                setattr(cfg.messiness, name,
                        _as_float(f"messiness.{name}", mess.pop(name)))
        if mess:
            raise ConfigError(f"unknown messiness key(s): {sorted(mess)}")
    return cfg


def _nest_flat_keys(pairs: dict[str, str]) -> dict[str, Any]:
    """Fold dotted keys into the nested dict shape config_from_dict expects."""
    nested: dict[str, Any] = {}
    for key, value in pairs.items():
        parts = key.split(".")
        node = nested
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"conflicting keys around {key!r}")
        node[parts[-1]] = value
    return nested


def load_config_file(path: str | Path,
                     base: SimulationConfig | None = None) -> SimulationConfig:
    """Parse a ``key = value`` config file and overlay it onto `base`.

    The file must declare ``config_version = 1``.
    """
    path = Path(path)
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path.name}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"{path.name}:{lineno}: empty key")
        if key in pairs:
            raise ConfigError(f"{path.name}:{lineno}: duplicate key {key!r}")
        pairs[key] = value.strip()
    if "config_version" not in pairs:
        raise ConfigError(f"{path.name}: missing required key 'config_version'")
    return config_from_dict(_nest_flat_keys(pairs), base=base)
