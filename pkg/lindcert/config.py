from __future__ import annotations

import os
from dataclasses import dataclass, field


def _default_threads() -> int:
    return max(1, min(os.cpu_count() or 1, 8))


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class LindcertConfig:
    """Numerical tolerances and execution limits for lindcert analyses."""

    # Parallelism and randomness
    threads: int = field(default_factory=_default_threads)
    seed: int = 0
    restarts: int = 64

    # Structural and spectral tolerances
    struct_tol: float = 1e-10
    fixed_point_tol: float = 1e-9
    rank_tol: float = 1e-9
    saturation_tol: float = 1e-8
    rate_tol: float = 1e-9

    # Propagation
    dt: float = 1e-2
    tol_state: float = 1e-8
    max_refinements: int = 12

    @classmethod
    def from_env(cls) -> LindcertConfig:
        """Load configuration from LINDBLAD_* environment variables with defaults."""
        return cls(
            threads=max(1, _env_int("LINDBLAD_THREADS", _default_threads())),
            seed=_env_int("LINDBLAD_SEED", cls.seed),
            restarts=max(1, _env_int("LINDBLAD_RESTARTS", cls.restarts)),
            struct_tol=_env_float("LINDBLAD_STRUCT_TOL", cls.struct_tol),
            fixed_point_tol=_env_float("LINDBLAD_FIXED_POINT_TOL", cls.fixed_point_tol),
            rank_tol=_env_float("LINDBLAD_RANK_TOL", cls.rank_tol),
            saturation_tol=_env_float("LINDBLAD_SATURATION_TOL", cls.saturation_tol),
            rate_tol=_env_float("LINDBLAD_RATE_TOL", cls.rate_tol),
            dt=_env_float("LINDBLAD_DT", cls.dt),
            tol_state=_env_float("LINDBLAD_TOL_STATE", cls.tol_state),
            max_refinements=_env_int("LINDBLAD_MAX_REFINEMENTS", cls.max_refinements),
        )
