"""Numerical tolerances shared by every module."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

ENV_VAR = "KBIFRAME_TOL"


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle.

    Attributes
    ----------
    ktol : float
        Relative kernel tolerance for Hermitian / PSD / reconstruction tests.
    herm_tol : float
        Relative tolerance for the Hermitian residual of a biframe operator,
        tightness, and validity of claimed bounds.
    bis_tol : float
        Final bracket width of the lower-bound bisection.
    rtol : float or None
        Relative singular-value cutoff for rank decisions. ``None`` means
        ``max(rows, cols) * 1e-12``.
    """

    ktol: float = 1e-10
    herm_tol: float = 1e-8
    bis_tol: float = 1e-9
    rtol: float | None = None

    def __post_init__(self):
        for name in ("ktol", "herm_tol", "bis_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.rtol is not None and not self.rtol > 0:
            raise ValueError("rtol must be positive")

    def rank_tol(self, shape) -> float:
        if self.rtol is not None:
            return self.rtol
        return max(max(shape), 1) * 1e-12

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_dict(self) -> dict:
        return {
            "ktol": self.ktol,
            "herm_tol": self.herm_tol,
            "bis_tol": self.bis_tol,
            "rtol": self.rtol,
        }

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        """Defaults, with ``herm_tol`` taken from ``$KBIFRAME_TOL`` if set."""
        environ = os.environ if environ is None else environ
        raw = environ.get(ENV_VAR)
        if raw is None or raw.strip() == "":
            return cls()
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(f"{ENV_VAR} must be a decimal number, got {raw!r}") from None
        return cls(herm_tol=value)


DEFAULT = Tolerances()
