"""Process-wide comparison tolerance (read from the environment on each call)."""
import os

DEFAULT_TOL = 1e-10


def tolerance() -> float:
    raw = os.environ.get("STARSPIN_TOL")
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise ValueError(f"STARSPIN_TOL must be a number, got {raw!r}") from None
    if tol < 0:
        raise ValueError("STARSPIN_TOL must be non-negative")
    return tol
