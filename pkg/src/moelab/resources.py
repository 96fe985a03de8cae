"""Memory guard for dense joint spaces.

``MOELAB_MAX_DIM`` caps the dimension of any dense joint Hilbert space the
package will materialize (a single channel's ``|A||B|``, or ``(|A||B|)**2``
for the product channel ``E ⊗ Ē``).
"""

from __future__ import annotations

import os

DEFAULT_MAX_DIM = 1 << 16
ENV_VAR = "MOELAB_MAX_DIM"


class ResourceGuardError(RuntimeError):
    def __init__(self, what: str, required: int, cap: int):
        super().__init__(
            f"{what} needs dimension {required} but the cap is {cap}; "
            f"set {ENV_VAR}={required} to allow it"
        )
        self.required = required
        self.cap = cap


def max_dim() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_MAX_DIM
    value = int(raw)
    if value < 1:
        raise ValueError(f"{ENV_VAR} must be positive")
    return value


def guard(what: str, required: int) -> None:
    cap = max_dim()
    if required > cap:
        raise ResourceGuardError(what, required, cap)
