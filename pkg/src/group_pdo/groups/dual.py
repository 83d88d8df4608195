"""Labels for irreducible unitary representations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

Label = Union[tuple, int]


@dataclass(frozen=True)
class DualIndex:
    """One point of the unitary dual.

    label
        Frequency vector ``k`` (tuple of ints) on the torus; doubled spin
        ``j2 = 2*l`` (int) on SU(2).
    dim
        Dimension of the representation space (1 on the torus, ``j2 + 1``
        on SU(2)).
    casimir
        Laplacian eigenvalue ``lambda^2`` on the matrix coefficients
        (``|k|^2`` resp. ``l (l + 1)``).
    """

    label: Label
    dim: int
    casimir: float

    @property
    def weight(self) -> float:
        """Frequency weight ``<xi> = (1 + lambda^2)^(1/2)``; always >= 1."""
        return float(np.sqrt(1.0 + self.casimir))

    def sort_key(self):
        label = self.label if isinstance(self.label, tuple) else (self.label,)
        return (self.weight, label)
