"""Rigid homogeneous transforms stored as a rotation block and a translation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

ORTHONORMAL_TOL = 1e-6

IDENTITY_ROTATION = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


def rotation_problem(rotation: Sequence[float]) -> str | None:
    """Describe why ``rotation`` (row-major 3x3) is not a proper rotation.

    Returns None when det(R) and R^T R are within ``ORTHONORMAL_TOL`` of 1 and I.
    """
    if len(rotation) != 9:
        return f"rotation needs 9 entries, got {len(rotation)}"
    r = np.asarray(rotation, dtype=float).reshape(3, 3)
    if not np.all(np.isfinite(r)):
        return "rotation has non-finite entries"
    det = float(np.linalg.det(r))
    if abs(det - 1.0) > ORTHONORMAL_TOL:
        return f"rotation determinant is {det:.6g}, expected 1"
    dev = float(np.max(np.abs(r.T @ r - np.eye(3))))
    if dev > ORTHONORMAL_TOL:
        return f"rotation is not orthonormal (max deviation {dev:.3g})"
    return None


@dataclass(frozen=True)
class HomMatrix:
    rotation: tuple[float, ...] = IDENTITY_ROTATION
    translation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, m: np.ndarray) -> HomMatrix:
        m = np.asarray(m, dtype=float)
        return cls(tuple(float(v) for v in m[:3, :3].ravel()), tuple(float(v) for v in m[:3, 3]))

    @classmethod
    def translation_only(cls, x: float, y: float, z: float) -> HomMatrix:
        return cls(IDENTITY_ROTATION, (float(x), float(y), float(z)))

    def as_array(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = np.asarray(self.rotation, dtype=float).reshape(3, 3)
        m[:3, 3] = self.translation
        return m

    def __matmul__(self, other: HomMatrix) -> HomMatrix:
        return HomMatrix.from_array(self.as_array() @ other.as_array())

    def to_json(self) -> dict:
        return {"rotation": list(self.rotation), "translation": list(self.translation)}

    @classmethod
    def from_json(cls, data: dict) -> HomMatrix:
        rotation = tuple(float(v) for v in data["rotation"])
        translation = tuple(float(v) for v in data["translation"])
        if len(rotation) != 9 or len(translation) != 3:
            raise ValueError("homogeneous matrix needs 9 rotation and 3 translation entries")
        return cls(rotation, translation)
