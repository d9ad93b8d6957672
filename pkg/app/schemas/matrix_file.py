"""
JSON matrix format: row-major [re, im] pairs.
"""
import json
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, model_validator

from app.core.errors import InputValidationError


class MatrixFile(BaseModel):
    """Dense complex matrix; real matrices carry im = 0 exactly."""
    rows: int
    cols: int
    entries: List[List[Tuple[float, float]]]
    name: Optional[str] = None

    class Config:
        json_schema_extra = {
            "example": {
                "rows": 2,
                "cols": 2,
                "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.25, -0.1]]],
                "name": "A1",
            }
        }

    @model_validator(mode="after")
    def check_shape(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"rows and cols must be positive, got {self.rows}x{self.cols}")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match declared shape {self.rows}x{self.cols}")
        return self

    @classmethod
    def from_array(cls, matrix: ArrayLike, name: Optional[str] = None) -> "MatrixFile":
        m = np.asarray(matrix, dtype=np.complex128)
        entries = [[(float(z.real), float(z.imag)) for z in row] for row in m]
        return cls(rows=m.shape[0], cols=m.shape[1], entries=entries, name=name)

    def to_array(self) -> NDArray[np.complex128]:
        return np.array([[complex(re, im) for re, im in row] for row in self.entries], dtype=np.complex128)

    @classmethod
    def read(cls, path: str | Path) -> "MatrixFile":
        try:
            return cls.model_validate(json.loads(Path(path).read_text()))
        except (OSError, ValueError) as e:
            raise InputValidationError(f"cannot read matrix file {path}: {e}") from e

    def write(self, path: str | Path) -> None:
        # repr-based float output round-trips exactly (at most 17 significant digits)
        Path(path).write_text(self.model_dump_json(indent=2))
