from typing import Sequence, Union

import numpy as np

from errors import FeatureError
from .schema import FeatureVector

VectorLike = Union[FeatureVector, Sequence[float], np.ndarray]


def cosine_distances(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    """
    1 - cosine similarity between each row of matrix and vector, in [0, 2].

    Two zero vectors are at distance 0; a zero vector against a nonzero one
    is at distance 1.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    vector = np.asarray(vector, dtype=float)
    if matrix.shape[1] != vector.shape[0]:
        raise FeatureError(
            f"vector length {vector.shape[0]} does not match {matrix.shape[1]}"
        )
    row_norms = np.linalg.norm(matrix, axis=1)
    norm = float(np.linalg.norm(vector))
    denom = row_norms * norm
    with np.errstate(divide="ignore", invalid="ignore"):
        similarity = np.where(denom > 0, (matrix @ vector) / denom, 0.0)
    distances = np.clip(1.0 - similarity, 0.0, 2.0)
    both_zero = (row_norms == 0) & (norm == 0)
    distances[both_zero] = 0.0
    return distances


def cosine_distance(a: VectorLike, b: VectorLike) -> float:
    if isinstance(a, FeatureVector) and isinstance(b, FeatureVector):
        if a.schema_id != b.schema_id:
            raise FeatureError(
                f"cannot compare vectors of schemas {a.schema_id!r} and {b.schema_id!r}"
            )
    left = a.array if isinstance(a, FeatureVector) else np.asarray(a, dtype=float)
    right = b.array if isinstance(b, FeatureVector) else np.asarray(b, dtype=float)
    if left.shape != right.shape:
        raise FeatureError(f"length mismatch: {left.shape[0]} vs {right.shape[0]}")
    return float(cosine_distances(left[np.newaxis, :], right)[0])
