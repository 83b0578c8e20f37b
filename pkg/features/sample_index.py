import logging
from typing import List, Optional, Sequence

import numpy as np

from errors import FeatureError
from .distance import cosine_distances
from .schema import FeatureVector


class SampleIndex:
    """
    In-memory store of training-sample feature vectors.

    Responsibilities:
    - Hold every sample vector once as a matrix (computed before any query).
    - Answer "is some sample closer than gamma" with the cosine distance.
    - Report the nearest distance for logging and feature dumps.
    """

    def __init__(self, vectors: Sequence[FeatureVector]) -> None:
        self.log = logging.getLogger("features.sample_index")
        self._vectors: List[FeatureVector] = list(vectors)
        self.schema_id: Optional[str] = None

        if not self._vectors:
            self._matrix = np.zeros((0, 0))
            return

        schema_ids = {v.schema_id for v in self._vectors}
        if len(schema_ids) != 1:
            raise FeatureError(f"sample vectors mix schemas: {sorted(schema_ids)}")
        self.schema_id = schema_ids.pop()
        self._matrix = np.vstack([v.array for v in self._vectors])
        self.log.debug(
            "Indexed %d sample vectors of dimension %d",
            len(self._vectors),
            self._matrix.shape[1],
        )

    def __len__(self) -> int:
        return len(self._vectors)

    # ------------------------------------------------------------------ #
    # Queries
    # ------------------------------------------------------------------ #
    def distances(self, vector: FeatureVector) -> np.ndarray:
        if not self._vectors:
            return np.zeros(0)
        if vector.schema_id != self.schema_id:
            raise FeatureError(
                f"query schema {vector.schema_id!r} differs from {self.schema_id!r}"
            )
        return cosine_distances(self._matrix, vector.array)

    def nearest(self, vector: FeatureVector) -> float:
        """Smallest distance to any sample; inf when the index is empty."""
        distances = self.distances(vector)
        return float(distances.min()) if distances.size else float("inf")

    def within(self, vector: FeatureVector, gamma: float) -> bool:
        """True iff some sample is at distance strictly below gamma."""
        return self.nearest(vector) < gamma
