import math
from typing import List


class SnapshotSchedule:
    """
    Film-thickness milestones at which snapshots are recorded

    A snapshot is taken whenever the gap first drops to or below h0·ratio^k
    (k = 1, 2, ...); the initial state is milestone k = 0.

    Attributes:
        ratio (float): Geometric ratio between consecutive milestones
    """

    def __init__(self, ratio: float = 0.90):
        """
        Initialize the schedule

        Args:
            ratio: Geometric ratio in (0, 1)

        Raises:
            ValueError: If ratio is outside (0, 1)
        """
        if not 0 < ratio < 1:
            raise ValueError(f"Snapshot ratio must lie in (0, 1), got {ratio}")
        self.ratio = ratio

    def milestone(self, h0: float, k: int) -> float:
        return h0 * self.ratio ** k

    def milestone_index(self, h0: float, h: float) -> int:
        """Deepest milestone k with h <= h0·ratio^k"""
        k = max(int(math.floor(math.log(h / h0) / math.log(self.ratio))), 0)
        # guard the floor against rounding on both sides
        while k > 0 and h > self.milestone(h0, k):
            k -= 1
        while h <= self.milestone(h0, k + 1):
            k += 1
        return k

    def milestones(self, h0: float, h_min: float) -> List[float]:
        """Milestones at or above the thickness floor, initial gap included"""
        values = []
        k = 0
        while self.milestone(h0, k) >= h_min:
            values.append(self.milestone(h0, k))
            k += 1
        return values

    def expected_count(self, h0: float, h_min: float) -> int:
        """Snapshots of a run that reaches the thickness floor"""
        return len(self.milestones(h0, h_min))

    def __str__(self) -> str:
        return f"SnapshotSchedule(ratio={self.ratio})"
