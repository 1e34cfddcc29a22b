"""Staircase pacing: thirds of the data for thirds of the epochs."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TooSmall


@dataclass(frozen=True)
class PacingSchedule:
    """Subset size per epoch: non-decreasing, ends at the full dataset size."""

    sizes: tuple

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))

    def __len__(self):
        return len(self.sizes)


def staircase_pacing(N: int, T: int) -> PacingSchedule:
    """floor(N/3) samples for the first floor(T/3) epochs, floor(2N/3) for the
    next floor(T/3), then all N. Remainders from non-divisible N or T are
    absorbed by the final full-data stage."""
    if N < 3 or T < 3:
        raise TooSmall(f"need N >= 3 and T >= 3 (got N={N}, T={T})")
    first, second = T // 3, (2 * T) // 3
    small, mid = N // 3, (2 * N) // 3
    sizes = []
    for epoch in range(1, T + 1):
        if epoch <= first:
            sizes.append(small)
        elif epoch <= second:
            sizes.append(mid)
        else:
            sizes.append(N)
    return PacingSchedule(tuple(sizes))
