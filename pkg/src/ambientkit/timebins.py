"""Fixed-width time bins anchored at a caller-chosen epoch.

The default width is two weeks. Bin ``i`` covers the half-open interval
[epoch_start + i*width, epoch_start + (i+1)*width).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import OutOfRangeError

DEFAULT_BIN_SECONDS = 14 * 86_400


@dataclass(frozen=True, slots=True)
class TimeBin:
    """Bin spec (epoch + width); ``index`` selects one concrete bin."""

    epoch_start: int
    width: int = DEFAULT_BIN_SECONDS
    index: int = 0

    def __post_init__(self):
        if self.epoch_start < 0:
            raise ValueError("epoch_start must be >= 0 (document timestamps are)")
        if self.width <= 0:
            raise ValueError("bin width must be > 0")
        if self.index < 0:
            raise ValueError("bin index must be >= 0")

    def start_of(self, index: int) -> int:
        return self.epoch_start + index * self.width

    def start_iso(self, index: int) -> str:
        return datetime.fromtimestamp(self.start_of(index), tz=timezone.utc).strftime(
            "%Y-%m-%dT%H:%M:%SZ"
        )


def assign_bin(timestamp: int, binning: TimeBin) -> int:
    """Bin index for a timestamp; timestamps before the epoch are errors."""
    if timestamp < binning.epoch_start:
        raise OutOfRangeError(
            f"timestamp {timestamp} precedes bin epoch {binning.epoch_start}"
        )
    return (timestamp - binning.epoch_start) // binning.width


def parse_epoch(value: str) -> int:
    """Parse an ISO-8601 instant (or bare date) to UTC epoch seconds."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    moment = datetime.fromisoformat(text)
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return int(moment.timestamp())
