"""US city/state location parsing against a user-supplied gazetteer.

Gazetteer file format: UTF-8 text, one ``city<TAB>ST`` per line, lowercase
city, uppercase 2-letter state or territory code. Blank lines and ``#``
comments are allowed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import LoadError

# 50 states + DC + inhabited territories. Keys are lowercase full names.
STATE_NAMES: dict[str, str] = {
    "alabama": "AL", "alaska": "AK", "arizona": "AZ", "arkansas": "AR",
    "california": "CA", "colorado": "CO", "connecticut": "CT", "delaware": "DE",
    "florida": "FL", "georgia": "GA", "hawaii": "HI", "idaho": "ID",
    "illinois": "IL", "indiana": "IN", "iowa": "IA", "kansas": "KS",
    "kentucky": "KY", "louisiana": "LA", "maine": "ME", "maryland": "MD",
    "massachusetts": "MA", "michigan": "MI", "minnesota": "MN",
    "mississippi": "MS", "missouri": "MO", "montana": "MT", "nebraska": "NE",
    "nevada": "NV", "new hampshire": "NH", "new jersey": "NJ",
    "new mexico": "NM", "new york": "NY", "north carolina": "NC",
    "north dakota": "ND", "ohio": "OH", "oklahoma": "OK", "oregon": "OR",
    "pennsylvania": "PA", "rhode island": "RI", "south carolina": "SC",
    "south dakota": "SD", "tennessee": "TN", "texas": "TX", "utah": "UT",
    "vermont": "VT", "virginia": "VA", "washington": "WA",
    "west virginia": "WV", "wisconsin": "WI", "wyoming": "WY",
    "district of columbia": "DC", "puerto rico": "PR", "guam": "GU",
    "american samoa": "AS", "northern mariana islands": "MP",
    "us virgin islands": "VI", "u.s. virgin islands": "VI",
}

STATE_CODES = frozenset(STATE_NAMES.values())


@dataclass(frozen=True, slots=True)
class CityState:
    """A normalized city plus 2-letter state/territory code."""

    city: str
    state: str


def normalize_state(token: str) -> str | None:
    """Map a free-text state token to its 2-letter code, or None."""
    cleaned = token.strip().replace(".", "").lower()
    if not cleaned:
        return None
    if len(cleaned) == 2:
        code = cleaned.upper()
        return code if code in STATE_CODES else None
    cleaned = " ".join(cleaned.split())
    return STATE_NAMES.get(cleaned)


def parse_location(location_raw: str, gazetteer: frozenset[CityState] | set[CityState]) -> CityState | None:
    """Match a free-text location against the gazetteer.

    Normalization: trim, lowercase and whitespace-collapse the city, expand
    or contract the state to its 2-letter code, tolerate a missing space
    after the comma. Non-matches return None, never an error.
    """
    text = location_raw.strip()
    comma = text.rfind(",")
    if comma < 0:
        return None
    state = normalize_state(text[comma + 1:])
    if state is None:
        return None
    city = " ".join(text[:comma].lower().split())
    if not city:
        return None
    candidate = CityState(city=city, state=state)
    return candidate if candidate in gazetteer else None


def load_gazetteer(path: str | Path) -> frozenset[CityState]:
    """Load a gazetteer file. Malformed lines raise LoadError with the row."""
    entries = set()
    with open(path, "r", encoding="utf-8") as handle:
        for row, line in enumerate(handle, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) != 2:
                raise LoadError("expected 'city<TAB>ST'", row=row)
            city, code = parts[0].strip(), parts[1].strip()
            if not city or city != city.lower():
                raise LoadError(f"city must be lowercase, got {city!r}", row=row)
            if code not in STATE_CODES:
                raise LoadError(f"unknown state code {code!r}", row=row)
            entries.add(CityState(city=city, state=code))
    if not entries:
        raise LoadError(f"gazetteer {path} contains no entries")
    return frozenset(entries)
