"""MAC address canonicalization.

BSSIDs and Bluetooth hardware addresses arrive in colon, hyphen, or bare-hex
form; everything downstream (scan diffs, searches, correlation) compares the
canonical uppercase colon-separated text form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_HEX12 = re.compile(r"^[0-9A-F]{12}$")
_HEX6 = re.compile(r"^[0-9A-F]{6}$")


def _strip_separators(raw: str) -> str:
    return raw.strip().replace(":", "").replace("-", "").upper()


@dataclass(frozen=True, order=True)
class MacAddress:
    """Six octets in canonical form ``AA:BB:CC:DD:EE:FF``."""

    text: str

    @classmethod
    def parse(cls, raw: str) -> "MacAddress":
        """Parse colon/hyphen/bare-hex forms; raises ValueError otherwise."""
        digits = _strip_separators(raw)
        if not _HEX12.match(digits):
            raise ValueError(f"not a MAC address: {raw!r}")
        return cls(":".join(digits[i : i + 2] for i in range(0, 12, 2)))

    @property
    def oui(self) -> str:
        """Vendor prefix: the first three octets, canonical form."""
        return self.text[:8]

    def __str__(self) -> str:
        return self.text


def parse_oui_prefix(raw: str) -> str:
    """Canonicalize a 3-octet vendor prefix, e.g. ``aa-bb-cc`` -> ``AA:BB:CC``."""
    digits = _strip_separators(raw)
    if not _HEX6.match(digits):
        raise ValueError(f"not an OUI prefix: {raw!r}")
    return ":".join(digits[i : i + 2] for i in range(0, 6, 2))
