from __future__ import annotations

from enum import Enum, IntEnum, auto


class Fragment(Enum):
    WFO = "wFO"
    WSO = "wSO"
    WESO = "wESO"
    WLFP = "wLFP"
    WPFP = "wPFP"
    WDTC = "wDTC"
    WPFP_SOQ = "wPFP+SOq"

    @classmethod
    def parse(cls, text: str) -> "Fragment":
        for fragment in cls:
            if fragment.value.lower() == text.strip().lower():
                return fragment
        raise ValueError(f"Unknown fragment: {text}")


class FixpointKind(Enum):
    LFP = "lfp"
    GFP = "gfp"
    IFP = "ifp"
    PFP = "pfp"


class ClosureKind(Enum):
    TC = "tc"
    DTC = "dtc"


class Move(IntEnum):
    LEFT = -1
    STAY = 0
    RIGHT = 1


class CheckStatus(Enum):
    PASS = auto()
    FAIL = auto()


__all__ = ["CheckStatus", "ClosureKind", "FixpointKind", "Fragment", "Move"]
