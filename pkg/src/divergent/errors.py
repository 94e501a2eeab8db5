"""Exception types shared across the package."""


class CapabilityError(Exception):
    """A sequence or set lacks a capability an operation needs (a modulus, a gap bound, ...)."""

    def __init__(self, capability: str, detail: str = ""):
        self.capability = capability
        msg = f"missing capability {capability!r}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class MonotonicityError(ValueError):
    """A function or sequence assumed monotone was caught decreasing."""

    def __init__(self, index: int, detail: str = ""):
        self.index = index
        super().__init__(f"monotonicity violated at index {index}" + (f": {detail}" if detail else ""))


class OracleContractError(RuntimeError):
    """A dense-open oracle returned an interval that breaks nesting or membership."""

    def __init__(self, stage: int, detail: str):
        self.stage = stage
        super().__init__(f"oracle contract breach at stage {stage}: {detail}")


class VerificationError(RuntimeError):
    """An independent re-check of a certificate failed."""
