class VFSplitError(Exception):
    """Base class for all package errors."""


class InputError(VFSplitError):
    """Malformed input: schema violations, unknown names, bad words."""


class HypothesisViolation(VFSplitError):
    """A precondition of a construction does not hold for the given input."""


class BudgetExceeded(VFSplitError):
    """A bounded search ran out of budget; the answer is unknown.

    `stage` names the computation that gave up so callers can report it.
    """

    def __init__(self, stage: str, detail: str = "", budget=None):
        self.stage = stage
        self.detail = detail
        self.budget = budget
        msg = f"budget exhausted in {stage}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
