"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class BasisMismatch(InvalidArgument):
    pass


class InhomogeneousMap(InvalidArgument):
    pass


class HypothesisViolation(Exception):
    """A theorem hypothesis failed on concrete data.

    ``condition`` names the failed hypothesis; ``witness`` is a small
    JSON-friendly description of where it failed (basis tuple, value).
    """

    def __init__(self, condition, witness=None, message=None):
        self.condition = condition
        self.witness = witness
        text = message or f"hypothesis violated: {condition}"
        if witness is not None:
            text += f" (witness: {witness})"
        super().__init__(text)


class MissingUnit(HypothesisViolation):
    def __init__(self, message="algebra has no unit"):
        super().__init__("unital", None, message)


class NotFirstOrder(HypothesisViolation):
    def __init__(self, witness):
        super().__init__("order<=1", witness)


class UnsupportedInput(InvalidArgument):
    pass


class MalformedInput(ValueError):
    """Malformed algebra file (maps to CLI exit code 2)."""
