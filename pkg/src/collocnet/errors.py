class UndefinedProperty(ValueError):
    """A measurement that has no value on the given input.

    ``reason`` is a short machine-readable code that ends up in the
    ``<field>_reason`` columns of the CSV outputs.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)
