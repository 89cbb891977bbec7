class ContractError(ValueError):
    """An operation was called with arguments outside its precondition."""


class ConfigError(ValueError):
    """A run or experiment configuration is invalid."""


class InstanceFormatError(ValueError):
    """An instance document is malformed; ``key`` names the offending field."""

    def __init__(self, key: str, msg: str) -> None:
        super().__init__(f"{key}: {msg}")
        self.key = key
