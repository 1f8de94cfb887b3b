"""
Error types shared by all modules
"""


class ValidationError(ValueError):
    """Malformed or infeasible input"""


class UnsupportedError(ValidationError):
    """Inputs outside the preconditions of an operation"""


class BoundExceededError(RuntimeError):
    """A configured computational bound was exceeded"""

    def __init__(self, message: str, setting: str = None):
        if setting:
            message = f"{message} (raise Config.{setting} to allow it)"
        super().__init__(message)
        self.setting = setting
