"""Error taxonomy shared by the whole package.

Three classes of failure, matched one-to-one by the CLI exit codes:

* ``InputError`` (and subclasses): the request itself is bad, either
  malformed data or a violated mathematical precondition.  CLI exit 1.
* ``ResourceCapError``: a configured cap (sequence length, enumeration
  budget, ...) was hit before an answer was found.  Carries the cap name
  so callers can report which knob to raise.  CLI exit 2.
* verification failures are not exceptions: verifiers return a report with
  a false verdict and the CLI exits 3.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed input or violated precondition."""


class GroupMismatchError(InputError):
    """Elements of different groups were combined."""


class HypothesisError(InputError):
    """A rule was invoked without the flags it requires.

    The message names the first missing hypothesis.
    """


class ResourceCapError(RuntimeError):
    """A configured resource cap was exceeded.

    Attributes:
        cap_name: which cap was hit (e.g. ``"max_len"``, ``"budget"``).
        cap_value: the configured limit.
    """

    def __init__(self, cap_name: str, cap_value: int, message: str) -> None:
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value
