"""Exception hierarchy shared across the package."""


class CodePsroError(Exception):
    """Base class for all package errors."""


# --- game engine ---

class InvalidStateError(CodePsroError):
    """An operation was applied to a game state that does not admit it."""


class IllegalActionError(CodePsroError):
    """A policy tried to play an action that is not legal in the state."""


class MatchError(CodePsroError):
    """A policy failed mid-match in strict mode.

    Carries the offending side (0 or 1, match-player index), the round index
    at which the failure occurred, and the underlying cause.
    """

    def __init__(self, side, round_index, reason, cause=None):
        super().__init__(
            f"policy on side {side} failed at round {round_index}: {reason}"
        )
        self.side = side
        self.round_index = round_index
        self.reason = reason
        self.cause = cause


# --- policy runtime ---

class PolicyRuntimeError(CodePsroError):
    """Base for errors raised by the code-policy executor."""


class SpawnError(PolicyRuntimeError):
    """The policy host process could not be launched."""


class HandshakeTimeout(PolicyRuntimeError):
    """The host did not acknowledge INIT within the handshake timeout."""


class PolicyLoadError(PolicyRuntimeError):
    """The host (or in-process loader) rejected the policy source.

    Typically a syntax error, an import failure, or a missing agent class.
    Carries any captured host stderr.
    """

    def __init__(self, message, stderr=""):
        super().__init__(message)
        self.stderr = stderr


class PolicyStepError(PolicyRuntimeError):
    """A live policy failed to produce a usable action for one request.

    ``kind`` is one of ``timeout``, ``malformed``, ``error`` (host-reported
    agent exception) or ``crashed`` (host process died).
    """

    def __init__(self, kind, message, stderr=""):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.stderr = stderr


# --- meta-game / solver ---

class SolverError(CodePsroError):
    """The meta-game solver could not certify an equilibrium."""


class MissingInfosetError(CodePsroError):
    """A strategy profile has no entry for a reachable information set."""

    def __init__(self, key):
        super().__init__(f"no strategy stored for infoset {key!r}")
        self.key = key


# --- oracle ---

class BackendError(CodePsroError):
    """The generation backend failed (network error, missing fixture, ...)."""


class MalformedGenerationError(CodePsroError):
    """No usable program could be extracted from a completion."""


class PatchParseError(CodePsroError):
    """A completion did not contain any well-formed SEARCH/REPLACE block."""


class PatchApplyError(CodePsroError):
    """A SEARCH block did not match the program text.

    ``block_index`` is the zero-based index of the failing block; the input
    program is left untouched.
    """

    def __init__(self, block_index, message):
        super().__init__(f"block {block_index}: {message}")
        self.block_index = block_index


class PromptTemplateError(CodePsroError):
    """A prompt could not be rendered because required pieces are missing."""

    def __init__(self, missing):
        super().__init__(f"unresolved prompt inputs: {', '.join(missing)}")
        self.missing = list(missing)


class OracleFailure(CodePsroError):
    """The oracle exhausted its budgets without producing a valid policy."""
