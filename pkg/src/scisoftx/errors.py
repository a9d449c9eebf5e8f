"""Exception taxonomy shared by all scisoftx modules."""


class ScisoftxError(Exception):
    """Base class for every error raised by this package."""


# --- document extraction ---

class MalformedDocument(ScisoftxError):
    """The input bytes are not a parseable PDF."""


class EncryptedDocument(ScisoftxError):
    """The PDF is password protected; extraction is refused."""


# --- code model ---

class NotADirectory(ScisoftxError):
    """The index root does not exist or is not a directory."""


class NoProfilesSelected(ScisoftxError):
    """build_index was called with an empty or unknown profile set."""


class UnknownEntity(ScisoftxError):
    """An entity id is not present in the index."""


# --- link store ---

class DuplicateLink(ScisoftxError):
    """A link with the same location, target and origin already exists."""


class InvalidLabel(ScisoftxError):
    """A link label is outside the closed vocabulary."""


class DigestMismatch(ScisoftxError):
    """Two link sets (or a link set and a session) refer to different inputs."""


class SchemaViolation(ScisoftxError):
    """A link file does not conform to the interchange schema."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedVersion(ScisoftxError):
    """The link file declares a schema or vocabulary version we cannot read."""


# --- graphs ---

class UnresolvableTarget(ScisoftxError):
    """A link target cannot be located in the code index."""
