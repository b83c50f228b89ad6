"""Exception types shared across the package."""


class CommunityError(Exception):
    """Base class for every error this package raises.

    ``offenders`` holds the complete set of violating elements or pairs
    when the error has specific culprits, sorted for stable messages.
    """

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


class KindMismatch(CommunityError):
    """An entity of the wrong kind appeared where the other kind is required."""


class DanglingLink(CommunityError):
    """A link endpoint is not a known person."""


class DanglingMembership(CommunityError):
    """A membership source or target refers to an unknown entity."""


class DanglingReference(CommunityError):
    """An edit refers to an entity that is not part of the state."""


class DuplicateElement(CommunityError):
    """An edit would add an element that is already present."""


class UnknownElement(CommunityError):
    """An edit or query names an element that is not present."""


class UnknownPerson(UnknownElement):
    """A query names a person outside the state."""


class UnknownCommunity(UnknownElement):
    """A query names a community outside the state."""


class EmptyCommunity(CommunityError):
    """An operation that needs at least one person was given none."""


class DocumentError(CommunityError):
    """Base class for document and import errors."""


class ParseError(DocumentError):
    """Input bytes are not well-formed for the requested format."""

    def __init__(self, message, offenders=(), line=None):
        super().__init__(message, offenders)
        self.line = line


class EmptyInput(ParseError):
    """The input contained no usable rows."""


class SchemaError(DocumentError):
    """A well-formed document does not match the expected field layout."""


class BuildError(DocumentError):
    """A document decoded cleanly but does not assemble into a valid state."""
