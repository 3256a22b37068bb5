"""Exception hierarchy shared by all dbnslab modules.

Everything derives from DbnsError so callers (notably the CLI) can treat
any library failure as a usage/limit problem with a single except clause.
"""


class DbnsError(Exception):
    """Base class for all dbnslab errors."""


class InvalidBase(DbnsError):
    """A base is missing or smaller than 2."""


class InvalidDigit(DbnsError):
    """A digit is missing or smaller than 1."""


class NotCoprime(DbnsError):
    """Two bases share a common factor."""


class Overflow(DbnsError):
    """A value left the 62-bit machine range [0, 2^62)."""


class DuplicateTerm(DbnsError):
    """Two terms of a representation share the same value."""


class Unrepresentable(DbnsError):
    """No sum of terms reaches the requested value (digit set without 1)."""


class CapExceeded(DbnsError):
    """Requested n is outside the configured cap."""


class OutOfRange(DbnsError):
    """Index m lies outside the table it is queried against."""


class FieldOverflow(DbnsError):
    """A value does not fit its fixed-width bit field."""


class Truncated(DbnsError):
    """Bit input ends before the announced number of fields."""


class TrailingBits(DbnsError):
    """Bit input continues past the announced number of fields."""


class BadMagic(DbnsError):
    """Cache file does not start with the expected magic bytes."""


class BadVersion(DbnsError):
    """Cache file carries an unsupported format version."""


class Corrupt(DbnsError):
    """Cache file content is inconsistent with its header."""
