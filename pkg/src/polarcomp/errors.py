"""Exception types shared across the package."""


class ConfigurationError(Exception):
    """A form or space cannot be built as requested.

    Raised for malformed descriptors, reducible moduli, degenerate forms and
    spaces whose rank is below the supported minimum.
    """


class HorizonRefusal(Exception):
    """The requested horizon is rejected.

    Either it is not usable at all (equals the whole point set, lies under no
    candidate hyperplane) or it falls into a case that is deliberately out of
    scope, such as reconstruction over a hyperplane horizon.
    """


class LemmaFalsified(Exception):
    """A search that the verified theory guarantees to succeed came up empty.

    Carriers of this exception are never swallowed: the verification layer
    converts them into failure reports with the offending input attached.
    """


class IntegrityError(Exception):
    """An internal cross-check failed while assembling derived data."""
