"""Exception types shared across the engine."""


class StreetNavError(Exception):
    """Base class for all engine errors."""


class FixtureError(StreetNavError):
    """Base class for world-fixture problems."""


class FixtureParseError(FixtureError):
    """Malformed fixture document; message carries the offending path."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


class FixtureIntegrityError(FixtureError):
    """Dangling or duplicate id reference; message names the id."""


class NotFoundError(StreetNavError):
    """Lookup failed (empty world, unknown id, unmatched search query)."""


class NoImageryError(StreetNavError):
    """A resolved location has no panorama within the allowed radius."""


class NoMoveError(StreetNavError):
    """No panorama is reachable for the requested movement."""


class ProviderError(StreetNavError):
    """A model/speech provider call failed."""


class SchemaError(ProviderError):
    """Provider returned a payload that does not match the expected schema."""
