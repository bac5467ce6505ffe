"""Exception hierarchy shared across the toolchain.

CLI mapping: CorsicaError and subclasses exit with status 2 (data error);
argparse usage problems exit with status 1.
"""


class CorsicaError(Exception):
    """Base class for all toolchain errors."""


class IngestError(CorsicaError):
    """A corpus source could not be read or walked."""


class WebrootNotFoundError(IngestError):
    """No webroot candidate exists inside an unpacked firmware tree."""


class CrawlError(CorsicaError):
    """The crawl entry point could not be fetched."""


class SchemaError(CorsicaError):
    """A persisted artifact has the wrong schema version or violates its schema."""


class EmptyCorpusError(CorsicaError):
    """An operation that needs at least one service was given none."""


class PlanError(CorsicaError):
    """A probe plan could not be emitted or parsed."""
