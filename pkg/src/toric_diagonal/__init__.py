"""toric_diagonal: exact verification engine for the toric code diagonal."""

__version__ = "1.0.0"
