"""Decision procedures for familial and lax familial functors on finite categorical data."""

__version__ = "0.1.0"
