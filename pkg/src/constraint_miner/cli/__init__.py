"""Command line interface for the constraint miner."""

from .main import cli

__all__ = ["cli"]
