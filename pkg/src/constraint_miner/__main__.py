"""Main entry point for the constraint miner."""

from .cli.main import cli

if __name__ == "__main__":
    cli()
