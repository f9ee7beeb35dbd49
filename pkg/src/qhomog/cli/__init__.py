"""Command-line front end: runs, sweeps, figures and verification."""

from .main import main

__all__ = ["main"]
