"""HTTP service exposing the annotation toolkit."""

from .app import create_app

__all__ = ["create_app"]
