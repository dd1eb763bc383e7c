"""Unlabeled multi-robot motion planning for unit discs in a simple polygon."""
__version__ = "0.1.0"
