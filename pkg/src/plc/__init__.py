"""Plausibility, knowledge and time: spaces, model checking and a test lab."""
__version__ = "0.1.0"
