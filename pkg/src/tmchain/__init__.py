"""Turing machines, their non-erasing and Wang B compilations, and a
simulator for Hasenjaeger's small universal machine."""

__version__ = "0.1.0"
