"""Local marking of ququad-ququad maximally entangled states."""

__version__ = "0.1.0"
