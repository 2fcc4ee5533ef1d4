"""Independent-set experimental designs for randomized experiments under network interference."""

__version__ = "0.1.0"
