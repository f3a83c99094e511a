"""Link-level analysis and simulation of efficient incremental relaying."""

__version__ = "0.1.0"
