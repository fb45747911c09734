"""hodgenorm: exact asymptotic Hodge-theory computations with numeric probes."""

__version__ = "0.1.0"
