"""qpmut: exact mutation of seeds, quivers with potentials and decorated
representations, with the invariants that tie them together."""
__version__ = "0.1.0"
