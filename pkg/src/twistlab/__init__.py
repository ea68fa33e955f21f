"""twistlab: twisted Dolbeault operators, BKN identities and vanishing bounds, numerically."""

__version__ = "0.1.0"
