"""helmsim: 3-DoF ship maneuvering simulator with trajectory measures and a voyage replay harness."""

__version__ = "1.0.0"
