"""Exact cohomology of formal-module stabilizer Lie algebras and their Chevalley-Eilenberg DGAs."""

__version__ = "0.1.0"
