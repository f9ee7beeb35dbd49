"""Markovian and non-Markovian qubit collisional models of quantum homogenization."""

__version__ = "0.1.0"
