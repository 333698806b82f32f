"""Faltings-Serre test sets for p-adic representations with residually unipotent image."""

__version__ = "0.1.0"
