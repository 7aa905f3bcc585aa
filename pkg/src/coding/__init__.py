"""Finite-field arithmetic and the Reed-Solomon outer codec."""
