"""Isomorphism of cyclic Haar graphs."""
