"""Certificates for Chatelet surfaces that lose weak approximation over a quadratic extension."""

__version__ = "1.0.0"
