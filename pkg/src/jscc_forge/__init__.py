"""
jscc-forge - Source-Channel Rate Toolkit

Decides achievability of source-channel rates for lossless transmission of
correlated sources over multiuser channels with receiver side information,
and checks the decisions by Monte Carlo simulation of the coding schemes.
"""

from .version import __version__
