"""
lplab - lp harmonic analysis lab on finitely generated groups

Cayley balls, group-ring arithmetic, discrete p-Dirichlet problems,
truncated cochain operators and translation-invariance experiments.
"""

__version__ = '0.1.0'
