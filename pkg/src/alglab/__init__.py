"""Sectional nonassociativity of metrized algebras: exact structure tensors, curvature, and search tools."""

__version__ = "0.1.0"
