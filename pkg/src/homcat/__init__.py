"""homcat: exact homological algebra for finite K-linear categories."""

from .exactla import Field, Mat

__all__ = ["Field", "Mat"]
