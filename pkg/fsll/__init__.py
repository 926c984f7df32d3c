"""
Full-span log-linear models over small discrete multivariate systems.
"""

from fsll.core.config import settings

__version__ = settings.VERSION
