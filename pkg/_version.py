"""
Version information for wasserstein_eigendist package.
This file is generated during the build process.
"""

__version__ = "1.0.0"
