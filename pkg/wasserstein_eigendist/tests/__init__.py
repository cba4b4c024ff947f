"""
Tests for wasserstein_eigendist.
"""
