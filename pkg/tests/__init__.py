"""
hsmetric test suite.

This package contains tests for the hsmetric project.
"""
